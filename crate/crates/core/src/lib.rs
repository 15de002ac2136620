pub mod currents;
pub mod exponents;
pub mod group;
pub mod hyperbolic;
