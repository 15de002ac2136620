//! SVG 1.1 figures in the Poincaré disk.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use clap::ValueEnum;
use geocurrents::currents::{d_eta_with, Current, CurrentError, LiftSearch};
use geocurrents::group::GroupPresentation;
use geocurrents::hyperbolic::{DiskPoint, Geodesic, Segment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIZE: f64 = 512.0;
const SCALE: f64 = 240.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Axes of the atoms' representatives.
    Axes,
    /// Lifts of the atoms passing near the origin.
    Lifts,
    /// Sample points of the ball `d_η(o, x) ≤ R`.
    Ball,
}

fn screen(z: DiskPoint) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * z.re(), SIZE / 2.0 - SCALE * z.im())
}

/// Center and radius, in disk units, of the circle carrying a geodesic, or
/// `None` for a diameter.
fn carrier(g: &Geodesic) -> Option<((f64, f64), f64)> {
    let (u, v) = g.endpoints();
    let delta = u.separation(v);
    if (PI - delta).abs() < 1e-9 {
        return None;
    }
    let mid = u.on_circle() + v.on_circle();
    let dir = mid / mid.norm();
    let dist = 1.0 / (delta / 2.0).cos();
    Some(((dir.re * dist, dir.im * dist), (delta / 2.0).tan()))
}

/// Path command drawing the part of `g` between two of its points.
fn arc(g: &Geodesic, from: (f64, f64), to: (f64, f64)) -> String {
    let (sx, sy) = (SIZE / 2.0 + SCALE * from.0, SIZE / 2.0 - SCALE * from.1);
    let (ex, ey) = (SIZE / 2.0 + SCALE * to.0, SIZE / 2.0 - SCALE * to.1);
    match carrier(g) {
        None => format!("M {sx:.3} {sy:.3} L {ex:.3} {ey:.3}"),
        Some(((cx, cy), r)) => {
            let (cx, cy) = (SIZE / 2.0 + SCALE * cx, SIZE / 2.0 - SCALE * cy);
            let cross = (sx - cx) * (ey - cy) - (sy - cy) * (ex - cx);
            let sweep = u8::from(cross > 0.0);
            format!("M {sx:.3} {sy:.3} A {rr:.3} {rr:.3} 0 0 {sweep} {ex:.3} {ey:.3}", rr = r * SCALE)
        }
    }
}

fn full_arc(g: &Geodesic) -> String {
    let (u, v) = g.endpoints();
    let (a, b) = (u.on_circle(), v.on_circle());
    arc(g, (a.re, a.im), (b.re, b.im))
}

fn document(title: &str, seed: u64, body: &str, p: &GroupPresentation) -> String {
    let mut s = String::new();
    let c = SIZE / 2.0;
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, "<title>{title}</title>").unwrap();
    writeln!(s, "<desc>seed {seed}</desc>").unwrap();
    writeln!(s, r##"<circle cx="{c}" cy="{c}" r="{SCALE}" fill="none" stroke="#000000" stroke-width="1"/>"##).unwrap();
    let vs = p.vertices();
    let mut outline = String::new();
    for k in 0..vs.len() {
        let (x, y) = (vs[k], vs[(k + 1) % vs.len()]);
        if let Ok(side) = Segment::closed(x, y).and_then(|s| s.chord()) {
            outline.push_str(&arc(&side, (x.re(), x.im()), (y.re(), y.im())));
            outline.push(' ');
        }
    }
    writeln!(s, r##"<path class="octagon" d="{}" fill="none" stroke="#888888" stroke-width="0.8"/>"##, outline.trim_end()).unwrap();
    s.push_str(body);
    s.push_str("</svg>\n");
    s
}

fn geodesic_layer(groups: &[(String, f64, Vec<Geodesic>)]) -> String {
    let mut body = String::new();
    for (k, (label, weight, geodesics)) in groups.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let width = 1.0 + weight.ln_1p();
        writeln!(body, r#"<g class="atom" id="atom-{k}" stroke="{color}" stroke-width="{width:.3}" fill="none">"#).unwrap();
        writeln!(body, "<title>{label}</title>").unwrap();
        for g in geodesics {
            writeln!(body, r#"<path class="geodesic" d="{}"/>"#, full_arc(g)).unwrap();
        }
        body.push_str("</g>\n");
    }
    body
}

/// The axis of each atom's representative.
pub fn render_axes(eta: &Current, seed: u64, p: &GroupPresentation) -> String {
    let groups: Vec<_> = eta.atoms().iter().map(|a| (a.class.to_string(), a.weight, vec![a.class.axis().clone()])).collect();
    document("axes", seed, &geodesic_layer(&groups), p)
}

/// Every lift of every atom within `radius` of the origin.
pub fn render_lifts(eta: &Current, radius: f64, seed: u64, p: &GroupPresentation) -> String {
    let groups: Vec<_> = eta.atoms().iter().map(|a| (a.class.to_string(), a.weight, a.class.lifts_within(radius, p))).collect();
    document(&format!("lifts within {radius}"), seed, &geodesic_layer(&groups), p)
}

/// Points drawn uniformly from the Euclidean disk of radius `0.98`.
pub fn ball_samples(seed: u64, n: usize) -> Vec<DiskPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (r, t) = (0.98 * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * TAU);
            DiskPoint::new(r * t.cos(), r * t.sin()).expect("inside the disk")
        })
        .collect()
}

/// Which of `points` satisfy `d_η(center, x) ≤ r`.
pub fn ball_membership(
    eta: &Current,
    center: DiskPoint,
    points: &[DiskPoint],
    r: f64,
    p: &GroupPresentation,
    search: &LiftSearch,
) -> Result<Vec<bool>, CurrentError> {
    points.iter().map(|&x| Ok(d_eta_with(eta, center, x, p, search)? <= r)).collect()
}

/// Ball of radius `r` about the origin, sampled at `n` seeded points.
pub fn render_ball(
    eta: &Current,
    r: f64,
    n: usize,
    seed: u64,
    p: &GroupPresentation,
    search: &LiftSearch,
) -> Result<String, CurrentError> {
    let points = ball_samples(seed, n);
    let inside = ball_membership(eta, DiskPoint::ORIGIN, &points, r, p, search)?;
    let mut body = String::new();
    for (x, inside) in points.iter().zip(inside) {
        let (sx, sy) = screen(*x);
        let (class, color) = if inside { ("in", "#c0392b") } else { ("out", "#c8c8c8") };
        writeln!(body, r#"<circle class="{class}" cx="{sx:.3}" cy="{sy:.3}" r="1.6" fill="{color}"/>"#).unwrap();
    }
    Ok(document(&format!("ball d_eta(o, x) <= {r}"), seed, &body, p))
}
