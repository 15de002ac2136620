use std::path::Path;

use clap::ValueEnum;
use geocurrents::currents::{
    d_eta_with, filling_probe_with, intersection_with, lifts_crossing_current, parse_current, Current, ProbeConfig, ProbeOutcome,
    Witness,
};
use geocurrents::exponents::{
    check_normalization, class_series_over, estimate_exponent, orbit_series_over, verify_fiber_bound_over, verify_injection_over,
    verify_ping_pong_over, ExponentError, NormalizationCheck, PingPong,
};
use geocurrents::group::{enumerate_conjugacy_classes, enumerate_elements, load_or_enumerate, standard_genus2, ConjClass, GroupElement, GroupPresentation, Word};
use geocurrents::hyperbolic::{DiskPoint, Segment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::render::{render_axes, render_ball, render_lifts, Figure};
use crate::{CliError, Command, RunConfig};

/// Relative gap `|δ − δ^g| / max(δ, δ^g)` accepted as agreement.
pub const THEOREM_TOLERANCE: f64 = 0.3;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_BALL_SAMPLES: usize = 400;
pub const DEFAULT_BALL_RADIUS: f64 = 2.0;

const LIFT_MATCH: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Listing {
    Elements,
    Classes,
}

/// Everything a subcommand produced, and the reason it failed if its checks
/// did not pass.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub output: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, failure: None }
    }
}

fn push_line(out: &mut String, value: &impl Serialize) {
    out.push_str(&serde_json::to_string(value).expect("records serialize"));
    out.push('\n');
}

fn load_current(path: &Path, p: &GroupPresentation) -> Result<Current, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_current(&text, p).map_err(|e| match CliError::from(e) {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn parse_point(text: &str) -> Result<DiskPoint, CliError> {
    let bad = || CliError::Usage(format!("expected a disk point `re,im`, got {text:?}"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let (re, im): (f64, f64) = (re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?);
    DiskPoint::new(re, im).map_err(|e| CliError::Usage(e.to_string()))
}

fn elements(cfg: &RunConfig, p: &GroupPresentation, depth: usize) -> Result<Vec<GroupElement>, CliError> {
    match &cfg.cache {
        Some(path) => Ok(load_or_enumerate(path, p, depth)?),
        None => Ok(enumerate_elements(p, depth)),
    }
}

fn header(command: &str, cfg: &RunConfig, depth: Option<usize>, eta: Option<&Current>) -> Value {
    json!({
        "record": "header",
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "depth": depth,
        "tolerances": cfg.tolerances,
        "current": eta.map(Current::to_text),
    })
}

pub fn dispatch(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = standard_genus2()?;
    match command {
        Command::Intersect { current, word } => {
            let eta = load_current(current, &p)?;
            let w: Word = word.parse()?;
            let c = ConjClass::from_word(&w, &p)?;
            Ok(Outcome::ok(format!("{}\n", intersection_with(&eta, &c, &p, &cfg.search())?)))
        }
        Command::Dist { current, x, y } => {
            let eta = load_current(current, &p)?;
            let (x, y) = (parse_point(x)?, parse_point(y)?);
            Ok(Outcome::ok(format!("{}\n", d_eta_with(&eta, x, y, &p, &cfg.search())?)))
        }
        Command::Exponent { current } => exponent(&load_current(current, &p)?, cfg, &p),
        Command::Verify { current, .. } => verify(&load_current(current, &p)?, cfg, &p),
        Command::Render { current, what, .. } => {
            let eta = load_current(current, &p)?;
            let svg = match what {
                Figure::Axes => render_axes(&eta, cfg.seed, &p),
                Figure::Lifts => render_lifts(&eta, cfg.radius.unwrap_or(p.diameter()), cfg.seed, &p),
                Figure::Ball => render_ball(
                    &eta,
                    cfg.radius.unwrap_or(DEFAULT_BALL_RADIUS),
                    cfg.samples.unwrap_or(DEFAULT_BALL_SAMPLES),
                    cfg.seed,
                    &p,
                    &cfg.search(),
                )?,
            };
            Ok(Outcome::ok(svg))
        }
        Command::Enumerate { what } => enumerate(*what, cfg, &p),
    }
}

fn exponent(eta: &Current, cfg: &RunConfig, p: &GroupPresentation) -> Result<Outcome, CliError> {
    let depth = cfg.depth_for("exponent");
    let search = cfg.search();
    let elements = elements(cfg, p, depth)?;
    let classes = enumerate_conjugacy_classes(p, depth);
    let orbit = orbit_series_over(eta, &elements, depth, p, &search)?;
    let class = class_series_over(eta, &classes, depth, p, &search)?;

    let mut out = String::new();
    push_line(&mut out, &header("exponent", cfg, Some(depth), Some(eta)));
    let mut bytes = Vec::new();
    orbit.write_json_lines(&mut bytes)?;
    class.write_json_lines(&mut bytes)?;
    let eo = estimate_exponent(&orbit)?;
    let ec = estimate_exponent(&class)?;
    eo.write_json_line(&mut bytes)?;
    ec.write_json_line(&mut bytes)?;
    out.push_str(std::str::from_utf8(&bytes).expect("JSON is UTF-8"));

    let gap = (eo.slope - ec.slope).abs();
    let scale = eo.slope.max(ec.slope);
    let previous_gap = match (estimate_exponent(&orbit.restricted(depth - 1)), estimate_exponent(&class.restricted(depth - 1))) {
        (Ok(a), Ok(b)) => Some((a.slope - b.slope).abs()),
        _ => None,
    };
    push_line(
        &mut out,
        &json!({
            "record": "theorem",
            "orbit_slope": eo.slope,
            "class_slope": ec.slope,
            "gap": gap,
            "relative_gap": if scale > 0.0 { gap / scale } else { 0.0 },
            "tolerance": THEOREM_TOLERANCE,
            "within_tolerance": gap <= THEOREM_TOLERANCE * scale,
            "previous_gap": previous_gap,
            "gap_grows": previous_gap.map(|g| gap > g),
        }),
    );
    Ok(Outcome::ok(out))
}

struct Report {
    out: String,
    failed: Vec<&'static str>,
    checks: usize,
}

impl Report {
    fn check(&mut self, name: &'static str, passed: bool, detail: Value) {
        self.checks += 1;
        if !passed {
            self.failed.push(name);
        }
        push_line(&mut self.out, &json!({ "record": "check", "name": name, "passed": passed, "detail": detail }));
    }

    /// Records a library verification, turning an assertion failure into a
    /// failed check and passing every other error on.
    fn verified<T: Serialize>(&mut self, name: &'static str, result: Result<T, ExponentError>) -> Result<(), CliError> {
        match result {
            Ok(report) => self.check(name, true, serde_json::to_value(report).expect("reports serialize")),
            Err(ExponentError::AssertionFailure { r, detail, .. }) => self.check(name, false, json!({ "r": r, "detail": detail })),
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }
}

/// A point within hyperbolic distance 3 of the origin.
fn random_point(rng: &mut ChaCha8Rng) -> DiskPoint {
    DiskPoint::polar(3.0 * rng.gen::<f64>(), rng.gen::<f64>() * std::f64::consts::TAU).expect("inside the disk")
}

fn witness_value(w: &Witness) -> Value {
    match w {
        Witness::Class(c) => json!({ "class": c.to_string() }),
        Witness::Segment(s) => json!({ "segment": [[s.x.re(), s.x.im()], [s.y.re(), s.y.im()]] }),
    }
}

fn verify(eta: &Current, cfg: &RunConfig, p: &GroupPresentation) -> Result<Outcome, CliError> {
    let depth = cfg.depth_for("verify");
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let search = cfg.search();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let elements = elements(cfg, p, depth)?;
    let classes = enumerate_conjugacy_classes(p, depth);
    let mut report = Report { out: String::new(), failed: Vec::new(), checks: 0 };
    push_line(&mut report.out, &header("verify", cfg, Some(depth), Some(eta)));

    let probe = ProbeConfig { seed: rng.gen(), search, ..ProbeConfig::default() };
    match filling_probe_with(eta, depth, p, &probe)? {
        ProbeOutcome::PassedProbe { epsilon, segments } => {
            report.check("filling_probe", true, json!({ "epsilon": epsilon, "segments": segments }))
        }
        ProbeOutcome::FailedWitness(w) => report.check("filling_probe", false, json!({ "witness": witness_value(&w) })),
    }

    let orbit = orbit_series_over(eta, &elements, depth, p, &search)?;
    let class = class_series_over(eta, &classes, depth, p, &search)?;
    report.verified("injection", verify_injection_over(eta, &orbit, &class, p))?;
    report.verified("fiber_bound", verify_fiber_bound_over(eta, &classes, depth, p.diameter(), p, &search))?;

    let setup = PingPong::construct(p, p.diameter())?;
    let pp = verify_ping_pong_over(&setup, &elements, depth);
    let violations = pp.rows.last().map_or(0, |row| row.violations);
    report.check(
        "ping_pong_dichotomy",
        pp.passed(),
        json!({ "violations": violations, "first_violation": pp.first_violation, "r": setup.r.word.to_string(), "n": setup.n }),
    );
    report.check("ping_pong_half_bound", pp.rows.iter().all(|row| row.half_bound), serde_json::to_value(&pp.rows).expect("rows serialize"));

    let (mut applied, mut min_slack, mut failure) = (0, f64::INFINITY, None);
    for _ in 0..samples {
        let g = &elements[rng.gen_range(0..elements.len())];
        match check_normalization(eta, g, &setup, p, &search) {
            Ok(NormalizationCheck { intersection: Some(i), bound: Some(b), .. }) => {
                applied += 1;
                min_slack = min_slack.min(b - i);
            }
            Ok(_) => {}
            Err(ExponentError::AssertionFailure { detail, .. }) => {
                failure = Some(format!("{}: {detail}", g.word));
                break;
            }
            Err(ExponentError::NormalizationFailed { word, distance }) => {
                failure = Some(format!("{word}: normalized axis at distance {distance}"));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    report.check(
        "normalization_cost",
        failure.is_none(),
        json!({ "samples": samples, "applied": applied, "min_slack": (applied > 0).then_some(min_slack), "failure": failure }),
    );

    let mut asymmetric = 0;
    for _ in 0..samples {
        let (x, y) = (random_point(&mut rng), random_point(&mut rng));
        if d_eta_with(eta, x, y, p, &search)? != d_eta_with(eta, y, x, p, &search)? {
            asymmetric += 1;
        }
    }
    report.check("metric_symmetry", asymmetric == 0, json!({ "samples": samples, "violations": asymmetric }));

    let mut uncovered = 0;
    for _ in 0..samples {
        let (x, y, z) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
        let (Ok(xy), Ok(xz), Ok(zy)) = (Segment::closed(x, y), Segment::closed(x, z), Segment::closed(z, y)) else {
            continue;
        };
        let xy = lifts_crossing_current(eta, &xy, p, &search)?;
        let xz = lifts_crossing_current(eta, &xz, p, &search)?;
        let zy = lifts_crossing_current(eta, &zy, p, &search)?;
        if !xy.geodesics().all(|g| xz.contains(g, LIFT_MATCH) || zy.contains(g, LIFT_MATCH)) {
            uncovered += 1;
        }
    }
    report.check("triangle_inclusion", uncovered == 0, json!({ "samples": samples, "violations": uncovered }));

    let (mut above, mut off_axis) = (0, 0);
    for _ in 0..samples {
        let c = &classes[rng.gen_range(0..classes.len())];
        let m = c.representative().matrix;
        let i = intersection_with(eta, c, p, &search)?;
        let x = random_point(&mut rng);
        if i > d_eta_with(eta, m.apply(x), x, p, &search)? {
            above += 1;
        }
        let q = c.axis().point_at(rng.gen::<f64>() * 2.0 - 1.0);
        if (d_eta_with(eta, m.apply(q), q, p, &search)? - i).abs() > 1e-9 {
            off_axis += 1;
        }
    }
    report.check(
        "i_le_d",
        above == 0 && off_axis == 0,
        json!({ "samples": samples, "violations": above, "axis_mismatches": off_axis }),
    );

    let passed = report.failed.is_empty();
    push_line(&mut report.out, &json!({ "record": "summary", "checks": report.checks, "failed": report.failed, "passed": passed }));
    let failure = (!passed).then(|| format!("failed checks: {}", report.failed.join(", ")));
    Ok(Outcome { output: report.out, failure })
}

fn enumerate(what: Listing, cfg: &RunConfig, p: &GroupPresentation) -> Result<Outcome, CliError> {
    let depth = cfg.depth_for("enumerate");
    let mut out = String::new();
    push_line(&mut out, &header("enumerate", cfg, Some(depth), None));
    match what {
        Listing::Elements => {
            for g in elements(cfg, p, depth)? {
                push_line(
                    &mut out,
                    &json!({ "record": "element", "word": g.word.to_string(), "word_length": g.word_length(), "trace": g.matrix.trace() }),
                );
            }
        }
        Listing::Classes => {
            for c in enumerate_conjugacy_classes(p, depth) {
                push_line(
                    &mut out,
                    &json!({ "record": "class", "word": c.cyclic_word().to_string(), "word_length": c.cyclic_word().len(), "length": c.length() }),
                );
            }
        }
    }
    Ok(Outcome::ok(out))
}
