//! The twelve acceptance criteria, run in order. Prints one PASS/FAIL line per
//! criterion and fails if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use holoflow::counterexample::{run_counterexample, BIG_RADIUS};
use holoflow::hfun::{bp_build, bp_classify, BpStatus};
use holoflow::semiflow::{escape_time, flow_map, semigroup_residual};
use holoflow::semigroup::{generator_residual, maximality_residual, transport_pde_residual};
use holoflow::spaces::{condition_e, eval_norm, BetaRule, CoefSpace, ConditionEStatus};
use holoflow::transfer::{cayley, conjugation_residual, transfer_symbol};
use holoflow::{Domain, HoloExpr, SeriesFn, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let used = start.elapsed();
    ensure(used < budget, format!("took {used:?}, budget {budget:?}"))
}

fn neg_z() -> HoloExpr {
    HoloExpr::neg(HoloExpr::var())
}

fn one_minus_z2() -> HoloExpr {
    HoloExpr::poly_re(&[1.0, 0.0, -1.0])
}

/// Twelve seeds spread over the unit-disc sample grid.
fn twelve_seeds() -> Vec<C64> {
    let grid = Domain::unit_disc().sample_grid(1);
    let stride = grid.len() / 12;
    grid.into_iter().step_by(stride).take(12).collect()
}

fn linear_flow_oracle() -> Outcome {
    let start = Instant::now();
    let d = Domain::unit_disc();
    let mut worst: f64 = 0.0;
    for z in twelve_seeds() {
        for t in [0.5, 1.0, 2.0, 5.0] {
            let got = flow_map(&neg_z(), &d, z, t, 1e-10).map_err(|e| e.to_string())?;
            worst = worst.max((got - z * (-t as f64).exp()).norm());
        }
    }
    ensure(worst <= 1e-8, format!("max error {worst:e}"))?;
    within_budget(start, Duration::from_secs(1))?;
    Ok(format!("max error {worst:.2e}"))
}

fn semigroup_law() -> Outcome {
    let start = Instant::now();
    let d = Domain::unit_disc();
    let symbols = [neg_z(), HoloExpr::product(HoloExpr::constant(c(0.0, -1.0)), HoloExpr::var()), one_minus_z2()];
    let lattice = [0.25, 0.5, 1.0, 2.0];
    let mut worst: f64 = 0.0;
    for g in &symbols {
        for z in twelve_seeds() {
            for t in lattice {
                for s in lattice {
                    let r = semigroup_residual(g, &d, z, t, s, 1e-10).map_err(|e| format!("{g} at {z}: {e}"))?;
                    worst = worst.max(r);
                }
            }
        }
    }
    ensure(worst <= 1e-7, format!("max residual {worst:e}"))?;
    within_budget(start, Duration::from_secs(5))?;
    Ok(format!("max residual {worst:.2e} over 576 cases"))
}

fn escape_time_oracle() -> Outcome {
    let d = Domain::unit_disc();
    let mut worst: f64 = 0.0;
    for r in [0.3, 0.5, 0.9] {
        let t = escape_time(&HoloExpr::var(), &d, c(r, 0.0), 10.0, 1e-10)
            .map_err(|e| e.to_string())?
            .ok_or(format!("no escape from {r}"))?;
        worst = worst.max((t - (1.0 / r as f64).ln()).abs());
    }
    ensure(worst <= 1e-6, format!("G = z: error {worst:e}"))?;
    let z2 = HoloExpr::poly_re(&[0.0, 0.0, 1.0]);
    let t = escape_time(&z2, &d, c(0.9, 0.0), 10.0, 1e-10)
        .map_err(|e| e.to_string())?
        .ok_or("no escape for z^2")?;
    let err2 = (t - (1.0 / 0.9 - 1.0)).abs();
    ensure(err2 <= 1e-5, format!("G = z^2: error {err2:e}"))?;
    Ok(format!("G = z max error {worst:.2e}; G = z^2 error {err2:.2e}"))
}

/// `F = a + i s + d (1 + ωz)/(1 − ωz)` with `a, d ≥ 0`, `|ω| = 1`.
fn random_herglotz(rng: &mut ChaCha8Rng) -> HoloExpr {
    let a: f64 = rng.gen_range(0.05..2.0);
    let s: f64 = rng.gen_range(-1.0..1.0);
    let d: f64 = rng.gen_range(0.0..2.0);
    let w = C64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    let quotient = HoloExpr::ratio(
        HoloExpr::poly(vec![c(1.0, 0.0), w]),
        HoloExpr::poly(vec![c(1.0, 0.0), -w]),
    )
    .expect("denominator vanishes only on the circle");
    HoloExpr::sum(HoloExpr::constant(c(a, s)), HoloExpr::product(HoloExpr::real(d), quotient))
}

fn berkson_porta_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let b = C64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
        let f = random_herglotz(&mut rng);
        let g = bp_build(b, f.clone()).map_err(|e| e.to_string())?;
        let v = bp_classify(&g, 2, 1e-8).map_err(|e| format!("case {k}: {e}"))?;
        ensure(v.status == BpStatus::Global, format!("case {k} (b = {b}, F = {f}): {:?}", v.status))?;
        let found = v.b.ok_or(format!("case {k}: no b"))?;
        worst = worst.max((found - b).norm());
    }
    ensure(worst <= 1e-6, format!("max |b_found - b| = {worst:e}"))?;
    let v = bp_classify(&HoloExpr::var(), 2, 1e-8).map_err(|e| e.to_string())?;
    ensure(v.status == BpStatus::NotGlobal && v.witness.is_some(), format!("G = z gave {:?}", v.status))?;
    within_budget(start, Duration::from_secs(30))?;
    Ok(format!("20/20 Global, max |b_found - b| {worst:.2e}; G = z NotGlobal with witness"))
}

fn condition_e_table() -> Outcome {
    use ConditionEStatus::*;
    let space = |p: f64, beta: BetaRule| CoefSpace::new(p, beta).unwrap();
    let table = [
        ("H2", CoefSpace::hardy(), Satisfied),
        ("Bergman", CoefSpace::bergman(), Satisfied),
        ("Dirichlet", CoefSpace::dirichlet(), Satisfied),
        ("p=2 pow:0.6", space(2.0, BetaRule::power(0.6).unwrap()), Violated),
        ("p=2 geom:2", space(2.0, BetaRule::geometric(2.0).unwrap()), Violated),
        ("p=1 pow:-0.5", space(1.0, BetaRule::power(-0.5).unwrap()), Satisfied),
    ];
    for (name, sp, want) in &table {
        let got = condition_e(sp).status;
        ensure(got == *want, format!("{name}: got {got:?}, want {want:?}"))?;
    }
    Ok("6/6 verdicts match".into())
}

fn loglog_slope(hs: &[f64], rs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn test_functions() -> [(&'static str, SeriesFn); 2] {
    [("e1", SeriesFn::from_real(&[0.0, 1.0], 64)), ("e1+e2", SeriesFn::from_real(&[0.0, 1.0, 1.0], 64))]
}

fn generator_identity() -> Outcome {
    let g = one_minus_z2();
    let h2 = CoefSpace::hardy();
    let hs = [1e-2, 5e-3, 2.5e-3];
    let mut notes = Vec::new();
    for (name, f) in test_functions() {
        let rs = hs
            .iter()
            .map(|h| generator_residual(&g, &f, &h2, *h, 1e-12))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let slope = loglog_slope(&hs, &rs);
        ensure(slope >= 0.9, format!("{name}: slope {slope}"))?;
        let r = generator_residual(&g, &f, &h2, 1e-3, 1e-12).map_err(|e| e.to_string())?;
        ensure(r <= 1e-2, format!("{name}: residual {r:e} at h = 1e-3"))?;
        notes.push(format!("{name} slope {slope:.3} residual {r:.2e}"));
    }
    Ok(notes.join("; "))
}

fn maximality_identity() -> Outcome {
    let g = one_minus_z2();
    let h2 = CoefSpace::hardy();
    let mut worst: f64 = 0.0;
    for (name, f) in test_functions() {
        let r = maximality_residual(&g, &f, &h2, 0.5, 64, 1e-12).map_err(|e| e.to_string())?;
        ensure(r <= 1e-6, format!("{name}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn transport_pde() -> Outcome {
    let e1 = SeriesFn::from_real(&[0.0, 1.0], 1);
    let probes = [(c(0.5, 0.0), 1.0), (c(0.2, 0.0), 0.4), (c(-0.3, 0.4), 0.7), (c(0.0, -0.6), 0.3), (c(0.1, 0.1), 2.0), (c(-0.5, -0.2), 1.5)];
    let mut worst: f64 = 0.0;
    for g in [neg_z(), one_minus_z2()] {
        for (z, t) in probes {
            let r = transport_pde_residual(&g, &e1, z, t, 1e-3, 1e-3).map_err(|e| e.to_string())?;
            ensure(r <= 1e-5, format!("{g} at z = {z}, t = {t}: {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("max residual {worst:.2e} over 12 probes"))
}

fn counterexample() -> Outcome {
    let start = Instant::now();
    let rep = run_counterexample(c(1.5, 0.0), HoloExpr::real(1.0), c(0.0, 0.0), 20.0, 1e-10).map_err(|e| e.to_string())?;
    let t_exit = rep.t_exit.ok_or("no crossing of |z| = 1")?;
    let big = holoflow::counterexample::big_disc();
    ensure(rep.trajectory.points.iter().all(|z| big.contains(*z)), "left the radius-2 disc")?;
    ensure(rep.max_modulus < BIG_RADIUS, format!("max modulus {}", rep.max_modulus))?;
    ensure(rep.dw_distance < 1e-3, format!("|phi(20) - b| = {:e}", rep.dw_distance))?;
    within_budget(start, Duration::from_secs(2))?;
    Ok(format!("t_exit {t_exit:.10}, |phi(20) - b| {:.2e}", rep.dw_distance))
}

fn conformal_conjugation() -> Outcome {
    let pair = cayley();
    let drift = HoloExpr::constant(c(0.0, 1.0));
    let to_i = HoloExpr::neg(HoloExpr::difference(HoloExpr::var(), HoloExpr::constant(c(0.0, 1.0))));
    let mut worst: f64 = 0.0;
    for g in [&drift, &to_i] {
        for z0 in [c(0.0, 0.0), c(0.3, 0.0), c(-0.2, 0.4)] {
            for t in [0.5, 1.0, 2.0] {
                let r = conjugation_residual(g, &pair, z0, t, 1e-10).map_err(|e| e.to_string())?;
                ensure(r <= 1e-7, format!("{g} z0 = {z0} t = {t}: {r:e}"))?;
                worst = worst.max(r);
            }
        }
    }
    let fixed = transfer_symbol(&to_i, &pair).eval(c(0.0, 0.0)).map_err(|e| e.to_string())?.norm();
    ensure(fixed <= 1e-9, format!("|H(z*)| = {fixed:e}"))?;
    Ok(format!("max residual {worst:.2e}; |H(z*)| {fixed:.1e}"))
}

const COMMANDS: &[&[&str]] = &[
    &["flow", "--symbol", "1-z^2", "--z0", "0.2,0.3", "--horizon", "4"],
    &["flow", "--symbol", "z", "--z0", "0.5,0"],
    &["portrait", "--symbol", "-i*z", "--density", "1", "--horizon", "3"],
    &["classify", "--symbol", "(0.3-z)*(1-0.3z)"],
    &["evolve", "--symbol", "1-z^2", "--f", "z+z^2", "--t", "0.5", "--n", "16"],
    &["check-e", "--space", "dirichlet"],
    &["generator-check", "--symbol", "1-z^2", "--f", "z", "--n", "16"],
    &["counterexample"],
    &["transfer-check", "--symbol", "i"],
];

fn run_once(args: &[&str]) -> Result<(i32, Vec<u8>, Vec<(String, Vec<u8>)>), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut argv: Vec<String> = std::iter::once("holoflow").chain(args.iter().copied()).map(String::from).collect();
    argv.push("--out".into());
    argv.push(dir.path().to_string_lossy().into_owned());
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = holoflow::cli::run(argv, &mut out, &mut err);
    let mut files = Vec::new();
    for e in std::fs::read_dir(dir.path()).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        files.push((e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).map_err(|e| e.to_string())?));
    }
    files.sort();
    Ok((code, out, files))
}

fn determinism() -> Outcome {
    let mut artifacts = 0;
    for args in COMMANDS {
        let first = run_once(args)?;
        let second = run_once(args)?;
        ensure(first == second, format!("{} differs between runs", args.join(" ")))?;
        ensure(!first.2.is_empty(), format!("{} wrote nothing", args[0]))?;
        artifacts += first.2.len();
    }
    Ok(format!("{} commands, {artifacts} artifacts byte-identical", COMMANDS.len()))
}

fn eval_functional_norms() -> Outcome {
    let h2 = eval_norm(&CoefSpace::hardy(), c(0.6, 0.0), 200).map_err(|e| e.to_string())?;
    ensure((h2 - 1.25).abs() <= 1e-6, format!("H2: {h2}"))?;
    let berg = eval_norm(&CoefSpace::bergman(), c(0.5, 0.0), 400).map_err(|e| e.to_string())?;
    ensure((berg - 4.0 / 3.0).abs() <= 1e-5, format!("Bergman: {berg}"))?;
    Ok(format!("H2 {h2:.12}, Bergman {berg:.12}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("linear-flow oracle", linear_flow_oracle),
        ("semigroup law", semigroup_law),
        ("escape-time oracle", escape_time_oracle),
        ("Berkson-Porta round trip", berkson_porta_round_trip),
        ("condition (E) table", condition_e_table),
        ("generator identity", generator_identity),
        ("maximality integral identity", maximality_identity),
        ("transport PDE", transport_pde),
        ("counterexample", counterexample),
        ("conformal conjugation", conformal_conjugation),
        ("determinism", determinism),
        ("evaluation functional norms", eval_functional_norms),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
