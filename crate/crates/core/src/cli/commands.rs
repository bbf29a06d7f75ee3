use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::*;
use crate::counterexample::run_counterexample;
use crate::geometry::Domain;
use crate::hfun::{bp_classify, symbol_series, BpStatus, HoloExpr};
use crate::semiflow::{integrate, FlowStatus};
use crate::semigroup::{apply, generator_residual, operator_matrix};
use crate::spaces::{condition_e, norm, CoefSpace, ConditionEStatus};
use crate::transfer::{conjugation_residual, transfer_symbol, MapSpec};
use crate::{fmt17, Result};

pub(super) fn dispatch(cmd: &Command, stderr: &mut dyn Write) -> (&'static str, PathBuf, Result<Outcome>) {
    match cmd {
        Command::Flow(a) => ("flow", a.common.out.clone(), flow(a)),
        Command::Portrait(a) => ("portrait", a.common.out.clone(), portrait(a, stderr)),
        Command::Classify(a) => ("classify", a.out.clone(), classify(a)),
        Command::Evolve(a) => ("evolve", a.common.out.clone(), evolve(a)),
        Command::CheckE(a) => ("check-e", a.out.clone(), check_e(a)),
        Command::GeneratorCheck(a) => ("generator-check", a.common.out.clone(), generator_check(a)),
        Command::Counterexample(a) => ("counterexample", a.common.out.clone(), counterexample(a)),
        Command::TransferCheck(a) => ("transfer-check", a.common.out.clone(), transfer_check(a)),
    }
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<String> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(name.to_string())
}

fn flow(a: &FlowArgs) -> Result<Outcome> {
    let g: HoloExpr = a.symbol.parse()?;
    let d: Domain = a.domain.parse()?;
    let z0 = parse_complex(&a.z0)?;
    let traj = integrate(&g, &d, z0, a.horizon, a.common.tol)?;
    let csv = write_artifact(&a.common.out, "trajectory.csv", &traj.to_csv())?;
    let exit_code = match traj.status {
        FlowStatus::Completed { .. } => EXIT_OK,
        FlowStatus::Escaped { .. } => EXIT_ESCAPE,
        FlowStatus::Failed { .. } => EXIT_NUMERIC,
    };
    Ok(Outcome {
        command: "flow",
        inputs: json!({
            "symbol": a.symbol, "domain": d.to_string(), "z0": z0,
            "horizon": a.horizon, "tol": a.common.tol,
        }),
        result: json!({
            "status": traj.status,
            "final_point": traj.final_point(),
            "final_time": traj.final_time(),
            "t_escape": traj.escape_time(),
            "samples": traj.points.len(),
        }),
        artifacts: vec![csv],
        exit_code,
    })
}

fn portrait(a: &PortraitArgs, stderr: &mut dyn Write) -> Result<Outcome> {
    let g: HoloExpr = a.symbol.parse()?;
    let d: Domain = a.domain.parse()?;
    if a.density == 0 {
        return Err(Error::BadParameter("density must be positive".into()));
    }
    let seeds = d.sample_grid(a.density);
    let runs: Vec<Result<crate::semiflow::Trajectory>> =
        seeds.par_iter().map(|z| integrate(&g, &d, *z, a.horizon, a.common.tol)).collect();
    let mut skipped = Vec::new();
    let mut escaped = 0;
    let mut drawn = Vec::with_capacity(runs.len());
    for (i, (z, r)) in seeds.iter().zip(runs).enumerate() {
        match r {
            Ok(t) => {
                if t.is_escaped() {
                    escaped += 1;
                }
                drawn.push((i, t));
            }
            Err(e) => {
                let _ = writeln!(stderr, "seed {i} at {z}: skipped ({e})");
                skipped.push(json!({"index": i, "seed": z, "error": e.to_string()}));
            }
        }
    }
    let svg = render_portrait(&d, seeds.len(), &drawn);
    let file = write_artifact(&a.common.out, "portrait.svg", &svg)?;
    Ok(Outcome {
        command: "portrait",
        inputs: json!({
            "symbol": a.symbol, "domain": d.to_string(), "density": a.density,
            "horizon": a.horizon, "tol": a.common.tol,
        }),
        result: json!({"seeds": seeds.len(), "drawn": drawn.len(), "escaped": escaped, "skipped": skipped}),
        artifacts: vec![file],
        exit_code: EXIT_OK,
    })
}

fn classify(a: &ClassifyArgs) -> Result<Outcome> {
    let g: HoloExpr = a.symbol.parse()?;
    let v = bp_classify(&g, a.density, a.tol_b)?;
    std::fs::create_dir_all(&a.out)?;
    Ok(Outcome {
        command: "classify",
        inputs: json!({"symbol": a.symbol, "density": a.density, "tol_b": a.tol_b}),
        result: serde_json::to_value(&v).expect("verdict serializes"),
        artifacts: vec![],
        exit_code: if v.status == BpStatus::Inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK },
    })
}

fn series_csv(s: &crate::SeriesFn) -> String {
    let mut out = String::from("n,re,im\n");
    for (k, c) in s.coeffs().iter().enumerate() {
        out.push_str(&format!("{k},{},{}\n", fmt17(c.re), fmt17(c.im)));
    }
    out
}

fn evolve(a: &EvolveArgs) -> Result<Outcome> {
    let g: HoloExpr = a.symbol.parse()?;
    let f_expr: HoloExpr = a.f.parse()?;
    let space: CoefSpace = a.space.parse()?;
    let f = symbol_series(&f_expr, a.n)?;
    let tf = apply(&g, a.t, &f, a.common.tol)?;
    let m = operator_matrix(&g, a.t, a.n, a.common.tol)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("matrix_vs_apply".to_string(), m.apply(&f)?.max_distance(&tf)?);
    let summary = m.summary(residuals);
    let series = write_artifact(&a.common.out, "evolved.csv", &series_csv(&tf))?;
    let matrix = write_artifact(&a.common.out, "operator.csv", &m.to_csv())?;
    Ok(Outcome {
        command: "evolve",
        inputs: json!({
            "symbol": a.symbol, "f": a.f, "t": a.t, "N": a.n,
            "space": space.to_string(), "tol": a.common.tol,
        }),
        result: json!({
            "norm_f": norm(&space, &f),
            "norm_evolved": norm(&space, &tf),
            "operator": summary,
        }),
        artifacts: vec![series, matrix],
        exit_code: EXIT_OK,
    })
}

fn check_e(a: &CheckEArgs) -> Result<Outcome> {
    let space: CoefSpace = a.space.parse()?;
    let v = condition_e(&space);
    std::fs::create_dir_all(&a.out)?;
    Ok(Outcome {
        command: "check-e",
        inputs: json!({"space": space.to_string()}),
        result: serde_json::to_value(&v).expect("verdict serializes"),
        artifacts: vec![],
        exit_code: if v.status == ConditionEStatus::Inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK },
    })
}

fn generator_check(a: &GeneratorArgs) -> Result<Outcome> {
    let g: HoloExpr = a.symbol.parse()?;
    let f_expr: HoloExpr = a.f.parse()?;
    let space: CoefSpace = a.space.parse()?;
    let f = symbol_series(&f_expr, a.n)?;
    let steps = [a.h, a.h / 2.0, a.h / 4.0];
    let residuals = steps
        .iter()
        .map(|h| generator_residual(&g, &f, &space, *h, a.common.tol))
        .collect::<Result<Vec<f64>>>()?;
    let slopes: Vec<f64> = residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    std::fs::create_dir_all(&a.common.out)?;
    Ok(Outcome {
        command: "generator-check",
        inputs: json!({
            "symbol": a.symbol, "f": a.f, "space": space.to_string(),
            "h": a.h, "N": a.n, "tol": a.common.tol,
        }),
        result: json!({
            "residual": residuals[0],
            "steps": steps,
            "residuals": residuals,
            "slopes": slopes,
        }),
        artifacts: vec![],
        exit_code: EXIT_OK,
    })
}

fn counterexample(a: &CounterexampleArgs) -> Result<Outcome> {
    let b = parse_complex(&a.b)?;
    let f: HoloExpr = a.big_f.parse()?;
    let z0 = parse_complex(&a.z0)?;
    let mut rep = run_counterexample(b, f, z0, a.t_long, a.common.tol)?;
    let csv = write_artifact(&a.common.out, "counterexample_trajectory.csv", &rep.trajectory.to_csv())?;
    rep.trajectory_path = Some(csv.clone());
    let converged = rep.converged(a.dw_tol);
    let exit_code = if rep.t_exit.is_some() && converged { EXIT_OK } else { EXIT_INCONCLUSIVE };
    let mut result = serde_json::to_value(&rep).expect("report serializes");
    result["converged"] = Value::Bool(converged);
    Ok(Outcome {
        command: "counterexample",
        inputs: json!({
            "b": b, "F": a.big_f, "z0": z0, "t_long": a.t_long, "dw_tol": a.dw_tol, "tol": a.common.tol,
        }),
        result,
        artifacts: vec![csv],
        exit_code,
    })
}

fn transfer_check(a: &TransferArgs) -> Result<Outcome> {
    let g: HoloExpr = a.symbol.parse()?;
    let map: MapSpec = a.map.parse()?;
    let target: Domain = a.domain.parse()?;
    let z0 = parse_complex(&a.z0)?;
    let pair = map.build(&target)?;
    let h = transfer_symbol(&g, &pair);
    let residual = conjugation_residual(&g, &pair, z0, a.t, a.common.tol)?;
    std::fs::create_dir_all(&a.common.out)?;
    Ok(Outcome {
        command: "transfer-check",
        inputs: json!({
            "symbol": a.symbol, "map": map.to_string(), "domain": target.to_string(),
            "z0": z0, "t": a.t, "tol": a.common.tol,
        }),
        result: json!({
            "residual": residual,
            "transferred_symbol": h.to_string(),
            "h_of_z0": pair.h.eval(z0)?,
        }),
        artifacts: vec![],
        exit_code: EXIT_OK,
    })
}
