use crate::args::{DensityArgs, EvalArgs, Format, Function, ParamArgs, PhaseArgs, SpectrumArgs, VerifyArgs};
use crate::output::{complex, num, opt_complex, opt_num, Document, Table};
use serde_json::{json, Map, Value};
use whittaker_core::ode::oracle_values;
use whittaker_core::par::{map_range, Execution};
use whittaker_core::scattering::{check_exceptional, g_scattering};
use whittaker_core::spectral::{default_t_grid, spectral_density_kernel, spectrum_descriptor, EigenKind};
use whittaker_core::verify::{self, Case, SuiteReport};
use whittaker_core::whittaker::{
    eval_h, eval_i, eval_j_checked, eval_k, zero_energy, Sign, SolutionKind, WhittakerParams, ZeroEnergyKind,
};
use whittaker_core::{Complex64 as C, Error};

/// How a command ended, beyond its output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Some rows failed.
    Partial,
    /// A verification suite failed.
    Failed,
}

pub struct Outcome {
    pub doc: Document,
    pub status: Status,
}

fn base_config(command: &str, format: Format) -> Map<String, Value> {
    let mut config = Map::new();
    config.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    config.insert("command".into(), json!(command));
    config.insert("format".into(), json!(format));
    config
}

fn param_config(config: &mut Map<String, Value>, p: &ParamArgs) {
    config.insert("beta".into(), complex(p.beta));
    config.insert("m".into(), complex(p.m));
}

/// Parameters of the operator family; the singular point is refused.
fn operator_params(p: &ParamArgs) -> Result<WhittakerParams, Error> {
    let params = WhittakerParams::operator(p.beta, p.m)?;
    if params.is_singular_point() {
        return Err(Error::SingularFamilyPoint);
    }
    Ok(params)
}

fn status_label<T>(result: &Result<T, Error>) -> String {
    match result {
        Ok(_) => "ok".into(),
        Err(Error::ExceptionalEnergy(_)) => "skipped:exceptional".into(),
        Err(e) => format!("error:{}", e.code()),
    }
}

fn is_failure(status: &str) -> bool {
    status.starts_with("error:")
}

fn kind_of(func: Function) -> SolutionKind {
    match func {
        Function::I => SolutionKind::I,
        Function::K => SolutionKind::K,
        Function::J => SolutionKind::J,
        Function::HPlus => SolutionKind::HPlus,
        Function::HMinus => SolutionKind::HMinus,
        Function::J0 => SolutionKind::JZero,
        Function::Y0 => SolutionKind::YZero,
    }
}

fn real_positive(z: C) -> Result<f64, Error> {
    if z.im == 0.0 && z.re > 0.0 {
        Ok(z.re)
    } else {
        Err(Error::Domain(format!("needs a real positive argument, got {z}")))
    }
}

/// Value and diagnostic at one point: the rotation discrepancy for `J`,
/// the integrator deviation with `--oracle`.
fn eval_point(args: &EvalArgs, p: WhittakerParams, z: C) -> Result<(C, Option<f64>), Error> {
    let (value, mut diagnostic) = match args.func {
        Function::I => (eval_i(p, z)?, None),
        Function::K => (eval_k(p, z)?, None),
        Function::J => {
            let (v, discrepancy) = eval_j_checked(p, z)?;
            (v, Some(discrepancy))
        }
        Function::HPlus => (eval_h(p, Sign::Plus, z)?, None),
        Function::HMinus => (eval_h(p, Sign::Minus, z)?, None),
        Function::J0 => (zero_energy(p, ZeroEnergyKind::J, real_positive(z)?)?, None),
        Function::Y0 => (zero_energy(p, ZeroEnergyKind::Y, real_positive(z)?)?, None),
    };
    if args.oracle {
        let x = real_positive(z)?;
        let integrated = oracle_values(kind_of(args.func), p, &[x], args.tol)?[0];
        diagnostic = Some((value - integrated).norm() / integrated.norm());
    }
    Ok((value, diagnostic))
}

pub fn eval(args: &EvalArgs, format: Format) -> Outcome {
    let mut config = base_config("eval", format);
    config.insert("function".into(), json!(args.func));
    param_config(&mut config, &args.params);
    config.insert("z".into(), Value::Array(args.z.iter().map(|&z| complex(z)).collect()));
    config.insert("oracle".into(), json!(args.oracle));
    config.insert("tol".into(), json!(args.tol));

    let p = WhittakerParams::new(args.params.beta, args.params.m);
    let results = map_range(Execution::default(), args.z.len(), |i| eval_point(args, p, args.z[i]));
    let (mut rows, mut json_rows) = (Vec::new(), Vec::new());
    let mut failed = false;
    for (z, result) in args.z.iter().zip(results) {
        let status = status_label(&result);
        failed |= is_failure(&status);
        let (value, diagnostic) = match result {
            Ok((v, d)) => (Some(v), d),
            Err(_) => (None, None),
        };
        json_rows
            .push(json!({ "z": complex(*z), "value": opt_complex(value), "diagnostic": diagnostic, "status": status }));
        rows.push(vec![
            num(z.re),
            num(z.im),
            opt_num(value.map(|v| v.re)),
            opt_num(value.map(|v| v.im)),
            opt_num(diagnostic),
            status,
        ]);
    }
    let mut body = Map::new();
    body.insert("rows".into(), Value::Array(json_rows));
    Outcome {
        doc: Document {
            config: Value::Object(config),
            body,
            table: Table { header: vec!["z_re", "z_im", "value_re", "value_im", "diagnostic", "status"], rows },
            trailer: Vec::new(),
        },
        status: if failed { Status::Partial } else { Status::Ok },
    }
}

fn kind_name(kind: EigenKind) -> &'static str {
    match kind {
        EigenKind::Eigenvalue => "eigenvalue",
        EigenKind::Resonance => "resonance",
        EigenKind::Undefined => "undefined",
    }
}

pub fn spectrum(args: &SpectrumArgs, format: Format) -> Result<Outcome, Error> {
    let mut config = base_config("spectrum", format);
    param_config(&mut config, &args.params);
    config.insert("phi".into(), json!(args.phi));
    config.insert("nmax".into(), json!(args.nmax));
    config.insert("samples".into(), json!(args.samples));

    let p = operator_params(&args.params)?;
    let d = spectrum_descriptor(p, args.phi, args.nmax, &default_t_grid(args.samples))?;
    let mut rows = Vec::new();
    let (dx, dy) = (d.ray_angle.cos(), d.ray_angle.sin());
    rows.push(vec!["ray".into(), String::new(), String::new(), String::new(), num(dx), num(dy), String::new()]);
    for (i, point) in d.trajectory.iter().enumerate() {
        rows.push(vec![
            "trajectory".into(),
            i.to_string(),
            String::new(),
            String::new(),
            num(point.re),
            num(point.im),
            String::new(),
        ]);
    }
    let mut points = Vec::new();
    for (record, presented) in d.discrete.iter().zip(&d.presented) {
        points.push(json!({
            "N": record.n,
            "lambda": complex(record.lambda),
            "presented": complex(*presented),
            "kind": kind_name(record.kind),
        }));
        rows.push(vec![
            "point".into(),
            record.n.to_string(),
            num(record.lambda.re),
            num(record.lambda.im),
            num(presented.re),
            num(presented.im),
            kind_name(record.kind).into(),
        ]);
    }
    let mut body = Map::new();
    body.insert("params".into(), json!({ "beta": complex(d.params.beta), "m": complex(d.params.m) }));
    body.insert("rotation_phase".into(), json!(d.rotation_phase));
    body.insert("ray".into(), json!({ "angle": d.ray_angle }));
    body.insert("trajectory".into(), Value::Array(d.trajectory.iter().map(|&z| complex(z)).collect()));
    body.insert("points".into(), Value::Array(points));
    Ok(Outcome {
        doc: Document {
            config: Value::Object(config),
            body,
            table: Table {
                header: vec!["section", "index", "lambda_re", "lambda_im", "presented_re", "presented_im", "kind"],
                rows,
            },
            trailer: Vec::new(),
        },
        status: Status::Ok,
    })
}

pub fn density(args: &DensityArgs, format: Format) -> Result<Outcome, Error> {
    let (ks, xs, ys): (Vec<f64>, Vec<f64>, Vec<f64>) = (args.k.concat(), args.x.concat(), args.y.concat());
    let mut config = base_config("density", format);
    param_config(&mut config, &args.params);
    config.insert("k".into(), json!(ks));
    config.insert("x".into(), json!(xs));
    config.insert("y".into(), json!(ys));

    let p = operator_params(&args.params)?;
    let mut grid = Vec::with_capacity(ks.len() * xs.len() * ys.len());
    for &k in &ks {
        for &x in &xs {
            grid.extend(ys.iter().map(|&y| (k, x, y)));
        }
    }
    let results = map_range(Execution::default(), grid.len(), |i| {
        let (k, x, y) = grid[i];
        check_exceptional(p, k).and_then(|()| spectral_density_kernel(p, k, x, y)).map(|s| s.value)
    });
    let (mut rows, mut json_rows) = (Vec::new(), Vec::new());
    let mut failed = false;
    for ((k, x, y), result) in grid.into_iter().zip(results) {
        let status = status_label(&result);
        failed |= is_failure(&status);
        let value = result.ok();
        json_rows.push(json!({ "k": k, "x": x, "y": y, "value": opt_complex(value), "status": status }));
        rows.push(vec![num(k), num(x), num(y), opt_num(value.map(|v| v.re)), opt_num(value.map(|v| v.im)), status]);
    }
    let mut body = Map::new();
    body.insert("rows".into(), Value::Array(json_rows));
    Ok(Outcome {
        doc: Document {
            config: Value::Object(config),
            body,
            table: Table { header: vec!["k", "x", "y", "re", "im", "status"], rows },
            trailer: Vec::new(),
        },
        status: if failed { Status::Partial } else { Status::Ok },
    })
}

pub fn phase(args: &PhaseArgs, format: Format) -> Result<Outcome, Error> {
    let ks = args.k.concat();
    let mut config = base_config("phase", format);
    param_config(&mut config, &args.params);
    config.insert("k".into(), json!(ks));

    let p = operator_params(&args.params)?;
    let (mut rows, mut json_rows) = (Vec::new(), Vec::new());
    let mut failed = false;
    for &k in &ks {
        let result = check_exceptional(p, k).and_then(|()| g_scattering(p, k));
        let status = status_label(&result);
        failed |= is_failure(&status);
        let value = result.ok();
        let delta = value.map(|v| v.delta);
        let abs_g = value.map(|v| v.log_abs_g.exp());
        json_rows.push(json!({ "k": k, "delta": opt_complex(delta), "abs_g": abs_g, "status": status }));
        rows.push(vec![num(k), opt_num(delta.map(|d| d.re)), opt_num(delta.map(|d| d.im)), opt_num(abs_g), status]);
    }
    let mut body = Map::new();
    body.insert("rows".into(), Value::Array(json_rows));
    Ok(Outcome {
        doc: Document {
            config: Value::Object(config),
            body,
            table: Table { header: vec!["k", "delta_re", "delta_im", "abs_g", "status"], rows },
            trailer: Vec::new(),
        },
        status: if failed { Status::Partial } else { Status::Ok },
    })
}

fn case_json(case: &Case) -> Value {
    let inputs: Map<String, Value> = case.inputs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "check": case.check,
        "beta": complex(case.beta),
        "m": complex(case.m),
        "inputs": inputs,
        "residual": case.residual,
        "tolerance": case.tolerance,
        "error": case.error,
    })
}

fn report_json(report: &SuiteReport) -> Value {
    let checks: Vec<Value> = report
        .summary()
        .iter()
        .map(|s| json!({ "check": s.check, "count": s.count, "worst": s.worst, "tolerance": s.tolerance }))
        .collect();
    let notes: Vec<Value> = report.notes.iter().map(|(name, value)| json!({ "name": name, "value": value })).collect();
    json!({
        "suite": report.suite.name(),
        "seed": report.seed,
        "passed": report.passed(),
        "worst": report.worst(),
        "checks": checks,
        "notes": notes,
        "failures": report.failures().map(case_json).collect::<Vec<_>>(),
    })
}

pub fn verify(args: &VerifyArgs, format: Format) -> Outcome {
    let mut config = base_config("verify", format);
    config.insert("suites".into(), json!(args.suite.0.iter().map(|s| s.name()).collect::<Vec<_>>()));
    config.insert("seed".into(), json!(args.seed));

    let reports: Vec<SuiteReport> = args.suite.0.iter().map(|&s| verify::run(s, args.seed)).collect();
    let passed = reports.iter().all(SuiteReport::passed);
    let mut rows = Vec::new();
    let mut trailer = Vec::new();
    for report in &reports {
        for s in report.summary() {
            rows.push(vec![
                report.suite.name().into(),
                s.check.clone(),
                s.count.to_string(),
                num(s.worst),
                num(s.tolerance),
                (s.worst < s.tolerance).to_string(),
            ]);
        }
        for (name, value) in &report.notes {
            trailer.push(format!("note: {} {name} = {}", report.suite.name(), num(*value)));
        }
        for case in report.failures() {
            trailer.push(format!("failure: {} {}", report.suite.name(), case_json(case)));
        }
    }
    let mut body = Map::new();
    body.insert("passed".into(), json!(passed));
    body.insert("suites".into(), Value::Array(reports.iter().map(report_json).collect()));
    Outcome {
        doc: Document {
            config: Value::Object(config),
            body,
            table: Table { header: vec!["suite", "check", "count", "worst", "tolerance", "passed"], rows },
            trailer,
        },
        status: if passed { Status::Ok } else { Status::Failed },
    }
}
