use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use smhd::shock::lax_verdict_with_tol;
use smhd::{
    classify_detailed, cvs_nsc_verdict, cvs_sufficient_verdict, lambda_for_cvs, linearized_setup, rectilinear_shock,
    DiscontinuityKind, PhysParams, SidePair, SmhdError, DEFAULT_TOL,
};
use smhd_sim::{simulate, SimConfig};

use crate::args::{Format, GlobalOpts, ShockArgs};
use crate::error::{CliError, Result};
use crate::svg::render;
use crate::sweep::{run_sweep, write_csv, SweepSpec};

pub const LAX_VIOLATED: &str = "Lax violated: [h]<=0";

pub fn read_input(opts: &GlobalOpts) -> Result<String> {
    match &opts.input {
        None => Err(CliError::Usage("--input is required".into())),
        Some(p) if p.is_empty() => Err(CliError::Usage("--input path is empty".into())),
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", Path::new(p).display()))),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("not valid JSON: {e}")))
}

/// Accepts a bare `SidePair` or any bundle with a `pair` field.
pub fn parse_pair(text: &str, g: Option<f64>) -> Result<SidePair> {
    let mut v = parse_json(text)?;
    if let Some(inner) = v.get_mut("pair") {
        v = inner.take();
    }
    let mut sp: SidePair = serde_json::from_value(v).map_err(|e| {
        CliError::Input(format!(
            "expected {{\"plus\": state, \"minus\": state, \"front\"?: {{\"slope\", \"speed\"}}, \"g\"?}} \
             with state = {{\"h\", \"v\": [v1, v2], \"b\": [B1, B2]}}: {e}"
        ))
    })?;
    if let Some(g) = g {
        sp.g = g;
    }
    sp.check()?;
    Ok(sp)
}

fn tol(opts: &GlobalOpts) -> Result<f64> {
    match opts.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::Usage(format!("--tol must be positive, got {t}"))),
        Some(t) => Ok(t),
        None => Ok(DEFAULT_TOL),
    }
}

fn require_json(opts: &GlobalOpts, cmd: &str) -> Result<()> {
    match opts.format {
        None | Some(Format::Json) => Ok(()),
        Some(f) => Err(CliError::Usage(format!("{cmd} only writes json, not {f:?}"))),
    }
}

fn out_dir(opts: &GlobalOpts) -> Result<Option<&Path>> {
    match &opts.out {
        Some(d) => {
            fs::create_dir_all(d)?;
            Ok(Some(d.as_path()))
        }
        None => Ok(None),
    }
}

fn emit(opts: &GlobalOpts, name: &str, value: &Value, stdout: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    stdout.write_all(text.as_bytes())?;
    if let Some(d) = out_dir(opts)? {
        fs::write(d.join(name), text)?;
    }
    Ok(())
}

fn cvs_report(sp: &SidePair, epsilon: f64, tol: f64) -> Result<Value> {
    let (plus, minus) = (&sp.plus, &sp.minus);
    let choice = lambda_for_cvs(plus, minus)?;
    let sufficient = cvs_sufficient_verdict(plus, minus, epsilon)?;
    let (nsc, note) = match cvs_nsc_verdict(plus, minus, &sp.params(), tol) {
        Ok(v) => (Some(v), None),
        Err(e @ SmhdError::NotSymmetricCase { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    Ok(json!({ "choice": choice, "sufficient": sufficient, "nsc": nsc, "nsc_note": note }))
}

/// Exit code 0 for any valid classification, 2 for an inadmissible pair.
pub fn classify(opts: &GlobalOpts, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    require_json(opts, "classify")?;
    let sp = parse_pair(&read_input(opts)?, opts.g)?;
    let tol = tol(opts)?;
    let c = classify_detailed(&sp, tol)?;
    let mut report = json!({
        "kind": c.kind.name(),
        "detail": match &c.kind { DiscontinuityKind::Inadmissible(why) => Some(why.clone()), _ => None },
        "trace": c.trace,
        "residual": { "components": c.residual.r, "norm": c.residual.norm(), "relative": c.residual.relative() },
        "notes": c.notes,
        "pair": sp,
    });
    writeln!(stderr, "kind: {}", c.kind)?;
    writeln!(
        stderr,
        "m+ = {:.6e}, m- = {:.6e}, b+ = {:.6e}, b- = {:.6e}",
        c.trace.plus.m, c.trace.minus.m, c.trace.plus.b, c.trace.minus.b
    )?;
    writeln!(stderr, "RH residual norm: {:.3e}", c.residual.norm())?;
    match c.kind {
        DiscontinuityKind::Shock => {
            let d = lax_verdict_with_tol(&sp, tol)?;
            match d.lax.k {
                Some(k) => writeln!(stderr, "Lax: satisfied, k={k}")?,
                None => writeln!(stderr, "Lax: violated")?,
            }
            report["lax"] = json!({ "satisfied": d.lax.satisfied, "k": d.lax.k, "height_jump": d.height_jump });
        }
        DiscontinuityKind::CurrentVortexSheet => {
            let s = cvs_report(&sp, 1e-9, tol)?;
            writeln!(stderr, "lambda+ = {}, lambda- = {}", s["choice"]["lambda_plus"], s["choice"]["lambda_minus"])?;
            report["stability"] = s;
        }
        _ => {}
    }
    emit(opts, "classify.json", &report, stdout)?;
    Ok(if matches!(c.kind, DiscontinuityKind::Inadmissible(_)) { 2 } else { 0 })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShockInput {
    pub h_minus: f64,
    pub ratio: f64,
    pub b1_plus: f64,
    #[serde(default)]
    pub b2: f64,
    #[serde(default)]
    pub g: Option<f64>,
}

fn shock_input(opts: &GlobalOpts, a: &ShockArgs) -> Result<ShockInput> {
    let mut s = if opts.input.is_some() {
        let mut v = parse_json(&read_input(opts)?)?;
        if let Some(inner) = v.get_mut("params") {
            v = inner.take();
        }
        serde_json::from_value(v).map_err(|e| {
            CliError::Input(format!("expected {{\"h_minus\", \"ratio\", \"b1_plus\", \"b2\"?, \"g\"?}}: {e}"))
        })?
    } else {
        let need = |x: Option<f64>, name: &str| {
            x.ok_or_else(|| CliError::Usage(format!("--{name} is required without --input")))
        };
        ShockInput {
            h_minus: need(a.h_minus, "h-minus")?,
            ratio: need(a.ratio, "ratio")?,
            b1_plus: need(a.b1_plus, "b1-plus")?,
            b2: a.b2.unwrap_or(0.0),
            g: None,
        }
    };
    // flags refine a file input
    s.h_minus = a.h_minus.unwrap_or(s.h_minus);
    s.ratio = a.ratio.unwrap_or(s.ratio);
    s.b1_plus = a.b1_plus.unwrap_or(s.b1_plus);
    s.b2 = a.b2.unwrap_or(s.b2);
    s.g = opts.g.or(s.g);
    Ok(s)
}

fn shock_bundle(input: &ShockInput, tol: f64) -> Result<(Value, bool)> {
    let p = PhysParams::new(input.g.unwrap_or(1.0))?;
    if input.ratio == 1.0 {
        return Err(SmhdError::DegenerateHeight(input.h_minus).into());
    }
    let s = rectilinear_shock(input.h_minus, input.ratio, input.b1_plus, input.b2, &p)?;
    let sp = s.side_pair(&p);
    let d = lax_verdict_with_tol(&sp, tol)?;
    let mut warnings = Vec::new();
    let admissible = d.lax.satisfied;
    let setup = if input.ratio < 1.0 {
        warnings.push(format!("{LAX_VIOLATED}; linearized setup refused"));
        None
    } else {
        Some(linearized_setup(&s, &p)?)
    };
    if !admissible && input.ratio > 1.0 {
        warnings.push("Lax inequalities fail for R > 1".into());
    }
    let params = ShockInput { g: Some(p.g), ..*input };
    let bundle = json!({
        "params": params,
        "shock": s,
        "pair": sp,
        "diagnostics": d,
        "setup": setup,
        "warnings": warnings,
    });
    Ok((bundle, admissible))
}

/// Exit code 2 when the shock violates the Lax conditions (`R < 1`).
pub fn shock(opts: &GlobalOpts, a: &ShockArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    require_json(opts, "shock")?;
    let input = shock_input(opts, a)?;
    let (bundle, admissible) = shock_bundle(&input, tol(opts)?)?;
    if let Some(s) = bundle["setup"].as_object() {
        writeln!(
            stderr,
            "M = {}, M1 = {}, M* = {}, d0 = {}, a0 = {}, l0 = {}",
            s["m"], s["m1"], s["mstar"], s["d0"], s["a0"], s["ell0"]
        )?;
    }
    for w in bundle["warnings"].as_array().into_iter().flatten() {
        writeln!(stderr, "warning: {}", w.as_str().unwrap_or_default())?;
    }
    emit(opts, "shock.json", &bundle, stdout)?;
    Ok(if admissible { 0 } else { 2 })
}

pub fn stability_cvs(opts: &GlobalOpts, epsilon: f64, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    require_json(opts, "stability cvs")?;
    let sp = parse_pair(&read_input(opts)?, opts.g)?;
    let mut report = cvs_report(&sp, epsilon, tol(opts)?)?;
    writeln!(stderr, "sufficient: {}", report["sufficient"]["tag"])?;
    writeln!(stderr, "nsc: {}", report["nsc"]["tag"])?;
    report["pair"] = json!(sp);
    emit(opts, "stability.json", &report, stdout)?;
    Ok(0)
}

pub fn stability_shock(
    opts: &GlobalOpts,
    a: &ShockArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    require_json(opts, "stability shock")?;
    let input = shock_input(opts, a)?;
    let (mut bundle, admissible) = shock_bundle(&input, tol(opts)?)?;
    let window = bundle["setup"].as_object().map(|s| {
        let (m1, m, ms) = (s["m1"].as_f64().unwrap(), s["m"].as_f64().unwrap(), s["mstar"].as_f64().unwrap());
        json!({ "m1": m1, "m": m, "mstar": ms, "satisfied": m1 < m && m < ms })
    });
    writeln!(stderr, "Lax: {}", if admissible { "satisfied" } else { LAX_VIOLATED })?;
    bundle["froude_window"] = json!(window);
    emit(opts, "stability.json", &bundle, stdout)?;
    Ok(if admissible { 0 } else { 2 })
}

pub fn simulate_cmd(opts: &GlobalOpts, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let text = read_input(opts)?;
    let mut cfg = SimConfig::from_json(&text)?;
    if let Some(g) = opts.g {
        cfg.g = g;
    }
    let r = simulate(&cfg)?;
    let s = &r.summary;
    writeln!(stderr, "steps: {}, final time: {}", s.steps, s.final_time)?;
    writeln!(stderr, "max conservation defect: {:.3e}", s.max_conservation_defect)?;
    let line = |name: &str, v: Option<f64>| v.map(|x| format!("{name}: {x:.6e}"));
    let lines = [
        line("front drift", s.max_front_drift),
        line("front drift / dx", s.max_front_drift.map(|d| d / r.dx[0])),
        line("max divergence residual", s.max_div_norm),
        line("a(T)/a(0)", s.amp_ratio),
        line("sup ||U(t)||/||U(0)||", s.norm_ratio),
        line("sup gradient norm ratio", s.gradient_norm_ratio),
        line("boundary trace norm", s.boundary_trace_norm),
        line("wave equation residual", s.wave_residual),
        line("L1 error", s.l1_error),
    ];
    for l in lines.into_iter().flatten() {
        writeln!(stderr, "{l}")?;
    }
    match opts.format {
        None | Some(Format::Json) => {
            let text = serde_json::to_string_pretty(&json!({ "summary": s, "dx": r.dx })).expect("serializable");
            writeln!(stdout, "{text}")?;
        }
        Some(Format::Csv) => r.write_series_csv(&mut *stdout)?,
        Some(Format::Svg) => return Err(CliError::Usage("simulate writes json or csv".into())),
    }
    if let Some(d) = out_dir(opts)? {
        r.write_series_csv(fs::File::create(d.join("series.csv"))?)?;
        r.write_snapshot_csv(fs::File::create(d.join("snapshot.csv"))?)?;
        fs::write(d.join("summary.json"), serde_json::to_string_pretty(s).expect("serializable") + "\n")?;
    }
    Ok(0)
}

pub fn sweep_cmd(opts: &GlobalOpts, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let spec: SweepSpec = serde_json::from_value({
        let mut v = parse_json(&read_input(opts)?)?;
        if let Some(inner) = v.get_mut("spec") {
            v = inner.take();
        }
        v
    })
    .map_err(|e| {
        CliError::Input(format!(
            "expected {{\"verdict\": \"lax\"|\"cvs-sufficient\"|\"cvs-nsc\", \"x\": axis, \"y\": axis, \"fixed\"?: {{..}}}} \
             with axis = {{\"param\", \"min\", \"max\", \"samples\"}}: {e}"
        ))
    })?;
    let points = run_sweep(&spec, opts.tol)?;
    let mut csv = Vec::new();
    write_csv(&mut csv, &points)?;
    let svg = render(&spec, &points);
    let mut counts = std::collections::BTreeMap::new();
    for p in &points {
        *counts.entry(p.verdict.as_str()).or_insert(0usize) += 1;
    }
    for (k, n) in &counts {
        writeln!(stderr, "{k}: {n}")?;
    }
    match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => stdout.write_all(&csv)?,
        Format::Svg => stdout.write_all(svg.as_bytes())?,
        Format::Json => {
            let text = serde_json::to_string_pretty(&json!({ "spec": spec, "points": points })).expect("serializable");
            writeln!(stdout, "{text}")?;
        }
    }
    if let Some(d) = out_dir(opts)? {
        fs::write(d.join("sweep.csv"), &csv)?;
        fs::write(d.join("sweep.svg"), &svg)?;
    }
    Ok(0)
}
