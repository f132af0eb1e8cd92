//! Two-parameter verdict grids.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smhd::{
    cvs_nsc_verdict, cvs_sufficient_verdict, lax_verdict, rectilinear_shock, CvsTag, PhysParams, State, DEFAULT_TOL,
};
use smhd_sim::result::fmt17;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictFn {
    Lax,
    CvsSufficient,
    CvsNsc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.samples - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub verdict: VerdictFn,
    pub x: Axis,
    pub y: Axis,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
}

/// Verdict codes shared by the CSV and the heatmap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Code {
    Stable = 0,
    Unstable = 1,
    Exceptional = 2,
    Inconclusive = 3,
    Undefined = 4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub verdict: String,
    pub code: Code,
    pub margin: f64,
}

const LAX_PARAMS: [(&str, f64); 5] = [("h_minus", 1.0), ("ratio", 2.0), ("b1_plus", 0.5), ("b2", 0.0), ("g", 1.0)];
const CVS_PARAMS: [(&str, f64); 6] =
    [("jump_v2", 1.0), ("b2_plus", 1.0), ("b2_minus", f64::NAN), ("h", 1.0), ("g", 1.0), ("epsilon", 1e-9)];

impl SweepSpec {
    fn defaults(&self) -> &'static [(&'static str, f64)] {
        match self.verdict {
            VerdictFn::Lax => &LAX_PARAMS,
            VerdictFn::CvsSufficient | VerdictFn::CvsNsc => &CVS_PARAMS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let known: Vec<&str> = self.defaults().iter().map(|(k, _)| *k).collect();
        let bad = |msg: String| Err(CliError::Input(format!("invalid sweep: {msg}")));
        for (name, a) in [("x", &self.x), ("y", &self.y)] {
            if !known.contains(&a.param.as_str()) {
                return bad(format!("{name} axis parameter {:?} is not one of {known:?}", a.param));
            }
            if a.samples < 2 {
                return bad(format!("{name} axis needs at least 2 samples"));
            }
            if !(a.min.is_finite() && a.max.is_finite() && a.min < a.max) {
                return bad(format!("{name} axis range [{}, {}] must be finite and increasing", a.min, a.max));
            }
        }
        if self.x.param == self.y.param {
            return bad("both axes use the same parameter".into());
        }
        for (k, v) in &self.fixed {
            if !known.contains(&k.as_str()) {
                return bad(format!("fixed parameter {k:?} is not one of {known:?}"));
            }
            if !v.is_finite() {
                return bad(format!("fixed parameter {k} is not finite"));
            }
        }
        if self.verdict == VerdictFn::CvsNsc && self.fixed.contains_key("b2_minus") {
            return bad("cvs-nsc fixes b2_minus = -b2_plus".into());
        }
        Ok(())
    }

    fn params_at(&self, x: f64, y: f64) -> BTreeMap<&'static str, f64> {
        self.defaults()
            .iter()
            .map(|&(k, d)| {
                let v = if self.x.param == k {
                    x
                } else if self.y.param == k {
                    y
                } else {
                    self.fixed.get(k).copied().unwrap_or(d)
                };
                (k, v)
            })
            .collect()
    }

    pub fn fixed_value(&self, k: &str) -> f64 {
        self.defaults()
            .iter()
            .find(|(n, _)| *n == k)
            .map_or(f64::NAN, |&(_, d)| self.fixed.get(k).copied().unwrap_or(d))
    }

    fn evaluate(&self, x: f64, y: f64, tol: f64) -> GridPoint {
        let p = self.params_at(x, y);
        let point = |verdict: &str, code, margin| GridPoint { x, y, verdict: verdict.into(), code, margin };
        let undefined = |_| point("undefined", Code::Undefined, f64::NAN);
        match self.verdict {
            VerdictFn::Lax => {
                let r = PhysParams::new(p["g"])
                    .and_then(|g| {
                        rectilinear_shock(p["h_minus"], p["ratio"], p["b1_plus"], p["b2"], &g).map(|s| (s, g))
                    })
                    .and_then(|(s, g)| lax_verdict(&s.side_pair(&g)));
                match r {
                    Ok(d) if d.lax.satisfied => point("admissible", Code::Stable, d.height_jump.abs()),
                    Ok(d) => point("inadmissible", Code::Unstable, d.height_jump.abs()),
                    Err(e) => undefined(e),
                }
            }
            VerdictFn::CvsSufficient | VerdictFn::CvsNsc => {
                let (h, j, bp) = (p["h"], p["jump_v2"], p["b2_plus"]);
                let bm = if p["b2_minus"].is_nan() { -bp } else { p["b2_minus"] };
                let plus = State::new(h, [0.0, 0.5 * j], [0.0, bp]);
                let minus = State::new(h, [0.0, -0.5 * j], [0.0, bm]);
                let v = if self.verdict == VerdictFn::CvsSufficient {
                    cvs_sufficient_verdict(&plus, &minus, p["epsilon"])
                } else {
                    PhysParams::new(p["g"]).and_then(|g| cvs_nsc_verdict(&plus, &minus, &g, tol))
                };
                match v {
                    Ok(v) => match v.tag {
                        CvsTag::SufficientlyStable => point("sufficiently_stable", Code::Stable, v.margin),
                        CvsTag::NscStable => point("stable", Code::Stable, v.margin),
                        CvsTag::NscUnstable => point("unstable", Code::Unstable, v.margin),
                        CvsTag::ExceptionalPoint(i) => point(&format!("exceptional_{i}"), Code::Exceptional, v.margin),
                        CvsTag::Inconclusive => point("inconclusive", Code::Inconclusive, v.margin),
                    },
                    Err(e) => undefined(e),
                }
            }
        }
    }
}

/// Row-major over `y`, then `x`; evaluated in parallel, collected in order.
pub fn run_sweep(spec: &SweepSpec, tol: Option<f64>) -> Result<Vec<GridPoint>> {
    spec.validate()?;
    let tol = tol.unwrap_or(DEFAULT_TOL);
    let (nx, ny) = (spec.x.samples, spec.y.samples);
    Ok((0..nx * ny).into_par_iter().map(|k| spec.evaluate(spec.x.value(k % nx), spec.y.value(k / nx), tol)).collect())
}

pub const CSV_HEADER: &str = "x,y,verdict,code,margin";

pub fn write_csv<W: Write>(mut w: W, points: &[GridPoint]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        writeln!(w, "{},{},{},{},{}", fmt17(p.x), fmt17(p.y), p.verdict, p.code as u8, fmt17(p.margin))?;
    }
    Ok(())
}
