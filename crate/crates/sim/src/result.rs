//! Time series and snapshots produced by the solvers.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One row of the time series. Columns that do not apply to a run are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub t: f64,
    pub mass: f64,
    pub mom_x: f64,
    pub mom_y: f64,
    pub flux_bx: f64,
    pub flux_by: f64,
    pub div_norm: f64,
    pub front_amp: f64,
    pub energy: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// Mean front position over rows (level crossing).
    pub front_position: f64,
    /// Mean 10%-90% transition width over rows.
    pub front_width: f64,
}

pub const CSV_HEADER: &str = "t,mass,momX,momY,fluxBx,fluxBy,divNorm,frontAmp,energy";

impl Record {
    pub fn csv_row(&self) -> String {
        [
            self.t,
            self.mass,
            self.mom_x,
            self.mom_y,
            self.flux_bx,
            self.flux_by,
            self.div_norm,
            self.front_amp,
            self.energy,
        ]
        .iter()
        .map(|x| fmt17(*x))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Seventeen significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Cell-centred field `(h, v1, v2, B1, B2)`; for linear runs `(p, v1, v2, B1, B2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub n1: usize,
    pub n2: usize,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// Row-major, index `j * n1 + i`.
    pub values: Vec<[f64; 5]>,
}

impl Snapshot {
    pub fn at(&self, i: usize, j: usize) -> [f64; 5] {
        self.values[j * self.n1 + i]
    }

    pub fn write_csv<W: Write>(&self, mut w: W, names: [&str; 5]) -> Result<()> {
        writeln!(w, "i,j,x1,x2,{}", names.join(","))?;
        for j in 0..self.n2 {
            for i in 0..self.n1 {
                let v = self.at(i, j);
                let vals: Vec<String> = v.iter().map(|x| fmt17(*x)).collect();
                writeln!(w, "{i},{j},{},{},{}", fmt17(self.x1[i]), fmt17(self.x2[j]), vals.join(","))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub steps: usize,
    pub final_time: f64,
    /// Largest per-step change of any cell-sum not accounted for by boundary
    /// fluxes and sources, relative to `max(1, |sum|)`.
    pub max_conservation_defect: f64,
    pub max_front_drift: Option<f64>,
    pub initial_div_norm: Option<f64>,
    pub max_div_norm: Option<f64>,
    pub initial_front_amp: Option<f64>,
    pub final_front_amp: Option<f64>,
    /// `a(T) / a(0)`.
    pub amp_ratio: Option<f64>,
    /// `sup_t ||U(t)|| / ||U(0)||` in the energy norm.
    pub norm_ratio: Option<f64>,
    /// `sup_t` of the difference-quotient norm ratio.
    pub gradient_norm_ratio: Option<f64>,
    /// `(int_0^T ||U|_{x1=0}||² dt)^{1/2}`.
    pub boundary_trace_norm: Option<f64>,
    pub max_phi_norm: Option<f64>,
    /// Relative residual of the discrete pressure wave equation at `T`.
    pub wave_residual: Option<f64>,
    /// Discrete L1 error against the exact field at `T`.
    pub l1_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub records: Vec<Record>,
    pub summary: Summary,
    pub snapshot: Snapshot,
    pub dx: [f64; 2],
    /// `h` for nonlinear runs, `p` for the linearized problem.
    pub first_field: String,
}

impl SimResult {
    pub fn write_series_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(w, "{}", r.csv_row())?;
        }
        Ok(())
    }

    pub fn write_snapshot_csv<W: Write>(&self, w: W) -> Result<()> {
        let first = if self.first_field == "p" { "p" } else { "h" };
        self.snapshot.write_csv(w, [first, "v1", "v2", "B1", "B2"])
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.t)
    }
}
