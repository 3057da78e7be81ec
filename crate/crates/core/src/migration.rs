//! Migration rates derived from a Lotka-Volterra trajectory.
//!
//! The system is integrated with fixed-step RK4 and the prey/predator curves
//! are sampled, normalized and sorted into per-rank immigration and
//! emigration tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Populations beyond this magnitude are treated as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Sign convention of the predator equation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LvForm {
    /// `dx/dt = a x - b x y`, `dy/dt = g y - d x y`
    #[default]
    AsPrinted,
    /// `dx/dt = a x - b x y`, `dy/dt = -g y + d x y`
    Conventional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LvParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub x0: f64,
    pub y0: f64,
    pub t_end: f64,
    pub steps: usize,
    pub form: LvForm,
}

impl Default for LvParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.5,
            gamma: 1.0,
            delta: 0.5,
            x0: 1.5,
            y0: 1.5,
            t_end: 10.0,
            steps: 1000,
            form: LvForm::AsPrinted,
        }
    }
}

impl LvParams {
    pub fn validate(&self) -> Result<()> {
        let coeffs = [self.alpha, self.beta, self.gamma, self.delta];
        if coeffs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::Config(
                "LV coefficients must be finite and nonnegative".into(),
            ));
        }
        if !(self.x0 > 0.0 && self.y0 > 0.0 && self.x0.is_finite() && self.y0.is_finite()) {
            return Err(Error::Config(
                "LV initial populations must be positive".into(),
            ));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config("LV t_end must be positive".into()));
        }
        if self.steps < 2 {
            return Err(Error::Config(
                "LV integration needs at least 2 steps".into(),
            ));
        }
        Ok(())
    }

    fn derivative(&self, x: f64, y: f64) -> (f64, f64) {
        let dx = self.alpha * x - self.beta * x * y;
        let dy = match self.form {
            LvForm::AsPrinted => self.gamma * y - self.delta * x * y,
            LvForm::Conventional => -self.gamma * y + self.delta * x * y,
        };
        (dx, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Set when integration stopped early because a population diverged.
    pub truncated: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Sample {
        *self
            .samples
            .last()
            .expect("trajectory always holds the initial sample")
    }

    /// `t,x,y` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{}", s.t, s.x, s.y);
        }
        out
    }
}

/// Classical RK4 with `h = t_end / steps`.
pub fn integrate_lv(params: &LvParams) -> Result<Trajectory> {
    params.validate()?;
    let h = params.t_end / params.steps as f64;
    let mut samples = Vec::with_capacity(params.steps + 1);
    let (mut x, mut y) = (params.x0, params.y0);
    samples.push(Sample { t: 0.0, x, y });
    let mut truncated = false;
    for step in 1..=params.steps {
        let (k1x, k1y) = params.derivative(x, y);
        let (k2x, k2y) = params.derivative(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
        let (k3x, k3y) = params.derivative(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
        let (k4x, k4y) = params.derivative(x + h * k3x, y + h * k3y);
        let nx = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        let ny = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        let finite = nx.is_finite() && ny.is_finite();
        if !finite || nx.abs() > DIVERGENCE_LIMIT || ny.abs() > DIVERGENCE_LIMIT {
            truncated = true;
            break;
        }
        x = nx;
        y = ny;
        samples.push(Sample {
            t: step as f64 * h,
            x,
            y,
        });
    }
    Ok(Trajectory { samples, truncated })
}

/// Rank-indexed migration rates; rank 0 is the worst habitat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigrationSchedule {
    pub immigration: Vec<f64>,
    pub emigration: Vec<f64>,
}

impl MigrationSchedule {
    pub fn pop_size(&self) -> usize {
        self.immigration.len()
    }

    pub fn is_valid(&self) -> bool {
        let in_unit = |v: &f64| (0.0..=1.0).contains(v);
        self.immigration.len() == self.emigration.len()
            && self.immigration.iter().all(in_unit)
            && self.emigration.iter().all(in_unit)
            && self.immigration.windows(2).all(|w| w[0] >= w[1])
            && self.emigration.windows(2).all(|w| w[0] <= w[1])
    }
}

fn normalized(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span > 0.0 && span.is_finite() {
        values
            .iter()
            .map(|v| ((v - lo) / span).clamp(0.0, 1.0))
            .collect()
    } else {
        vec![0.5; values.len()]
    }
}

/// Sample `pop_size` evenly spaced points of the trajectory and turn the
/// prey curve into immigration and the predator curve into emigration.
pub fn build_schedule(traj: &Trajectory, pop_size: usize) -> Result<MigrationSchedule> {
    if pop_size < 2 {
        return Err(Error::Config(format!(
            "population size must be at least 2, got {pop_size}"
        )));
    }
    let len = traj.len();
    if len < 2 * pop_size {
        return Err(Error::Schedule(format!(
            "trajectory has {len} samples{}, need at least {}",
            if traj.truncated {
                " (truncated by divergence)"
            } else {
                ""
            },
            2 * pop_size
        )));
    }
    let picks: Vec<Sample> = (0..pop_size)
        .map(|k| traj.samples[k * (len - 1) / (pop_size - 1)])
        .collect();
    let xs: Vec<f64> = picks.iter().map(|s| s.x).collect();
    let ys: Vec<f64> = picks.iter().map(|s| s.y).collect();

    let mut immigration = normalized(&xs);
    immigration.sort_by(|a, b| b.total_cmp(a));
    let mut emigration = normalized(&ys);
    emigration.sort_by(|a, b| a.total_cmp(b));
    Ok(MigrationSchedule {
        immigration,
        emigration,
    })
}

pub fn schedule_for(params: &LvParams, pop_size: usize) -> Result<MigrationSchedule> {
    build_schedule(&integrate_lv(params)?, pop_size)
}
