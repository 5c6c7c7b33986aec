use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    ThresholdDb,
    NElements,
    ElementSide,
    Sigma,
    ThetaS,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::ThresholdDb => "threshold_db",
            SweepVariable::NElements => "n_elements",
            SweepVariable::ElementSide => "element_side",
            SweepVariable::Sigma => "sigma",
            SweepVariable::ThetaS => "theta_s",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "threshold_db" => SweepVariable::ThresholdDb,
            "n_elements" => SweepVariable::NElements,
            "element_side" => SweepVariable::ElementSide,
            "sigma" => SweepVariable::Sigma,
            "theta_s" => SweepVariable::ThetaS,
            other => {
                return Err(format!(
                    "unknown sweep variable `{other}` \
                     (threshold_db, n_elements, element_side, sigma, theta_s)"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

impl FromStr for SweepScale {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "linear" => Ok(SweepScale::Linear),
            "log" => Ok(SweepScale::Log),
            other => Err(format!("unknown scale `{other}` (linear, log)")),
        }
    }
}

/// Evenly spaced points of one scenario variable, in the variable's own
/// unit (dB, count, metres, dimensionless, degrees).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: SweepScale,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        points: usize,
        scale: SweepScale,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::domain("SweepSpec", msg));
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return bad(format!("need finite start < stop, got {start} .. {stop}"));
        }
        if points < 2 {
            return bad(format!("need at least 2 points, got {points}"));
        }
        if scale == SweepScale::Log && start <= 0.0 {
            return bad(format!("log scale needs a positive start, got {start}"));
        }
        Ok(Self {
            variable,
            start,
            stop,
            points,
            scale,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        let mut v: Vec<f64> = match self.scale {
            SweepScale::Linear => {
                let step = (self.stop - self.start) / last;
                (0..self.points)
                    .map(|i| self.start + step * i as f64)
                    .collect()
            }
            SweepScale::Log => {
                let (a, b) = (self.start.ln(), self.stop.ln());
                let step = (b - a) / last;
                (0..self.points)
                    .map(|i| (a + step * i as f64).exp())
                    .collect()
            }
        };
        v[0] = self.start;
        v[self.points - 1] = self.stop;
        v
    }
}
