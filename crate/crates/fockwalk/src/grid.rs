use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("expected `start:stop:steps`, a number, or a comma-separated list, got `{0}`")]
    Syntax(String),
    #[error("`{0}` is not a number")]
    Number(String),
    #[error("a grid needs at least one step")]
    NoSteps,
}

/// Sweep values: `start:stop:steps` (inclusive, evenly spaced), a single
/// number, or a comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    values: Vec<f64>,
    spec: String,
}

impl Grid {
    pub fn linspace(start: f64, stop: f64, steps: usize) -> Result<Self, GridError> {
        if steps == 0 {
            return Err(GridError::NoSteps);
        }
        let values = if steps == 1 {
            vec![start]
        } else {
            let h = (stop - start) / (steps - 1) as f64;
            // pin the last point so `0:1:11` ends exactly at 1
            (0..steps)
                .map(|i| if i == steps - 1 { stop } else { start + h * i as f64 })
                .collect()
        };
        Ok(Self { values, spec: format!("{start}:{stop}:{steps}") })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn number(s: &str) -> Result<f64, GridError> {
    let t = s.trim();
    let v = match t {
        "pi" => std::f64::consts::PI,
        "pi/2" => std::f64::consts::FRAC_PI_2,
        _ => t.parse().map_err(|_| GridError::Number(t.to_string()))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GridError::Number(t.to_string()))
    }
}

impl FromStr for Grid {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, stop, steps] => {
                let steps: usize = steps
                    .trim()
                    .parse()
                    .map_err(|_| GridError::Syntax(s.to_string()))?;
                let mut g = Self::linspace(number(start)?, number(stop)?, steps)?;
                g.spec = s.to_string();
                Ok(g)
            }
            [list] => {
                let values = list.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
                Ok(Self { values, spec: s.to_string() })
            }
            _ => Err(GridError::Syntax(s.to_string())),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}
