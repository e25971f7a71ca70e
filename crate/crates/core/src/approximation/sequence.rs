use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive sequence `(a_i)` used to build `conv{0, a_1 e_1, ..., a_N e_N}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    /// `a_i = 1 / i`
    Harmonic,
    /// `a_i = i^{-p}`
    Power { p: f64 },
    /// `a_i = r^i`
    Geometric { r: f64 },
    Explicit { values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Summability {
    Divergent,
    Convergent,
    /// A finite explicit list.
    Finite,
}

impl SequenceSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Harmonic => Ok(()),
            Self::Power { p } if *p > 0.0 && p.is_finite() => Ok(()),
            Self::Power { p } => Err(Error::validation(format!("power exponent must be positive, got {p}"))),
            Self::Geometric { r } if *r > 0.0 && *r < 1.0 => Ok(()),
            Self::Geometric { r } => Err(Error::validation(format!("geometric ratio must lie in (0, 1), got {r}"))),
            Self::Explicit { values } => match values.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
                Some(a) => Err(Error::validation(format!("sequence terms must be positive, got {a}"))),
                None if values.is_empty() => Err(Error::validation("explicit sequence is empty")),
                None => Ok(()),
            },
        }
    }

    /// Term `a_i` for `i >= 1`.
    pub fn term(&self, i: usize) -> Option<f64> {
        let x = i as f64;
        match self {
            Self::Harmonic => Some(1.0 / x),
            Self::Power { p } => Some(x.powf(-p)),
            Self::Geometric { r } => Some(r.powi(i as i32)),
            Self::Explicit { values } => values.get(i - 1).copied(),
        }
    }

    /// The first `n` terms.
    pub fn terms(&self, n: usize) -> Result<Vec<f64>> {
        self.validate()?;
        (1..=n)
            .map(|i| {
                self.term(i)
                    .ok_or_else(|| Error::validation(format!("explicit sequence has fewer than {n} terms")))
            })
            .collect()
    }

    pub fn summability(&self) -> Summability {
        match self {
            Self::Harmonic => Summability::Divergent,
            Self::Power { p } if *p <= 1.0 => Summability::Divergent,
            Self::Power { .. } | Self::Geometric { .. } => Summability::Convergent,
            Self::Explicit { .. } => Summability::Finite,
        }
    }

    pub fn max_len(&self) -> Option<usize> {
        match self {
            Self::Explicit { values } => Some(values.len()),
            _ => None,
        }
    }
}

/// Parses `harmonic`, `power:<p>` or `geometric:<r>`.
impl std::str::FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::validation(format!("bad sequence parameter '{v}'")))
        };
        let spec = match s.split_once(':') {
            None if s == "harmonic" => Self::Harmonic,
            Some(("power", v)) => Self::Power { p: parse(v)? },
            Some(("geometric", v)) => Self::Geometric { r: parse(v)? },
            _ => {
                return Err(Error::validation(format!(
                    "unknown sequence '{s}' (expected harmonic, power:<p> or geometric:<r>)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}
