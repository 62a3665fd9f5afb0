use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The four linear forms in (x₀, x₁) vanishing at λ = 0, ∞, −1, a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinearForm {
    X0,
    X1,
    X0PlusX1,
    X0MinusAX1,
}

impl LinearForm {
    pub const ALL: [LinearForm; 4] = [
        LinearForm::X0,
        LinearForm::X1,
        LinearForm::X0PlusX1,
        LinearForm::X0MinusAX1,
    ];

    /// ℓ(λ, 1).
    pub fn eval(self, a: f64, lambda: f64) -> f64 {
        match self {
            LinearForm::X0 => lambda,
            LinearForm::X1 => 1.0,
            LinearForm::X0PlusX1 => lambda + 1.0,
            LinearForm::X0MinusAX1 => lambda - a,
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinearForm::X0 => "x0",
            LinearForm::X1 => "x1",
            LinearForm::X0PlusX1 => "x0+x1",
            LinearForm::X0MinusAX1 => "x0-ax1",
        })
    }
}

impl FromStr for LinearForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        match t.as_str() {
            "x0" => Ok(LinearForm::X0),
            "x1" => Ok(LinearForm::X1),
            "x0+x1" | "x1+x0" => Ok(LinearForm::X0PlusX1),
            "x0-ax1" | "x0-a*x1" => Ok(LinearForm::X0MinusAX1),
            _ => Err(Error::Parse(format!(
                "unknown linear form {s:?}; expected x0, x1, x0+x1 or x0-ax1"
            ))),
        }
    }
}

/// An ordered choice (ℓ₁, ℓ₂, ℓ₃) of distinct forms; ℓ₄ is the remaining one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolutionChoice {
    pub l1: LinearForm,
    pub l2: LinearForm,
    pub l3: LinearForm,
}

impl ResolutionChoice {
    pub fn new(l1: LinearForm, l2: LinearForm, l3: LinearForm) -> Result<Self> {
        if l1 == l2 || l1 == l3 || l2 == l3 {
            return Err(Error::Parse(format!(
                "forms must be distinct, got {l1},{l2},{l3}"
            )));
        }
        Ok(Self { l1, l2, l3 })
    }

    pub fn l4(&self) -> LinearForm {
        *LinearForm::ALL
            .iter()
            .find(|&&l| l != self.l1 && l != self.l2 && l != self.l3)
            .expect("three of four used")
    }

    pub fn all() -> Vec<ResolutionChoice> {
        let mut out = Vec::with_capacity(24);
        for &l1 in &LinearForm::ALL {
            for &l2 in &LinearForm::ALL {
                for &l3 in &LinearForm::ALL {
                    if let Ok(r) = Self::new(l1, l2, l3) {
                        out.push(r);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ResolutionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.l1, self.l2, self.l3)
    }
}

/// Parses `l1,l2,l3`, e.g. `x1,x0+x1,x0`.
impl FromStr for ResolutionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected three comma-separated forms, got {s:?}"
            )));
        }
        Self::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Interval {
    I1,
    I2,
    I3,
    I4,
}

impl Interval {
    /// (left, right) with ±∞ for the unbounded ends.
    pub fn bounds(self, a: f64) -> (f64, f64) {
        match self {
            Interval::I1 => (f64::NEG_INFINITY, -1.0),
            Interval::I2 => (-1.0, 0.0),
            Interval::I3 => (0.0, a),
            Interval::I4 => (a, f64::INFINITY),
        }
    }

    pub fn containing(a: f64, lambda: f64) -> Option<Interval> {
        [Interval::I1, Interval::I2, Interval::I3, Interval::I4]
            .into_iter()
            .find(|i| {
                let (l, r) = i.bounds(a);
                lambda > l && lambda < r
            })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_four_choices() {
        assert_eq!(ResolutionChoice::all().len(), 24);
    }

    #[test]
    fn parse_round_trip() {
        for r in ResolutionChoice::all() {
            assert_eq!(r.to_string().parse::<ResolutionChoice>().unwrap(), r);
        }
        assert!("x0,x0,x1".parse::<ResolutionChoice>().is_err());
        assert!("x0,x1".parse::<ResolutionChoice>().is_err());
        assert_eq!(
            " x0 - a*x1 ".parse::<LinearForm>().unwrap(),
            LinearForm::X0MinusAX1
        );
    }
}
