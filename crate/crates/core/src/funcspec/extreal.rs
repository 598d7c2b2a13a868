//! Extended reals `]-∞, +∞]` with convex-analysis conventions.

use std::fmt;

use crate::error::{Error, Result};

/// A value in `]-∞, +∞]`: finite or `+∞`, never NaN or `-∞`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const POS_INF: ExtReal = ExtReal(f64::INFINITY);

    /// Accepts finite values and `+∞`; rejects NaN and `-∞`.
    pub fn new(v: f64) -> Result<Self> {
        if v.is_nan() {
            return Err(Error::NonFinite("NaN is not an extended real".into()));
        }
        if v == f64::NEG_INFINITY {
            return Err(Error::NonFinite(
                "-inf is outside the codomain ]-inf, +inf]".into(),
            ));
        }
        Ok(ExtReal(v))
    }

    pub fn finite(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("expected finite value, got {v}")));
        }
        Ok(ExtReal(v))
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }

    /// Raw value (`+∞` propagates as `f64::INFINITY`).
    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn as_finite(&self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// Addition with `+∞` dominating.
    pub fn add(&self, other: ExtReal) -> ExtReal {
        if self.is_infinite() || other.is_infinite() {
            ExtReal::POS_INF
        } else {
            ExtReal(self.0 + other.0)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "+inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nan_and_neg_inf() {
        assert!(ExtReal::new(f64::NAN).is_err());
        assert!(ExtReal::new(f64::NEG_INFINITY).is_err());
        assert!(ExtReal::new(f64::INFINITY).is_ok());
    }

    #[test]
    fn infinity_dominates_addition() {
        let a = ExtReal::finite(3.0).unwrap();
        assert_eq!(a.add(ExtReal::POS_INF), ExtReal::POS_INF);
        assert_eq!(a.add(a).value(), 6.0);
    }
}
