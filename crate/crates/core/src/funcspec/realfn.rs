//! Evaluable extended-real functions and the combinators the variational
//! machinery composes: tilts `f - ⟨·, u*⟩`, quadratic shifts
//! `f + j(·-y) - ⟨·, y*⟩`, and norm penalties `f + β‖·-c‖`.

use super::extreal::ExtReal;
use crate::error::Result;
use crate::geometry::{DualVector, NormedSpace, Vector};

/// A function `ℝⁿ → ]-∞, +∞]` that can be evaluated pointwise.
pub trait RealFn: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> Result<ExtReal>;
}

/// `f(x) - ⟨x, u*⟩`.
pub struct Tilted<'a> {
    pub f: &'a dyn RealFn,
    pub ustar: &'a DualVector,
}

impl RealFn for Tilted<'_> {
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn value(&self, x: &[f64]) -> Result<ExtReal> {
        let fv = self.f.value(x)?;
        if fv.is_infinite() {
            return Ok(ExtReal::POS_INF);
        }
        let dot: f64 = x.iter().zip(self.ustar.coords()).map(|(a, b)| a * b).sum();
        ExtReal::new(fv.value() - dot)
    }
}

/// `f(x) + ½‖x - y‖² - ⟨x, y*⟩` in the norm of `space`.
pub struct QuadShifted<'a> {
    pub f: &'a dyn RealFn,
    pub space: &'a NormedSpace,
    pub y: &'a Vector,
    pub ystar: &'a DualVector,
}

impl RealFn for QuadShifted<'_> {
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn value(&self, x: &[f64]) -> Result<ExtReal> {
        let fv = self.f.value(x)?;
        if fv.is_infinite() {
            return Ok(ExtReal::POS_INF);
        }
        let xv = Vector::try_new(x.to_vec())?;
        let shift = xv.sub(self.y)?;
        let jv = self.space.j(&shift)?;
        let dot: f64 = x.iter().zip(self.ystar.coords()).map(|(a, b)| a * b).sum();
        ExtReal::new(fv.value() + jv - dot)
    }
}

/// `f(x) + β‖x - c‖` in the norm of `space`.
pub struct NormPenalized<'a> {
    pub f: &'a dyn RealFn,
    pub space: &'a NormedSpace,
    pub beta: f64,
    pub center: &'a Vector,
}

impl RealFn for NormPenalized<'_> {
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn value(&self, x: &[f64]) -> Result<ExtReal> {
        let fv = self.f.value(x)?;
        if fv.is_infinite() {
            return Ok(ExtReal::POS_INF);
        }
        let xv = Vector::try_new(x.to_vec())?;
        let d = self.space.norm(&xv.sub(self.center)?)?;
        ExtReal::new(fv.value() + self.beta * d)
    }
}

/// The constant zero function of a given dimension.
pub struct ZeroFn(pub usize);

impl RealFn for ZeroFn {
    fn dim(&self) -> usize {
        self.0
    }
    fn value(&self, _x: &[f64]) -> Result<ExtReal> {
        ExtReal::finite(0.0)
    }
}
