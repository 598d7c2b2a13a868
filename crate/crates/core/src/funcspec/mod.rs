//! Scalar functions `f: ℝⁿ → ]-∞, +∞]` as parsed expressions, with numerical
//! Fenchel conjugation, grid minimization, and quadratic lower-bound
//! ("insignificant downside") certification.

pub mod ast;
mod extreal;
mod parse;
pub mod realfn;

pub use ast::Expr;
pub use extreal::ExtReal;
pub use realfn::RealFn;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{DualVector, NormedSpace, Vector};
use crate::region::BoxRegion;
use crate::search::{minimize_on, SearchParams};

/// Threshold beyond which a supremum search is reported as unbounded.
pub const UNBOUNDED_THRESHOLD: f64 = 1e12;

// ---------------------------------------------------------------------------
// ScalarFunc
// ---------------------------------------------------------------------------

/// A scalar function given by an expression tree, with convexity metadata
/// and an optional effective-domain box (`+∞` outside).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFunc {
    ast: Expr,
    dim: usize,
    pub claimed_convex: bool,
    pub claimed_lsc: bool,
    pub domain_box: Option<BoxRegion>,
}

impl ScalarFunc {
    pub fn from_ast(ast: Expr, dim: usize) -> Result<Self> {
        let needed = ast.max_var();
        if needed > dim {
            return Err(Error::DimensionMismatch {
                expected: needed,
                got: dim,
            });
        }
        Ok(ScalarFunc {
            ast,
            dim,
            claimed_convex: false,
            claimed_lsc: true,
            domain_box: None,
        })
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical text form.
    pub fn text(&self) -> String {
        self.ast.to_text()
    }

    pub fn with_convex(mut self, claimed: bool) -> Self {
        self.claimed_convex = claimed;
        self
    }

    pub fn with_domain(mut self, domain: BoxRegion) -> Self {
        self.domain_box = Some(domain);
        self
    }

    /// Evaluate at a point; `+∞` outside the domain box, NaN is an error.
    pub fn eval(&self, x: &Vector) -> Result<ExtReal> {
        self.value(x.coords())
    }

    /// Spot-check the claimed-convex flag by random midpoint inequalities.
    pub fn check_convexity_samples(
        &self,
        box_: &BoxRegion,
        samples: usize,
        tol: f64,
        seed: u64,
    ) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let a: Vec<f64> = (0..self.dim)
                .map(|i| rng.gen_range(box_.lo()[i]..=box_.hi()[i]))
                .collect();
            let b: Vec<f64> = (0..self.dim)
                .map(|i| rng.gen_range(box_.lo()[i]..=box_.hi()[i]))
                .collect();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let (fa, fb, fm) = (self.value(&a)?, self.value(&b)?, self.value(&mid)?);
            if let (Some(fa), Some(fb), Some(fm)) =
                (fa.as_finite(), fb.as_finite(), fm.as_finite())
            {
                if fm > 0.5 * (fa + fb) + tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl RealFn for ScalarFunc {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Result<ExtReal> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if let Some(b) = &self.domain_box {
            if !b.contains(x) {
                return Ok(ExtReal::POS_INF);
            }
        }
        ExtReal::new(self.ast.eval_raw(x)?)
    }
}

/// Parse an expression into a [`ScalarFunc`]; the dimension is inferred from
/// the highest variable index (at least 1).
pub fn parse_func(text: &str) -> Result<ScalarFunc> {
    let ast = parse::Parser::parse(text)?;
    let dim = ast.max_var().max(1);
    ScalarFunc::from_ast(ast, dim)
}

// ---------------------------------------------------------------------------
// Minimization and conjugation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct MinimizeResult {
    pub x_min: Vector,
    pub value: f64,
    pub evaluations: usize,
}

/// Grid-plus-refinement minimization over a box. Deterministic given its
/// parameters; ties break toward lexicographically smaller minimizers.
pub fn minimize(
    f: &dyn RealFn,
    box_: &BoxRegion,
    grid_n: usize,
    refine_iters: usize,
) -> Result<MinimizeResult> {
    minimize_with_tol(f, box_, grid_n, refine_iters, 1e-12)
}

pub(crate) fn minimize_with_tol(
    f: &dyn RealFn,
    box_: &BoxRegion,
    grid_n: usize,
    refine_iters: usize,
    refine_tol: f64,
) -> Result<MinimizeResult> {
    if box_.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: box_.dim(),
        });
    }
    let mut params = SearchParams::for_box(box_, grid_n).with_refine_tol(refine_tol);
    params.refine_iters = refine_iters.max(1);
    let hit = minimize_on(
        |x: &[f64]| {
            let v = f.value(x)?;
            Ok(v.as_finite().map(|v| (v, ())))
        },
        box_,
        &params,
    )?;
    Ok(MinimizeResult {
        x_min: Vector::try_new(hit.point)?,
        value: hit.value,
        evaluations: hit.evaluations,
    })
}

/// Numerical Fenchel conjugate `f*(x*) = sup ⟨x, x*⟩ - f(x)`.
///
/// The supremum is taken over `search_box`, refined until successive
/// refinements agree to `1e-8`. When the maximizer keeps landing on the box
/// boundary the box grows; values beyond [`UNBOUNDED_THRESHOLD`] raise
/// [`Error::UnboundedAbove`]. The result is a certified lower bound on the
/// true conjugate.
pub fn fenchel_conjugate(
    f: &dyn RealFn,
    xs: &DualVector,
    search_box: &BoxRegion,
    grid_n: usize,
) -> Result<f64> {
    if xs.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: xs.dim(),
        });
    }
    let mut box_ = search_box.clone();
    for _growth in 0..60 {
        let neg_obj = |x: &[f64]| -> crate::search::Eval<()> {
            let v = f.value(x)?;
            Ok(v.as_finite().map(|fv| {
                let dot: f64 = x.iter().zip(xs.coords()).map(|(a, b)| a * b).sum();
                (fv - dot, ())
            }))
        };
        let params = SearchParams::for_box(&box_, grid_n).with_refine_tol(1e-8);
        let hit = minimize_on(neg_obj, &box_, &params)?;
        let sup = -hit.value;
        if sup > UNBOUNDED_THRESHOLD {
            return Err(Error::UnboundedAbove {
                threshold: UNBOUNDED_THRESHOLD,
                at: hit.point,
            });
        }
        let on_boundary = hit.point.iter().enumerate().any(|(i, v)| {
            let w = box_.hi()[i] - box_.lo()[i];
            (v - box_.lo()[i]).abs() <= 1e-9 * w || (v - box_.hi()[i]).abs() <= 1e-9 * w
        });
        if !on_boundary {
            return Ok(sup);
        }
        let c = box_.center();
        let half: Vec<f64> = box_
            .lo()
            .iter()
            .zip(box_.hi())
            .map(|(a, b)| b - a)
            .collect();
        box_ = BoxRegion::new(
            c.iter().zip(&half).map(|(c, h)| c - h).collect(),
            c.iter().zip(&half).map(|(c, h)| c + h).collect(),
        )?;
    }
    Err(Error::UnboundedAbove {
        threshold: UNBOUNDED_THRESHOLD,
        at: box_.center(),
    })
}

// ---------------------------------------------------------------------------
// Downside certificates and the stability bound
// ---------------------------------------------------------------------------

/// A claimed quadratic lower bound `f ≥ -a₀‖·‖² - b₀‖·‖ - c₀` with
/// `a₀ < ½`, grid-audited over `validity_box`.
#[derive(Clone, Debug)]
pub struct DownsideCertificate {
    pub a0: f64,
    pub b0: f64,
    pub c0: f64,
    pub validity_box: BoxRegion,
    /// Filled by [`verify_downside`]: max over the grid of
    /// `-a₀‖x‖² - b₀‖x‖ - c₀ - f(x)`; the bound held iff `≤ 0`.
    pub worst_violation: Option<f64>,
}

impl DownsideCertificate {
    pub fn new(a0: f64, b0: f64, c0: f64, validity_box: BoxRegion) -> Result<Self> {
        if !(a0 < 0.5) {
            return Err(Error::InvalidDownside(format!(
                "a0 = {a0} must be strictly below 1/2"
            )));
        }
        Ok(DownsideCertificate {
            a0,
            b0,
            c0,
            validity_box,
            worst_violation: None,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.a0 < 0.5 && self.worst_violation.map_or(false, |w| w <= 0.0)
    }
}

/// Audit a downside certificate on a grid: fills `worst_violation` with the
/// largest observed excess of the quadratic lower bound over `f`.
pub fn verify_downside(
    space: &NormedSpace,
    f: &dyn RealFn,
    cert: &DownsideCertificate,
    grid_n: usize,
) -> Result<DownsideCertificate> {
    if !(cert.a0 < 0.5) {
        return Err(Error::InvalidDownside(format!(
            "a0 = {} must be strictly below 1/2",
            cert.a0
        )));
    }
    let counts = cert.validity_box.per_axis_counts(grid_n);
    let mut worst = f64::NEG_INFINITY;
    for p in cert.validity_box.grid_points(&counts) {
        let fv = f.value(&p)?;
        let Some(fv) = fv.as_finite() else { continue };
        let n = space.norm(&Vector::try_new(p)?)?;
        let bound = -cert.a0 * n * n - cert.b0 * n - cert.c0;
        worst = worst.max(bound - fv);
    }
    if worst == f64::NEG_INFINITY {
        return Err(Error::AllInfinite);
    }
    let mut out = cert.clone();
    out.worst_violation = Some(worst);
    Ok(out)
}

/// The witness-norm bound used by the stable-density pipeline:
///
/// ```text
/// a = ½ - a₀,  b = ‖y‖ + ‖y*‖ + b₀,  c = c₀ - j(y),
/// M = b/(2a) + sqrt(b² + 4a(c + m + 1))/(2a) + ‖y‖ + 2
/// ```
///
/// where `m` is the infimum of the shifted objective. A negative
/// discriminant means `m` was not a true infimum.
pub fn stability_bound(
    space: &NormedSpace,
    cert: &DownsideCertificate,
    y: &Vector,
    ystar: &DualVector,
    m: f64,
) -> Result<f64> {
    if !cert.is_valid() {
        return Err(Error::InvalidDownside(
            "certificate must be verified valid before computing the bound".into(),
        ));
    }
    let a = 0.5 - cert.a0;
    let b = space.norm(y)? + space.dual_norm(ystar)? + cert.b0;
    let c = cert.c0 - space.j(y)?;
    let disc = b * b + 4.0 * a * (c + m + 1.0);
    if disc < 0.0 {
        return Err(Error::BadInfimum { m });
    }
    Ok(b / (2.0 * a) + disc.sqrt() / (2.0 * a) + space.norm(y)? + 2.0)
}
