//! Subdifferential engines: finite representative sets of subgradients for
//! parsed functions, produced by one of four strategies.
//!
//! * `polynomial` — exact symbolic gradients of polynomial trees;
//! * `smooth` — symbolic gradients when the tree is `abs`/`max`-free,
//!   Richardson-extrapolated central differences otherwise;
//! * `convex1d` — one-sided derivatives on the line with kink detection,
//!   emitting the interval `[f'₋, f'₊]` at kinks;
//! * `piecewise` — exact max-of-smooth-pieces decomposition (`abs` and
//!   `max` rewritten structurally), emitting active-piece gradients.
//!
//! A companion harness audits the two weak-subdifferential axioms: zero
//! belongs to the set at strict global minimizers, and the sum rule
//! `∂(f+h) ⊆ ∂f + ∂h` holds for continuous convex `h`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcspec::{Expr, RealFn, ScalarFunc};
use crate::geometry::{DualPair, DualVector, NormedSpace, Vector};
use crate::operators::{AnalyticOp, OperatorGraph};
use crate::region::BoxRegion;
use crate::sets::{ValueSet, DEFAULT_INTERIOR_SAMPLES};

/// Gap between one-sided derivatives above which a point counts as a kink.
pub const KINK_GAP: f64 = 1e-5;

/// Step ladder for one-sided and central differences.
const FD_STEPS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    Convex1d,
    Smooth,
    Polynomial,
    PiecewiseConvex,
}

impl EngineKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "convex1d" => Ok(EngineKind::Convex1d),
            "smooth" => Ok(EngineKind::Smooth),
            "polynomial" => Ok(EngineKind::Polynomial),
            "piecewise" | "piecewise_convex" => Ok(EngineKind::PiecewiseConvex),
            other => Err(Error::InvalidArgument(format!(
                "unknown engine {other:?} (expected convex1d|smooth|polynomial|piecewise)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EngineKind::Convex1d => "convex1d",
            EngineKind::Smooth => "smooth",
            EngineKind::Polynomial => "polynomial",
            EngineKind::PiecewiseConvex => "piecewise",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SubdiffEngine {
    kind: EngineKind,
}

impl SubdiffEngine {
    pub fn new(kind: EngineKind) -> Self {
        SubdiffEngine { kind }
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    /// The representative subgradient set of `f` at `x`.
    pub fn subdiff_at(
        &self,
        f: &ScalarFunc,
        space: &NormedSpace,
        x: &Vector,
    ) -> Result<ValueSet> {
        if x.dim() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: x.dim(),
            });
        }
        if !f.eval(x)?.is_finite() {
            return Err(Error::OutsideDomain);
        }
        match self.kind {
            EngineKind::Polynomial => {
                if !f.ast().is_polynomial() {
                    return Err(Error::EngineMismatch(
                        "polynomial engine needs a polynomial tree".into(),
                    ));
                }
                Ok(ValueSet::singleton(symbolic_gradient(f, x)?))
            }
            EngineKind::Smooth => {
                if f.ast().is_smooth() {
                    Ok(ValueSet::singleton(symbolic_gradient(f, x)?))
                } else {
                    Ok(ValueSet::singleton(central_gradient(f, x)?))
                }
            }
            EngineKind::Convex1d => {
                if f.dim() != 1 {
                    return Err(Error::EngineMismatch(
                        "convex1d engine is one-dimensional".into(),
                    ));
                }
                let left = one_sided_derivative(f, x.coords()[0], -1.0)?;
                let right = one_sided_derivative(f, x.coords()[0], 1.0)?;
                if right - left > KINK_GAP {
                    Ok(ValueSet::interval(left, right))
                } else {
                    Ok(ValueSet::singleton(DualVector::scalar(
                        0.5 * (left + right),
                    )))
                }
            }
            EngineKind::PiecewiseConvex => {
                let pieces = convex_pieces(f.ast())?;
                let vals: Vec<f64> = pieces
                    .iter()
                    .map(|p| p.eval_raw(x.coords()))
                    .collect::<Result<_>>()?;
                let m = vals.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b));
                let tol = 1e-9 * (1.0 + m.abs());
                let mut grads = Vec::new();
                for (p, v) in pieces.iter().zip(&vals) {
                    if m - v <= tol {
                        let pf = ScalarFunc::from_ast(p.clone(), f.dim())?;
                        grads.push(symbolic_gradient(&pf, x)?);
                    }
                }
                grads.sort_by(|a, b| a.lex_cmp(b));
                grads.dedup();
                if f.dim() == 1 {
                    let lo = grads
                        .iter()
                        .map(|g| g.coords()[0])
                        .fold(f64::INFINITY, f64::min);
                    let hi = grads
                        .iter()
                        .map(|g| g.coords()[0])
                        .fold(f64::NEG_INFINITY, f64::max);
                    if hi - lo > 0.0 {
                        Ok(ValueSet::interval(lo, hi))
                    } else {
                        Ok(ValueSet::singleton(grads.remove(0)))
                    }
                } else if grads.len() == 1 {
                    Ok(ValueSet::singleton(grads.remove(0)))
                } else {
                    // Vertices plus the centroid as interior representative.
                    let dim = space.dim();
                    let centroid = DualVector::new(
                        (0..dim)
                            .map(|i| {
                                grads.iter().map(|g| g.coords()[i]).sum::<f64>()
                                    / grads.len() as f64
                            })
                            .collect(),
                    );
                    grads.push(centroid);
                    Ok(ValueSet::Points(grads))
                }
            }
        }
    }

    /// Sampled graph of the subdifferential over a box.
    pub fn subdiff_graph(
        &self,
        f: &ScalarFunc,
        space: &NormedSpace,
        box_: &BoxRegion,
        budget: usize,
    ) -> Result<OperatorGraph> {
        let analytic = self.analytic_operator(f, space, box_.clone())?;
        crate::operators::graph_sample(&analytic, budget, 0)
    }

    /// The subdifferential as an analytic operator (image sets computed on
    /// demand), for refinement searches over the continuum.
    pub fn analytic_operator(
        &self,
        f: &ScalarFunc,
        space: &NormedSpace,
        domain: BoxRegion,
    ) -> Result<OperatorGraph> {
        if space.dim() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: space.dim(),
            });
        }
        let engine = *self;
        let f = f.clone();
        let label = format!("subdiff[{}]({})", engine.kind().name(), f.text());
        let op = AnalyticOp::new(
            domain,
            label,
            Arc::new(move |space: &NormedSpace, x: &Vector| {
                match engine.subdiff_at(&f, space, x) {
                    Ok(set) => vec![set],
                    Err(_) => vec![],
                }
            }),
        );
        OperatorGraph::analytic(space.clone(), op)
    }
}

/// Exact symbolic gradient (errors on `abs`/`max` nodes).
fn symbolic_gradient(f: &ScalarFunc, x: &Vector) -> Result<DualVector> {
    let mut g = Vec::with_capacity(f.dim());
    for var in 1..=f.dim() {
        let d = f.ast().derivative(var)?;
        g.push(d.eval_raw(x.coords())?);
    }
    DualVector::try_new(g)
}

/// Richardson-extrapolated central differences.
fn central_gradient(f: &ScalarFunc, x: &Vector) -> Result<DualVector> {
    let mut g = Vec::with_capacity(f.dim());
    for var in 0..f.dim() {
        let samples: Vec<(f64, f64)> = FD_STEPS
            .iter()
            .map(|&h| {
                let mut xp = x.coords().to_vec();
                let mut xm = x.coords().to_vec();
                xp[var] += h;
                xm[var] -= h;
                let fp = f.value(&xp)?;
                let fm = f.value(&xm)?;
                match (fp.as_finite(), fm.as_finite()) {
                    (Some(fp), Some(fm)) => Ok((h, (fp - fm) / (2.0 * h))),
                    _ => Err(Error::OutsideDomain),
                }
            })
            .collect::<Result<_>>()?;
        g.push(neville_at_zero(&samples));
    }
    DualVector::try_new(g)
}

/// One-sided derivative via difference quotients on the step ladder,
/// extrapolated to `h → 0` (Neville's scheme in `h`).
fn one_sided_derivative(f: &ScalarFunc, x: f64, dir: f64) -> Result<f64> {
    let samples: Vec<(f64, f64)> = FD_STEPS
        .iter()
        .map(|&h| {
            let fx = f.value(&[x])?;
            let fh = f.value(&[x + dir * h])?;
            match (fx.as_finite(), fh.as_finite()) {
                (Some(fx), Some(fh)) => Ok((h, dir * (fh - fx) / h)),
                _ => Err(Error::OutsideDomain),
            }
        })
        .collect::<Result<_>>()?;
    Ok(neville_at_zero(&samples))
}

/// Polynomial extrapolation of `(h, v)` samples to `h = 0`.
fn neville_at_zero(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len();
    let mut p: Vec<f64> = samples.iter().map(|(_, v)| *v).collect();
    let h: Vec<f64> = samples.iter().map(|(h, _)| *h).collect();
    for level in 1..n {
        for i in 0..n - level {
            p[i] = ((0.0 - h[i + level]) * p[i] - (0.0 - h[i]) * p[i + 1]) / (h[i] - h[i + level]);
        }
    }
    p[0]
}

/// Decompose an expression as `max(pieces)` with each piece symbolically
/// differentiable. `abs(g)` becomes `max(g, -g)`; sums distribute.
fn convex_pieces(e: &Expr) -> Result<Vec<Expr>> {
    const MAX_PIECES: usize = 256;
    let pieces = match e {
        Expr::Max(args) => {
            let mut out = Vec::new();
            for a in args {
                out.extend(convex_pieces(a)?);
            }
            out
        }
        Expr::Abs(g) => {
            if !g.is_smooth() {
                return Err(Error::EngineMismatch(
                    "abs of a nonsmooth expression is not piece-decomposable".into(),
                ));
            }
            vec![
                (**g).clone(),
                Expr::Sub(Box::new(Expr::Num(0.0)), g.clone()),
            ]
        }
        Expr::Add(a, b) => {
            let pa = convex_pieces(a)?;
            let pb = convex_pieces(b)?;
            let mut out = Vec::with_capacity(pa.len() * pb.len());
            for x in &pa {
                for y in &pb {
                    out.push(Expr::Add(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
            out
        }
        Expr::Sub(a, b) => {
            if !b.is_smooth() {
                return Err(Error::EngineMismatch(
                    "subtracting a nonsmooth expression breaks the max decomposition".into(),
                ));
            }
            convex_pieces(a)?
                .into_iter()
                .map(|p| Expr::Sub(Box::new(p), b.clone()))
                .collect()
        }
        Expr::Mul(a, b) => match (a.is_smooth(), b.is_smooth()) {
            (true, true) => vec![e.clone()],
            (false, true) | (true, false) => {
                let (coeff, inner) = if a.is_smooth() { (a, b) } else { (b, a) };
                match **coeff {
                    Expr::Num(c) if c >= 0.0 => convex_pieces(inner)?
                        .into_iter()
                        .map(|p| Expr::Mul(Box::new(Expr::Num(c)), Box::new(p)))
                        .collect(),
                    _ => {
                        return Err(Error::EngineMismatch(
                            "nonsmooth factors need a nonnegative constant coefficient".into(),
                        ))
                    }
                }
            }
            (false, false) => {
                return Err(Error::EngineMismatch(
                    "product of nonsmooth expressions is not piece-decomposable".into(),
                ))
            }
        },
        other => {
            if other.is_smooth() {
                vec![other.clone()]
            } else {
                return Err(Error::EngineMismatch(format!(
                    "cannot decompose {} into smooth pieces",
                    other.to_text()
                )));
            }
        }
    };
    if pieces.len() > MAX_PIECES {
        return Err(Error::EngineMismatch(format!(
            "piece decomposition exploded to {} pieces",
            pieces.len()
        )));
    }
    Ok(pieces)
}

// ---------------------------------------------------------------------------
// Convex probes with exact subdifferentials
// ---------------------------------------------------------------------------

/// A continuous convex function with a closed-form subdifferential, used as
/// the `h` in the sum-rule audit.
#[derive(Clone, Debug)]
pub enum ConvexProbe {
    /// `⟨a, x⟩ + b`.
    Affine { a: DualVector, b: f64 },
    /// `½ Σ curvᵢ xᵢ² + ⟨lin, x⟩` with `curvᵢ ≥ 0`.
    Quadratic { curv: Vec<f64>, lin: DualVector },
    /// `β ‖x - center‖`.
    NormDist { beta: f64, center: Vector },
}

impl ConvexProbe {
    pub fn affine(a: DualVector, b: f64) -> Self {
        ConvexProbe::Affine { a, b }
    }

    pub fn quadratic(curv: Vec<f64>, lin: DualVector) -> Result<Self> {
        if curv.iter().any(|c| *c < 0.0) {
            return Err(Error::NonConvexProbe(
                "quadratic curvature must be nonnegative".into(),
            ));
        }
        Ok(ConvexProbe::Quadratic { curv, lin })
    }

    pub fn norm_dist(beta: f64, center: Vector) -> Result<Self> {
        if beta <= 0.0 {
            return Err(Error::NonConvexProbe("beta must be positive".into()));
        }
        Ok(ConvexProbe::NormDist { beta, center })
    }

    pub fn value(&self, space: &NormedSpace, x: &Vector) -> Result<f64> {
        match self {
            ConvexProbe::Affine { a, b } => Ok(space.pairing(x, a)? + b),
            ConvexProbe::Quadratic { curv, lin } => {
                let q: f64 = x
                    .coords()
                    .iter()
                    .zip(curv)
                    .map(|(v, c)| 0.5 * c * v * v)
                    .sum();
                Ok(q + space.pairing(x, lin)?)
            }
            ConvexProbe::NormDist { beta, center } => {
                Ok(beta * space.norm(&x.sub(center)?)?)
            }
        }
    }

    /// Exact subdifferential. For the norm-distance probe at its center the
    /// set is the dual ball of radius `β`; away from the center it is the
    /// scaled duality face of the offset, normalized to unit dual norm.
    pub fn exact_subdiff(&self, space: &NormedSpace, x: &Vector) -> Result<ValueSet> {
        match self {
            ConvexProbe::Affine { a, .. } => Ok(ValueSet::singleton(a.clone())),
            ConvexProbe::Quadratic { curv, lin } => Ok(ValueSet::singleton(DualVector::new(
                x.coords()
                    .iter()
                    .zip(curv)
                    .zip(lin.coords())
                    .map(|((v, c), l)| c * v + l)
                    .collect(),
            ))),
            ConvexProbe::NormDist { beta, center } => {
                let d = x.sub(center)?;
                let n = space.norm(&d)?;
                if n == 0.0 {
                    return Ok(ValueSet::Ball {
                        center: DualVector::zeros(space.dim()),
                        radius: *beta,
                    });
                }
                // ∂(β‖·-c‖)(x) = β/‖x-c‖ J(x-c) pointwise on the face.
                let face = space.duality_map(&d)?;
                let verts: Vec<DualVector> = face
                    .vertices()
                    .into_iter()
                    .map(|v| v.scale(beta / n))
                    .collect();
                match verts.len() {
                    1 => Ok(ValueSet::singleton(verts.into_iter().next().unwrap())),
                    2 => {
                        let mut it = verts.into_iter();
                        Ok(ValueSet::Segment {
                            a: it.next().unwrap(),
                            b: it.next().unwrap(),
                        })
                    }
                    _ => Ok(ValueSet::Points(verts)),
                }
            }
        }
    }

    /// 1D expression form, for composing `f + h` through an engine.
    pub fn to_ast_1d(&self) -> Result<Expr> {
        let num = |v: f64| -> Expr {
            if v >= 0.0 {
                Expr::Num(v)
            } else {
                Expr::Sub(Box::new(Expr::Num(0.0)), Box::new(Expr::Num(-v)))
            }
        };
        match self {
            ConvexProbe::Affine { a, b } => {
                if a.dim() != 1 {
                    return Err(Error::RegionRequiresDim1(a.dim()));
                }
                Ok(Expr::Add(
                    Box::new(Expr::Mul(
                        Box::new(num(a.coords()[0])),
                        Box::new(Expr::Var(1)),
                    )),
                    Box::new(num(*b)),
                ))
            }
            ConvexProbe::Quadratic { curv, lin } => {
                if curv.len() != 1 {
                    return Err(Error::RegionRequiresDim1(curv.len()));
                }
                Ok(Expr::Add(
                    Box::new(Expr::Mul(
                        Box::new(num(0.5 * curv[0])),
                        Box::new(Expr::Pow(Box::new(Expr::Var(1)), 2)),
                    )),
                    Box::new(Expr::Mul(
                        Box::new(num(lin.coords()[0])),
                        Box::new(Expr::Var(1)),
                    )),
                ))
            }
            ConvexProbe::NormDist { beta, center } => {
                if center.dim() != 1 {
                    return Err(Error::RegionRequiresDim1(center.dim()));
                }
                Ok(Expr::Mul(
                    Box::new(num(*beta)),
                    Box::new(Expr::Abs(Box::new(Expr::Sub(
                        Box::new(Expr::Var(1)),
                        Box::new(num(center.coords()[0])),
                    )))),
                ))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Weak-axiom audit
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct StrictMinCheck {
    pub f_index: usize,
    pub minimizer: Vector,
    /// Gap between the best value away from the minimizer cell and the
    /// minimum; positive means the grid sees a strict minimum.
    pub strict_margin: f64,
    /// Distance from zero to the emitted subgradient set at the minimizer.
    pub zero_distance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct SumRuleViolation {
    pub f_index: usize,
    pub h_index: usize,
    pub x: Vector,
    pub lhs_hull: (f64, f64),
    pub rhs_hull: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct WeakAxiomReport {
    pub strict_min_checks: Vec<StrictMinCheck>,
    pub sum_rule_violations: Vec<SumRuleViolation>,
    pub sum_rule_points_checked: usize,
    pub pass: bool,
}

/// Audit the weak-subdifferential axioms for an engine over corpora of
/// functions and convex probes (one-dimensional composition).
pub fn weak_axiom_test(
    engine: &SubdiffEngine,
    space: &NormedSpace,
    f_corpus: &[ScalarFunc],
    h_corpus: &[ConvexProbe],
    box_: &BoxRegion,
    grid_n: usize,
    tol: f64,
) -> Result<WeakAxiomReport> {
    let mut strict_min_checks = Vec::new();
    let mut sum_rule_violations = Vec::new();
    let mut checked = 0;

    for (fi, f) in f_corpus.iter().enumerate() {
        // Axiom: zero subgradient at engine-detected strict global minima.
        let min = crate::funcspec::minimize(f, box_, grid_n, 48)?;
        let counts = box_.per_axis_counts(grid_n);
        let cell = box_.cell_diagonal(&counts);
        let mut second = f64::INFINITY;
        for p in box_.grid_points(&counts) {
            let d: f64 = p
                .iter()
                .zip(min.x_min.coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if d <= 1.5 * cell {
                continue;
            }
            if let Some(v) = f.value(&p)?.as_finite() {
                second = second.min(v);
            }
        }
        let strict_margin = second - min.value;
        if strict_margin > 0.0 {
            let set = engine.subdiff_at(f, space, &min.x_min)?;
            let zero_distance = set.distance_to(space, &DualVector::zeros(space.dim()));
            strict_min_checks.push(StrictMinCheck {
                f_index: fi,
                minimizer: min.x_min.clone(),
                strict_margin,
                zero_distance,
                pass: zero_distance <= tol,
            });
        }

        // Sum rule ∂(f+h)(x) ⊆ ∂f(x) + ∂h(x), via interval hulls in 1D.
        if f.dim() != 1 {
            continue;
        }
        for (hi, h) in h_corpus.iter().enumerate() {
            let combined = ScalarFunc::from_ast(
                Expr::Add(Box::new(f.ast().clone()), Box::new(h.to_ast_1d()?)),
                1,
            )?;
            for xv in box_.axis_grid(0, grid_n.min(41)) {
                let x = Vector::scalar(xv);
                let lhs = engine.subdiff_at(&combined, space, &x)?;
                let rf = engine.subdiff_at(f, space, &x)?;
                let rh = h.exact_subdiff(space, &x)?;
                let (llo, lhi) = lhs.hull_1d().expect("1d");
                let (flo, fhi) = rf.hull_1d().expect("1d");
                let (hlo, hhi) = rh.hull_1d().expect("1d");
                checked += 1;
                if llo < flo + hlo - tol || lhi > fhi + hhi + tol {
                    sum_rule_violations.push(SumRuleViolation {
                        f_index: fi,
                        h_index: hi,
                        x,
                        lhs_hull: (llo, lhi),
                        rhs_hull: (flo + hlo, fhi + hhi),
                    });
                }
            }
        }
    }

    let pass = strict_min_checks.iter().all(|c| c.pass) && sum_rule_violations.is_empty();
    Ok(WeakAxiomReport {
        strict_min_checks,
        sum_rule_violations,
        sum_rule_points_checked: checked,
        pass,
    })
}

/// Verify the subgradient inequality `f(y) ≥ f(x) + ⟨y - x, s*⟩ - tol` for
/// every grid point `y`; the soundness check for convex functions.
pub fn subgradient_inequality_ok(
    f: &ScalarFunc,
    space: &NormedSpace,
    x: &Vector,
    sstar: &DualVector,
    box_: &BoxRegion,
    grid_n: usize,
    tol: f64,
) -> Result<bool> {
    let fx = match f.eval(x)?.as_finite() {
        Some(v) => v,
        None => return Err(Error::OutsideDomain),
    };
    let counts = box_.per_axis_counts(grid_n);
    for p in box_.grid_points(&counts) {
        if let Some(fy) = f.value(&p)?.as_finite() {
            let y = Vector::try_new(p)?;
            let lin = space.pairing(&y.sub(x)?, sstar)?;
            if fy < fx + lin - tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pairwise monotonicity of a sampled graph:
/// `⟨s₁ - s₂, s₁* - s₂*⟩ ≥ -tol` for all sample pairs.
pub fn pairwise_monotone(
    space: &NormedSpace,
    pairs: &[DualPair],
    tol: f64,
) -> Result<Option<(DualPair, DualPair, f64)>> {
    for (i, a) in pairs.iter().enumerate() {
        for b in &pairs[i + 1..] {
            let v = space.pairing(&a.x.sub(&b.x)?, &a.xstar.sub(&b.xstar)?)?;
            if v < -tol {
                return Ok(Some((a.clone(), b.clone(), v)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::parse_func;
    use approx::assert_abs_diff_eq;

    fn line() -> NormedSpace {
        NormedSpace::real_line()
    }

    #[test]
    fn abs_fan_at_zero() {
        let space = line();
        for kind in [EngineKind::Convex1d, EngineKind::PiecewiseConvex] {
            let engine = SubdiffEngine::new(kind);
            let f = parse_func("abs(x1)").unwrap().with_convex(true);
            let set = engine.subdiff_at(&f, &space, &Vector::scalar(0.0)).unwrap();
            let (lo, hi) = set.hull_1d().unwrap();
            assert_abs_diff_eq!(lo, -1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn polynomial_engine_examples() {
        let space = line();
        let engine = SubdiffEngine::new(EngineKind::Polynomial);
        // f = -x² at x = 2 gives {-4}.
        let f = parse_func("-x1^2").unwrap();
        let set = engine.subdiff_at(&f, &space, &Vector::scalar(2.0)).unwrap();
        assert_eq!(set.members(0), vec![DualVector::scalar(-4.0)]);
        // Trig trees are rejected.
        let g = parse_func("sin(x1)").unwrap();
        assert!(engine.subdiff_at(&g, &space, &Vector::scalar(0.0)).is_err());
    }

    #[test]
    fn smooth_engine_trig() {
        let space = line();
        let engine = SubdiffEngine::new(EngineKind::Smooth);
        let f = parse_func("sin(x1)").unwrap();
        let set = engine.subdiff_at(&f, &space, &Vector::scalar(0.0)).unwrap();
        assert_eq!(set.members(0), vec![DualVector::scalar(1.0)]);
    }

    #[test]
    fn central_difference_matches_symbolic() {
        let space = line();
        let f = parse_func("x1^3 - 2*x1 + cos(x1)").unwrap();
        let smooth = SubdiffEngine::new(EngineKind::Smooth);
        for x in [-1.3_f64, 0.0, 0.7, 2.1] {
            let exact = smooth
                .subdiff_at(&f, &space, &Vector::scalar(x))
                .unwrap()
                .members(0)[0]
                .coords()[0];
            let num = central_gradient(&f, &Vector::scalar(x)).unwrap().coords()[0];
            let rel = (num - exact).abs() / (1.0 + exact.abs());
            assert!(rel <= 1e-6, "x = {x}: exact {exact}, numeric {num}");
        }
    }

    #[test]
    fn convex1d_smooth_point_is_singleton() {
        let space = line();
        let engine = SubdiffEngine::new(EngineKind::Convex1d);
        let f = parse_func("0.5*x1^2").unwrap().with_convex(true);
        let set = engine.subdiff_at(&f, &space, &Vector::scalar(1.5)).unwrap();
        let m = set.members(0);
        assert_eq!(m.len(), 1);
        assert_abs_diff_eq!(m[0].coords()[0], 1.5, epsilon = 1e-8);
    }

    #[test]
    fn piecewise_handles_max_and_sums() {
        let space = line();
        let engine = SubdiffEngine::new(EngineKind::PiecewiseConvex);
        // max(x, 0) at 0: [0, 1].
        let f = parse_func("max(x1, 0)").unwrap().with_convex(true);
        let set = engine.subdiff_at(&f, &space, &Vector::scalar(0.0)).unwrap();
        assert_eq!(set.hull_1d().unwrap(), (0.0, 1.0));
        // |x| + ½x² at 0: [-1, 1].
        let f = parse_func("abs(x1) + 0.5*x1^2").unwrap().with_convex(true);
        let set = engine.subdiff_at(&f, &space, &Vector::scalar(0.0)).unwrap();
        assert_eq!(set.hull_1d().unwrap(), (-1.0, 1.0));
        // Away from the kink the set is the derivative.
        let set = engine.subdiff_at(&f, &space, &Vector::scalar(2.0)).unwrap();
        assert_eq!(set.hull_1d().unwrap(), (3.0, 3.0));
    }

    #[test]
    fn graph_examples() {
        let space = line();
        let box_ = BoxRegion::interval(-2.0, 2.0);
        // ∂(½x²) = Id: pairs (x, x).
        let engine = SubdiffEngine::new(EngineKind::Polynomial);
        let f = parse_func("0.5*x1^2").unwrap();
        let g = engine.subdiff_graph(&f, &space, &box_, 9).unwrap();
        for p in g.pairs().unwrap() {
            assert_abs_diff_eq!(p.x.coords()[0], p.xstar.coords()[0], epsilon = 1e-12);
        }
        // f = x³: pairs (x, 3x²).
        let f = parse_func("x1^3").unwrap();
        let g = engine.subdiff_graph(&f, &space, &box_, 9).unwrap();
        for p in g.pairs().unwrap() {
            let x = p.x.coords()[0];
            assert_abs_diff_eq!(p.xstar.coords()[0], 3.0 * (x * x), epsilon = 1e-12);
        }
        // |x| on [-1, 1]: sign graph plus a fan at zero.
        let engine = SubdiffEngine::new(EngineKind::PiecewiseConvex);
        let f = parse_func("abs(x1)").unwrap().with_convex(true);
        let g = engine
            .subdiff_graph(&f, &space, &BoxRegion::interval(-1.0, 1.0), 5)
            .unwrap();
        let fan: Vec<&DualPair> = g
            .pairs()
            .unwrap()
            .iter()
            .filter(|p| p.x.coords()[0] == 0.0)
            .collect();
        assert!(fan.len() >= 3);
    }

    #[test]
    fn emitted_subgradients_are_sound() {
        let space = line();
        let box_ = BoxRegion::interval(-3.0, 3.0);
        let engine = SubdiffEngine::new(EngineKind::PiecewiseConvex);
        for text in ["abs(x1)", "0.5*x1^2", "max(x1, 0)", "abs(x1) + 0.5*x1^2"] {
            let f = parse_func(text).unwrap().with_convex(true);
            for xv in [-1.0, -0.3, 0.0, 0.7, 2.0] {
                let x = Vector::scalar(xv);
                let set = engine.subdiff_at(&f, &space, &x).unwrap();
                for s in set.members(DEFAULT_INTERIOR_SAMPLES) {
                    assert!(
                        subgradient_inequality_ok(&f, &space, &x, &s, &box_, 121, 1e-8)
                            .unwrap(),
                        "{text} at {xv}: {s:?} fails the subgradient inequality"
                    );
                }
            }
        }
    }

    #[test]
    fn sampled_subdiff_graphs_are_monotone() {
        let space = line();
        let engine = SubdiffEngine::new(EngineKind::PiecewiseConvex);
        for text in ["abs(x1)", "0.5*x1^2", "max(x1, 0)"] {
            let f = parse_func(text).unwrap().with_convex(true);
            let g = engine
                .subdiff_graph(&f, &space, &BoxRegion::interval(-2.0, 2.0), 41)
                .unwrap();
            let v = pairwise_monotone(&space, g.pairs().unwrap(), 1e-9).unwrap();
            assert!(v.is_none(), "{text}: violation {v:?}");
        }
    }

    #[test]
    fn norm_probe_subdiff_is_the_dual_ball() {
        let space = line();
        let h = ConvexProbe::norm_dist(0.75, Vector::scalar(2.0)).unwrap();
        let at_center = h.exact_subdiff(&space, &Vector::scalar(2.0)).unwrap();
        assert_eq!(at_center.hull_1d().unwrap(), (-0.75, 0.75));
        let away = h.exact_subdiff(&space, &Vector::scalar(3.0)).unwrap();
        assert_eq!(away.hull_1d().unwrap(), (0.75, 0.75));
    }

    #[test]
    fn weak_axioms_hold_for_piecewise_engine() {
        let space = line();
        let engine = SubdiffEngine::new(EngineKind::PiecewiseConvex);
        let fs = vec![
            parse_func("(x1 - 1)^2").unwrap(),
            parse_func("abs(x1)").unwrap().with_convex(true),
        ];
        let hs = vec![
            ConvexProbe::affine(DualVector::scalar(0.5), 1.0),
            ConvexProbe::quadratic(vec![1.0], DualVector::scalar(0.0)).unwrap(),
            ConvexProbe::norm_dist(0.5, Vector::scalar(0.0)).unwrap(),
        ];
        let report = weak_axiom_test(
            &engine,
            &space,
            &fs,
            &hs,
            &BoxRegion::interval(-3.0, 3.0),
            241,
            1e-6,
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
        // (x-1)² attains a strict minimum at 1 with zero in the set.
        assert!(report
            .strict_min_checks
            .iter()
            .any(|c| (c.minimizer.coords()[0] - 1.0).abs() < 1e-6 && c.pass));
        assert!(report.sum_rule_points_checked > 0);
    }

    #[test]
    fn non_convex_probes_rejected() {
        assert!(ConvexProbe::quadratic(vec![-1.0], DualVector::scalar(0.0)).is_err());
        assert!(ConvexProbe::norm_dist(0.0, Vector::scalar(0.0)).is_err());
    }
}
