//! Set-valued operators `S: E ⇉ E*` as graphs.
//!
//! A graph is either a finite sample of `E × E*` pairs or an analytic
//! locator (a domain box plus an image function returning finite
//! representative sets). The module provides deterministic sampling, the
//! shifted operator `S + J(·-y)`, the graph difference with `gra(-J)`, and
//! Hilbert-mode range residuals.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{DualPair, DualVector, NormedSpace, Vector};
use crate::region::BoxRegion;
use crate::search::{minimize_on, SearchParams};
use crate::sets::{ValueSet, DEFAULT_INTERIOR_SAMPLES};

/// Image function of an analytic operator: the representative sets of
/// `S(x)` (empty outside the effective domain).
pub type ImageFn = dyn Fn(&NormedSpace, &Vector) -> Vec<ValueSet> + Send + Sync;

/// An analytic operator body: domain box, image closure, and an optional
/// dense-matrix marker for operators that are linear (enables exact solves).
#[derive(Clone)]
pub struct AnalyticOp {
    pub domain: BoxRegion,
    pub label: String,
    images: Arc<ImageFn>,
    pub linear: Option<DMatrix<f64>>,
}

impl AnalyticOp {
    pub fn new(
        domain: BoxRegion,
        label: impl Into<String>,
        images: Arc<ImageFn>,
    ) -> Self {
        AnalyticOp {
            domain,
            label: label.into(),
            images,
            linear: None,
        }
    }

    pub fn with_linear(mut self, matrix: DMatrix<f64>) -> Self {
        self.linear = Some(matrix);
        self
    }
}

impl fmt::Debug for AnalyticOp {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.debug_struct("AnalyticOp")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("linear", &self.linear.is_some())
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum GraphBody {
    Sampled(Vec<DualPair>),
    Analytic(AnalyticOp),
}

/// The graph of a set-valued operator together with its ambient space.
#[derive(Clone, Debug)]
pub struct OperatorGraph {
    space: NormedSpace,
    body: GraphBody,
}

impl OperatorGraph {
    pub fn sampled(space: NormedSpace, pairs: Vec<DualPair>) -> Result<Self> {
        for p in &pairs {
            if p.x.dim() != space.dim() || p.xstar.dim() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    got: p.x.dim().max(p.xstar.dim()),
                });
            }
        }
        Ok(OperatorGraph {
            space,
            body: GraphBody::Sampled(pairs),
        })
    }

    pub fn analytic(space: NormedSpace, op: AnalyticOp) -> Result<Self> {
        if op.domain.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: op.domain.dim(),
            });
        }
        Ok(OperatorGraph {
            space,
            body: GraphBody::Analytic(op),
        })
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn body(&self) -> &GraphBody {
        &self.body
    }

    pub fn pairs(&self) -> Option<&[DualPair]> {
        match &self.body {
            GraphBody::Sampled(p) => Some(p),
            GraphBody::Analytic(_) => None,
        }
    }

    pub fn analytic_op(&self) -> Option<&AnalyticOp> {
        match &self.body {
            GraphBody::Analytic(op) => Some(op),
            GraphBody::Sampled(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.body {
            GraphBody::Sampled(p) => p.is_empty(),
            GraphBody::Analytic(_) => false,
        }
    }

    /// Image sets at a point. Sampled bodies return the exact matches;
    /// analytic bodies consult the closure (empty outside the domain).
    pub fn images_at(&self, x: &Vector) -> Vec<ValueSet> {
        match &self.body {
            GraphBody::Sampled(pairs) => {
                let pts: Vec<DualVector> = pairs
                    .iter()
                    .filter(|p| p.x == *x)
                    .map(|p| p.xstar.clone())
                    .collect();
                if pts.is_empty() {
                    vec![]
                } else {
                    vec![ValueSet::Points(pts)]
                }
            }
            GraphBody::Analytic(op) => {
                if !op.domain.contains(x.coords()) {
                    return vec![];
                }
                (op.images)(&self.space, x)
            }
        }
    }

    /// Serialized wire format: `{"space": ..., "pairs": [[[x],[xs]], ...]}`.
    pub fn to_wire(&self) -> Result<SampledGraphWire> {
        match &self.body {
            GraphBody::Sampled(pairs) => Ok(SampledGraphWire {
                space: self.space.clone(),
                pairs: pairs.clone(),
            }),
            GraphBody::Analytic(_) => Err(Error::GraphNotSampled),
        }
    }
}

/// JSON shape of a sampled graph.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SampledGraphWire {
    pub space: NormedSpace,
    pub pairs: Vec<DualPair>,
}

impl SampledGraphWire {
    pub fn into_graph(self) -> Result<OperatorGraph> {
        OperatorGraph::sampled(self.space, self.pairs)
    }
}

// ---------------------------------------------------------------------------
// Registry of named analytic operators
// ---------------------------------------------------------------------------

/// Named operator families usable from job files and tests.
#[derive(Clone, Debug)]
pub enum AnalyticKind {
    /// `x ↦ {x}` (dual coordinates equal primal ones).
    Identity,
    /// `x ↦ {0}`.
    Zero,
    /// `x ↦ {c x}`.
    Scale(f64),
    /// `x ↦ {A x}` for a dense matrix.
    Linear(DMatrix<f64>),
    /// 1D `x ↦ {xⁿ}`.
    Monomial(u32),
    /// 1D `x ↦ {cos x}`.
    CosCurve,
}

/// Build an analytic operator graph from a registry entry.
pub fn make_operator(
    space: &NormedSpace,
    kind: AnalyticKind,
    domain: BoxRegion,
) -> Result<OperatorGraph> {
    let dim = space.dim();
    let op = match kind {
        AnalyticKind::Identity => {
            let m = DMatrix::identity(dim, dim);
            AnalyticOp::new(
                domain,
                "identity",
                Arc::new(|_s, x: &Vector| {
                    vec![ValueSet::singleton(DualVector::new(x.coords().to_vec()))]
                }),
            )
            .with_linear(m)
        }
        AnalyticKind::Zero => AnalyticOp::new(
            domain,
            "zero",
            Arc::new(move |_s, _x: &Vector| vec![ValueSet::singleton(DualVector::zeros(dim))]),
        )
        .with_linear(DMatrix::zeros(dim, dim)),
        AnalyticKind::Scale(c) => {
            let m = DMatrix::identity(dim, dim) * c;
            AnalyticOp::new(
                domain,
                format!("scale({c})"),
                Arc::new(move |_s, x: &Vector| {
                    vec![ValueSet::singleton(DualVector::new(
                        x.coords().iter().map(|v| c * v).collect(),
                    ))]
                }),
            )
            .with_linear(m)
        }
        AnalyticKind::Linear(m) => {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.nrows(),
                });
            }
            let mm = m.clone();
            AnalyticOp::new(
                domain,
                "linear",
                Arc::new(move |_s, x: &Vector| {
                    let xv = DVector::from_column_slice(x.coords());
                    let y = &mm * xv;
                    vec![ValueSet::singleton(DualVector::new(
                        y.iter().copied().collect(),
                    ))]
                }),
            )
            .with_linear(m)
        }
        AnalyticKind::Monomial(n) => {
            if dim != 1 {
                return Err(Error::InvalidArgument(
                    "monomial operators are one-dimensional".into(),
                ));
            }
            AnalyticOp::new(
                domain,
                format!("monomial({n})"),
                Arc::new(move |_s, x: &Vector| {
                    vec![ValueSet::singleton(DualVector::scalar(
                        x.coords()[0].powi(n as i32),
                    ))]
                }),
            )
        }
        AnalyticKind::CosCurve => {
            if dim != 1 {
                return Err(Error::InvalidArgument(
                    "the cosine curve is one-dimensional".into(),
                ));
            }
            AnalyticOp::new(
                domain,
                "cos",
                Arc::new(|_s, x: &Vector| {
                    vec![ValueSet::singleton(DualVector::scalar(x.coords()[0].cos()))]
                }),
            )
        }
    };
    OperatorGraph::analytic(space.clone(), op)
}

/// The `ℓ²`-truncation of the diagonal map `S x = -x + (xₙ/n)ₙ` to the
/// first `n` coordinates: a linear operator with diagonal `1/k - 1`.
pub fn ell2_diag_ladder(n: usize) -> Result<OperatorGraph> {
    let space = NormedSpace::euclidean(n);
    let m = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            1.0 / (r as f64 + 1.0) - 1.0
        } else {
            0.0
        }
    });
    make_operator(
        &space,
        AnalyticKind::Linear(m),
        BoxRegion::symmetric(n, 1e6),
    )
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Deterministic sample of a graph: `budget` primal points (inclusive grid
/// plus seeded jitter), with every representative image member attached.
/// Sampled bodies are thinned to at most `budget` evenly spaced pairs.
pub fn graph_sample(graph: &OperatorGraph, budget: usize, seed: u64) -> Result<OperatorGraph> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    match &graph.body {
        GraphBody::Sampled(pairs) => {
            if pairs.is_empty() {
                return Err(Error::EmptyGraph);
            }
            if pairs.len() <= budget {
                return OperatorGraph::sampled(graph.space.clone(), pairs.clone());
            }
            let step = pairs.len() as f64 / budget as f64;
            let picked = (0..budget)
                .map(|i| pairs[(i as f64 * step) as usize].clone())
                .collect();
            OperatorGraph::sampled(graph.space.clone(), picked)
        }
        GraphBody::Analytic(op) => {
            let dim = graph.space.dim();
            let counts = op.domain.per_axis_counts(budget);
            let mut xs: Vec<Vec<f64>> = op.domain.grid_points(&counts);
            xs.truncate(budget);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while xs.len() < budget {
                let p: Vec<f64> = (0..dim)
                    .map(|i| rng.gen_range(op.domain.lo()[i]..=op.domain.hi()[i]))
                    .collect();
                xs.push(p);
            }
            let mut out = Vec::new();
            for p in xs {
                let x = Vector::try_new(p)?;
                for set in graph.images_at(&x) {
                    for z in set.members(DEFAULT_INTERIOR_SAMPLES) {
                        out.push(DualPair::new(x.clone(), z));
                    }
                }
            }
            if out.is_empty() {
                return Err(Error::EmptyGraph);
            }
            OperatorGraph::sampled(graph.space.clone(), out)
        }
    }
}

// ---------------------------------------------------------------------------
// Operator algebra
// ---------------------------------------------------------------------------

/// The shifted operator `S + J(·-y)`: every image gains a representative
/// member of the duality face at `x - y` (the face is a single point in
/// Hilbert mode; otherwise `2k+1` face samples are used).
pub fn shift_plus_j(graph: &OperatorGraph, y: &Vector, face_k: usize) -> Result<OperatorGraph> {
    let space = graph.space.clone();
    if y.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: y.dim(),
        });
    }
    let j_reps = move |space: &NormedSpace, x: &Vector, y: &Vector| -> Result<Vec<DualVector>> {
        let face = space.duality_map(&x.sub(y)?)?;
        Ok(face.representatives(face_k))
    };
    match &graph.body {
        GraphBody::Sampled(pairs) => {
            let mut out = Vec::new();
            for p in pairs {
                for z in j_reps(&space, &p.x, y)? {
                    out.push(DualPair::new(p.x.clone(), add_dual(&p.xstar, &z)));
                }
            }
            OperatorGraph::sampled(space, out)
        }
        GraphBody::Analytic(op) => {
            let inner = op.clone();
            let y = y.clone();
            let y2 = y.clone();
            let hilbert_zero_shift = graph.space.is_hilbert()
                && y2.coords().iter().all(|v| *v == 0.0);
            let linear = match (&inner.linear, hilbert_zero_shift) {
                (Some(a), true) => {
                    // S + J = A + R with R the Riesz matrix.
                    let dim = graph.space.dim();
                    let mut r = DMatrix::zeros(dim, dim);
                    for i in 0..dim {
                        let e = {
                            let mut c = vec![0.0; dim];
                            c[i] = 1.0;
                            Vector::new(c)
                        };
                        let col = graph.space.riesz_dual(&e)?;
                        for (ri, v) in col.coords().iter().enumerate() {
                            r[(ri, i)] = *v;
                        }
                    }
                    Some(a + r)
                }
                _ => None,
            };
            let domain = inner.domain.clone();
            let label = format!("{} + J(.-y)", inner.label);
            let images_inner = inner.images.clone();
            let mut op = AnalyticOp::new(
                domain,
                label,
                Arc::new(move |space: &NormedSpace, x: &Vector| {
                    let Ok(reps) = j_reps(space, x, &y) else {
                        return vec![];
                    };
                    let sets = (images_inner)(space, x);
                    let mut out = Vec::new();
                    for s in sets {
                        for z in &reps {
                            out.push(s.translate(z));
                        }
                    }
                    out
                }),
            );
            if let Some(m) = linear {
                op = op.with_linear(m);
            }
            OperatorGraph::analytic(space, op)
        }
    }
}

fn add_dual(a: &DualVector, b: &DualVector) -> DualVector {
    DualVector::new(
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| x + y)
            .collect(),
    )
}

/// The sampled set `A - gra(-J) = {(s - t, s* + t*)}` with `(t, t*)` drawn
/// from a deterministic sample of `gra J` over a box scaled to `A`.
pub fn graph_minus_neg_j(graph: &OperatorGraph, budget: usize) -> Result<Vec<DualPair>> {
    let pairs = graph.pairs().ok_or(Error::GraphNotSampled)?;
    if pairs.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let space = &graph.space;
    let dim = space.dim();
    let radius = pairs
        .iter()
        .map(|p| {
            p.x.coords()
                .iter()
                .fold(0.0_f64, |m, v| m.max(v.abs()))
        })
        .fold(1.0_f64, f64::max)
        * 2.0;
    let t_box = BoxRegion::symmetric(dim, radius);
    let counts = t_box.per_axis_counts(budget);
    let mut out = Vec::new();
    for t_raw in t_box.grid_points(&counts) {
        let t = Vector::try_new(t_raw)?;
        let face = space.duality_map(&t)?;
        for tstar in face.representatives(DEFAULT_INTERIOR_SAMPLES) {
            for p in pairs {
                out.push(DualPair::new(
                    p.x.sub(&t)?,
                    add_dual(&p.xstar, &tstar),
                ));
            }
        }
    }
    Ok(out)
}

/// Result of a Hilbert-mode range search for `y* ∈ ran(S + Id)`.
#[derive(Clone, Debug)]
pub struct RangeResidual {
    pub s: Vector,
    pub sstar: DualVector,
    /// `‖s + s* - y*‖` after Riesz identification.
    pub residual: f64,
}

/// Minimize `‖s + s* - y*‖` over the graph (Hilbert mode). Linear bodies
/// solve `(A + R)s = y*` exactly in the least-squares sense; other bodies
/// run the grid search over `box_`.
pub fn range_residual(
    graph: &OperatorGraph,
    ystar: &DualVector,
    box_: &BoxRegion,
    grid_n: usize,
) -> Result<RangeResidual> {
    let space = graph.space();
    if !space.is_hilbert() {
        return Err(Error::NotHilbert(format!("{:?}", space.norm_kind())));
    }
    if ystar.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: ystar.dim(),
        });
    }
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }

    // The Hilbert-mode condition s + s* = y* reads, in primal coordinates,
    // s + R⁻¹s* = R⁻¹y*.
    let target = space.riesz_primal(ystar)?;

    if let Some(a) = graph.analytic_op().and_then(|op| op.linear.as_ref()) {
        let dim = space.dim();
        // (I + R⁻¹ A) s = R⁻¹ y*
        let mut m = DMatrix::zeros(dim, dim);
        for c in 0..dim {
            let col = DualVector::new((0..dim).map(|r| a[(r, c)]).collect());
            let col_p = space.riesz_primal(&col)?;
            for r in 0..dim {
                m[(r, c)] = col_p.coords()[r] + if r == c { 1.0 } else { 0.0 };
            }
        }
        let b = DVector::from_column_slice(target.coords());
        let sol = m
            .clone()
            .lu()
            .solve(&b)
            .or_else(|| m.clone().svd(true, true).solve(&b, 1e-12).ok());
        if let Some(sol) = sol {
            let s = Vector::try_new(sol.iter().copied().collect())?;
            let sv = DVector::from_column_slice(s.coords());
            let img = a * sv;
            let sstar = DualVector::try_new(img.iter().copied().collect())?;
            let resid = residual_of(space, &s, &sstar, &target)?;
            return Ok(RangeResidual {
                s,
                sstar,
                residual: resid,
            });
        }
    }

    let objective = |p: &[f64]| -> crate::search::Eval<DualVector> {
        let x = Vector::try_new(p.to_vec())?;
        let sets = graph.images_at(&x);
        let mut best: Option<(f64, DualVector)> = None;
        for set in sets {
            // Residual is a Euclidean-type distance in the Riesz metric;
            // project onto the set and double-check the members.
            let center = space.riesz_dual(&Vector::try_new(
                target
                    .coords()
                    .iter()
                    .zip(x.coords())
                    .map(|(t, xv)| t - xv)
                    .collect(),
            )?)?;
            let mut candidates = set.members(DEFAULT_INTERIOR_SAMPLES);
            candidates.push(set.nearest_to(space, &center));
            for z in candidates {
                let r = residual_of(space, &x, &z, &target)?;
                let better = match &best {
                    None => true,
                    Some((bv, bz)) => {
                        r < *bv || (r == *bv && z.lex_cmp(bz) == std::cmp::Ordering::Less)
                    }
                };
                if better {
                    best = Some((r, z));
                }
            }
        }
        Ok(best.map(|(v, z)| (v, z)))
    };

    let domain = graph
        .analytic_op()
        .map(|op| op.domain.clone())
        .unwrap_or_else(|| box_.clone());
    let search_box = domain.intersect(box_).ok_or(Error::EmptyGraph)?;

    match &graph.body {
        GraphBody::Sampled(pairs) => {
            let mut best: Option<RangeResidual> = None;
            for p in pairs {
                let r = residual_of(space, &p.x, &p.xstar, &target)?;
                let take = match &best {
                    None => true,
                    Some(b) => {
                        r < b.residual
                            || (r == b.residual
                                && p.lex_cmp(&DualPair::new(b.s.clone(), b.sstar.clone()))
                                    == std::cmp::Ordering::Less)
                    }
                };
                if take {
                    best = Some(RangeResidual {
                        s: p.x.clone(),
                        sstar: p.xstar.clone(),
                        residual: r,
                    });
                }
            }
            best.ok_or(Error::EmptyGraph)
        }
        GraphBody::Analytic(_) => {
            let params = SearchParams::for_box(&search_box, grid_n);
            let hit = minimize_on(objective, &search_box, &params)?;
            Ok(RangeResidual {
                s: Vector::try_new(hit.point)?,
                sstar: hit.payload,
                residual: hit.value,
            })
        }
    }
}

fn residual_of(
    space: &NormedSpace,
    s: &Vector,
    sstar: &DualVector,
    target_primal: &Vector,
) -> Result<f64> {
    let sp = space.riesz_primal(sstar)?;
    let sum = s.add(&sp)?;
    space.norm(&sum.sub(target_primal)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line() -> NormedSpace {
        NormedSpace::real_line()
    }

    fn abs_subdiff_op(space: &NormedSpace) -> OperatorGraph {
        // ∂|x|: sign away from zero, the full fan [-1, 1] at zero.
        let op = AnalyticOp::new(
            BoxRegion::interval(-1.0, 1.0),
            "sign",
            Arc::new(|_s, x: &Vector| {
                let v = x.coords()[0];
                if v == 0.0 {
                    vec![ValueSet::interval(-1.0, 1.0)]
                } else {
                    vec![ValueSet::singleton(DualVector::scalar(v.signum()))]
                }
            }),
        );
        OperatorGraph::analytic(space.clone(), op).unwrap()
    }

    #[test]
    fn sample_fans_out_at_kinks() {
        let space = line();
        let g = abs_subdiff_op(&space);
        let s = graph_sample(&g, 5, 0).unwrap();
        let pairs = s.pairs().unwrap();
        let at_zero: Vec<f64> = pairs
            .iter()
            .filter(|p| p.x.coords()[0] == 0.0)
            .map(|p| p.xstar.coords()[0])
            .collect();
        assert!(at_zero.len() >= 3, "fan expected at the kink: {at_zero:?}");
        assert!(at_zero.iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn sample_identity_exact_count() {
        let space = line();
        let g = make_operator(
            &space,
            AnalyticKind::Identity,
            BoxRegion::interval(-10.0, 10.0),
        )
        .unwrap();
        let s = graph_sample(&g, 3, 7).unwrap();
        let pairs = s.pairs().unwrap();
        assert_eq!(pairs.len(), 3);
        for p in pairs {
            assert_eq!(p.x.coords()[0], p.xstar.coords()[0]);
        }
    }

    #[test]
    fn sample_cosine_curve() {
        let space = line();
        let g = make_operator(
            &space,
            AnalyticKind::CosCurve,
            BoxRegion::interval(-10.0, 10.0),
        )
        .unwrap();
        let s = graph_sample(&g, 100, 0).unwrap();
        let pairs = s.pairs().unwrap();
        assert_eq!(pairs.len(), 100);
        for p in pairs {
            assert_eq!(p.xstar.coords()[0], p.x.coords()[0].cos());
        }
    }

    #[test]
    fn shift_plus_j_examples() {
        let space = line();
        let box_ = BoxRegion::interval(-5.0, 5.0);
        // Zero operator: S + J = J = Id in Hilbert mode.
        let zero = make_operator(&space, AnalyticKind::Zero, box_.clone()).unwrap();
        let shifted = shift_plus_j(&zero, &Vector::scalar(0.0), 5).unwrap();
        let im = shifted.images_at(&Vector::scalar(2.0));
        assert_eq!(im.len(), 1);
        assert_eq!(im[0].members(0), vec![DualVector::scalar(2.0)]);

        // x ↦ {-x}: shifted by J at y = 0 this is the zero operator.
        let neg = make_operator(&space, AnalyticKind::Scale(-1.0), box_.clone()).unwrap();
        let shifted = shift_plus_j(&neg, &Vector::scalar(0.0), 5).unwrap();
        for t in [-2.0, 0.5, 3.0] {
            let im = shifted.images_at(&Vector::scalar(t));
            assert_eq!(im[0].members(0), vec![DualVector::scalar(0.0)]);
        }

        // x ↦ {3x²}: shifted image is {3x² + x}.
        let sq = make_operator(&space, AnalyticKind::Monomial(2), box_.clone()).unwrap();
        let scaled = {
            // 3 x²: compose scale on images via a custom op
            let inner = sq.analytic_op().unwrap().clone();
            let op = AnalyticOp::new(
                inner.domain.clone(),
                "3x^2",
                Arc::new(move |_s, x: &Vector| {
                    vec![ValueSet::singleton(DualVector::scalar(
                        3.0 * x.coords()[0].powi(2),
                    ))]
                }),
            );
            OperatorGraph::analytic(space.clone(), op).unwrap()
        };
        let shifted = shift_plus_j(&scaled, &Vector::scalar(0.0), 5).unwrap();
        let im = shifted.images_at(&Vector::scalar(2.0));
        assert_eq!(im[0].members(0), vec![DualVector::scalar(14.0)]);
    }

    #[test]
    fn graph_difference_algebra() {
        let space = line();
        // A = {(0, 0)}: the difference set lies on the antidiagonal.
        let g = OperatorGraph::sampled(space.clone(), vec![DualPair::scalar(0.0, 0.0)]).unwrap();
        let d = graph_minus_neg_j(&g, 21).unwrap();
        for p in &d {
            assert_abs_diff_eq!(
                p.x.coords()[0] + p.xstar.coords()[0],
                0.0,
                epsilon = 1e-12
            );
        }

        // A = {(1, 1)} with t = 1 in the J-sample gives (0, 2).
        let g = OperatorGraph::sampled(space.clone(), vec![DualPair::scalar(1.0, 1.0)]).unwrap();
        let d = graph_minus_neg_j(&g, 21).unwrap();
        assert!(
            d.iter().any(|p| (p.x.coords()[0]).abs() < 1e-12
                && (p.xstar.coords()[0] - 2.0).abs() < 1e-12),
            "expected (0, 2) in the difference set"
        );
        // Every emitted pair satisfies the defining decomposition exactly:
        // u = s - t and u* = s* + t with (s, s*) = (1, 1).
        for p in &d {
            let t = 1.0 - p.x.coords()[0];
            assert_abs_diff_eq!(p.xstar.coords()[0], 1.0 + t, epsilon = 1e-12);
        }
    }

    #[test]
    fn range_residual_identity() {
        let space = line();
        let g = make_operator(
            &space,
            AnalyticKind::Identity,
            BoxRegion::interval(-10.0, 10.0),
        )
        .unwrap();
        let r = range_residual(&g, &DualVector::scalar(4.0), &BoxRegion::interval(-10.0, 10.0), 101)
            .unwrap();
        assert_abs_diff_eq!(r.s.coords()[0], 2.0, epsilon = 1e-9);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn range_residual_negation_is_stuck_at_one() {
        let space = line();
        let g = make_operator(
            &space,
            AnalyticKind::Scale(-1.0),
            BoxRegion::interval(-10.0, 10.0),
        )
        .unwrap();
        let r = range_residual(&g, &DualVector::scalar(1.0), &BoxRegion::interval(-10.0, 10.0), 101)
            .unwrap();
        assert_abs_diff_eq!(r.residual, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn range_residual_diag_ladder() {
        let g = ell2_diag_ladder(10).unwrap();
        let ystar = DualVector::new((1..=10).map(|n| 1.0 / n as f64).collect());
        let r = range_residual(
            &g,
            &ystar,
            &BoxRegion::symmetric(10, 10.0),
            3,
        )
        .unwrap();
        assert!(r.residual < 1e-12);
        for c in r.s.coords() {
            assert_abs_diff_eq!(*c, 1.0, epsilon = 1e-9);
        }
        let norm = g.space().norm(&r.s).unwrap();
        assert_abs_diff_eq!(norm, 10.0_f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn sampled_graph_members_recheck() {
        let space = line();
        let g = abs_subdiff_op(&space);
        let s = graph_sample(&g, 9, 3).unwrap();
        for p in s.pairs().unwrap() {
            let sets = g.images_at(&p.x);
            assert!(
                sets.iter().any(|set| set.contains(&space, &p.xstar, 1e-12)),
                "sampled pair {p} not in the analytic image"
            );
        }
    }

    #[test]
    fn wire_round_trip() {
        let space = line();
        let g = OperatorGraph::sampled(
            space,
            vec![DualPair::scalar(0.0, 1.0), DualPair::scalar(1.0, 2.0)],
        )
        .unwrap();
        let wire = g.to_wire().unwrap();
        let json = serde_json::to_string(&wire).unwrap();
        let back: SampledGraphWire = serde_json::from_str(&json).unwrap();
        let g2 = back.into_graph().unwrap();
        assert_eq!(g.pairs().unwrap(), g2.pairs().unwrap());
    }
}
