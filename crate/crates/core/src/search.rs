//! Deterministic grid-plus-refinement minimization.
//!
//! The engine evaluates an objective on an inclusive grid, keeps the best
//! few cells, and repeatedly re-grids shrinking neighborhoods around them.
//! Ties always break toward the lexicographically smallest coordinates, so
//! results do not depend on evaluation order or thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::region::BoxRegion;

/// Objective values may be absent (`None` means `+∞` / outside the domain);
/// the payload travels with the argmin (e.g. the optimal set member).
pub(crate) type Eval<P> = Result<Option<(f64, P)>>;

#[derive(Clone, Debug)]
pub(crate) struct SearchParams {
    /// Per-axis point counts for the initial grid.
    pub counts: Vec<usize>,
    /// Maximum refinement rounds per incumbent.
    pub refine_iters: usize,
    /// Refine an incumbent until its neighborhood half-width falls below
    /// `refine_tol * (1 + |coordinate|)` per axis.
    pub refine_tol: f64,
    /// Number of starting cells kept from the initial grid.
    pub multi_start: usize,
    /// Stop the whole search as soon as a value strictly below this is seen.
    pub stop_below: Option<f64>,
}

impl SearchParams {
    pub fn for_box(region: &BoxRegion, budget: usize) -> Self {
        SearchParams {
            counts: region.per_axis_counts(budget),
            refine_iters: 48,
            refine_tol: 1e-12,
            multi_start: 5,
            stop_below: None,
        }
    }

    pub fn with_refine_tol(mut self, tol: f64) -> Self {
        self.refine_tol = tol;
        self
    }

    pub fn with_stop_below(mut self, v: Option<f64>) -> Self {
        self.stop_below = v;
        self
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SearchHit<P> {
    pub point: Vec<f64>,
    pub value: f64,
    pub payload: P,
    /// Improvement achieved by the final refinement round; a proxy for how
    /// converged the search is.
    pub last_improvement: f64,
    pub evaluations: usize,
}

fn better(av: f64, ap: &[f64], bv: f64, bp: &[f64]) -> bool {
    match av.total_cmp(&bv) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => lex_less(ap, bp),
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Evaluate `f` over the grid, returning the best `keep` hits in
/// (value, lexicographic) order. Parallel for large grids; the reduction is
/// order-independent because the comparison is a total order.
fn grid_pass<P: Clone + Send>(
    f: &(impl Fn(&[f64]) -> Eval<P> + Sync),
    region: &BoxRegion,
    counts: &[usize],
    keep: usize,
) -> Result<(Vec<(Vec<f64>, f64, P)>, usize)> {
    let points = region.grid_points(counts);
    let n = points.len();
    let eval_one = |p: &Vec<f64>| -> Result<Option<(Vec<f64>, f64, P)>> {
        Ok(f(p)?.map(|(v, payload)| (p.clone(), v, payload)))
    };
    let mut hits: Vec<(Vec<f64>, f64, P)> = if n >= 4096 {
        let chunks: Result<Vec<Vec<_>>> = points
            .par_chunks(1024)
            .map(|chunk| {
                let mut local = Vec::new();
                for p in chunk {
                    if let Some(h) = eval_one(p)? {
                        local.push(h);
                    }
                }
                local.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| cmp_lex(&a.0, &b.0)));
                local.truncate(keep);
                Ok(local)
            })
            .collect();
        chunks?.into_iter().flatten().collect()
    } else {
        let mut out = Vec::new();
        for p in &points {
            if let Some(h) = eval_one(p)? {
                out.push(h);
            }
        }
        out
    };
    hits.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| cmp_lex(&a.0, &b.0)));
    hits.truncate(keep);
    Ok((hits, n))
}

fn cmp_lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

/// Global minimization: initial grid pass, then local refinement around the
/// surviving incumbents.
pub(crate) fn minimize_on<P: Clone + Send>(
    f: impl Fn(&[f64]) -> Eval<P> + Sync,
    region: &BoxRegion,
    params: &SearchParams,
) -> Result<SearchHit<P>> {
    let (starts, mut evals) = grid_pass(&f, region, &params.counts, params.multi_start)?;
    if starts.is_empty() {
        return Err(Error::AllInfinite);
    }

    let mut best = starts[0].clone();
    let mut last_improvement = f64::INFINITY;

    if let Some(th) = params.stop_below {
        if best.1 < th {
            return Ok(SearchHit {
                point: best.0,
                value: best.1,
                payload: best.2,
                last_improvement,
                evaluations: evals,
            });
        }
    }

    let spac = region.spacings(&params.counts);
    let local_counts = vec![11usize; region.dim()];

    'starts: for start in starts {
        let mut cur = start;
        let mut half: Vec<f64> = spac.clone();
        let mut final_round_gain = 0.0;
        for _ in 0..params.refine_iters {
            let sub = region.around(&cur.0, &half);
            let (hits, n) = grid_pass(&f, &sub, &local_counts, 1)?;
            evals += n;
            // The incumbent sits at the center of the local grid, so the
            // round can only improve or hold it; the minimizer stays within
            // half/10 of the center either way, which the next (5x smaller)
            // neighborhood still covers.
            final_round_gain = match hits.into_iter().next() {
                Some(h) if better(h.1, &h.0, cur.1, &cur.0) => {
                    let delta = cur.1 - h.1;
                    cur = h;
                    delta
                }
                _ => 0.0,
            };
            if better(cur.1, &cur.0, best.1, &best.0) {
                best = cur.clone();
            }
            if let Some(th) = params.stop_below {
                if best.1 < th {
                    last_improvement = final_round_gain;
                    break 'starts;
                }
            }
            let converged = half
                .iter()
                .zip(&cur.0)
                .all(|(h, x)| *h <= params.refine_tol * (1.0 + x.abs()));
            for h in &mut half {
                *h /= 5.0;
            }
            if converged {
                break;
            }
        }
        if cur.0 == best.0 {
            last_improvement = final_round_gain;
        }
    }

    Ok(SearchHit {
        point: best.0,
        value: best.1,
        payload: best.2,
        last_improvement: if last_improvement.is_finite() {
            last_improvement.max(0.0)
        } else {
            0.0
        },
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_min(
        f: impl Fn(f64) -> f64 + Sync,
        lo: f64,
        hi: f64,
        n: usize,
    ) -> (f64, f64) {
        let region = BoxRegion::interval(lo, hi);
        let hit = minimize_on(
            |x: &[f64]| Ok(Some((f(x[0]), ()))),
            &region,
            &SearchParams::for_box(&region, n),
        )
        .unwrap();
        (hit.point[0], hit.value)
    }

    #[test]
    fn finds_quadratic_minimum() {
        let (x, v) = scalar_min(|x| (x - 3.0) * (x - 3.0), -10.0, 10.0, 101);
        assert!((x - 3.0).abs() < 1e-9);
        assert!(v < 1e-17);
    }

    #[test]
    fn double_well_lexicographic_tiebreak() {
        // x⁴ - x² has minima at ±1/√2 with equal value; the smaller
        // coordinate must win.
        let (x, v) = scalar_min(|x| x.powi(4) - x * x, -2.0, 2.0, 101);
        assert!((x + 1.0 / 2.0_f64.sqrt()).abs() < 1e-7, "x = {x}");
        assert!((v + 0.25).abs() < 1e-12);
    }

    #[test]
    fn respects_domain_holes() {
        let region = BoxRegion::interval(-1.0, 1.0);
        let hit = minimize_on(
            |x: &[f64]| {
                if x[0] < 0.0 {
                    Ok(None)
                } else {
                    Ok(Some((x[0], ())))
                }
            },
            &region,
            &SearchParams::for_box(&region, 21),
        )
        .unwrap();
        assert!(hit.point[0] >= 0.0);
        assert!(hit.value.abs() < 1e-12);
    }

    #[test]
    fn all_infinite_is_an_error() {
        let region = BoxRegion::interval(-1.0, 1.0);
        let r = minimize_on(
            |_: &[f64]| Ok(None::<(f64, ())>),
            &region,
            &SearchParams::for_box(&region, 11),
        );
        assert!(matches!(r, Err(Error::AllInfinite)));
    }

    #[test]
    fn stop_below_short_circuits() {
        let region = BoxRegion::interval(-1.0, 1.0);
        let hit = minimize_on(
            |x: &[f64]| Ok(Some((x[0] * x[0], ()))),
            &region,
            &SearchParams::for_box(&region, 21).with_stop_below(Some(0.5)),
        )
        .unwrap();
        assert!(hit.value < 0.5);
    }
}
