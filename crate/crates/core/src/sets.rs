//! Finite representations of set values in the dual space.
//!
//! Operator images and subdifferentials are convex sets; at desk scale they
//! are one of: a finite point list, a segment (the 1D kink fan), or a
//! dual-norm ball. Downstream checks are infima/memberships over these, so
//! each variant carries an exact nearest-point routine where the geometry
//! allows one and a deterministic representative sample otherwise.

use crate::geometry::{DualVector, NormedSpace};

/// Number of interior samples used when a set is materialized as points.
pub const DEFAULT_INTERIOR_SAMPLES: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub enum ValueSet {
    /// A finite list of dual points (singletons included).
    Points(Vec<DualVector>),
    /// The segment from `a` to `b`.
    Segment { a: DualVector, b: DualVector },
    /// Closed dual-norm ball `{z : ‖z - center‖_* ≤ radius}`.
    Ball { center: DualVector, radius: f64 },
}

impl ValueSet {
    pub fn singleton(z: DualVector) -> Self {
        ValueSet::Points(vec![z])
    }

    /// 1D segment `[lo, hi]`.
    pub fn interval(lo: f64, hi: f64) -> Self {
        ValueSet::Segment {
            a: DualVector::scalar(lo),
            b: DualVector::scalar(hi),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ValueSet::Points(p) => p.first().map_or(0, |v| v.dim()),
            ValueSet::Segment { a, .. } => a.dim(),
            ValueSet::Ball { center, .. } => center.dim(),
        }
    }

    /// Representative members: endpoints plus `k` interior samples for
    /// segments, center plus axis extremes for balls, the list itself for
    /// point sets.
    pub fn members(&self, k: usize) -> Vec<DualVector> {
        match self {
            ValueSet::Points(p) => p.clone(),
            ValueSet::Segment { a, b } => {
                let count = k + 2;
                (0..count)
                    .map(|i| {
                        let t = i as f64 / (count - 1) as f64;
                        lerp(a, b, t)
                    })
                    .collect()
            }
            ValueSet::Ball { center, radius } => {
                let mut out = vec![center.clone()];
                for i in 0..center.dim() {
                    for s in [-1.0, 1.0] {
                        let mut c = center.coords().to_vec();
                        c[i] += s * radius;
                        out.push(DualVector::new(c));
                    }
                }
                out
            }
        }
    }

    /// The member closest to `target`.
    ///
    /// Point sets minimize the dual norm with lexicographic ties. Segments
    /// and balls project in the Euclidean metric (exact in Hilbert mode; in
    /// one dimension all norms coincide, so the projection is always exact
    /// there).
    pub fn nearest_to(&self, space: &NormedSpace, target: &DualVector) -> DualVector {
        match self {
            ValueSet::Points(p) => {
                let mut best: Option<(&DualVector, f64)> = None;
                for z in p {
                    let d = dual_dist(space, z, target);
                    let better = match &best {
                        None => true,
                        Some((bz, bd)) => {
                            d < *bd || (d == *bd && z.lex_cmp(bz) == std::cmp::Ordering::Less)
                        }
                    };
                    if better {
                        best = Some((z, d));
                    }
                }
                best.expect("nonempty point set").0.clone()
            }
            ValueSet::Segment { a, b } => {
                if a.dim() == 1 {
                    // Exact clamp for the 1D kink fan.
                    let (av, bv) = (a.coords()[0], b.coords()[0]);
                    let (lo, hi) = (av.min(bv), av.max(bv));
                    return DualVector::scalar(target.coords()[0].clamp(lo, hi));
                }
                let dir: Vec<f64> = b
                    .coords()
                    .iter()
                    .zip(a.coords())
                    .map(|(bv, av)| bv - av)
                    .collect();
                let len_sq: f64 = dir.iter().map(|d| d * d).sum();
                if len_sq == 0.0 {
                    return a.clone();
                }
                let t_num: f64 = target
                    .coords()
                    .iter()
                    .zip(a.coords())
                    .zip(&dir)
                    .map(|((tv, av), d)| (tv - av) * d)
                    .sum();
                let t = (t_num / len_sq).clamp(0.0, 1.0);
                lerp(a, b, t)
            }
            ValueSet::Ball { center, radius } => {
                let diff: Vec<f64> = target
                    .coords()
                    .iter()
                    .zip(center.coords())
                    .map(|(t, c)| t - c)
                    .collect();
                let d = space
                    .dual_norm(&DualVector::new(diff.clone()))
                    .unwrap_or(f64::INFINITY);
                if d <= *radius {
                    return target.clone();
                }
                let scale = radius / d;
                DualVector::new(
                    center
                        .coords()
                        .iter()
                        .zip(&diff)
                        .map(|(c, df)| c + scale * df)
                        .collect(),
                )
            }
        }
    }

    /// Dual-norm distance from `target` to the set (via `nearest_to`).
    pub fn distance_to(&self, space: &NormedSpace, target: &DualVector) -> f64 {
        dual_dist(space, &self.nearest_to(space, target), target)
    }

    /// Membership to tolerance `tol` in the dual norm.
    pub fn contains(&self, space: &NormedSpace, z: &DualVector, tol: f64) -> bool {
        match self {
            ValueSet::Points(p) => p.iter().any(|m| dual_dist(space, m, z) <= tol),
            _ => self.distance_to(space, z) <= tol,
        }
    }

    /// Interval hull `[lo, hi]` for one-dimensional sets.
    pub fn hull_1d(&self) -> Option<(f64, f64)> {
        if self.dim() != 1 {
            return None;
        }
        match self {
            ValueSet::Points(p) => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for v in p {
                    lo = lo.min(v.coords()[0]);
                    hi = hi.max(v.coords()[0]);
                }
                Some((lo, hi))
            }
            ValueSet::Segment { a, b } => {
                let (av, bv) = (a.coords()[0], b.coords()[0]);
                Some((av.min(bv), av.max(bv)))
            }
            ValueSet::Ball { center, radius } => {
                let c = center.coords()[0];
                Some((c - radius, c + radius))
            }
        }
    }

    /// Translate the set by a fixed dual vector.
    pub fn translate(&self, z: &DualVector) -> ValueSet {
        let shift = |v: &DualVector| {
            DualVector::new(
                v.coords()
                    .iter()
                    .zip(z.coords())
                    .map(|(a, b)| a + b)
                    .collect(),
            )
        };
        match self {
            ValueSet::Points(p) => ValueSet::Points(p.iter().map(shift).collect()),
            ValueSet::Segment { a, b } => ValueSet::Segment {
                a: shift(a),
                b: shift(b),
            },
            ValueSet::Ball { center, radius } => ValueSet::Ball {
                center: shift(center),
                radius: *radius,
            },
        }
    }
}

fn lerp(a: &DualVector, b: &DualVector, t: f64) -> DualVector {
    DualVector::new(
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(av, bv)| av + t * (bv - av))
            .collect(),
    )
}

fn dual_dist(space: &NormedSpace, a: &DualVector, b: &DualVector) -> f64 {
    match a.sub(b) {
        Ok(d) => space.dual_norm(&d).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_members_include_endpoints() {
        let s = ValueSet::interval(-1.0, 1.0);
        let m = s.members(5);
        assert_eq!(m.len(), 7);
        assert_eq!(m[0], DualVector::scalar(-1.0));
        assert_eq!(m[6], DualVector::scalar(1.0));
    }

    #[test]
    fn segment_projection_clamps() {
        let space = NormedSpace::real_line();
        let s = ValueSet::interval(-1.0, 1.0);
        assert_eq!(
            s.nearest_to(&space, &DualVector::scalar(0.3)),
            DualVector::scalar(0.3)
        );
        assert_eq!(
            s.nearest_to(&space, &DualVector::scalar(7.0)),
            DualVector::scalar(1.0)
        );
    }

    #[test]
    fn ball_projection_radial() {
        let space = NormedSpace::euclidean(2);
        let b = ValueSet::Ball {
            center: DualVector::zeros(2),
            radius: 1.0,
        };
        let p = b.nearest_to(&space, &DualVector::new(vec![3.0, 4.0]));
        assert!((p.coords()[0] - 0.6).abs() < 1e-12);
        assert!((p.coords()[1] - 0.8).abs() < 1e-12);
        assert!(b.contains(&space, &DualVector::new(vec![0.5, 0.5]), 1e-12));
    }

    #[test]
    fn hull_of_interval() {
        assert_eq!(ValueSet::interval(-2.0, 3.0).hull_1d(), Some((-2.0, 3.0)));
    }
}
