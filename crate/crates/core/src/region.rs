//! Axis-aligned boxes: search regions, domains, and grid iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An axis-aligned box `[lo₁, hi₁] × … × [loₙ, hiₙ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidArgument(
                "box bounds must be nonempty and of equal length".into(),
            ));
        }
        for (a, b) in lo.iter().zip(&hi) {
            if !a.is_finite() || !b.is_finite() || a > b {
                return Err(Error::InvalidArgument(format!(
                    "invalid box interval [{a}, {b}]"
                )));
            }
        }
        Ok(BoxRegion { lo, hi })
    }

    /// `[-r, r]ⁿ`.
    pub fn symmetric(dim: usize, r: f64) -> Self {
        BoxRegion::new(vec![-r; dim], vec![r; dim]).expect("r >= 0")
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        BoxRegion::new(vec![lo], vec![hi]).expect("lo <= hi")
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    pub fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (a, b))| v.clamp(*a, *b))
            .collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    /// Intersection, or `None` when the boxes are disjoint.
    pub fn intersect(&self, other: &BoxRegion) -> Option<BoxRegion> {
        if self.dim() != other.dim() {
            return None;
        }
        let lo: Vec<f64> = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| a.max(*b))
            .collect();
        let hi: Vec<f64> = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| a.min(*b))
            .collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return None;
        }
        BoxRegion::new(lo, hi).ok()
    }

    /// Sub-box `x ± half` clamped to this box.
    pub fn around(&self, x: &[f64], half: &[f64]) -> BoxRegion {
        let lo = x
            .iter()
            .zip(half)
            .zip(&self.lo)
            .map(|((v, h), a)| (v - h).max(*a))
            .collect();
        let hi = x
            .iter()
            .zip(half)
            .zip(&self.hi)
            .map(|((v, h), b)| (v + h).min(*b))
            .collect();
        BoxRegion::new(lo, hi).expect("clamped sub-box is valid")
    }

    /// Inclusive per-axis grid of `count` points (`count >= 1`; a single
    /// point degenerates to the interval midpoint).
    pub fn axis_grid(&self, axis: usize, count: usize) -> Vec<f64> {
        let (a, b) = (self.lo[axis], self.hi[axis]);
        if count <= 1 || a == b {
            return vec![0.5 * (a + b)];
        }
        (0..count)
            .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
            .collect()
    }

    /// Per-axis point counts for a total-evaluation budget, at least 3 per
    /// axis (or exactly `budget` in one dimension).
    pub fn per_axis_counts(&self, budget: usize) -> Vec<usize> {
        let d = self.dim();
        if d == 1 {
            return vec![budget.max(1)];
        }
        let per = (budget as f64).powf(1.0 / d as f64).floor() as usize;
        vec![per.max(3); d]
    }

    /// All grid points for the given per-axis counts, row-major.
    pub fn grid_points(&self, counts: &[usize]) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|i| self.axis_grid(i, counts[i]))
            .collect();
        let total: usize = axes.iter().map(|a| a.len()).product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.dim()];
        for _ in 0..total {
            out.push(idx.iter().enumerate().map(|(i, &k)| axes[i][k]).collect());
            for i in (0..self.dim()).rev() {
                idx[i] += 1;
                if idx[i] < axes[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
        out
    }

    /// Per-axis spacing for the given counts.
    pub fn spacings(&self, counts: &[usize]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let c = counts[i].max(2);
                (self.hi[i] - self.lo[i]) / (c - 1) as f64
            })
            .collect()
    }

    /// Euclidean diagonal of one grid cell.
    pub fn cell_diagonal(&self, counts: &[usize]) -> f64 {
        self.spacings(counts)
            .iter()
            .map(|h| h * h)
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_contains_endpoints_and_center() {
        let b = BoxRegion::interval(-1.0, 1.0);
        let g = b.axis_grid(0, 5);
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn grid_points_row_major() {
        let b = BoxRegion::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let pts = b.grid_points(&[2, 2]);
        assert_eq!(
            pts,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0]
            ]
        );
    }

    #[test]
    fn around_clamps() {
        let b = BoxRegion::interval(-1.0, 1.0);
        let s = b.around(&[0.9], &[0.5]);
        assert_eq!(s.lo(), &[0.4]);
        assert_eq!(s.hi(), &[1.0]);
    }

    #[test]
    fn invalid_boxes_rejected() {
        assert!(BoxRegion::new(vec![1.0], vec![0.0]).is_err());
        assert!(BoxRegion::new(vec![], vec![]).is_err());
        assert!(BoxRegion::new(vec![f64::NAN], vec![1.0]).is_err());
    }
}
