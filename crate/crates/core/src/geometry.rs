//! Primal/dual vector geometry on finite-dimensional normed spaces.
//!
//! A [`NormedSpace`] fixes a dimension and one of four norms (`p1`, `p2`,
//! `pinf`, or a weighted Euclidean norm). The module provides the dual norm,
//! the bilinear pairing, the halved squared norms `j` and `j*`, the duality
//! mapping `J = ∂j` (exact faces, not approximations), and the functional
//!
//! ```text
//! r_L(x, x*) = ½‖x‖² + ½‖x*‖²_* + ⟨x, x*⟩
//! ```
//!
//! which is nonnegative and vanishes exactly when `x* ∈ -J(x)`.

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Default absolute tolerance for exact identities (membership checks,
/// zero tests). Norm-scaled comparisons use a relative variant instead.
pub const DEFAULT_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Norm kinds and spaces
// ---------------------------------------------------------------------------

/// Which norm a space carries.
#[derive(Clone, Debug, PartialEq)]
pub enum NormKind {
    /// Sum of absolute values.
    P1,
    /// Euclidean norm.
    P2,
    /// Maximum of absolute values.
    PInf,
    /// `sqrt(Σ wᵢ xᵢ²)` with strictly positive weights.
    Weighted2(Vec<f64>),
}

impl NormKind {
    /// The conjugate-exponent norm carried by the dual space.
    pub fn dual(&self) -> NormKind {
        match self {
            NormKind::P1 => NormKind::PInf,
            NormKind::P2 => NormKind::P2,
            NormKind::PInf => NormKind::P1,
            NormKind::Weighted2(w) => NormKind::Weighted2(w.iter().map(|wi| 1.0 / wi).collect()),
        }
    }

    /// Hilbert mode: the pairing is an inner product up to the Riesz map.
    pub fn is_hilbert(&self) -> bool {
        matches!(self, NormKind::P2 | NormKind::Weighted2(_))
    }

    fn label(&self) -> &'static str {
        match self {
            NormKind::P1 => "p1",
            NormKind::P2 => "p2",
            NormKind::PInf => "pinf",
            NormKind::Weighted2(_) => "weighted2",
        }
    }
}

impl Serialize for NormKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormKind::Weighted2(w) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("w2", w)?;
                m.end()
            }
            other => s.serialize_str(other.label()),
        }
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct KindVisitor;
        impl<'de> Visitor<'de> for KindVisitor {
            type Value = NormKind;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "\"p1\", \"p2\", \"pinf\", or {{\"w2\": [..]}}")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<NormKind, E> {
                match v {
                    "p1" => Ok(NormKind::P1),
                    "p2" => Ok(NormKind::P2),
                    "pinf" => Ok(NormKind::PInf),
                    other => Err(E::custom(format!("unknown norm kind {other:?}"))),
                }
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<NormKind, A::Error> {
                let key: String = map
                    .next_key()?
                    .ok_or_else(|| de::Error::custom("expected key \"w2\""))?;
                if key != "w2" {
                    return Err(de::Error::custom(format!("unknown norm key {key:?}")));
                }
                let w: Vec<f64> = map.next_value()?;
                Ok(NormKind::Weighted2(w))
            }
        }
        d.deserialize_any(KindVisitor)
    }
}

/// A finite-dimensional normed space `E` together with its dual `E*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormedSpace {
    dim: usize,
    norm: NormKind,
}

impl NormedSpace {
    pub fn new(dim: usize, norm: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dim must be at least 1".into()));
        }
        if let NormKind::Weighted2(w) = &norm {
            if w.len() != dim {
                return Err(Error::InvalidSpace(format!(
                    "weight vector has length {}, expected {dim}",
                    w.len()
                )));
            }
            if !w.iter().all(|wi| wi.is_finite() && *wi > 0.0) {
                return Err(Error::InvalidSpace(
                    "weights must be strictly positive and finite".into(),
                ));
            }
        }
        Ok(NormedSpace { dim, norm })
    }

    /// `ℝⁿ` with the Euclidean norm.
    pub fn euclidean(dim: usize) -> Self {
        NormedSpace::new(dim, NormKind::P2).expect("dim >= 1")
    }

    /// The real line.
    pub fn real_line() -> Self {
        NormedSpace::euclidean(1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_kind(&self) -> &NormKind {
        &self.norm
    }

    pub fn is_hilbert(&self) -> bool {
        self.norm.is_hilbert()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    fn raw_norm(kind: &NormKind, c: &[f64]) -> f64 {
        match kind {
            NormKind::P1 => c.iter().map(|v| v.abs()).sum(),
            NormKind::P2 => c.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::PInf => c.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            NormKind::Weighted2(w) => c
                .iter()
                .zip(w)
                .map(|(v, wi)| wi * v * v)
                .sum::<f64>()
                .sqrt(),
        }
    }

    // Squared norm without a sqrt/square round trip, so that Hilbert-mode
    // identities like rl(x, -x) = 0 hold bit-exactly.
    fn raw_norm_sq(kind: &NormKind, c: &[f64]) -> f64 {
        match kind {
            NormKind::P2 => c.iter().map(|v| v * v).sum(),
            NormKind::Weighted2(w) => c.iter().zip(w).map(|(v, wi)| wi * v * v).sum(),
            other => {
                let n = Self::raw_norm(other, c);
                n * n
            }
        }
    }

    /// Primal norm `‖x‖`.
    pub fn norm(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x.dim())?;
        Ok(Self::raw_norm(&self.norm, x.coords()))
    }

    /// Dual norm `‖x*‖_*` (conjugate exponent of the primal norm).
    pub fn dual_norm(&self, xs: &DualVector) -> Result<f64> {
        self.check_dim(xs.dim())?;
        Ok(Self::raw_norm(&self.norm.dual(), xs.coords()))
    }

    /// Bilinear pairing `⟨x, x*⟩ = Σ xᵢ x*ᵢ`.
    pub fn pairing(&self, x: &Vector, xs: &DualVector) -> Result<f64> {
        self.check_dim(x.dim())?;
        self.check_dim(xs.dim())?;
        Ok(x.coords()
            .iter()
            .zip(xs.coords())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// `j(x) = ½‖x‖²`.
    pub fn j(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x.dim())?;
        Ok(0.5 * Self::raw_norm_sq(&self.norm, x.coords()))
    }

    /// `j*(x*) = ½‖x*‖²_*` (the Fenchel conjugate of `j`).
    pub fn j_star(&self, xs: &DualVector) -> Result<f64> {
        self.check_dim(xs.dim())?;
        Ok(0.5 * Self::raw_norm_sq(&self.norm.dual(), xs.coords()))
    }

    /// `r_L(x, x*) = j(x) + j*(x*) + ⟨x, x*⟩`, clamped at zero.
    ///
    /// The clamp only absorbs last-bit rounding; mathematically the value is
    /// nonnegative, with `r_L = 0` exactly when `x* ∈ -J(x)`.
    pub fn rl(&self, x: &Vector, xs: &DualVector) -> Result<f64> {
        let v = self.j(x)? + self.j_star(xs)? + self.pairing(x, xs)?;
        Ok(v.max(0.0))
    }

    /// `r_L` of the displacement `candidate - target`.
    pub fn rl_gap(&self, candidate: &DualPair, target: &DualPair) -> Result<f64> {
        let dx = candidate.x.sub(&target.x)?;
        let dxs = candidate.xstar.sub(&target.xstar)?;
        self.rl(&dx, &dxs)
    }

    /// Riesz representative of a dual vector in Hilbert mode
    /// (`(x*ᵢ / wᵢ)ᵢ`; the identity map for `p2`).
    pub fn riesz_primal(&self, xs: &DualVector) -> Result<Vector> {
        self.check_dim(xs.dim())?;
        match &self.norm {
            NormKind::P2 => Ok(Vector::new(xs.coords().to_vec())),
            NormKind::Weighted2(w) => Ok(Vector::new(
                xs.coords().iter().zip(w).map(|(v, wi)| v / wi).collect(),
            )),
            other => Err(Error::NotHilbert(other.label().into())),
        }
    }

    /// Riesz image of a primal vector in Hilbert mode (`(wᵢ xᵢ)ᵢ`).
    pub fn riesz_dual(&self, x: &Vector) -> Result<DualVector> {
        self.check_dim(x.dim())?;
        match &self.norm {
            NormKind::P2 => Ok(DualVector::new(x.coords().to_vec())),
            NormKind::Weighted2(w) => Ok(DualVector::new(
                x.coords().iter().zip(w).map(|(v, wi)| v * wi).collect(),
            )),
            other => Err(Error::NotHilbert(other.label().into())),
        }
    }

    /// The duality mapping `J(x) = ∂(½‖·‖²)(x)` as an exact face.
    ///
    /// `z* ∈ J(x)` iff `⟨x, z*⟩ = ‖x‖²` and `‖z*‖_* = ‖x‖`. For `p2` and
    /// `weighted2` the face is the single point given by the Riesz map; for
    /// `p1`/`pinf` it is a polytope stored structurally.
    pub fn duality_map(&self, x: &Vector) -> Result<DualityFace> {
        self.check_dim(x.dim())?;
        let n = self.norm(x)?;
        let kind = if n == 0.0 {
            FaceKind::Point(DualVector::zeros(self.dim))
        } else {
            match &self.norm {
                NormKind::P2 | NormKind::Weighted2(_) => FaceKind::Point(self.riesz_dual(x)?),
                NormKind::P1 => {
                    // J(x) = ‖x‖₁ ∂‖·‖₁(x): fixed coordinate ‖x‖₁·sign(xᵢ)
                    // where xᵢ ≠ 0, free in [-‖x‖₁, ‖x‖₁] where xᵢ = 0.
                    let fixed = x
                        .coords()
                        .iter()
                        .map(|&v| if v == 0.0 { None } else { Some(n * v.signum()) })
                        .collect();
                    FaceKind::Box { fixed, bound: n }
                }
                NormKind::PInf => {
                    // J(x) = ‖x‖_∞ conv{ sign(xᵢ) eᵢ : |xᵢ| = ‖x‖_∞ }.
                    let verts = x
                        .coords()
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v.abs() == n)
                        .map(|(i, &v)| {
                            let mut c = vec![0.0; self.dim];
                            c[i] = n * v.signum();
                            DualVector::new(c)
                        })
                        .collect();
                    FaceKind::Simplex { vertices: verts }
                }
            }
        };
        Ok(DualityFace {
            space: self.clone(),
            x: x.clone(),
            kind,
        })
    }
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

macro_rules! vector_impl {
    ($name:ident) => {
        impl $name {
            /// Panics on non-finite coordinates; use for programmatic
            /// construction where finiteness is already established.
            pub fn new(coords: Vec<f64>) -> Self {
                assert!(
                    coords.iter().all(|c| c.is_finite()),
                    "non-finite coordinate in {}",
                    stringify!($name)
                );
                $name(coords)
            }

            pub fn try_new(coords: Vec<f64>) -> Result<Self> {
                if !coords.iter().all(|c| c.is_finite()) {
                    return Err(Error::NonFinite(format!(
                        "{} coordinates must be finite",
                        stringify!($name)
                    )));
                }
                Ok($name(coords))
            }

            pub fn zeros(dim: usize) -> Self {
                $name(vec![0.0; dim])
            }

            pub fn scalar(v: f64) -> Self {
                $name::new(vec![v])
            }

            pub fn coords(&self) -> &[f64] {
                &self.0
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
                if self.dim() != other.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim(),
                        got: other.dim(),
                    });
                }
                Ok($name(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| f(*a, *b))
                        .collect(),
                ))
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.zip_with(other, |a, b| a + b)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.zip_with(other, |a, b| a - b)
            }

            pub fn scale(&self, t: f64) -> Self {
                $name(self.0.iter().map(|a| a * t).collect())
            }

            /// Total lexicographic order used for deterministic tie-breaking.
            pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
                for (a, b) in self.0.iter().zip(&other.0) {
                    match a.total_cmp(b) {
                        std::cmp::Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                self.0.len().cmp(&other.0.len())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    };
}

/// A point of the primal space `E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

/// A point of the dual space `E*` (coordinates are functional coefficients
/// with respect to the standard pairing).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualVector(Vec<f64>);

vector_impl!(Vector);
vector_impl!(DualVector);

/// An element of the product `E × E*`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPair {
    pub x: Vector,
    pub xstar: DualVector,
}

impl DualPair {
    pub fn new(x: Vector, xstar: DualVector) -> Self {
        DualPair { x, xstar }
    }

    /// 1D convenience constructor.
    pub fn scalar(x: f64, xstar: f64) -> Self {
        DualPair::new(Vector::scalar(x), DualVector::scalar(xstar))
    }

    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.x
            .lex_cmp(&other.x)
            .then_with(|| self.xstar.lex_cmp(&other.xstar))
    }
}

// Wire format: a pair serializes as [[x...], [xs...]].
impl Serialize for DualPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.x, &self.xstar).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DualPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (x, xstar): (Vector, DualVector) = Deserialize::deserialize(d)?;
        Ok(DualPair { x, xstar })
    }
}

impl fmt::Display for DualPair {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.xstar)
    }
}

// ---------------------------------------------------------------------------
// Duality-map faces
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum FaceKind {
    /// Smooth norms: the unique dual point.
    Point(DualVector),
    /// `p1` faces: coordinates either pinned or free in `[-bound, bound]`.
    Box {
        fixed: Vec<Option<f64>>,
        bound: f64,
    },
    /// `pinf` faces: convex hull of scaled signed axis vectors.
    Simplex { vertices: Vec<DualVector> },
}

/// The set `J(x)`, stored structurally with an exact membership predicate.
#[derive(Clone, Debug)]
pub struct DualityFace {
    space: NormedSpace,
    x: Vector,
    kind: FaceKind,
}

impl DualityFace {
    pub fn base_point(&self) -> &Vector {
        &self.x
    }

    pub fn is_singleton(&self) -> bool {
        match &self.kind {
            FaceKind::Point(_) => true,
            FaceKind::Box { fixed, .. } => fixed.iter().all(|f| f.is_some()),
            FaceKind::Simplex { vertices } => vertices.len() <= 1,
        }
    }

    /// Vertex list of the face (a single point for smooth norms).
    pub fn vertices(&self) -> Vec<DualVector> {
        match &self.kind {
            FaceKind::Point(p) => vec![p.clone()],
            FaceKind::Box { fixed, bound } => {
                let free: Vec<usize> = fixed
                    .iter()
                    .enumerate()
                    .filter_map(|(i, f)| f.is_none().then_some(i))
                    .collect();
                let mut out = Vec::with_capacity(1 << free.len());
                for mask in 0..(1_usize << free.len()) {
                    let mut c: Vec<f64> = fixed.iter().map(|f| f.unwrap_or(0.0)).collect();
                    for (bit, &i) in free.iter().enumerate() {
                        c[i] = if mask >> bit & 1 == 1 { *bound } else { -bound };
                    }
                    out.push(DualVector::new(c));
                }
                out
            }
            FaceKind::Simplex { vertices } => vertices.clone(),
        }
    }

    /// Membership via the defining identities, each checked to `tol`:
    /// `|⟨x, z*⟩ - ‖x‖²| ≤ tol` and `|‖z*‖_* - ‖x‖| ≤ tol`.
    pub fn contains(&self, z: &DualVector, tol: f64) -> Result<bool> {
        let n = self.space.norm(&self.x)?;
        let p = self.space.pairing(&self.x, z)?;
        let dn = self.space.dual_norm(z)?;
        Ok((p - n * n).abs() <= tol && (dn - n).abs() <= tol)
    }

    /// Deterministic representative sample of the face: `2k + 1` points for
    /// one-dimensional faces (endpoints included), vertices plus blends for
    /// higher-dimensional ones, a single point for singletons.
    pub fn representatives(&self, k: usize) -> Vec<DualVector> {
        let verts = self.vertices();
        if verts.len() == 1 {
            return verts;
        }
        let count = 2 * k + 1;
        if verts.len() == 2 {
            let (a, b) = (&verts[0], &verts[1]);
            return (0..count)
                .map(|i| {
                    let t = i as f64 / (count - 1) as f64;
                    DualVector::new(
                        a.coords()
                            .iter()
                            .zip(b.coords())
                            .map(|(av, bv)| av + t * (bv - av))
                            .collect(),
                    )
                })
                .collect();
            // Endpoints are the face's extreme points; interior samples are
            // evenly spaced along the segment.
        }
        let dim = verts[0].dim();
        let centroid = DualVector::new(
            (0..dim)
                .map(|i| verts.iter().map(|v| v.coords()[i]).sum::<f64>() / verts.len() as f64)
                .collect(),
        );
        let mut out = verts.clone();
        out.push(centroid.clone());
        let mut vi = 0;
        while out.len() < count {
            let v = &verts[vi % verts.len()];
            out.push(DualVector::new(
                v.coords()
                    .iter()
                    .zip(centroid.coords())
                    .map(|(a, c)| 0.5 * (a + c))
                    .collect(),
            ));
            vi += 1;
            if vi > 4 * count {
                break;
            }
        }
        out.truncate(count.max(verts.len() + 1));
        out
    }

    /// Euclidean projection of `target` onto the face. Exact for point and
    /// box faces; for simplex faces it is the exact Euclidean projection,
    /// which serves as the deterministic nearest representative.
    pub fn nearest_to(&self, target: &DualVector) -> DualVector {
        match &self.kind {
            FaceKind::Point(p) => p.clone(),
            FaceKind::Box { fixed, bound } => DualVector::new(
                fixed
                    .iter()
                    .zip(target.coords())
                    .map(|(f, t)| match f {
                        Some(v) => *v,
                        None => t.clamp(-bound, *bound),
                    })
                    .collect(),
            ),
            FaceKind::Simplex { vertices } => {
                // Vertices sit on distinct axes, so projecting onto their
                // convex hull reduces to a standard simplex projection of
                // the per-axis components.
                let dim = target.dim();
                let axes: Vec<(usize, f64)> = vertices
                    .iter()
                    .map(|v| {
                        let (i, &c) = v
                            .coords()
                            .iter()
                            .enumerate()
                            .find(|(_, c)| **c != 0.0)
                            .expect("simplex vertex has one nonzero coordinate");
                        (i, c)
                    })
                    .collect();
                let scale = axes[0].1.abs();
                let w: Vec<f64> = axes
                    .iter()
                    .map(|(i, c)| target.coords()[*i] * c.signum() / scale)
                    .collect();
                let lambda = project_to_simplex(&w);
                let mut out = vec![0.0; dim];
                for ((i, c), l) in axes.iter().zip(&lambda) {
                    out[*i] = l * c;
                }
                DualVector::new(out)
            }
        }
    }
}

/// Euclidean projection of `w` onto the probability simplex.
fn project_to_simplex(w: &[f64]) -> Vec<f64> {
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cum += v;
        let t = (cum - 1.0) / (i as f64 + 1.0);
        if i + 1 == sorted.len() || sorted.get(i + 1).map_or(true, |&next| next <= t) {
            theta = t;
            break;
        }
    }
    w.iter().map(|&v| (v - theta).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b])
    }
    fn dual2(a: f64, b: f64) -> DualVector {
        DualVector::new(vec![a, b])
    }

    #[test]
    fn norms_and_duals() {
        let p2 = NormedSpace::euclidean(2);
        assert_eq!(p2.norm(&vec2(3.0, 4.0)).unwrap(), 5.0);

        let p1 = NormedSpace::new(2, NormKind::P1).unwrap();
        assert_eq!(p1.norm(&vec2(1.0, -2.0)).unwrap(), 3.0);
        // dual of p1 is the sup norm
        assert_eq!(p1.dual_norm(&dual2(1.0, -2.0)).unwrap(), 2.0);

        let w = NormedSpace::new(2, NormKind::Weighted2(vec![1.0, 4.0])).unwrap();
        // direct formula sqrt(Σ wᵢ xᵢ²)
        assert_abs_diff_eq!(
            w.norm(&vec2(1.0, 1.0)).unwrap(),
            5.0_f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn j_values() {
        let p2 = NormedSpace::euclidean(2);
        assert_eq!(p2.j(&vec2(1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(p2.j(&vec2(3.0, 4.0)).unwrap(), 12.5);
        let p1 = NormedSpace::new(2, NormKind::P1).unwrap();
        // dual of p1 is pinf; ‖(1,1)‖_∞ = 1
        assert_eq!(p1.j_star(&dual2(1.0, 1.0)).unwrap(), 0.5);
    }

    #[test]
    fn pairing_is_bounded_by_norms() {
        let p1 = NormedSpace::new(2, NormKind::P1).unwrap();
        let x = vec2(1.0, -2.0);
        let xs = dual2(0.5, 1.5);
        let p = p1.pairing(&x, &xs).unwrap();
        assert!(p.abs() <= p1.norm(&x).unwrap() * p1.dual_norm(&xs).unwrap() + 1e-12);
    }

    #[test]
    fn duality_map_smooth() {
        let r = NormedSpace::real_line();
        let face = r.duality_map(&Vector::scalar(1.0)).unwrap();
        assert_eq!(face.vertices(), vec![DualVector::scalar(1.0)]);

        let p2 = NormedSpace::euclidean(2);
        let face = p2.duality_map(&vec2(3.0, 4.0)).unwrap();
        assert_eq!(face.vertices(), vec![dual2(3.0, 4.0)]);
        assert!(face.contains(&dual2(3.0, 4.0), DEFAULT_TOL).unwrap());
        assert!(!face.contains(&dual2(3.0, 3.9), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn duality_map_p1_face() {
        let p1 = NormedSpace::new(2, NormKind::P1).unwrap();
        let face = p1.duality_map(&vec2(1.0, 0.0)).unwrap();
        // Face is {(1, t) : t ∈ [-1, 1]}; cross-check the membership
        // predicate against a brute-force grid satisfying the identities.
        let mut verts = face.vertices();
        verts.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(verts, vec![dual2(1.0, -1.0), dual2(1.0, 1.0)]);

        let x = vec2(1.0, 0.0);
        let norm1 = p1.norm(&x).unwrap();
        let mut grid_members = 0;
        for i in -20..=20 {
            for k in -20..=20 {
                let z = dual2(i as f64 / 10.0, k as f64 / 10.0);
                let by_identity = (p1.pairing(&x, &z).unwrap() - norm1 * norm1).abs() <= 1e-12
                    && (p1.dual_norm(&z).unwrap() - norm1).abs() <= 1e-12;
                assert_eq!(by_identity, face.contains(&z, 1e-12).unwrap(), "z = {z}");
                if by_identity {
                    grid_members += 1;
                }
            }
        }
        assert_eq!(grid_members, 21); // (1, t) for t in -1..=1 step 0.1
    }

    #[test]
    fn duality_map_pinf_face_and_projection() {
        let pinf = NormedSpace::new(2, NormKind::PInf).unwrap();
        let face = pinf.duality_map(&vec2(3.0, 3.0)).unwrap();
        let verts = face.vertices();
        assert_eq!(verts.len(), 2);
        // Midpoint of the face is a member.
        assert!(face.contains(&dual2(1.5, 1.5), 1e-12).unwrap());
        // Projection of an exterior point lands in the face.
        let p = face.nearest_to(&dual2(10.0, 10.0));
        assert!(face.contains(&p, 1e-9).unwrap());
    }

    #[test]
    fn rl_examples() {
        let r = NormedSpace::real_line();
        assert_eq!(
            r.rl(&Vector::scalar(1.0), &DualVector::scalar(-1.0)).unwrap(),
            0.0
        );
        // On the real line r_L(x, x*) = ½(x + x*)².
        assert_eq!(
            r.rl(&Vector::scalar(1.0), &DualVector::scalar(1.0)).unwrap(),
            2.0
        );
        let p2 = NormedSpace::euclidean(2);
        assert_eq!(p2.rl(&vec2(3.0, 4.0), &dual2(0.0, 0.0)).unwrap(), 12.5);
    }

    #[test]
    fn rl_gap_examples() {
        let r = NormedSpace::real_line();
        let gap = r
            .rl_gap(&DualPair::scalar(2.0, 3.0), &DualPair::scalar(2.0, 3.0))
            .unwrap();
        assert_eq!(gap, 0.0);
        // Witness s = (y + y*)/(1 - 2λ) with λ = 1 for the target (2, 3).
        let gap = r
            .rl_gap(&DualPair::scalar(-5.0, 10.0), &DualPair::scalar(2.0, 3.0))
            .unwrap();
        assert_eq!(gap, 0.0);
        // ½(0 - 0 + 0 - 1)²
        let gap = r
            .rl_gap(&DualPair::scalar(0.0, 0.0), &DualPair::scalar(0.0, 1.0))
            .unwrap();
        assert_eq!(gap, 0.5);
    }

    #[test]
    fn fenchel_young_equality_iff_in_face() {
        let p1 = NormedSpace::new(2, NormKind::P1).unwrap();
        let x = vec2(1.0, 0.0);
        let inside = dual2(1.0, 0.3);
        let outside = dual2(0.9, 0.3);
        let face = p1.duality_map(&x).unwrap();
        let fy = |z: &DualVector| {
            (p1.j(&x).unwrap() + p1.j_star(z).unwrap() - p1.pairing(&x, z).unwrap()).abs()
        };
        assert!(face.contains(&inside, 1e-9).unwrap());
        assert!(fy(&inside) <= 1e-12);
        assert!(!face.contains(&outside, 1e-9).unwrap());
        assert!(fy(&outside) > 1e-3);
    }

    #[test]
    fn space_serde_round_trip() {
        let w = NormedSpace::new(2, NormKind::Weighted2(vec![1.0, 4.0])).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"dim":2,"norm":{"w2":[1.0,4.0]}}"#);
        let back: NormedSpace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let p: NormedSpace = serde_json::from_str(r#"{"dim":3,"norm":"pinf"}"#).unwrap();
        assert_eq!(p, NormedSpace::new(3, NormKind::PInf).unwrap());
    }

    #[test]
    fn pair_serde_is_nested_arrays() {
        let p = DualPair::new(vec2(1.0, 2.0), dual2(3.0, 4.0));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1.0,2.0],[3.0,4.0]]");
        let back: DualPair = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p2 = NormedSpace::euclidean(2);
        assert!(p2.norm(&Vector::scalar(1.0)).is_err());
        assert!(p2
            .rl_gap(
                &DualPair::scalar(0.0, 0.0),
                &DualPair::new(vec2(0.0, 0.0), dual2(0.0, 0.0))
            )
            .is_err());
    }
}
