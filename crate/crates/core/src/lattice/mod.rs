//! Exact polytope geometry over integer and rational coordinates.

mod equivalence;
pub mod hull;
mod invariants;
mod polytope;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::UnimodularMap;
use crate::scalar::{content, dot, Rational, Scalar};

pub use equivalence::{are_equivalent, find_affine_maps, AffineMap};
pub use hull::Facet;
pub use invariants::{
    affine_edge_lengths, fingerprint, fingerprint_with_cap, interior_point_count, intrinsic, is_fano, lattice_point_count,
    lattice_points, lattice_points_with_cap, normalized_volume, FanoReport, Fingerprint, DEFAULT_POINT_CAP,
};
pub use polytope::Polytope;

pub type LatticePolytope = Polytope<i64>;
pub type RationalPolytope = Polytope<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty point set")]
    EmptyInput,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("width vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("height {h} outside [{min}, {max}]")]
    HeightOutOfRange { h: String, min: String, max: String },
    #[error("polytope is not full-dimensional (affine dimension {dim} in rank {rank})")]
    NotFullDimensional { dim: usize, rank: usize },
    #[error("lattice-point enumeration would visit {visits} points (cap {cap})")]
    TooLarge { visits: u128, cap: u64 },
    #[error("coordinates overflow machine integers")]
    Overflow,
}

/// A primitive integer vector of the dual lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct WidthVector(Vec<i64>);

impl WidthVector {
    pub fn new(w: Vec<i64>) -> Result<Self, LatticeError> {
        if content(&w) != 1 {
            return Err(LatticeError::NotPrimitive(w));
        }
        Ok(Self(w))
    }

    /// The dual basis vector of coordinate `axis`.
    pub fn axis(rank: usize, axis: usize) -> Self {
        let mut w = vec![0; rank];
        w[axis] = 1;
        Self(w)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn eval<S: Scalar>(&self, p: &[S]) -> S {
        let w: Vec<S> = self.0.iter().map(|&x| S::from_i64(x)).collect();
        dot(&w, p)
    }
}

impl TryFrom<Vec<i64>> for WidthVector {
    type Error = LatticeError;
    fn try_from(w: Vec<i64>) -> Result<Self, Self::Error> {
        Self::new(w)
    }
}

impl From<WidthVector> for Vec<i64> {
    fn from(w: WidthVector) -> Self {
        w.0
    }
}

/// `(h_min, h_max, width)` of `P` along `w`.
pub fn width_heights<S: Scalar>(p: &Polytope<S>, w: &WidthVector) -> Result<(S, S, S), LatticeError> {
    if w.rank() != p.rank() {
        return Err(LatticeError::RankMismatch { expected: p.rank(), found: w.rank() });
    }
    let (lo, hi) = p.heights(w.as_slice());
    let width = hi.clone() - lo.clone();
    Ok((lo, hi, width))
}

/// The slice `P ∩ {⟨w,·⟩ = h}`, from the vertices on the hyperplane and the
/// crossings of every vertex pair on opposite sides of it.
pub fn slice<S: Scalar>(p: &Polytope<S>, w: &WidthVector, h: &Rational) -> Result<RationalPolytope, LatticeError> {
    let (lo, hi, _) = width_heights(p, w)?;
    let (lo, hi) = (lo.to_rational(), hi.to_rational());
    if *h < lo || *h > hi {
        return Err(LatticeError::HeightOutOfRange { h: h.to_string(), min: lo.to_string(), max: hi.to_string() });
    }
    let verts: Vec<Vec<Rational>> = p.vertices().iter().map(|v| v.iter().map(Scalar::to_rational).collect()).collect();
    let hs: Vec<Rational> = verts.iter().map(|v| w.eval(v)).collect();
    let mut pts = Vec::new();
    for (i, a) in verts.iter().enumerate() {
        if hs[i] == *h {
            pts.push(a.clone());
        }
        for (j, b) in verts.iter().enumerate().skip(i + 1) {
            if (hs[i] < *h && hs[j] > *h) || (hs[i] > *h && hs[j] < *h) {
                let t = (h - &hs[i]) / (&hs[j] - &hs[i]);
                pts.push(a.iter().zip(b).map(|(x, y)| x + &t * (y - x)).collect());
            }
        }
    }
    Polytope::hull(p.rank(), &pts)
}

/// Shrink coordinates by elementary shears `x_i ↦ x_i ± x_j` while the sum
/// of squared vertex coordinates decreases. Returns the reduced polytope and
/// the map that produced it.
pub fn reduce_coordinates(p: &LatticePolytope) -> (LatticePolytope, UnimodularMap) {
    let n = p.rank();
    let size = |q: &LatticePolytope| -> i128 { q.vertices().iter().flatten().map(|&x| (x as i128) * (x as i128)).sum() };
    let mut cur = p.clone();
    let mut total = UnimodularMap::identity(n);
    let mut best = size(&cur);
    'outer: loop {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for s in [1, -1] {
                    let mut m = crate::intmat::identity(n);
                    m[i][j] = s;
                    let m = UnimodularMap::new(m).expect("shear");
                    let q = cur.map_unimodular(&m).expect("rank");
                    let sz = size(&q);
                    if sz < best {
                        best = sz;
                        cur = q;
                        total = m.compose(&total);
                        continue 'outer;
                    }
                }
            }
        }
        return (cur, total);
    }
}

/// Slice at an integer height.
pub fn slice_at<S: Scalar>(p: &Polytope<S>, w: &WidthVector, h: i64) -> Result<RationalPolytope, LatticeError> {
    slice(p, w, &Rational::from_integer(h.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn lp(v: &[&[i64]]) -> LatticePolytope {
        Polytope::from_points(&v.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangle_slice_is_a_rational_segment() {
        let p = lp(&[&[1, 1], &[0, -1], &[1, -1]]);
        let w = WidthVector::new(vec![0, 1]).unwrap();
        let s = slice_at(&p, &w, 0).unwrap();
        assert_eq!(s.vertices(), &[vec![rational(1, 2), int(0)], vec![int(1), int(0)]]);
        assert!(matches!(slice_at(&p, &w, 2), Err(LatticeError::HeightOutOfRange { .. })));
    }

    #[test]
    fn shear_reduction() {
        let p = lp(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let m = UnimodularMap::new(vec![vec![1, 3], vec![0, 1]]).unwrap();
        let q = p.map_unimodular(&m).unwrap();
        let (r, t) = reduce_coordinates(&q);
        assert_eq!(q.map_unimodular(&t).unwrap(), r);
        let size: i64 = r.vertices().iter().flatten().map(|x| x * x).sum();
        assert!(size <= 4);
    }

    #[test]
    fn clifford_widths() {
        let p = lp(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let w = WidthVector::new(vec![0, 1]).unwrap();
        assert_eq!(width_heights(&p, &w).unwrap(), (-1, 1, 2));
        let pt = lp(&[&[3, 4]]);
        assert_eq!(width_heights(&pt, &w).unwrap().2, 0);
        assert!(WidthVector::new(vec![2, 4]).is_err());
    }

    #[test]
    fn tetrahedron_top_and_bottom_slices() {
        // Newton polytope of (y+(1+x)^2)/z + z^3/(xy^2).
        let p = lp(&[&[0, 1, -1], &[0, 0, -1], &[1, 0, -1], &[2, 0, -1], &[-1, -2, 3]]);
        let w = WidthVector::axis(3, 2);
        assert_eq!(width_heights(&p, &w).unwrap(), (-1, 3, 4));
        let top = slice_at(&p, &w, 3).unwrap();
        assert_eq!(top.vertices(), &[vec![int(-1), int(-2), int(3)]]);
        let bottom = slice_at(&p, &w, -1).unwrap().to_lattice().unwrap();
        assert_eq!(bottom, lp(&[&[0, 1, -1], &[0, 0, -1], &[2, 0, -1]]));
    }
}
