use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::intmat::UnimodularMap;
use crate::scalar::{dot, Rational, Scalar};

use super::hull::{self, Facet, HullData};
use super::LatticeError;

/// A convex polytope given by its vertices.
///
/// The vertex list is irredundant and sorted lexicographically, so two
/// polytopes are equal exactly when their vertex lists are. Facets and faces
/// are computed on first use and shared between clones.
pub struct Polytope<S: Scalar> {
    rank: usize,
    vertices: Vec<Vec<S>>,
    hull: OnceLock<Arc<HullData<S>>>,
}

impl<S: Scalar> Polytope<S> {
    /// Convex hull of a nonempty point set.
    pub fn hull(rank: usize, points: &[Vec<S>]) -> Result<Self, LatticeError> {
        if points.is_empty() {
            return Err(LatticeError::EmptyInput);
        }
        if let Some(p) = points.iter().find(|p| p.len() != rank) {
            return Err(LatticeError::RankMismatch { expected: rank, found: p.len() });
        }
        let data = hull::compute(points);
        let vertices = data.vertices.clone();
        let cell = OnceLock::new();
        let _ = cell.set(Arc::new(data));
        Ok(Self { rank, vertices, hull: cell })
    }

    pub fn point(p: Vec<S>) -> Self {
        let rank = p.len();
        Self::hull(rank, &[p]).expect("a point is a polytope")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[Vec<S>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub(crate) fn data(&self) -> &HullData<S> {
        self.hull.get_or_init(|| Arc::new(hull::compute(&self.vertices)))
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.data().dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.rank
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Facet inequalities in the coordinates of the affine hull chosen by
    /// [`Polytope::facet_coords`]. For full-dimensional polytopes these are
    /// the ambient coordinates.
    pub fn facets(&self) -> &[Facet<S>] {
        &self.data().facets
    }

    pub fn facet_coords(&self) -> &[usize] {
        &self.data().coords
    }

    fn in_affine_hull(&self, p: &[S]) -> bool {
        let d = self.data();
        let v0 = &self.vertices[0];
        let mut rows: Vec<Vec<S>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect();
        rows.push(p.iter().zip(v0).map(|(a, b)| a.clone() - b.clone()).collect());
        hull::rank_of(&rows) == d.dim
    }

    fn facet_values(&self, p: &[S]) -> Option<Vec<S>> {
        if p.len() != self.rank || !self.in_affine_hull(p) {
            return None;
        }
        let d = self.data();
        let q = d.project(p);
        Some(d.facets.iter().map(|f| f.eval(&q)).collect())
    }

    pub fn contains(&self, p: &[S]) -> bool {
        if self.is_point() {
            return p == self.vertices[0].as_slice();
        }
        self.facet_values(p).is_some_and(|v| v.iter().all(|x| !x.is_negative()))
    }

    /// Membership in the relative interior.
    pub fn contains_strictly(&self, p: &[S]) -> bool {
        if self.is_point() {
            return p == self.vertices[0].as_slice();
        }
        self.facet_values(p).is_some_and(|v| v.iter().all(|x| x.is_positive()))
    }

    pub fn translate(&self, t: &[S]) -> Self {
        let pts: Vec<Vec<S>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a.clone() + b.clone()).collect())
            .collect();
        Self::hull(self.rank, &pts).expect("translation preserves rank")
    }

    /// Image under `v ↦ M·v`.
    pub fn map_unimodular(&self, m: &UnimodularMap) -> Result<Self, LatticeError> {
        if m.dim() != self.rank {
            return Err(LatticeError::RankMismatch { expected: self.rank, found: m.dim() });
        }
        let pts: Vec<Vec<S>> = self
            .vertices
            .iter()
            .map(|v| {
                m.matrix()
                    .iter()
                    .map(|row| row.iter().zip(v).fold(S::zero(), |acc, (&a, x)| acc + S::from_i64(a) * x.clone()))
                    .collect()
            })
            .collect();
        Self::hull(self.rank, &pts)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self, LatticeError> {
        if other.rank != self.rank {
            return Err(LatticeError::RankMismatch { expected: self.rank, found: other.rank });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect());
            }
        }
        Self::hull(self.rank, &pts)
    }

    /// The dilate `m·P`; `m = 0` collapses to the origin.
    pub fn dilate(&self, m: i64) -> Self {
        let k = S::from_i64(m);
        let pts: Vec<Vec<S>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.clone() * k.clone()).collect())
            .collect();
        Self::hull(self.rank, &pts).expect("dilation preserves rank")
    }

    /// `(h_min, h_max)` of `⟨w, ·⟩` over the vertices.
    pub fn heights(&self, w: &[i64]) -> (S, S) {
        let ws: Vec<S> = w.iter().map(|&x| S::from_i64(x)).collect();
        let hs: Vec<S> = self.vertices.iter().map(|v| dot(&ws, v)).collect();
        let lo = hs.iter().min().cloned().expect("nonempty");
        let hi = hs.iter().max().cloned().expect("nonempty");
        (lo, hi)
    }

    /// Vertex index sets of all nonempty faces of dimension below `dim`,
    /// obtained by closing the facet vertex sets under intersection.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let d = self.data();
        if d.dim == 0 {
            return Vec::new();
        }
        let mut all: BTreeSet<Vec<usize>> = d.facets.iter().map(|f| f.vertices.clone()).collect();
        let mut frontier: Vec<Vec<usize>> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for f in &d.facets {
                    let meet: Vec<usize> = a.iter().copied().filter(|i| f.vertices.contains(i)).collect();
                    if !meet.is_empty() && all.insert(meet.clone()) {
                        next.push(meet);
                    }
                }
            }
            frontier = next;
        }
        for i in 0..self.vertices.len() {
            all.insert(vec![i]);
        }
        all.into_iter().collect()
    }

    pub fn face_dim(&self, face: &[usize]) -> usize {
        let v0 = &self.vertices[face[0]];
        let rows: Vec<Vec<S>> = face[1..]
            .iter()
            .map(|&i| self.vertices[i].iter().zip(v0).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect();
        hull::rank_of(&rows)
    }

    /// Vertex index pairs of the edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        if self.dim() == 1 {
            return vec![(0, 1)];
        }
        let mut out: Vec<(usize, usize)> = self
            .faces()
            .into_iter()
            .filter(|f| f.len() == 2)
            .map(|f| (f[0], f[1]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of faces of each dimension `0..dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        let mut f = vec![0; d];
        for face in self.faces() {
            f[self.face_dim(&face)] += 1;
        }
        f
    }

    /// The facet vertex sets as polytopes.
    pub fn facet_polytopes(&self) -> Vec<Self> {
        self.facets()
            .iter()
            .map(|f| {
                let pts: Vec<Vec<S>> = f.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
                Self::hull(self.rank, &pts).expect("facet vertices")
            })
            .collect()
    }

    pub fn to_rational(&self) -> Polytope<Rational> {
        let pts: Vec<Vec<Rational>> = self.vertices.iter().map(|v| v.iter().map(Scalar::to_rational).collect()).collect();
        Polytope::hull(self.rank, &pts).expect("same rank")
    }

    /// The same polytope with integer coordinates, if every vertex is integral.
    pub fn to_lattice(&self) -> Option<Polytope<i64>> {
        let pts: Option<Vec<Vec<i64>>> = self.vertices.iter().map(|v| v.iter().map(Scalar::to_int).collect()).collect();
        Some(Polytope::hull(self.rank, &pts?).expect("same rank"))
    }
}

impl Polytope<i64> {
    pub fn from_points(points: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let rank = points.first().map(Vec::len).ok_or(LatticeError::EmptyInput)?;
        Self::hull(rank, points)
    }
}

impl<S: Scalar> Clone for Polytope<S> {
    fn clone(&self) -> Self {
        let cell = OnceLock::new();
        if let Some(d) = self.hull.get() {
            let _ = cell.set(Arc::clone(d));
        }
        Self { rank: self.rank, vertices: self.vertices.clone(), hull: cell }
    }
}

impl<S: Scalar> PartialEq for Polytope<S> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.vertices == other.vertices
    }
}

impl<S: Scalar> Eq for Polytope<S> {}

impl<S: Scalar + Hash> Hash for Polytope<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.vertices.hash(state);
    }
}

impl<S: Scalar> PartialOrd for Polytope<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Polytope<S> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rank, &self.vertices).cmp(&(other.rank, &other.vertices))
    }
}

impl<S: Scalar> fmt::Debug for Polytope<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}
