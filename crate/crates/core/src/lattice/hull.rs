//! Exact convex hulls in any dimension.
//!
//! Points are first reduced to their affine hull by selecting coordinates on
//! which the projection is injective. Two-dimensional hulls use Andrew's
//! monotone chain; three and more dimensions use an incremental
//! beneath-beyond construction whose boundary is kept triangulated. All
//! predicates are exact sign tests on determinants over the scalar type.

use std::collections::{BTreeMap, BTreeSet};

use crate::scalar::{dot, Scalar};

/// A facet inequality `normal · x >= offset`, in the projected coordinates of
/// the owning [`HullData`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet<S> {
    pub normal: Vec<S>,
    pub offset: S,
    /// Indices into the hull's vertex list.
    pub vertices: Vec<usize>,
}

impl<S: Scalar> Facet<S> {
    pub fn eval(&self, p: &[S]) -> S {
        dot(&self.normal, p) - self.offset.clone()
    }
}

/// Everything derived from one hull computation.
#[derive(Debug, Clone)]
pub struct HullData<S> {
    /// Affine dimension.
    pub dim: usize,
    /// Coordinates kept by the projection onto the affine hull.
    pub coords: Vec<usize>,
    /// Irredundant vertices, sorted lexicographically (ambient coordinates).
    pub vertices: Vec<Vec<S>>,
    /// Facets in projected coordinates (empty for a point).
    pub facets: Vec<Facet<S>>,
    /// Boundary triangulation: each entry lists `dim` vertex indices.
    pub simplices: Vec<Vec<usize>>,
}

impl<S: Scalar> HullData<S> {
    pub fn project(&self, p: &[S]) -> Vec<S> {
        self.coords.iter().map(|&c| p[c].clone()).collect()
    }
}

/// Rank of a list of row vectors over the fraction field of `S`.
pub fn rank_of<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut a: Vec<Vec<S>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let piv = a[r][col].clone();
            let top = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(top) {
                *x = x.clone() * piv.clone() - f.clone() * y;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Exact determinant (Bareiss); every division is exact in an integral domain.
pub fn det_of<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    if n == 0 {
        return S::one();
    }
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return S::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
            a[i][k] = S::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Normal vector of the hyperplane through `k` points in `k`-space, by
/// cofactor expansion. Zero when the points are affinely dependent.
pub fn hyperplane_normal<S: Scalar>(points: &[&[S]]) -> Vec<S> {
    let k = points[0].len();
    let base = points[0];
    let diffs: Vec<Vec<S>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<S>> = diffs
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = det_of(minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

/// Greedily choose coordinates on which the differences have full rank.
fn pivot_coords<S: Scalar>(diffs: &[Vec<S>], dim: usize) -> Vec<usize> {
    let n = diffs.first().map_or(0, Vec::len);
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..n {
        if chosen.len() == dim {
            break;
        }
        let mut cand = chosen.clone();
        cand.push(c);
        let sub_rows: Vec<Vec<S>> = diffs.iter().map(|d| cand.iter().map(|&j| d[j].clone()).collect()).collect();
        if rank_of(&sub_rows) == cand.len() {
            chosen = cand;
        }
    }
    chosen
}

/// Compute the hull of a nonempty point set of uniform length.
pub fn compute<S: Scalar>(points: &[Vec<S>]) -> HullData<S> {
    let pts: Vec<Vec<S>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    assert!(!pts.is_empty(), "hull of an empty point set");
    let base = pts[0].clone();
    let diffs: Vec<Vec<S>> = pts[1..].iter().map(|p| sub(p, &base)).collect();
    let dim = rank_of(&diffs);
    let coords = pivot_coords(&diffs, dim);
    let proj: Vec<Vec<S>> = pts.iter().map(|p| coords.iter().map(|&c| p[c].clone()).collect()).collect();

    let (vertex_idx, facets, simplices) = match dim {
        0 => (vec![0], Vec::new(), Vec::new()),
        1 => hull_1d(&proj),
        2 => hull_2d(&proj),
        _ => hull_nd(&proj, dim),
    };

    // Reindex onto the sorted vertex list. `pts` is sorted, so sorting the
    // original indices keeps lexicographic order.
    let mut vertex_idx = vertex_idx;
    vertex_idx.sort_unstable();
    let remap: BTreeMap<usize, usize> = vertex_idx.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<Vec<S>> = vertex_idx.iter().map(|&i| pts[i].clone()).collect();
    let vproj: Vec<Vec<S>> = vertex_idx.iter().map(|&i| proj[i].clone()).collect();
    let facets = facets
        .into_iter()
        .map(|(normal, offset): (Vec<S>, S)| {
            let on: Vec<usize> = vproj
                .iter()
                .enumerate()
                .filter(|(_, p)| dot(&normal, p) == offset)
                .map(|(i, _)| i)
                .collect();
            Facet { normal, offset, vertices: on }
        })
        .collect();
    let simplices = simplices
        .into_iter()
        .filter_map(|s: Vec<usize>| s.iter().map(|i| remap.get(i).copied()).collect::<Option<Vec<_>>>())
        .collect();
    HullData { dim, coords, vertices, facets, simplices }
}

type Pieces<S> = (Vec<usize>, Vec<(Vec<S>, S)>, Vec<Vec<usize>>);

fn hull_1d<S: Scalar>(proj: &[Vec<S>]) -> Pieces<S> {
    let (lo, hi) = (0, proj.len() - 1);
    let facets = vec![
        (vec![S::one()], proj[lo][0].clone()),
        (vec![-S::one()], -proj[hi][0].clone()),
    ];
    (vec![lo, hi], facets, vec![vec![lo], vec![hi]])
}

fn cross<S: Scalar>(o: &[S], a: &[S], b: &[S]) -> S {
    (a[0].clone() - o[0].clone()) * (b[1].clone() - o[1].clone())
        - (a[1].clone() - o[1].clone()) * (b[0].clone() - o[0].clone())
}

/// Andrew's monotone chain. `proj` is sorted lexicographically.
fn hull_2d<S: Scalar>(proj: &[Vec<S>]) -> Pieces<S> {
    let mut ordered: Vec<usize> = (0..proj.len()).collect();
    ordered.sort_by(|&a, &b| proj[a].cmp(&proj[b]));
    let mut lower: Vec<usize> = Vec::new();
    for &i in &ordered {
        while lower.len() >= 2 && cross(&proj[lower[lower.len() - 2]], &proj[lower[lower.len() - 1]], &proj[i]) <= S::zero() {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in ordered.iter().rev() {
        while upper.len() >= 2 && cross(&proj[upper[upper.len() - 2]], &proj[upper[upper.len() - 1]], &proj[i]) <= S::zero() {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    let cycle: Vec<usize> = lower.into_iter().chain(upper).collect();
    let m = cycle.len();
    let mut facets = Vec::with_capacity(m);
    let mut simplices = Vec::with_capacity(m);
    for k in 0..m {
        let a = &proj[cycle[k]];
        let b = &proj[cycle[(k + 1) % m]];
        // Counter-clockwise cycle: the interior lies to the left.
        let normal = vec![a[1].clone() - b[1].clone(), b[0].clone() - a[0].clone()];
        let offset = dot(&normal, a);
        facets.push((normal, offset));
        simplices.push(vec![cycle[k], cycle[(k + 1) % m]]);
    }
    (cycle, facets, simplices)
}

struct Piece<S> {
    verts: Vec<usize>,
    normal: Vec<S>,
    offset: S,
}

/// Incremental beneath-beyond hull for full-dimensional point sets in `k >= 3`
/// dimensions. The boundary stays a triangulated sphere: coplanar points
/// never see a facet strictly, so every horizon ridge spans a proper cone
/// with the new point.
fn hull_nd<S: Scalar>(proj: &[Vec<S>], k: usize) -> Pieces<S> {
    let n = proj.len();
    // Initial simplex.
    let mut simplex = vec![0usize];
    for i in 1..n {
        if simplex.len() == k + 1 {
            break;
        }
        let mut rows: Vec<Vec<S>> = simplex[1..].iter().map(|&j| sub(&proj[j], &proj[simplex[0]])).collect();
        rows.push(sub(&proj[i], &proj[simplex[0]]));
        if rank_of(&rows) == rows.len() {
            simplex.push(i);
        }
    }
    debug_assert_eq!(simplex.len(), k + 1);
    let denom = S::from_i64((k + 1) as i64);
    let mut centre = vec![S::zero(); k];
    for &i in &simplex {
        for (c, x) in centre.iter_mut().zip(&proj[i]) {
            *c = c.clone() + x.clone();
        }
    }
    let make_piece = |verts: Vec<usize>| -> Piece<S> {
        let refs: Vec<&[S]> = verts.iter().map(|&i| proj[i].as_slice()).collect();
        let mut normal = hyperplane_normal(&refs);
        let mut offset = dot(&normal, &proj[verts[0]]);
        if dot(&normal, &centre) - offset.clone() * denom.clone() < S::zero() {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        let mut verts = verts;
        verts.sort_unstable();
        Piece { verts, normal, offset }
    };
    let mut pieces: Vec<Piece<S>> = (0..=k)
        .map(|skip| make_piece(simplex.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect()))
        .collect();
    let in_simplex: BTreeSet<usize> = simplex.iter().copied().collect();
    for p in 0..n {
        if in_simplex.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = pieces
            .iter()
            .map(|f| dot(&f.normal, &proj[p]) < f.offset)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (f, _) in pieces.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..f.verts.len() {
                let ridge: Vec<usize> = f.verts.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<Piece<S>> = pieces
            .into_iter()
            .zip(visible)
            .filter(|(_, v)| !v)
            .map(|(f, _)| f)
            .collect();
        for (ridge, count) in ridges {
            if count == 1 {
                let mut verts = ridge;
                verts.push(p);
                kept.push(make_piece(verts));
            }
        }
        pieces = kept;
    }

    // A boundary point is a vertex iff the planes through it pin it down.
    let used: BTreeSet<usize> = pieces.iter().flat_map(|f| f.verts.iter().copied()).collect();
    let vertices: Vec<usize> = used
        .into_iter()
        .filter(|&p| {
            let normals: Vec<Vec<S>> = pieces
                .iter()
                .filter(|f| dot(&f.normal, &proj[p]) == f.offset)
                .map(|f| f.normal.clone())
                .collect();
            rank_of(&normals) == k
        })
        .collect();

    // Merge coplanar pieces into facets.
    let mut planes: Vec<(Vec<S>, S)> = Vec::new();
    for f in &pieces {
        let dup = planes.iter().any(|(nrm, off)| f.verts.iter().all(|&v| dot(nrm, &proj[v]) == *off));
        if !dup {
            planes.push((f.normal.clone(), f.offset.clone()));
        }
    }
    let simplices = pieces.into_iter().map(|f| f.verts).collect();
    (vertices, planes, simplices)
}
