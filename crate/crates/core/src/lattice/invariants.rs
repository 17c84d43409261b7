use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::intmat::{hermite_with_transform, mat_vec, transpose};
use crate::scalar::{Rational, Scalar};

use super::hull::{self, det_of};
use super::{LatticeError, LatticePolytope, Polytope, RationalPolytope};

/// Lattice-point enumeration refuses bounding boxes larger than this.
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

/// Exact affine-unimodular invariants of a lattice polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub rank: usize,
    pub vertex_count: usize,
    pub f_vector: Vec<usize>,
    pub normalized_volume: u64,
    pub edge_lengths: Vec<i64>,
    pub points_p: u64,
    pub points_2p: u64,
    pub interior_points: u64,
}

/// Outcome of the Fano test with the reason for any failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoReport {
    pub origin_interior: bool,
    pub nonprimitive_vertices: Vec<Vec<i64>>,
}

impl FanoReport {
    pub fn is_fano(&self) -> bool {
        self.origin_interior && self.nonprimitive_vertices.is_empty()
    }
}

pub fn is_fano(p: &LatticePolytope) -> Result<FanoReport, LatticeError> {
    if !p.is_full_dimensional() {
        return Err(LatticeError::NotFullDimensional { dim: p.dim(), rank: p.rank() });
    }
    let origin = vec![0; p.rank()];
    Ok(FanoReport {
        origin_interior: p.contains_strictly(&origin),
        nonprimitive_vertices: p.vertices().iter().filter(|v| crate::scalar::content(v) != 1).cloned().collect(),
    })
}

/// The polytope in coordinates of the lattice of its own affine hull: the
/// first vertex goes to the origin, and the result is full-dimensional of
/// rank `dim P`. Two polytopes are affinely equivalent in the ambient lattice
/// iff their intrinsic forms are.
pub fn intrinsic(p: &LatticePolytope) -> LatticePolytope {
    let k = p.dim();
    let v0 = &p.vertices()[0];
    let diffs: Vec<Vec<i64>> = p.vertices().iter().map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
    if k == p.rank() {
        return Polytope::hull(k, &diffs).expect("same rank");
    }
    let (_, u) = hermite_with_transform(&transpose(&diffs));
    let pts: Vec<Vec<i64>> = diffs.iter().map(|d| mat_vec(&u, d)[..k].to_vec()).collect();
    Polytope::hull(k, &pts).expect("intrinsic rank")
}

/// Affine lengths of all edges, sorted.
pub fn affine_edge_lengths(p: &LatticePolytope) -> Vec<i64> {
    let v = p.vertices();
    let mut out: Vec<i64> = p
        .edges()
        .into_iter()
        .map(|(a, b)| v[a].iter().zip(&v[b]).fold(0i64, |g, (x, y)| g.gcd(&(x - y))))
        .collect();
    out.sort_unstable();
    out
}

/// `dim! · vol` in the lattice of the affine hull.
pub fn normalized_volume(p: &LatticePolytope) -> u64 {
    let q = intrinsic(p);
    if q.rank() == 0 {
        return 1;
    }
    let d = q.data();
    let v0 = &q.vertices()[0];
    let mut total: i128 = 0;
    for s in &d.simplices {
        let rows: Vec<Vec<i128>> = s.iter().map(|&i| q.vertices()[i].iter().zip(v0).map(|(a, b)| (a - b) as i128).collect()).collect();
        total += det_of(rows).abs();
    }
    u64::try_from(total).expect("volume fits")
}

fn floor_r(x: &Rational) -> i64 {
    x.floor().to_integer().to_i64().expect("coordinate fits")
}

fn ceil_r(x: &Rational) -> i64 {
    x.ceil().to_integer().to_i64().expect("coordinate fits")
}

/// Visit every lattice point of a full-dimensional rational polytope,
/// scanning the box on all but the last coordinate and solving the facet
/// inequalities for the last one.
fn scan_full(q: &RationalPolytope, cap: u64, strict: bool, visit: &mut dyn FnMut(&[i64])) -> Result<(), LatticeError> {
    let n = q.rank();
    let lo: Vec<i64> = (0..n).map(|j| ceil_r(q.vertices().iter().map(|v| &v[j]).min().expect("nonempty"))).collect();
    let hi: Vec<i64> = (0..n).map(|j| floor_r(q.vertices().iter().map(|v| &v[j]).max().expect("nonempty"))).collect();
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Ok(());
    }
    let visits: u128 = lo[..n - 1].iter().zip(&hi[..n - 1]).map(|(a, b)| (b - a + 1) as u128).product();
    if visits > cap as u128 {
        return Err(LatticeError::TooLarge { visits, cap });
    }
    let facets = q.facets();
    let mut x: Vec<i64> = lo.clone();
    loop {
        let mut a = lo[n - 1];
        let mut b = hi[n - 1];
        let mut ok = true;
        for f in facets {
            let rest: Rational = f.normal[..n - 1]
                .iter()
                .zip(&x[..n - 1])
                .fold(Rational::zero(), |acc, (c, &xi)| acc + c * Rational::from_integer(xi.into()));
            let slack = &f.offset - rest;
            let c = &f.normal[n - 1];
            if c.is_zero() {
                if (strict && !slack.is_negative()) || (!strict && slack.is_positive()) {
                    ok = false;
                    break;
                }
                continue;
            }
            // c·x_last >= slack (strictly, in the interior)
            let bound = &slack / c;
            if c.is_positive() {
                let m = if strict { floor_r(&bound) + 1 } else { ceil_r(&bound) };
                a = a.max(m);
            } else {
                let m = if strict { ceil_r(&bound) - 1 } else { floor_r(&bound) };
                b = b.min(m);
            }
        }
        if ok {
            for t in a..=b {
                x[n - 1] = t;
                visit(&x);
            }
        }
        // advance the odometer on the first n-1 coordinates
        let mut j = 0;
        loop {
            if j + 1 >= n {
                return Ok(());
            }
            if x[j] < hi[j] {
                x[j] += 1;
                break;
            }
            x[j] = lo[j];
            j += 1;
        }
    }
}

/// Lattice points of the relative interior (`strict`) or of the whole polytope.
fn scan<S: Scalar>(p: &Polytope<S>, cap: u64, strict: bool) -> Result<Vec<Vec<i64>>, LatticeError> {
    let q = p.to_rational();
    let d = q.data();
    let mut out = Vec::new();
    if d.dim == 0 {
        if let Some(v) = p.vertices()[0].iter().map(Scalar::to_int).collect::<Option<Vec<i64>>>() {
            out.push(v);
        }
        return Ok(out);
    }
    if d.dim == q.rank() {
        scan_full(&q, cap, strict, &mut |x| out.push(x.to_vec()))?;
        out.sort();
        return Ok(out);
    }
    // Enumerate in the pivot coordinates, then lift back to the affine hull.
    let coords = d.coords.clone();
    let proj: Vec<Vec<Rational>> = q.vertices().iter().map(|v| d.project(v)).collect();
    let pq = Polytope::hull(coords.len(), &proj).expect("projection");
    let v0 = q.vertices()[0].clone();
    let basis: Vec<Vec<Rational>> = independent_differences(&q);
    let square: Vec<Vec<Rational>> = basis.iter().map(|b| coords.iter().map(|&c| b[c].clone()).collect()).collect();
    let mut lifted = Vec::new();
    scan_full(&pq, cap, strict, &mut |x| {
        let rhs: Vec<Rational> = x.iter().zip(&coords).map(|(&xi, &c)| Rational::from_integer(xi.into()) - &v0[c]).collect();
        let lambda = solve_left(&square, &rhs);
        let full: Vec<Rational> = (0..v0.len())
            .map(|j| lambda.iter().zip(&basis).fold(v0[j].clone(), |acc, (l, b)| acc + l * &b[j]))
            .collect();
        if full.iter().all(|c| c.is_integer()) {
            lifted.push(full.iter().map(|c| c.to_integer().to_i64().expect("fits")).collect::<Vec<i64>>());
        }
    })?;
    lifted.sort();
    Ok(lifted)
}

fn independent_differences(q: &RationalPolytope) -> Vec<Vec<Rational>> {
    let v0 = &q.vertices()[0];
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for v in &q.vertices()[1..] {
        let d: Vec<Rational> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
        let mut cand = basis.clone();
        cand.push(d);
        if hull::rank_of(&cand) == cand.len() {
            basis = cand;
        }
    }
    basis
}

/// Solve `λ · m = rhs` for square nonsingular `m`.
fn solve_left(m: &[Vec<Rational>], rhs: &[Rational]) -> Vec<Rational> {
    let k = m.len();
    // Transpose to the column system mᵀ λ = rhs and eliminate.
    let mut a: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rational> = (0..k).map(|j| m[j][i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..k {
        let p = (col..k).find(|&i| !a[i][col].is_zero()).expect("nonsingular");
        a.swap(col, p);
        let piv = a[col][col].clone();
        a[col].iter_mut().for_each(|x| *x = &*x / &piv);
        for i in 0..k {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let top = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(top) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[k].clone()).collect()
}

pub fn lattice_points<S: Scalar>(p: &Polytope<S>) -> Result<Vec<Vec<i64>>, LatticeError> {
    scan(p, DEFAULT_POINT_CAP, false)
}

pub fn lattice_points_with_cap<S: Scalar>(p: &Polytope<S>, cap: u64) -> Result<Vec<Vec<i64>>, LatticeError> {
    scan(p, cap, false)
}

pub fn lattice_point_count<S: Scalar>(p: &Polytope<S>, cap: u64) -> Result<u64, LatticeError> {
    Ok(scan(p, cap, false)?.len() as u64)
}

/// Lattice points in the relative interior.
pub fn interior_point_count<S: Scalar>(p: &Polytope<S>, cap: u64) -> Result<u64, LatticeError> {
    Ok(scan(p, cap, true)?.len() as u64)
}

pub fn fingerprint(p: &LatticePolytope) -> Result<Fingerprint, LatticeError> {
    fingerprint_with_cap(p, DEFAULT_POINT_CAP)
}

/// Fingerprint of a polytope, computed in its intrinsic lattice when it is
/// not full-dimensional.
pub fn fingerprint_with_cap(p: &LatticePolytope, cap: u64) -> Result<Fingerprint, LatticeError> {
    let q = intrinsic(p);
    Ok(Fingerprint {
        rank: p.rank(),
        vertex_count: q.vertex_count(),
        f_vector: q.f_vector(),
        normalized_volume: normalized_volume(&q),
        edge_lengths: affine_edge_lengths(&q),
        points_p: lattice_point_count(&q, cap)?,
        points_2p: lattice_point_count(&q.dilate(2), cap)?,
        interior_points: interior_point_count(&q, cap)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(v: &[&[i64]]) -> LatticePolytope {
        Polytope::from_points(&v.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn fano_checks() {
        assert!(is_fano(&lp(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap().is_fano());
        let r = is_fano(&lp(&[&[2, 0], &[0, 2], &[-2, -2]])).unwrap();
        assert!(r.origin_interior && r.nonprimitive_vertices.len() == 3);
        let r = is_fano(&lp(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert!(!r.origin_interior);
        assert!(is_fano(&lp(&[&[0, 0], &[1, 1]])).is_err());
    }

    #[test]
    fn edge_lengths_of_corpus_polytopes() {
        assert_eq!(affine_edge_lengths(&lp(&[&[0, 1], &[-1, -2], &[1, -2]])), vec![1, 1, 2]);
        let t = lp(&[&[0, 0, -1], &[-1, 1, 3], &[-1, -2, 3], &[5, -2, 3]]);
        assert_eq!(affine_edge_lengths(&t), vec![1, 1, 1, 3, 3, 6]);
        assert_eq!(affine_edge_lengths(&lp(&[&[0], &[1]])), vec![1]);
    }

    #[test]
    fn clifford_fingerprint() {
        let f = fingerprint(&lp(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(f.normalized_volume, 3);
        assert_eq!(f.edge_lengths, vec![1, 1, 1]);
        assert_eq!(f.points_p, 4);
        assert_eq!(f.interior_points, 1);
        // 2P has 3 boundary points per edge pair plus interior: Pick gives 10.
        assert_eq!(f.points_2p, 10);
        assert_eq!(f.f_vector, vec![3, 3]);
    }

    #[test]
    fn lattice_points_of_slanted_segment_and_triangle() {
        let seg = lp(&[&[0, 0, 0], &[2, 4, 6]]);
        assert_eq!(lattice_points(&seg).unwrap(), vec![vec![0, 0, 0], vec![1, 2, 3], vec![2, 4, 6]]);
        let tri = lp(&[&[0, 0, 1], &[2, 0, 1], &[0, 2, 1]]);
        assert_eq!(lattice_points(&tri).unwrap().len(), 6);
        assert_eq!(normalized_volume(&tri), 4);
        assert_eq!(intrinsic(&tri).rank(), 2);
        let big = lp(&[&[0, 0, 0], &[1000, 0, 0], &[0, 1000, 0], &[0, 0, 1000]]);
        assert!(matches!(lattice_points_with_cap(&big, 1000), Err(LatticeError::TooLarge { .. })));
    }

    #[test]
    fn cube_volume() {
        let mut pts = Vec::new();
        for x in 0..2i64 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![x * 2, y * 2, z * 2]);
                }
            }
        }
        let c = Polytope::from_points(&pts).unwrap();
        assert_eq!(normalized_volume(&c), 48);
        assert_eq!(lattice_points(&c).unwrap().len(), 27);
        assert_eq!(interior_point_count(&c, DEFAULT_POINT_CAP).unwrap(), 1);
    }
}
