use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::intmat::{inverse_rational, mat_vec, UnimodularMap};
use crate::scalar::Rational;

use super::invariants::{fingerprint, intrinsic};
use super::LatticePolytope;

/// An affine unimodular map `v ↦ M·v + t`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct AffineMap {
    pub linear: UnimodularMap,
    pub translation: Vec<i64>,
}

impl AffineMap {
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.linear.apply(v).iter().zip(&self.translation).map(|(a, b)| a + b).collect()
    }
}

fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Every affine unimodular map carrying the vertex set of `p` onto that of
/// `q`. Both polytopes must be full-dimensional of the same rank; otherwise
/// the result is empty.
pub fn find_affine_maps(p: &LatticePolytope, q: &LatticePolytope) -> Vec<AffineMap> {
    let n = p.rank();
    if q.rank() != n || p.vertex_count() != q.vertex_count() || !p.is_full_dimensional() || !q.is_full_dimensional() {
        return Vec::new();
    }
    let pv = p.vertices();
    let qv = q.vertices();
    if n == 0 {
        return vec![AffineMap { linear: UnimodularMap::identity(0), translation: Vec::new() }];
    }
    // Affinely independent frame of P.
    let mut frame = vec![0usize];
    for i in 1..pv.len() {
        if frame.len() == n + 1 {
            break;
        }
        let mut rows: Vec<Vec<i64>> = frame[1..].iter().map(|&j| diff(&pv[j], &pv[frame[0]])).collect();
        rows.push(diff(&pv[i], &pv[frame[0]]));
        if crate::intmat::rank(&rows) == rows.len() {
            frame.push(i);
        }
    }
    let dp: Vec<Vec<i64>> = frame[1..].iter().map(|&j| diff(&pv[j], &pv[frame[0]])).collect();
    let dp_inv = inverse_rational(&dp).expect("frame is independent");
    let frame_gcd: Vec<i64> = dp.iter().map(|d| gcd_of(d)).collect();
    let target: BTreeSet<&Vec<i64>> = qv.iter().collect();

    let mut found = BTreeSet::new();
    let mut images = Vec::with_capacity(n + 1);
    let mut used = vec![false; qv.len()];
    extend(&mut images, &mut used, qv, &frame_gcd, &mut |imgs: &[usize]| {
        let q0 = &qv[imgs[0]];
        let dq: Vec<Vec<i64>> = imgs[1..].iter().map(|&j| diff(&qv[j], q0)).collect();
        // Row form: dp · Mᵀ = dq.
        let mut mt = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).fold(Rational::zero(), |acc, k| acc + &dp_inv[i][k] * Rational::from_integer(dq[k][j].into()));
                if !v.is_integer() {
                    return;
                }
                mt[i][j] = v.to_integer().to_i64().expect("fits");
            }
        }
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| mt[j][i]).collect()).collect();
        let Ok(linear) = UnimodularMap::new(m) else { return };
        let mv0 = mat_vec(linear.matrix(), &pv[frame[0]]);
        let translation = diff(q0, &mv0);
        let map = AffineMap { linear, translation };
        if pv.iter().all(|v| target.contains(&map.apply(v))) {
            found.insert(map);
        }
    });
    found.into_iter().collect()
}

fn extend(
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    qv: &[Vec<i64>],
    frame_gcd: &[i64],
    done: &mut dyn FnMut(&[usize]),
) {
    if images.len() == frame_gcd.len() + 1 {
        done(images);
        return;
    }
    for j in 0..qv.len() {
        if used[j] {
            continue;
        }
        if let Some(&base) = images.first() {
            // Lattice length of the frame segment is preserved.
            if gcd_of(&diff(&qv[j], &qv[base])) != frame_gcd[images.len() - 1] {
                continue;
            }
        }
        used[j] = true;
        images.push(j);
        extend(images, used, qv, frame_gcd, done);
        images.pop();
        used[j] = false;
    }
}

/// Affine unimodular equivalence, allowing translations. Lower-dimensional
/// polytopes are compared in the lattices of their affine hulls.
pub fn are_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> bool {
    if p.rank() != q.rank() || p.vertex_count() != q.vertex_count() || p.dim() != q.dim() {
        return false;
    }
    match (fingerprint(p), fingerprint(q)) {
        (Ok(a), Ok(b)) if a != b => return false,
        _ => {}
    }
    let (a, b) = (intrinsic(p), intrinsic(q));
    !find_affine_maps(&a, &b).is_empty()
}
