//! Small dense integer matrices: determinants, Hermite normal forms,
//! unimodular completion and exact solves.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. Intermediate arithmetic runs in
//! `i128` or exact rationals so the desk-scale inputs this crate works with
//! never overflow silently.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{content, Rational};

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has determinant {det}, expected +1 or -1")]
    NotUnimodular { det: i64 },
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(m: &[Vec<i64>]) -> IntMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(m).map(|(a, row)| a * row[j]).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = &a[n - 1][n - 1] * sign;
    d.to_i64().expect("determinant fits in i64")
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    hermite_rows(rows).len()
}

/// Row-style Hermite normal form: an echelon basis of the lattice spanned by
/// `rows`, with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(rows: &[Vec<i64>]) -> IntMatrix {
    let (mut h, _) = hermite_with_transform(rows);
    let r = h.iter().take_while(|row| row.iter().any(|&x| x != 0)).count();
    h.truncate(r);
    h
}

/// Hermite normal form with the unimodular transform: returns `(H, U)` with
/// `U · rows = H`, `H` in echelon form and its zero rows at the bottom.
pub fn hermite_with_transform(rows: &[Vec<i64>]) -> (IntMatrix, IntMatrix) {
    let m = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();
    let sub_row = |mat: &mut Vec<Vec<i128>>, target: usize, src: usize, q: i128| {
        let s = mat[src].clone();
        for (x, y) in mat[target].iter_mut().zip(s) {
            *x -= q * y;
        }
    };
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].abs());
            let Some(p) = pivot else { break };
            a.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if a[i][col] != 0 {
                    let q = a[i][col].div_euclid(a[r][col]);
                    sub_row(&mut a, i, r, q);
                    sub_row(&mut u, i, r, q);
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
            u[r].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..r {
            let q = a[i][col].div_euclid(a[r][col]);
            if q != 0 {
                sub_row(&mut a, i, r, q);
                sub_row(&mut u, i, r, q);
            }
        }
        r += 1;
    }
    let narrow = |mat: Vec<Vec<i128>>| -> IntMatrix {
        mat.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| i64::try_from(x).expect("HNF entry fits in i64"))
                    .collect()
            })
            .collect()
    };
    (narrow(a), narrow(u))
}

/// Exact inverse over the rationals; `None` for singular input.
pub fn inverse_rational(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let (pivot_row, row) = if i < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[col], &mut hi[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Integer inverse when one exists.
pub fn inverse_integer(m: &[Vec<i64>]) -> Option<IntMatrix> {
    let inv = inverse_rational(m)?;
    inv.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
                .collect()
        })
        .collect()
}

/// Solve `c · basis = target` for an integer row vector `c`. The basis rows
/// must be linearly independent.
pub fn solve_in_basis(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let r = basis.len();
    let n = target.len();
    if r == 0 {
        return target.iter().all(|&x| x == 0).then(Vec::new);
    }
    // Pick r pivot columns of the basis to get a square nonsingular system.
    let cols = pivot_columns(basis)?;
    let square: IntMatrix = basis.iter().map(|row| cols.iter().map(|&j| row[j]).collect()).collect();
    let inv = inverse_rational(&square)?;
    let rhs: Vec<Rational> = cols.iter().map(|&j| Rational::from_integer(target[j].into())).collect();
    let mut c = Vec::with_capacity(r);
    for i in 0..r {
        // c = rhs · inv
        let v = (0..r).fold(Rational::zero(), |acc, k| acc + &rhs[k] * &inv[k][i]);
        if !v.is_integer() {
            return None;
        }
        c.push(v.to_integer().to_i64()?);
    }
    if vec_mat(&c, basis) == target[..n] {
        Some(c)
    } else {
        None
    }
}

fn pivot_columns(rows: &[Vec<i64>]) -> Option<Vec<usize>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut chosen = Vec::new();
    for j in 0..ncols {
        let mut cand = chosen.clone();
        cand.push(j);
        let sub: IntMatrix = rows.iter().map(|row| cand.iter().map(|&c| row[c]).collect()).collect();
        if rank(&sub) == cand.len() {
            chosen = cand;
            if chosen.len() == rows.len() {
                return Some(chosen);
            }
        }
    }
    None
}

/// A unimodular matrix whose last row is the primitive vector `w`.
pub fn complete_to_unimodular(w: &[i64]) -> Result<IntMatrix, MatrixError> {
    let n = w.len();
    if content(w) != 1 {
        return Err(MatrixError::NotPrimitive(w.to_vec()));
    }
    // Reduce the column vector w to e_1 by unimodular row operations,
    // tracking the inverse operations: w = inv · e_1.
    let mut v: Vec<i128> = w.iter().map(|&x| x as i128).collect();
    let mut inv: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
        if nz.len() == 1 {
            let p = nz[0];
            if p != 0 {
                v.swap(0, p);
                for row in inv.iter_mut() {
                    row.swap(0, p);
                }
            }
            if v[0] < 0 {
                v[0] = -v[0];
                for row in inv.iter_mut() {
                    row[0] = -row[0];
                }
            }
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| v[i].abs()).expect("nonzero entry");
        for &i in &nz {
            if i != p {
                let q = v[i].div_euclid(v[p]);
                // row_i -= q row_p ; inverse: col_p += q col_i
                v[i] -= q * v[p];
                for row in inv.iter_mut() {
                    row[p] += q * row[i];
                }
            }
        }
    }
    // inv has first column w; its transpose has first row w.
    let t: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| i64::try_from(inv[j][i]).expect("entry fits")).collect())
        .collect();
    let mut out: IntMatrix = t[1..].to_vec();
    out.push(t[0].clone());
    debug_assert_eq!(det(&out).abs(), 1);
    Ok(out)
}

/// An invertible integer matrix with determinant ±1, acting on exponent
/// column vectors by `e ↦ M·e`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IntMatrix", into = "IntMatrix")]
pub struct UnimodularMap {
    matrix: IntMatrix,
}

impl UnimodularMap {
    pub fn new(matrix: IntMatrix) -> Result<Self, MatrixError> {
        let rows = matrix.len();
        if let Some(bad) = matrix.iter().find(|r| r.len() != rows) {
            return Err(MatrixError::NotSquare { rows, cols: bad.len() });
        }
        let d = det(&matrix);
        if d.abs() != 1 {
            return Err(MatrixError::NotUnimodular { det: d });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: identity(n) }
    }

    /// The unimodular map flipping the sign of one coordinate.
    pub fn negate_axis(n: usize, axis: usize) -> Self {
        let mut m = identity(n);
        m[axis][axis] = -1;
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, v)
    }

    pub fn inverse(&self) -> Self {
        let m = inverse_integer(&self.matrix).expect("unimodular matrices have integer inverses");
        Self { matrix: m }
    }

    /// Inverse transpose: the induced action on the dual lattice, so that
    /// `⟨M⁻ᵀw, M v⟩ = ⟨w, v⟩`.
    pub fn dual(&self) -> Self {
        Self { matrix: transpose(&self.inverse().matrix) }
    }

    pub fn compose(&self, inner: &Self) -> Self {
        Self { matrix: mat_mul(&self.matrix, &inner.matrix) }
    }

    pub fn determinant(&self) -> i64 {
        det(&self.matrix)
    }
}

impl TryFrom<IntMatrix> for UnimodularMap {
    type Error = MatrixError;
    fn try_from(m: IntMatrix) -> Result<Self, Self::Error> {
        Self::new(m)
    }
}

impl From<UnimodularMap> for IntMatrix {
    fn from(m: UnimodularMap) -> Self {
        m.matrix
    }
}

impl fmt::Debug for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnimodularMap{:?}", self.matrix)
    }
}
