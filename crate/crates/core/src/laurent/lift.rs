use serde::Serialize;

use super::{Exponent, LaurentError, LaurentPoly};
use crate::intmat::{det, hermite_rows, solve_in_basis, vec_mat, IntMatrix};
use crate::scalar::Coeff;

/// A potential rewritten in a basis of the lattice spanned by its shifted support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "C: Coeff")]
pub struct LiftResult<C: Coeff> {
    /// The polynomial in the new variables `y`.
    pub lifted: LaurentPoly<C>,
    /// Sublattice basis rows, in the original exponent coordinates.
    pub basis: IntMatrix,
    /// Index of the sublattice, `|det basis|`.
    pub index: u64,
    /// The base monomial `v` that was divided out.
    pub base: Exponent,
}

impl<C: Coeff> LiftResult<C> {
    /// `x^v · p_*(lifted)`, which equals the input potential.
    pub fn pushforward(&self) -> LaurentPoly<C> {
        let n = self.basis.len();
        self.lifted
            .map_exponents(n, |c| vec_mat(c, &self.basis))
            .shift(&self.base)
    }

    /// The same lift expressed in another basis of the same sublattice.
    pub fn rebase(&self, basis: IntMatrix) -> Result<Self, LaurentError> {
        let same = det(&basis).unsigned_abs() == self.index
            && basis.iter().all(|row| solve_in_basis(&self.basis, row).is_some());
        if !same {
            return Err(LaurentError::DegenerateLattice { rank: basis.len(), basis });
        }
        let n = basis.len();
        let mut terms = Vec::with_capacity(self.lifted.len());
        for (c, k) in self.lifted.terms() {
            let e = vec_mat(c, &self.basis);
            let c2 = solve_in_basis(&basis, &e).expect("same lattice");
            terms.push((c2, k.clone()));
        }
        Ok(Self { lifted: LaurentPoly::from_terms(n, terms)?, basis, index: self.index, base: self.base.clone() })
    }
}

/// Divide `W` by the monomial `x^v` and rewrite the result in a Hermite basis
/// of the lattice generated by its exponents.
pub fn augmentation_lift<C: Coeff>(w: &LaurentPoly<C>, v: &[i64]) -> Result<LiftResult<C>, LaurentError> {
    if w.coeff(v).is_none() {
        return Err(LaurentError::NotAnExponent(v.to_vec()));
    }
    let n = w.rank();
    let neg: Vec<i64> = v.iter().map(|x| -x).collect();
    let f = w.shift(&neg);
    let exps = f.support();
    let basis = hermite_rows(&exps);
    if basis.len() < n {
        return Err(LaurentError::DegenerateLattice { rank: basis.len(), basis });
    }
    let mut terms = Vec::with_capacity(exps.len());
    for (e, c) in f.terms() {
        let coords = solve_in_basis(&basis, e).expect("exponent lies in its own lattice");
        terms.push((coords, c.clone()));
    }
    let out = LiftResult {
        lifted: LaurentPoly::from_terms(n, terms)?,
        index: det(&basis).unsigned_abs(),
        basis,
        base: v.to_vec(),
    };
    debug_assert!(out.pushforward() == *w);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Poly;

    fn clifford(n: usize) -> Poly {
        let mut s: Vec<String> = crate::laurent::default_names(n);
        let prod = s.join("*");
        s.push(format!("1/({prod})"));
        Poly::parse_in(n, &s.join("+")).unwrap()
    }

    #[test]
    fn clifford_lifts() {
        for n in 2..=4 {
            let w = clifford(n);
            let r = augmentation_lift(&w, &vec![-1; n]).unwrap();
            assert_eq!(r.index, n as u64 + 1);
            assert_eq!(r.pushforward(), w);
            // The basis rows (1,…,1) + e_k turn the lift into 1 + Σ y_k.
            let basis: IntMatrix = (0..n).map(|k| (0..n).map(|j| 1 + i64::from(j == k)).collect()).collect();
            let rebased = r.rebase(basis).unwrap();
            let mut target = Poly::one(n);
            for k in 0..n {
                target = target.add(&Poly::var(n, k)).unwrap();
            }
            assert_eq!(rebased.lifted, target);
        }
    }

    #[test]
    fn lift_errors() {
        let w = clifford(2);
        assert!(matches!(augmentation_lift(&w, &[1, 1]), Err(LaurentError::NotAnExponent(_))));
        let flat = Poly::parse_in(2, "1 + x + x^2").unwrap();
        assert!(matches!(augmentation_lift(&flat, &[0, 0]), Err(LaurentError::DegenerateLattice { rank: 1, .. })));
    }
}
