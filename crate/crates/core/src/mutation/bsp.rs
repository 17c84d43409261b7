use num_integer::Integer;
use num_traits::One;

use super::{mutate_polytope, MutationError, MutationOutcome};
use crate::intmat::{complete_to_unimodular, UnimodularMap};
use crate::laurent::{LaurentError, Poly};
use crate::lattice::{LatticePolytope, WidthVector};
use crate::scalar::{dot_i64, Rational};

/// The substitution `z ↦ z·W_Λ` on variable `axis`, checked against the
/// combinatorial mutation of the Newton polytope along the dual vector of
/// that axis with factor `newt(W_Λ)`.
pub fn bsp_transform(w: &Poly, axis: usize, w_lambda: &Poly) -> Result<(Poly, MutationOutcome), MutationError> {
    let n = w.rank();
    if axis >= n {
        return Err(LaurentError::AxisOutOfRange { axis, rank: n }.into());
    }
    let result = w.substitute_axis(axis, w_lambda)?;
    let factor = w_lambda.embed_at_axis(axis).newton()?;
    let mut outcome = mutate_polytope(&w.newton()?, &WidthVector::axis(n, axis), &factor)?;
    let algebraic = result.newton()?;
    if algebraic != outcome.polytope {
        return Err(MutationError::ConsistencyViolation {
            algebraic: format!("{algebraic:?}"),
            combinatorial: format!("{:?}", outcome.polytope),
        });
    }
    outcome.algebraic = Some(result.clone());
    Ok((result, outcome))
}

/// Mutation of `W` along an arbitrary primitive width vector. The factor
/// polynomial must be supported in `w^⊥`. The change of basis has `w` as
/// its last row, so the mutation becomes [`bsp_transform`] on the last axis.
pub fn laurent_mutation(w: &Poly, width: &WidthVector, factor: &Poly) -> Result<(Poly, MutationOutcome), MutationError> {
    let n = w.rank();
    if width.rank() != n || factor.rank() != n {
        return Err(LaurentError::RankMismatch { expected: n, found: factor.rank() }.into());
    }
    if factor.terms().any(|(e, _)| dot_i64(width.as_slice(), e) != 0) {
        return Err(MutationError::FactorNotOrthogonal);
    }
    let u = UnimodularMap::new(complete_to_unimodular(width.as_slice()).map_err(LaurentError::from)?)
        .map_err(LaurentError::from)?;
    let w_u = w.apply_unimodular(&u)?;
    let f_u = factor.apply_unimodular(&u)?;
    let g = f_u.map_exponents(n - 1, |e| e[..n - 1].to_vec());
    let (r, outcome) = bsp_transform(&w_u, n - 1, &g)?;
    let back = u.inverse();
    let result = r.apply_unimodular(&back)?;
    let polytope = outcome.polytope.map_unimodular(&back)?;
    let spec = super::MutationSpec {
        w: width.clone(),
        factor: super::normalize_factor(&factor.newton()?, width)?,
        witnesses: outcome
            .spec
            .witnesses
            .into_iter()
            .map(|(h, g)| {
                let g = match g {
                    super::Witness::Polytope(p) => super::Witness::Polytope(p.map_unimodular(&back).expect("rank")),
                    e => e,
                };
                (h, g)
            })
            .collect(),
    };
    Ok((result.clone(), MutationOutcome { polytope, spec, algebraic: Some(result) }))
}

/// `(1 + x^u)^g` for a lattice segment `conv{0, g·u}` with `u` primitive.
/// A point factor gives the constant 1.
pub fn segment_factor(f: &LatticePolytope) -> Result<Poly, MutationError> {
    let n = f.rank();
    match f.vertices() {
        [_] => Ok(Poly::one(n)),
        [a, b] => {
            let d: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
            let g = d.iter().fold(0i64, |acc, x| acc.gcd(x));
            let u: Vec<i64> = d.iter().map(|x| x / g).collect();
            let base = Poly::one(n).add(&Poly::monomial(u, Rational::one()))?;
            let k = u32::try_from(g).map_err(|_| MutationError::NoFactorPolynomial)?;
            Ok(base.pow(k).shift(a))
        }
        _ => Err(MutationError::NoFactorPolynomial),
    }
}
