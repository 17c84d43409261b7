//! Combinatorial mutations of lattice polytopes and the matching change of
//! variables `z ↦ z·W_Λ` on Laurent polynomials.

mod bsp;
mod search;

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::laurent::{LaurentError, Poly};
use crate::lattice::{lattice_points, slice_at, LatticeError, LatticePolytope, Polytope, WidthVector};
use crate::scalar::{dot_i64, Rational};

pub use bsp::{bsp_transform, laurent_mutation, segment_factor};
pub use search::{search_mutations, search_mutations_with, SearchConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("mutation undefined: no witness G_h exists at height {0}")]
    MutationUndefined(i64),
    #[error("mutation produced a non-integral vertex {0:?}")]
    NonIntegralResult(Vec<String>),
    #[error("factor does not lie in a hyperplane orthogonal to the width vector")]
    FactorNotOrthogonal,
    #[error("supplied witness at height {0} violates the factor condition")]
    InvalidWitness(i64),
    #[error("Newton polytope {algebraic} of the substituted potential differs from the combinatorial mutation {combinatorial}")]
    ConsistencyViolation { algebraic: String, combinatorial: String },
    #[error("search exceeded its budget of {0} evaluations")]
    SearchBudgetExceeded(usize),
    #[error("factor polytope is not a lattice segment, so no binomial factor polynomial exists")]
    NoFactorPolynomial,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A witness `G_h`; empty witnesses are allowed at heights without vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    Empty,
    Polytope(LatticePolytope),
}

impl Witness {
    pub fn polytope(&self) -> Option<&LatticePolytope> {
        match self {
            Witness::Empty => None,
            Witness::Polytope(p) => Some(p),
        }
    }
}

/// Width vector, factor and witnesses of a mutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MutationSpec {
    pub w: WidthVector,
    /// The factor, normalized into `w^⊥`.
    pub factor: LatticePolytope,
    pub witnesses: BTreeMap<i64, Witness>,
}

/// The result of a mutation together with the data that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationOutcome {
    pub polytope: LatticePolytope,
    pub spec: MutationSpec,
    /// The Laurent polynomial whose Newton polytope was checked against
    /// `polytope`, when an algebraic mutation was run alongside.
    pub algebraic: Option<Poly>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    w: WidthVector,
    factor: LatticePolytope,
    witnesses: BTreeMap<String, Option<LatticePolytope>>,
}

impl Serialize for MutationSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpecRepr {
            w: self.w.clone(),
            factor: self.factor.clone(),
            witnesses: self.witnesses.iter().map(|(h, g)| (h.to_string(), g.polytope().cloned())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MutationSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SpecRepr::deserialize(d)?;
        let mut witnesses = BTreeMap::new();
        for (h, g) in raw.witnesses {
            let h: i64 = h.parse().map_err(|_| D::Error::custom(format!("bad height {h:?}")))?;
            witnesses.insert(h, g.map_or(Witness::Empty, Witness::Polytope));
        }
        Ok(MutationSpec { w: raw.w, factor: raw.factor, witnesses })
    }
}

/// Translate `F` into `w^⊥` by its lexicographically smallest vertex, unless
/// it already lies there.
pub fn normalize_factor(f: &LatticePolytope, w: &WidthVector) -> Result<LatticePolytope, MutationError> {
    if f.rank() != w.rank() {
        return Err(LatticeError::RankMismatch { expected: w.rank(), found: f.rank() }.into());
    }
    let hs: Vec<i64> = f.vertices().iter().map(|v| dot_i64(w.as_slice(), v)).collect();
    if hs.iter().any(|&h| h != hs[0]) {
        return Err(MutationError::FactorNotOrthogonal);
    }
    if hs[0] == 0 {
        return Ok(f.clone());
    }
    let base: Vec<i64> = f.vertices()[0].iter().map(|x| -x).collect();
    Ok(f.translate(&base))
}

fn add_scaled(a: &[i64], k: i64, b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

/// The maximal witness at height `h < 0`: the hull of all lattice points `g`
/// with `g + |h|·F ⊆ P_h`, provided it covers the vertices of `P` at height
/// `h`. `F` must already lie in `w^⊥`.
pub fn find_witness(p: &LatticePolytope, w: &WidthVector, f: &LatticePolytope, h: i64) -> Option<Witness> {
    let k = -h;
    let ph = slice_at(p, w, h).ok()?;
    let f0 = &f.vertices()[0];
    let shift: Vec<Rational> = f0.iter().map(|&x| Rational::from_integer((-k * x).into())).collect();
    let region = ph.translate(&shift);
    let pts = lattice_points(&region).ok()?;
    let cand: Vec<Vec<i64>> = pts
        .into_iter()
        .filter(|g| {
            f.vertices().iter().all(|fv| {
                let q: Vec<Rational> = add_scaled(g, k, fv).into_iter().map(|x| Rational::from_integer(x.into())).collect();
                ph.contains(&q)
            })
        })
        .collect();
    let on_level: Vec<&Vec<i64>> = p.vertices().iter().filter(|v| dot_i64(w.as_slice(), v) == h).collect();
    let covered = on_level.iter().all(|v| {
        f.vertices().iter().any(|fv| {
            let g = add_scaled(v, -k, fv);
            cand.binary_search(&g).is_ok()
        })
    });
    if !covered {
        return None;
    }
    if cand.is_empty() {
        return Some(Witness::Empty);
    }
    Some(Witness::Polytope(Polytope::hull(p.rank(), &cand).expect("nonempty")))
}

fn assemble(
    p: &LatticePolytope,
    w: &WidthVector,
    f: &LatticePolytope,
    witnesses: &BTreeMap<i64, Witness>,
) -> Result<LatticePolytope, MutationError> {
    let (lo, hi) = p.heights(w.as_slice());
    let mut pts: Vec<Vec<Rational>> = Vec::new();
    for g in witnesses.values().filter_map(Witness::polytope) {
        pts.extend(g.vertices().iter().map(|v| v.iter().map(|&x| Rational::from_integer(x.into())).collect()));
    }
    for h in lo.max(0)..=hi {
        let ph = slice_at(p, w, h)?;
        for s in ph.vertices() {
            for fv in f.vertices() {
                pts.push(s.iter().zip(fv).map(|(x, &y)| x + Rational::from_integer((h * y).into())).collect());
            }
        }
    }
    if pts.is_empty() {
        return Err(LatticeError::EmptyInput.into());
    }
    let q = Polytope::hull(p.rank(), &pts)?;
    q.to_lattice().ok_or_else(|| {
        let bad = q.vertices().iter().find(|v| v.iter().any(|x| !x.is_integer())).expect("non-integral vertex");
        MutationError::NonIntegralResult(bad.iter().map(|x| x.to_string()).collect())
    })
}

/// `mut_w(P, F)` with maximal witnesses.
pub fn mutate_polytope(p: &LatticePolytope, w: &WidthVector, f: &LatticePolytope) -> Result<MutationOutcome, MutationError> {
    if w.rank() != p.rank() {
        return Err(LatticeError::RankMismatch { expected: p.rank(), found: w.rank() }.into());
    }
    let f = normalize_factor(f, w)?;
    let (lo, hi) = p.heights(w.as_slice());
    let mut witnesses = BTreeMap::new();
    for h in lo..=hi.min(-1) {
        let g = find_witness(p, w, &f, h).ok_or(MutationError::MutationUndefined(h))?;
        witnesses.insert(h, g);
    }
    let polytope = assemble(p, w, &f, &witnesses)?;
    Ok(MutationOutcome { polytope, spec: MutationSpec { w: w.clone(), factor: f, witnesses }, algebraic: None })
}

/// `mut_w(P, F)` with caller-supplied witnesses, which are validated first.
pub fn mutate_with_witnesses(p: &LatticePolytope, spec: &MutationSpec) -> Result<LatticePolytope, MutationError> {
    let w = &spec.w;
    let f = normalize_factor(&spec.factor, w)?;
    let (lo, hi) = p.heights(w.as_slice());
    for h in lo..=hi.min(-1) {
        let k = -h;
        let ph = slice_at(p, w, h)?;
        let on_level: Vec<&Vec<i64>> = p.vertices().iter().filter(|v| dot_i64(w.as_slice(), v) == h).collect();
        match spec.witnesses.get(&h) {
            None => return Err(MutationError::MutationUndefined(h)),
            Some(Witness::Empty) => {
                if !on_level.is_empty() {
                    return Err(MutationError::InvalidWitness(h));
                }
            }
            Some(Witness::Polytope(g)) => {
                let sum = g.minkowski_sum(&f.dilate(k))?;
                let inside = sum.vertices().iter().all(|v| ph.contains(&v.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>()));
                if !inside || !on_level.iter().all(|v| sum.contains(v)) {
                    return Err(MutationError::InvalidWitness(h));
                }
            }
        }
    }
    assemble(p, w, &f, &spec.witnesses)
}
