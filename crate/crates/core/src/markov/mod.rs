//! Markov triples, the Vianna potentials attached to them, their lifts to
//! higher dimension and the exotic tori obtained from the lifts by a
//! wall-crossing substitution.

mod pipeline;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentError, Poly};
use crate::lattice::{find_affine_maps, AffineMap, LatticeError, LatticePolytope};
use crate::mutation::MutationError;
use crate::scalar::Rational;

pub use pipeline::{
    lifted_width, matches_triangle, ExoticNode, LiftNode, Pipeline, PipelineConfig, Provenance, TrackSource,
};
pub use report::{FamilyReport, ReportRow, Variant, REPORT_CSV_HEADER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error("({0}, {1}, {2}) does not solve a^2 + b^2 + c^2 = 3abc")]
    NotMarkov(u64, u64, u64),
    #[error("cannot parse a Markov triple from {0:?}")]
    Parse(String),
    #[error("no mutation within the search bounds takes the polytope of {from} to one of {to} in dimension {n}")]
    PipelineSearchFailed { from: MarkovTriple, to: MarkovTriple, n: usize },
    #[error("no validated potential for {triple} in dimension {n}: {reason}")]
    PotentialUnavailable { triple: MarkovTriple, n: usize, reason: String },
    #[error("dimension {n} is too small (need at least {min})")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("{triple} lies at depth {depth}, beyond the configured limit {max}")]
    DepthExceeded { triple: MarkovTriple, depth: usize, max: usize },
    #[error("exotic lift of {triple} in dimension {n}: {what}")]
    Postcondition { triple: MarkovTriple, n: usize, what: String },
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A sorted positive solution of `a² + b² + c² = 3abc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u64; 3]", into = "[u64; 3]")]
pub struct MarkovTriple {
    a: u64,
    b: u64,
    c: u64,
}

fn satisfies_markov(a: u64, b: u64, c: u64) -> bool {
    let (a, b, c) = (a as u128, b as u128, c as u128);
    let lhs = a.checked_mul(a).zip(b.checked_mul(b)).zip(c.checked_mul(c)).and_then(|((x, y), z)| x.checked_add(y)?.checked_add(z));
    let rhs = a.checked_mul(b).and_then(|x| x.checked_mul(c)).and_then(|x| x.checked_mul(3));
    matches!((lhs, rhs), (Some(l), Some(r)) if l == r)
}

impl MarkovTriple {
    pub const ROOT: MarkovTriple = MarkovTriple { a: 1, b: 1, c: 1 };

    /// Sorts the entries and checks the Markov equation.
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self, MarkovError> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == 0 || !satisfies_markov(v[0], v[1], v[2]) {
            return Err(MarkovError::NotMarkov(a, b, c));
        }
        Ok(Self { a: v[0], b: v[1], c: v[2] })
    }

    pub fn entries(&self) -> [u64; 3] {
        [self.a, self.b, self.c]
    }

    /// Vieta steps on each entry, `x ↦ 3·(product of the others) − x`.
    /// Steps whose result overflows `u64` are omitted.
    pub fn neighbours(&self) -> Vec<MarkovTriple> {
        let e = self.entries();
        let mut out = BTreeSet::new();
        for i in 0..3 {
            let (p, q) = (e[(i + 1) % 3] as u128, e[(i + 2) % 3] as u128);
            let Some(x) = p.checked_mul(q).and_then(|m| m.checked_mul(3)).and_then(|m| m.checked_sub(e[i] as u128)) else {
                continue;
            };
            let Ok(x) = u64::try_from(x) else { continue };
            let mut v = e;
            v[i] = x;
            if let Ok(t) = MarkovTriple::new(v[0], v[1], v[2]) {
                if t != *self {
                    out.insert(t);
                }
            }
        }
        out.into_iter().collect()
    }

    /// The neighbour closer to the root; `None` for `(1,1,1)`.
    pub fn parent(&self) -> Option<MarkovTriple> {
        if *self == Self::ROOT {
            return None;
        }
        let c = 3 * self.a as u128 * self.b as u128 - self.c as u128;
        Some(MarkovTriple::new(self.a, self.b, c as u64).expect("Vieta step preserves the equation"))
    }

    /// Number of Vieta steps from the root.
    pub fn depth(&self) -> usize {
        self.path_from_root().len() - 1
    }

    pub fn path_from_root(&self) -> Vec<MarkovTriple> {
        let mut path = vec![*self];
        let mut t = *self;
        while let Some(p) = t.parent() {
            path.push(p);
            t = p;
        }
        path.reverse();
        path
    }
}

impl TryFrom<[u64; 3]> for MarkovTriple {
    type Error = MarkovError;
    fn try_from(v: [u64; 3]) -> Result<Self, Self::Error> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<MarkovTriple> for [u64; 3] {
    fn from(t: MarkovTriple) -> Self {
        t.entries()
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl FromStr for MarkovTriple {
    type Err = MarkovError;
    /// Accepts `a,b,c` with optional spaces and parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MarkovError::Parse(s.to_string());
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<u64> = body.split(',').map(|x| x.trim().parse::<u64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        match parts[..] {
            [a, b, c] => Self::new(a, b, c),
            _ => Err(bad()),
        }
    }
}

/// The children of `t` in the Markov tree: its neighbours other than its parent.
pub fn markov_children(t: &MarkovTriple) -> Vec<MarkovTriple> {
    let parent = t.parent();
    t.neighbours().into_iter().filter(|c| Some(*c) != parent).collect()
}

/// Polytopes generated for a node, keyed by dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NodeArtifacts {
    pub triangle: Option<LatticePolytope>,
    pub lifts: BTreeMap<usize, LatticePolytope>,
    pub exotics: BTreeMap<usize, LatticePolytope>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkovNode {
    pub triple: MarkovTriple,
    pub parent: Option<MarkovTriple>,
    pub depth: usize,
    pub artifacts: NodeArtifacts,
}

/// All triples within `depth` Vieta steps of the root, level by level and
/// sorted within each level.
pub fn enumerate_tree(depth: usize) -> Vec<MarkovNode> {
    let mut out = Vec::new();
    let mut level = vec![MarkovTriple::ROOT];
    for d in 0..=depth {
        let mut next = BTreeSet::new();
        for t in &level {
            out.push(MarkovNode { triple: *t, parent: t.parent(), depth: d, artifacts: NodeArtifacts::default() });
            next.extend(markov_children(t));
        }
        level = next.into_iter().collect();
    }
    out
}

fn var_sum(n: usize, skip: usize) -> Poly {
    let mut terms = Vec::new();
    for i in skip..n {
        let mut e = vec![0; n];
        e[i] = 1;
        terms.push((e, Rational::one()));
    }
    Poly::from_terms(n, terms).expect("distinct exponents")
}

/// `x₁ + … + xₙ + 1/(x₁⋯xₙ)`.
pub fn clifford_potential(n: usize) -> Poly {
    assert!(n >= 1, "rank must be positive");
    var_sum(n, 0).add(&Poly::monomial(vec![-1; n], Rational::one())).expect("same rank")
}

/// `x₂ + … + xₙ + (1+x₁)²/(x₁x₂²x₃⋯xₙ)`.
pub fn vianna_112_potential(n: usize) -> Poly {
    assert!(n >= 2, "rank must be at least 2");
    let mut v = vec![-1; n];
    v[1] = -2;
    let one_plus = Poly::one(n).add(&Poly::var(n, 0)).expect("same rank");
    var_sum(n, 1).add(&one_plus.pow(2).shift(&v)).expect("same rank")
}

/// `(y+(1+x)²)/z + z³/(xy²)`, the `(1,1,2)` lift in three variables in a
/// basis adapted to the axis `z`.
pub fn judicious_112_potential() -> Poly {
    Poly::parse_in(3, "(y+(1+x)^2)/z + z^3/(x*y^2)").expect("valid expression")
}

/// `1/z + z³(y+(1+x)²)³/(xy²)`.
pub fn exotic_112_potential() -> Poly {
    Poly::parse_in(3, "1/z + z^3*(y+(1+x)^2)^3/(x*y^2)").expect("valid expression")
}

/// An affine unimodular map `e ↦ M·e + t` carrying the terms of `f` onto
/// those of `g` with equal coefficients.
pub fn potential_equivalence(f: &Poly, g: &Poly) -> Option<AffineMap> {
    if f.rank() != g.rank() || f.len() != g.len() {
        return None;
    }
    let (pf, pg) = (f.newton().ok()?, g.newton().ok()?);
    find_affine_maps(&pf, &pg).into_iter().find(|m| {
        f.apply_unimodular(&m.linear).map(|h| h.shift(&m.translation) == *g).unwrap_or(false)
    })
}
