//! Strategies and checks shared by the property suites and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use bspkit::intmat::identity;
use bspkit::lattice::{lattice_points, WidthVector};
use bspkit::markov::{clifford_potential, judicious_112_potential, vianna_112_potential};
use bspkit::mutation::{mutate_polytope, mutate_with_witnesses, MutationSpec, Witness};
use bspkit::{LatticePolytope, Poly, Polytope, Rational, UnimodularMap};

pub const CASES: u32 = 256;

pub fn config() -> Config {
    Config { cases: CASES, max_global_rejects: 4096, ..Config::default() }
}

fn coeff() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

pub fn poly(rank: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, rank), coeff()), 0..6).prop_map(move |terms| {
        let mut acc: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        Poly::from_terms(rank, acc.into_iter().filter(|(_, c)| !c.is_zero())).expect("valid terms")
    })
}

pub fn poly_triple() -> impl Strategy<Value = (Poly, Poly, Poly)> {
    (1usize..=3).prop_flat_map(|r| (poly(r), poly(r), poly(r)))
}

pub fn poly_pair() -> impl Strategy<Value = (Poly, Poly)> {
    (1usize..=3).prop_flat_map(|r| (poly(r), poly(r)))
}

pub fn nonzero_poly() -> impl Strategy<Value = Poly> {
    (1usize..=3).prop_flat_map(poly).prop_filter("nonzero", |p| !p.is_zero())
}

/// Products of elementary shears and sign changes.
pub fn unimodular(n: usize) -> impl Strategy<Value = UnimodularMap> {
    (prop::collection::vec((0..n, 0..n, -2i64..=2), 0..5), prop::collection::vec(any::<bool>(), n)).prop_map(
        move |(ops, signs)| {
            let mut m = identity(n);
            for (i, j, s) in ops {
                if i != j {
                    let row = m[j].clone();
                    for (a, b) in m[i].iter_mut().zip(row) {
                        *a += s * b;
                    }
                }
            }
            for (row, neg) in m.iter_mut().zip(signs) {
                if neg {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
            }
            UnimodularMap::new(m).expect("shears and sign changes are unimodular")
        },
    )
}

pub fn poly_with_map() -> impl Strategy<Value = (Poly, UnimodularMap, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|r| {
        (poly(r).prop_filter("nonzero", |p| !p.is_zero()), unimodular(r), prop::collection::vec(-3i64..=3, r))
    })
}

pub fn point_set() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=3).prop_flat_map(|r| (Just(r), prop::collection::vec(prop::collection::vec(-6i64..=6, r), 1..7)))
}

pub fn polytope() -> impl Strategy<Value = LatticePolytope> {
    point_set().prop_map(|(r, pts)| Polytope::hull(r, &pts).expect("nonempty"))
}

/// A polytope together with width vector and segment factor along which the
/// mutation is defined: each generating point at negative height `h`
/// carries the segment `|h|·F` with it.
#[derive(Debug, Clone)]
pub struct MutationCase {
    pub p: LatticePolytope,
    pub w: WidthVector,
    pub f: LatticePolytope,
}

pub fn mutation_case() -> impl Strategy<Value = MutationCase> {
    (2usize..=3).prop_flat_map(|r| {
        (
            prop::collection::vec(-2i64..=2, r - 1).prop_filter("nonzero", |u| u.iter().any(|x| *x != 0)),
            prop::collection::vec((prop::collection::vec(-4i64..=4, r - 1), -3i64..=3), 2..6),
            unimodular(r),
        )
            .prop_map(move |(u, gens, m)| {
                let mut dir = u.clone();
                dir.push(0);
                let mut pts = Vec::new();
                for (mut x, h) in gens {
                    x.push(h);
                    let k = (-h).max(0);
                    pts.push(x.iter().zip(&dir).map(|(a, b)| a + k * b).collect());
                    pts.push(x);
                }
                let p = Polytope::hull(r, &pts).expect("nonempty");
                let f = Polytope::hull(r, &[vec![0; r], dir]).expect("segment");
                let w = WidthVector::new(m.dual().apply(&{
                    let mut e = vec![0; r];
                    e[r - 1] = 1;
                    e
                }))
                .expect("primitive");
                MutationCase { p: p.map_unimodular(&m).unwrap(), w, f: f.map_unimodular(&m).unwrap() }
            })
    })
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

pub fn check_ring_axioms(a: &Poly, b: &Poly, c: &Poly) -> Result<(), TestCaseError> {
    let r = a.rank();
    let add = |x: &Poly, y: &Poly| x.add(y).unwrap();
    let mul = |x: &Poly, y: &Poly| x.mul(y).unwrap();
    prop_assert_eq!(add(a, b), add(b, a));
    prop_assert_eq!(add(&add(a, b), c), add(a, &add(b, c)));
    prop_assert_eq!(mul(a, b), mul(b, a));
    prop_assert_eq!(mul(&mul(a, b), c), mul(a, &mul(b, c)));
    prop_assert_eq!(mul(a, &add(b, c)), add(&mul(a, b), &mul(a, c)));
    prop_assert_eq!(add(a, &Poly::zero(r)), a.clone());
    prop_assert_eq!(mul(a, &Poly::one(r)), a.clone());
    prop_assert!(a.sub(a).unwrap().is_zero());
    prop_assert_eq!(add(a, &a.neg()), Poly::zero(r));
    Ok(())
}

pub fn check_division_round_trip(a: &Poly, b: &Poly) -> Result<(), TestCaseError> {
    if b.is_zero() {
        prop_assert!(a.divide_exact(b).is_err());
        return Ok(());
    }
    let ab = a.mul(b).unwrap();
    prop_assert_eq!(ab.divide_exact(b).unwrap(), a.clone());
    if let Ok(q) = a.divide_exact(b) {
        prop_assert_eq!(q.mul(b).unwrap(), a.clone());
    }
    Ok(())
}

pub fn check_newton_equivariance(f: &Poly, m: &UnimodularMap, t: &[i64]) -> Result<(), TestCaseError> {
    let n = f.newton().unwrap();
    let g = f.apply_unimodular(m).unwrap().shift(t);
    prop_assert_eq!(g.newton().unwrap(), n.map_unimodular(m).unwrap().translate(t));
    Ok(())
}

pub fn check_hull_idempotent(rank: usize, pts: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let p = Polytope::hull(rank, pts).unwrap();
    let again = Polytope::hull(rank, p.vertices()).unwrap();
    prop_assert_eq!(again.vertices(), p.vertices());
    for x in pts {
        prop_assert!(p.contains(x), "input point {:?} outside its hull", x);
    }
    Ok(())
}

/// Exact barycentric solve: is `x` a convex combination of `t`?
fn in_simplex(t: &[&Vec<i64>], x: &[i64]) -> Option<bool> {
    let rows = x.len() + 1;
    let cols = t.len();
    let q = |v: i64| Rational::from_integer(v.into());
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> =
                t.iter().map(|p| if i < x.len() { q(p[i]) } else { Rational::one() }).collect();
            row.push(if i < x.len() { q(x[i]) } else { Rational::one() });
            row
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows).find(|&k| !a[k][c].is_zero()) else { return None };
        a.swap(r, k);
        let lead = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v /= lead.clone();
        }
        for k in 0..rows {
            if k != r && !a[k][c].is_zero() {
                let m = a[k][c].clone();
                for j in 0..=cols {
                    let d = m.clone() * a[r][j].clone();
                    a[k][j] -= d;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if (r..rows).any(|k| !a[k][cols].is_zero()) {
        return Some(false);
    }
    Some((0..cols).all(|i| !a[i][cols].is_negative()))
}

/// Carathéodory: `x ∈ conv(S)` iff `x` lies in a simplex spanned by at most
/// `rank + 1` affinely independent points of `S`.
fn brute_contains(pts: &[Vec<i64>], x: &[i64]) -> bool {
    let n = x.len();
    let mut uniq = pts.to_vec();
    uniq.sort();
    uniq.dedup();
    for k in 1..=(n + 1).min(uniq.len()) {
        for sub in uniq.iter().combinations(k) {
            if in_simplex(&sub, x) == Some(true) {
                return true;
            }
        }
    }
    false
}

pub fn check_containment(rank: usize, pts: &[Vec<i64>], probes: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let p = Polytope::hull(rank, pts).unwrap();
    for x in probes.iter().chain(pts.iter()) {
        prop_assert_eq!(p.contains(x), brute_contains(pts, x), "disagreement at {:?}", x);
    }
    let lp = lattice_points(&p).unwrap();
    for x in &lp {
        prop_assert!(brute_contains(pts, x), "lattice point {:?} outside", x);
    }
    let lo: Vec<i64> = (0..rank).map(|i| pts.iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..rank).map(|i| pts.iter().map(|v| v[i]).max().unwrap()).collect();
    let mut count = 0;
    let mut cur = lo.clone();
    loop {
        if p.contains(&cur) {
            count += 1;
        }
        let mut i = 0;
        while i < rank && cur[i] == hi[i] {
            cur[i] = lo[i];
            i += 1;
        }
        if i == rank {
            break;
        }
        cur[i] += 1;
    }
    prop_assert_eq!(count, lp.len());
    Ok(())
}

pub fn containment_case() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    (1usize..=3).prop_flat_map(|r| {
        (
            Just(r),
            prop::collection::vec(prop::collection::vec(-6i64..=6, r), 1..7),
            prop::collection::vec(prop::collection::vec(-6i64..=6, r), 24),
        )
    })
}

pub fn check_mutation_round_trip(c: &MutationCase) -> Result<(), TestCaseError> {
    let q = match mutate_polytope(&c.p, &c.w, &c.f) {
        Ok(o) => o.polytope,
        Err(bspkit::MutationError::NonIntegralResult(_)) => return Err(TestCaseError::reject("rational vertex")),
        Err(e) => return Err(fail(format!("constructed mutation failed: {e}"))),
    };
    let back = mutate_polytope(&q, &c.w.negated(), &c.f).map_err(|e| fail(format!("inverse failed: {e}")))?;
    prop_assert_eq!(back.polytope, c.p.clone());
    Ok(())
}

/// Corpus polytopes with a width vector and factor admitting a mutation.
pub fn witness_corpus() -> Vec<(LatticePolytope, WidthVector, LatticePolytope)> {
    let lp = |v: &[&[i64]]| Polytope::from_points(&v.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap();
    let newton = |p: Poly| p.newton().unwrap();
    vec![
        (lp(&[&[1, 1], &[0, -1], &[1, -1]]), WidthVector::new(vec![0, 1]).unwrap(), lp(&[&[0, 0], &[1, 0]])),
        (newton(vianna_112_potential(2)), WidthVector::new(vec![0, 1]).unwrap(), lp(&[&[0, 0], &[1, 0]])),
        (
            newton(judicious_112_potential()),
            WidthVector::axis(3, 2),
            lp(&[&[0, 0, 0], &[0, 1, 0], &[2, 0, 0]]),
        ),
        (
            newton(clifford_potential(3)),
            WidthVector::new(vec![-1, -1, -1]).unwrap(),
            lp(&[&[0, 0, 0], &[1, 0, -1], &[0, 1, -1]]),
        ),
        (
            newton(Poly::parse_in(3, "(1+x+y)/z + z^3/(x*y)").unwrap()),
            WidthVector::axis(3, 2),
            lp(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]),
        ),
        (newton(clifford_potential(2)), WidthVector::new(vec![-1, -1]).unwrap(), lp(&[&[0, 0], &[1, -1]])),
    ]
}

/// Replace each maximal witness by the hull of a random subset of its
/// lattice points that still covers the vertices at that height.
pub fn check_witness_independence(case: usize, picks: &[u32]) -> Result<(), TestCaseError> {
    let corpus = witness_corpus();
    let (p, w, f) = &corpus[case % corpus.len()];
    let maximal = mutate_polytope(p, w, f).map_err(|e| fail(format!("corpus mutation failed: {e}")))?;
    let mut choice = picks.iter().cycle();
    let mut witnesses = BTreeMap::new();
    for (&h, g) in &maximal.spec.witnesses {
        let Witness::Polytope(g) = g else {
            witnesses.insert(h, Witness::Empty);
            continue;
        };
        let pts = lattice_points(g).unwrap();
        let k = -h;
        let fv = maximal.spec.factor.vertices();
        let mut keep: Vec<Vec<i64>> = Vec::new();
        for v in p.vertices().iter().filter(|v| bspkit::scalar::dot_i64(w.as_slice(), v) == h) {
            let covers: Vec<&Vec<i64>> = pts
                .iter()
                .filter(|g0| fv.iter().any(|e| g0.iter().zip(e).zip(v.iter()).all(|((a, b), c)| a + k * b == *c)))
                .collect();
            let pick = *choice.next().unwrap() as usize % covers.len();
            keep.push(covers[pick].clone());
        }
        for g0 in &pts {
            if choice.next().unwrap() % 2 == 0 {
                keep.push(g0.clone());
            }
        }
        if keep.is_empty() {
            keep.push(pts[*choice.next().unwrap() as usize % pts.len()].clone());
        }
        witnesses.insert(h, Witness::Polytope(Polytope::hull(p.rank(), &keep).unwrap()));
    }
    let spec = MutationSpec { w: w.clone(), factor: maximal.spec.factor.clone(), witnesses };
    let q = mutate_with_witnesses(p, &spec).map_err(|e| fail(format!("valid witnesses rejected: {e}")))?;
    prop_assert_eq!(q, maximal.polytope);
    Ok(())
}

pub fn check_serde_poly(f: &Poly) -> Result<(), TestCaseError> {
    let s = serde_json::to_string(f).unwrap();
    let g: Poly = serde_json::from_str(&s).unwrap();
    prop_assert_eq!(&g, f);
    prop_assert_eq!(serde_json::to_string(&g).unwrap(), s);
    let names = bspkit::laurent::default_names(f.rank());
    let text = f.display_with(&names).to_string();
    prop_assert_eq!(&Poly::parse_with(&names, &text).unwrap(), f, "display {}", text);
    Ok(())
}

pub fn check_serde_polytope(p: &LatticePolytope) -> Result<(), TestCaseError> {
    let s = serde_json::to_string(p).unwrap();
    let q: LatticePolytope = serde_json::from_str(&s).unwrap();
    prop_assert_eq!(&q, p);
    let r = p.to_rational();
    let s2 = serde_json::to_string(&r).unwrap();
    let r2: bspkit::RationalPolytope = serde_json::from_str(&s2).unwrap();
    prop_assert_eq!(r2, r);
    Ok(())
}

pub fn check_serde_spec(c: &MutationCase) -> Result<(), TestCaseError> {
    let Ok(o) = mutate_polytope(&c.p, &c.w, &c.f) else { return Err(TestCaseError::reject("undefined")) };
    let s = serde_json::to_string(&o.spec).unwrap();
    let back: MutationSpec = serde_json::from_str(&s).unwrap();
    prop_assert_eq!(&back, &o.spec);
    Ok(())
}

/// Every suite, run through a fresh runner; used by the acceptance harness.
pub fn run_all() -> Vec<(&'static str, Result<(), String>)> {
    fn go<S: Strategy>(s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
        TestRunner::new(config()).run(&s, f).map_err(|e| e.to_string())
    }
    vec![
        ("laurent ring axioms", go(poly_triple(), |(a, b, c)| check_ring_axioms(&a, &b, &c))),
        ("exact division round trip", go(poly_pair(), |(a, b)| check_division_round_trip(&a, &b))),
        ("GL(n,Z) equivariance of newton", go(poly_with_map(), |(f, m, t)| check_newton_equivariance(&f, &m, &t))),
        ("hull idempotence", go(point_set(), |(r, pts)| check_hull_idempotent(r, &pts))),
        ("containment vs brute force", go(containment_case(), |(r, pts, probes)| check_containment(r, &pts, &probes))),
        ("mutation round trip with -w", go(mutation_case(), |c| check_mutation_round_trip(&c))),
        (
            "G_h witness independence",
            go((0usize..16, prop::collection::vec(any::<u32>(), 1..40)), |(i, picks)| check_witness_independence(i, &picks)),
        ),
        ("serializer round trip: polynomials", go(nonzero_poly(), |f| check_serde_poly(&f))),
        ("serializer round trip: polytopes", go(polytope(), |p| check_serde_polytope(&p))),
        ("serializer round trip: mutation specs", go(mutation_case(), |c| check_serde_spec(&c))),
    ]
}
