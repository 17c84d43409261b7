//! Laurent polynomials with exact coefficients over `Z^n` exponent lattices.

mod lift;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::intmat::{MatrixError, UnimodularMap};
use crate::lattice::{LatticeError, LatticePolytope, Polytope};
use crate::scalar::{Coeff, Rational};

pub use lift::{augmentation_lift, LiftResult};
pub use parse::ParseError;

pub type Exponent = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("axis {axis} out of range for rank {rank}")]
    AxisOutOfRange { axis: usize, rank: usize },
    #[error("no exact Laurent quotient exists")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not Laurent at height {height}: W_Λ^{power} does not divide C_{height} = {coefficient}")]
    NotLaurent { height: i64, power: u32, coefficient: String },
    #[error("{0:?} is not an exponent of the polynomial")]
    NotAnExponent(Exponent),
    #[error("exponents span a sublattice of rank {rank} only (basis {basis:?})")]
    DegenerateLattice { rank: usize, basis: Vec<Vec<i64>> },
    #[error("the zero polynomial has no Newton polytope")]
    EmptyPolynomial,
    #[error("negative power of a non-monomial")]
    NegativePower,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A finitely supported map from exponent vectors to nonzero coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration and serialization follow the
/// lexicographic order of exponents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    rank: usize,
    terms: BTreeMap<Exponent, C>,
}

pub type Poly = LaurentPoly<Rational>;

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: C) -> Self {
        Self::monomial(vec![0; rank], c)
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, C::one())
    }

    pub fn monomial(e: Exponent, c: C) -> Self {
        let mut p = Self::zero(e.len());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The coordinate variable `x_i`.
    pub fn var(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    /// Sum of the given terms; repeated exponents are added together.
    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            if e.len() != rank {
                return Err(LaurentError::RankMismatch { expected: rank, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: C) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    fn check_rank(&self, other: &Self) -> Result<(), LaurentError> {
        if self.rank != other.rank {
            return Err(LaurentError::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        Self { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    /// Multiply by the monomial `x^v`.
    pub fn shift(&self, v: &[i64]) -> Self {
        Self {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(v).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.rank);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base).expect("same rank");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same rank");
            }
        }
        out
    }

    /// Integer power; negative powers exist only for monomials.
    pub fn powi(&self, k: i64) -> Result<Self, LaurentError> {
        if k >= 0 {
            return Ok(self.pow(u32::try_from(k).map_err(|_| LaurentError::NegativePower)?));
        }
        let (e, c) = self.terms.iter().next().filter(|_| self.is_monomial()).ok_or(LaurentError::NegativePower)?;
        let inv = C::one() / c.clone();
        if inv.clone() * c.clone() != C::one() {
            return Err(LaurentError::NegativePower);
        }
        let m = Self::monomial(e.iter().map(|x| -x).collect(), inv);
        Ok(m.pow(u32::try_from(-k).map_err(|_| LaurentError::NegativePower)?))
    }

    fn leading(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next_back()
    }

    fn bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.rank];
        let mut hi = vec![i64::MIN; self.rank];
        for e in self.terms.keys() {
            for j in 0..self.rank {
                lo[j] = lo[j].min(e[j]);
                hi[j] = hi[j].max(e[j]);
            }
        }
        (lo, hi)
    }

    /// The unique `q` with `q·g = self`, if it exists in the Laurent ring.
    ///
    /// Long division in the lexicographic term order. Every exponent of a
    /// true quotient lies in the box cut out by the coordinate ranges of the
    /// dividend and divisor, which bounds the loop.
    pub fn divide_exact(&self, g: &Self) -> Result<Self, LaurentError> {
        self.check_rank(g)?;
        let (ge, gc) = match g.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(LaurentError::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Self::zero(self.rank));
        }
        let (flo, fhi) = self.bounds();
        let (glo, ghi) = g.bounds();
        let mut r = self.clone();
        let mut q = Self::zero(self.rank);
        while let Some((re, rc)) = r.leading() {
            let e: Exponent = re.iter().zip(&ge).map(|(a, b)| a - b).collect();
            let inside = (0..self.rank).all(|j| flo[j] <= e[j] + glo[j] && e[j] + ghi[j] <= fhi[j]);
            if !inside {
                return Err(LaurentError::NotDivisible);
            }
            let c = rc.clone() / gc.clone();
            if c.clone() * gc.clone() != *rc {
                return Err(LaurentError::NotDivisible);
            }
            for (b, y) in &g.terms {
                let t: Exponent = e.iter().zip(b).map(|(i, j)| i + j).collect();
                r.add_term(t, -(c.clone() * y.clone()));
            }
            q.add_term(e, c);
        }
        Ok(q)
    }

    /// Replace each exponent `e` by `M·e`.
    pub fn apply_unimodular(&self, m: &UnimodularMap) -> Result<Self, LaurentError> {
        if m.dim() != self.rank {
            return Err(LaurentError::RankMismatch { expected: self.rank, found: m.dim() });
        }
        Ok(Self { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (m.apply(e), c.clone())).collect() })
    }

    /// Rewrite exponents by an arbitrary injective linear map into rank `rank`.
    pub fn map_exponents(&self, rank: usize, f: impl Fn(&[i64]) -> Exponent) -> Self {
        let mut out = Self::zero(rank);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    fn check_axis(&self, axis: usize) -> Result<(), LaurentError> {
        if axis >= self.rank {
            return Err(LaurentError::AxisOutOfRange { axis, rank: self.rank });
        }
        Ok(())
    }

    /// Decompose `f = Σ_h z^h C_h` along variable `axis`.
    pub fn split_by_axis(&self, axis: usize) -> Result<BTreeMap<i64, Self>, LaurentError> {
        self.check_axis(axis)?;
        let mut parts: BTreeMap<i64, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let h = rest.remove(axis);
            parts.entry(h).or_insert_with(|| Self::zero(self.rank - 1)).terms.insert(rest, c.clone());
        }
        Ok(parts)
    }

    /// Inverse of [`LaurentPoly::split_by_axis`].
    pub fn from_axis_parts(axis: usize, parts: &BTreeMap<i64, Self>) -> Result<Self, LaurentError> {
        let sub = parts.values().next().map_or(0, |p| p.rank);
        let rank = sub + 1;
        if axis >= rank {
            return Err(LaurentError::AxisOutOfRange { axis, rank });
        }
        let mut out = Self::zero(rank);
        for (&h, p) in parts {
            if p.rank != sub {
                return Err(LaurentError::RankMismatch { expected: sub, found: p.rank });
            }
            for (e, c) in &p.terms {
                let mut full = e.clone();
                full.insert(axis, h);
                out.add_term(full, c.clone());
            }
        }
        Ok(out)
    }

    /// Embed a polynomial in the non-axis variables back into rank `n`,
    /// with exponent 0 on `axis`.
    pub fn embed_at_axis(&self, axis: usize) -> Self {
        self.map_exponents(self.rank + 1, |e| {
            let mut full = e.to_vec();
            full.insert(axis, 0);
            full
        })
    }

    /// `Σ_h z^h g^h C_h`, where negative powers of `g` must divide `C_h`.
    pub fn substitute_axis(&self, axis: usize, g: &Self) -> Result<Self, LaurentError> {
        self.check_axis(axis)?;
        if g.rank + 1 != self.rank {
            return Err(LaurentError::RankMismatch { expected: self.rank - 1, found: g.rank });
        }
        if g.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        let parts = self.split_by_axis(axis)?;
        let mut out = BTreeMap::new();
        for (&h, ch) in &parts {
            let power = u32::try_from(h.unsigned_abs()).map_err(|_| LaurentError::NegativePower)?;
            let gp = g.pow(power);
            let new = if h >= 0 {
                ch.mul(&gp)?
            } else {
                ch.divide_exact(&gp).map_err(|e| match e {
                    LaurentError::NotDivisible => LaurentError::NotLaurent { height: h, power, coefficient: ch.to_string() },
                    other => other,
                })?
            };
            out.insert(h, new);
        }
        Self::from_axis_parts(axis, &out)
    }

    /// Newton polytope: the convex hull of the support.
    pub fn newton(&self) -> Result<LatticePolytope, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::EmptyPolynomial);
        }
        Ok(Polytope::hull(self.rank, &self.support())?)
    }

    /// Display using the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Pretty { p: self, names }
    }
}

/// Default variable names: `x, y, z` up to rank three, `x1, …, xn` beyond.
pub fn default_names(rank: usize) -> Vec<String> {
    if rank <= 3 {
        ["x", "y", "z"][..rank].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=rank).map(|i| format!("x{i}")).collect()
    }
}

struct Pretty<'a, C> {
    p: &'a LaurentPoly<C>,
    names: &'a [String],
}

impl<C: Coeff> fmt::Display for Pretty<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.p.terms.iter().enumerate() {
            let mut cs = c.to_string();
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .zip(self.names)
                .filter(|(&x, _)| x != 0)
                .map(|(&x, n)| if x == 1 { n.clone() } else { format!("{n}^{x}") })
                .collect();
            let unit = cs == "1";
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if unit {
                write!(f, "{}", mono.join("*"))?;
            } else if cs.contains('/') {
                write!(f, "({cs})*{}", mono.join("*"))?;
            } else {
                write!(f, "{cs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.rank);
        fmt::Display::fmt(&Pretty { p: self, names: &names }, f)
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({self})", self.rank)
    }
}

impl Poly {
    /// Parse an expression in the default variable names of `rank`.
    pub fn parse_in(rank: usize, expr: &str) -> Result<Self, LaurentError> {
        parse::parse(rank, &default_names(rank), expr)
    }

    pub fn parse_with(names: &[String], expr: &str) -> Result<Self, LaurentError> {
        parse::parse(names.len(), names, expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p(rank: usize, s: &str) -> Poly {
        Poly::parse_in(rank, s).unwrap()
    }

    #[test]
    fn sums() {
        assert!(p(1, "x").add(&p(1, "-x")).unwrap().is_zero());
        assert_eq!(p(2, "x+y").add(&p(2, "1/(x*y)")).unwrap(), p(2, "x + y + x^-1*y^-1"));
        assert_eq!(p(1, "1+x").add(&p(1, "1+x")).unwrap(), p(1, "2+2*x"));
        assert!(matches!(p(1, "x").add(&p(2, "x")), Err(LaurentError::RankMismatch { .. })));
    }

    #[test]
    fn products() {
        assert_eq!(p(1, "1+x").mul(&p(1, "1+x")).unwrap(), p(1, "1+2*x+x^2"));
        let f = p(2, "y+(1+x)^2");
        assert_eq!(f.mul(&Poly::one(2)).unwrap(), f);
        let n = f.pow(3).newton().unwrap();
        assert_eq!(n, Polytope::from_points(&[vec![0, 3], vec![0, 0], vec![6, 0]]).unwrap());
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(1, "1+2*x+x^2").divide_exact(&p(1, "1+x")).unwrap(), p(1, "1+x"));
        let f = p(2, "y+(1+x)^2");
        assert_eq!(f.divide_exact(&f).unwrap(), Poly::one(2));
        assert_eq!(p(1, "x").divide_exact(&p(1, "1+x")), Err(LaurentError::NotDivisible));
        assert_eq!(p(2, "x^-3*y + x^2").divide_exact(&p(2, "x^-1")).unwrap(), p(2, "x^-2*y + x^3"));
    }

    #[test]
    fn unimodular_action() {
        let f = p(2, "x+y+1/(x*y)");
        assert_eq!(f.apply_unimodular(&UnimodularMap::identity(2)).unwrap(), f);
        let m = UnimodularMap::new(vec![vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(f.apply_unimodular(&m).unwrap(), p(2, "x*y + y + x^-1*y^-2"));
    }

    #[test]
    fn axis_split() {
        let w = p(3, "(y+(1+x)^2)/z + z^3/(x*y^2)");
        let parts = w.split_by_axis(2).unwrap();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![-1, 3]);
        assert_eq!(parts[&-1], p(2, "y+(1+x)^2"));
        assert_eq!(parts[&3], p(2, "1/(x*y^2)"));
        assert_eq!(Poly::from_axis_parts(2, &parts).unwrap(), w);
        let c = p(3, "x+y+z+1/(x*y*z)").split_by_axis(2).unwrap();
        assert_eq!(c[&1], Poly::one(2));
        assert_eq!(c[&0], p(2, "x+y"));
        assert_eq!(c[&-1], p(2, "1/(x*y)"));
        let flat = p(2, "1+x");
        assert_eq!(flat.split_by_axis(1).unwrap().keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn substitution() {
        let f = p(2, "x*y + (1+x)/y");
        let r = f.substitute_axis(1, &p(1, "1+x")).unwrap();
        assert_eq!(r, p(2, "x*(1+x)*y + 1/y"));
        assert_eq!(f.substitute_axis(1, &Poly::one(1)).unwrap(), f);
        let w = p(3, "(y+(1+x)^2)/z + z^3/(x*y^2)");
        let r = w.substitute_axis(2, &p(2, "y+(1+x)^2")).unwrap();
        assert_eq!(r, p(3, "1/z + z^3*(y+(1+x)^2)^3/(x*y^2)"));
        let bad = p(2, "y + x/y").substitute_axis(1, &p(1, "1+x"));
        assert!(matches!(bad, Err(LaurentError::NotLaurent { height: -1, power: 1, .. })));
    }

    #[test]
    fn newton_polytopes() {
        assert_eq!(
            p(2, "x+y+1/(x*y)").newton().unwrap().vertices(),
            &[vec![-1, -1], vec![0, 1], vec![1, 0]]
        );
        assert_eq!(p(2, "3*x^2*y^-5").newton().unwrap().vertices(), &[vec![2, -5]]);
        let t = p(2, "y + (1+x)^2/(x*y^2)").newton().unwrap();
        assert_eq!(t.vertices(), &[vec![-1, -2], vec![0, 1], vec![1, -2]]);
        assert_eq!(Poly::zero(2).newton(), Err(LaurentError::EmptyPolynomial));
    }

    #[test]
    fn display_is_lexicographic() {
        let f = Poly::from_terms(2, [(vec![0, 1], int(1)), (vec![-1, -1], int(-2)), (vec![1, 0], crate::scalar::rational(1, 2))]).unwrap();
        assert_eq!(f.to_string(), "-2*x^-1*y^-1 + y + (1/2)*x");
        assert_eq!(Poly::parse_in(2, &f.to_string()).unwrap(), f);
    }
}
