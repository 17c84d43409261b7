//! JSON and CSV encodings of polynomials, polytopes and fingerprints.
//!
//! Polynomials: `{"rank": n, "terms": [{"c": "p/q", "e": [..]}, ..]}` with
//! terms in lexicographic exponent order. Polytopes: `{"rank": n,
//! "vertices": [[..], ..]}`; rational coordinates are strings.

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::laurent::{LaurentPoly, Poly};
use crate::lattice::{Fingerprint, LatticePolytope, Polytope, RationalPolytope};
use crate::scalar::{parse_rational, Coeff, Rational};

#[derive(Serialize)]
struct TermOut<'a> {
    c: String,
    e: &'a [i64],
}

impl<C: Coeff> Serialize for LaurentPoly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermOut<'_>> = self.terms().map(|(e, c)| TermOut { c: c.to_string(), e }).collect();
        let mut st = s.serialize_struct("LaurentPoly", 2)?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberRepr {
    Int(i64),
    Str(String),
}

impl NumberRepr {
    fn value(&self) -> Option<Rational> {
        match self {
            NumberRepr::Int(i) => Some(Rational::from_integer((*i).into())),
            NumberRepr::Str(s) => parse_rational(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermIn {
    c: NumberRepr,
    e: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyIn {
    rank: usize,
    terms: Vec<TermIn>,
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolyIn::deserialize(d)?;
        let mut seen = BTreeSet::new();
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c = t.c.value().ok_or_else(|| D::Error::custom("coefficient is not an integer or p/q rational"))?;
            if num_traits::Zero::is_zero(&c) {
                return Err(D::Error::custom(format!("zero coefficient at exponent {:?}", t.e)));
            }
            if t.e.len() != raw.rank {
                return Err(D::Error::custom(format!("exponent {:?} does not have length {}", t.e, raw.rank)));
            }
            if !seen.insert(t.e.clone()) {
                return Err(D::Error::custom(format!("duplicate exponent {:?}", t.e)));
            }
            terms.push((t.e, c));
        }
        Poly::from_terms(raw.rank, terms).map_err(D::Error::custom)
    }
}

impl Serialize for Polytope<i64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Polytope", 2)?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("vertices", &self.vertices())?;
        st.end()
    }
}

impl Serialize for Polytope<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let verts: Vec<Vec<String>> = self.vertices().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        let mut st = s.serialize_struct("Polytope", 2)?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("vertices", &verts)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeIn<T> {
    rank: usize,
    vertices: Vec<Vec<T>>,
}

/// Input vertex lists are hulled, so redundant or unsorted points are accepted
/// and canonicalized.
impl<'de> Deserialize<'de> for Polytope<i64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolytopeIn::<i64>::deserialize(d)?;
        Polytope::hull(raw.rank, &raw.vertices).map_err(D::Error::custom)
    }
}

impl<'de> Deserialize<'de> for Polytope<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolytopeIn::<NumberRepr>::deserialize(d)?;
        let mut pts = Vec::with_capacity(raw.vertices.len());
        for v in &raw.vertices {
            let p: Option<Vec<Rational>> = v.iter().map(NumberRepr::value).collect();
            pts.push(p.ok_or_else(|| D::Error::custom("coordinate is not an integer or p/q rational"))?);
        }
        Polytope::hull(raw.rank, &pts).map_err(D::Error::custom)
    }
}

pub fn poly_to_json(p: &Poly) -> String {
    serde_json::to_string(p).expect("serializable")
}

pub fn poly_from_json(s: &str) -> Result<Poly, serde_json::Error> {
    serde_json::from_str(s)
}

pub fn polytope_to_json(p: &LatticePolytope) -> String {
    serde_json::to_string(p).expect("serializable")
}

pub fn polytope_from_json(s: &str) -> Result<LatticePolytope, serde_json::Error> {
    serde_json::from_str(s)
}

pub fn rational_polytope_to_json(p: &RationalPolytope) -> String {
    serde_json::to_string(p).expect("serializable")
}

pub const FINGERPRINT_CSV_HEADER: &str = "rank,vertex_count,normalized_volume,edge_lengths,points_P,points_2P,interior_points";

pub fn fingerprint_csv_row(f: &Fingerprint) -> String {
    let lengths: Vec<String> = f.edge_lengths.iter().map(i64::to_string).collect();
    format!(
        "{},{},{},{},{},{},{}",
        f.rank,
        f.vertex_count,
        f.normalized_volume,
        lengths.join(";"),
        f.points_p,
        f.points_2p,
        f.interior_points
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fingerprint;

    #[test]
    fn polynomial_json() {
        let p = Poly::parse_in(2, "x + y/2 - 1/(x*y)").unwrap();
        let s = poly_to_json(&p);
        assert_eq!(s, r#"{"rank":2,"terms":[{"c":"-1","e":[-1,-1]},{"c":"1/2","e":[0,1]},{"c":"1","e":[1,0]}]}"#);
        assert_eq!(poly_from_json(&s).unwrap(), p);
        assert_eq!(poly_from_json(r#"{"rank":1,"terms":[{"c":3,"e":[2]}]}"#).unwrap(), Poly::parse_in(1, "3*x^2").unwrap());
    }

    #[test]
    fn polynomial_json_rejections() {
        assert!(poly_from_json(r#"{"rank":1,"terms":[{"c":"1","e":[2]},{"c":"2","e":[2]}]}"#).is_err());
        assert!(poly_from_json(r#"{"rank":1,"terms":[{"c":"0","e":[2]}]}"#).is_err());
        assert!(poly_from_json(r#"{"rank":2,"terms":[{"c":"1","e":[2]}]}"#).is_err());
        assert!(poly_from_json(r#"{"rank":1,"terms":[{"c":"1/0","e":[2]}]}"#).is_err());
    }

    #[test]
    fn polytope_json() {
        let p = polytope_from_json(r#"{"rank":2,"vertices":[[0,1],[-1,-2],[0,-2],[1,-2]]}"#).unwrap();
        assert_eq!(polytope_to_json(&p), r#"{"rank":2,"vertices":[[-1,-2],[0,1],[1,-2]]}"#);
        let r: RationalPolytope = serde_json::from_str(r#"{"rank":1,"vertices":[["1/2"],[3]]}"#).unwrap();
        assert_eq!(rational_polytope_to_json(&r), r#"{"rank":1,"vertices":[["1/2"],["3"]]}"#);
    }

    #[test]
    fn fingerprint_csv() {
        let p = polytope_from_json(r#"{"rank":2,"vertices":[[1,0],[0,1],[-1,-1]]}"#).unwrap();
        assert_eq!(fingerprint_csv_row(&fingerprint(&p).unwrap()), "2,3,3,1;1;1,4,10,1");
    }
}
