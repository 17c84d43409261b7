use rayon::prelude::*;
use serde::Serialize;

use super::{enumerate_tree, MarkovTriple, Pipeline};
use crate::format::fingerprint_csv_row;
use crate::lattice::{are_equivalent, fingerprint, Fingerprint, LatticePolytope};

pub const REPORT_CSV_HEADER: &str =
    "triple,variant,n,rank,vertex_count,normalized_volume,edge_lengths,points_P,points_2P,interior_points,distinct_from_all";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Lift,
    Exotic,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Lift => "lift",
            Variant::Exotic => "exotic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub triple: MarkovTriple,
    pub variant: Variant,
    pub n: usize,
    pub polytope: Option<LatticePolytope>,
    pub fingerprint: Option<Fingerprint>,
    pub error: Option<String>,
    pub distinct_from_all: bool,
}

/// Fingerprints of the lifted and exotic polytopes of every triple up to a
/// depth, with their pairwise equivalence matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    pub depth: usize,
    pub rows: Vec<ReportRow>,
    /// `equivalent[i][j]` holds when rows `i` and `j` have equivalent polytopes.
    pub equivalent: Vec<Vec<bool>>,
    /// Pairs whose fingerprints tied, so that the full equivalence test ran.
    pub escalations: usize,
    /// `false` when some row failed.
    pub complete: bool,
}

impl FamilyReport {
    pub fn all_distinct(&self) -> bool {
        self.complete && self.rows.iter().all(|r| r.distinct_from_all)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let [a, b, c] = r.triple.entries();
            let fp = match &r.fingerprint {
                Some(f) => fingerprint_csv_row(f),
                None => ",,,,,,".to_string(),
            };
            out.push_str(&format!("{a};{b};{c},{},{},{fp},{}\n", r.variant.as_str(), r.n, r.distinct_from_all));
        }
        out
    }
}

impl Pipeline {
    /// Build the report level by level; nodes of one level run in parallel.
    pub fn family_report(&self, depth: usize, n: usize) -> FamilyReport {
        let nodes = enumerate_tree(depth);
        let mut rows = Vec::new();
        for d in 0..=depth {
            let level: Vec<MarkovTriple> = nodes.iter().filter(|x| x.depth == d).map(|x| x.triple).collect();
            let built: Vec<[ReportRow; 2]> = level
                .par_iter()
                .map(|t| {
                    let lift = self.lift(t, n).map(|x| x.polytope.clone());
                    let exotic = self.exotic(t, n).map(|x| x.polytope.clone());
                    [row(*t, Variant::Lift, n, lift.map_err(|e| e.to_string())), row(*t, Variant::Exotic, n, exotic.map_err(|e| e.to_string()))]
                })
                .collect();
            rows.extend(built.into_iter().flatten());
        }
        let k = rows.len();
        let mut equivalent = vec![vec![false; k]; k];
        let mut escalations = 0;
        for i in 0..k {
            equivalent[i][i] = true;
            for j in i + 1..k {
                let same = match (&rows[i].fingerprint, &rows[j].fingerprint, &rows[i].polytope, &rows[j].polytope) {
                    (Some(a), Some(b), Some(p), Some(q)) if a == b => {
                        escalations += 1;
                        are_equivalent(p, q)
                    }
                    _ => false,
                };
                equivalent[i][j] = same;
                equivalent[j][i] = same;
            }
        }
        for (i, r) in rows.iter_mut().enumerate() {
            r.distinct_from_all = r.polytope.is_some() && (0..k).all(|j| j == i || !equivalent[i][j]);
        }
        let complete = rows.iter().all(|r| r.error.is_none());
        FamilyReport { n, depth, rows, equivalent, escalations, complete }
    }
}

fn row(triple: MarkovTriple, variant: Variant, n: usize, p: Result<LatticePolytope, String>) -> ReportRow {
    let (polytope, fingerprint, error) = match p {
        Ok(p) => match fingerprint(&p) {
            Ok(f) => (Some(p), Some(f), None),
            Err(e) => (Some(p), None, Some(e.to_string())),
        },
        Err(e) => (None, None, Some(e)),
    };
    ReportRow { triple, variant, n, polytope, fingerprint, error, distinct_from_all: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_in_dimension_three() {
        let r = Pipeline::default().family_report(0, 3);
        assert_eq!(r.rows.len(), 2);
        assert!(r.all_distinct());
        assert_eq!(r.rows[0].fingerprint.as_ref().unwrap().edge_lengths, vec![1; 6]);
        assert_eq!(r.rows[1].fingerprint.as_ref().unwrap().edge_lengths, vec![1, 1, 1, 3, 3, 3]);
        assert!(r.to_csv().starts_with(REPORT_CSV_HEADER));
        assert!(r.to_csv().lines().nth(1).unwrap().starts_with("1;1;1,lift,3,3,4,"));
    }

    #[test]
    fn depth_one_in_dimension_three() {
        let r = Pipeline::default().family_report(1, 3);
        assert_eq!(r.rows.len(), 4);
        assert!(r.all_distinct());
        for (i, row) in r.equivalent.iter().enumerate() {
            assert!(row[i]);
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, r.equivalent[j][i]);
            }
        }
    }
}
