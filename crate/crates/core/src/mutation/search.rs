use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use rayon::prelude::*;

use super::{mutate_polytope, MutationError, MutationOutcome};
use crate::lattice::{lattice_points, LatticePolytope, Polytope, WidthVector};
use crate::scalar::{content, dot_i64, Scalar};

/// Bounds for [`search_mutations_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Width vectors range over `[-w_bound, w_bound]^n`.
    pub w_bound: i64,
    /// Largest vertex count of a candidate factor.
    pub f_vertex_bound: usize,
    /// Maximum number of attempted mutations.
    pub node_cap: usize,
    /// Also try the inward facet normals of `P`, whatever their size.
    pub facet_normals: bool,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { w_bound: 10, f_vertex_bound: 2, node_cap: 1_000_000, facet_normals: true, parallel: true }
    }
}

pub fn search_mutations(p: &LatticePolytope, w_bound: i64, f_vertex_bound: usize) -> Result<Vec<MutationOutcome>, MutationError> {
    search_mutations_with(p, &SearchConfig { w_bound, f_vertex_bound, ..SearchConfig::default() })
}

fn candidate_widths(p: &LatticePolytope, cfg: &SearchConfig) -> Vec<WidthVector> {
    let n = p.rank();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in (0..n).map(|_| -cfg.w_bound..=cfg.w_bound).multi_cartesian_product() {
        if content(&w) == 1 && seen.insert(w.clone()) {
            out.push(WidthVector::new(w).expect("primitive"));
        }
    }
    if cfg.facet_normals && p.is_full_dimensional() {
        for f in p.facets() {
            let v: Vec<i64> = f.normal.iter().map(|x| x.to_int().expect("integral normal")).collect();
            let g = content(&v);
            let w: Vec<i64> = v.iter().map(|x| x / g).collect();
            if seen.insert(w.clone()) {
                out.push(WidthVector::new(w).expect("primitive"));
            }
        }
    }
    out
}

/// Factors `conv({0} ∪ S)` for subsets `S` of the differences `p − p₀`,
/// with at most `bound` vertices.
fn factor_candidates(points: &[Vec<i64>], bound: usize) -> Vec<LatticePolytope> {
    let p0 = &points[0];
    let diffs: Vec<Vec<i64>> = points[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let origin = vec![0; p0.len()];
    let mut out = BTreeSet::new();
    for k in 1..bound.max(1) {
        for subset in diffs.iter().combinations(k) {
            let mut pts = vec![origin.clone()];
            pts.extend(subset.into_iter().cloned());
            let f = Polytope::hull(origin.len(), &pts).expect("nonempty");
            if f.vertex_count() <= bound {
                out.insert(f);
            }
        }
    }
    out.into_iter().collect()
}

fn mutations_along(
    p: &LatticePolytope,
    w: &WidthVector,
    cfg: &SearchConfig,
    counter: &AtomicUsize,
) -> Result<Vec<MutationOutcome>, MutationError> {
    let (lo, hi) = p.heights(w.as_slice());
    if lo == hi {
        return Ok(Vec::new());
    }
    let bottom: Vec<Vec<i64>> = p.vertices().iter().filter(|v| dot_i64(w.as_slice(), v) == lo).cloned().collect();
    if bottom.len() < 2 {
        return Ok(Vec::new());
    }
    let face = Polytope::hull(p.rank(), &bottom)?;
    let pts = lattice_points(&face)?;
    let mut out = Vec::new();
    for f in factor_candidates(&pts, cfg.f_vertex_bound) {
        if counter.fetch_add(1, Ordering::Relaxed) >= cfg.node_cap {
            return Err(MutationError::SearchBudgetExceeded(cfg.node_cap));
        }
        match mutate_polytope(p, w, &f) {
            Ok(o) if o.polytope != *p => out.push(o),
            Ok(_) | Err(MutationError::MutationUndefined(_)) | Err(MutationError::NonIntegralResult(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Enumerate mutations of `P`, over width vectors in a box plus the facet
/// normals, with factors drawn from the lattice points of the bottom face.
/// Results are deduplicated by output polytope and returned in the order of
/// the width-vector enumeration.
pub fn search_mutations_with(p: &LatticePolytope, cfg: &SearchConfig) -> Result<Vec<MutationOutcome>, MutationError> {
    if p.is_point() {
        return Ok(Vec::new());
    }
    let widths = candidate_widths(p, cfg);
    let counter = AtomicUsize::new(0);
    let batches: Vec<Vec<MutationOutcome>> = if cfg.parallel {
        widths.par_iter().map(|w| mutations_along(p, w, cfg, &counter)).collect::<Result<_, _>>()?
    } else {
        widths.iter().map(|w| mutations_along(p, w, cfg, &counter)).collect::<Result<_, _>>()?
    };
    let mut seen = BTreeSet::new();
    Ok(batches.into_iter().flatten().filter(|o| seen.insert(o.polytope.clone())).collect())
}
