use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::{clifford_potential, vianna_112_potential, MarkovError, MarkovTriple};
use crate::intmat::{complete_to_unimodular, UnimodularMap};
use crate::laurent::{augmentation_lift, Exponent, LiftResult, Poly};
use crate::lattice::{
    affine_edge_lengths, are_equivalent, find_affine_maps, reduce_coordinates, AffineMap, LatticePolytope, Polytope,
    WidthVector,
};
use crate::mutation::{
    bsp_transform, laurent_mutation, mutate_polytope, search_mutations_with, segment_factor, MutationOutcome,
    MutationSpec, SearchConfig,
};
use crate::scalar::{content, dot_i64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Search bounds for steps between triangles.
    pub triangle_search: SearchConfig,
    /// Search bounds for steps between lifted polytopes, `n ≥ 3`.
    pub lift_search: SearchConfig,
    pub max_depth: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            triangle_search: SearchConfig::default(),
            lift_search: SearchConfig { w_bound: 4, ..SearchConfig::default() },
            max_depth: 8,
        }
    }
}

/// Where the coordinates of a node came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackSource {
    /// The Clifford potential.
    Root,
    /// A closed formula, adopted after checking it against the search.
    Formula,
    /// Mutation search followed by coordinate reduction.
    Search,
}

/// How a node was produced from its parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub parent: Option<MarkovTriple>,
    pub source: TrackSource,
    /// The mutation applied to the parent polytope, in parent coordinates.
    pub mutation: Option<MutationSpec>,
    /// The affine map from the mutated polytope to the stored coordinates.
    pub basis: Option<AffineMap>,
    /// Why no potential is attached, when none is.
    pub potential_note: Option<String>,
}

/// A Vianna triangle (`n = 2`) or one of its lifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftNode {
    pub triple: MarkovTriple,
    pub n: usize,
    pub polytope: LatticePolytope,
    pub potential: Option<Poly>,
    /// The validated width vector with `h_min = −1`, `h_max = n`; absent for `n = 2`.
    pub width: Option<WidthVector>,
    pub provenance: Provenance,
}

/// The wall-crossing image of a lifted node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExoticNode {
    pub triple: MarkovTriple,
    pub n: usize,
    pub polytope: LatticePolytope,
    pub potential: Option<Poly>,
    /// Width vector of the lifted node.
    pub width: WidthVector,
    /// Change of basis with `width` as its last row.
    pub basis: UnimodularMap,
    /// The bottom facet minus the base monomial, in original coordinates.
    pub factor: LatticePolytope,
    /// Base monomial `v`: the lexicographically smallest bottom vertex.
    pub base: Exponent,
    /// The vertex whose edges all have length one.
    pub apex: Vec<i64>,
    /// The substituted polynomial `W_Λ`, in the coordinates of `basis`.
    pub w_lambda: Option<Poly>,
    /// Augmentation lift of the lifted potential at `v`.
    pub lift: Option<LiftResult<Rational>>,
    pub potential_note: Option<String>,
}

type LiftCache = BTreeMap<(MarkovTriple, usize), Result<Arc<LiftNode>, MarkovError>>;
type ExoticCache = BTreeMap<(MarkovTriple, usize), Result<Arc<ExoticNode>, MarkovError>>;

/// Generates and caches the nodes of the Markov tree per `(triple, n)`.
#[derive(Debug, Default)]
pub struct Pipeline {
    cfg: PipelineConfig,
    lifts: Mutex<LiftCache>,
    exotics: Mutex<ExoticCache>,
}

/// `true` when `p` is a triangle with affine edge lengths `t`.
pub fn matches_triangle(p: &LatticePolytope, t: &MarkovTriple) -> bool {
    p.vertex_count() == 3 && p.dim() == 2 && affine_edge_lengths(p) == t.entries().map(|x| x as i64)
}

fn primitive(v: &[i64]) -> Option<Vec<i64>> {
    let g = content(v);
    (g != 0).then(|| v.iter().map(|x| x / g).collect())
}

/// The first inward facet normal `w` of `p` along which `h_min = −1`,
/// `h_max = n`, a single vertex sits at the top, and the bottom facet has a
/// triangular 2-face with affine edge lengths `t`.
pub fn lifted_width(p: &LatticePolytope, t: &MarkovTriple) -> Option<WidthVector> {
    let n = p.rank() as i64;
    if n < 3 || !p.is_full_dimensional() {
        return None;
    }
    let mut normals: Vec<Vec<i64>> = p.facets().iter().filter_map(|f| primitive(&f.normal)).collect();
    normals.sort();
    normals.dedup();
    normals.into_iter().find_map(|w| {
        let hs: Vec<i64> = p.vertices().iter().map(|v| dot_i64(&w, v)).collect();
        let (lo, hi) = (*hs.iter().min()?, *hs.iter().max()?);
        if lo != -1 || hi != n || hs.iter().filter(|&&h| h == hi).count() != 1 {
            return None;
        }
        let bottom: Vec<Vec<i64>> = p.vertices().iter().zip(&hs).filter(|(_, &h)| h == lo).map(|(v, _)| v.clone()).collect();
        let facet = Polytope::from_points(&bottom).ok()?;
        let has_triangle = if facet.dim() == 2 {
            matches_triangle(&facet, t)
        } else {
            facet.faces().iter().filter(|f| f.len() == 3 && facet.face_dim(f) == 2).any(|f| {
                let pts: Vec<Vec<i64>> = f.iter().map(|&i| facet.vertices()[i].clone()).collect();
                Polytope::from_points(&pts).map(|tri| matches_triangle(&tri, t)).unwrap_or(false)
            })
        };
        has_triangle.then(|| WidthVector::new(w).expect("primitive"))
    })
}

fn accepts(p: &LatticePolytope, t: &MarkovTriple, n: usize) -> bool {
    if n == 2 {
        matches_triangle(p, t)
    } else {
        lifted_width(p, t).is_some()
    }
}

fn known_formula(t: &MarkovTriple, n: usize) -> Option<Poly> {
    (t.entries() == [1, 1, 2]).then(|| vianna_112_potential(n))
}

/// The algebraic counterpart of a polytope mutation, using the binomial
/// factor of its segment.
fn algebraic_step(parent: &Poly, o: &MutationOutcome) -> Result<Poly, String> {
    let f = segment_factor(&o.spec.factor).map_err(|e| e.to_string())?;
    let (r, out) = laurent_mutation(parent, &o.spec.w, &f).map_err(|e| e.to_string())?;
    if out.polytope != o.polytope {
        return Err("algebraic mutation lands on a different polytope".into());
    }
    Ok(r)
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Self {
        Self { cfg, ..Self::default() }
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    fn check_depth(&self, t: &MarkovTriple) -> Result<(), MarkovError> {
        let depth = t.depth();
        if depth > self.cfg.max_depth {
            return Err(MarkovError::DepthExceeded { triple: *t, depth, max: self.cfg.max_depth });
        }
        Ok(())
    }

    /// The Vianna triangle of `t`, with edge lengths `t`.
    pub fn vianna_triangle(&self, t: &MarkovTriple) -> Result<LatticePolytope, MarkovError> {
        Ok(self.lift(t, 2)?.polytope.clone())
    }

    /// Potential (when available) and polytope of the lift of `t` to dimension `n`.
    pub fn lifted_vianna(&self, t: &MarkovTriple, n: usize) -> Result<(Option<Poly>, LatticePolytope), MarkovError> {
        let node = self.lift(t, n)?;
        Ok((node.potential.clone(), node.polytope.clone()))
    }

    /// Potential (when available) and polytope of the exotic lift of `t`.
    pub fn exotic_lift(&self, t: &MarkovTriple, n: usize) -> Result<(Option<Poly>, LatticePolytope), MarkovError> {
        let node = self.exotic(t, n)?;
        Ok((node.potential.clone(), node.polytope.clone()))
    }

    pub fn lift(&self, t: &MarkovTriple, n: usize) -> Result<Arc<LiftNode>, MarkovError> {
        if let Some(r) = self.lifts.lock().expect("cache lock").get(&(*t, n)) {
            return r.clone();
        }
        let r = self.compute_lift(t, n).map(Arc::new);
        self.lifts.lock().expect("cache lock").insert((*t, n), r.clone());
        r
    }

    pub fn exotic(&self, t: &MarkovTriple, n: usize) -> Result<Arc<ExoticNode>, MarkovError> {
        if let Some(r) = self.exotics.lock().expect("cache lock").get(&(*t, n)) {
            return r.clone();
        }
        let r = self.compute_exotic(t, n).map(Arc::new);
        self.exotics.lock().expect("cache lock").insert((*t, n), r.clone());
        r
    }

    fn compute_lift(&self, t: &MarkovTriple, n: usize) -> Result<LiftNode, MarkovError> {
        if n < 2 {
            return Err(MarkovError::DimensionTooSmall { n, min: 2 });
        }
        self.check_depth(t)?;
        let Some(parent_triple) = t.parent() else {
            let potential = clifford_potential(n);
            let polytope = potential.newton()?;
            let width = if n >= 3 { Some(lifted_width(&polytope, t).expect("Clifford simplex is a lift")) } else { None };
            return Ok(LiftNode {
                triple: *t,
                n,
                polytope,
                potential: Some(potential),
                width,
                provenance: Provenance { parent: None, source: TrackSource::Root, mutation: None, basis: None, potential_note: None },
            });
        };
        let parent = self.lift(&parent_triple, n)?;
        let cfg = if n == 2 { &self.cfg.triangle_search } else { &self.cfg.lift_search };
        let candidates: Vec<MutationOutcome> =
            search_mutations_with(&parent.polytope, cfg)?.into_iter().filter(|o| accepts(&o.polytope, t, n)).collect();
        if candidates.is_empty() {
            return Err(MarkovError::PipelineSearchFailed { from: parent_triple, to: *t, n });
        }

        let mut chosen = &candidates[0];
        let mut potential = None;
        let mut note = None;
        match &parent.potential {
            None => note = Some(format!("parent {parent_triple} has no potential")),
            Some(wp) => {
                let mut reasons = Vec::new();
                for o in &candidates {
                    match algebraic_step(wp, o) {
                        Ok(r) => {
                            chosen = o;
                            potential = Some(r);
                            break;
                        }
                        Err(e) => reasons.push(e),
                    }
                }
                if potential.is_none() {
                    note = Some(format!("no candidate mutation is Laurent: {}", reasons.join("; ")));
                }
            }
        }

        if let Some(formula) = known_formula(t, n) {
            let target = formula.newton()?;
            if let Some(map) = find_affine_maps(&chosen.polytope, &target).into_iter().next() {
                return Ok(LiftNode {
                    triple: *t,
                    n,
                    width: lifted_width(&target, t),
                    polytope: target,
                    potential: Some(formula),
                    provenance: Provenance {
                        parent: Some(parent_triple),
                        source: TrackSource::Formula,
                        mutation: Some(chosen.spec.clone()),
                        basis: Some(map),
                        potential_note: None,
                    },
                });
            }
        }

        let (polytope, m) = reduce_coordinates(&chosen.polytope);
        let potential = potential.map(|r| r.apply_unimodular(&m)).transpose()?;
        if let Some(w) = &potential {
            debug_assert_eq!(w.newton().ok().as_ref(), Some(&polytope));
        }
        let width = if n >= 3 { lifted_width(&polytope, t) } else { None };
        Ok(LiftNode {
            triple: *t,
            n,
            polytope,
            potential,
            width,
            provenance: Provenance {
                parent: Some(parent_triple),
                source: TrackSource::Search,
                mutation: Some(chosen.spec.clone()),
                basis: Some(AffineMap { linear: m, translation: vec![0; n] }),
                potential_note: note,
            },
        })
    }

    fn compute_exotic(&self, t: &MarkovTriple, n: usize) -> Result<ExoticNode, MarkovError> {
        if n < 3 {
            return Err(MarkovError::DimensionTooSmall { n, min: 3 });
        }
        let node = self.lift(t, n)?;
        let width = node.width.clone().expect("lifted nodes of dimension ≥ 3 carry a width");
        let u = UnimodularMap::new(complete_to_unimodular(width.as_slice()).map_err(crate::laurent::LaurentError::from)?)
            .map_err(crate::laurent::LaurentError::from)?;
        let back = u.inverse();
        let axis = n - 1;

        let bottom: Vec<Vec<i64>> =
            node.polytope.vertices().iter().filter(|v| dot_i64(width.as_slice(), v) == -1).cloned().collect();
        let base = bottom.iter().min().expect("nonempty bottom facet").clone();
        let neg: Vec<i64> = base.iter().map(|x| -x).collect();
        let factor = Polytope::from_points(&bottom)?.translate(&neg);

        let p_u = node.polytope.map_unimodular(&u)?;
        let f_u = factor.map_unimodular(&u)?;
        let outcome = mutate_polytope(&p_u, &WidthVector::axis(n, axis), &f_u)?;
        let polytope = outcome.polytope.map_unimodular(&back)?;

        let (mut potential, mut w_lambda, mut lift, mut note) = (None, None, None, None);
        match &node.potential {
            None => note = Some("lifted node has no potential".to_string()),
            Some(w) => {
                let w_u = w.apply_unimodular(&u)?;
                let base_u = u.apply(&base);
                let wl = w_u
                    .split_by_axis(axis)?
                    .remove(&-1)
                    .expect("bottom facet carries terms")
                    .shift(&base_u[..axis].iter().map(|x| -x).collect::<Vec<_>>());
                let (r_u, _) = bsp_transform(&w_u, axis, &wl)?;
                let r = r_u.apply_unimodular(&back)?;
                if r.newton()? != polytope {
                    return Err(MarkovError::Postcondition { triple: *t, n, what: "potential and polytope disagree".into() });
                }
                lift = Some(augmentation_lift(w, &base)?);
                potential = Some(r);
                w_lambda = Some(wl);
            }
        }

        if polytope.vertex_count() != n + 1 || !polytope.is_full_dimensional() {
            return Err(MarkovError::Postcondition { triple: *t, n, what: format!("{polytope:?} is not an n-simplex") });
        }
        let verts = polytope.vertices();
        let Some(ai) = verts.iter().position(|v| *v == base) else {
            return Err(MarkovError::Postcondition { triple: *t, n, what: "base monomial is not a vertex".into() });
        };
        for (i, j) in polytope.edges() {
            if i == ai || j == ai {
                let o = if i == ai { j } else { i };
                let d: Vec<i64> = verts[o].iter().zip(&verts[ai]).map(|(a, b)| a - b).collect();
                if content(&d) != 1 {
                    return Err(MarkovError::Postcondition { triple: *t, n, what: format!("apex edge {d:?} has length {}", content(&d)) });
                }
            }
        }
        let opposite: Vec<Vec<i64>> = verts.iter().filter(|v| **v != base).cloned().collect();
        if !are_equivalent(&Polytope::from_points(&opposite)?, &factor.dilate(n as i64)) {
            return Err(MarkovError::Postcondition { triple: *t, n, what: "opposite facet is not the dilated factor".into() });
        }

        Ok(ExoticNode {
            triple: *t,
            n,
            polytope,
            potential,
            width,
            basis: u,
            factor,
            apex: base.clone(),
            base,
            w_lambda,
            lift,
            potential_note: note,
        })
    }
}
