//! Exact Laurent polynomials, Newton polytopes and their combinatorial
//! mutations, together with the wall-crossing substitution and the Markov
//! tree of Vianna tori with their lifts and exotic lifts.

pub mod format;
pub mod intmat;
pub mod laurent;
pub mod lattice;
pub mod markov;
pub mod mutation;
pub mod render;
pub mod scalar;

pub use intmat::UnimodularMap;
pub use laurent::{augmentation_lift, LaurentError, LaurentPoly, LiftResult, Poly};
pub use lattice::{are_equivalent, fingerprint, Fingerprint, LatticeError, LatticePolytope, Polytope, RationalPolytope, WidthVector};
pub use markov::{enumerate_tree, markov_children, FamilyReport, MarkovError, MarkovTriple, Pipeline};
pub use mutation::{bsp_transform, mutate_polytope, search_mutations, MutationError, MutationSpec};
pub use render::{render, RenderConfig, RenderError};
pub use scalar::{Coeff, Rational, Scalar};
