//! Symbolic L²-Alexander torsion classes for links assembled from torus
//! links, solid-torus and thickened-torus companions, keychain links,
//! connected sums, cablings and component deletions.
//!
//! Torsion classes are powers of `t ↦ max(1,t)` with exponents that are
//! integer combinations `Σ aⱼ|⟨ℓⱼ, n⟩|` of the multi-link coefficients; all
//! arithmetic is exact. The crate also evaluates the induced seminorm data:
//! degenerate directions and dual-ball zonotopes.

pub mod cache;
pub mod check;
mod dispatch;
pub mod dsl;
pub mod error;
pub mod exponent;
pub mod fk;
mod identify;
pub mod link;
pub mod norm;
pub mod torsion;
pub mod zonotope;

pub use dispatch::{torsion, DerivationTrace, TraceNode, TraceOp};
pub use error::{Error, Result};
pub use exponent::{ExponentExpr, Term};
pub use identify::{detect_split, SplitReport, Splitness};
pub use link::{build_link, linking_matrix, ComponentRef, LinkObject, LinkSpec, LinkingMatrix};
pub use norm::{evaluate, seminorm_report, SeminormReport};
pub use torsion::{
    cabling_torsion, connected_sum_torsion, glue_route_annulus, glue_route_cabling,
    glue_route_connected_sum, glue_route_thickened, glue_toroidal, knot_invariant_exponent,
    surgery_correction, torres_delete, torsion_keychain, torsion_parallel_in_solid,
    torsion_torus_in_solid, torsion_torus_in_thickened, torsion_torus_link, CoefficientVector,
    TorsionClass,
};
pub use zonotope::{dual_ball, Zonotope};
