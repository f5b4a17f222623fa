//! Diagrams of bounded chain complexes over finite posets.
//!
//! Weak equivalences are levelwise quasi-isomorphisms, and homotopy Kan
//! extensions are computed pointwise by (co)simplicial replacement. The
//! constructions of the triangulated structure are built from these, and
//! every identification "isomorphic in D" is witnessed by explicit canonical
//! chain maps that are checked to be quasi-isomorphisms.

mod additive;
mod complex;
mod diagram;
mod hkan;
mod pointed;
mod recollement;
mod replacement;
mod triangulated;

pub use additive::{
    biproduct, concat, invert, path_object, path_replacement, segal, segal_components, Biproduct,
};
pub use complex::{ChainMap, Complex, GradedDims, Homology, ZigStep, Zigzag};
pub use diagram::{ChainDiagram, ChainDiagramMorphism, DiagramZigzag};
pub use hkan::{
    cocartesian_status, extend_by_zero, extension_comparison, hkan, hkan_morphism, square_at, square_comparisons,
    HKan, SquareStatus,
};
pub use recollement::{recollement, GluingLevel, Recollement};
pub use replacement::{hocolim, holim, HoSide, Replacement};
pub use pointed::{
    cone, cone_replacement, cospan, exceptional, fiber, fiber_replacement, loop_cospan, loop_map, loop_replacement,
    loop_space, span, suspension, suspension_map, suspension_replacement, suspension_span, Exceptional,
};
pub use triangulated::{
    lift_morphism, octahedron, rotate, suspension_zigzag, triangle, LesDefect, NamedSquare, Octahedron, Rotation,
    Triangle, TriangleConstruction, Witness,
};
pub(crate) use pointed::exceptional_kan;
pub(crate) use triangulated::{from_value, into_value};
