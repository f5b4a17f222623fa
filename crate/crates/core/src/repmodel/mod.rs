//! Diagrams of finite-dimensional vector spaces over finite categories.
//!
//! Kan extensions are strict, computed pointwise by Kan's formula, so the
//! exactness of a square is a literal statement about invertible matrices.

mod diagram;
mod kan;
mod mate;

pub use diagram::{coproduct_inclusions, DiagramMorphism, VecDiagram};
pub use kan::{
    kan, kan_morphism, lim_colim, nat_dim, unit_counit, universal_map, Adjunction, KanExtension, KanSide,
    LimSide, Limit,
};
pub use mate::{exact_square_verdict, inverse_lemma_sides, mate, paste_horizontal, pasting_sides};
