//! Dense exact linear algebra and finite algebras given by structure constants.

mod algebra;
mod characters;
mod matrix;
mod subalg;

pub use algebra::{Algebra, ScAlgebra, DIM_CAP};
pub use characters::{characters, complex_characters, is_character, split_degree};
pub use matrix::{IntegralityReport, Matrix};
pub use subalg::{
    equalizer_subalgebra, ideal_quotient, orthogonal_complement, primitive_element, subalgebra, PrimitiveElement,
    Quotient, PRIMITIVE_SEARCH_CAP,
};
