//! Sullivan algebras attached to digraphs, and their morphisms.

pub mod morphism;
pub mod poly;
pub mod presentation;

pub use morphism::{default_coefficients, enumerate_morphisms_constrained, induced_algebra_morphism, AlgebraMorphism};
pub use poly::{coeff, Coeff, GradedPoly, Monomial};
pub use presentation::{
    check_d_squared, check_witnesses, ellipticity_witnesses, generator_degrees, Generator, Origin, Parity,
    SullivanPresentation, Witness,
};
