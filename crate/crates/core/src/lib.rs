//! Exact-arithmetic engine for strictly unital b-algebras, their (b,ν)-extensions,
//! twisted modules, conflations and the triangulated homotopy category.

pub mod ad;
pub mod error;
pub mod confl;
pub mod examples;
pub mod gen;
pub mod hat;
pub mod io;
pub mod check;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod section;
pub mod tri;
pub mod tw;

pub use ad::{AdMorphism, DirectSum, SModule};
pub use error::{Error, Result};
pub use hat::{HatBasis, HatElem, HatIdem};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use section::{BasisElem, Elem, SectionAlgebra};
