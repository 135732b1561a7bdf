//! Reduced Khovanov homology over F2 for braid closures and related diagrams,
//! computed in the diagonal `(δ, q)` grading, together with the width,
//! determinant, perturbed-homology and iterated-cone machinery used to study
//! branch sets of surgeries on twist knots.
//!
//! Half-integral gradings are always stored doubled (`delta2 = 2δ`,
//! `q2 = 2q`).

pub mod cones;
pub mod diagrams;
pub mod gf2;
pub mod khovanov;
pub mod perturbed;
pub mod poly;
pub mod twistlab;

mod error;

pub use error::{Error, Result};

pub use diagrams::{BraidWord, LinkMetadata, PlanarDiagram};

pub use khovanov::{kh_reduced, Bigrading, EngineConfig, KhTable};
