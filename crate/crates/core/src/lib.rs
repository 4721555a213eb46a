//! Weyl–Wigner quantization maps and star products for square-integrable representations.
//!
//! A projective representation `U` of a measured group `G` yields an isometry
//! `S: B₂(H) → L²(G)` (the Wigner map); its adjoint is the Weyl map. The star product
//! `f₁ ⋆ f₂ = S(S*f₁ S*f₂)` is computed both from that definition and from explicit
//! kernel formulas, and every identity relating them is available as a check.

pub mod affine;
pub mod checks;
pub mod data;
pub mod error;
pub mod group;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod scenario;
pub mod star;
pub mod tolerances;
pub mod weyl;
pub mod wigner;

pub use error::{Error, Result};
