//! Tolerances used by checks and assertions.

/// Default absolute tolerance for finite-group identities.
pub const DEFAULT: f64 = 1e-10;
/// Symplectic Fourier transform identities and `J_m² = I`.
pub const EXACT: f64 = 1e-12;
/// Multiplier invariants other than unit modulus.
pub const MULTIPLIER: f64 = 1e-12;
pub const UNIT_MODULUS: f64 = 1e-14;
pub const UNITARITY: f64 = 1e-12;
pub const ORTHONORMAL_BASIS: f64 = 1e-12;
/// Singular-value cut for the commutant null space.
pub const COMMUTANT_SVD_THRESHOLD: f64 = 1e-8;
/// Relative tolerance of the affine orthogonality relations.
pub const AFFINE_ORTHOGONALITY: f64 = 1e-2;
/// Relative tolerance of the explicit affine star product against the quadrature oracle.
pub const AFFINE_STAR: f64 = 5e-2;
/// Minimum degradation factor when the modular factor is dropped.
pub const AFFINE_ABLATION_FACTOR: f64 = 10.0;
/// Largest group order for which the explicit kernel is stored as a full table.
pub const KERNEL_TABLE_MAX_ORDER: usize = 64;

/// Tolerances a scenario may override.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub default: f64,
    pub exact: f64,
    pub affine_orthogonality: f64,
    pub affine_star: f64,
    pub ablation_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            default: DEFAULT,
            exact: EXACT,
            affine_orthogonality: AFFINE_ORTHOGONALITY,
            affine_star: AFFINE_STAR,
            ablation_factor: AFFINE_ABLATION_FACTOR,
        }
    }
}
