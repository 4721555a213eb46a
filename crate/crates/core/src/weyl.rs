//! The finite Weyl system on `Z_N × Z_N`, the symplectic Fourier transform and the Moyal product.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Carrier, FiniteGroup, Multiplier};
use crate::hilbert::{GFunction, HSOperator};
use crate::linalg::{compensated_sum, root_of_unity, CMat, CVec, CompensatedSum, C64, ONE};
use crate::rep::ProjRep;
use crate::star::star_implicit;
use crate::wigner::WignerMap;

/// Operator ordering of `U(q,p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// `U(q,p) = τ^{qp} X^q Z^p` with `τ² = ω`; odd `N` only.
    Symmetric,
    /// `U(q,p) = X^q Z^p`.
    Standard,
}

/// Weight `1/N` per element, so that the Duflo–Moore operator is the identity.
#[derive(Clone, Debug)]
pub struct DiscreteWeylSystem {
    pub n: usize,
    pub ordering: Ordering,
    pub rep: ProjRep,
    pub shift: CMat,
    pub clock: CMat,
}

/// `X|j⟩ = |j+1⟩`.
pub fn shift_matrix(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { C64::from(0.0) })
}

/// `Z|j⟩ = ω^j |j⟩`.
pub fn clock_matrix(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j { root_of_unity(i as i64, n) } else { C64::from(0.0) })
}

fn inv2(n: usize) -> i64 {
    n.div_ceil(2) as i64
}

/// `m(g, g′)` for `g = (q,p)`, `g′ = (q′,p′)`.
fn multiplier_phase(n: usize, ordering: Ordering, a: usize, b: usize) -> C64 {
    let (q, p) = ((a / n) as i64, (a % n) as i64);
    let (qq, pp) = ((b / n) as i64, (b % n) as i64);
    match ordering {
        Ordering::Symmetric => root_of_unity(inv2(n) * (q * pp - p * qq), n),
        Ordering::Standard => root_of_unity(-p * qq, n),
    }
}

pub fn weyl_multiplier(n: usize, ordering: Ordering) -> Multiplier {
    Multiplier::from_fn(n * n, |a, b| multiplier_phase(n, ordering, a, b))
}

pub fn build_weyl_system(n: usize, ordering: Ordering) -> Result<DiscreteWeylSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if ordering == Ordering::Symmetric && n.is_multiple_of(2) {
        return Err(Error::UnsupportedOrdering(n));
    }
    let group = FiniteGroup::cyclic_product(n)?;
    let carrier = Carrier::Finite(Arc::new(group));
    let x = shift_matrix(n);
    let z = clock_matrix(n);
    let mut xq = CMat::identity(n, n);
    let mut mats = Vec::with_capacity(n * n);
    for q in 0..n {
        let mut zp = CMat::identity(n, n);
        for p in 0..n {
            let phase = match ordering {
                Ordering::Symmetric => root_of_unity(inv2(n) * (q * p) as i64, n),
                Ordering::Standard => ONE,
            };
            mats.push(&xq * &zp * phase);
            zp = &zp * &z;
        }
        xq = &xq * &x;
    }
    let rep = ProjRep::new(carrier, mats, weyl_multiplier(n, ordering))?;
    Ok(DiscreteWeylSystem { n, ordering, rep, shift: x, clock: z })
}

/// Unitary DFT basis `(1/√N) Σ_j ω^{jk} |j⟩`.
pub fn fourier_basis(n: usize) -> Vec<CVec> {
    let s = C64::from(1.0 / (n as f64).sqrt());
    (0..n)
        .map(|k| CVec::from_fn(n, |j, _| root_of_unity((j * k) as i64, n) * s))
        .collect()
}

fn sigma(n: usize, a: usize, b: usize) -> i64 {
    let (q, p) = ((a / n) as i64, (a % n) as i64);
    let (qq, pp) = ((b / n) as i64, (b % n) as i64);
    q * pp - p * qq
}

/// `(F f)(q,p) = (1/N) Σ f(q′,p′) ω^{qp′ − pq′}` as an `N² × N²` matrix.
pub fn symplectic_dft_matrix(n: usize) -> CMat {
    let s = 1.0 / n as f64;
    CMat::from_fn(n * n, n * n, |a, b| root_of_unity(sigma(n, a, b), n) * s)
}

pub fn symplectic_dft(n: usize, f: &GFunction) -> Result<GFunction> {
    if f.len() != n * n {
        return Err(Error::DimMismatch { expected: n * n, got: f.len() });
    }
    GFunction::new(f.carrier().clone(), symplectic_dft_matrix(n) * f.values())
}

/// Deviations of `F` from unitarity (weighted), self-adjointness and `F² = I`.
#[derive(Clone, Debug)]
pub struct SymplecticReport {
    pub unitarity: f64,
    pub self_adjointness: f64,
    pub involution: f64,
}

pub fn symplectic_report(n: usize) -> SymplecticReport {
    let f = symplectic_dft_matrix(n);
    let i = CMat::identity(n * n, n * n);
    // The weights are uniform, so the weighted adjoint is the conjugate transpose.
    SymplecticReport {
        unitarity: crate::linalg::max_abs_diff(&(f.adjoint() * &f), &i),
        self_adjointness: crate::linalg::max_abs_diff(&f.adjoint(), &f),
        involution: crate::linalg::max_abs_diff(&(&f * &f), &i),
    }
}

/// Prefactor of the discrete Moyal kernel in the weighted measure `(1/N) Σ`.
pub const MOYAL_PREFACTOR: f64 = 1.0;

/// `(f₁ ⊛ f₂)(x) = c Σ_{z₁,z₂} (1/N)(1/N) ω^{2(σ(x,z₁) + σ(z₁,z₂) + σ(z₂,x))} f₁(z₁) f₂(z₂)`.
pub fn moyal_kernel_product_with(n: usize, f1: &GFunction, f2: &GFunction, prefactor: f64) -> Result<GFunction> {
    if n.is_multiple_of(2) {
        return Err(Error::Unsupported("the symmetric Moyal kernel needs odd N".into()));
    }
    f1.check_same_carrier(f2)?;
    let n2 = n * n;
    let w = 1.0 / (n as f64 * n as f64);
    let out = CVec::from_fn(n2, |x, _| {
        let mut total = CompensatedSum::new();
        for z1 in 0..n2 {
            let a = f1.values()[z1];
            let s1 = sigma(n, x, z1);
            total.add(
                a * compensated_sum((0..n2).map(|z2| {
                    let e = 2 * (s1 + sigma(n, z1, z2) + sigma(n, z2, x));
                    root_of_unity(e, n) * f2.values()[z2]
                })),
            );
        }
        total.value() * (w * prefactor)
    });
    GFunction::new(f1.carrier().clone(), out)
}

pub fn moyal_kernel_product(n: usize, f1: &GFunction, f2: &GFunction) -> Result<GFunction> {
    moyal_kernel_product_with(n, f1, f2, MOYAL_PREFACTOR)
}

/// `f₁ ⊛ f₂ = F((F f₁) ⋆ (F f₂))`.
pub fn moyal_conjugation_product(w: &WignerMap, n: usize, f1: &GFunction, f2: &GFunction) -> Result<GFunction> {
    let a = symplectic_dft(n, f1)?;
    let b = symplectic_dft(n, f2)?;
    symplectic_dft(n, &star_implicit(w, &a, &b)?)
}

/// Both routes of the twisted product and their deviation.
#[derive(Clone, Debug)]
pub struct MoyalProduct {
    pub conjugation: GFunction,
    pub kernel: GFunction,
    pub deviation: f64,
}

pub fn moyal_twisted_product(
    sys: &DiscreteWeylSystem,
    w: &WignerMap,
    f1: &GFunction,
    f2: &GFunction,
) -> Result<MoyalProduct> {
    if sys.ordering != Ordering::Symmetric {
        return Err(Error::Unsupported("the Moyal kernel needs symmetric ordering".into()));
    }
    let conjugation = moyal_conjugation_product(w, sys.n, f1, f2)?;
    let kernel = moyal_kernel_product(sys.n, f1, f2)?;
    let deviation = conjugation.max_abs_diff(&kernel);
    Ok(MoyalProduct { conjugation, kernel, deviation })
}

/// `T(A) = F(S(A))`.
pub fn standard_wigner_route(sys: &DiscreteWeylSystem, w: &WignerMap, a: &HSOperator) -> Result<GFunction> {
    symplectic_dft(sys.n, &w.apply(a)?)
}

/// The `N² × N²` matrix of `T` in the row-major operator basis.
pub fn standard_wigner_matrix(sys: &DiscreteWeylSystem, w: &WignerMap) -> CMat {
    symplectic_dft_matrix(sys.n) * w.matrix()
}

/// `(V(g) f)(g′) = f(g′ − g)`.
pub fn translate(n: usize, f: &GFunction, g: usize) -> GFunction {
    let (q, p) = (g / n, g % n);
    GFunction::from_fn(f.carrier(), |x| {
        let (xq, xp) = (x / n, x % n);
        f.values()[((xq + n - q) % n) * n + (xp + n - p) % n]
    })
}
