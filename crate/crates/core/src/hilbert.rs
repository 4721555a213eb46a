//! The two Hilbert spaces: Hilbert–Schmidt operators on H and L²(G, μ_G).

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::group::{Carrier, Multiplier};
use crate::linalg::{compensated_sum, CMat, CVec, C64};

/// An element of B₂(H) at finite dimension.
pub type HSOperator = CMat;

/// `⟨A, B⟩ = tr(A* B)`.
pub fn hs_inner(a: &HSOperator, b: &HSOperator) -> Result<C64> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimMismatch { expected: a.nrows(), got: b.nrows() });
    }
    Ok(crate::linalg::frobenius_dot(a, b))
}

pub fn hs_norm(a: &HSOperator) -> f64 {
    a.norm()
}

/// `|φ⟩⟨ψ|`, the operator `χ ↦ ⟨ψ, χ⟩ φ`.
pub fn rank_one(phi: &CVec, psi: &CVec) -> Result<HSOperator> {
    if phi.len() != psi.len() {
        return Err(Error::DimMismatch { expected: phi.len(), got: psi.len() });
    }
    Ok(phi * psi.adjoint())
}

/// The conjugation `A ↦ A*` on B₂(H).
pub fn op_conj_j(a: &HSOperator) -> HSOperator {
    a.adjoint()
}

/// A square-integrable function on a measured group, stored by element index.
#[derive(Clone, Debug)]
pub struct GFunction {
    carrier: Carrier,
    values: CVec,
}

impl GFunction {
    pub fn new(carrier: Carrier, values: CVec) -> Result<Self> {
        if values.len() != carrier.order() {
            return Err(Error::DimMismatch { expected: carrier.order(), got: values.len() });
        }
        Ok(Self { carrier, values })
    }

    pub fn zeros(carrier: &Carrier) -> Self {
        Self { values: CVec::zeros(carrier.order()), carrier: carrier.clone() }
    }

    pub fn from_fn(carrier: &Carrier, f: impl Fn(usize) -> C64) -> Self {
        Self {
            values: CVec::from_fn(carrier.order(), |i, _| f(i)),
            carrier: carrier.clone(),
        }
    }

    pub fn delta(carrier: &Carrier, g: usize) -> Self {
        Self::from_fn(carrier, |h| C64::from(if h == g { 1.0 } else { 0.0 }))
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn values(&self) -> &CVec {
        &self.values
    }

    pub fn into_values(self) -> CVec {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_same_carrier(&self, other: &GFunction) -> Result<()> {
        if self.carrier.same_as(&other.carrier) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `Σ_g w(g) conj(f(g)) h(g)`.
    pub fn inner(&self, other: &GFunction) -> Result<C64> {
        self.check_same_carrier(other)?;
        let w = self.carrier.weights();
        Ok(compensated_sum(
            self.values
                .iter()
                .zip(other.values.iter())
                .zip(w)
                .map(|((a, b), &wi)| a.conj() * b * wi),
        ))
    }

    pub fn norm(&self) -> f64 {
        let w = self.carrier.weights();
        self.values
            .iter()
            .zip(w)
            .map(|(a, &wi)| a.norm_sqr() * wi)
            .sum::<f64>()
            .sqrt()
    }

    pub fn map_values(&self, f: impl Fn(&CVec) -> CVec) -> Self {
        Self { carrier: self.carrier.clone(), values: f(&self.values) }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_values(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map_values(|v| v.map(|z| z.conj()))
    }

    /// Largest pointwise deviation.
    pub fn max_abs_diff(&self, other: &GFunction) -> f64 {
        crate::linalg::max_abs_diff_vec(&self.values, &other.values)
    }

    /// L² distance.
    pub fn dist(&self, other: &GFunction) -> f64 {
        (self - other).norm()
    }
}

impl<'a> Add<&'a GFunction> for &'a GFunction {
    type Output = GFunction;
    fn add(self, rhs: &GFunction) -> GFunction {
        GFunction { carrier: self.carrier.clone(), values: &self.values + &rhs.values }
    }
}

impl<'a> Sub<&'a GFunction> for &'a GFunction {
    type Output = GFunction;
    fn sub(self, rhs: &GFunction) -> GFunction {
        GFunction { carrier: self.carrier.clone(), values: &self.values - &rhs.values }
    }
}

impl Mul<C64> for &GFunction {
    type Output = GFunction;
    fn mul(self, rhs: C64) -> GFunction {
        self.scale(rhs)
    }
}

/// `(J_m f)(g) = Δ(g)^{-1/2} m(g, g⁻¹) conj(f(g⁻¹))`.
pub fn conj_jm(f: &GFunction, m: &Multiplier) -> Result<GFunction> {
    let c = f.carrier();
    let n = c.order();
    if m.order() != n {
        return Err(Error::DimMismatch { expected: n, got: m.order() });
    }
    let mut values = CVec::zeros(n);
    for g in 0..n {
        let gi = c
            .inv(g)
            .ok_or_else(|| Error::Unsupported("inverse leaves the grid".into()))?;
        values[g] = m.get(g, gi) * f.values()[gi].conj() / c.modular(g).sqrt();
    }
    GFunction::new(c.clone(), values)
}
