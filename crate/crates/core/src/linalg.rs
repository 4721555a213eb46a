//! Dense complex linear algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// `exp(2πi k / n)` with `k` reduced mod `n` first, so equal residues give bit-equal phases.
pub fn root_of_unity(k: i64, n: usize) -> C64 {
    let n = n as i64;
    let k = k.rem_euclid(n);
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

/// Neumaier-compensated accumulator, applied to the real and imaginary parts separately.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: C64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

pub fn compensated_sum<I: IntoIterator<Item = C64>>(it: I) -> C64 {
    let mut s = CompensatedSum::new();
    for z in it {
        s.add(z);
    }
    s.value()
}

/// `Σ conj(a_ij) b_ij`, i.e. `tr(a* b)`.
pub fn frobenius_dot(a: &CMat, b: &CMat) -> C64 {
    compensated_sum(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y))
}

pub fn vdot(a: &CVec, b: &CVec) -> C64 {
    compensated_sum(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn max_abs_diff_vec(a: &CVec, b: &CVec) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn rank(m: &CMat, tol: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > tol).count()
}

/// Dimension of the null space of `m`, counting singular values `<= tol` and missing rows.
pub fn nullity(m: &CMat, tol: f64) -> usize {
    m.ncols() - rank(m, tol)
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &CMat::identity(n, n))
}

/// Row-major Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Row-major vectorization: entry `(i, j)` lands at `i * ncols + j`.
pub fn vec_row_major(a: &CMat) -> CVec {
    CVec::from_iterator(a.len(), a.transpose().iter().copied())
}

pub fn unvec_row_major(v: &CVec, dim: usize) -> CMat {
    CMat::from_row_slice(dim, dim, v.as_slice())
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a named consumer, so results do not depend on execution order.
pub fn derived_rng(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn random_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_cvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| random_c64(rng))
}

pub fn random_cmat<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_c64(rng))
}

pub fn random_unit_cvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    let v = random_cvec(rng, n);
    let norm = v.norm();
    v / C64::from(norm)
}

/// Random matrix rescaled to operator norm `norm`.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> CMat {
    let k = random_cmat(rng, n, n);
    let s = op_norm(&k);
    k * C64::from(norm / s)
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let qr = random_cmat(rng, n, n).qr();
    qr.q()
}

/// Modified Gram–Schmidt under a positive diagonal weight; vectors that collapse are dropped.
pub fn gram_schmidt(vectors: &[CVec], weights: Option<&[f64]>) -> Vec<CVec> {
    let dot = |a: &CVec, b: &CVec| -> C64 {
        match weights {
            Some(w) => compensated_sum(
                a.iter()
                    .zip(b.iter())
                    .zip(w.iter())
                    .map(|((x, y), &wi)| x.conj() * y * wi),
            ),
            None => vdot(a, b),
        }
    };
    let mut out: Vec<CVec> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut u = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &u);
                u -= q * c;
            }
        }
        let n = dot(&u, &u).re.sqrt();
        if n > 1e-13 {
            out.push(u / C64::from(n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive_on_cancellation() {
        let xs = [1e16, 1.0, -1e16, 1.0].map(C64::from);
        assert_eq!(compensated_sum(xs).re, 2.0);
    }

    #[test]
    fn row_major_roundtrip() {
        let a = CMat::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64));
        let v = vec_row_major(&a);
        assert_eq!(v[1], C64::new(0.0, 1.0));
        assert_eq!(unvec_row_major(&v, 3), a);
    }

    #[test]
    fn kron_is_row_major_superoperator() {
        let mut rng = rng_from_seed(1);
        let u = random_unitary(&mut rng, 3);
        let a = random_cmat(&mut rng, 3, 3);
        let lhs = vec_row_major(&(&u * &a * u.adjoint()));
        let rhs = kron(&u, &u.map(|z| z.conj())) * vec_row_major(&a);
        assert!(max_abs_diff_vec(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn roots_of_unity_are_periodic() {
        assert_eq!(root_of_unity(7, 5), root_of_unity(2, 5));
        assert_eq!(root_of_unity(-3, 5), root_of_unity(2, 5));
    }
}
