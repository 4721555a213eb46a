//! The Wigner map `S_U: B₂(H) → L²(G)`, its adjoint (the Weyl map) and the range projection.

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::Carrier;
use crate::hilbert::{conj_jm, op_conj_j, GFunction, HSOperator};
use crate::linalg::{
    max_abs_diff, max_abs_diff_vec, random_cmat, unvec_row_major, vec_row_major, CMat, CVec, C64,
};
use crate::rep::{commutant_dimension, left_regular_m, two_sided_tm, uvee_apply, DufloMoore, ProjRep};

/// The dense `|G| × dim²` matrix of `S_U` in the row-major basis `|e_i⟩⟨e_j| ↦ column i·dim + j`.
#[derive(Clone, Debug)]
pub struct WignerMap {
    rep: ProjRep,
    dm: DufloMoore,
    matrix: CMat,
}

pub const VECTORIZATION: &str = "row-major: column i*dim+j holds the image of |e_i><e_j|";

/// Builds `S(A)(g) = tr((U(g) D⁻¹)* A)`, so the column of `|e_i⟩⟨e_j|` is `⟨U(g)D⁻¹e_j, e_i⟩`.
pub fn build_wigner(rep: &ProjRep, dm: &DufloMoore) -> Result<WignerMap> {
    if dm.dim() != rep.dim() {
        return Err(Error::DimMismatch { expected: rep.dim(), got: dm.dim() });
    }
    if rep.carrier().finite().is_some() {
        let c = commutant_dimension(rep);
        if c != 1 {
            return Err(Error::Reducible(c));
        }
    }
    Ok(build_wigner_unchecked(rep, dm))
}

/// As `build_wigner` without the irreducibility test (quadrature carriers).
pub fn build_wigner_unchecked(rep: &ProjRep, dm: &DufloMoore) -> WignerMap {
    let d = rep.dim();
    let dinv = dm.inv();
    let mut matrix = CMat::zeros(rep.order(), d * d);
    for g in 0..rep.order() {
        let b = rep.u(g) * &dinv;
        for i in 0..d {
            for j in 0..d {
                matrix[(g, i * d + j)] = b[(i, j)].conj();
            }
        }
    }
    WignerMap { rep: rep.clone(), dm: dm.clone(), matrix }
}

impl WignerMap {
    pub fn rep(&self) -> &ProjRep {
        &self.rep
    }

    pub fn dm(&self) -> &DufloMoore {
        &self.dm
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn carrier(&self) -> &Carrier {
        self.rep.carrier()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn order(&self) -> usize {
        self.rep.order()
    }

    fn weighted(&self, f: &GFunction) -> CVec {
        let w = self.carrier().weights();
        CVec::from_fn(f.len(), |g, _| f.values()[g] * w[g])
    }

    fn check(&self, f: &GFunction) -> Result<()> {
        if self.carrier().same_as(f.carrier()) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Dequantization `S(A)`.
    pub fn apply(&self, a: &HSOperator) -> Result<GFunction> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: a.nrows() });
        }
        GFunction::new(self.carrier().clone(), &self.matrix * vec_row_major(a))
    }

    /// Quantization `S* f`, the L²-adjoint of the stored matrix.
    pub fn weyl_map(&self, f: &GFunction) -> Result<HSOperator> {
        self.check(f)?;
        let v = self.matrix.adjoint() * self.weighted(f);
        Ok(unvec_row_major(&v, self.dim()))
    }

    /// `Σ_g w(g) f(g) U(g) D⁻¹`; equals `d⁻¹ Σ w f U` when `D = d I`.
    pub fn weyl_map_sum(&self, f: &GFunction) -> Result<HSOperator> {
        self.check(f)?;
        let d = self.dim();
        let mut acc = CMat::zeros(d, d);
        for g in 0..self.order() {
            acc += self.rep.u(g) * (f.values()[g] * self.carrier().weight(g));
        }
        Ok(acc * self.dm.inv())
    }

    /// `P = S S*`, acting on value vectors.
    pub fn range_projection(&self) -> CMat {
        let w = CMat::from_diagonal(&CVec::from_iterator(
            self.order(),
            self.carrier().weights().iter().map(|&x| C64::from(x)),
        ));
        &self.matrix * self.matrix.adjoint() * w
    }

    pub fn project(&self, f: &GFunction) -> Result<GFunction> {
        let a = self.weyl_map(f)?;
        self.apply(&a)
    }

    /// `(I − P) f`.
    pub fn project_complement(&self, f: &GFunction) -> Result<GFunction> {
        Ok(f - &self.project(f)?)
    }
}

/// Maximum deviations of `S*S = I`, `P² = P` and the weighted self-adjointness of `P`.
#[derive(Clone, Debug)]
pub struct IsometryReport {
    pub isometry: f64,
    pub idempotence: f64,
    pub self_adjointness: f64,
    pub rank: usize,
    pub trace: f64,
}

pub fn isometry_report(w: &WignerMap) -> IsometryReport {
    let n = w.order();
    let d2 = w.dim() * w.dim();
    let wt = CMat::from_diagonal(&CVec::from_iterator(
        n,
        w.carrier().weights().iter().map(|&x| C64::from(x)),
    ));
    let sts = w.matrix.adjoint() * &wt * &w.matrix;
    let p = w.range_projection();
    let p2 = &p * &p;
    let lhs = &wt * &p;
    let rhs = p.adjoint() * &wt;
    IsometryReport {
        isometry: max_abs_diff(&sts, &CMat::identity(d2, d2)),
        idempotence: max_abs_diff(&p2, &p),
        self_adjointness: max_abs_diff(&lhs, &rhs),
        rank: crate::linalg::rank(&p, 1e-8),
        trace: p.trace().re,
    }
}

/// Deviations of `S U∨U(g) = T_m(g) S`, `S(A*) = J_m S(A)` and `S(U(g) A) = R_m(g) S(A)`.
#[derive(Clone, Debug)]
pub struct IntertwiningReport {
    pub two_sided: f64,
    pub involution: f64,
    pub left_regular: f64,
}

impl IntertwiningReport {
    pub fn max(&self) -> f64 {
        self.two_sided.max(self.involution).max(self.left_regular)
    }
}

pub fn check_intertwinings<R: Rng + ?Sized>(
    w: &WignerMap,
    samples: usize,
    rng: &mut R,
) -> Result<IntertwiningReport> {
    let d = w.dim();
    let m = w.rep.multiplier();
    let c = w.carrier();
    let ops: Vec<CMat> = (0..samples).map(|_| random_cmat(rng, d, d)).collect();
    let mut r = IntertwiningReport { two_sided: 0.0, involution: 0.0, left_regular: 0.0 };
    for a in &ops {
        let sa = w.apply(a)?;
        let j = conj_jm(&sa, m)?;
        r.involution = r.involution.max(max_abs_diff_vec(w.apply(&op_conj_j(a))?.values(), j.values()));
        for g in 0..w.order() {
            let t = two_sided_tm(c, m, g)?;
            let lhs = w.apply(&uvee_apply(&w.rep, g, a))?;
            r.two_sided = r.two_sided.max(max_abs_diff_vec(lhs.values(), &(&t * sa.values())));
            let rm = left_regular_m(c, m, g)?;
            let lhs = w.apply(&(w.rep.u(g) * a))?;
            r.left_regular = r.left_regular.max(max_abs_diff_vec(lhs.values(), &(&rm * sa.values())));
        }
    }
    Ok(r)
}

/// Largest `|⟨S_U A, S_V B⟩|` over matrix units; zero for inequivalent irreps.
pub fn range_overlap(a: &WignerMap, b: &WignerMap) -> Result<f64> {
    if !a.carrier().same_as(b.carrier()) {
        return Err(Error::GroupMismatch);
    }
    let wt = CMat::from_diagonal(&CVec::from_iterator(
        a.order(),
        a.carrier().weights().iter().map(|&x| C64::from(x)),
    ));
    let g = a.matrix.adjoint() * wt * &b.matrix;
    Ok(crate::linalg::max_abs(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{builtin_dual, builtin_rep};
    use crate::group::FiniteGroup;
    use crate::linalg::{random_cvec, rng_from_seed, ONE};
    use crate::weyl::{build_weyl_system, Ordering};

    fn s3_wigner() -> WignerMap {
        let u = builtin_rep("s3_std").unwrap();
        build_wigner(&u, &DufloMoore::scalar(0.5f64.sqrt(), 2)).unwrap()
    }

    #[test]
    fn trivial_group_wigner_is_identity() {
        let c: Carrier = FiniteGroup::cyclic_product_with_mass(1, 1.0).unwrap().into();
        let u = ProjRep::trivial(c, 1).unwrap();
        let w = build_wigner(&u, &DufloMoore::scalar(1.0, 1)).unwrap();
        assert_eq!(w.matrix()[(0, 0)], ONE);
    }

    #[test]
    fn pauli_trace_of_identity() {
        let ws = build_weyl_system(2, Ordering::Standard).unwrap();
        let w = build_wigner(&ws.rep, &DufloMoore::scalar(1.0, 2)).unwrap();
        let s = w.apply(&CMat::identity(2, 2)).unwrap();
        assert!((s.values()[0] - C64::from(2.0)).norm() < 1e-15);
        for g in 1..4 {
            assert!(s.values()[g].norm() < 1e-15);
        }
    }

    #[test]
    fn unimodular_shortcut_matches_columns() {
        let w = s3_wigner();
        let mut rng = rng_from_seed(1);
        let a = random_cmat(&mut rng, 2, 2);
        let s = w.apply(&a).unwrap();
        let d = 0.5f64.sqrt();
        for g in 0..6 {
            let t = (w.rep().u(g).adjoint() * &a).trace() / d;
            assert!((s.values()[g] - t).norm() < 1e-12);
        }
    }

    #[test]
    fn isometry_on_s3() {
        let w = s3_wigner();
        let mut rng = rng_from_seed(2);
        for _ in 0..20 {
            let a = random_cmat(&mut rng, 2, 2);
            assert!((w.apply(&a).unwrap().norm() - a.norm()).abs() < 1e-10);
        }
        let r = isometry_report(&w);
        assert!(r.isometry < 1e-10 && r.idempotence < 1e-10 && r.self_adjointness < 1e-10);
        assert_eq!(r.rank, 4);
        assert!((r.trace - 4.0).abs() < 1e-10);
    }

    #[test]
    fn weyl_map_roundtrip_and_complement() {
        let w = s3_wigner();
        let mut rng = rng_from_seed(3);
        let a = random_cmat(&mut rng, 2, 2);
        let back = w.weyl_map(&w.apply(&a).unwrap()).unwrap();
        assert!(max_abs_diff(&back, &a) < 1e-12);
        let f = GFunction::new(w.carrier().clone(), random_cvec(&mut rng, 6)).unwrap();
        let perp = w.project_complement(&f).unwrap();
        assert!(crate::linalg::max_abs(&w.weyl_map(&perp).unwrap()) < 1e-12);
        let sum = w.weyl_map_sum(&f).unwrap();
        assert!(max_abs_diff(&sum, &w.weyl_map(&f).unwrap()) < 1e-12);
    }

    #[test]
    fn weyl_map_of_delta_at_identity() {
        let w = s3_wigner();
        let delta = GFunction::delta(w.carrier(), 0);
        let a = w.weyl_map(&delta).unwrap();
        let expected = CMat::identity(2, 2) * C64::from(2f64.sqrt() / 6.0);
        assert!(max_abs_diff(&a, &expected) < 1e-14);
    }

    #[test]
    fn weyl_range_is_everything() {
        for n in 2..=5 {
            let ord = if n % 2 == 1 { Ordering::Symmetric } else { Ordering::Standard };
            let ws = build_weyl_system(n, ord).unwrap();
            let w = build_wigner(&ws.rep, &DufloMoore::scalar(1.0, n)).unwrap();
            let p = w.range_projection();
            assert!(max_abs_diff(&p, &CMat::identity(n * n, n * n)) < 1e-12);
        }
    }

    #[test]
    fn s3_range_is_peter_weyl_block() {
        let w = s3_wigner();
        let u = w.rep();
        // Block projector from orthonormal coefficients √δ · u_ij.
        let d = 2;
        let mut cols = Vec::new();
        for i in 0..d {
            for j in 0..d {
                cols.push(CVec::from_fn(6, |g, _| u.u(g)[(i, j)] * C64::from(2f64.sqrt())));
            }
        }
        let mut block = CMat::zeros(6, 6);
        for c in &cols {
            block += c * c.adjoint() * C64::from(1.0 / 6.0);
        }
        assert!(max_abs_diff(&block, &w.range_projection()) < 1e-12);
    }

    #[test]
    fn intertwinings_hold() {
        let ws = build_weyl_system(3, Ordering::Symmetric).unwrap();
        let w = build_wigner(&ws.rep, &DufloMoore::scalar(1.0, 3)).unwrap();
        let mut rng = rng_from_seed(4);
        assert!(check_intertwinings(&w, 5, &mut rng).unwrap().max() < 1e-10);
        let w = s3_wigner();
        assert!(check_intertwinings(&w, 5, &mut rng).unwrap().max() < 1e-10);
    }

    #[test]
    fn inequivalent_ranges_are_orthogonal_and_complete() {
        for g in ["s3", "d4"] {
            let dual = builtin_dual(g).unwrap();
            let maps: Vec<WignerMap> = dual
                .iter()
                .map(|u| {
                    let d = (u.dim() as f64).powf(-0.5);
                    build_wigner(u, &DufloMoore::scalar(d, u.dim())).unwrap()
                })
                .collect();
            let n = maps[0].order();
            let mut total = CMat::zeros(n, n);
            for (i, a) in maps.iter().enumerate() {
                total += a.range_projection();
                for b in &maps[i + 1..] {
                    assert!(range_overlap(a, b).unwrap() < 1e-10);
                }
            }
            assert!(max_abs_diff(&total, &CMat::identity(n, n)) < 1e-10);
        }
    }

    #[test]
    fn reducible_rep_is_refused() {
        let u = builtin_rep("s3_std").unwrap();
        let uu = u.direct_sum(&u).unwrap();
        assert!(matches!(build_wigner(&uu, &DufloMoore::scalar(1.0, 4)), Err(Error::Reducible(4))));
    }
}
