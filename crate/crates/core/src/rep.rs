//! Projective unitary representations and the operators built from them.

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Carrier, FiniteGroup, Multiplier};
use crate::hilbert::GFunction;
use crate::linalg::{
    kron, max_abs_diff, nullity, random_cvec, unitarity_defect, vdot, CMat, CVec, C64, ONE,
};
use crate::tolerances::COMMUTANT_SVD_THRESHOLD;

/// `g ↦ U(g)` on a `dim`-dimensional H with `U(gh) = m(g,h) U(g) U(h)`.
#[derive(Clone, Debug)]
pub struct ProjRep {
    carrier: Carrier,
    dim: usize,
    matrices: Vec<CMat>,
    multiplier: Multiplier,
    closed_form_dm: Option<Vec<f64>>,
}

impl ProjRep {
    pub fn new(carrier: Carrier, matrices: Vec<CMat>, multiplier: Multiplier) -> Result<Self> {
        let n = carrier.order();
        if matrices.len() != n {
            return Err(Error::DimMismatch { expected: n, got: matrices.len() });
        }
        if multiplier.order() != n {
            return Err(Error::DimMismatch { expected: n, got: multiplier.order() });
        }
        let dim = matrices.first().map_or(0, |m| m.nrows());
        if dim == 0 {
            return Err(Error::InvalidArgument("representation space is empty".into()));
        }
        if let Some(m) = matrices.iter().find(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::DimMismatch { expected: dim, got: m.ncols() });
        }
        Ok(Self { carrier, dim, matrices, multiplier, closed_form_dm: None })
    }

    /// Attaches a Duflo–Moore diagonal known in closed form (non-unimodular carriers).
    pub fn with_closed_form_duflo_moore(mut self, diag: Vec<f64>) -> Result<Self> {
        if diag.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: diag.len() });
        }
        self.closed_form_dm = Some(diag);
        Ok(self)
    }

    /// The trivial representation `U(g) = I` in dimension `dim`.
    pub fn trivial(carrier: Carrier, dim: usize) -> Result<Self> {
        let n = carrier.order();
        Self::new(carrier, vec![CMat::identity(dim, dim); n], Multiplier::trivial(n))
    }

    /// `U ⊕ V` on the same carrier and multiplier.
    pub fn direct_sum(&self, other: &ProjRep) -> Result<Self> {
        if !self.carrier.same_as(&other.carrier) {
            return Err(Error::GroupMismatch);
        }
        let (a, b) = (self.dim, other.dim);
        let mats = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(u, v)| {
                let mut m = CMat::zeros(a + b, a + b);
                m.view_mut((0, 0), (a, a)).copy_from(u);
                m.view_mut((a, a), (b, b)).copy_from(v);
                m
            })
            .collect();
        Self::new(self.carrier.clone(), mats, self.multiplier.clone())
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn u(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn multiplier(&self) -> &Multiplier {
        &self.multiplier
    }

    pub fn finite_group(&self) -> Result<&FiniteGroup> {
        self.carrier
            .finite()
            .map(|g| g.as_ref())
            .ok_or_else(|| Error::Unsupported("needs a finite group carrier".into()))
    }

    /// `C_U(g) = tr U(g)`.
    pub fn character(&self, g: usize) -> C64 {
        self.matrices[g].trace()
    }
}

/// Maximum violation of each representation invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct RepReport {
    pub unitarity: f64,
    pub identity: f64,
    pub multiplier_relation: f64,
    pub pairs_checked: usize,
}

impl RepReport {
    pub fn max_violation(&self) -> f64 {
        self.unitarity.max(self.identity).max(self.multiplier_relation)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }
}

/// Checks unitarity, `U(e) = I` and `U(gh) = m(g,h) U(g) U(h)` over every pair with a known product.
pub fn validate_projrep(u: &ProjRep) -> RepReport {
    let n = u.order();
    let unitarity = u.matrices.iter().map(unitarity_defect).fold(0.0, f64::max);
    let identity = u
        .carrier
        .identity()
        .map_or(0.0, |e| max_abs_diff(u.u(e), &CMat::identity(u.dim, u.dim)));
    let mut rel: f64 = 0.0;
    let mut pairs = 0;
    for g in 0..n {
        for h in 0..n {
            if let Some(gh) = u.carrier.mul(g, h) {
                let rhs = u.u(g) * u.u(h) * u.multiplier.get(g, h);
                rel = rel.max(max_abs_diff(u.u(gh), &rhs));
                pairs += 1;
            }
        }
    }
    RepReport { unitarity, identity, multiplier_relation: rel, pairs_checked: pairs }
}

/// `c_{ψ,φ}(g) = ⟨U(g)ψ, φ⟩`.
pub fn coefficient(u: &ProjRep, psi: &CVec, phi: &CVec) -> Result<GFunction> {
    if psi.len() != u.dim || phi.len() != u.dim {
        return Err(Error::DimMismatch { expected: u.dim, got: psi.len().max(phi.len()) });
    }
    let values = CVec::from_fn(u.order(), |g, _| vdot(&(u.u(g) * psi), phi));
    GFunction::new(u.carrier.clone(), values)
}

/// The positive operator `D = B diag(d) B*` of the orthogonality relations.
#[derive(Clone, Debug)]
pub struct DufloMoore {
    pub diag: Vec<f64>,
    pub basis: Option<CMat>,
}

impl DufloMoore {
    pub fn scalar(d: f64, dim: usize) -> Self {
        Self { diag: vec![d; dim], basis: None }
    }

    pub fn diagonal(diag: Vec<f64>) -> Self {
        Self { diag, basis: None }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `Some(d)` when `D = d I`.
    pub fn as_scalar(&self) -> Option<f64> {
        let d = *self.diag.first()?;
        self.diag.iter().all(|&x| x == d).then_some(d)
    }

    /// `D^p` as a dense matrix.
    pub fn power(&self, p: f64) -> CMat {
        let d = CMat::from_diagonal(&CVec::from_iterator(
            self.diag.len(),
            self.diag.iter().map(|&x| C64::from(x.powf(p))),
        ));
        match &self.basis {
            None => d,
            Some(b) => b * d * b.adjoint(),
        }
    }

    pub fn op(&self) -> CMat {
        self.power(1.0)
    }

    pub fn inv(&self) -> CMat {
        self.power(-1.0)
    }

    pub fn inv2(&self) -> CMat {
        self.power(-2.0)
    }
}

/// Outcome of the probe-pair estimate of `d_U`.
#[derive(Clone, Debug)]
pub struct DufloMooreEstimate {
    pub dm: DufloMoore,
    pub probes: Vec<f64>,
    pub spread: f64,
}

/// Estimates `d_U` from `⟨c, c⟩ = ‖φ‖² ‖Dψ‖²` over three random probe pairs.
pub fn duflo_moore_from_orthogonality<R: Rng + ?Sized>(
    u: &ProjRep,
    rng: &mut R,
) -> Result<DufloMooreEstimate> {
    if let Some(diag) = &u.closed_form_dm {
        return Ok(DufloMooreEstimate { dm: DufloMoore::diagonal(diag.clone()), probes: vec![], spread: 0.0 });
    }
    if !u.carrier.is_unimodular() {
        return Err(Error::Unsupported(
            "non-unimodular carrier without a closed-form Duflo–Moore operator".into(),
        ));
    }
    let c = commutant_dimension(u);
    if c != 1 {
        return Err(Error::Reducible(c));
    }
    let mut probes = Vec::with_capacity(3);
    for _ in 0..3 {
        let psi = random_cvec(rng, u.dim);
        let phi = random_cvec(rng, u.dim);
        let cf = coefficient(u, &psi, &phi)?;
        let lhs = cf.norm().powi(2);
        probes.push((lhs / (psi.norm_squared() * phi.norm_squared())).sqrt());
    }
    let mean = probes.iter().sum::<f64>() / 3.0;
    let spread = probes.iter().map(|p| (p - mean).abs()).fold(0.0, f64::max) / mean;
    if spread > crate::tolerances::DEFAULT {
        return Err(Error::NotSquareIntegrable(spread));
    }
    Ok(DufloMooreEstimate { dm: DufloMoore::scalar(mean, u.dim), probes, spread })
}

/// `max |⟨c_{ψ1,φ1}, c_{ψ2,φ2}⟩ − ⟨φ1,φ2⟩⟨Dψ2,Dψ1⟩|` over all basis-vector quadruples.
pub fn orthogonality_deviation(u: &ProjRep, dm: &DufloMoore) -> Result<f64> {
    let d = u.dim;
    let dop = dm.op();
    let basis: Vec<CVec> = (0..d).map(|i| CVec::from_fn(d, |j, _| C64::from((i == j) as u8 as f64))).collect();
    let mut coeffs = Vec::with_capacity(d * d);
    for psi in &basis {
        for phi in &basis {
            coeffs.push(coefficient(u, psi, phi)?);
        }
    }
    let mut worst: f64 = 0.0;
    for (a, psi1) in basis.iter().enumerate() {
        for (b, phi1) in basis.iter().enumerate() {
            for (c, psi2) in basis.iter().enumerate() {
                for (e, phi2) in basis.iter().enumerate() {
                    let lhs = coeffs[a * d + b].inner(&coeffs[c * d + e])?;
                    let rhs = vdot(phi1, phi2) * vdot(&(&dop * psi2), &(&dop * psi1));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// `φ ↦ ‖Dψ‖⁻¹ c_{ψ,φ}`, stored as a `|G| × dim` matrix.
#[derive(Clone, Debug)]
pub struct WaveletTransform {
    carrier: Carrier,
    matrix: CMat,
}

pub fn wavelet_transform(u: &ProjRep, dm: &DufloMoore, psi: &CVec) -> Result<WaveletTransform> {
    if psi.len() != u.dim {
        return Err(Error::DimMismatch { expected: u.dim, got: psi.len() });
    }
    let scale = (dm.op() * psi).norm();
    if scale == 0.0 {
        return Err(Error::InvalidArgument("zero analyzing vector".into()));
    }
    let mut matrix = CMat::zeros(u.order(), u.dim);
    for g in 0..u.order() {
        let v = u.u(g) * psi;
        for j in 0..u.dim {
            matrix[(g, j)] = v[j].conj() / scale;
        }
    }
    Ok(WaveletTransform { carrier: u.carrier.clone(), matrix })
}

impl WaveletTransform {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, phi: &CVec) -> Result<GFunction> {
        GFunction::new(self.carrier.clone(), &self.matrix * phi)
    }

    /// The L²-adjoint `W* f = Σ_g w(g) f(g) conj(row_g)`.
    pub fn adjoint(&self, f: &GFunction) -> CVec {
        let wf = CVec::from_fn(f.len(), |g, _| f.values()[g] * self.carrier.weight(g));
        self.matrix.adjoint() * wf
    }

    /// `W* W` as a `dim × dim` matrix.
    pub fn gram(&self) -> CMat {
        let w = CMat::from_diagonal(&CVec::from_iterator(
            self.matrix.nrows(),
            self.carrier.weights().iter().map(|&x| C64::from(x)),
        ));
        self.matrix.adjoint() * w * &self.matrix
    }
}

fn need_finite(c: &Carrier) -> Result<&FiniteGroup> {
    c.finite()
        .map(|g| g.as_ref())
        .ok_or_else(|| Error::Unsupported("needs a finite group carrier".into()))
}

/// `(R_m(g) f)(g′) = m(g,g⁻¹)* m(g⁻¹,g′) f(g⁻¹g′)`.
pub fn left_regular_m(carrier: &Carrier, m: &Multiplier, g: usize) -> Result<CMat> {
    let grp = need_finite(carrier)?;
    let n = grp.order();
    let gi = grp.inv(g);
    let mut r = CMat::zeros(n, n);
    for gp in 0..n {
        r[(gp, grp.mul(gi, gp))] = m.get(g, gi).conj() * m.get(gi, gp);
    }
    Ok(r)
}

/// `↔m(g,g′) = m(g, g⁻¹g′)* m(g⁻¹g′, g)`.
pub fn two_sided_phase(grp: &FiniteGroup, m: &Multiplier, g: usize, gp: usize) -> C64 {
    let x = grp.mul(grp.inv(g), gp);
    m.get(g, x).conj() * m.get(x, g)
}

/// `(T_m(g) f)(g′) = Δ(g)^{1/2} ↔m(g,g′) f(g⁻¹g′g)`.
pub fn two_sided_tm(carrier: &Carrier, m: &Multiplier, g: usize) -> Result<CMat> {
    let grp = need_finite(carrier)?;
    let n = grp.order();
    let gi = grp.inv(g);
    let s = grp.modular(g).sqrt();
    let mut t = CMat::zeros(n, n);
    for gp in 0..n {
        let src = grp.mul(grp.mul(gi, gp), g);
        t[(gp, src)] = two_sided_phase(grp, m, g, gp) * s;
    }
    Ok(t)
}

/// `U∨U(g): A ↦ U(g) A U(g)*` as a `dim² × dim²` matrix in row-major vectorization.
pub fn uvee(u: &ProjRep, g: usize) -> CMat {
    let ug = u.u(g);
    kron(ug, &ug.map(|z| z.conj()))
}

pub fn uvee_apply(u: &ProjRep, g: usize, a: &CMat) -> CMat {
    u.u(g) * a * u.u(g).adjoint()
}

/// Dimension of `{X : U(g) X = X U(g) ∀g}`, from the SVD of the stacked linear system.
pub fn commutant_dimension(u: &ProjRep) -> usize {
    let d = u.dim;
    let eye = CMat::identity(d, d);
    let blocks: Vec<CMat> = u
        .matrices()
        .iter()
        .map(|m| kron(m, &eye) - kron(&eye, &m.transpose()))
        .collect();
    let mut stacked = CMat::zeros(blocks.len() * d * d, d * d);
    for (i, b) in blocks.iter().enumerate() {
        stacked.view_mut((i * d * d, 0), (d * d, d * d)).copy_from(b);
    }
    nullity(&stacked, COMMUTANT_SVD_THRESHOLD)
}

/// `Σ_U δ(U)² = |G|` check for a claimed unitary dual.
pub fn peter_weyl_multiplicity(group: &FiniteGroup, dual: &[ProjRep]) -> Result<()> {
    let got: usize = dual.iter().map(|u| u.dim().pow(2)).sum();
    if got != group.order() {
        return Err(Error::IncompleteDual { got, order: group.order() });
    }
    Ok(())
}

/// Largest deviation of `U(g) D − Δ(g)^{1/2} D U(g)` and of its inverse form.
pub fn semi_invariance_deviation(u: &ProjRep, dm: &DufloMoore) -> f64 {
    let d = dm.op();
    let di = dm.inv();
    let mut worst: f64 = 0.0;
    for g in 0..u.order() {
        let s = u.carrier().modular(g).sqrt();
        let a = max_abs_diff(&(u.u(g) * &d), &(&d * u.u(g) * C64::from(s)));
        let b = max_abs_diff(&(u.u(g) * &di), &(&di * u.u(g) * C64::from(1.0 / s)));
        worst = worst.max(a).max(b);
    }
    worst
}

pub fn unit(dim: usize, i: usize) -> CVec {
    CVec::from_fn(dim, |j, _| if i == j { ONE } else { C64::from(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{builtin_group, builtin_rep};
    use crate::linalg::{max_abs_diff_vec, random_cvec, rng_from_seed};
    use crate::weyl::{build_weyl_system, Ordering};

    #[test]
    fn trivial_rep_of_s3_validates() {
        let c: Carrier = builtin_group("s3").unwrap().into();
        let u = ProjRep::trivial(c, 1).unwrap();
        assert!(validate_projrep(&u).passes(1e-12));
    }

    #[test]
    fn weyl_n4_validates_over_all_pairs() {
        let w = build_weyl_system(4, Ordering::Standard).unwrap();
        let r = validate_projrep(&w.rep);
        assert_eq!(r.pairs_checked, 256);
        assert!(r.passes(1e-12), "{r:?}");
    }

    #[test]
    fn sign_flip_breaks_multiplier_relation() {
        let u = builtin_rep("s3_std").unwrap();
        let mut mats = u.matrices().to_vec();
        mats[2] = -mats[2].clone();
        let bad = ProjRep::new(u.carrier().clone(), mats, u.multiplier().clone()).unwrap();
        let r = validate_projrep(&bad);
        assert!(r.multiplier_relation > 1.0);
        assert!(r.unitarity < 1e-12);
    }

    #[test]
    fn coefficient_at_identity_is_norm_squared() {
        let u = builtin_rep("s3_std").unwrap();
        let mut rng = rng_from_seed(1);
        let psi = random_cvec(&mut rng, 2);
        let c = coefficient(&u, &psi, &psi).unwrap();
        assert!((c.values()[0] - C64::from(psi.norm_squared())).norm() < 1e-12);
    }

    #[test]
    fn coefficient_of_trivial_rep_is_constant() {
        let c: Carrier = builtin_group("d4").unwrap().into();
        let u = ProjRep::trivial(c, 3).unwrap();
        let mut rng = rng_from_seed(2);
        let psi = random_cvec(&mut rng, 3);
        let phi = random_cvec(&mut rng, 3);
        let cf = coefficient(&u, &psi, &phi).unwrap();
        let expected = psi.dotc(&phi);
        assert!(cf.values().iter().all(|z| (z - expected).norm() < 1e-12));
    }

    #[test]
    fn pauli_coefficients_match_hand_values() {
        // U(q,p) = X^q Z^p on e₁: ⟨U e₁, e₁⟩ is 1 for (0,0), (0,1) and 0 for the shifts.
        let w = build_weyl_system(2, Ordering::Standard).unwrap();
        let e1 = unit(2, 0);
        let c = coefficient(&w.rep, &e1, &e1).unwrap();
        let expected = [1.0, 1.0, 0.0, 0.0];
        for (z, e) in c.values().iter().zip(expected) {
            assert!((z - C64::from(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn duflo_moore_of_finite_irreps() {
        let mut rng = rng_from_seed(7);
        for name in ["s3_std", "d4_std", "q8_std", "z5_chi2"] {
            let u = builtin_rep(name).unwrap();
            let est = duflo_moore_from_orthogonality(&u, &mut rng).unwrap();
            let expected = (u.dim() as f64).powf(-0.5);
            let got = est.dm.as_scalar().unwrap();
            assert!(((got - expected) / expected).abs() < 1e-10, "{name}: {got}");
        }
    }

    #[test]
    fn duflo_moore_of_weyl_is_one() {
        let mut rng = rng_from_seed(8);
        let w = build_weyl_system(5, Ordering::Symmetric).unwrap();
        let est = duflo_moore_from_orthogonality(&w.rep, &mut rng).unwrap();
        assert!((est.dm.as_scalar().unwrap() - 1.0).abs() < 1e-10);
        assert!(est.spread < 1e-10);
    }

    #[test]
    fn duflo_moore_trivial_group() {
        let mut rng = rng_from_seed(9);
        let c: Carrier = FiniteGroup::cyclic_product_with_mass(1, 1.0).unwrap().into();
        let u = ProjRep::trivial(c, 1).unwrap();
        let est = duflo_moore_from_orthogonality(&u, &mut rng).unwrap();
        assert!((est.dm.as_scalar().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reducible_rep_is_refused() {
        let u = builtin_rep("s3_std").unwrap();
        let uu = u.direct_sum(&u).unwrap();
        let mut rng = rng_from_seed(10);
        assert!(matches!(
            duflo_moore_from_orthogonality(&uu, &mut rng),
            Err(Error::Reducible(4))
        ));
    }

    #[test]
    fn commutant_dimensions() {
        let w = build_weyl_system(5, Ordering::Symmetric).unwrap();
        assert_eq!(commutant_dimension(&w.rep), 1);
        let u = builtin_rep("s3_std").unwrap();
        assert_eq!(commutant_dimension(&u.direct_sum(&u).unwrap()), 4);
        let c: Carrier = builtin_group("s3").unwrap().into();
        assert_eq!(commutant_dimension(&ProjRep::trivial(c, 2).unwrap()), 4);
    }

    #[test]
    fn wavelet_transform_is_an_isometry_with_left_inverse() {
        let u = builtin_rep("s3_std").unwrap();
        let dm = DufloMoore::scalar(0.5f64.sqrt(), 2);
        let mut rng = rng_from_seed(11);
        let psi = random_cvec(&mut rng, 2);
        let w = wavelet_transform(&u, &dm, &psi).unwrap();
        for _ in 0..5 {
            let phi = random_cvec(&mut rng, 2);
            let wf = w.apply(&phi).unwrap();
            assert!((wf.norm() - phi.norm()).abs() < 1e-10);
            assert!(max_abs_diff_vec(&w.adjoint(&wf), &phi) < 1e-10);
        }
        assert!(max_abs_diff(&w.gram(), &CMat::identity(2, 2)) < 1e-10);
        let zero = w.apply(&CVec::zeros(2)).unwrap();
        assert_eq!(zero.norm(), 0.0);
        assert!(wavelet_transform(&u, &dm, &CVec::zeros(2)).is_err());
    }

    #[test]
    fn left_regular_intertwines_wavelet_transform() {
        let w = build_weyl_system(3, Ordering::Symmetric).unwrap();
        let dm = DufloMoore::scalar(1.0, 3);
        let mut rng = rng_from_seed(12);
        let psi = random_cvec(&mut rng, 3);
        let wt = wavelet_transform(&w.rep, &dm, &psi).unwrap();
        for g in 0..9 {
            let r = left_regular_m(w.rep.carrier(), w.rep.multiplier(), g).unwrap();
            let lhs = wt.matrix() * w.rep.u(g);
            let rhs = &r * wt.matrix();
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }
        let r0 = left_regular_m(w.rep.carrier(), w.rep.multiplier(), 0).unwrap();
        assert!(max_abs_diff(&r0, &CMat::identity(9, 9)) < 1e-15);
    }

    #[test]
    fn two_sided_is_trivial_on_abelian_untwisted() {
        let c: Carrier = builtin_group("z4").unwrap().into();
        for g in 0..4 {
            let t = two_sided_tm(&c, &Multiplier::trivial(4), g).unwrap();
            assert!(max_abs_diff(&t, &CMat::identity(4, 4)) < 1e-15);
        }
    }

    #[test]
    fn two_sided_is_a_representation_on_s3() {
        let g = builtin_group("s3").unwrap();
        let c: Carrier = g.clone().into();
        let m = Multiplier::trivial(6);
        for a in 0..6 {
            for b in 0..6 {
                let lhs = two_sided_tm(&c, &m, a).unwrap() * two_sided_tm(&c, &m, b).unwrap();
                let rhs = two_sided_tm(&c, &m, g.mul(a, b)).unwrap();
                assert!(max_abs_diff(&lhs, &rhs) < 1e-15);
            }
        }
    }

    #[test]
    fn two_sided_is_unitary_for_weyl_n4() {
        let w = build_weyl_system(4, Ordering::Standard).unwrap();
        for g in 0..16 {
            let t = two_sided_tm(w.rep.carrier(), w.rep.multiplier(), g).unwrap();
            assert!(unitarity_defect(&t) < 1e-12);
        }
    }

    #[test]
    fn uvee_is_a_true_representation() {
        let w = build_weyl_system(3, Ordering::Symmetric).unwrap();
        let grp = w.rep.finite_group().unwrap();
        let mut rng = rng_from_seed(13);
        let a = crate::linalg::random_cmat(&mut rng, 3, 3);
        assert!(max_abs_diff(&uvee(&w.rep, 0), &CMat::identity(9, 9)) < 1e-15);
        for g in 0..9 {
            assert!((uvee_apply(&w.rep, g, &a).norm() - a.norm()).abs() < 1e-12);
            for h in 0..9 {
                let lhs = uvee(&w.rep, g) * uvee(&w.rep, h);
                let rhs = uvee(&w.rep, grp.mul(g, h));
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonality_relations_on_finite_irreps() {
        for name in ["s3_std", "q8_std"] {
            let u = builtin_rep(name).unwrap();
            let dm = DufloMoore::scalar((u.dim() as f64).powf(-0.5), u.dim());
            assert!(orthogonality_deviation(&u, &dm).unwrap() < 1e-10);
        }
    }

    #[test]
    fn peter_weyl_counts() {
        let g = builtin_group("s3").unwrap();
        let dual = crate::data::builtin_dual("s3").unwrap();
        assert!(peter_weyl_multiplicity(&g, &dual).is_ok());
        assert!(peter_weyl_multiplicity(&g, &dual[..2]).is_err());
    }
}
