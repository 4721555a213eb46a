//! Star products: the defining (implicit) product and its explicit kernel formulas.

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Carrier, FiniteGroup};
use crate::hilbert::{conj_jm, GFunction, HSOperator};
use crate::linalg::{
    compensated_sum, max_abs_diff, op_norm, random_cvec, vdot, CMat, CVec, CompensatedSum, C64,
};
use crate::rep::{two_sided_tm, unit, ProjRep};
use crate::tolerances::{KERNEL_TABLE_MAX_ORDER, ORTHONORMAL_BASIS};
use crate::wigner::WignerMap;

/// `f₁ ⋆ f₂ = S(S*f₁ · S*f₂)`.
pub fn star_implicit(w: &WignerMap, f1: &GFunction, f2: &GFunction) -> Result<GFunction> {
    let a = w.weyl_map(f1)?;
    let b = w.weyl_map(f2)?;
    w.apply(&(a * b))
}

/// A bounded operator inserted between the factors of a product.
#[derive(Clone, Debug)]
pub struct DeformationOperator {
    k: CMat,
    op_norm: f64,
    self_adjoint: bool,
}

impl DeformationOperator {
    pub fn new(k: CMat) -> Result<Self> {
        if k.nrows() != k.ncols() {
            return Err(Error::InvalidArgument("deformation operator must be square".into()));
        }
        let op_norm = op_norm(&k);
        let self_adjoint = max_abs_diff(&k, &k.adjoint()) <= 1e-14 * op_norm.max(1.0);
        Ok(Self { k, op_norm, self_adjoint })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(CMat::identity(dim, dim)).expect("square")
    }

    pub fn matrix(&self) -> &CMat {
        &self.k
    }

    pub fn op_norm(&self) -> f64 {
        self.op_norm
    }

    pub fn is_contraction(&self) -> bool {
        self.op_norm <= 1.0 + 1e-12
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint
    }
}

/// `f₁ ⋆_K f₂ = S(S*f₁ · K · S*f₂)`.
pub fn star_k_implicit(
    w: &WignerMap,
    f1: &GFunction,
    f2: &GFunction,
    k: &DeformationOperator,
) -> Result<GFunction> {
    let a = w.weyl_map(f1)?;
    let b = w.weyl_map(f2)?;
    w.apply(&(a * k.matrix() * b))
}

#[derive(Clone, Debug)]
enum KernelStorage {
    /// `κ_n(g,h,h′)` at `[n][(g·N + h)·N + h′]`.
    Table(Vec<Vec<C64>>),
    /// `ϰ_n(x,h′)` at `[n][x·N + h′]` plus the phase `m(h,h⁻¹g)* Δ(h⁻¹g)^{1/2}` at `[g·N + h]`.
    Factorized { varkappa: Vec<Vec<C64>>, phase: Vec<C64> },
}

/// The kernel `κ(K,χ_n; g,h,h′) = ⟨U(g)D⁻¹χ_n, U(h)D⁻¹ K U(h′)D⁻¹χ_n⟩` over a basis `{χ_n}`.
#[derive(Clone, Debug)]
pub struct StarKernel {
    carrier: Carrier,
    basis: Vec<CVec>,
    complete: bool,
    storage: KernelStorage,
    group: FiniteGroup,
}

/// Kernel for the undeformed product; stored as a table when `|G| ≤ 64`.
pub fn build_star_kernel(w: &WignerMap, basis: &[CVec]) -> Result<StarKernel> {
    build_star_kernel_k(w, basis, None, w.order() > KERNEL_TABLE_MAX_ORDER)
}

/// Kernel for the `K`-deformed product; `factorized` selects the `|G|²` storage.
pub fn build_star_kernel_k(
    w: &WignerMap,
    basis: &[CVec],
    k: Option<&DeformationOperator>,
    factorized: bool,
) -> Result<StarKernel> {
    let rep = w.rep();
    let d = rep.dim();
    let group = rep.finite_group()?.clone();
    if basis.is_empty() || basis.len() > d {
        return Err(Error::InvalidArgument(format!("basis must have between 1 and {d} vectors")));
    }
    let mut gram_dev: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        if a.len() != d {
            return Err(Error::DimMismatch { expected: d, got: a.len() });
        }
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            gram_dev = gram_dev.max((vdot(a, b) - C64::from(target)).norm());
        }
    }
    if gram_dev > ORTHONORMAL_BASIS {
        return Err(Error::NonOrthonormal(gram_dev));
    }
    let n = group.order();
    let dinv = w.dm().inv();
    let dinv2 = w.dm().inv2();
    let kmat = k.map_or_else(|| CMat::identity(d, d), |k| k.matrix().clone());
    let storage = if factorized {
        let mut varkappa = Vec::with_capacity(basis.len());
        for chi in basis {
            let left: Vec<CVec> = (0..n).map(|x| rep.u(x) * (&dinv2 * chi)).collect();
            let right: Vec<CVec> = (0..n).map(|h| &kmat * (rep.u(h) * (&dinv * chi))).collect();
            let mut t = Vec::with_capacity(n * n);
            for l in &left {
                for r in &right {
                    t.push(vdot(l, r));
                }
            }
            varkappa.push(t);
        }
        let m = rep.multiplier();
        let mut phase = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let x = group.mul(group.inv(h), g);
                phase.push(m.get(h, x).conj() * group.modular(x).sqrt());
            }
        }
        KernelStorage::Factorized { varkappa, phase }
    } else {
        let mut tables = Vec::with_capacity(basis.len());
        for chi in basis {
            let v0 = &dinv * chi;
            let left: Vec<CVec> = (0..n).map(|g| rep.u(g) * &v0).collect();
            let inner: Vec<CVec> = (0..n).map(|hp| &dinv * (&kmat * (rep.u(hp) * &v0))).collect();
            let mut t = vec![C64::from(0.0); n * n * n];
            for h in 0..n {
                let uh = rep.u(h);
                let right: Vec<CVec> = inner.iter().map(|v| uh * v).collect();
                for (g, l) in left.iter().enumerate() {
                    for (hp, r) in right.iter().enumerate() {
                        t[(g * n + h) * n + hp] = vdot(l, r);
                    }
                }
            }
            tables.push(t);
        }
        KernelStorage::Table(tables)
    };
    Ok(StarKernel {
        carrier: w.carrier().clone(),
        basis: basis.to_vec(),
        complete: basis.len() == d,
        storage,
        group,
    })
}

impl StarKernel {
    pub fn basis(&self) -> &[CVec] {
        &self.basis
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.storage, KernelStorage::Table(_))
    }

    fn order(&self) -> usize {
        self.group.order()
    }

    /// `κ_n(g,h,h′)`, read from the table or assembled from the factorized form.
    pub fn kappa(&self, n: usize, g: usize, h: usize, hp: usize) -> C64 {
        let o = self.order();
        match &self.storage {
            KernelStorage::Table(t) => t[n][(g * o + h) * o + hp],
            KernelStorage::Factorized { varkappa, phase } => {
                let x = self.group.mul(self.group.inv(h), g);
                phase[g * o + h] * varkappa[n][x * o + hp]
            }
        }
    }
}

/// `ϰ(K,χ; x,h) = ⟨U(x)D⁻²χ, K U(h)D⁻¹χ⟩`, evaluated directly.
pub fn varkappa_direct(w: &WignerMap, k: &CMat, chi: &CVec, x: usize, h: usize) -> C64 {
    let rep = w.rep();
    let l = rep.u(x) * (w.dm().inv2() * chi);
    let r = k * (rep.u(h) * (w.dm().inv() * chi));
    vdot(&l, &r)
}

/// `κ(K,χ; g,h,h′)` from its definition.
pub fn kappa_direct(w: &WignerMap, k: &CMat, chi: &CVec, g: usize, h: usize, hp: usize) -> C64 {
    let rep = w.rep();
    let dinv = w.dm().inv();
    let l = rep.u(g) * (&dinv * chi);
    let r = rep.u(h) * (&dinv * (k * (rep.u(hp) * (&dinv * chi))));
    vdot(&l, &r)
}

/// `m(h,h⁻¹g)* Δ(h⁻¹g)^{1/2} ϰ(K,χ; h⁻¹g, h′)`.
pub fn kappa_factorized(w: &WignerMap, k: &CMat, chi: &CVec, g: usize, h: usize, hp: usize) -> Result<C64> {
    let grp = w.rep().finite_group()?;
    let x = grp.mul(grp.inv(h), g);
    let ph = w.rep().multiplier().get(h, x).conj() * grp.modular(x).sqrt();
    Ok(ph * varkappa_direct(w, k, chi, x, hp))
}

/// Result of an explicit kernel evaluation; uncertified when the basis is partial.
#[derive(Clone, Debug)]
pub struct ExplicitStar {
    pub value: GFunction,
    pub certified: bool,
}

/// `Σ_n Σ_h Σ_h′ w(h) w(h′) κ_n(·,h,h′) f₁(h) f₂(h′)`, `h` outer and `h′` inner, compensated.
pub fn star_explicit(k: &StarKernel, f1: &GFunction, f2: &GFunction) -> Result<ExplicitStar> {
    if !k.carrier.same_as(f1.carrier()) || !k.carrier.same_as(f2.carrier()) {
        return Err(Error::GroupMismatch);
    }
    let n = k.order();
    let w = k.carrier.weights();
    let a: Vec<C64> = (0..n).map(|h| f1.values()[h] * w[h]).collect();
    let b: Vec<C64> = (0..n).map(|h| f2.values()[h] * w[h]).collect();
    let mut out = CVec::zeros(n);
    match &k.storage {
        KernelStorage::Table(tables) => {
            for g in 0..n {
                let mut total = CompensatedSum::new();
                for t in tables {
                    for h in 0..n {
                        if a[h] == C64::from(0.0) {
                            continue;
                        }
                        let row = &t[(g * n + h) * n..(g * n + h + 1) * n];
                        let inner = compensated_sum(row.iter().zip(&b).map(|(x, y)| x * y));
                        total.add(a[h] * inner);
                    }
                }
                out[g] = total.value();
            }
        }
        KernelStorage::Factorized { varkappa, phase } => {
            for vk in varkappa {
                let inner: Vec<C64> = (0..n)
                    .map(|x| compensated_sum(vk[x * n..(x + 1) * n].iter().zip(&b).map(|(p, q)| p * q)))
                    .collect();
                for g in 0..n {
                    let s = compensated_sum((0..n).map(|h| {
                        let x = k.group.mul(k.group.inv(h), g);
                        a[h] * phase[g * n + h] * inner[x]
                    }));
                    out[g] += s;
                }
            }
        }
    }
    Ok(ExplicitStar { value: GFunction::new(k.carrier.clone(), out)?, certified: k.complete })
}

/// How the range condition of the twisted convolution is met.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeMode {
    /// Project both arguments onto the range of `S` first.
    Project,
    /// The caller guarantees one argument already lies in the range.
    CallerAsserted,
}

/// `(f₁ ⋆ f₂)(g) = d⁻¹ Σ_h w(h) f₁(h) m(h,h⁻¹g)* f₂(h⁻¹g)` on unimodular groups.
pub fn twisted_convolution(
    w: &WignerMap,
    f1: &GFunction,
    f2: &GFunction,
    mode: RangeMode,
) -> Result<GFunction> {
    let rep = w.rep();
    let grp = rep.finite_group()?;
    if !w.carrier().is_unimodular() {
        return Err(Error::Unsupported("twisted convolution needs a unimodular group".into()));
    }
    let d = w
        .dm()
        .as_scalar()
        .ok_or_else(|| Error::Unsupported("Duflo–Moore operator is not scalar".into()))?;
    let (p1, p2) = match mode {
        RangeMode::Project => (w.project(f1)?, w.project(f2)?),
        RangeMode::CallerAsserted => {
            f1.check_same_carrier(f2)?;
            (f1.clone(), f2.clone())
        }
    };
    let n = grp.order();
    let m = rep.multiplier();
    let out = CVec::from_fn(n, |g, _| {
        compensated_sum((0..n).map(|h| {
            let x = grp.mul(grp.inv(h), g);
            p1.values()[h] * grp.weight(h) * m.get(h, x).conj() * p2.values()[x]
        })) / d
    });
    GFunction::new(w.carrier().clone(), out)
}

/// Both routes of the `K`-deformed product.
#[derive(Clone, Debug)]
pub struct KStar {
    pub implicit: GFunction,
    pub explicit: GFunction,
    pub deviation: f64,
}

/// `S(S*f₁ K S*f₂)` and its kernel expansion through `ϰ(K,e_n; ·,·)`.
pub fn kdeformed_star(
    w: &WignerMap,
    f1: &GFunction,
    f2: &GFunction,
    k: &DeformationOperator,
) -> Result<KStar> {
    let implicit = star_k_implicit(w, f1, f2, k)?;
    let basis: Vec<CVec> = (0..w.dim()).map(|i| unit(w.dim(), i)).collect();
    let kernel = build_star_kernel_k(w, &basis, Some(k), true)?;
    let explicit = star_explicit(&kernel, f1, f2)?.value;
    let deviation = implicit.max_abs_diff(&explicit);
    Ok(KStar { implicit, explicit, deviation })
}

fn compact_unitary(rep: &ProjRep) -> Result<&FiniteGroup> {
    let grp = rep.finite_group()?;
    if !rep.multiplier().is_trivial() {
        return Err(Error::Unsupported("character formula needs a unitary representation".into()));
    }
    if (grp.total_mass() - 1.0).abs() > 1e-12 {
        return Err(Error::Unsupported("character formula needs μ(G) = 1".into()));
    }
    Ok(grp)
}

/// `δ^{3/2} Σ_h Σ_h′ w w C_U(g⁻¹hh′) f₁(h) f₂(h′)`.
pub fn star_char_formula(rep: &ProjRep, f1: &GFunction, f2: &GFunction) -> Result<GFunction> {
    let grp = compact_unitary(rep)?;
    f1.check_same_carrier(f2)?;
    let n = grp.order();
    let delta = rep.dim() as f64;
    let chars: Vec<C64> = (0..n).map(|g| rep.character(g)).collect();
    let out = CVec::from_fn(n, |g, _| {
        let gi = grp.inv(g);
        let mut total = CompensatedSum::new();
        for h in 0..n {
            let a = f1.values()[h] * grp.weight(h);
            let gih = grp.mul(gi, h);
            let inner = compensated_sum(
                (0..n).map(|hp| chars[grp.mul(gih, hp)] * f2.values()[hp] * grp.weight(hp)),
            );
            total.add(a * inner);
        }
        total.value() * delta.powf(1.5)
    });
    GFunction::new(rep.carrier().clone(), out)
}

/// `max_g |C(g) − δ² Σ_h Σ_h′ w w C(ghh′) C(h⁻¹) C(h′⁻¹)|`.
pub fn character_identity_deviation(rep: &ProjRep) -> Result<f64> {
    let grp = compact_unitary(rep)?;
    let n = grp.order();
    let delta = rep.dim() as f64;
    let chars: Vec<C64> = (0..n).map(|g| rep.character(g)).collect();
    let mut worst: f64 = 0.0;
    for g in 0..n {
        let mut total = CompensatedSum::new();
        for h in 0..n {
            let gh = grp.mul(g, h);
            for hp in 0..n {
                total.add(
                    chars[grp.mul(gh, hp)]
                        * chars[grp.inv(h)]
                        * chars[grp.inv(hp)]
                        * (grp.weight(h) * grp.weight(hp)),
                );
            }
        }
        worst = worst.max((chars[g] - total.value() * delta * delta).norm());
    }
    Ok(worst)
}

/// Plain convolution against the sum of per-irrep star products.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub lhs: GFunction,
    pub rhs: GFunction,
    pub max_dev: f64,
}

/// `∫ f₁(h) f₂(h⁻¹g) dμ(h)` versus `Σ_U δ(U)^{-1/2} (f₁ ⋆_U f₂)(g)`.
pub fn convolution_decomposition(
    grp: &FiniteGroup,
    dual: &[WignerMap],
    f1: &GFunction,
    f2: &GFunction,
) -> Result<DecompositionReport> {
    let reps: Vec<ProjRep> = dual.iter().map(|w| w.rep().clone()).collect();
    crate::rep::peter_weyl_multiplicity(grp, &reps)?;
    f1.check_same_carrier(f2)?;
    let n = grp.order();
    let lhs = CVec::from_fn(n, |g, _| {
        compensated_sum((0..n).map(|h| {
            grp.weight(h) * f1.values()[h] * f2.values()[grp.mul(grp.inv(h), g)]
        }))
    });
    let lhs = GFunction::new(f1.carrier().clone(), lhs)?;
    let mut rhs = GFunction::zeros(f1.carrier());
    for w in dual {
        let s = star_implicit(w, f1, f2)?;
        rhs = &rhs + &s.scale(C64::from((w.dim() as f64).powf(-0.5)));
    }
    let max_dev = lhs.max_abs_diff(&rhs);
    Ok(DecompositionReport { lhs, rhs, max_dev })
}

/// `γ(K,T; x,h) = conj(S(K* U(x) (T D⁻²)*)(h))`, as a `|G| × |G|` table.
pub fn gamma_kernel(w: &WignerMap, k: &DeformationOperator, t: &HSOperator) -> Result<CMat> {
    let n = w.order();
    let x2t_adj = (t * w.dm().inv2()).adjoint();
    let kadj = k.matrix().adjoint();
    let mut table = CMat::zeros(n, n);
    for x in 0..n {
        let b = &kadj * w.rep().u(x) * &x2t_adj;
        let s = w.apply(&b)?;
        for h in 0..n {
            table[(x, h)] = s.values()[h].conj();
        }
    }
    Ok(table)
}

/// The sequence of approximations built from each `T_n` in `seq`.
pub fn approx_identity_star(
    w: &WignerMap,
    f1: &GFunction,
    f2: &GFunction,
    k: &DeformationOperator,
    seq: &[HSOperator],
) -> Result<Vec<GFunction>> {
    let grp = w.rep().finite_group()?;
    f1.check_same_carrier(f2)?;
    let n = grp.order();
    let m = w.rep().multiplier();
    let wt = grp.weights();
    let mut out = Vec::with_capacity(seq.len());
    for t in seq {
        let gamma = gamma_kernel(w, k, t)?;
        let inner: Vec<C64> = (0..n)
            .map(|x| compensated_sum((0..n).map(|hp| gamma[(x, hp)] * wt[hp] * f2.values()[hp])))
            .collect();
        let vals = CVec::from_fn(n, |g, _| {
            compensated_sum((0..n).map(|h| {
                let x = grp.mul(grp.inv(h), g);
                wt[h] * f1.values()[h] * m.get(h, x).conj() * grp.modular(x).sqrt() * inner[x]
            }))
        });
        out.push(GFunction::new(w.carrier().clone(), vals)?);
    }
    Ok(out)
}

/// Partial projectors `T_n = Σ_{k<n} |χ_k⟩⟨χ_k|` for `n = 1..=len`.
pub fn partial_projectors(basis: &[CVec]) -> Vec<HSOperator> {
    let d = basis.first().map_or(0, |v| v.len());
    let mut acc = CMat::zeros(d, d);
    basis
        .iter()
        .map(|chi| {
            acc += chi * chi.adjoint();
            acc.clone()
        })
        .collect()
}

/// Maximum violation of each H*-algebra law over a sample.
#[derive(Clone, Debug, Default)]
pub struct HStarReport {
    pub associativity: f64,
    pub involution: f64,
    pub submultiplicativity: f64,
    pub trace_left: f64,
    pub trace_right: f64,
    pub range_containment: f64,
    pub projection_law: f64,
    pub equivariance: f64,
}

impl HStarReport {
    pub fn entries(&self) -> [(&'static str, f64); 8] {
        [
            ("associativity", self.associativity),
            ("involution", self.involution),
            ("submultiplicativity", self.submultiplicativity),
            ("trace-left", self.trace_left),
            ("trace-right", self.trace_right),
            ("range-containment", self.range_containment),
            ("projection-law", self.projection_law),
            ("equivariance", self.equivariance),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

pub fn check_hstar_axioms(
    w: &WignerMap,
    sample: &[(GFunction, GFunction, GFunction)],
) -> Result<HStarReport> {
    let m = w.rep().multiplier();
    let c = w.carrier();
    let tms: Vec<CMat> = (0..w.order()).map(|g| two_sided_tm(c, m, g)).collect::<Result<_>>()?;
    let mut r = HStarReport::default();
    let star = |a: &GFunction, b: &GFunction| star_implicit(w, a, b);
    for (f1, f2, f3) in sample {
        let f12 = star(f1, f2)?;
        let lhs = star(&f12, f3)?;
        let rhs = star(f1, &star(f2, f3)?)?;
        r.associativity = r.associativity.max(lhs.max_abs_diff(&rhs));

        let j1 = conj_jm(f1, m)?;
        let j2 = conj_jm(f2, m)?;
        let lhs = conj_jm(&f12, m)?;
        let rhs = star(&j2, &j1)?;
        r.involution = r.involution.max(lhs.max_abs_diff(&rhs));

        r.submultiplicativity = r.submultiplicativity.max(f12.norm() - f1.norm() * f2.norm()).max(0.0);

        let t0 = f12.inner(f3)?;
        r.trace_left = r.trace_left.max((t0 - f2.inner(&star(&j1, f3)?)?).norm());
        r.trace_right = r.trace_right.max((t0 - f1.inner(&star(f3, &j2)?)?).norm());

        r.range_containment = r.range_containment.max(w.project_complement(&f12)?.norm());

        let pp = star(&w.project(f1)?, &w.project(f2)?)?;
        r.projection_law = r.projection_law.max(f12.max_abs_diff(&pp));

        for t in &tms {
            let tf = |f: &GFunction| GFunction::new(c.clone(), t * f.values());
            let lhs = tf(&f12)?;
            let rhs = star(&tf(f1)?, &tf(f2)?)?;
            r.equivariance = r.equivariance.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(r)
}

/// Gaussian values rescaled to unit L² norm.
pub fn random_gfunction<R: Rng + ?Sized>(carrier: &Carrier, rng: &mut R) -> GFunction {
    let v = random_cvec(rng, carrier.order());
    let f = GFunction::new(carrier.clone(), v).expect("length matches");
    let n = f.norm();
    f.scale(C64::from(1.0 / n))
}

/// Unit-norm function with comparable components inside and outside the range of `w`.
pub fn straddling_gfunction<R: Rng + ?Sized>(w: &WignerMap, rng: &mut R) -> Result<GFunction> {
    let f = random_gfunction(w.carrier(), rng);
    let inside = w.project(&f)?;
    let outside = &f - &inside;
    let (a, b) = (inside.norm(), outside.norm());
    if a == 0.0 || b == 0.0 {
        return Ok(f);
    }
    let g = &inside.scale(C64::from(1.0 / a)) + &outside.scale(C64::from(1.0 / b));
    let n = g.norm();
    Ok(g.scale(C64::from(1.0 / n)))
}
