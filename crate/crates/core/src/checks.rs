//! Named check suites, the carriers they run on, and the registry behind `list-checks`.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::affine::{self, AffineGrid, AffineParams, AffineRep, Sign};
use crate::data::{builtin_dual, builtin_rep_on};
use crate::error::{Error, Result};
use crate::group::{validate_multiplier, Carrier, FiniteGroup};
use crate::hilbert::{conj_jm, GFunction};
use crate::io::{load_group, load_rep};
use crate::linalg::{
    derived_rng, max_abs_diff, random_cmat, random_contraction, random_unitary, rank, CMat, CVec, C64,
};
use crate::rep::{
    commutant_dimension, duflo_moore_from_orthogonality, orthogonality_deviation, peter_weyl_multiplicity,
    unit, validate_projrep, DufloMoore, DufloMooreEstimate, ProjRep,
};
use crate::star::{
    approx_identity_star, build_star_kernel, character_identity_deviation, check_hstar_axioms,
    convolution_decomposition, kdeformed_star, partial_projectors, random_gfunction, star_char_formula,
    star_explicit, star_implicit, star_k_implicit, straddling_gfunction, twisted_convolution,
    DeformationOperator, RangeMode,
};
use crate::tolerances::Tolerances;
use crate::weyl::{
    build_weyl_system, moyal_twisted_product, standard_wigner_matrix, standard_wigner_route, symplectic_report,
    translate, DiscreteWeylSystem, Ordering,
};
use crate::wigner::{build_wigner, check_intertwinings, isometry_report, range_overlap, WignerMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarrierKind {
    FiniteGroup,
    WeylSystem,
    Affine,
}

impl CarrierKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CarrierKind::FiniteGroup => "finite-group",
            CarrierKind::WeylSystem => "weyl-system",
            CarrierKind::Affine => "affine",
        }
    }
}

/// A finite group with a chosen irrep and, when available, its full unitary dual.
pub struct FiniteContext {
    pub label: String,
    pub rep: ProjRep,
    pub wigner: WignerMap,
    pub dm: DufloMooreEstimate,
    pub dual: Option<Vec<ProjRep>>,
}

pub struct WeylContext {
    pub sys: DiscreteWeylSystem,
    pub wigner: WignerMap,
    pub dm: DufloMooreEstimate,
}

/// Both affine irreps on one shared grid; `sign` selects the one single-rep checks use.
pub struct AffineContext {
    pub params: AffineParams,
    pub sign: Sign,
    pub minus: AffineRep,
    pub plus: AffineRep,
}

impl AffineContext {
    pub fn new(sign: Sign, params: AffineParams) -> Result<Self> {
        let grid = Arc::new(AffineGrid::new(params.clone())?);
        let minus = AffineRep::new(Sign::Minus, grid.clone())?;
        let plus = AffineRep::new(Sign::Plus, grid)?;
        Ok(Self { params, sign, minus, plus })
    }

    pub fn rep(&self) -> &AffineRep {
        match self.sign {
            Sign::Minus => &self.minus,
            Sign::Plus => &self.plus,
        }
    }
}

pub enum Context {
    Finite(FiniteContext),
    Weyl(WeylContext),
    Affine(AffineContext),
}

impl FiniteContext {
    /// A shipped representation such as `s3_std`, on the carrier shared with its group's dual.
    pub fn builtin(rep_name: &str, seed: u64) -> Result<Self> {
        let group = rep_name.split('_').next().unwrap_or(rep_name);
        let dual = builtin_dual(group)?;
        let carrier = dual
            .first()
            .map(|u| u.carrier().clone())
            .ok_or_else(|| Error::InvalidGroup(format!("group `{group}` ships no dual")))?;
        let rep = builtin_rep_on(rep_name, &carrier)?;
        Self::from_parts(rep_name.to_string(), rep, Some(dual), seed)
    }

    /// A group file and a representation file; the group's `dual` entries are loaded when present.
    pub fn from_files(group: &Path, rep: &Path, seed: u64) -> Result<Self> {
        let (gf, dual_paths) = load_group(group)?;
        let carrier = Carrier::Finite(Arc::new(gf.group));
        let u = load_rep(rep, &carrier)?;
        let dual = if dual_paths.is_empty() {
            None
        } else {
            Some(dual_paths.iter().map(|p| load_rep(p, &carrier)).collect::<Result<Vec<_>>>()?)
        };
        let label = format!("{} / {}", group.display(), rep.display());
        Self::from_parts(label, u, dual, seed)
    }

    fn from_parts(label: String, rep: ProjRep, dual: Option<Vec<ProjRep>>, seed: u64) -> Result<Self> {
        let dm = duflo_moore_from_orthogonality(&rep, &mut derived_rng(seed, "duflo-moore"))?;
        let wigner = build_wigner(&rep, &dm.dm)?;
        Ok(Self { label, rep, wigner, dm, dual })
    }

    fn group(&self) -> &FiniteGroup {
        self.rep.finite_group().expect("finite carrier")
    }
}

impl WeylContext {
    pub fn new(n: usize, ordering: Ordering, seed: u64) -> Result<Self> {
        let sys = build_weyl_system(n, ordering)?;
        let dm = duflo_moore_from_orthogonality(&sys.rep, &mut derived_rng(seed, "duflo-moore"))?;
        let wigner = build_wigner(&sys.rep, &dm.dm)?;
        Ok(Self { sys, wigner, dm })
    }
}

impl Context {
    pub fn kind(&self) -> CarrierKind {
        match self {
            Context::Finite(_) => CarrierKind::FiniteGroup,
            Context::Weyl(_) => CarrierKind::WeylSystem,
            Context::Affine(_) => CarrierKind::Affine,
        }
    }

    pub fn tau_grid(&self) -> Option<f64> {
        match self {
            Context::Affine(a) => Some(a.rep().tau_grid()),
            _ => None,
        }
    }

    /// Carrier description for the report's environment block.
    pub fn describe(&self) -> Value {
        match self {
            Context::Finite(f) => json!({
                "kind": "finite-group",
                "rep": f.label,
                "order": f.rep.order(),
                "dim": f.rep.dim(),
                "dual_available": f.dual.is_some(),
            }),
            Context::Weyl(w) => json!({
                "kind": "weyl-system",
                "n": w.sys.n,
                "ordering": w.sys.ordering,
            }),
            Context::Affine(a) => json!({
                "kind": "affine",
                "sign": a.sign,
                "grid": a.params,
                "order": a.rep().order(),
                "dim": a.rep().dim(),
                "tau_grid": a.rep().tau_grid(),
            }),
        }
    }

    /// Wigner map and Duflo–Moore estimate for the finite-carrier checks.
    fn finite_parts(&self) -> Option<(&WignerMap, &DufloMooreEstimate, &FiniteGroup)> {
        match self {
            Context::Finite(f) => Some((&f.wigner, &f.dm, f.group())),
            Context::Weyl(w) => Some((&w.wigner, &w.dm, w.sys.rep.finite_group().expect("finite carrier"))),
            Context::Affine(_) => None,
        }
    }
}

/// Outcome of one check before timing and naming are attached.
pub struct Outcome {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub measurements: Map<String, Value>,
}

impl Outcome {
    fn new(max_deviation: f64, tolerance: f64) -> Self {
        Self { max_deviation, tolerance, measurements: Map::new() }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.measurements.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub measurements: Map<String, Value>,
    pub wall_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

type Runner = fn(&Context, &Tolerances, &mut ChaCha8Rng) -> Result<Outcome>;
type Applies = fn(&Context) -> bool;

pub struct CheckInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub anchor: &'static str,
    pub carriers: &'static [CarrierKind],
    applies: Applies,
    run: Runner,
}

const FINITE: &[CarrierKind] = &[CarrierKind::FiniteGroup, CarrierKind::WeylSystem];
const GROUP_ONLY: &[CarrierKind] = &[CarrierKind::FiniteGroup];
const WEYL: &[CarrierKind] = &[CarrierKind::WeylSystem];
const AFFINE: &[CarrierKind] = &[CarrierKind::Affine];

fn is_finite(c: &Context) -> bool {
    !matches!(c, Context::Affine(_))
}

fn is_weyl(c: &Context) -> bool {
    matches!(c, Context::Weyl(_))
}

fn is_affine(c: &Context) -> bool {
    matches!(c, Context::Affine(_))
}

fn has_dual(c: &Context) -> bool {
    matches!(c, Context::Finite(f) if f.dual.is_some())
}

fn has_characters(c: &Context) -> bool {
    matches!(c, Context::Finite(f)
        if f.rep.multiplier().is_trivial() && (f.group().total_mass() - 1.0).abs() < 1e-12)
}

fn is_symmetric_weyl(c: &Context) -> bool {
    matches!(c, Context::Weyl(w) if w.sys.ordering == Ordering::Symmetric)
}

pub static REGISTRY: &[CheckInfo] = &[
    CheckInfo {
        name: "multiplier-cocycle",
        description: "unit modulus, normalization, cocycle identity and m(g,g⁻¹) = m(g⁻¹,g)",
        anchor: "projective representations: multiplier",
        carriers: FINITE,
        applies: is_finite,
        run: multiplier_cocycle,
    },
    CheckInfo {
        name: "projective-relations",
        description: "unitarity, U(e) = I and U(gh) = m(g,h) U(g) U(h)",
        anchor: "projective representations: definition",
        carriers: FINITE,
        applies: is_finite,
        run: projective_relations,
    },
    CheckInfo {
        name: "irreducibility",
        description: "commutant of the representation is one-dimensional",
        anchor: "Schur's lemma",
        carriers: FINITE,
        applies: is_finite,
        run: irreducibility,
    },
    CheckInfo {
        name: "orthogonality-relations",
        description: "⟨c₁,c₂⟩ = ⟨φ₁,φ₂⟩⟨Dψ₂,Dψ₁⟩ for coefficient functions",
        anchor: "Duflo-Moore theorem",
        carriers: FINITE,
        applies: is_finite,
        run: orthogonality_relations,
    },
    CheckInfo {
        name: "duflo-moore-constant",
        description: "scalar Duflo–Moore constant equals (μ(G)/δ)^{1/2}",
        anchor: "Duflo-Moore theorem: unimodular case",
        carriers: FINITE,
        applies: is_finite,
        run: duflo_moore_constant,
    },
    CheckInfo {
        name: "wigner-isometry",
        description: "S*S = I, P² = P, P self-adjoint, rank and trace of P equal dim²",
        anchor: "Wigner map isometry",
        carriers: FINITE,
        applies: is_finite,
        run: wigner_isometry,
    },
    CheckInfo {
        name: "intertwining",
        description: "S intertwines U∨U with T_m, U with R_m, and the conjugation with J_m",
        anchor: "Wigner map intertwining properties",
        carriers: FINITE,
        applies: is_finite,
        run: intertwining,
    },
    CheckInfo {
        name: "explicit-vs-implicit-star",
        description: "kernel formula for f₁⋆f₂ against S(S*f₁ S*f₂) over 10 random pairs",
        anchor: "main theorem: explicit star product formula",
        carriers: FINITE,
        applies: is_finite,
        run: explicit_vs_implicit,
    },
    CheckInfo {
        name: "twisted-convolution",
        description: "one-sum twisted convolution against the oracle (projected on finite groups)",
        anchor: "unimodular case of the main theorem",
        carriers: FINITE,
        applies: is_finite,
        run: twisted,
    },
    CheckInfo {
        name: "hstar-axioms",
        description: "associativity, involution, submultiplicativity, traces, range, projection law, equivariance",
        anchor: "H*-algebra structure of L²(G)",
        carriers: FINITE,
        applies: is_finite,
        run: hstar_axioms,
    },
    CheckInfo {
        name: "involution-jm",
        description: "J_m² = identity",
        anchor: "twisted involution J_m",
        carriers: FINITE,
        applies: is_finite,
        run: involution_jm,
    },
    CheckInfo {
        name: "kdeformed-star",
        description: "K = I reduction, ‖f₁⋆_K f₂‖ ≤ ‖f₁‖‖f₂‖ over 20 contractions, explicit K-kernel",
        anchor: "K-deformed star product",
        carriers: FINITE,
        applies: is_finite,
        run: kdeformed,
    },
    CheckInfo {
        name: "approximate-identity",
        description: "partial-projector sequence reaches the K-deformed oracle at the full basis",
        anchor: "general theorem: approximate identities",
        carriers: FINITE,
        applies: is_finite,
        run: approximate_identity,
    },
    CheckInfo {
        name: "character-identity",
        description: "C = δ² C∗C∗C pointwise and the character form of the star product",
        anchor: "compact groups: character formula",
        carriers: GROUP_ONLY,
        applies: has_characters,
        run: character_identity,
    },
    CheckInfo {
        name: "convolution-decomposition",
        description: "f₁∗f₂ = Σ_U δ_U^{-1/2} f₁⋆_U f₂ over the unitary dual",
        anchor: "compact groups: convolution decomposition",
        carriers: GROUP_ONLY,
        applies: has_dual,
        run: decomposition,
    },
    CheckInfo {
        name: "peter-weyl",
        description: "ranges of the dual are orthogonal and their projections sum to the identity",
        anchor: "Peter-Weyl theorem",
        carriers: GROUP_ONLY,
        applies: has_dual,
        run: peter_weyl,
    },
    CheckInfo {
        name: "symplectic-fourier",
        description: "F_sp unitary, self-adjoint and F_sp² = I",
        anchor: "symplectic Fourier transform",
        carriers: WEYL,
        applies: is_weyl,
        run: symplectic_fourier,
    },
    CheckInfo {
        name: "moyal-kernel",
        description: "triple-phase θ kernel against the F_sp conjugation of the twisted product (odd N)",
        anchor: "Grönewold-Moyal product",
        carriers: WEYL,
        applies: is_symmetric_weyl,
        run: moyal_kernel,
    },
    CheckInfo {
        name: "standard-wigner-route",
        description: "T = F_sp S has rank N², T(I) = 1 and T(U A U*) is a translate of T(A)",
        anchor: "standard Wigner distribution",
        carriers: WEYL,
        applies: is_weyl,
        run: standard_route,
    },
    CheckInfo {
        name: "affine-unitarity",
        description: "U(0,1) = I and U(a,1) unitary exactly; reports τ_grid",
        anchor: "affine group: representations U±",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_unitarity,
    },
    CheckInfo {
        name: "affine-composition",
        description: "U(g₁)U(g₂) against U(g₁g₂) on on-grid products, within τ_grid",
        anchor: "affine group: group law",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_composition,
    },
    CheckInfo {
        name: "affine-semi-invariance",
        description: "U(a,r) D = r^{-1/2} D U(a,r) within τ_grid",
        anchor: "Duflo-Moore theorem: semi-invariance",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_semi_invariance,
    },
    CheckInfo {
        name: "affine-orthogonality",
        description: "orthogonality relations with the closed-form D over log-Gaussian probes",
        anchor: "Duflo-Moore theorem: affine group",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_orthogonality,
    },
    CheckInfo {
        name: "affine-laguerre-basis",
        description: "re-orthonormalized Laguerre functions have identity Gram matrix",
        anchor: "affine group: Laguerre fiducial basis",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_laguerre,
    },
    CheckInfo {
        name: "affine-sigma-kernel",
        description: "ς kernel from the partial Fourier transform against the direct Weyl map",
        anchor: "affine group: Weyl map integral kernel",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_sigma,
    },
    CheckInfo {
        name: "affine-star",
        description: "full-basis explicit star product against the quadrature oracle; n_max trend",
        anchor: "affine group: explicit star product",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_star_check,
    },
    CheckInfo {
        name: "affine-ablation",
        description: "dropping Δ(h⁻¹g)^{1/2} degrades the explicit product by the configured factor",
        anchor: "main theorem: modular factor",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_ablation,
    },
    CheckInfo {
        name: "affine-refinement",
        description: "orthogonality, semi-invariance and ς deviations strictly decrease on the refined grid",
        anchor: "affine group: quadrature convergence",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_refinement,
    },
    CheckInfo {
        name: "affine-range-orthogonality",
        description: "⟨S₋A, S₊B⟩ ≈ 0 for random operators, within τ_grid",
        anchor: "affine group: L²(G) = R₋ ⊕ R₊",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_range_orthogonality,
    },
    CheckInfo {
        name: "affine-sum-star",
        description: "the summed product f⋆f* is nonzero for functions with both range components",
        anchor: "affine group: proper H*-algebra",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_sum_star,
    },
    CheckInfo {
        name: "affine-admissibility",
        description: "half-line admissibility integrals: symmetry, homogeneity, blow-up toward x = 0",
        anchor: "affine group: admissible mother wavelets",
        carriers: AFFINE,
        applies: is_affine,
        run: affine_admissibility,
    },
];

pub fn lookup(name: &str) -> Option<&'static CheckInfo> {
    REGISTRY.iter().find(|c| c.name == name)
}

/// Expands `all` and validates names against the registry and the carrier.
pub fn resolve(ctx: &Context, names: &[String]) -> Result<Vec<&'static CheckInfo>> {
    let mut out: Vec<&'static CheckInfo> = Vec::new();
    for n in names {
        if n == "all" {
            for c in REGISTRY.iter().filter(|c| (c.applies)(ctx)) {
                if !out.iter().any(|o| o.name == c.name) {
                    out.push(c);
                }
            }
            continue;
        }
        let c = lookup(n).ok_or_else(|| Error::InvalidArgument(format!("unknown check `{n}`")))?;
        if !(c.applies)(ctx) {
            return Err(Error::InvalidArgument(format!(
                "check `{n}` does not apply to this {} carrier",
                ctx.kind().as_str()
            )));
        }
        if !out.iter().any(|o| o.name == c.name) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Names that are not in the registry (other than `all`).
pub fn unknown_names(names: &[String]) -> Vec<String> {
    names.iter().filter(|n| *n != "all" && lookup(n).is_none()).cloned().collect()
}

/// Runs one check with its own generator derived from the seed and the check name.
pub fn run_one(info: &CheckInfo, ctx: &Context, tol: &Tolerances, seed: u64, timings: bool) -> CheckResult {
    let mut rng = derived_rng(seed, info.name);
    let t0 = Instant::now();
    let outcome = (info.run)(ctx, tol, &mut rng);
    let wall_time = timings.then(|| t0.elapsed().as_secs_f64());
    match outcome {
        Ok(o) => CheckResult {
            name: info.name.to_string(),
            pass: o.max_deviation <= o.tolerance,
            max_deviation: o.max_deviation,
            tolerance: o.tolerance,
            measurements: o.measurements,
            wall_time,
            error: None,
        },
        Err(e) => CheckResult {
            name: info.name.to_string(),
            max_deviation: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            measurements: Map::new(),
            wall_time,
            error: Some(e.to_string()),
        },
    }
}

/// Runs checks in declaration order, optionally concurrently; results keep that order.
pub fn run_checks(
    checks: &[&'static CheckInfo],
    ctx: &Context,
    tol: &Tolerances,
    seed: u64,
    parallel: bool,
    timings: bool,
) -> Vec<CheckResult> {
    if parallel {
        checks.par_iter().map(|c| run_one(c, ctx, tol, seed, timings)).collect()
    } else {
        checks.iter().map(|c| run_one(c, ctx, tol, seed, timings)).collect()
    }
}

fn parts(ctx: &Context) -> Result<(&WignerMap, &DufloMooreEstimate, &FiniteGroup)> {
    ctx.finite_parts().ok_or_else(|| Error::Unsupported("check needs a finite carrier".into()))
}

fn affine_ctx(ctx: &Context) -> Result<&AffineContext> {
    match ctx {
        Context::Affine(a) => Ok(a),
        _ => Err(Error::Unsupported("check needs an affine carrier".into())),
    }
}

fn random_pairs(c: &Carrier, rng: &mut ChaCha8Rng, n: usize) -> Vec<(GFunction, GFunction)> {
    (0..n).map(|_| (random_gfunction(c, rng), random_gfunction(c, rng))).collect()
}

fn std_basis(d: usize) -> Vec<CVec> {
    (0..d).map(|i| unit(d, i)).collect()
}

fn multiplier_cocycle(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, g) = parts(ctx)?;
    let r = validate_multiplier(g, w.rep().multiplier())?;
    Ok(Outcome::new(r.max_violation(), tol.exact)
        .with("unit_modulus", r.unit_modulus)
        .with("normalization", r.normalization)
        .with("cocycle", r.cocycle)
        .with("inverse_symmetry", r.inverse_symmetry)
        .with("trivial", w.rep().multiplier().is_trivial()))
}

fn projective_relations(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let r = validate_projrep(w.rep());
    Ok(Outcome::new(r.max_violation(), tol.exact)
        .with("unitarity", r.unitarity)
        .with("identity", r.identity)
        .with("multiplier_relation", r.multiplier_relation)
        .with("pairs_checked", r.pairs_checked))
}

fn irreducibility(ctx: &Context, _: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let c = commutant_dimension(w.rep());
    Ok(Outcome::new((c as f64 - 1.0).abs(), 0.0).with("commutant_dimension", c))
}

fn orthogonality_relations(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, dm, _) = parts(ctx)?;
    let dev = orthogonality_deviation(w.rep(), &dm.dm)?;
    Ok(Outcome::new(dev, tol.default).with("duflo_moore", dm.dm.as_scalar()))
}

fn duflo_moore_constant(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, dm, g) = parts(ctx)?;
    let d = dm.dm.as_scalar().ok_or_else(|| Error::Unsupported("Duflo–Moore operator is not scalar".into()))?;
    let expected = (g.total_mass() / w.dim() as f64).sqrt();
    let rel = (d / expected - 1.0).abs();
    Ok(Outcome::new(rel.max(dm.spread), tol.default)
        .with("d", d)
        .with("expected", expected)
        .with("relative_error", rel)
        .with("probe_spread", dm.spread)
        .with("total_mass", g.total_mass())
        .with("dim", w.dim()))
}

fn wigner_isometry(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let r = isometry_report(w);
    let d2 = (w.dim() * w.dim()) as f64;
    let dev = r
        .isometry
        .max(r.idempotence)
        .max(r.self_adjointness)
        .max((r.rank as f64 - d2).abs())
        .max((r.trace - d2).abs());
    Ok(Outcome::new(dev, tol.default)
        .with("isometry", r.isometry)
        .with("idempotence", r.idempotence)
        .with("self_adjointness", r.self_adjointness)
        .with("rank", r.rank)
        .with("trace", r.trace))
}

fn intertwining(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let r = check_intertwinings(w, 3, rng)?;
    Ok(Outcome::new(r.max(), tol.default)
        .with("two_sided", r.two_sided)
        .with("involution", r.involution)
        .with("left_regular", r.left_regular))
}

fn explicit_vs_implicit(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let k = build_star_kernel(w, &std_basis(w.dim()))?;
    let mut worst: f64 = 0.0;
    let pairs = random_pairs(w.carrier(), rng, 10);
    let mut certified = true;
    for (a, b) in &pairs {
        let e = star_explicit(&k, a, b)?;
        certified &= e.certified;
        worst = worst.max(e.value.max_abs_diff(&star_implicit(w, a, b)?));
    }
    Ok(Outcome::new(worst, tol.default)
        .with("pairs", pairs.len())
        .with("kernel_tabulated", k.is_tabulated())
        .with("certified", certified))
}

fn twisted(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    // The Weyl system's range is all of L²(G), so arbitrary pairs qualify.
    let mode = if is_weyl(ctx) { RangeMode::CallerAsserted } else { RangeMode::Project };
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (a, b) = match mode {
            RangeMode::Project => (straddling_gfunction(w, rng)?, straddling_gfunction(w, rng)?),
            RangeMode::CallerAsserted => (random_gfunction(w.carrier(), rng), random_gfunction(w.carrier(), rng)),
        };
        let t = twisted_convolution(w, &a, &b, mode)?;
        worst = worst.max(t.max_abs_diff(&star_implicit(w, &a, &b)?));
    }
    Ok(Outcome::new(worst, tol.default).with("pairs", 10).with("projected", mode == RangeMode::Project))
}

fn hstar_axioms(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let c = w.carrier();
    let sample: Vec<_> = (0..3)
        .map(|_| (random_gfunction(c, rng), random_gfunction(c, rng), random_gfunction(c, rng)))
        .collect();
    let r = check_hstar_axioms(w, &sample)?;
    let mut o = Outcome::new(r.max(), tol.default).with("triples", sample.len());
    for (k, v) in r.entries() {
        o = o.with(k, v);
    }
    Ok(o)
}

fn involution_jm(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let m = w.rep().multiplier();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let f = random_gfunction(w.carrier(), rng);
        worst = worst.max(conj_jm(&conj_jm(&f, m)?, m)?.max_abs_diff(&f));
    }
    Ok(Outcome::new(worst, tol.exact))
}

fn kdeformed(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let d = w.dim();
    let (a, b) = (random_gfunction(w.carrier(), rng), random_gfunction(w.carrier(), rng));
    let reduction = star_k_implicit(w, &a, &b, &DeformationOperator::identity(d))?
        .max_abs_diff(&star_implicit(w, &a, &b)?);
    let mut norm_excess: f64 = 0.0;
    let mut explicit: f64 = 0.0;
    for _ in 0..20 {
        let norm = rng.random_range(0.0..=1.0);
        let k = DeformationOperator::new(random_contraction(rng, d, norm))?;
        let (f1, f2) = (random_gfunction(w.carrier(), rng), random_gfunction(w.carrier(), rng));
        let ks = kdeformed_star(w, &f1, &f2, &k)?;
        norm_excess = norm_excess.max(ks.implicit.norm() - f1.norm() * f2.norm());
        explicit = explicit.max(ks.deviation);
    }
    let dev = reduction.max(norm_excess.max(0.0)).max(explicit);
    Ok(Outcome::new(dev, tol.default)
        .with("identity_reduction", reduction)
        .with("norm_bound_excess", norm_excess)
        .with("explicit_vs_implicit", explicit)
        .with("draws", 20))
}

fn approximate_identity(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let d = w.dim();
    let (a, b) = (random_gfunction(w.carrier(), rng), random_gfunction(w.carrier(), rng));
    let basis: Vec<CVec> = random_unitary(rng, d).column_iter().map(|c| c.into_owned()).collect();
    let k = DeformationOperator::new(random_contraction(rng, d, 1.0))?;
    let seq = partial_projectors(&basis);
    let out = approx_identity_star(w, &a, &b, &k, &seq)?;
    let oracle = star_k_implicit(w, &a, &b, &k)?;
    let trend: Vec<f64> = out.iter().map(|f| f.max_abs_diff(&oracle)).collect();
    Ok(Outcome::new(*trend.last().unwrap_or(&f64::INFINITY), tol.default).with("trend", trend))
}

fn character_identity(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (w, _, _) = parts(ctx)?;
    let ident = character_identity_deviation(w.rep())?;
    let mut star: f64 = 0.0;
    for (a, b) in random_pairs(w.carrier(), rng, 5) {
        star = star.max(star_char_formula(w.rep(), &a, &b)?.max_abs_diff(&star_implicit(w, &a, &b)?));
    }
    Ok(Outcome::new(ident.max(star), tol.default)
        .with("identity", ident)
        .with("character_star", star))
}

fn dual_wigners(ctx: &Context) -> Result<(&FiniteGroup, Vec<WignerMap>)> {
    let Context::Finite(f) = ctx else {
        return Err(Error::Unsupported("check needs a finite group".into()));
    };
    let dual = f.dual.as_ref().ok_or_else(|| Error::Unsupported("no unitary dual available".into()))?;
    let g = f.group();
    let maps = dual
        .iter()
        .map(|u| build_wigner(u, &DufloMoore::scalar((g.total_mass() / u.dim() as f64).sqrt(), u.dim())))
        .collect::<Result<Vec<_>>>()?;
    Ok((g, maps))
}

fn decomposition(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (g, maps) = dual_wigners(ctx)?;
    let mut worst: f64 = 0.0;
    for (a, b) in random_pairs(maps[0].carrier(), rng, 5) {
        worst = worst.max(convolution_decomposition(g, &maps, &a, &b)?.max_dev);
    }
    Ok(Outcome::new(worst, tol.default).with("dual_size", maps.len()))
}

fn peter_weyl(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let (g, maps) = dual_wigners(ctx)?;
    let reps: Vec<ProjRep> = maps.iter().map(|w| w.rep().clone()).collect();
    peter_weyl_multiplicity(g, &reps)?;
    let n = g.order();
    let mut sum = CMat::zeros(n, n);
    for w in &maps {
        sum += w.range_projection();
    }
    let completeness = max_abs_diff(&sum, &CMat::identity(n, n));
    let mut overlap: f64 = 0.0;
    for (i, a) in maps.iter().enumerate() {
        for b in &maps[i + 1..] {
            overlap = overlap.max(range_overlap(a, b)?);
        }
    }
    Ok(Outcome::new(completeness.max(overlap), tol.default)
        .with("completeness", completeness)
        .with("range_overlap", overlap)
        .with("dual_size", maps.len()))
}

fn symplectic_fourier(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let Context::Weyl(w) = ctx else { return Err(Error::Unsupported("needs a Weyl system".into())) };
    let r = symplectic_report(w.sys.n);
    Ok(Outcome::new(r.unitarity.max(r.self_adjointness).max(r.involution), tol.exact)
        .with("unitarity", r.unitarity)
        .with("self_adjointness", r.self_adjointness)
        .with("involution", r.involution))
}

fn moyal_kernel(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let Context::Weyl(w) = ctx else { return Err(Error::Unsupported("needs a Weyl system".into())) };
    let mut worst: f64 = 0.0;
    for (a, b) in random_pairs(w.wigner.carrier(), rng, 5) {
        worst = worst.max(moyal_twisted_product(&w.sys, &w.wigner, &a, &b)?.deviation);
    }
    Ok(Outcome::new(worst, tol.default).with("pairs", 5).with("prefactor", crate::weyl::MOYAL_PREFACTOR))
}

fn standard_route(ctx: &Context, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let Context::Weyl(w) = ctx else { return Err(Error::Unsupported("needs a Weyl system".into())) };
    let n = w.sys.n;
    let t = standard_wigner_matrix(&w.sys, &w.wigner);
    let r = rank(&t, 1e-8);
    let unit_fn = standard_wigner_route(&w.sys, &w.wigner, &CMat::identity(n, n))?;
    let unit_dev = unit_fn.values().iter().map(|z| (z - C64::from(1.0)).norm()).fold(0.0, f64::max);
    let a = random_cmat(rng, n, n);
    let ta = standard_wigner_route(&w.sys, &w.wigner, &a)?;
    let mut equiv: f64 = 0.0;
    for g in 0..n * n {
        let u = w.sys.rep.u(g);
        let lhs = standard_wigner_route(&w.sys, &w.wigner, &(u * &a * u.adjoint()))?;
        equiv = equiv.max(lhs.max_abs_diff(&translate(n, &ta, g)));
    }
    let rank_dev = (r as f64 - (n * n) as f64).abs();
    Ok(Outcome::new(rank_dev.max(unit_dev).max(equiv), tol.default)
        .with("rank", r)
        .with("unit", unit_dev)
        .with("translation_equivariance", equiv))
}

fn affine_unitarity(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let a = affine_ctx(ctx)?;
    let rep = a.rep();
    let grid = rep.grid();
    let j1 = grid
        .r_exponents()
        .iter()
        .position(|&k| k == 0)
        .ok_or_else(|| Error::GridMismatch("r = 1 is not on the grid".into()))?;
    let mut identity: f64 = 0.0;
    let mut diagonal: f64 = 0.0;
    for (i, &av) in grid.a_nodes().iter().enumerate() {
        let u = rep.u_matrix(grid.index(i, j1));
        diagonal = diagonal.max(crate::linalg::unitarity_defect(&u));
        if av == 0.0 {
            identity = max_abs_diff(&u, &CMat::identity(rep.dim(), rep.dim()));
        }
    }
    Ok(Outcome::new(identity.max(diagonal), tol.exact)
        .with("identity_row", identity)
        .with("diagonal_unitarity", diagonal)
        .with("tau_grid", rep.tau_grid()))
}

fn affine_composition(ctx: &Context, _: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rep = affine_ctx(ctx)?.rep();
    let (dev, pairs) = rep.composition_deviation(31);
    Ok(Outcome::new(dev, rep.tau_grid()).with("pairs", pairs))
}

fn affine_semi_invariance(ctx: &Context, _: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rep = affine_ctx(ctx)?.rep();
    Ok(Outcome::new(rep.semi_invariance_deviation(), rep.tau_grid()))
}

fn affine_orthogonality(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rep = affine_ctx(ctx)?.rep();
    let bumps = affine::default_bumps();
    let r = affine::affine_orthogonality_check(rep, &affine::bump_probes(rep, &bumps))?;
    Ok(Outcome::new(r.max_relative_deviation, tol.affine_orthogonality)
        .with("probes", r.probes)
        .with("bumps", bumps))
}

fn affine_laguerre(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rep = affine_ctx(ctx)?.rep();
    let basis = affine::laguerre_basis(rep, rep.dim())?;
    let gram = affine::gram_deviation(&basis);
    let poly = [0.0, 0.5, 1.7, 4.0]
        .iter()
        .map(|&x| (affine::laguerre(2, x) - (1.0 - 2.0 * x + x * x / 2.0)).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::new(gram.max(poly), tol.exact)
        .with("gram", gram)
        .with("l2_closed_form", poly)
        .with("n_max", basis.len()))
}

fn affine_sigma(ctx: &Context, _: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let a = affine_ctx(ctx)?;
    let rep = a.rep();
    let f = random_gfunction(rep.carrier(), rng);
    let random = affine::sigma_report(rep, &f)?;
    let c = rep.coefficient(&rep.sample(affine::log_bump(0.5, 0.3)), &rep.sample(affine::log_bump(1.0, 0.25)))?;
    let coeff = affine::sigma_report(rep, &c)?;
    Ok(Outcome::new(random.deviation.max(coeff.deviation), rep.tau_grid())
        .with("random", random)
        .with("coefficient", coeff)
        .with("alias_free", affine::is_alias_free(&a.params)))
}

fn affine_star_check(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rep = affine_ctx(ctx)?.rep();
    let (f1, f2) = affine::star_test_functions(rep)?;
    let k = rep.dim();
    let trend: Vec<usize> = [1, 2, 4, 8, 16, 32].into_iter().filter(|&n| n < k).collect();
    let r = affine::affine_star_report(rep, &f1, &f2, &trend)?;
    let monotone = r.trend.windows(2).all(|w| w[1].1 < w[0].1) && r.trend.last().is_none_or(|t| r.deviation < t.1);
    Ok(Outcome::new(r.deviation, tol.affine_star)
        .with("trend", r.trend)
        .with("monotone", monotone)
        .with("n_max", k))
}

fn affine_ablation(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rep = affine_ctx(ctx)?.rep();
    let (f1, f2) = affine::star_test_functions(rep)?;
    let r = affine::affine_star_report(rep, &f1, &f2, &[])?;
    let factor = r.ablated_deviation / r.deviation;
    Ok(Outcome::new(r.deviation / r.ablated_deviation, 1.0 / tol.ablation_factor)
        .with("deviation", r.deviation)
        .with("ablated_deviation", r.ablated_deviation)
        .with("degradation_factor", factor))
}

fn affine_refinement(ctx: &Context, _: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let a = affine_ctx(ctx)?;
    let r = affine::refinement_report(a.sign, &a.params)?;
    let dec = r.decreases();
    // Deviation is the worst fine/coarse ratio; strict decrease means every ratio is below 1.
    let ratio = |p: [f64; 2]| if p[0] > 0.0 { p[1] / p[0] } else { f64::INFINITY };
    let worst = ratio(r.orthogonality).max(ratio(r.semi_invariance)).max(ratio(r.sigma));
    let mut o = Outcome::new(worst, 1.0 - f64::EPSILON)
        .with("orthogonality", r.orthogonality)
        .with("semi_invariance", r.semi_invariance)
        .with("sigma", r.sigma)
        .with("fine_grid", &r.fine);
    for (k, v) in dec {
        o = o.with(&format!("{k}_decreases"), v);
    }
    Ok(o)
}

fn affine_range_orthogonality(ctx: &Context, _: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let a = affine_ctx(ctx)?;
    let n = a.minus.dim();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let (x, y) = (random_cmat(rng, n, n), random_cmat(rng, n, n));
        worst = worst.max(affine::range_overlap(&a.minus, &a.plus, &x, &y)?);
    }
    let bm = a.minus.sample(affine::log_bump(0.5, 0.3));
    let bp = a.plus.sample(affine::log_bump(0.5, 0.3));
    let bump = affine::range_overlap(&a.minus, &a.plus, &(&bm * bm.adjoint()), &(&bp * bp.adjoint()))?;
    Ok(Outcome::new(worst, a.rep().tau_grid()).with("random_pairs", 5).with("bump_overlap", bump))
}

fn affine_sum_star(ctx: &Context, _: &Tolerances, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let a = affine_ctx(ctx)?;
    // Deviation is ‖f‖²/‖f⋆f*‖, unbounded exactly when some f is annihilated.
    let mut worst: f64 = 0.0;
    let mut components: f64 = f64::INFINITY;
    for _ in 0..3 {
        let f = random_gfunction(a.minus.carrier(), rng);
        let pm = a.minus.project(&f)?.norm();
        let pp = a.plus.project(&f)?.norm();
        components = components.min(pm.min(pp));
        let fs = affine::sum_involution(&a.minus, &a.plus, &f)?;
        let prod = affine::sum_star(&a.minus, &a.plus, &f, &fs)?.norm();
        worst = worst.max(f.norm().powi(2) / prod);
    }
    Ok(Outcome::new(worst, 1e8).with("min_range_component", components).with("draws", 3))
}

fn affine_admissibility(ctx: &Context, tol: &Tolerances, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let a = affine_ctx(ctx)?;
    let grid = a.minus.grid();
    let bump = affine::log_bump(1.0, 0.3);
    let v: Vec<C64> = grid.x_abs().iter().chain(grid.x_abs()).map(|&x| bump(x)).collect();
    let r = affine::admissibility_check(grid, &v, tol.default)?;
    let symmetry = (r.minus - r.plus).abs() / r.plus;
    let s = 1.0 / r.plus.sqrt();
    let vn: Vec<C64> = v.iter().map(|z| z * s).collect();
    let rn = affine::admissibility_check(grid, &vn, tol.default)?;
    let flips = rn.normalized && !r.normalized;
    let mut growth = Vec::new();
    for extra in [0usize, 32, 64] {
        let p = AffineParams {
            k: a.params.k + extra,
            x_min: a.params.x_min * a.params.rho.powi(-(extra as i32)),
            ..a.params.clone()
        };
        let g = AffineGrid::new(p)?;
        let e: Vec<C64> = g.x_abs().iter().chain(g.x_abs()).map(|x| C64::from((-x).exp())).collect();
        let re = affine::admissibility_check(&g, &e, tol.default)?;
        growth.push((re.plus, re.boundary_suspect));
    }
    let blows_up = growth.windows(2).all(|w| w[1].0 > w[0].0) && growth.iter().all(|g| g.1);
    let flags = if flips && blows_up && r.finite && !r.boundary_suspect { 0.0 } else { 1.0 };
    Ok(Outcome::new(symmetry.max(flags), tol.exact)
        .with("minus", r.minus)
        .with("plus", r.plus)
        .with("normalized_flag_flips", flips)
        .with("blow_up_trend", growth)
        .with("blows_up", blows_up))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_unique_names_and_required_entries() {
        let mut names: Vec<_> = REGISTRY.iter().map(|c| c.name).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
        let o = lookup("orthogonality-relations").unwrap();
        assert!(o.anchor.contains("Duflo-Moore"));
        let e = lookup("explicit-vs-implicit-star").unwrap();
        assert!(e.anchor.contains("main theorem"));
    }

    #[test]
    fn weyl3_all_passes() {
        let ctx = Context::Weyl(WeylContext::new(3, Ordering::Symmetric, 1).unwrap());
        let checks = resolve(&ctx, &["all".to_string()]).unwrap();
        let res = run_checks(&checks, &ctx, &Tolerances::default(), 1, false, false);
        assert!(res.len() >= 12);
        for r in &res {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn finite_s3_all_passes() {
        let ctx = Context::Finite(FiniteContext::builtin("s3_std", 2).unwrap());
        let checks = resolve(&ctx, &["all".to_string()]).unwrap();
        assert!(checks.iter().any(|c| c.name == "peter-weyl"));
        for r in run_checks(&checks, &ctx, &Tolerances::default(), 2, true, false) {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn inapplicable_and_unknown_names() {
        let ctx = Context::Weyl(WeylContext::new(4, Ordering::Standard, 1).unwrap());
        assert!(resolve(&ctx, &["moyal-kernel".to_string()]).is_err());
        assert!(resolve(&ctx, &["no-such-check".to_string()]).is_err());
        assert_eq!(unknown_names(&["all".into(), "bogus".into()]), vec!["bogus".to_string()]);
    }
}
