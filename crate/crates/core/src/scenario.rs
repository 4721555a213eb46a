//! Scenario files: which carrier to build, which checks to run, and where the report goes.
//!
//! ```toml
//! carrier = "weyl-system"   # or "finite-group", "affine"
//! seed = 7
//! checks = ["all"]
//! output = "weyl3.json"     # relative to the scenario file
//!
//! [weyl]
//! n = 3
//! ordering = "symmetric"    # optional; symmetric for odd N, standard for even N
//! ```
//!
//! `[finite]` takes `group`/`rep` (shipped names) or `group_file`/`rep_file` (paths).
//! `[affine]` takes `sign`, `grid = "default" | "refined"` and optional overrides of
//! `l`, `m`, `k`, `da`, `rho`, `r_min`, `x_min`. `[tolerances]` overrides named tolerances.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::affine::{AffineParams, Sign};
use crate::checks::{self, AffineContext, CarrierKind, Context, FiniteContext, WeylContext};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use crate::weyl::Ordering;

pub const SEED_ENV: &str = "STARPROD_SEED";

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub carrier: CarrierKind,
    pub seed: u64,
    #[serde(default = "all_checks")]
    pub checks: Vec<String>,
    pub output: PathBuf,
    pub weyl: Option<WeylSpec>,
    pub finite: Option<FiniteSpec>,
    pub affine: Option<AffineSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn all_checks() -> Vec<String> {
    vec!["all".to_string()]
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WeylSpec {
    pub n: usize,
    pub ordering: Option<Ordering>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSpec {
    pub group: Option<String>,
    pub group_file: Option<PathBuf>,
    pub rep: Option<String>,
    pub rep_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridName {
    #[default]
    Default,
    Refined,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    #[serde(default = "plus")]
    pub sign: Sign,
    #[serde(default)]
    pub grid: GridName,
    pub l: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub da: Option<f64>,
    pub rho: Option<f64>,
    pub r_min: Option<f64>,
    pub x_min: Option<f64>,
}

fn plus() -> Sign {
    Sign::Plus
}

impl AffineSpec {
    pub fn params(&self) -> AffineParams {
        let base = match self.grid {
            GridName::Default => AffineParams::default(),
            GridName::Refined => AffineParams::default().refined(),
        };
        AffineParams {
            l: self.l.unwrap_or(base.l),
            m: self.m.unwrap_or(base.m),
            k: self.k.unwrap_or(base.k),
            da: self.da.unwrap_or(base.da),
            rho: self.rho.unwrap_or(base.rho),
            r_min: self.r_min.unwrap_or(base.r_min),
            x_min: self.x_min.unwrap_or(base.x_min),
        }
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Default ordering for a Weyl system of size `n`.
pub fn default_ordering(n: usize) -> Ordering {
    if n % 2 == 1 {
        Ordering::Symmetric
    } else {
        Ordering::Standard
    }
}

impl Scenario {
    pub fn parse(text: &str, src: &str) -> Result<Self> {
        let s: Scenario =
            toml::from_str(text).map_err(|e| Error::Parse { path: src.to_string(), msg: e.to_string() })?;
        s.validate()?;
        Ok(s)
    }

    /// Reads a scenario and resolves its relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse { path: path.display().to_string(), msg: e.to_string() })?;
        let mut s = Self::parse(&text, &path.display().to_string())?;
        let dir = path.parent().unwrap_or(Path::new(""));
        s.output = dir.join(&s.output);
        if let Some(f) = &mut s.finite {
            f.group_file = f.group_file.as_ref().map(|p| dir.join(p));
            f.rep_file = f.rep_file.as_ref().map(|p| dir.join(p));
            for p in [&f.group_file, &f.rep_file].into_iter().flatten() {
                if !p.is_file() {
                    return Err(schema(format!("referenced file {} does not exist", p.display())));
                }
            }
        }
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let unknown = checks::unknown_names(&self.checks);
        if !unknown.is_empty() {
            return Err(schema(format!("unknown check(s): {}", unknown.join(", "))));
        }
        if self.checks.is_empty() {
            return Err(schema("`checks` is empty"));
        }
        let tables = [
            (CarrierKind::WeylSystem, self.weyl.is_some(), "weyl"),
            (CarrierKind::FiniteGroup, self.finite.is_some(), "finite"),
            (CarrierKind::Affine, self.affine.is_some(), "affine"),
        ];
        for (kind, present, name) in tables {
            if present && kind != self.carrier {
                return Err(schema(format!("[{name}] table given for a {} scenario", self.carrier.as_str())));
            }
        }
        match self.carrier {
            CarrierKind::WeylSystem => {
                let w = self.weyl.as_ref().ok_or_else(|| schema("missing [weyl] table"))?;
                if w.n < 2 {
                    return Err(schema("[weyl] n must be at least 2"));
                }
            }
            CarrierKind::FiniteGroup => {
                let f = self.finite.as_ref().ok_or_else(|| schema("missing [finite] table"))?;
                let builtin = f.rep.is_some() && f.group_file.is_none() && f.rep_file.is_none();
                let files = f.group_file.is_some() && f.rep_file.is_some() && f.rep.is_none() && f.group.is_none();
                if !(builtin || files) {
                    return Err(schema("[finite] needs either `rep` (with optional `group`) or both `group_file` and `rep_file`"));
                }
                if let (Some(g), Some(r)) = (&f.group, &f.rep) {
                    if r.split('_').next() != Some(g.as_str()) {
                        return Err(schema(format!("rep `{r}` does not belong to group `{g}`")));
                    }
                }
            }
            CarrierKind::Affine => {
                if let Some(a) = &self.affine {
                    a.params().validate()?;
                }
            }
        }
        Ok(())
    }

    /// The scenario seed, unless `STARPROD_SEED` overrides it.
    pub fn effective_seed(&self) -> Result<u64> {
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| schema(format!("{SEED_ENV} is not an integer: `{v}`"))),
            Err(_) => Ok(self.seed),
        }
    }

    pub fn build_context(&self, seed: u64) -> Result<Context> {
        match self.carrier {
            CarrierKind::WeylSystem => {
                let w = self.weyl.as_ref().ok_or_else(|| schema("missing [weyl] table"))?;
                let ord = w.ordering.unwrap_or_else(|| default_ordering(w.n));
                Ok(Context::Weyl(WeylContext::new(w.n, ord, seed)?))
            }
            CarrierKind::FiniteGroup => {
                let f = self.finite.as_ref().ok_or_else(|| schema("missing [finite] table"))?;
                match (&f.rep, &f.group_file, &f.rep_file) {
                    (Some(r), _, _) => Ok(Context::Finite(FiniteContext::builtin(r, seed)?)),
                    (None, Some(g), Some(r)) => Ok(Context::Finite(FiniteContext::from_files(g, r, seed)?)),
                    _ => Err(schema("[finite] is incomplete")),
                }
            }
            CarrierKind::Affine => {
                let a = self.affine.clone().unwrap_or_default();
                Ok(Context::Affine(AffineContext::new(a.sign, a.params())?))
            }
        }
    }
}
