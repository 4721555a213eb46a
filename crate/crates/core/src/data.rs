//! Group and representation files shipped with the crate.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Carrier, FiniteGroup};
use crate::io::{parse_group, parse_rep, GroupFile};
use crate::rep::ProjRep;

static FILES: &[(&str, &str)] = &[
    ("d4.group", include_str!("../data/groups/d4.group")),
    ("d4_chi2.rep", include_str!("../data/groups/d4_chi2.rep")),
    ("d4_chi3.rep", include_str!("../data/groups/d4_chi3.rep")),
    ("d4_sgn.rep", include_str!("../data/groups/d4_sgn.rep")),
    ("d4_std.rep", include_str!("../data/groups/d4_std.rep")),
    ("d4_triv.rep", include_str!("../data/groups/d4_triv.rep")),
    ("q8.group", include_str!("../data/groups/q8.group")),
    ("q8_chi2.rep", include_str!("../data/groups/q8_chi2.rep")),
    ("q8_chi3.rep", include_str!("../data/groups/q8_chi3.rep")),
    ("q8_sgn.rep", include_str!("../data/groups/q8_sgn.rep")),
    ("q8_std.rep", include_str!("../data/groups/q8_std.rep")),
    ("q8_triv.rep", include_str!("../data/groups/q8_triv.rep")),
    ("s3.group", include_str!("../data/groups/s3.group")),
    ("s3_sgn.rep", include_str!("../data/groups/s3_sgn.rep")),
    ("s3_std.rep", include_str!("../data/groups/s3_std.rep")),
    ("s3_triv.rep", include_str!("../data/groups/s3_triv.rep")),
    ("z2.group", include_str!("../data/groups/z2.group")),
    ("z2_chi0.rep", include_str!("../data/groups/z2_chi0.rep")),
    ("z2_chi1.rep", include_str!("../data/groups/z2_chi1.rep")),
    ("z2xz2.group", include_str!("../data/groups/z2xz2.group")),
    ("z2xz2_chi00.rep", include_str!("../data/groups/z2xz2_chi00.rep")),
    ("z2xz2_chi01.rep", include_str!("../data/groups/z2xz2_chi01.rep")),
    ("z2xz2_chi10.rep", include_str!("../data/groups/z2xz2_chi10.rep")),
    ("z2xz2_chi11.rep", include_str!("../data/groups/z2xz2_chi11.rep")),
    ("z2xz2_pauli.mult", include_str!("../data/groups/z2xz2_pauli.mult")),
    ("z2xz2_pauli.rep", include_str!("../data/groups/z2xz2_pauli.rep")),
    ("z3.group", include_str!("../data/groups/z3.group")),
    ("z3_chi0.rep", include_str!("../data/groups/z3_chi0.rep")),
    ("z3_chi1.rep", include_str!("../data/groups/z3_chi1.rep")),
    ("z3_chi2.rep", include_str!("../data/groups/z3_chi2.rep")),
    ("z3xz3.group", include_str!("../data/groups/z3xz3.group")),
    ("z3xz3_chi00.rep", include_str!("../data/groups/z3xz3_chi00.rep")),
    ("z3xz3_chi01.rep", include_str!("../data/groups/z3xz3_chi01.rep")),
    ("z3xz3_chi02.rep", include_str!("../data/groups/z3xz3_chi02.rep")),
    ("z3xz3_chi10.rep", include_str!("../data/groups/z3xz3_chi10.rep")),
    ("z3xz3_chi11.rep", include_str!("../data/groups/z3xz3_chi11.rep")),
    ("z3xz3_chi12.rep", include_str!("../data/groups/z3xz3_chi12.rep")),
    ("z3xz3_chi20.rep", include_str!("../data/groups/z3xz3_chi20.rep")),
    ("z3xz3_chi21.rep", include_str!("../data/groups/z3xz3_chi21.rep")),
    ("z3xz3_chi22.rep", include_str!("../data/groups/z3xz3_chi22.rep")),
    ("z4.group", include_str!("../data/groups/z4.group")),
    ("z4_chi0.rep", include_str!("../data/groups/z4_chi0.rep")),
    ("z4_chi1.rep", include_str!("../data/groups/z4_chi1.rep")),
    ("z4_chi2.rep", include_str!("../data/groups/z4_chi2.rep")),
    ("z4_chi3.rep", include_str!("../data/groups/z4_chi3.rep")),
    ("z5.group", include_str!("../data/groups/z5.group")),
    ("z5_chi0.rep", include_str!("../data/groups/z5_chi0.rep")),
    ("z5_chi1.rep", include_str!("../data/groups/z5_chi1.rep")),
    ("z5_chi2.rep", include_str!("../data/groups/z5_chi2.rep")),
    ("z5_chi3.rep", include_str!("../data/groups/z5_chi3.rep")),
    ("z5_chi4.rep", include_str!("../data/groups/z5_chi4.rep")),
];

fn file(name: &str) -> Result<&'static str> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::InvalidArgument(format!("no builtin file `{name}`")))
}

/// Names of the shipped groups, e.g. `s3`, `q8`, `z3xz3`.
pub fn builtin_group_names() -> Vec<&'static str> {
    FILES
        .iter()
        .filter_map(|(n, _)| n.strip_suffix(".group"))
        .collect()
}

pub fn builtin_group_file(name: &str) -> Result<GroupFile> {
    let f = format!("{name}.group");
    parse_group(file(&f)?, &f)
}

pub fn builtin_group(name: &str) -> Result<FiniteGroup> {
    Ok(builtin_group_file(name)?.group)
}

fn group_of(rep: &str) -> &str {
    rep.split('_').next().unwrap_or(rep)
}

/// Loads `<group>_<label>` on a fresh carrier for its group.
pub fn builtin_rep(name: &str) -> Result<ProjRep> {
    let carrier = Carrier::Finite(Arc::new(builtin_group(group_of(name))?));
    builtin_rep_on(name, &carrier)
}

pub fn builtin_rep_on(name: &str, carrier: &Carrier) -> Result<ProjRep> {
    let f = format!("{name}.rep");
    parse_rep(file(&f)?, &f, carrier, &|m| file(m).map(str::to_string))
}

/// The listed unitary dual of a shipped group, all on one shared carrier.
pub fn builtin_dual(group: &str) -> Result<Vec<ProjRep>> {
    let gf = builtin_group_file(group)?;
    let carrier = Carrier::Finite(Arc::new(gf.group));
    gf.dual
        .iter()
        .map(|d| builtin_rep_on(d.trim_end_matches(".rep"), &carrier))
        .collect()
}

/// All shipped representation names with their group.
pub fn builtin_rep_names() -> Vec<&'static str> {
    FILES
        .iter()
        .filter_map(|(n, _)| n.strip_suffix(".rep"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{peter_weyl_multiplicity, validate_projrep};

    #[test]
    fn every_shipped_rep_validates() {
        for name in builtin_rep_names() {
            let u = builtin_rep(name).unwrap();
            assert!(validate_projrep(&u).passes(1e-12), "{name}");
        }
    }

    #[test]
    fn every_shipped_dual_is_complete() {
        for g in builtin_group_names() {
            let grp = builtin_group(g).unwrap();
            let dual = builtin_dual(g).unwrap();
            peter_weyl_multiplicity(&grp, &dual).unwrap();
        }
    }
}
