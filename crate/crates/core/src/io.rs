//! Line-oriented text formats for groups, multipliers, representations, functions and operators.
//!
//! Blank lines and `#` comments are ignored everywhere.
//!
//! * group: `order N`, then `N` rows of `N` indices; optional `names …`, `weights …`,
//!   `modular …`, a `multiplier` line followed by `N` rows of `re im` pairs, and `dual a.rep …`.
//! * multiplier: `multiplier N`, then `N` rows of `N` `re im` pairs.
//! * representation: `dim d`, optional `multiplier <file>`, then one `d × d` block of
//!   `re im` pairs per group element.
//! * function: one `g_index re im` line per element.
//! * operator: `dim d`, then `d` rows of `d` `re im` pairs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::group::{Carrier, FiniteGroup, Multiplier};
use crate::hilbert::{GFunction, HSOperator};
use crate::linalg::{CMat, CVec, C64};
use crate::rep::ProjRep;
use crate::wigner::{WignerMap, VECTORIZATION};

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn perr(src: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: src.to_string(), msg: format!("line {line}: {}", msg.into()) }
}

fn num<T: std::str::FromStr>(src: &str, line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(src, line, format!("cannot parse `{tok}`")))
}

fn complex_row(src: &str, line: usize, toks: &[&str], n: usize) -> Result<Vec<C64>> {
    if toks.len() != 2 * n {
        return Err(perr(src, line, format!("expected {n} re/im pairs, found {} numbers", toks.len())));
    }
    toks.chunks(2)
        .map(|p| Ok(C64::new(num(src, line, p[0])?, num(src, line, p[1])?)))
        .collect()
}

/// Contents of a group file.
#[derive(Clone, Debug)]
pub struct GroupFile {
    pub group: FiniteGroup,
    pub multiplier: Option<Multiplier>,
    pub dual: Vec<String>,
}

pub fn parse_group(text: &str, src: &str) -> Result<GroupFile> {
    let mut it = lines(text).peekable();
    let (l0, head) = it.next().ok_or_else(|| perr(src, 0, "empty file"))?;
    if head.len() != 2 || head[0] != "order" {
        return Err(perr(src, l0, "expected `order N`"));
    }
    let n: usize = num(src, l0, head[1])?;
    let mut names = None;
    let mut table = Vec::with_capacity(n);
    let mut weights = None;
    let mut modular = None;
    let mut multiplier = None;
    let mut dual = Vec::new();
    while let Some((ln, toks)) = it.next() {
        match toks[0] {
            "names" => names = Some(toks[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            "weights" | "modular" => {
                let v: Vec<f64> = toks[1..].iter().map(|t| num(src, ln, t)).collect::<Result<_>>()?;
                if v.len() != n {
                    return Err(perr(src, ln, format!("expected {n} values")));
                }
                if toks[0] == "weights" {
                    weights = Some(v);
                } else {
                    modular = Some(v);
                }
            }
            "multiplier" => {
                let mut rows = Vec::with_capacity(n);
                for _ in 0..n {
                    let (l, t) = it.next().ok_or_else(|| perr(src, ln, "truncated multiplier block"))?;
                    rows.push(complex_row(src, l, &t, n)?);
                }
                multiplier = Some(Multiplier::from_table(rows)?);
            }
            "dual" => dual = toks[1..].iter().map(|s| s.to_string()).collect(),
            _ => {
                if table.len() == n {
                    return Err(perr(src, ln, format!("unexpected `{}`", toks[0])));
                }
                let row: Vec<usize> = toks.iter().map(|t| num(src, ln, t)).collect::<Result<_>>()?;
                table.push(row);
            }
        }
    }
    if table.len() != n {
        return Err(perr(src, l0, format!("expected {n} table rows, found {}", table.len())));
    }
    let mut group = FiniteGroup::from_table(&table)?;
    if let Some(w) = weights {
        group = group.with_weights(w)?;
    }
    if let Some(m) = modular {
        group = group.with_modular(m)?;
    }
    if let Some(nm) = names {
        group = group.with_names(nm)?;
    }
    Ok(GroupFile { group, multiplier, dual })
}

pub fn parse_multiplier(text: &str, src: &str) -> Result<Multiplier> {
    let mut it = lines(text);
    let (l0, head) = it.next().ok_or_else(|| perr(src, 0, "empty file"))?;
    if head.len() != 2 || head[0] != "multiplier" {
        return Err(perr(src, l0, "expected `multiplier N`"));
    }
    let n: usize = num(src, l0, head[1])?;
    let rows = it.take(n).map(|(l, t)| complex_row(src, l, &t, n)).collect::<Result<Vec<_>>>()?;
    if rows.len() != n {
        return Err(perr(src, l0, "truncated multiplier"));
    }
    Multiplier::from_table(rows)
}

/// Parses a representation; `resolve` loads a referenced multiplier file by name.
pub fn parse_rep(
    text: &str,
    src: &str,
    carrier: &Carrier,
    resolve: &dyn Fn(&str) -> Result<String>,
) -> Result<ProjRep> {
    let mut it = lines(text).peekable();
    let (l0, head) = it.next().ok_or_else(|| perr(src, 0, "empty file"))?;
    if head.len() != 2 || head[0] != "dim" {
        return Err(perr(src, l0, "expected `dim d`"));
    }
    let d: usize = num(src, l0, head[1])?;
    let mut multiplier = Multiplier::trivial(carrier.order());
    if let Some((l, t)) = it.peek() {
        if t[0] == "multiplier" {
            if t.len() != 2 {
                return Err(perr(src, *l, "expected `multiplier <file>`"));
            }
            let name = t[1].to_string();
            multiplier = parse_multiplier(&resolve(&name)?, &name)?;
            it.next();
        }
    }
    let rows: Vec<Vec<C64>> = it.map(|(l, t)| complex_row(src, l, &t, d)).collect::<Result<_>>()?;
    if rows.len() != d * carrier.order() {
        return Err(perr(
            src,
            l0,
            format!("expected {} rows ({} blocks of {d}), found {}", d * carrier.order(), carrier.order(), rows.len()),
        ));
    }
    let mats = rows
        .chunks(d)
        .map(|block| CMat::from_fn(d, d, |i, j| block[i][j]))
        .collect();
    ProjRep::new(carrier.clone(), mats, multiplier)
}

pub fn format_rep(rep: &ProjRep, multiplier_file: Option<&str>) -> String {
    let mut s = format!("dim {}\n", rep.dim());
    if let Some(m) = multiplier_file {
        writeln!(s, "multiplier {m}").unwrap();
    }
    for u in rep.matrices() {
        s.push('\n');
        for i in 0..rep.dim() {
            let row: Vec<String> = (0..rep.dim()).map(|j| format!("{:e} {:e}", u[(i, j)].re, u[(i, j)].im)).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
    }
    s
}

pub fn parse_gfunction(text: &str, src: &str, carrier: &Carrier) -> Result<GFunction> {
    let n = carrier.order();
    let mut values = CVec::zeros(n);
    let mut seen = vec![false; n];
    for (l, t) in lines(text) {
        if t.len() != 3 {
            return Err(perr(src, l, "expected `g_index re im`"));
        }
        let g: usize = num(src, l, t[0])?;
        if g >= n {
            return Err(perr(src, l, format!("index {g} out of range")));
        }
        if seen[g] {
            return Err(perr(src, l, format!("index {g} given twice")));
        }
        seen[g] = true;
        values[g] = C64::new(num(src, l, t[1])?, num(src, l, t[2])?);
    }
    GFunction::new(carrier.clone(), values)
}

pub fn format_gfunction(f: &GFunction) -> String {
    let mut s = String::new();
    for (g, z) in f.values().iter().enumerate() {
        writeln!(s, "{g} {:e} {:e}", z.re, z.im).unwrap();
    }
    s
}

pub fn parse_operator(text: &str, src: &str) -> Result<HSOperator> {
    let mut it = lines(text);
    let (l0, head) = it.next().ok_or_else(|| perr(src, 0, "empty file"))?;
    if head.len() != 2 || head[0] != "dim" {
        return Err(perr(src, l0, "expected `dim d`"));
    }
    let d: usize = num(src, l0, head[1])?;
    let rows: Vec<Vec<C64>> = it.map(|(l, t)| complex_row(src, l, &t, d)).collect::<Result<_>>()?;
    if rows.len() != d {
        return Err(perr(src, l0, format!("expected {d} rows")));
    }
    Ok(CMat::from_fn(d, d, |i, j| rows[i][j]))
}

pub fn format_operator(a: &HSOperator) -> String {
    let mut s = format!("dim {}\n", a.nrows());
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| format!("{:e} {:e}", a[(i, j)].re, a[(i, j)].im)).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}

/// The Wigner matrix with header `rows |G| cols dim^2` and the vectorization convention.
pub fn format_wigner(w: &WignerMap) -> String {
    let m = w.matrix();
    let mut s = format!("rows {} cols {}\n# {}\n", m.nrows(), m.ncols(), VECTORIZATION);
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:e} {:e}", m[(i, j)].re, m[(i, j)].im)).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse { path: path.display().to_string(), msg: e.to_string() })
}

/// Loads a group file; dual entries are resolved relative to the file's directory.
pub fn load_group(path: &Path) -> Result<(GroupFile, Vec<PathBuf>)> {
    let gf = parse_group(&read(path)?, &path.display().to_string())?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let dual = gf.dual.iter().map(|d| dir.join(d)).collect();
    Ok((gf, dual))
}

pub fn load_rep(path: &Path, carrier: &Carrier) -> Result<ProjRep> {
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let resolve = move |name: &str| read(&dir.join(name));
    parse_rep(&read(path)?, &path.display().to_string(), carrier, &resolve)
}

pub fn load_gfunction(path: &Path, carrier: &Carrier) -> Result<GFunction> {
    parse_gfunction(&read(path)?, &path.display().to_string(), carrier)
}

pub fn load_operator(path: &Path) -> Result<HSOperator> {
    parse_operator(&read(path)?, &path.display().to_string())
}

/// Writes through a temporary sibling and renames, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{builtin_group, builtin_rep};
    use crate::linalg::{max_abs_diff, random_cmat, rng_from_seed};

    #[test]
    fn group_with_blocks_parses() {
        let text = "order 2\nnames e a\n0 1\n1 0\nweights 0.5 0.5\nmodular 1 1\nmultiplier\n1 0 1 0\n1 0 1 0\ndual x.rep\n";
        let g = parse_group(text, "t").unwrap();
        assert_eq!(g.group.order(), 2);
        assert!(g.multiplier.unwrap().is_trivial());
        assert_eq!(g.dual, vec!["x.rep"]);
    }

    #[test]
    fn truncated_table_is_an_error() {
        assert!(parse_group("order 3\n0 1 2\n1 2 0\n", "t").is_err());
    }

    #[test]
    fn rep_roundtrip() {
        let u = builtin_rep("s3_std").unwrap();
        let text = format_rep(&u, None);
        let v = parse_rep(&text, "t", u.carrier(), &|_| unreachable!()).unwrap();
        for g in 0..6 {
            assert!(max_abs_diff(u.u(g), v.u(g)) == 0.0);
        }
    }

    #[test]
    fn projective_rep_loads_its_multiplier() {
        let u = builtin_rep("z2xz2_pauli").unwrap();
        assert!(!u.multiplier().is_trivial());
        assert!(crate::rep::validate_projrep(&u).passes(1e-12));
    }

    #[test]
    fn gfunction_and_operator_roundtrip() {
        let c: Carrier = builtin_group("z3").unwrap().into();
        let f = GFunction::from_fn(&c, |g| C64::new(g as f64, -0.25));
        let back = parse_gfunction(&format_gfunction(&f), "t", &c).unwrap();
        assert_eq!(back.values(), f.values());
        let mut rng = rng_from_seed(1);
        let a = random_cmat(&mut rng, 3, 3);
        let b = parse_operator(&format_operator(&a), "t").unwrap();
        assert_eq!(a, b);
        assert!(parse_gfunction("0 1 0\n0 2 0\n", "t", &c).is_err());
    }
}
