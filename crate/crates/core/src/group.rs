//! Measured groups and multipliers.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE};

/// A finite group given by its multiplication table, with Haar weights and modular function.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    haar_weight: Vec<f64>,
    modular: Vec<f64>,
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a multiplication table; the Haar measure is normalized to total mass 1.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument("multiplication table is not square".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for row in table {
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range")));
                }
                mult.push(x);
            }
        }
        let at = |a: usize, b: usize| mult[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            inv[g] = (0..n)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            order: n,
            mult,
            inv,
            identity,
            haar_weight: vec![1.0 / n as f64; n],
            modular: vec![1.0; n],
            names: None,
        })
    }

    /// `Z_N × Z_N` under addition, element `(q, p)` at index `q * N + p`, weight `1/N` each.
    pub fn cyclic_product(n: usize) -> Result<Self> {
        Self::cyclic_product_with_mass(n, n as f64)
    }

    /// `Z_N × Z_N` with Haar weight `mass / N²` per element.
    pub fn cyclic_product_with_mass(n: usize, mass: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument("total mass must be positive".into()));
        }
        let order = n * n;
        let mut mult = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let q = (a / n + b / n) % n;
                let p = (a % n + b % n) % n;
                mult.push(q * n + p);
            }
        }
        let inv = (0..order)
            .map(|a| ((n - a / n) % n) * n + (n - a % n) % n)
            .collect();
        let names = (0..order).map(|a| format!("({},{})", a / n, a % n)).collect();
        Ok(Self {
            order,
            mult,
            inv,
            identity: 0,
            haar_weight: vec![mass / order as f64; order],
            modular: vec![1.0; order],
            names: Some(names),
        })
    }

    /// Replaces the Haar weights after checking left invariance.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.order {
            return Err(Error::DimMismatch { expected: self.order, got: weights.len() });
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument("weights must be positive and finite".into()));
        }
        for g in 0..self.order {
            for h in 0..self.order {
                let w = weights[self.mul(g, h)];
                if (w - weights[h]).abs() > 1e-12 * weights[h] {
                    return Err(Error::InvalidArgument("weights are not left invariant".into()));
                }
            }
        }
        self.haar_weight = weights;
        Ok(self)
    }

    /// Replaces the modular function after checking it is a homomorphism into the positive reals.
    pub fn with_modular(mut self, modular: Vec<f64>) -> Result<Self> {
        if modular.len() != self.order {
            return Err(Error::DimMismatch { expected: self.order, got: modular.len() });
        }
        if (modular[self.identity] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("modular(e) must be 1".into()));
        }
        for g in 0..self.order {
            for h in 0..self.order {
                let lhs = modular[self.mul(g, h)];
                if (lhs - modular[g] * modular[h]).abs() > 1e-12 * lhs.abs().max(1.0) {
                    return Err(Error::InvalidArgument("modular function is not multiplicative".into()));
                }
            }
        }
        self.modular = modular;
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order {
            return Err(Error::DimMismatch { expected: self.order, got: names.len() });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mult[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn weight(&self, g: usize) -> f64 {
        self.haar_weight[g]
    }

    pub fn weights(&self) -> &[f64] {
        &self.haar_weight
    }

    pub fn modular(&self, g: usize) -> f64 {
        self.modular[g]
    }

    pub fn modulars(&self) -> &[f64] {
        &self.modular
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn total_mass(&self) -> f64 {
        self.haar_weight.iter().sum()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..self.order).all(|h| self.mul(g, h) == self.mul(h, g)))
    }
}

/// A 2-cocycle `m: G × G → U(1)`. `None` stands for the trivial multiplier of any size.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplier {
    order: usize,
    values: Option<Vec<C64>>,
}

impl Multiplier {
    pub fn trivial(order: usize) -> Self {
        Self { order, values: None }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut values = Vec::with_capacity(order * order);
        for g in 0..order {
            for h in 0..order {
                values.push(f(g, h));
            }
        }
        Self { order, values: Some(values) }
    }

    pub fn from_table(table: Vec<Vec<C64>>) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("multiplier table is not square".into()));
        }
        Ok(Self { order: n, values: Some(table.into_iter().flatten().collect()) })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        match &self.values {
            None => true,
            Some(v) => v.iter().all(|&z| z == ONE),
        }
    }

    pub fn get(&self, g: usize, h: usize) -> C64 {
        match &self.values {
            None => ONE,
            Some(v) => v[g * self.order + h],
        }
    }
}

/// Maximum violation of each multiplier invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierReport {
    pub unit_modulus: f64,
    pub normalization: f64,
    pub cocycle: f64,
    pub inverse_symmetry: f64,
}

impl MultiplierReport {
    pub fn max_violation(&self) -> f64 {
        self.unit_modulus
            .max(self.normalization)
            .max(self.cocycle)
            .max(self.inverse_symmetry)
    }

    pub fn passes(&self) -> bool {
        self.unit_modulus <= 1e-14
            && self.normalization <= 1e-12
            && self.cocycle <= 1e-12
            && self.inverse_symmetry <= 1e-12
    }
}

pub fn validate_multiplier(g: &FiniteGroup, m: &Multiplier) -> Result<MultiplierReport> {
    let n = g.order();
    if m.order() != n {
        return Err(Error::DimMismatch { expected: n, got: m.order() });
    }
    let e = g.identity();
    let mut r = MultiplierReport {
        unit_modulus: 0.0,
        normalization: 0.0,
        cocycle: 0.0,
        inverse_symmetry: 0.0,
    };
    for a in 0..n {
        r.normalization = r
            .normalization
            .max((m.get(a, e) - ONE).norm())
            .max((m.get(e, a) - ONE).norm());
        r.inverse_symmetry = r
            .inverse_symmetry
            .max((m.get(a, g.inv(a)) - m.get(g.inv(a), a)).norm());
        for b in 0..n {
            r.unit_modulus = r.unit_modulus.max((m.get(a, b).norm() - 1.0).abs());
            if m.values.is_none() {
                continue;
            }
            for c in 0..n {
                let lhs = m.get(a, g.mul(b, c)) * m.get(b, c);
                let rhs = m.get(g.mul(a, b), c) * m.get(a, b);
                r.cocycle = r.cocycle.max((lhs - rhs).norm());
            }
        }
    }
    Ok(r)
}

/// Composition law for a quadrature carrier, acting on parameter tuples.
pub type ComposeFn = fn(&[f64], &[f64]) -> Vec<f64>;
pub type InverseFn = fn(&[f64]) -> Vec<f64>;

/// A discretized continuous group: grid points with cell weights and modular values.
#[derive(Clone, Debug)]
pub struct QuadratureGroup {
    points: Vec<Vec<f64>>,
    haar_weight: Vec<f64>,
    modular: Vec<f64>,
    compose: ComposeFn,
    inverse: InverseFn,
    snap: bool,
    lookup: HashMap<Vec<i64>, usize>,
    resolution: f64,
}

impl QuadratureGroup {
    /// `resolution` is the lattice used to recognize on-grid points; it must be much finer
    /// than the grid spacing.
    pub fn new(
        points: Vec<Vec<f64>>,
        haar_weight: Vec<f64>,
        modular: Vec<f64>,
        compose: ComposeFn,
        inverse: InverseFn,
        resolution: f64,
    ) -> Result<Self> {
        let n = points.len();
        if haar_weight.len() != n || modular.len() != n {
            return Err(Error::InvalidArgument("points, weights and modular differ in length".into()));
        }
        if haar_weight.iter().chain(modular.iter()).any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument("weights and modular values must be positive".into()));
        }
        let mut lookup = HashMap::with_capacity(n);
        for (i, p) in points.iter().enumerate() {
            lookup.insert(Self::key(p, resolution), i);
        }
        Ok(Self { points, haar_weight, modular, compose, inverse, snap: false, lookup, resolution })
    }

    /// Opt into nearest-grid-point snapping for off-grid compositions.
    pub fn with_snapping(mut self, snap: bool) -> Self {
        self.snap = snap;
        self
    }

    fn key(p: &[f64], resolution: f64) -> Vec<i64> {
        p.iter().map(|x| (x / resolution).round() as i64).collect()
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.haar_weight[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.haar_weight
    }

    pub fn modular(&self, i: usize) -> f64 {
        self.modular[i]
    }

    pub fn modulars(&self) -> &[f64] {
        &self.modular
    }

    pub fn total_mass(&self) -> f64 {
        self.haar_weight.iter().sum()
    }

    pub fn locate(&self, p: &[f64]) -> Option<usize> {
        if let Some(&i) = self.lookup.get(&Self::key(p, self.resolution)) {
            return Some(i);
        }
        if !self.snap {
            return None;
        }
        self.points
            .iter()
            .enumerate()
            .map(|(i, q)| (i, q.iter().zip(p).map(|(a, b)| (a - b).powi(2)).sum::<f64>()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(i, _)| i)
    }

    /// Composition of two grid points; off-grid results are an error unless snapping is on.
    pub fn compose(&self, g: usize, h: usize) -> Result<usize> {
        let p = (self.compose)(&self.points[g], &self.points[h]);
        self.locate(&p).ok_or(Error::OffGrid)
    }

    /// The grid point equal to `p · p⁻¹` for the first point, if it lies on the grid.
    pub fn identity(&self) -> Option<usize> {
        let p = self.points.first()?;
        self.locate(&(self.compose)(p, &(self.inverse)(p)))
    }

    pub fn inverse(&self, g: usize) -> Result<usize> {
        let p = (self.inverse)(&self.points[g]);
        self.locate(&p).ok_or(Error::OffGrid)
    }
}

/// The measured space functions live on.
#[derive(Clone, Debug)]
pub enum Carrier {
    Finite(Arc<FiniteGroup>),
    Quadrature(Arc<QuadratureGroup>),
}

impl Carrier {
    pub fn order(&self) -> usize {
        match self {
            Carrier::Finite(g) => g.order(),
            Carrier::Quadrature(q) => q.order(),
        }
    }

    pub fn weight(&self, g: usize) -> f64 {
        match self {
            Carrier::Finite(x) => x.weight(g),
            Carrier::Quadrature(q) => q.weight(g),
        }
    }

    pub fn weights(&self) -> &[f64] {
        match self {
            Carrier::Finite(x) => x.weights(),
            Carrier::Quadrature(q) => q.weights(),
        }
    }

    pub fn modular(&self, g: usize) -> f64 {
        match self {
            Carrier::Finite(x) => x.modular(g),
            Carrier::Quadrature(q) => q.modular(g),
        }
    }

    pub fn is_unimodular(&self) -> bool {
        match self {
            Carrier::Finite(x) => x.modulars().iter().all(|&d| d == 1.0),
            Carrier::Quadrature(q) => q.modulars().iter().all(|&d| d == 1.0),
        }
    }

    pub fn finite(&self) -> Option<&Arc<FiniteGroup>> {
        match self {
            Carrier::Finite(g) => Some(g),
            Carrier::Quadrature(_) => None,
        }
    }

    /// Product of two elements when it is known exactly.
    pub fn mul(&self, g: usize, h: usize) -> Option<usize> {
        match self {
            Carrier::Finite(x) => Some(x.mul(g, h)),
            Carrier::Quadrature(q) => q.compose(g, h).ok(),
        }
    }

    pub fn inv(&self, g: usize) -> Option<usize> {
        match self {
            Carrier::Finite(x) => Some(x.inv(g)),
            Carrier::Quadrature(q) => q.inverse(g).ok(),
        }
    }

    pub fn identity(&self) -> Option<usize> {
        match self {
            Carrier::Finite(x) => Some(x.identity()),
            Carrier::Quadrature(q) => q.identity(),
        }
    }

    pub fn same_as(&self, other: &Carrier) -> bool {
        match (self, other) {
            (Carrier::Finite(a), Carrier::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            (Carrier::Quadrature(a), Carrier::Quadrature(b)) => {
                Arc::ptr_eq(a, b) || (a.points == b.points && a.haar_weight == b.haar_weight)
            }
            _ => false,
        }
    }
}

impl From<FiniteGroup> for Carrier {
    fn from(g: FiniteGroup) -> Self {
        Carrier::Finite(Arc::new(g))
    }
}

impl From<QuadratureGroup> for Carrier {
    fn from(q: QuadratureGroup) -> Self {
        Carrier::Quadrature(Arc::new(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_table() -> Vec<Vec<usize>> {
        crate::data::builtin_group("s3").unwrap().table()
    }

    #[test]
    fn trivial_cyclic_product() {
        let g = FiniteGroup::cyclic_product(1).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.weight(0), 1.0);
    }

    #[test]
    fn z2_squared_is_klein() {
        let g = FiniteGroup::cyclic_product(2).unwrap();
        assert_eq!(g.order(), 4);
        for a in 0..4 {
            assert_eq!(g.mul(a, a), 0);
            assert_eq!(g.modular(a), 1.0);
        }
    }

    #[test]
    fn z4_squared_is_associative_over_all_triples() {
        let g = FiniteGroup::cyclic_product(4).unwrap();
        assert_eq!(g.order(), 16);
        let mut count = 0;
        for a in 0..16 {
            for b in 0..16 {
                for c in 0..16 {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    count += 1;
                }
            }
        }
        assert_eq!(count, 4096);
        assert!(FiniteGroup::from_table(&g.table()).is_ok());
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(FiniteGroup::cyclic_product(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn weyl_normalization_mass() {
        let g = FiniteGroup::cyclic_product(5).unwrap();
        assert!((g.total_mass() - 5.0).abs() < 1e-12);
        let g = FiniteGroup::cyclic_product_with_mass(3, 1.0).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn s3_compact_normalization() {
        let g = FiniteGroup::from_table(&s3_table()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.weights().iter().all(|&w| w == 1.0 / 6.0));
        assert!(!g.is_abelian());
    }

    #[test]
    fn q8_is_unimodular() {
        let g = crate::data::builtin_group("q8").unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.modulars().iter().all(|&d| d == 1.0));
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let mut t = s3_table();
        t[1][2] = t[1][3];
        assert!(matches!(FiniteGroup::from_table(&t), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn non_square_table_is_invalid_argument() {
        let t = vec![vec![0, 1], vec![1]];
        assert!(matches!(FiniteGroup::from_table(&t), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn trivial_multiplier_passes() {
        let g = FiniteGroup::from_table(&s3_table()).unwrap();
        let r = validate_multiplier(&g, &Multiplier::trivial(6)).unwrap();
        assert!(r.passes());
        assert_eq!(r.max_violation(), 0.0);
    }

    #[test]
    fn broken_normalization_fails() {
        let g = FiniteGroup::cyclic_product(3).unwrap();
        let m = Multiplier::from_fn(9, |a, b| if a == 4 && b == 0 { -ONE } else { ONE });
        let r = validate_multiplier(&g, &m).unwrap();
        assert!(!r.passes());
        assert!((r.normalization - 2.0).abs() < 1e-15);
    }

    #[test]
    fn multiplier_shape_mismatch() {
        let g = FiniteGroup::cyclic_product(2).unwrap();
        assert!(validate_multiplier(&g, &Multiplier::trivial(3)).is_err());
    }

    #[test]
    fn weights_must_be_left_invariant() {
        let g = FiniteGroup::cyclic_product(2).unwrap();
        assert!(g.clone().with_weights(vec![0.5; 4]).is_ok());
        assert!(g.with_weights(vec![0.5, 0.5, 0.5, 0.25]).is_err());
    }

    #[test]
    fn quadrature_composition_is_flagged_off_grid() {
        fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
            vec![a[0] + b[0]]
        }
        fn neg(a: &[f64]) -> Vec<f64> {
            vec![-a[0]]
        }
        let pts = (0..4).map(|i| vec![i as f64]).collect();
        let q = QuadratureGroup::new(pts, vec![1.0; 4], vec![1.0; 4], add, neg, 1e-9).unwrap();
        assert_eq!(q.compose(1, 2).unwrap(), 3);
        assert!(matches!(q.compose(2, 3), Err(Error::OffGrid)));
        let q = q.with_snapping(true);
        assert_eq!(q.compose(2, 3).unwrap(), 3);
    }
}
