//! Graded symplectic charts: generators, grading axes and a constant pairing.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::superpoly::{Generator, Parity, Rational, WeightVec};

/// Identifies the chart a polynomial lives on. Charts with identical data
/// share a key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChartKey(u64);

/// Constant symmetric invertible metric on the odd fibre sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    g: Matrix,
    inverse: Matrix,
}

impl Metric {
    pub fn new(g: Matrix) -> Result<Self> {
        if !linalg::is_symmetric(&g) {
            return Err(Error::InvalidMetric("matrix is not square and symmetric".into()));
        }
        let inverse =
            linalg::inverse(&g).ok_or_else(|| Error::InvalidMetric("matrix is singular".into()))?;
        Ok(Metric { g, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Metric {
            g: linalg::identity(n),
            inverse: linalg::identity(n),
        }
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let mut g = linalg::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            g[i][i] = Rational::from_integer(e.into());
        }
        Metric::new(g)
    }

    pub fn rank(&self) -> usize {
        self.g.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }
}

/// Generator positions of an affine Darboux chart. `momenta[a]` is
/// conjugate to `base[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxLayout {
    pub base: Vec<usize>,
    pub fibre: Vec<usize>,
    pub momenta: Vec<usize>,
}

/// Name-based chart description, also the on-disk format.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub axes: usize,
    pub generators: Vec<Generator>,
    /// `[g, h, value]` meaning `{g, h} = value`. A missing reverse entry is
    /// filled in by graded antisymmetry.
    #[serde(default)]
    pub pairing: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub n_manifold: bool,
    /// Axes summed to form the symplectic weight. Defaults to the last axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symplectic_axes: Option<Vec<usize>>,
    /// Weight of the bracket. Inferred from the pairing when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket_weight: Option<Vec<i64>>,
    /// `[position, momentum]` pairs used by graph constructions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cotangent: Vec<(String, String)>,
}

impl ChartSpec {
    pub fn new(axes: usize) -> Self {
        ChartSpec {
            axes,
            ..ChartSpec::default()
        }
    }

    pub fn generator(mut self, name: &str, parity: Parity, weight: &[i64]) -> Self {
        self.generators.push(Generator::new(name, parity, weight.to_vec()));
        self
    }

    pub fn pair(mut self, g: &str, h: &str, value: &str) -> Self {
        self.pairing.push((g.into(), h.into(), value.into()));
        self
    }

    pub fn cotangent(mut self, position: &str, momentum: &str) -> Self {
        self.cotangent.push((position.into(), momentum.into()));
        self
    }

    pub fn symplectic_axes(mut self, axes: Vec<usize>) -> Self {
        self.symplectic_axes = Some(axes);
        self
    }

    pub fn n_manifold(mut self, flag: bool) -> Self {
        self.n_manifold = flag;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Chart {
    key: ChartKey,
    axes: usize,
    generators: Vec<Generator>,
    names: HashMap<String, usize>,
    pairing: Matrix,
    entries: Vec<(usize, usize, Rational)>,
    bracket_weight: WeightVec,
    symplectic_axes: Vec<usize>,
    n_manifold: bool,
    cotangent: Vec<(usize, usize)>,
    darboux: Option<DarbouxLayout>,
    metric: Option<Metric>,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Chart) -> bool {
        self.key == other.key
    }
}

impl Eq for Chart {}

fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::InvalidChart(format!("`{s}` is not a rational number")))
}

impl Chart {
    pub fn from_spec(spec: &ChartSpec) -> Result<Chart> {
        let mut names = HashMap::new();
        for (i, g) in spec.generators.iter().enumerate() {
            if g.weight.axes() != spec.axes {
                return Err(Error::InvalidChart(format!(
                    "generator `{}` has {} weight components, chart has {} axes",
                    g.name,
                    g.weight.axes(),
                    spec.axes
                )));
            }
            names.entry(g.name.clone()).or_insert(i);
        }
        let lookup = |n: &str| {
            names
                .get(n)
                .copied()
                .ok_or_else(|| Error::UnknownIdentifier(n.to_string()))
        };
        let mut listed = BTreeMap::new();
        for (g, h, v) in &spec.pairing {
            listed.insert((lookup(g)?, lookup(h)?), parse_rational(v)?);
        }
        let mut entries = listed.clone();
        for (&(g, h), v) in &listed {
            if !listed.contains_key(&(h, g)) && g != h {
                let both_odd = spec.generators[g].parity.is_odd() && spec.generators[h].parity.is_odd();
                entries.insert((h, g), if both_odd { v.clone() } else { -v.clone() });
            }
        }
        let cotangent = spec
            .cotangent
            .iter()
            .map(|(q, m)| Ok((lookup(q)?, lookup(m)?)))
            .collect::<Result<Vec<_>>>()?;
        let symplectic_axes = spec
            .symplectic_axes
            .clone()
            .unwrap_or_else(|| vec![spec.axes.saturating_sub(1)]);
        if symplectic_axes.iter().any(|&a| a >= spec.axes) {
            return Err(Error::InvalidChart("symplectic axis out of range".into()));
        }
        let bracket_weight = match &spec.bracket_weight {
            Some(w) if w.len() == spec.axes => WeightVec(w.clone()),
            Some(_) => return Err(Error::InvalidChart("bracket weight has the wrong length".into())),
            None => entries
                .iter()
                .find(|(_, v)| !v.is_zero())
                .map(|(&(g, h), _)| {
                    (&spec.generators[g].weight + &spec.generators[h].weight).scaled(-1)
                })
                .unwrap_or_else(|| WeightVec::zeros(spec.axes)),
        };
        let chart = Chart::assemble(
            spec.axes,
            spec.generators.clone(),
            entries.into_iter().collect(),
            bracket_weight,
            symplectic_axes,
            spec.n_manifold,
            cotangent,
        );
        if let Some(rows) = &spec.metric {
            let g = rows
                .iter()
                .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Matrix>>()?;
            let metric = Metric::new(g)?;
            if chart.metric.as_ref().map(Metric::matrix) != Some(metric.matrix()) {
                return Err(Error::InvalidMetric(
                    "metric does not match the fibre block of the pairing".into(),
                ));
            }
        }
        Ok(chart)
    }

    pub fn to_spec(&self) -> ChartSpec {
        let name = |g: usize| self.generators[g].name.clone();
        ChartSpec {
            axes: self.axes,
            generators: self.generators.clone(),
            pairing: self
                .entries
                .iter()
                .map(|(g, h, v)| (name(*g), name(*h), v.to_string()))
                .collect(),
            metric: self.metric.as_ref().map(|m| {
                m.matrix()
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect())
                    .collect()
            }),
            n_manifold: self.n_manifold,
            symplectic_axes: Some(self.symplectic_axes.clone()),
            bracket_weight: Some(self.bracket_weight.0.clone()),
            cotangent: self.cotangent.iter().map(|&(q, m)| (name(q), name(m))).collect(),
        }
    }

    pub(crate) fn assemble(
        axes: usize,
        generators: Vec<Generator>,
        entries: Vec<((usize, usize), Rational)>,
        bracket_weight: WeightVec,
        symplectic_axes: Vec<usize>,
        n_manifold: bool,
        cotangent: Vec<(usize, usize)>,
    ) -> Chart {
        let n = generators.len();
        let mut pairing = linalg::zeros(n, n);
        let mut list = Vec::new();
        for ((g, h), v) in entries {
            if !v.is_zero() {
                pairing[g][h] = v.clone();
                list.push((g, h, v));
            }
        }
        list.sort_by_key(|e| (e.0, e.1));
        let mut names = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            names.entry(g.name.clone()).or_insert(i);
        }

        let mut hasher = DefaultHasher::new();
        axes.hash(&mut hasher);
        generators.hash(&mut hasher);
        for (g, h, v) in &list {
            (g, h, v.numer(), v.denom()).hash(&mut hasher);
        }
        bracket_weight.hash(&mut hasher);
        symplectic_axes.hash(&mut hasher);
        n_manifold.hash(&mut hasher);
        cotangent.hash(&mut hasher);

        let mut chart = Chart {
            key: ChartKey(hasher.finish()),
            axes,
            generators,
            names,
            pairing,
            entries: list,
            bracket_weight,
            symplectic_axes,
            n_manifold,
            cotangent,
            darboux: None,
            metric: None,
        };
        if let Some((layout, metric)) = chart.detect_darboux() {
            chart.darboux = Some(layout);
            chart.metric = Some(metric);
        }
        chart
    }

    fn detect_darboux(&self) -> Option<(DarbouxLayout, Metric)> {
        if self.axes != 1 || self.bracket_weight.0 != [-2] {
            return None;
        }
        let mut layout = DarbouxLayout {
            base: vec![],
            fibre: vec![],
            momenta: vec![],
        };
        let mut momenta = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            match (g.parity, g.weight.0[0]) {
                (Parity::Even, 0) => layout.base.push(i),
                (Parity::Odd, 1) => layout.fibre.push(i),
                (Parity::Even, 2) => momenta.push(i),
                _ => return None,
            }
        }
        if momenta.len() != layout.base.len() {
            return None;
        }
        let one = Rational::one();
        for &x in &layout.base {
            let partners: Vec<usize> = momenta
                .iter()
                .copied()
                .filter(|&p| !self.pairing[p][x].is_zero())
                .collect();
            if partners.len() != 1 || self.pairing[partners[0]][x] != one {
                return None;
            }
            layout.momenta.push(partners[0]);
        }
        let block: Matrix = layout
            .fibre
            .iter()
            .map(|&i| layout.fibre.iter().map(|&j| self.pairing[i][j].clone()).collect())
            .collect();
        let expected = self.darboux_entry_count(&layout, &block);
        if expected != self.entries.len() {
            return None;
        }
        let g = linalg::inverse(&block)?;
        let metric = Metric::new(g).ok()?;
        Some((layout, metric))
    }

    fn darboux_entry_count(&self, layout: &DarbouxLayout, block: &Matrix) -> usize {
        let fibre = block.iter().flatten().filter(|v| !v.is_zero()).count();
        let valid_momenta = layout
            .base
            .iter()
            .zip(&layout.momenta)
            .filter(|&(&x, &p)| self.pairing[x][p] == -Rational::one())
            .count();
        fibre + 2 * valid_momenta
    }

    pub fn key(&self) -> ChartKey {
        self.key
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: usize) -> &Generator {
        &self.generators[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    /// `{g, h}` for coordinate functions.
    pub fn pairing(&self, g: usize, h: usize) -> &Rational {
        &self.pairing[g][h]
    }

    pub fn pairing_matrix(&self) -> &Matrix {
        &self.pairing
    }

    /// Nonzero `(g, h, {g, h})` entries, sorted.
    pub fn pairing_entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn bracket_weight(&self) -> &WeightVec {
        &self.bracket_weight
    }

    pub fn symplectic_axes(&self) -> &[usize] {
        &self.symplectic_axes
    }

    pub fn symplectic_weight(&self, w: &WeightVec) -> i64 {
        self.symplectic_axes.iter().map(|&a| w.0[a]).sum()
    }

    pub fn generator_symplectic_weight(&self, g: usize) -> i64 {
        self.symplectic_weight(&self.generators[g].weight)
    }

    /// The single axis not counted in the symplectic weight, if any.
    pub fn lift_axis(&self) -> Option<usize> {
        let rest: Vec<usize> = (0..self.axes)
            .filter(|a| !self.symplectic_axes.contains(a))
            .collect();
        (rest.len() == 1).then(|| rest[0])
    }

    /// The order `k` of a weighted chart, read off the bracket weight `1 - k`
    /// on the lift axis.
    pub fn lift_order(&self) -> Option<usize> {
        let a = self.lift_axis()?;
        usize::try_from(1 - self.bracket_weight.0[a]).ok()
    }

    pub fn is_n_manifold(&self) -> bool {
        self.n_manifold
    }

    pub fn cotangent_pairs(&self) -> &[(usize, usize)] {
        &self.cotangent
    }

    pub fn darboux(&self) -> Option<&DarbouxLayout> {
        self.darboux.as_ref()
    }

    pub fn metric(&self) -> Option<&Metric> {
        self.metric.as_ref()
    }

    /// Even generators of weight zero on every axis: the arguments of formal
    /// base functions.
    pub fn function_args(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| {
                let g = &self.generators[i];
                !g.parity.is_odd() && g.weight.is_zero()
            })
            .collect()
    }

    /// Generators of symplectic weight zero.
    pub fn base_sector(&self) -> Vec<usize> {
        self.generators_of_symplectic_weight(0)
    }

    pub fn generators_of_symplectic_weight(&self, w: i64) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| self.generator_symplectic_weight(i) == w)
            .collect()
    }

    /// Generators `h` with `{g, h} != 0`.
    pub fn partners(&self, g: usize) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&h| !self.pairing[g][h].is_zero())
            .collect()
    }

    /// Plain chart obtained by summing the symplectic axes into one.
    pub fn collapsed(&self) -> Chart {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.parity, vec![self.symplectic_weight(&g.weight)]))
            .collect();
        Chart::assemble(
            1,
            generators,
            self.entries.iter().map(|(g, h, v)| ((*g, *h), v.clone())).collect(),
            WeightVec(vec![self.symplectic_weight(&self.bracket_weight)]),
            vec![0],
            self.n_manifold,
            self.cotangent.clone(),
        )
    }
}

/// Affine Darboux chart with generators `x1.., xi1.., p1..`.
pub fn make_darboux_chart(base_dim: usize, rank: usize, g: &Metric) -> Result<Chart> {
    if g.rank() != rank {
        return Err(Error::InvalidMetric(format!(
            "metric has rank {}, expected {rank}",
            g.rank()
        )));
    }
    let mut generators = Vec::new();
    for a in 1..=base_dim {
        generators.push(Generator::new(format!("x{a}"), Parity::Even, vec![0]));
    }
    for i in 1..=rank {
        generators.push(Generator::new(format!("xi{i}"), Parity::Odd, vec![1]));
    }
    for a in 1..=base_dim {
        generators.push(Generator::new(format!("p{a}"), Parity::Even, vec![2]));
    }
    let x = |a: usize| a;
    let xi = |i: usize| base_dim + i;
    let p = |a: usize| base_dim + rank + a;
    let mut entries = Vec::new();
    for a in 0..base_dim {
        entries.push(((p(a), x(a)), Rational::one()));
        entries.push(((x(a), p(a)), -Rational::one()));
    }
    for i in 0..rank {
        for j in 0..rank {
            entries.push(((xi(i), xi(j)), g.inverse()[i][j].clone()));
        }
    }
    let cotangent = (0..base_dim).map(|a| (x(a), p(a))).collect();
    let chart = Chart::assemble(
        1,
        generators,
        entries,
        WeightVec(vec![-2]),
        vec![0],
        true,
        cotangent,
    );
    debug_assert!(chart.darboux.is_some());
    Ok(chart)
}

/// Bi-graded chart on the cotangent bundle of an anti vector bundle, with
/// generators `x (0,0)`, `xi (1,0)`, `p (1,1)`, `pi (0,1)`.
pub fn make_cotangent_antivb_chart(base_dim: usize, fibre_rank: usize) -> Chart {
    let mut spec = ChartSpec::new(2).symplectic_axes(vec![0, 1]).n_manifold(true);
    for a in 1..=base_dim {
        spec = spec.generator(&format!("x{a}"), Parity::Even, &[0, 0]);
    }
    for i in 1..=fibre_rank {
        spec = spec.generator(&format!("xi{i}"), Parity::Odd, &[1, 0]);
    }
    for a in 1..=base_dim {
        spec = spec.generator(&format!("p{a}"), Parity::Even, &[1, 1]);
    }
    for i in 1..=fibre_rank {
        spec = spec.generator(&format!("pi{i}"), Parity::Odd, &[0, 1]);
    }
    for a in 1..=base_dim {
        spec = spec
            .pair(&format!("p{a}"), &format!("x{a}"), "1")
            .cotangent(&format!("x{a}"), &format!("p{a}"));
    }
    for i in 1..=fibre_rank {
        spec = spec
            .pair(&format!("pi{i}"), &format!("xi{i}"), "1")
            .cotangent(&format!("xi{i}"), &format!("pi{i}"));
    }
    Chart::from_spec(&spec).expect("cotangent chart data is well formed")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateName(String),
    NegativeWeight(String),
    Antisymmetry { g: String, h: String },
    WeightCompatibility { g: String, h: String },
    PairingParity { g: String, h: String },
    Degenerate { rank: usize, size: usize },
    NManifoldParity(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName(n) => write!(f, "duplicate generator name `{n}`"),
            Violation::NegativeWeight(n) => write!(f, "generator `{n}` has a negative weight"),
            Violation::Antisymmetry { g, h } => {
                write!(f, "pairing of `{g}` and `{h}` is not graded antisymmetric")
            }
            Violation::WeightCompatibility { g, h } => {
                write!(f, "pairing of `{g}` and `{h}` does not match the bracket weight")
            }
            Violation::PairingParity { g, h } => {
                write!(f, "pairing of `{g}` and `{h}` joins generators of different parity")
            }
            Violation::Degenerate { rank, size } => {
                write!(f, "pairing matrix has rank {rank} < {size}")
            }
            Violation::NManifoldParity(n) => {
                write!(f, "generator `{n}` has parity different from its weight mod 2")
            }
        }
    }
}

/// Every broken chart invariant, empty for a valid chart.
pub fn validate_chart(c: &Chart) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for g in &c.generators {
        if !seen.insert(&g.name) {
            out.push(Violation::DuplicateName(g.name.clone()));
        }
        if g.weight.0.iter().any(|&w| w < 0) {
            out.push(Violation::NegativeWeight(g.name.clone()));
        }
        if c.n_manifold
            && (c.symplectic_weight(&g.weight).rem_euclid(2) == 1) != g.parity.is_odd()
        {
            out.push(Violation::NManifoldParity(g.name.clone()));
        }
    }
    let name = |g: usize| c.generators[g].name.clone();
    let n = c.generators.len();
    for g in 0..n {
        for h in g..n {
            let a = &c.pairing[g][h];
            let b = &c.pairing[h][g];
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let both_odd = c.generators[g].parity.is_odd() && c.generators[h].parity.is_odd();
            let expected = if both_odd { b.clone() } else { -b.clone() };
            if *a != expected {
                out.push(Violation::Antisymmetry { g: name(g), h: name(h) });
            }
            if c.generators[g].parity != c.generators[h].parity {
                out.push(Violation::PairingParity { g: name(g), h: name(h) });
            }
            let total = &(&c.generators[g].weight + &c.generators[h].weight) + &c.bracket_weight;
            if !total.is_zero() {
                out.push(Violation::WeightCompatibility { g: name(g), h: name(h) });
            }
        }
    }
    let rank = linalg::rank(&c.pairing);
    if rank < n {
        out.push(Violation::Degenerate { rank, size: n });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpoly::int;

    #[test]
    fn darboux_charts_are_valid() {
        for (n, r) in [(0, 7), (1, 2), (2, 3), (2, 4)] {
            let c = make_darboux_chart(n, r, &Metric::identity(r)).unwrap();
            assert!(validate_chart(&c).is_empty());
            assert_eq!(c.len(), 2 * n + r);
            assert!(c.darboux().is_some());
        }
        let c = make_darboux_chart(1, 2, &Metric::diagonal(&[1, -1]).unwrap()).unwrap();
        assert!(validate_chart(&c).is_empty());
        let xi2 = c.index_of("xi2").unwrap();
        assert_eq!(*c.pairing(xi2, xi2), int(-1));
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        assert!(Metric::new(linalg::zeros(2, 2)).is_err());
        assert!(Metric::new(vec![vec![int(1), int(2)], vec![int(0), int(1)]]).is_err());
    }

    #[test]
    fn cotangent_chart_weights() {
        let c = make_cotangent_antivb_chart(1, 3);
        assert!(validate_chart(&c).is_empty());
        assert_eq!(c.bracket_weight(), &WeightVec(vec![-1, -1]));
        let xi = c.index_of("xi2").unwrap();
        let pi = c.index_of("pi2").unwrap();
        assert_eq!(*c.pairing(xi, pi), int(1));
        assert_eq!(*c.pairing(pi, xi), int(1));
        assert!(c.darboux().is_none());
    }

    #[test]
    fn collapse_gives_hyperbolic_darboux_chart() {
        let c = make_cotangent_antivb_chart(2, 3).collapsed();
        assert!(validate_chart(&c).is_empty());
        let layout = c.darboux().expect("collapse is Darboux");
        assert_eq!(layout.fibre.len(), 6);
        let g = c.metric().unwrap().matrix();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if (i + 3 == j) || (j + 3 == i) { int(1) } else { int(0) };
                assert_eq!(g[i][j], expected);
            }
        }
    }

    #[test]
    fn weight_violation_between_base_coordinates() {
        let mut spec = ChartSpec::new(1)
            .generator("x", Parity::Even, &[0])
            .generator("y", Parity::Even, &[0])
            .pair("x", "y", "1");
        spec.bracket_weight = Some(vec![-2]);
        let c = Chart::from_spec(&spec).unwrap();
        let v = validate_chart(&c);
        assert!(v.iter().any(|v| matches!(v, Violation::WeightCompatibility { .. })));
    }

    #[test]
    fn broken_antisymmetry_and_degeneracy() {
        let spec = ChartSpec::new(1)
            .generator("x", Parity::Even, &[0])
            .generator("p", Parity::Even, &[2])
            .pair("p", "x", "1")
            .pair("x", "p", "1");
        let v = validate_chart(&Chart::from_spec(&spec).unwrap());
        assert!(v.iter().any(|v| matches!(v, Violation::Antisymmetry { .. })));

        let spec = ChartSpec::new(1)
            .generator("x", Parity::Even, &[0])
            .generator("p", Parity::Even, &[2]);
        let v = validate_chart(&Chart::from_spec(&spec).unwrap());
        assert_eq!(v, vec![Violation::Degenerate { rank: 0, size: 2 }]);
    }

    #[test]
    fn spec_round_trip() {
        let c = make_darboux_chart(1, 2, &Metric::diagonal(&[1, -1]).unwrap()).unwrap();
        let json = serde_json::to_string(&c.to_spec()).unwrap();
        let back = Chart::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.metric(), c.metric());
    }
}
