//! Exact supercommutative polynomials over the rationals.
//!
//! A [`SuperPoly`] is a finite sum of terms `c * S * E * O` where `c` is a
//! rational, `S` a multiset of formal function symbols (jets), `E` a monomial
//! in even generators and `O` an ordered, duplicate-free product of odd
//! generators. Odd factors are kept sorted by chart position and the Koszul
//! sign of the sorting permutation is absorbed into `c`, so equal polynomials
//! have identical representations.

mod parse;
mod print;

pub use parse::parse_expr;
pub use print::format_poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charts::{Chart, ChartKey};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^k` as a rational.
pub fn sign(negative: bool) -> Rational {
    if negative {
        -Rational::one()
    } else {
        Rational::one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// 0 or 1.
    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Weights along the grading axes of a chart. Generators carry non-negative
/// weights; bracket offsets may be negative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVec(pub Vec<i64>);

impl WeightVec {
    pub fn zeros(axes: usize) -> Self {
        WeightVec(vec![0; axes])
    }

    pub fn axes(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn scaled(&self, k: i64) -> WeightVec {
        WeightVec(self.0.iter().map(|w| w * k).collect())
    }
}

impl Add<&WeightVec> for &WeightVec {
    type Output = WeightVec;
    fn add(self, rhs: &WeightVec) -> WeightVec {
        debug_assert_eq!(self.axes(), rhs.axes());
        WeightVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub weight: WeightVec,
}

impl Generator {
    pub fn new(name: impl Into<String>, parity: Parity, weight: Vec<i64>) -> Self {
        Generator {
            name: name.into(),
            parity,
            weight: WeightVec(weight),
        }
    }
}

/// A formal smooth function of some weight-zero even generators together with
/// a (commutative) multiset of partial derivatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarSymbol {
    pub name: String,
    /// Sorted generator indices the function depends on.
    pub args: Vec<usize>,
    /// Sorted multiset of generator indices it has been differentiated by.
    pub derivs: Vec<usize>,
}

impl ScalarSymbol {
    pub fn new(name: impl Into<String>, mut args: Vec<usize>) -> Self {
        args.sort_unstable();
        args.dedup();
        ScalarSymbol {
            name: name.into(),
            args,
            derivs: Vec::new(),
        }
    }

    pub fn depends_on(&self, g: usize) -> bool {
        self.args.binary_search(&g).is_ok()
    }

    /// The jet symbol `∂f/∂g`. Caller checks `depends_on`.
    pub fn differentiated(&self, g: usize) -> ScalarSymbol {
        let mut s = self.clone();
        let pos = s.derivs.partition_point(|&d| d <= g);
        s.derivs.insert(pos, g);
        s
    }
}

/// The non-coefficient part of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub scalars: Vec<ScalarSymbol>,
    /// `(generator index, exponent)`, sorted by index, exponents ≥ 1.
    pub even: Vec<(usize, u32)>,
    /// Sorted odd generator indices, no repeats.
    pub odd: Vec<usize>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.scalars.is_empty() && self.even.is_empty() && self.odd.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.odd.len() % 2 == 1)
    }

    pub fn weight(&self, chart: &Chart) -> WeightVec {
        let mut w = WeightVec::zeros(chart.axes());
        for &(g, e) in &self.even {
            for (acc, gw) in w.0.iter_mut().zip(&chart.generator(g).weight.0) {
                *acc += gw * e as i64;
            }
        }
        for &g in &self.odd {
            for (acc, gw) in w.0.iter_mut().zip(&chart.generator(g).weight.0) {
                *acc += gw;
            }
        }
        w
    }

    /// Power of `g` in the monomial; 0 or 1 for odd generators.
    pub fn exponent(&self, g: usize) -> u32 {
        if self.contains_odd(g) {
            return 1;
        }
        self.even
            .iter()
            .find(|(i, _)| *i == g)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn contains_odd(&self, g: usize) -> bool {
        self.odd.binary_search(&g).is_ok()
    }

    /// Every generator index appearing in the monomial, not counting symbol
    /// arguments.
    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.even
            .iter()
            .map(|(g, _)| *g)
            .chain(self.odd.iter().copied())
    }

    /// Product of two monomials. Returns `None` when an odd generator
    /// repeats, otherwise whether the Koszul sign is negative.
    pub fn mul(&self, rhs: &Monomial) -> Option<(bool, Monomial)> {
        let mut inversions = 0usize;
        for &a in &self.odd {
            for &b in &rhs.odd {
                match a.cmp(&b) {
                    std::cmp::Ordering::Equal => return None,
                    std::cmp::Ordering::Greater => inversions += 1,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        let mut odd = Vec::with_capacity(self.odd.len() + rhs.odd.len());
        odd.extend_from_slice(&self.odd);
        odd.extend_from_slice(&rhs.odd);
        odd.sort_unstable();

        let mut even = self.even.clone();
        for &(g, e) in &rhs.even {
            match even.binary_search_by_key(&g, |(i, _)| *i) {
                Ok(pos) => even[pos].1 += e,
                Err(pos) => even.insert(pos, (g, e)),
            }
        }

        let mut scalars = self.scalars.clone();
        scalars.extend(rhs.scalars.iter().cloned());
        scalars.sort();

        Some((inversions % 2 == 1, Monomial { scalars, even, odd }))
    }
}

/// Result of [`SuperPoly::homogeneity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneity {
    pub parity: Option<Parity>,
    pub weight: Option<WeightVec>,
    /// Distinct parities seen across the terms.
    pub parities: Vec<Parity>,
    /// Distinct weights seen across the terms.
    pub weights: Vec<WeightVec>,
}

impl Homogeneity {
    pub fn is_homogeneous(&self) -> bool {
        self.parities.len() <= 1 && self.weights.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperPoly {
    key: ChartKey,
    terms: BTreeMap<Monomial, Rational>,
}

impl SuperPoly {
    pub fn zero(chart: &Chart) -> Self {
        SuperPoly {
            key: chart.key(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: &Chart, c: Rational) -> Self {
        let mut p = SuperPoly::zero(chart);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(chart: &Chart) -> Self {
        SuperPoly::constant(chart, Rational::one())
    }

    /// The coordinate function of generator `g`.
    pub fn generator(chart: &Chart, g: usize) -> Self {
        let mut m = Monomial::one();
        if chart.generator(g).parity.is_odd() {
            m.odd.push(g);
        } else {
            m.even.push((g, 1));
        }
        let mut p = SuperPoly::zero(chart);
        p.add_term(m, Rational::one());
        p
    }

    pub fn var(chart: &Chart, name: &str) -> Result<Self> {
        let g = chart
            .index_of(name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
        Ok(SuperPoly::generator(chart, g))
    }

    pub fn symbol(chart: &Chart, symbol: ScalarSymbol) -> Self {
        let m = Monomial {
            scalars: vec![symbol],
            ..Monomial::default()
        };
        let mut p = SuperPoly::zero(chart);
        p.add_term(m, Rational::one());
        p
    }

    /// A formal function of all base (weight-zero even) generators.
    pub fn function(chart: &Chart, name: &str) -> Self {
        SuperPoly::symbol(chart, ScalarSymbol::new(name, chart.function_args()))
    }

    pub fn from_terms(chart: &Chart, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = SuperPoly::zero(chart);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn key(&self) -> ChartKey {
        self.key
    }

    pub fn belongs_to(&self, chart: &Chart) -> bool {
        self.key == chart.key()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get_mut();
                *v += c;
                if v.is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check(&self, other: &SuperPoly) -> Result<()> {
        if self.key == other.key {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn try_add(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check(other)?;
        let mut out = SuperPoly {
            key: self.key,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly {
                key: self.key,
                terms: BTreeMap::new(),
            };
        }
        SuperPoly {
            key: self.key,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> SuperPoly {
        let mut out = SuperPoly {
            key: self.key,
            terms: BTreeMap::new(),
        };
        out.add_term(Monomial::one(), Rational::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Parity of a homogeneous polynomial; zero counts as even, `None` when
    /// the terms disagree.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(p) => p,
        };
        it.all(|p| p == first).then_some(first)
    }

    pub fn weight(&self, chart: &Chart) -> Option<WeightVec> {
        let mut it = self.terms.keys().map(|m| m.weight(chart));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn homogeneity(&self, chart: &Chart) -> Homogeneity {
        let mut parities: Vec<Parity> = self.terms.keys().map(Monomial::parity).collect();
        parities.sort();
        parities.dedup();
        let mut weights: Vec<WeightVec> = self.terms.keys().map(|m| m.weight(chart)).collect();
        weights.sort();
        weights.dedup();
        Homogeneity {
            parity: (parities.len() == 1).then(|| parities[0]),
            weight: (weights.len() == 1).then(|| weights[0].clone()),
            parities,
            weights,
        }
    }

    /// Split into the even and odd parts.
    pub fn split_parity(&self) -> (SuperPoly, SuperPoly) {
        let (even, odd): (BTreeMap<_, _>, BTreeMap<_, _>) = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .partition(|(m, _)| m.parity() == Parity::Even);
        (
            SuperPoly { key: self.key, terms: even },
            SuperPoly { key: self.key, terms: odd },
        )
    }

    /// Keep only the terms satisfying `pred`.
    pub fn filter(&self, mut pred: impl FnMut(&Monomial) -> bool) -> SuperPoly {
        SuperPoly {
            key: self.key,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms grouped by weight.
    pub fn weight_components(&self, chart: &Chart) -> BTreeMap<WeightVec, SuperPoly> {
        let mut out: BTreeMap<WeightVec, SuperPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight(chart))
                .or_insert_with(|| SuperPoly {
                    key: self.key,
                    terms: BTreeMap::new(),
                })
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Whether any term involves generator `g` (as a factor or through a
    /// function symbol argument).
    pub fn mentions(&self, g: usize) -> bool {
        self.terms.keys().any(|m| {
            m.generators().any(|h| h == g) || m.scalars.iter().any(|s| s.depends_on(g))
        })
    }

    /// Graded left derivative with respect to generator `g`.
    pub fn partial(&self, chart: &Chart, g: usize) -> SuperPoly {
        let gen = chart.generator(g);
        let odd = gen.parity.is_odd();
        let mut out = SuperPoly {
            key: self.key,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            if odd {
                if let Ok(pos) = m.odd.binary_search(&g) {
                    let mut dm = m.clone();
                    dm.odd.remove(pos);
                    out.add_term(dm, if pos % 2 == 1 { -c.clone() } else { c.clone() });
                }
                continue;
            }
            if let Ok(pos) = m.even.binary_search_by_key(&g, |(i, _)| *i) {
                let e = m.even[pos].1;
                let mut dm = m.clone();
                if e == 1 {
                    dm.even.remove(pos);
                } else {
                    dm.even[pos].1 -= 1;
                }
                out.add_term(dm, c * int(e as i64));
            }
            for (i, s) in m.scalars.iter().enumerate() {
                if s.depends_on(g) {
                    let mut dm = m.clone();
                    dm.scalars[i] = s.differentiated(g);
                    dm.scalars.sort();
                    out.add_term(dm, c.clone());
                }
            }
        }
        out
    }

    pub fn partial_by_name(&self, chart: &Chart, name: &str) -> Result<SuperPoly> {
        let g = chart
            .index_of(name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
        if !self.belongs_to(chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(self.partial(chart, g))
    }

    /// Apply the algebra homomorphism determined by images of generators and
    /// function symbols. Images must have the parity of what they replace.
    pub fn substitute(
        &self,
        target: &Chart,
        gen_image: &mut dyn FnMut(usize) -> SuperPoly,
        symbol_image: &mut dyn FnMut(&ScalarSymbol) -> SuperPoly,
    ) -> SuperPoly {
        let mut out = SuperPoly::zero(target);
        let mut gen_cache: BTreeMap<usize, SuperPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut acc = SuperPoly::constant(target, c.clone());
            for s in &m.scalars {
                acc = &acc * &symbol_image(s);
                if acc.is_zero() {
                    break;
                }
            }
            for &(g, e) in &m.even {
                if acc.is_zero() {
                    break;
                }
                let img = gen_cache.entry(g).or_insert_with(|| gen_image(g));
                for _ in 0..e {
                    acc = &acc * &*img;
                }
            }
            for &g in &m.odd {
                if acc.is_zero() {
                    break;
                }
                let img = gen_cache.entry(g).or_insert_with(|| gen_image(g));
                acc = &acc * &*img;
            }
            out = &out + &acc;
        }
        out
    }

    /// Substitute some generators by polynomials on the same chart, leaving
    /// the rest (and all function symbols) untouched.
    pub fn substitute_generators(&self, chart: &Chart, images: &BTreeMap<usize, SuperPoly>) -> SuperPoly {
        self.substitute(
            chart,
            &mut |g| images.get(&g).cloned().unwrap_or_else(|| SuperPoly::generator(chart, g)),
            &mut |s| SuperPoly::symbol(chart, s.clone()),
        )
    }

    pub fn display<'a>(&'a self, chart: &'a Chart) -> impl fmt::Display + 'a {
        struct D<'a>(&'a SuperPoly, &'a Chart);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&format_poly(self.0, self.1))
            }
        }
        D(self, chart)
    }

    /// Largest absolute coefficient numerator/denominator size, used by the
    /// samplers to keep inputs small.
    pub fn max_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Add<&SuperPoly> for &SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: &SuperPoly) -> SuperPoly {
        self.try_add(rhs).expect("adding polynomials from different charts")
    }
}

impl Sub<&SuperPoly> for &SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: &SuperPoly) -> SuperPoly {
        self.try_sub(rhs).expect("subtracting polynomials from different charts")
    }
}

impl Mul<&SuperPoly> for &SuperPoly {
    type Output = SuperPoly;
    fn mul(self, rhs: &SuperPoly) -> SuperPoly {
        self.try_mul(rhs).expect("multiplying polynomials from different charts")
    }
}

impl Neg for &SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{make_darboux_chart, Metric};

    fn chart() -> Chart {
        make_darboux_chart(2, 2, &Metric::identity(2)).unwrap()
    }

    fn p(c: &Chart, s: &str) -> SuperPoly {
        parse_expr(s, c).unwrap()
    }

    #[test]
    fn odd_generators_anticommute() {
        let c = chart();
        let a = p(&c, "xi1");
        let b = p(&c, "xi2");
        assert_eq!(&a * &b, p(&c, "xi1*xi2"));
        assert_eq!(&b * &a, -p(&c, "xi1*xi2"));
        assert!((&a * &a).is_zero());
    }

    #[test]
    fn even_generators_commute() {
        let c = chart();
        let lhs = &p(&c, "x1 + xi1*xi2") * &p(&c, "x1");
        assert_eq!(lhs, p(&c, "x1^2 + x1*xi1*xi2"));
    }

    #[test]
    fn odd_partial_sign_depends_on_position() {
        let c = chart();
        let m = p(&c, "xi1*xi2");
        assert_eq!(m.partial_by_name(&c, "xi1").unwrap(), p(&c, "xi2"));
        assert_eq!(m.partial_by_name(&c, "xi2").unwrap(), -p(&c, "xi1"));
        assert!(m.partial_by_name(&c, "p1").unwrap().is_zero());
    }

    #[test]
    fn chain_rule_on_symbols() {
        let c = chart();
        let f = p(&c, "f(x1)*xi1");
        assert_eq!(f.partial_by_name(&c, "x1").unwrap(), p(&c, "D[f; x1](x1)*xi1"));
        assert!(f.partial_by_name(&c, "x2").unwrap().is_zero());
        let q = p(&c, "xi1*Q(x1,x2)*p1");
        assert_eq!(q.partial_by_name(&c, "p1").unwrap(), p(&c, "xi1*Q(x1,x2)"));
    }

    #[test]
    fn mixed_partials_commute_on_symbols() {
        let c = chart();
        let f = p(&c, "f(x1,x2)");
        let a = f.partial_by_name(&c, "x1").unwrap().partial_by_name(&c, "x2").unwrap();
        let b = f.partial_by_name(&c, "x2").unwrap().partial_by_name(&c, "x1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn homogeneity_reports() {
        let c = chart();
        let h = p(&c, "xi1*xi2").homogeneity(&c);
        assert_eq!(h.parity, Some(Parity::Even));
        assert_eq!(h.weight, Some(WeightVec(vec![2])));
        let h = p(&c, "xi1*Q(x1,x2)*p1").homogeneity(&c);
        assert_eq!(h.parity, Some(Parity::Odd));
        assert_eq!(h.weight, Some(WeightVec(vec![3])));
        let h = p(&c, "x1 + xi1").homogeneity(&c);
        assert!(!h.is_homogeneous());
        assert_eq!(h.parities, vec![Parity::Even, Parity::Odd]);
        assert_eq!(h.weights.len(), 2);
    }

    #[test]
    fn mixing_charts_is_an_error() {
        let a = chart();
        let b = make_darboux_chart(1, 2, &Metric::identity(2)).unwrap();
        let x = SuperPoly::var(&a, "xi1").unwrap();
        let y = SuperPoly::var(&b, "xi1").unwrap();
        assert_eq!(x.try_mul(&y), Err(Error::ChartMismatch));
        assert_eq!(x.try_add(&y), Err(Error::ChartMismatch));
    }
}
