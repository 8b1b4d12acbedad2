//! Weighted structures: higher tangent lifts of charts and functions,
//! weight bookkeeping of the derived operations, graded cohomology pieces
//! over a point, and weight-respecting Dirac graphs.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::charts::Chart;
use crate::courant::{self, classify, Potential, StructureClass};
use crate::dirac::{self, LagrangianGraph};
use crate::error::{Error, Result};
use crate::instance::{GraphSpec, Instance};
use crate::linalg::{self, Matrix};
use crate::poisson::bracket_unchecked;
use crate::sampling::monomials_of_weight;
use crate::superpoly::{format_poly, ratio, Generator, Monomial, Rational, ScalarSymbol, SuperPoly, WeightVec};

/// A chart together with its `T^{k-1}` lift.
#[derive(Clone, Debug)]
pub struct TangentLift {
    source: Chart,
    lifted: Chart,
    k: usize,
}

impl TangentLift {
    /// Copies `z_0, .., z_{k-1}` of every generator, with weight `(ε, w(z))`
    /// where `w` is the symplectic weight (multi-axis charts are collapsed
    /// first). `{z_ε, w_δ} = {z, w}` when `ε + δ = k - 1` and zero otherwise.
    pub fn new(source: &Chart, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::LiftOrder(k));
        }
        let collapsed = source.collapsed();
        let base = &collapsed;
        let copy = |g: usize, e: usize| g * k + e;
        let mut generators = Vec::with_capacity(base.len() * k);
        for g in base.generators() {
            for e in 0..k {
                generators.push(Generator::new(
                    format!("{}_{e}", g.name),
                    g.parity,
                    vec![e as i64, g.weight.0[0]],
                ));
            }
        }
        let mut entries = Vec::new();
        for (g, h, v) in base.pairing_entries() {
            for e in 0..k {
                entries.push(((copy(*g, e), copy(*h, k - 1 - e)), v.clone()));
            }
        }
        let cotangent = base
            .cotangent_pairs()
            .iter()
            .flat_map(|&(q, m)| (0..k).map(move |e| (copy(q, e), copy(m, k - 1 - e))))
            .collect();
        let lifted = Chart::assemble(
            2,
            generators,
            entries,
            WeightVec(vec![1 - k as i64, base.bracket_weight().0[0]]),
            vec![1],
            base.is_n_manifold(),
            cotangent,
        );
        Ok(TangentLift {
            source: source.clone(),
            lifted,
            k,
        })
    }

    /// The chart being lifted.
    pub fn base(&self) -> &Chart {
        &self.source
    }

    pub fn chart(&self) -> &Chart {
        &self.lifted
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// Index of `z_ε` for generator `z` of the base chart.
    pub fn copy(&self, g: usize, e: usize) -> usize {
        g * self.k + e
    }

    fn lift_weight(&self, m: &Monomial) -> i64 {
        m.weight(&self.lifted).0[0]
    }

    fn truncate(&self, p: &SuperPoly) -> SuperPoly {
        let top = self.k as i64 - 1;
        p.filter(|m| self.lift_weight(m) <= top)
    }

    /// `z_0 + .. + z_{k-1}`.
    fn curve(&self, g: usize) -> SuperPoly {
        (0..self.k).fold(SuperPoly::zero(&self.lifted), |acc, e| {
            &acc + &SuperPoly::generator(&self.lifted, self.copy(g, e))
        })
    }

    /// Taylor expansion of `s(x_0 + x_1 + ..)` up to lift weight `k - 1`.
    fn expand_symbol(&self, s: &ScalarSymbol) -> SuperPoly {
        let map = |v: &[usize]| v.iter().map(|&g| self.copy(g, 0)).collect::<Vec<_>>();
        let mut lifted = ScalarSymbol::new(s.name.clone(), map(&s.args));
        for d in map(&s.derivs) {
            lifted = lifted.differentiated(d);
        }
        let chart = &self.lifted;
        let mut term = SuperPoly::symbol(chart, lifted);
        let mut out = term.clone();
        // T_n = (1/n) Σ_a h^a ∂_a T_{n-1}, h^a = x^a_1 + .. + x^a_{k-1}
        for n in 1..self.k {
            let mut next = SuperPoly::zero(chart);
            for &a in &s.args {
                let shift = (1..self.k).fold(SuperPoly::zero(chart), |acc, e| {
                    &acc + &SuperPoly::generator(chart, self.copy(a, e))
                });
                next = &next + &(&shift * &term.partial(chart, self.copy(a, 0)));
            }
            term = self.truncate(&next.scale(&ratio(1, n as i64)));
            if term.is_zero() {
                break;
            }
            out = &out + &term;
        }
        out
    }

    /// The complete lift: substitute `z ↦ z_0 + .. + z_{k-1}` and keep the
    /// part of lift weight `k - 1`. No factorial normalisation.
    pub fn lift(&self, p: &SuperPoly) -> Result<SuperPoly> {
        if !p.belongs_to(&self.source) {
            return Err(Error::ChartMismatch);
        }
        // mixed bi-weights are fine as long as parity and symplectic weight agree
        let h = p.homogeneity(&self.source);
        let mut symplectic: Vec<i64> = h.weights.iter().map(|w| self.source.symplectic_weight(w)).collect();
        symplectic.sort_unstable();
        symplectic.dedup();
        if h.parities.len() > 1 || symplectic.len() > 1 {
            return Err(Error::Inhomogeneous(format_poly(p, &self.source)));
        }
        let chart = &self.lifted;
        let mut out = SuperPoly::zero(chart);
        for (m, c) in p.terms() {
            let mut acc = SuperPoly::constant(chart, c.clone());
            for s in &m.scalars {
                acc = self.truncate(&(&acc * &self.expand_symbol(s)));
            }
            for &(g, e) in &m.even {
                let z = self.curve(g);
                for _ in 0..e {
                    acc = self.truncate(&(&acc * &z));
                }
            }
            for &g in &m.odd {
                acc = self.truncate(&(&acc * &self.curve(g)));
            }
            out = &out + &acc;
        }
        let top = self.k as i64 - 1;
        Ok(out.filter(|m| self.lift_weight(m) == top))
    }

    /// `{P^c, Q^c} - {P, Q}^c`, identically zero.
    pub fn identity_residual(&self, p: &SuperPoly, q: &SuperPoly) -> Result<SuperPoly> {
        let lhs = bracket_unchecked(&self.lift(p)?, &self.lift(q)?, &self.lifted);
        let pq = crate::poisson::bracket(p, q, &self.source)?;
        if pq.is_zero() {
            return Ok(lhs);
        }
        Ok(&lhs - &self.lift(&pq)?)
    }

    pub fn lift_potential(&self, theta: &Potential) -> Result<Potential> {
        Potential::new(&self.lifted, self.lift(theta.theta())?)
    }

    /// `T^{k-1}` of a coordinate graph: every copy of a vanishing generator
    /// vanishes. Two-form and bivector graphs lift their data.
    pub fn lift_graph(&self, graph: &LagrangianGraph) -> Result<LagrangianGraph> {
        Ok(match graph {
            LagrangianGraph::Coordinates(v) => LagrangianGraph::Coordinates(
                v.iter().flat_map(|&g| (0..self.k).map(move |e| g * self.k + e)).collect(),
            ),
            LagrangianGraph::TwoForm(a) => LagrangianGraph::TwoForm(self.lift(a)?),
            LagrangianGraph::Bivector(l) => LagrangianGraph::Bivector(self.lift(l)?),
        })
    }
}

/// The instance carried by the order-`k` lift: lifted chart, potential and
/// Dirac graph, the same expected verdict, no spot checks.
pub fn lift_instance(inst: &Instance, k: usize) -> Result<Instance> {
    let lift = TangentLift::new(inst.chart(), k)?;
    let dirac = match &inst.dirac {
        Some(spec) => {
            let graph = lift.lift_graph(&LagrangianGraph::from_spec(spec, inst.chart())?)?;
            Some(graph.to_spec(lift.chart()))
        }
        None => None,
    };
    Ok(Instance {
        name: format!("{}_lift{k}", inst.name),
        description: format!("order {k} tangent lift of {}", inst.name),
        potential: lift.lift_potential(&inst.potential)?,
        expected: inst.expected,
        checks: Vec::new(),
        dirac,
        lift: None,
    })
}

pub fn tangent_lift_chart(c: &Chart, k: usize) -> Result<Chart> {
    Ok(TangentLift::new(c, k)?.lifted)
}

/// Complete lift of `p` over `chart` to order `k`.
pub fn complete_lift(chart: &Chart, p: &SuperPoly, k: usize) -> Result<SuperPoly> {
    TangentLift::new(chart, k)?.lift(p)
}

pub fn lift_identity_check(chart: &Chart, p: &SuperPoly, q: &SuperPoly, k: usize) -> Result<SuperPoly> {
    TangentLift::new(chart, k)?.identity_residual(p, q)
}

/// Lift axis and order of a weighted chart.
fn weighting(chart: &Chart) -> Result<(usize, usize)> {
    let axis = chart
        .lift_axis()
        .ok_or_else(|| Error::InvalidChart("chart has no lift axis".into()))?;
    let k = chart
        .lift_order()
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::InvalidChart("bracket weight gives no lift order".into()))?;
    Ok((axis, k))
}

/// Classification on a bi-graded chart. The base sector is every generator
/// of symplectic weight 0, whatever its lift weight; the potential's
/// bi-weight `(k-1, 3)` is checked when it is built.
pub fn weighted_classify(theta: &Potential) -> Result<StructureClass> {
    weighting(theta.chart())?;
    Ok(classify(theta))
}

/// Counted checks with the failures spelled out.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn lands_in(chart: &Chart, p: &SuperPoly, w: &WeightVec) -> bool {
    p.terms().all(|(m, _)| &m.weight(chart) == w)
}

/// Spanning monomials of bi-weight `(p, s)` on the lift and symplectic axes
/// with at most one base factor.
fn spanning(chart: &Chart, axis: usize, p: i64, s: i64) -> Vec<SuperPoly> {
    let mut w = WeightVec::zeros(chart.axes());
    w.0[axis] = p;
    let sym = chart.symplectic_axes()[0];
    w.0[sym] = s;
    monomials_of_weight(chart, &w, 1)
        .into_iter()
        .map(|m| SuperPoly::from_terms(chart, [(m, Rational::from_integer(1.into()))]))
        .collect()
}

fn weight_of(chart: &Chart, axis: usize, p: i64, s: i64) -> WeightVec {
    let mut w = WeightVec::zeros(chart.axes());
    w.0[axis] = p;
    w.0[chart.symplectic_axes()[0]] = s;
    w
}

/// Weight bookkeeping on spanning sets of lift weight below `k`:
/// `⟦𝒜^(p,1), 𝒜^(q,1)⟧ ⊆ 𝒜^(p+q-k+1,1)`, the pairing lands in
/// `𝒜^(p+q-k+1,0)`, `ρ(𝒜^(p,1))` maps `𝒜^(r,0)` into `𝒜^(p+r+1-k,0)`,
/// and for `k = 2` core sections (weight `(0,1)`) have zero bracket and
/// pairing among themselves.
pub fn weight_table_check(theta: &Potential) -> Result<ScanReport> {
    let chart = theta.chart();
    if chart.symplectic_axes().len() != 1 {
        return Err(Error::InvalidChart("expected one symplectic axis".into()));
    }
    let (axis, k) = weighting(chart)?;
    let top = k as i64 - 1;
    let sections: Vec<(i64, Vec<SuperPoly>)> = (0..=top).map(|p| (p, spanning(chart, axis, p, 1))).collect();
    let functions: Vec<(i64, Vec<SuperPoly>)> = (0..=top).map(|r| (r, spanning(chart, axis, r, 0))).collect();
    let show = |p: &SuperPoly| format_poly(p, chart);
    let mut report = ScanReport::default();
    for (p, ss) in &sections {
        for (q, qs) in &sections {
            let target = p + q + 1 - k as i64;
            let wb = weight_of(chart, axis, target, 1);
            let wp = weight_of(chart, axis, target, 0);
            let core = k == 2 && *p == 0 && *q == 0;
            for s in ss {
                for t in qs {
                    let b = courant::pre_bracket(theta, s, t)?;
                    let ok = lands_in(chart, &b, &wb) && !((target < 0 || core) && !b.is_zero());
                    report.record(ok, || format!("⟦{}, {}⟧ = {} leaves weight {wb}", show(s), show(t), show(&b)));
                    let c = courant::pairing(theta, s, t)?;
                    let ok = lands_in(chart, &c, &wp) && !((target < 0 || core) && !c.is_zero());
                    report.record(ok, || format!("⟨{}, {}⟩ = {} leaves weight {wp}", show(s), show(t), show(&c)));
                }
            }
        }
        for (r, fs) in &functions {
            let w = weight_of(chart, axis, p + r + 1 - k as i64, 0);
            for s in ss {
                for f in fs {
                    let a = courant::anchor_apply(theta, s, f)?;
                    report.record(lands_in(chart, &a, &w), || {
                        format!("ρ({}) {} = {} leaves weight {w}", show(s), show(f), show(&a))
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Dimensions of one lift-weight piece of the standard cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyPiece {
    pub weight: i64,
    pub h0: usize,
    pub h1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    pub pieces: Vec<CohomologyPiece>,
    pub scan: ScanReport,
}

/// Coordinates of polynomials in a list of monomials.
fn coordinates(polys: &[SuperPoly]) -> (Vec<Monomial>, Matrix) {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let n = index.len();
            index.entry(m.clone()).or_insert(n);
        }
    }
    let mut rows = linalg::zeros(polys.len(), index.len());
    for (i, p) in polys.iter().enumerate() {
        for (m, c) in p.terms() {
            rows[i][index[m]] = c.clone();
        }
    }
    let mut monomials = vec![Monomial::one(); index.len()];
    for (m, i) in index {
        monomials[i] = m;
    }
    (monomials, rows)
}

fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

fn combine(chart: &Chart, basis: &[SuperPoly], v: &[Rational]) -> SuperPoly {
    basis.iter().zip(v).fold(SuperPoly::zero(chart), |acc, (b, c)| {
        if c.is_zero() {
            acc
        } else {
            &acc + &b.scale(c)
        }
    })
}

/// Whether `p` is in the span of `polys`.
fn in_span(polys: &[SuperPoly], p: &SuperPoly) -> bool {
    let (_, m) = coordinates(polys);
    let base = linalg::rank(&m);
    let mut all = polys.to_vec();
    all.push(p.clone());
    let (_, m) = coordinates(&all);
    linalg::rank(&m) == base
}

/// Kernel of a linear map with several components; `images[c][i]` is
/// component `c` of the image of `basis[i]`.
fn kernel(chart: &Chart, basis: &[SuperPoly], images: &[Vec<SuperPoly>]) -> Vec<SuperPoly> {
    let mut equations: Matrix = Vec::new();
    for component in images {
        let (monos, m) = coordinates(component);
        equations.extend(transpose(&m, monos.len()));
    }
    linalg::nullspace(&equations, basis.len())
        .into_iter()
        .map(|v| combine(chart, basis, &v))
        .collect()
}

/// Lift-weight graded pieces `H^{0,r}`, `H^{1,r}` for `r < k`, over a base
/// with no weight-(0,0) generators, and the module action
/// `f * [Υ] = [f Υ]`: closed products stay closed and shifting `Υ` by an
/// exact `Q_Θ g` shifts `f Υ` by an exact element.
pub fn weighted_cohomology_module_check(theta: &Potential) -> Result<ModuleReport> {
    let chart = theta.chart();
    let (axis, k) = weighting(chart)?;
    if let Some(g) = (0..chart.len()).find(|&g| chart.generator(g).weight.is_zero()) {
        return Err(Error::NonPointBase(format!(
            "generator `{}` has weight zero",
            chart.generator(g).name
        )));
    }
    let t = theta.theta();
    let top = k as i64 - 1;
    let q = |p: &SuperPoly| bracket_unchecked(t, p, chart);
    let functions: Vec<Vec<SuperPoly>> = (0..=2 * top).map(|r| spanning(chart, axis, r, 0)).collect();
    let mut closed0 = Vec::new();
    let mut closed1 = Vec::new();
    let mut exact1 = Vec::new();
    let mut pieces = Vec::new();
    for r in 0..=2 * top {
        let fs = &functions[r as usize];
        let z0 = kernel(chart, fs, &[fs.iter().map(q).collect()]);
        let sections = spanning(chart, axis, r, 1);
        let probes: Vec<&SuperPoly> = functions.iter().flatten().collect();
        let anchored = probes
            .iter()
            .map(|f| sections.iter().map(|s| courant::anchor_apply(theta, s, f)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let z1 = kernel(chart, &sections, &anchored);
        let b1: Vec<SuperPoly> = fs.iter().map(q).filter(|p| !p.is_zero()).collect();
        let (_, mb) = coordinates(&b1);
        let rank_b = linalg::rank(&mb);
        pieces.push(CohomologyPiece {
            weight: r,
            h0: z0.len(),
            h1: z1.len() - rank_b,
        });
        closed0.push(z0);
        closed1.push(z1);
        exact1.push(b1);
    }
    let mut scan = ScanReport::default();
    let show = |p: &SuperPoly| format_poly(p, chart);
    for (s, fs) in closed0.iter().enumerate() {
        for (r, us) in closed1.iter().enumerate() {
            let w = r + s;
            if w > 2 * top as usize {
                continue;
            }
            for f in fs {
                for u in us {
                    let fu = f * u;
                    let ok = fu.is_zero() || in_span(&closed1[w], &fu);
                    scan.record(ok, || format!("{} * {} is not closed", show(f), show(u)));
                    for g in &exact1[r] {
                        let shift = f * g;
                        let ok = shift.is_zero() || in_span(&exact1[w], &shift);
                        scan.record(ok, || {
                            format!("{} * {} changes the class of {}", show(f), show(g), show(&fu))
                        });
                    }
                }
            }
        }
    }
    Ok(ModuleReport { pieces, scan })
}

/// Tangency residual of a graph whose constraints respect both weights:
/// every constrained generator goes to zero or to a polynomial of its own
/// bi-weight.
pub fn weighted_dirac_check(theta: &Potential, graph: &LagrangianGraph) -> Result<SuperPoly> {
    let chart = theta.chart();
    weighting(chart)?;
    for (g, image) in graph.constraints(chart) {
        let w = &chart.generator(g).weight;
        if !lands_in(chart, &image, w) {
            return Err(Error::GraphMismatch(format!(
                "`{}` goes to `{}`, not of weight {w}",
                chart.generator(g).name,
                format_poly(&image, chart)
            )));
        }
    }
    dirac::tangency_residual(theta, graph)
}

/// Lift an instance's graph description by name.
pub fn lift_graph_spec(lift: &TangentLift, spec: &GraphSpec) -> Result<LagrangianGraph> {
    lift.lift_graph(&LagrangianGraph::from_spec(spec, lift.base())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{make_cotangent_antivb_chart, make_darboux_chart, validate_chart, Metric};
    use crate::courant::Verdict;
    use crate::gallery;
    use crate::sampling::{self, SampleConfig};
    use crate::superpoly::parse_expr;

    fn p(c: &Chart, s: &str) -> SuperPoly {
        parse_expr(s, c).unwrap()
    }

    fn single_axis() -> Vec<crate::instance::Instance> {
        gallery::build_all()
            .into_iter()
            .filter(|i| i.chart().axes() == 1)
            .collect()
    }

    #[test]
    fn lifted_charts_are_valid_and_nondegenerate() {
        let darboux = make_darboux_chart(1, 2, &Metric::diagonal(&[1, -1]).unwrap()).unwrap();
        for c in [darboux, make_cotangent_antivb_chart(1, 2)] {
            for k in [2, 3] {
                let l = tangent_lift_chart(&c, k).unwrap();
                assert_eq!(l.len(), k * c.len());
                assert!(validate_chart(&l).is_empty(), "{:?}", validate_chart(&l));
                assert!(linalg::inverse(l.pairing_matrix()).is_some());
                assert_eq!(l.lift_order(), Some(k));
            }
        }
        let c = make_darboux_chart(1, 1, &Metric::identity(1)).unwrap();
        assert!(matches!(tangent_lift_chart(&c, 1), Err(Error::LiftOrder(1))));
    }

    #[test]
    fn complete_lift_examples() {
        let c = make_darboux_chart(2, 1, &Metric::identity(1)).unwrap();
        let two = TangentLift::new(&c, 2).unwrap();
        let l = two.chart();
        assert_eq!(two.lift(&p(&c, "x1")).unwrap(), p(l, "x1_1"));
        let f = two.lift(&p(&c, "f(x1)")).unwrap();
        assert_eq!(f, p(l, "D[f; x1_0](x1_0)*x1_1"));
        let g = two.lift(&p(&c, "f()")).unwrap();
        assert_eq!(g, p(l, "D[f; x1_0](x1_0, x2_0)*x1_1 + D[f; x2_0](x1_0, x2_0)*x2_1"));
        let three = TangentLift::new(&c, 3).unwrap();
        let l = three.chart();
        assert_eq!(three.lift(&p(&c, "x1*x2")).unwrap(), p(l, "x1_0*x2_2 + x1_1*x2_1 + x1_2*x2_0"));
        let h = three.lift(&p(&c, "f(x1)")).unwrap();
        assert_eq!(h, p(l, "D[f; x1_0](x1_0)*x1_2 + 1/2*D[f; x1_0, x1_0](x1_0)*x1_1^2"));
        assert!(matches!(two.lift(&p(&c, "x1 + xi1")), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn mixed_bi_weights_lift_termwise() {
        let c = make_cotangent_antivb_chart(1, 3);
        let two = TangentLift::new(&c, 2).unwrap();
        let mixed = p(&c, "xi1*p1 + x1*xi1*xi2*xi3");
        let sum = &two.lift(&p(&c, "xi1*p1")).unwrap() + &two.lift(&p(&c, "x1*xi1*xi2*xi3")).unwrap();
        assert_eq!(two.lift(&mixed).unwrap(), sum);
        assert!(matches!(two.lift(&p(&c, "xi1 + xi1*p1")), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn lift_commutes_with_brackets_on_random_pairs() {
        let c = make_darboux_chart(2, 2, &Metric::diagonal(&[1, -1]).unwrap()).unwrap();
        let cfg = SampleConfig::default();
        let mut rng = sampling::rng(31);
        for k in [2, 3] {
            let lift = TangentLift::new(&c, k).unwrap();
            for _ in 0..25 {
                let a = sampling::random_homogeneous(&mut rng, &c, 3, &cfg);
                let b = sampling::random_homogeneous(&mut rng, &c, 3, &cfg);
                assert!(lift.identity_residual(&a, &b).unwrap().is_zero(), "k={k}");
            }
            let one = SuperPoly::one(&c);
            assert!(lift.identity_residual(&one, &one).unwrap().is_zero());
        }
    }

    #[test]
    fn lift_commutes_with_brackets_on_gallery_potentials() {
        for inst in single_axis() {
            if inst.chart().len() > 16 {
                continue;
            }
            let lift = TangentLift::new(inst.chart(), 3).unwrap();
            let t = inst.potential.theta();
            assert!(lift.identity_residual(t, t).unwrap().is_zero(), "{}", inst.name);
        }
    }

    #[test]
    fn lifting_preserves_the_verdict() {
        for inst in single_axis() {
            let lift = TangentLift::new(inst.chart(), 2).unwrap();
            let lifted = lift.lift_potential(&inst.potential).unwrap();
            let v = weighted_classify(&lifted).unwrap().verdict;
            assert_eq!(v, classify(&inst.potential).verdict, "{}", inst.name);
        }
        let cross = gallery::build("cross7").unwrap();
        let lifted = TangentLift::new(cross.chart(), 2).unwrap().lift_potential(&cross.potential).unwrap();
        assert_eq!(weighted_classify(&lifted).unwrap().verdict, Verdict::PreCourant);
    }

    #[test]
    fn twisted_vector_bundle_double() {
        let inst = gallery::build("vb_twisted").unwrap();
        let class = weighted_classify(&inst.potential).unwrap();
        assert_eq!(class.verdict, Verdict::PreCourant);
        let c = inst.chart();
        let d_twist = bracket_unchecked(&p(c, gallery::VB_THETA), &p(c, gallery::VB_TWIST), c);
        assert_eq!(class.master, d_twist.scale(&ratio(2, 1)));
        let plain = gallery::build("cross3").unwrap();
        assert!(weighted_classify(&plain.potential).is_err());
    }

    #[test]
    fn degree_one_weighting_changes_nothing() {
        for inst in single_axis() {
            let mut spec = inst.chart().to_spec();
            spec.axes = 2;
            for g in &mut spec.generators {
                g.weight.0.insert(0, 0);
            }
            let bw = inst.chart().bracket_weight().0[0];
            spec.bracket_weight = Some(vec![0, bw]);
            spec.symplectic_axes = Some(vec![1]);
            spec.metric = None;
            let c = Chart::from_spec(&spec).unwrap();
            assert_eq!(c.lift_order(), Some(1));
            let t = Potential::parse(&c, &format_poly(inst.potential.theta(), inst.chart())).unwrap();
            assert_eq!(weighted_classify(&t).unwrap().verdict, inst.expected, "{}", inst.name);
        }
    }

    #[test]
    fn weight_tables_hold() {
        for name in ["vb_untwisted", "vb_twisted", "vb_exact_twist"] {
            let inst = gallery::build(name).unwrap();
            let r = weight_table_check(&inst.potential).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.violations);
            assert!(r.checked > 0);
        }
        let cross = gallery::build("cross7").unwrap();
        let lifted = TangentLift::new(cross.chart(), 2).unwrap().lift_potential(&cross.potential).unwrap();
        let r = weight_table_check(&lifted).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.checked, 2 * 28 * 28 + 28);
        let small = gallery::build("cross3").unwrap();
        let lifted = TangentLift::new(small.chart(), 3).unwrap().lift_potential(&small.potential).unwrap();
        let r = weight_table_check(&lifted).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn core_sections_of_a_lift_bracket_to_zero() {
        let cross = gallery::build("cross7").unwrap();
        let lift = TangentLift::new(cross.chart(), 2).unwrap();
        let t = lift.lift_potential(&cross.potential).unwrap();
        let l = lift.chart();
        assert!(courant::pre_bracket(&t, &p(l, "pi1_0"), &p(l, "pi2_0")).unwrap().is_zero());
        assert_eq!(courant::pre_bracket(&t, &p(l, "pi1_1"), &p(l, "pi2_0")).unwrap(), p(l, "pi3_0"));
        assert_eq!(courant::pre_bracket(&t, &p(l, "pi1_1"), &p(l, "pi2_1")).unwrap(), p(l, "pi3_1"));
    }

    #[test]
    fn cohomology_pieces_of_a_lifted_point() {
        let so3 = gallery::build("so3_point").unwrap();
        let lift = TangentLift::new(so3.chart(), 2).unwrap();
        let t = lift.lift_potential(&so3.potential).unwrap();
        let r = weighted_cohomology_module_check(&t).unwrap();
        assert!(r.scan.passed(), "{:?}", r.scan.violations);
        let dims: Vec<(usize, usize)> = r.pieces.iter().map(|p| (p.h0, p.h1)).collect();
        assert_eq!(dims, vec![(1, 3), (0, 3), (0, 0)]);

        let zero = Potential::new(lift.chart(), SuperPoly::zero(lift.chart())).unwrap();
        let r = weighted_cohomology_module_check(&zero).unwrap();
        assert!(r.scan.passed());
        assert_eq!(r.pieces[0].h1 + r.pieces[1].h1, 6);

        let line = gallery::build("skew_action").unwrap();
        let lifted = TangentLift::new(line.chart(), 2).unwrap().lift_potential(&line.potential).unwrap();
        assert!(matches!(weighted_cohomology_module_check(&lifted), Err(Error::NonPointBase(_))));
    }

    #[test]
    fn module_action_on_a_weighted_point_with_functions() {
        // rank one bundle over a point: q has weight (1, 0)
        let c = gallery::vb_point_chart();
        let t = Potential::parse(&c, "dq1*y1").unwrap();
        let r = weighted_cohomology_module_check(&t).unwrap();
        assert!(r.scan.passed(), "{:?}", r.scan.violations);
        assert!(r.scan.checked > 0);
        assert_eq!(r.pieces[1].h0, 0);
        let flat = Potential::new(&c, SuperPoly::zero(&c)).unwrap();
        let r = weighted_cohomology_module_check(&flat).unwrap();
        assert!(r.scan.passed());
        assert_eq!(r.pieces[1].h0, 1);
    }

    #[test]
    fn weighted_dirac_graphs() {
        let graph = |name: &str| {
            let inst = gallery::build(name).unwrap();
            let g = LagrangianGraph::from_spec(inst.dirac.as_ref().unwrap(), inst.chart()).unwrap();
            (inst, g)
        };
        let (inst, g) = graph("vb_untwisted");
        assert!(weighted_dirac_check(&inst.potential, &g).unwrap().is_zero());
        let (inst, g) = graph("vb_exact_twist");
        assert!(weighted_dirac_check(&inst.potential, &g).unwrap().is_zero());
        assert_eq!(classify(&inst.potential).verdict, Verdict::Courant);
        let (inst, g) = graph("vb_twisted");
        let c = inst.chart();
        let residual = weighted_dirac_check(&inst.potential, &g).unwrap();
        let d_alpha = bracket_unchecked(&p(c, gallery::VB_THETA), &p(c, gallery::VB_TWO_FORM), c);
        assert_eq!(residual, &d_alpha + &p(c, gallery::VB_TWIST));
        assert!(!residual.is_zero());

        let bad = LagrangianGraph::TwoForm(p(c, "dx1*dx2"));
        assert!(matches!(weighted_dirac_check(&inst.potential, &bad), Err(Error::GraphMismatch(_))));
    }

    #[test]
    fn lifted_sub_dirac_graph_stays_tangent() {
        let cross = gallery::build("cross7").unwrap();
        let lift = TangentLift::new(cross.chart(), 2).unwrap();
        let t = lift.lift_potential(&cross.potential).unwrap();
        let g = lift_graph_spec(&lift, cross.dirac.as_ref().unwrap()).unwrap();
        assert!(weighted_dirac_check(&t, &g).unwrap().is_zero());
        // induced bracket on sections of lift weights p, q has weight p + q - 1
        let induced = dirac::induced_almost_lie(&t, &g).unwrap();
        let l = lift.chart();
        let w = |i: usize| l.generator(induced.generators[i]).weight.0[0];
        for i in 0..induced.generators.len() {
            for j in 0..induced.generators.len() {
                for (m, comp) in induced.bracket[i][j].iter().enumerate() {
                    if !comp.is_zero() {
                        assert_eq!(w(m), w(i) + w(j) - 1);
                    }
                }
            }
        }
    }

    #[test]
    fn lifted_two_form_graph_stays_tangent() {
        let c = make_cotangent_antivb_chart(2, 2);
        let t = Potential::parse(&c, "xi1*p1 + xi2*p2 - xi1*xi2*pi1").unwrap();
        let alpha = p(&c, "x1*xi1*xi2");
        let graph = LagrangianGraph::TwoForm(alpha);
        let base = dirac::tangency_residual(&t, &graph).unwrap();
        let lift = TangentLift::new(&c, 2).unwrap();
        let lt = lift.lift_potential(&t).unwrap();
        let lg = lift.lift_graph(&graph).unwrap();
        let residual = dirac::tangency_residual(&lt, &lg).unwrap();
        assert_eq!(residual, lift.lift(&base).unwrap());
    }
}
