//! Lagrangian graphs in cotangent charts, tangency of the homological
//! potential, and the almost Lie algebroids they carry.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::charts::Chart;
use crate::courant::{self, Potential};
use crate::error::{Error, Result};
use crate::instance::GraphSpec;
use crate::poisson::bracket_unchecked;
use crate::superpoly::{format_poly, parse_expr, ratio, SuperPoly};

/// A submanifold given as a graph over some of the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LagrangianGraph {
    /// Graph of a bivector `Λ` in the fibre momenta and base coordinates.
    Bivector(SuperPoly),
    /// Graph of the differential of a two-form `α` in the positions.
    TwoForm(SuperPoly),
    /// Zero locus of the listed generators.
    Coordinates(Vec<usize>),
}

fn require_cotangent(chart: &Chart) -> Result<()> {
    let covered = 2 * chart.cotangent_pairs().len();
    if covered == chart.len() && covered > 0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "graph constructions need every generator in a (position, momentum) pair".into(),
        ))
    }
}

fn only_mentions(p: &SuperPoly, allowed: &[usize], chart: &Chart) -> bool {
    (0..chart.len()).all(|g| allowed.contains(&g) || !p.mentions(g))
}

fn of_symplectic_weight(p: &SuperPoly, w: i64, chart: &Chart) -> bool {
    p.terms().all(|(m, _)| chart.symplectic_weight(&m.weight(chart)) == w)
}

impl LagrangianGraph {
    pub fn from_spec(spec: &GraphSpec, chart: &Chart) -> Result<Self> {
        let g = match spec {
            GraphSpec::Bivector { expr } => LagrangianGraph::Bivector(parse_expr(expr, chart)?),
            GraphSpec::Twoform { expr } => LagrangianGraph::TwoForm(parse_expr(expr, chart)?),
            GraphSpec::Coords { vanish } => LagrangianGraph::Coordinates(
                vanish
                    .iter()
                    .map(|n| chart.index_of(n).ok_or_else(|| Error::UnknownIdentifier(n.clone())))
                    .collect::<Result<_>>()?,
            ),
        };
        g.validate(chart)?;
        Ok(g)
    }

    /// Instance-file form of the graph.
    pub fn to_spec(&self, chart: &Chart) -> GraphSpec {
        match self {
            LagrangianGraph::Bivector(p) => GraphSpec::Bivector { expr: format_poly(p, chart) },
            LagrangianGraph::TwoForm(p) => GraphSpec::Twoform { expr: format_poly(p, chart) },
            LagrangianGraph::Coordinates(v) => GraphSpec::Coords {
                vanish: v.iter().map(|&g| chart.generator(g).name.clone()).collect(),
            },
        }
    }

    /// Generators that remain coordinates on the graph.
    pub fn kept(&self, chart: &Chart) -> Vec<usize> {
        let pairs = chart.cotangent_pairs();
        let mut kept: Vec<usize> = match self {
            LagrangianGraph::Bivector(_) => pairs
                .iter()
                .map(|&(q, m)| if chart.generator_symplectic_weight(q) == 0 { q } else { m })
                .collect(),
            LagrangianGraph::TwoForm(_) => pairs.iter().map(|&(q, _)| q).collect(),
            LagrangianGraph::Coordinates(vanish) => (0..chart.len()).filter(|g| !vanish.contains(g)).collect(),
        };
        kept.sort_unstable();
        kept
    }

    pub fn validate(&self, chart: &Chart) -> Result<()> {
        let kept = self.kept(chart);
        match self {
            LagrangianGraph::Bivector(p) | LagrangianGraph::TwoForm(p) => {
                require_cotangent(chart)?;
                if !p.belongs_to(chart) {
                    return Err(Error::ChartMismatch);
                }
                if !only_mentions(p, &kept, chart) || !of_symplectic_weight(p, 2, chart) {
                    return Err(Error::InvalidArgument(
                        "graph data must have symplectic weight 2 and live in the graph coordinates".into(),
                    ));
                }
                if p.parity().is_some_and(|q| q.is_odd()) {
                    return Err(Error::InvalidArgument("graph data must be even".into()));
                }
            }
            LagrangianGraph::Coordinates(vanish) => {
                if let Some(&g) = vanish.iter().find(|&&g| chart.generator_symplectic_weight(g) == 0) {
                    return Err(Error::InvalidArgument(format!(
                        "`{}` has symplectic weight 0 and cannot be set to zero",
                        chart.generator(g).name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Images of the constrained generators.
    pub fn constraints(&self, chart: &Chart) -> BTreeMap<usize, SuperPoly> {
        let mut out = BTreeMap::new();
        match self {
            LagrangianGraph::Bivector(lambda) => {
                for &(q, m) in chart.cotangent_pairs() {
                    let g = if chart.generator_symplectic_weight(q) == 0 { m } else { q };
                    out.insert(g, bracket_unchecked(lambda, &SuperPoly::generator(chart, g), chart));
                }
            }
            LagrangianGraph::TwoForm(alpha) => {
                for &(q, m) in chart.cotangent_pairs() {
                    out.insert(m, alpha.partial(chart, q));
                }
            }
            LagrangianGraph::Coordinates(vanish) => {
                for &g in vanish {
                    out.insert(g, SuperPoly::zero(chart));
                }
            }
        }
        out
    }
}

/// Restrict `p` to the graph by substituting the constraints.
pub fn pullback(chart: &Chart, graph: &LagrangianGraph, p: &SuperPoly) -> Result<SuperPoly> {
    if !p.belongs_to(chart) {
        return Err(Error::ChartMismatch);
    }
    Ok(p.substitute_generators(chart, &graph.constraints(chart)))
}

/// `Θ ∘ ι`: zero exactly when the graph is a (sub-)Dirac structure.
pub fn tangency_residual(theta: &Potential, graph: &LagrangianGraph) -> Result<SuperPoly> {
    graph.validate(theta.chart())?;
    pullback(theta.chart(), graph, theta.theta())
}

/// Mutual brackets of the surviving generators all vanish.
pub fn is_isotropic(chart: &Chart, vanish: &[usize]) -> bool {
    let kept: Vec<usize> = (0..chart.len()).filter(|g| !vanish.contains(g)).collect();
    kept.iter().all(|&g| kept.iter().all(|&h| chart.pairing(g, h).is_zero()))
}

fn momentum_degree(chart: &Chart, m: &crate::superpoly::Monomial) -> u32 {
    chart.cotangent_pairs().iter().map(|&(_, p)| m.exponent(p)).sum()
}

/// Split `Θ` by momentum degree into `(Θ_(2,1), Θ_(3,0))`. Terms of higher
/// momentum degree are an error: the potential is not projectable.
pub fn split_potential(theta: &Potential) -> Result<(SuperPoly, SuperPoly)> {
    let chart = theta.chart();
    require_cotangent(chart)?;
    let t = theta.theta();
    if t.terms().any(|(m, _)| momentum_degree(chart, m) > 1) {
        return Err(Error::InvalidArgument(
            "potential has terms quadratic in momenta".into(),
        ));
    }
    Ok((
        t.filter(|m| momentum_degree(chart, m) == 1),
        t.filter(|m| momentum_degree(chart, m) == 0),
    ))
}

/// `1/2 {Λ,{Λ,Θ_(2,1)}} + 1/3! {Λ,{Λ,{Λ,Θ_(3,0)}}}`.
pub fn bivector_closed_formula(theta: &Potential, lambda: &SuperPoly) -> Result<SuperPoly> {
    let chart = theta.chart();
    let (t21, t30) = split_potential(theta)?;
    let ad = |p: &SuperPoly| bracket_unchecked(lambda, p, chart);
    Ok(&ad(&ad(&t21)).scale(&ratio(1, 2)) + &ad(&ad(&ad(&t30))).scale(&ratio(1, 6)))
}

/// `d_E α + Θ_(3,0)` with `d_E α = {Θ_(2,1), α}`.
pub fn two_form_closed_formula(theta: &Potential, alpha: &SuperPoly) -> Result<SuperPoly> {
    let (t21, t30) = split_potential(theta)?;
    Ok(&bracket_unchecked(&t21, alpha, theta.chart()) + &t30)
}

/// Almost Lie algebroid induced on a Dirac structure. Sections are the
/// weight-1 generators of the vanishing ideal, `c_g = g - g∘ι`.
#[derive(Clone, Debug)]
pub struct InducedAlgebroid {
    pub graph: LagrangianGraph,
    /// Constrained generators of symplectic weight 1, one per section.
    pub generators: Vec<usize>,
    pub sections: Vec<SuperPoly>,
    /// Surviving generators of symplectic weight 0.
    pub base: Vec<usize>,
    /// `bracket[i][j][k]`: coefficient of `c_k` in `⟦c_i, c_j⟧` on the graph.
    pub bracket: Vec<Vec<Vec<SuperPoly>>>,
    /// `anchor[i][a]`: `ρ(c_i) x^a` on the graph.
    pub anchor: Vec<Vec<SuperPoly>>,
}

/// Coefficients of `p = Σ_k f_k c_k + (vanishing on the graph)` along the
/// sections, restricted to the graph.
fn components_along(
    chart: &Chart,
    constraints: &BTreeMap<usize, SuperPoly>,
    generators: &[usize],
    p: &SuperPoly,
) -> Vec<SuperPoly> {
    generators
        .iter()
        .map(|&k| p.partial(chart, k).substitute_generators(chart, constraints))
        .collect()
}

pub fn induced_almost_lie(theta: &Potential, graph: &LagrangianGraph) -> Result<InducedAlgebroid> {
    let residual = tangency_residual(theta, graph)?;
    if !residual.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "potential is not tangent to the graph: {}",
            residual.display(theta.chart())
        )));
    }
    let chart = theta.chart();
    let constraints = graph.constraints(chart);
    let generators: Vec<usize> = constraints
        .keys()
        .copied()
        .filter(|&g| chart.generator_symplectic_weight(g) == 1)
        .collect();
    let sections: Vec<SuperPoly> = generators
        .iter()
        .map(|&g| &SuperPoly::generator(chart, g) - &constraints[&g])
        .collect();
    let base: Vec<usize> = graph
        .kept(chart)
        .into_iter()
        .filter(|&g| chart.generator_symplectic_weight(g) == 0)
        .collect();
    let pb = |p: &SuperPoly| p.substitute_generators(chart, &constraints);
    let mut bracket = Vec::with_capacity(sections.len());
    for ci in &sections {
        let mut row = Vec::with_capacity(sections.len());
        for cj in &sections {
            let b = courant::pre_bracket(theta, ci, cj)?;
            row.push(components_along(chart, &constraints, &generators, &b));
        }
        bracket.push(row);
    }
    let anchor = sections
        .iter()
        .map(|c| {
            base.iter()
                .map(|&a| courant::anchor_apply(theta, c, &SuperPoly::generator(chart, a)).map(|v| pb(&v)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InducedAlgebroid {
        graph: graph.clone(),
        generators,
        sections,
        base,
        bracket,
        anchor,
    })
}

impl InducedAlgebroid {
    /// `⟦c_i, c_j⟧ ∘ ι` for every pair; all zero when the bracket closes.
    pub fn closure_residuals(&self, theta: &Potential) -> Result<Vec<SuperPoly>> {
        let chart = theta.chart();
        let mut out = Vec::new();
        for ci in &self.sections {
            for cj in &self.sections {
                out.push(pullback(chart, &self.graph, &courant::pre_bracket(theta, ci, cj)?)?);
            }
        }
        Ok(out)
    }

    /// Symmetry defects `⟦c_i,c_j⟧ + ⟦c_j,c_i⟧` (sections are odd).
    pub fn symmetry_residuals(&self, theta: &Potential) -> Result<Vec<SuperPoly>> {
        let mut out = Vec::new();
        for ci in &self.sections {
            for cj in &self.sections {
                out.push(courant::symmetry_defect(theta, ci, cj)?);
            }
        }
        Ok(out)
    }

    fn rho(&self, chart: &Chart, i: usize, f: &SuperPoly) -> SuperPoly {
        let mut out = SuperPoly::zero(chart);
        for (a, &x) in self.base.iter().enumerate() {
            out = &out + &(&self.anchor[i][a] * &f.partial(chart, x));
        }
        out
    }

    /// Anchor morphism residuals from the tables:
    /// `Σ_k C_ij^k ρ_k(x^a) - ρ_i ρ_j x^a + ρ_j ρ_i x^a`. For an almost Lie
    /// algebroid these vanish, which is `d_E^2 f = 0` on base functions.
    pub fn anchor_morphism_residuals(&self, chart: &Chart) -> Vec<SuperPoly> {
        let n = self.sections.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (a, _) in self.base.iter().enumerate() {
                    let mut r = SuperPoly::zero(chart);
                    for k in 0..n {
                        r = &r + &(&self.bracket[i][j][k] * &self.anchor[k][a]);
                    }
                    r = &r - &self.rho(chart, i, &self.anchor[j][a]);
                    r = &r + &self.rho(chart, j, &self.anchor[i][a]);
                    out.push(r);
                }
            }
        }
        out
    }

    fn components(&self, chart: &Chart, p: &SuperPoly) -> Vec<SuperPoly> {
        components_along(chart, &self.graph.constraints(chart), &self.generators, p)
    }

    /// Quasi-derivation rule `⟦c_i, f c_j⟧ = (ρ_i f) c_j + f ⟦c_i, c_j⟧` for
    /// base coordinates `f`: components of the ambient bracket against the
    /// tables.
    pub fn quasi_derivation_residuals(&self, theta: &Potential) -> Result<Vec<SuperPoly>> {
        let chart = theta.chart();
        let n = self.sections.len();
        let mut out = Vec::new();
        for &a in &self.base {
            let f = SuperPoly::generator(chart, a);
            for i in 0..n {
                let rho_f = self.rho(chart, i, &f);
                for j in 0..n {
                    let b = courant::pre_bracket(theta, &self.sections[i], &(&f * &self.sections[j]))?;
                    for (k, got) in self.components(chart, &b).into_iter().enumerate() {
                        let mut expect = &f * &self.bracket[i][j][k];
                        if k == j {
                            expect = &expect + &rho_f;
                        }
                        out.push(&got - &expect);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Components of `J(c_i, c_j, c_k)` along the sections.
    pub fn jacobiator(&self, theta: &Potential, i: usize, j: usize, k: usize) -> Result<Vec<SuperPoly>> {
        let s = &self.sections;
        let chart = theta.chart();
        Ok(self.components(chart, &courant::jacobiator(theta, &s[i], &s[j], &s[k])?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::make_cotangent_antivb_chart;
    use crate::gallery;
    use crate::sampling::{self, SampleConfig};
    use crate::superpoly::{int, Parity, WeightVec};

    fn graph(inst: &crate::instance::Instance) -> LagrangianGraph {
        LagrangianGraph::from_spec(inst.dirac.as_ref().unwrap(), inst.chart()).unwrap()
    }

    fn all_zero(v: &[SuperPoly]) -> bool {
        v.iter().all(SuperPoly::is_zero)
    }

    #[test]
    fn cross_product_is_recovered_on_the_momentum_span() {
        let inst = gallery::build("cross7").unwrap();
        let c = inst.chart();
        let g = graph(&inst);
        assert!(tangency_residual(&inst.potential, &g).unwrap().is_zero());
        let alg = induced_almost_lie(&inst.potential, &g).unwrap();
        let consts = gallery::constants_from_triples(&gallery::CROSS7_TRIPLES);
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    let mut expect = 0;
                    for &(a, b, d, s) in &consts {
                        if d == k + 1 && (a, b) == (i + 1, j + 1) {
                            expect += s;
                        }
                        if d == k + 1 && (b, a) == (i + 1, j + 1) {
                            expect -= s;
                        }
                    }
                    assert_eq!(alg.bracket[i][j][k], SuperPoly::constant(c, int(expect)));
                }
            }
        }
        // J(e1, e2, e4) = -2 e7 for the printed table
        let j = alg.jacobiator(&inst.potential, 0, 1, 3).unwrap();
        assert_eq!(j[6], SuperPoly::constant(c, int(-2)));
    }

    #[test]
    fn zero_section_of_an_almost_lie_cotangent_bundle() {
        let inst = gallery::build("almost_cotangent").unwrap();
        let c = inst.chart();
        let g = graph(&inst);
        let alg = induced_almost_lie(&inst.potential, &g).unwrap();
        assert_eq!(alg.sections.len(), 3);
        assert_eq!(alg.base, vec![c.index_of("x1").unwrap()]);
        // the potential ξ^1 p_1 anchors e1 to -d/dx; [e1,e2] = e3, [e2,e3] = e2
        assert_eq!(alg.anchor[0][0], SuperPoly::constant(c, int(-1)));
        assert!(alg.anchor[1][0].is_zero());
        assert_eq!(alg.bracket[0][1][2], SuperPoly::one(c));
        assert_eq!(alg.bracket[1][2][1], SuperPoly::one(c));
        assert!(all_zero(&alg.closure_residuals(&inst.potential).unwrap()));
        assert!(all_zero(&alg.symmetry_residuals(&inst.potential).unwrap()));
        assert!(all_zero(&alg.anchor_morphism_residuals(c)));
        assert!(all_zero(&alg.quasi_derivation_residuals(&inst.potential).unwrap()));
    }

    #[test]
    fn courant_ambient_gives_lie_algebra() {
        let inst = gallery::build("cross3").unwrap();
        let alg = induced_almost_lie(&inst.potential, &graph(&inst)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(all_zero(&alg.jacobiator(&inst.potential, i, j, k).unwrap()));
                }
            }
        }
    }

    fn random_projectable(rng: &mut sampling::SampleRng, c: &Chart) -> Potential {
        let cfg = SampleConfig::default();
        let t21 = sampling::random_of(rng, c, Parity::Odd, &WeightVec(vec![2, 1]), &cfg);
        let t30 = sampling::random_of(rng, c, Parity::Odd, &WeightVec(vec![3, 0]), &cfg);
        Potential::new(c, &t21 + &t30).unwrap()
    }

    #[test]
    fn bivector_pullback_matches_closed_formula() {
        let c = make_cotangent_antivb_chart(2, 3);
        let mut rng = sampling::rng(5);
        let cfg = SampleConfig::default();
        let mut nontrivial = 0;
        for _ in 0..30 {
            let theta = random_projectable(&mut rng, &c);
            let lambda = sampling::random_of(&mut rng, &c, Parity::Even, &WeightVec(vec![0, 2]), &cfg);
            let g = LagrangianGraph::Bivector(lambda.clone());
            g.validate(&c).unwrap();
            let lhs = tangency_residual(&theta, &g).unwrap();
            assert_eq!(lhs, bivector_closed_formula(&theta, &lambda).unwrap());
            nontrivial += usize::from(!lhs.is_zero());
        }
        assert!(nontrivial > 10);
    }

    #[test]
    fn two_form_residual_is_d_alpha_plus_cubic() {
        let c = make_cotangent_antivb_chart(2, 3);
        let mut rng = sampling::rng(9);
        let cfg = SampleConfig::default();
        for _ in 0..30 {
            let theta = random_projectable(&mut rng, &c);
            let alpha = sampling::random_of(&mut rng, &c, Parity::Even, &WeightVec(vec![2, 0]), &cfg);
            let g = LagrangianGraph::TwoForm(alpha.clone());
            assert_eq!(
                tangency_residual(&theta, &g).unwrap(),
                two_form_closed_formula(&theta, &alpha).unwrap()
            );
        }
    }

    #[test]
    fn two_form_graph_with_cubic_term_minus_d_alpha_is_dirac() {
        let c = make_cotangent_antivb_chart(2, 3);
        let theta0 = parse_expr("xi1*p1 + x1*xi2*p2 + xi1*xi2*pi3", &c).unwrap();
        let alpha = parse_expr("x2*xi1*xi3 + xi2*xi3", &c).unwrap();
        let d_alpha = bracket_unchecked(&theta0, &alpha, &c);
        assert!(!d_alpha.is_zero());
        let theta = Potential::new(&c, &theta0 - &d_alpha).unwrap();
        let g = LagrangianGraph::TwoForm(alpha);
        assert!(tangency_residual(&theta, &g).unwrap().is_zero());
        let alg = induced_almost_lie(&theta, &g).unwrap();
        assert!(all_zero(&alg.closure_residuals(&theta).unwrap()));
        assert!(all_zero(&alg.symmetry_residuals(&theta).unwrap()));
        assert!(all_zero(&alg.quasi_derivation_residuals(&theta).unwrap()));
    }

    #[test]
    fn isotropy_of_coordinate_spans() {
        let c = make_cotangent_antivb_chart(1, 2);
        let idx = |s: &str| c.index_of(s).unwrap();
        assert!(is_isotropic(&c, &[idx("p1"), idx("pi1"), idx("pi2")]));
        assert!(!is_isotropic(&c, &[idx("p1"), idx("pi2")]));
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        let c = make_cotangent_antivb_chart(1, 2);
        let bad = LagrangianGraph::Bivector(parse_expr("xi1*pi2", &c).unwrap());
        assert!(bad.validate(&c).is_err());
        let bad = LagrangianGraph::TwoForm(parse_expr("pi1*pi2", &c).unwrap());
        assert!(bad.validate(&c).is_err());
        let bad = LagrangianGraph::Coordinates(vec![c.index_of("x1").unwrap()]);
        assert!(bad.validate(&c).is_err());
        let theta = Potential::parse(&c, "xi1*p1 + pi1*pi2*xi1").unwrap();
        assert!(split_potential(&theta).is_err());
    }

    #[test]
    fn induced_structure_needs_tangency() {
        let inst = gallery::build("vb_twisted").unwrap();
        let g = graph(&inst);
        assert!(induced_almost_lie(&inst.potential, &g).is_err());
    }
}
