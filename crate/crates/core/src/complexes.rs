//! The standard complex `(C∞(M), Q_Θ)` and the naive complex of forms
//! killed by every contraction `ι_f`, with their comparison to the classical
//! alternating-sum differential.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::charts::Chart;
use crate::courant::{self, Potential};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poisson::{bracket_unchecked, parity_of};
use crate::superpoly::{format_poly, sign, Monomial, Parity, Rational, SuperPoly};

fn own(theta: &Potential, p: &SuperPoly) -> Result<()> {
    if p.belongs_to(theta.chart()) {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

/// `Q_Θ α = {Θ, α}`.
pub fn q_theta(theta: &Potential, a: &SuperPoly) -> Result<SuperPoly> {
    own(theta, a)?;
    Ok(bracket_unchecked(theta.theta(), a, theta.chart()))
}

/// `ι_f α = (-1)^f {{Θ, f}, α}` for a base function `f`.
pub fn iota(theta: &Potential, f: &SuperPoly, a: &SuperPoly) -> Result<SuperPoly> {
    let pf = theta.base_parity(f)?;
    own(theta, a)?;
    Ok(iota_raw(theta, pf, f, a))
}

fn iota_raw(theta: &Potential, pf: Parity, f: &SuperPoly, a: &SuperPoly) -> SuperPoly {
    let chart = theta.chart();
    bracket_unchecked(&bracket_unchecked(theta.theta(), f, chart), a, chart).scale(&sign(pf.is_odd()))
}

/// Generators a naive form may be built from: symplectic weight 0 or 1.
fn naive_generators(chart: &Chart) -> Vec<usize> {
    (0..chart.len())
        .filter(|&g| matches!(chart.generator_symplectic_weight(g), 0 | 1))
        .collect()
}

/// Whether `α` lies in the naive complex: built from base functions and
/// weight-one generators only, and killed by `ι_b` for every base
/// generator `b` and every formal function of the base.
pub fn naive_membership(theta: &Potential, a: &SuperPoly) -> bool {
    naive_violation(theta, a).is_none()
}

fn naive_violation(theta: &Potential, a: &SuperPoly) -> Option<String> {
    let chart = theta.chart();
    if !a.belongs_to(chart) {
        return Some("polynomial from another chart".into());
    }
    let allowed = naive_generators(chart);
    for (m, _) in a.terms() {
        if let Some(g) = m.generators().find(|g| !allowed.contains(g)) {
            return Some(format!("mentions `{}`", chart.generator(g).name));
        }
    }
    let mut probes: Vec<SuperPoly> = chart
        .base_sector()
        .into_iter()
        .map(|b| SuperPoly::generator(chart, b))
        .collect();
    if !chart.function_args().is_empty() {
        probes.push(SuperPoly::function(chart, "f"));
    }
    for f in &probes {
        let pf = parity_of(f).unwrap_or(Parity::Even);
        let c = iota_raw(theta, pf, f, a);
        if !c.is_zero() {
            return Some(format!(
                "ι_{} gives {}",
                format_poly(f, chart),
                format_poly(&c, chart)
            ));
        }
    }
    None
}

/// `ι_f(Q_Θ α) + (-1)^f Q_Θ(ι_f α) - {{Θ, {Θ, f}}, α}`, zero for every
/// potential.
pub fn naive_commutator_defect(theta: &Potential, f: &SuperPoly, a: &SuperPoly) -> Result<SuperPoly> {
    let pf = theta.base_parity(f)?;
    own(theta, a)?;
    let chart = theta.chart();
    let t = theta.theta();
    let lhs = iota_raw(theta, pf, f, &bracket_unchecked(t, a, chart));
    let rhs = bracket_unchecked(t, &iota_raw(theta, pf, f, a), chart).scale(&sign(pf.is_odd()));
    let dd = bracket_unchecked(&bracket_unchecked(t, &bracket_unchecked(t, f, chart), chart), a, chart);
    Ok(&(&lhs + &rhs) - &dd)
}

/// Weight-one generators as sections.
pub fn section_basis(chart: &Chart) -> Vec<SuperPoly> {
    chart
        .generators_of_symplectic_weight(1)
        .into_iter()
        .map(|g| SuperPoly::generator(chart, g))
        .collect()
}

/// `β(s_1, .., s_k) = {..{{β, s_1}, s_2}.., s_k}`.
pub fn evaluate_form(chart: &Chart, beta: &SuperPoly, sections: &[&SuperPoly]) -> SuperPoly {
    sections
        .iter()
        .fold(beta.clone(), |acc, s| bracket_unchecked(&acc, s, chart))
}

/// Values of a cochain on strictly increasing tuples of basis indices.
pub type CochainValues = BTreeMap<Vec<usize>, SuperPoly>;

/// Degree of a form in the weight-one generators, `None` if mixed.
fn form_degree(chart: &Chart, a: &SuperPoly) -> Option<usize> {
    let mut degree = None;
    for (m, _) in a.terms() {
        let d = m
            .generators()
            .filter(|&g| chart.generator_symplectic_weight(g) == 1)
            .map(|g| m.exponent(g) as usize)
            .sum::<usize>();
        if degree.is_some_and(|e| e != d) {
            return None;
        }
        degree = Some(d);
    }
    Some(degree.unwrap_or(0))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn check_basis(theta: &Potential, basis: &[SuperPoly]) -> Result<()> {
    for s in basis {
        if theta.section_parity(s)? != Parity::Odd {
            return Err(Error::InvalidArgument(format!(
                "basis section `{}` is not odd",
                format_poly(s, theta.chart())
            )));
        }
    }
    Ok(())
}

/// Tuples on which a `k+1` cochain built from a form can be nonzero: at
/// least `k-1` entries must pair nontrivially with the form.
fn support(hits: &[bool], k: usize) -> Vec<Vec<usize>> {
    combinations(hits.len(), k + 1)
        .into_iter()
        .filter(|t| t.iter().filter(|&&i| hits[i]).count() + 1 >= k)
        .collect()
}

/// A basis of sections with everything the classical differential needs:
/// anchor images of the base coordinates, pairwise pre-brackets and the
/// dual basis.
pub struct SectionFrame<'a> {
    theta: &'a Potential,
    basis: Vec<SuperPoly>,
    base: Vec<usize>,
    /// `anchor[i][b] = ρ(e_i) x^b`.
    anchor: Vec<Vec<SuperPoly>>,
    brackets: Vec<Vec<SuperPoly>>,
    dual: Vec<SuperPoly>,
}

impl<'a> SectionFrame<'a> {
    pub fn new(theta: &'a Potential, basis: &[SuperPoly]) -> Result<Self> {
        check_basis(theta, basis)?;
        let chart = theta.chart();
        let base = chart.base_sector();
        let anchor = basis
            .iter()
            .map(|s| {
                base.iter()
                    .map(|&b| courant::anchor_apply(theta, s, &SuperPoly::generator(chart, b)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let brackets = basis
            .iter()
            .map(|s| basis.iter().map(|q| courant::pre_bracket(theta, s, q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let dual = dual_basis(chart, basis)?;
        Ok(SectionFrame {
            theta,
            basis: basis.to_vec(),
            base,
            anchor,
            brackets,
            dual,
        })
    }

    /// `ρ(e_i) f` by the chain rule.
    fn rho(&self, i: usize, f: &SuperPoly) -> SuperPoly {
        let chart = self.theta.chart();
        self.base
            .iter()
            .zip(&self.anchor[i])
            .filter(|(_, a)| !a.is_zero())
            .fold(SuperPoly::zero(chart), |acc, (&b, a)| &acc + &(a * &f.partial(chart, b)))
    }

    /// Values of the classical differential of the degree `k` cochain `ψ`.
    fn classical_values(&self, psi: &SuperPoly, k: usize) -> CochainValues {
        let chart = self.theta.chart();
        let basis = &self.basis;
        let hits: Vec<bool> = basis
            .iter()
            .map(|s| !bracket_unchecked(psi, s, chart).is_zero())
            .collect();
        let anchored = self.anchor.iter().any(|row| row.iter().any(|a| !a.is_zero()));
        let mut evals: HashMap<Vec<usize>, SuperPoly> = HashMap::new();
        let mut eval = |idx: &[usize]| -> Option<SuperPoly> {
            if !idx.iter().all(|&i| hits[i]) {
                return None;
            }
            let v = evals
                .entry(idx.to_vec())
                .or_insert_with(|| {
                    let ss: Vec<&SuperPoly> = idx.iter().map(|&i| &basis[i]).collect();
                    evaluate_form(chart, psi, &ss)
                })
                .clone();
            (!v.is_zero()).then_some(v)
        };
        let mut values = CochainValues::new();
        for t in support(&hits, k) {
            let mut total = SuperPoly::zero(chart);
            if anchored {
                for (pos, &i) in t.iter().enumerate() {
                    let rest: Vec<usize> = t.iter().copied().filter(|&j| j != i).collect();
                    if let Some(v) = eval(&rest) {
                        total = &total + &self.rho(i, &v).scale(&sign(pos % 2 == 1));
                    }
                }
            }
            for pi in 0..t.len() {
                for pj in pi + 1..t.len() {
                    let (i, j) = (t[pi], t[pj]);
                    if self.brackets[i][j].is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = t.iter().copied().filter(|&l| l != i && l != j).collect();
                    if let Some(v) = eval(&rest) {
                        // Ψ(c, rest) = (-1)^{k-1} Ψ(rest, c) for odd entries.
                        let r = bracket_unchecked(&v, &self.brackets[i][j], chart);
                        total = &total + &r.scale(&sign((pi + pj + k + 1) % 2 == 1));
                    }
                }
            }
            if !total.is_zero() {
                values.insert(t, total.scale(&identification_sign(k)));
            }
        }
        values
    }

    /// The form whose cochain has the given values on increasing tuples of
    /// `arity` basis sections.
    fn form_from_values(&self, values: &CochainValues, arity: usize) -> Result<SuperPoly> {
        let chart = self.theta.chart();
        let mut out = SuperPoly::zero(chart);
        for (t, v) in values {
            let eta = t.iter().fold(SuperPoly::one(chart), |acc, &i| &acc * &self.dual[i]);
            let ss: Vec<&SuperPoly> = t.iter().map(|&i| &self.basis[i]).collect();
            let norm = evaluate_form(chart, &eta, &ss)
                .as_constant()
                .filter(|c| !c.is_zero())
                .ok_or_else(|| Error::InvalidArgument("basis does not separate forms".into()))?;
            let c = identification_sign(arity) / norm;
            out = &out + &(v * &eta).scale(&c);
        }
        Ok(out)
    }

    /// See [`classical_naive_differential`].
    pub fn classical_differential(&self, psi: &SuperPoly) -> Result<SuperPoly> {
        own(self.theta, psi)?;
        let chart = self.theta.chart();
        if psi.is_zero() {
            return Ok(SuperPoly::zero(chart));
        }
        if let Some(why) = naive_violation(self.theta, psi) {
            return Err(Error::NotNaive(why));
        }
        let k = form_degree(chart, psi)
            .ok_or_else(|| Error::Inhomogeneous(format!("`{}` mixes form degrees", format_poly(psi, chart))))?;
        self.form_from_values(&self.classical_values(psi, k), k + 1)
    }
}

/// Sign of the identification of a `k`-form with a cochain on sections:
/// `Φ(β)(e_1, .., e_k) = (-1)^{k(k+1)/2} β(e_1, .., e_k)`.
fn identification_sign(k: usize) -> Rational {
    sign((k * (k + 1) / 2) % 2 == 1)
}

/// Dual basis `d_a` with `{d_a, s_b} = δ_ab`; needs a constant,
/// nondegenerate Gram matrix.
fn dual_basis(chart: &Chart, basis: &[SuperPoly]) -> Result<Vec<SuperPoly>> {
    let n = basis.len();
    let mut gram: Matrix = linalg::zeros(n, n);
    for (a, sa) in basis.iter().enumerate() {
        for (b, sb) in basis.iter().enumerate() {
            gram[a][b] = bracket_unchecked(sa, sb, chart).as_constant().ok_or_else(|| {
                Error::InvalidArgument("basis sections must pair to constants".into())
            })?;
        }
    }
    let inv = linalg::inverse(&gram)
        .ok_or_else(|| Error::InvalidArgument("basis sections pair degenerately".into()))?;
    Ok((0..n)
        .map(|a| {
            basis.iter().enumerate().fold(SuperPoly::zero(chart), |acc, (c, s)| {
                if inv[a][c].is_zero() {
                    acc
                } else {
                    &acc + &s.scale(&inv[a][c])
                }
            })
        })
        .collect())
}

/// The classical differential of the cochain attached to `ψ`,
/// `Σ_i (-1)^{i+1} ρ(e_i) Ψ(.., ê_i, ..) + Σ_{i<j} (-1)^{i+j} Ψ(⟦e_i, e_j⟧, ..)`,
/// read back as a form through the dual of `basis`. Equals `Q_Θ ψ` for `ψ`
/// in the naive complex.
pub fn classical_naive_differential(theta: &Potential, psi: &SuperPoly, basis: &[SuperPoly]) -> Result<SuperPoly> {
    SectionFrame::new(theta, basis)?.classical_differential(psi)
}

/// Constant-coefficient forms of degree `k` in the naive complex: the
/// kernel of every `ι_b` on products of `k` distinct weight-one generators.
pub fn naive_constant_forms(theta: &Potential, k: usize) -> Vec<SuperPoly> {
    let chart = theta.chart();
    let gens = chart.generators_of_symplectic_weight(1);
    let candidates: Vec<SuperPoly> = combinations(gens.len(), k)
        .into_iter()
        .map(|t| t.iter().fold(SuperPoly::one(chart), |acc, &i| &acc * &SuperPoly::generator(chart, gens[i])))
        .filter(|m| !m.is_zero())
        .collect();
    let mut rows: BTreeMap<(usize, Monomial), Vec<Rational>> = BTreeMap::new();
    for (col, m) in candidates.iter().enumerate() {
        for (bi, b) in chart.base_sector().into_iter().enumerate() {
            let f = SuperPoly::generator(chart, b);
            let pf = chart.generator(b).parity;
            for (mono, c) in iota_raw(theta, pf, &f, m).terms() {
                rows.entry((bi, mono.clone()))
                    .or_insert_with(|| vec![Rational::zero(); candidates.len()])[col] = c.clone();
            }
        }
    }
    let matrix: Matrix = rows.into_values().collect();
    linalg::nullspace(&matrix, candidates.len())
        .into_iter()
        .map(|v| {
            v.iter().zip(&candidates).fold(SuperPoly::zero(chart), |acc, (c, m)| {
                if c.is_zero() {
                    acc
                } else {
                    &acc + &m.scale(c)
                }
            })
        })
        .collect()
}

/// `(dim H⁰, dim H¹)` of the standard complex over a point: constants
/// killed by `Q_Θ`, and weight-one elements in the kernel of the anchor
/// modulo `Q_Θ` of constants.
pub fn cohomology_point(theta: &Potential) -> Result<(usize, usize)> {
    let chart = theta.chart();
    let base = chart.base_sector();
    if let Some(&b) = base.first() {
        return Err(Error::NonPointBase(format!(
            "chart has base generator `{}`",
            chart.generator(b).name
        )));
    }
    let sections = section_basis(chart);
    let one = SuperPoly::one(chart);
    let dq = bracket_unchecked(theta.theta(), &one, chart);
    let h0 = usize::from(dq.is_zero());
    // Over a point the anchor acts on constants only.
    let kernel = sections
        .iter()
        .filter(|s| courant::anchor_apply(theta, s, &one).is_ok_and(|v| v.is_zero()))
        .count();
    let mut exact: Matrix = Vec::new();
    if !dq.is_zero() {
        exact.push(
            sections
                .iter()
                .map(|s| {
                    let m = s.terms().next().map(|(m, _)| m.clone()).unwrap_or_else(Monomial::one);
                    dq.coefficient(&m)
                })
                .collect(),
        );
    }
    Ok((h0, kernel - linalg::rank(&exact)))
}

/// A nonzero `J(κ, e_i, e_j)` with `κ` a constant-coefficient element of
/// the naive complex in degree one.
#[derive(Clone, Debug)]
pub struct NaiveWitness {
    pub kappa: SuperPoly,
    pub left: SuperPoly,
    pub right: SuperPoly,
    pub value: SuperPoly,
}

pub fn naive_cohomology_witness(theta: &Potential) -> Result<Option<NaiveWitness>> {
    let basis = section_basis(theta.chart());
    for kappa in naive_constant_forms(theta, 1) {
        for e1 in &basis {
            for e2 in &basis {
                let value = courant::jacobiator(theta, &kappa, e1, e2)?;
                if !value.is_zero() {
                    return Ok(Some(NaiveWitness {
                        kappa,
                        left: e1.clone(),
                        right: e2.clone(),
                        value,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// `J_Θ(κ, ·, ·) = 0` on a spanning set of degree-one naive forms.
pub fn naive_cohomology_condition(theta: &Potential) -> Result<bool> {
    Ok(naive_cohomology_witness(theta)?.is_none())
}

/// Spanning elements of the naive complex up to degree `max_degree`:
/// constant-coefficient forms, and the same times each base coordinate.
pub fn naive_elements(theta: &Potential, max_degree: usize) -> Vec<SuperPoly> {
    let chart = theta.chart();
    let coeffs: Vec<SuperPoly> = std::iter::once(SuperPoly::one(chart))
        .chain(chart.base_sector().into_iter().map(|b| SuperPoly::generator(chart, b)))
        .collect();
    let mut out = Vec::new();
    for k in 0..=max_degree {
        let forms = if k == 0 { vec![SuperPoly::one(chart)] } else { naive_constant_forms(theta, k) };
        for a in &forms {
            for c in &coeffs {
                out.push(c * a);
            }
        }
    }
    out
}

/// First naive form of degree at most `max_degree` (constant coefficients,
/// or times a base coordinate) with `Q_Θ² α ≠ 0`.
pub fn naive_square_witness(theta: &Potential, max_degree: usize) -> Option<SuperPoly> {
    let chart = theta.chart();
    let t = theta.theta();
    let coeffs: Vec<SuperPoly> = std::iter::once(SuperPoly::one(chart))
        .chain(chart.base_sector().into_iter().map(|b| SuperPoly::generator(chart, b)))
        .collect();
    for k in 0..=max_degree {
        let forms = if k == 0 { vec![SuperPoly::one(chart)] } else { naive_constant_forms(theta, k) };
        for a in &forms {
            for c in &coeffs {
                let e = c * a;
                let qq = bracket_unchecked(t, &bracket_unchecked(t, &e, chart), chart);
                if !qq.is_zero() {
                    return Some(e);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{make_darboux_chart, Metric};
    use crate::courant::{classify, Verdict};
    use crate::gallery;
    use crate::sampling::{self, SampleConfig};
    use crate::superpoly::{parse_expr, ratio};

    fn p(c: &Chart, s: &str) -> SuperPoly {
        parse_expr(s, c).unwrap()
    }

    /// Constant-coefficient naive forms up to `max` and their multiples by
    /// base coordinates.

    #[test]
    fn q_theta_kills_constants() {
        let inst = gallery::build("twisted_pencil_l1").unwrap();
        let one = SuperPoly::one(inst.chart());
        assert!(q_theta(&inst.potential, &one).unwrap().is_zero());
    }

    #[test]
    fn commutator_defect_vanishes_on_random_potentials() {
        let c = make_darboux_chart(2, 3, &Metric::diagonal(&[1, -1, 2]).unwrap()).unwrap();
        let cfg = SampleConfig::default();
        let mut rng = sampling::rng(21);
        for _ in 0..120 {
            let t = Potential::new(&c, sampling::random_potential_poly(&mut rng, &c, &cfg)).unwrap();
            let f = sampling::random_base_function(&mut rng, &c, &cfg);
            let a = sampling::random_homogeneous(&mut rng, &c, 3, &cfg);
            assert!(naive_commutator_defect(&t, &f, &a).unwrap().is_zero());
        }
    }

    #[test]
    fn contraction_anticommutes_with_q_on_precourant_family() {
        let c = sampling::precourant_family_chart(2);
        let cfg = SampleConfig::default();
        let mut rng = sampling::rng(22);
        for _ in 0..40 {
            let t = Potential::new(&c, sampling::random_precourant(&mut rng, &c, &cfg)).unwrap();
            assert_ne!(classify(&t).verdict, Verdict::Nearly);
            let f = sampling::random_base_function(&mut rng, &c, &cfg);
            let a = sampling::random_homogeneous(&mut rng, &c, 3, &cfg);
            let lhs = iota(&t, &f, &q_theta(&t, &a).unwrap()).unwrap();
            let rhs = q_theta(&t, &iota(&t, &f, &a).unwrap()).unwrap();
            assert_eq!(lhs, -&rhs);
        }
    }

    #[test]
    fn double_contraction_is_half_the_pairing_of_df() {
        let c = make_darboux_chart(2, 3, &Metric::identity(3)).unwrap();
        let cfg = SampleConfig::default();
        let mut rng = sampling::rng(23);
        for _ in 0..30 {
            let t = Potential::new(&c, sampling::random_potential_poly(&mut rng, &c, &cfg)).unwrap();
            let f = sampling::random_base_function(&mut rng, &c, &cfg);
            let a = sampling::random_homogeneous(&mut rng, &c, 3, &cfg);
            let x = bracket_unchecked(t.theta(), &f, &c);
            let twice = iota(&t, &f, &iota(&t, &f, &a).unwrap()).unwrap();
            let half = bracket_unchecked(&bracket_unchecked(&x, &x, &c), &a, &c).scale(&ratio(1, 2));
            assert_eq!(twice, half);
        }
    }

    #[test]
    fn membership_examples() {
        let cross = gallery::build("cross7").unwrap();
        let c = cross.chart();
        assert!(naive_membership(&cross.potential, &SuperPoly::one(c)));
        assert!(naive_membership(&cross.potential, &p(c, "xi1*pi2*xi5")));

        let c = make_darboux_chart(1, 2, &Metric::identity(2)).unwrap();
        let t = Potential::parse(&c, "xi1*p1").unwrap();
        assert!(!naive_membership(&t, &p(&c, "xi1")));
        assert!(naive_membership(&t, &p(&c, "x1*xi2")));
        assert!(!naive_membership(&t, &p(&c, "p1")));
        assert!(iota(&t, &p(&c, "x1"), &p(&c, "x1^2")).unwrap().is_zero());
    }

    #[test]
    fn standard_complex_squares_to_zero_exactly_off_nearly() {
        for inst in gallery::build_all() {
            let t = &inst.potential;
            let chart = inst.chart();
            let nearly = inst.expected == Verdict::Nearly;
            let mut squares = chart.base_sector().into_iter().map(|b| {
                let x = SuperPoly::generator(chart, b);
                q_theta(t, &q_theta(t, &x).unwrap()).unwrap()
            });
            if nearly {
                assert!(squares.any(|q| !q.is_zero()), "{}", inst.name);
                continue;
            }
            assert!(squares.all(|q| q.is_zero()), "{}", inst.name);
            for a in naive_elements(t, 3) {
                let qa = q_theta(t, &a).unwrap();
                assert!(naive_membership(t, &qa), "{}: Q of {} left the complex", inst.name, a.display(chart));
            }
        }
    }

    #[test]
    fn nearly_instance_has_a_curved_contraction() {
        let inst = gallery::build("quasi_poisson").unwrap();
        let t = &inst.potential;
        let c = inst.chart();
        let found = c.base_sector().into_iter().any(|b| {
            let x = SuperPoly::generator(c, b);
            let dd = q_theta(t, &q_theta(t, &x).unwrap()).unwrap();
            section_basis(c).iter().any(|s| !bracket_unchecked(&dd, s, c).is_zero())
        });
        assert!(found);
    }

    #[test]
    fn classical_and_super_differentials_agree_on_the_gallery() {
        for inst in gallery::build_all() {
            if inst.expected == Verdict::Nearly {
                continue;
            }
            let t = &inst.potential;
            let frame = SectionFrame::new(t, &section_basis(inst.chart())).unwrap();
            for a in naive_elements(t, 3) {
                let classical = frame.classical_differential(&a).unwrap();
                assert_eq!(classical, q_theta(t, &a).unwrap(), "{}: {}", inst.name, a.display(inst.chart()));
            }
        }
    }

    #[test]
    fn classical_differential_on_the_precourant_family() {
        let c = sampling::precourant_family_chart(1);
        let cfg = SampleConfig::default();
        let mut rng = sampling::rng(24);
        let basis = section_basis(&c);
        for _ in 0..10 {
            let t = Potential::new(&c, sampling::random_precourant(&mut rng, &c, &cfg)).unwrap();
            let frame = SectionFrame::new(&t, &basis).unwrap();
            for a in naive_elements(&t, 2) {
                assert_eq!(frame.classical_differential(&a).unwrap(), q_theta(&t, &a).unwrap());
            }
        }
    }

    #[test]
    fn classical_differential_rejects_forms_outside_the_complex() {
        let c = make_darboux_chart(1, 2, &Metric::identity(2)).unwrap();
        let t = Potential::parse(&c, "xi1*p1").unwrap();
        let basis = section_basis(&c);
        assert!(matches!(
            classical_naive_differential(&t, &p(&c, "xi1"), &basis),
            Err(Error::NotNaive(_))
        ));
        assert!(classical_naive_differential(&t, &SuperPoly::zero(&c), &basis).unwrap().is_zero());
    }

    #[test]
    fn cohomology_over_a_point() {
        let so3 = gallery::build("so3_point").unwrap();
        assert_eq!(cohomology_point(&so3.potential).unwrap(), (1, 3));
        let cross = gallery::build("cross7_point").unwrap();
        assert_eq!(cohomology_point(&cross.potential).unwrap(), (1, 7));
        let empty = make_darboux_chart(0, 0, &Metric::identity(0)).unwrap();
        let zero = Potential::new(&empty, SuperPoly::zero(&empty)).unwrap();
        assert_eq!(cohomology_point(&zero).unwrap(), (1, 0));
        let line = gallery::build("skew_action").unwrap();
        assert!(matches!(cohomology_point(&line.potential), Err(Error::NonPointBase(_))));
    }

    #[test]
    fn naive_cohomology_condition_on_the_gallery() {
        for inst in gallery::build_all() {
            let t = &inst.potential;
            let holds = naive_cohomology_condition(t).unwrap();
            match inst.expected {
                Verdict::Courant => assert!(holds, "{}", inst.name),
                _ if inst.name.starts_with("cross7") => assert!(!holds, "{}", inst.name),
                _ => {}
            }
            if holds {
                assert_eq!(naive_square_witness(t, 3), None, "{}", inst.name);
            }
        }
        // the non-closed twist only breaks Jacobi off the degree-one naive forms
        let pencil = gallery::build("twisted_pencil_l1").unwrap();
        assert!(!naive_cohomology_condition(&pencil.potential).unwrap());
    }
}
