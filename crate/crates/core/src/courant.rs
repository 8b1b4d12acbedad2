//! Derived structures of an odd potential: pre-bracket, anchor, pairing,
//! Jacobiator, the defects measuring their failure, and classification.

use std::fmt;

use serde::Serialize;

use crate::charts::Chart;
use crate::error::{Error, Result};
use crate::poisson::{bracket_unchecked, koszul, parity_of};
use crate::superpoly::{format_poly, int, ratio, sign, Parity, SuperPoly};

/// An odd function of symplectic weight 3 (and lift weight `k - 1` on a
/// weighted chart).
#[derive(Clone, Debug)]
pub struct Potential {
    chart: Chart,
    theta: SuperPoly,
}

impl Potential {
    pub fn new(chart: &Chart, theta: SuperPoly) -> Result<Self> {
        if !theta.belongs_to(chart) {
            return Err(Error::ChartMismatch);
        }
        if theta.parity() != Some(Parity::Odd) && !theta.is_zero() {
            return Err(Error::InvalidPotential("potential must be odd".into()));
        }
        let lift = chart.lift_axis().zip(chart.lift_order());
        for (m, _) in theta.terms() {
            let w = m.weight(chart);
            if chart.symplectic_weight(&w) != 3 {
                return Err(Error::InvalidPotential(format!(
                    "term of weight {w} has symplectic weight {}, expected 3",
                    chart.symplectic_weight(&w)
                )));
            }
            if let Some((axis, k)) = lift {
                if w.0[axis] != k as i64 - 1 {
                    return Err(Error::InvalidPotential(format!(
                        "term of weight {w} has lift weight {}, expected {}",
                        w.0[axis],
                        k - 1
                    )));
                }
            }
        }
        Ok(Potential {
            chart: chart.clone(),
            theta,
        })
    }

    pub fn parse(chart: &Chart, text: &str) -> Result<Self> {
        Potential::new(chart, crate::superpoly::parse_expr(text, chart)?)
    }

    pub fn theta(&self) -> &SuperPoly {
        &self.theta
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// `{Θ, Θ}`.
    pub fn master(&self) -> SuperPoly {
        self.br(&self.theta, &self.theta)
    }

    fn br(&self, a: &SuperPoly, b: &SuperPoly) -> SuperPoly {
        bracket_unchecked(a, b, &self.chart)
    }

    fn own(&self, p: &SuperPoly) -> Result<()> {
        if p.belongs_to(&self.chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// Parity of a section, checking it has symplectic weight 1.
    pub fn section_parity(&self, s: &SuperPoly) -> Result<Parity> {
        self.own(s)?;
        for (m, _) in s.terms() {
            if self.chart.symplectic_weight(&m.weight(&self.chart)) != 1 {
                return Err(Error::Inhomogeneous(format!(
                    "`{}` is not of symplectic weight 1",
                    format_poly(s, &self.chart)
                )));
            }
        }
        parity_of(s)
    }

    /// Parity of a base function, checking it has symplectic weight 0.
    pub fn base_parity(&self, f: &SuperPoly) -> Result<Parity> {
        self.own(f)?;
        for (m, _) in f.terms() {
            if self.chart.symplectic_weight(&m.weight(&self.chart)) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "`{}` is not of symplectic weight 0",
                    format_poly(f, &self.chart)
                )));
            }
        }
        parity_of(f)
    }
}

/// `⟦σ, ψ⟧ = (-1)^σ {{Θ, σ}, ψ}`.
pub fn pre_bracket(theta: &Potential, s: &SuperPoly, p: &SuperPoly) -> Result<SuperPoly> {
    let ps = theta.section_parity(s)?;
    theta.section_parity(p)?;
    Ok(pre_bracket_raw(theta, ps, s, p))
}

fn pre_bracket_raw(theta: &Potential, ps: Parity, s: &SuperPoly, p: &SuperPoly) -> SuperPoly {
    theta
        .br(&theta.br(&theta.theta, s), p)
        .scale(&sign(ps.is_odd()))
}

/// `ρ(σ) f = (-1)^σ {{Θ, σ}, f}`.
pub fn anchor_apply(theta: &Potential, s: &SuperPoly, f: &SuperPoly) -> Result<SuperPoly> {
    let ps = theta.section_parity(s)?;
    theta.base_parity(f)?;
    Ok(anchor_raw(theta, ps, s, f))
}

fn anchor_raw(theta: &Potential, ps: Parity, s: &SuperPoly, f: &SuperPoly) -> SuperPoly {
    theta
        .br(&theta.br(&theta.theta, s), f)
        .scale(&sign(ps.is_odd()))
}

/// `⟨σ, ψ⟩ = {σ, ψ}`.
pub fn pairing(theta: &Potential, s: &SuperPoly, p: &SuperPoly) -> Result<SuperPoly> {
    theta.section_parity(s)?;
    theta.section_parity(p)?;
    Ok(theta.br(s, p))
}

/// `{Θ, f}`.
pub fn d_operator(theta: &Potential, f: &SuperPoly) -> Result<SuperPoly> {
    theta.base_parity(f)?;
    Ok(theta.br(&theta.theta, f))
}

fn section_parities(theta: &Potential, xs: &[&SuperPoly]) -> Result<Vec<Parity>> {
    xs.iter().map(|x| theta.section_parity(x)).collect()
}

/// `⟦σ,⟦ψ,λ⟧⟧ - ⟦⟦σ,ψ⟧,λ⟧ - (-1)^((σ+1)(ψ+1)) ⟦ψ,⟦σ,λ⟧⟧`.
pub fn jacobiator(theta: &Potential, s: &SuperPoly, p: &SuperPoly, l: &SuperPoly) -> Result<SuperPoly> {
    let ps = section_parities(theta, &[s, p, l])?;
    let (a, b) = (ps[0], ps[1]);
    let pb = |x: Parity, u: &SuperPoly, v: &SuperPoly| pre_bracket_raw(theta, x, u, v);
    let shifted = |x: Parity| x + Parity::Odd;
    let t1 = pb(a, s, &pb(b, p, l));
    let t2 = pb(a + b + Parity::Odd, &pb(a, s, p), l);
    let t3 = pb(b, p, &pb(a, s, l)).scale(&koszul(shifted(a), shifted(b)));
    Ok(&(&t1 - &t2) - &t3)
}

/// `(-1)^ψ ½ {{{{Θ,Θ}, σ}, ψ}, λ}`.
pub fn jacobiator_via_master(
    theta: &Potential,
    s: &SuperPoly,
    p: &SuperPoly,
    l: &SuperPoly,
) -> Result<SuperPoly> {
    let ps = section_parities(theta, &[s, p, l])?;
    let sigma = theta.master();
    let nested = theta.br(&theta.br(&theta.br(&sigma, s), p), l);
    Ok(nested.scale(&(ratio(1, 2) * sign(ps[1].is_odd()))))
}

/// `⟦σ,ψ⟧ + (-1)^((σ+1)(ψ+1)) ⟦ψ,σ⟧ - (-1)^σ {Θ, ⟨σ,ψ⟩}`.
pub fn symmetry_defect(theta: &Potential, s: &SuperPoly, p: &SuperPoly) -> Result<SuperPoly> {
    let ps = section_parities(theta, &[s, p])?;
    let (a, b) = (ps[0], ps[1]);
    let sym = pre_bracket_raw(theta, b, p, s).scale(&koszul(a + Parity::Odd, b + Parity::Odd));
    let exact = theta.br(&theta.theta, &theta.br(s, p)).scale(&sign(a.is_odd()));
    Ok(&(&pre_bracket_raw(theta, a, s, p) + &sym) - &exact)
}

/// Both sides of the anchor compatibility identity:
/// `[ρσ, ρψ] f - ρ(⟦σ,ψ⟧) f` and `½ (-1)^(f(σ+ψ) + ψ) {{{{Θ,Θ}, f}, σ}, ψ}`.
pub fn anchor_defect_sides(
    theta: &Potential,
    s: &SuperPoly,
    p: &SuperPoly,
    f: &SuperPoly,
) -> Result<(SuperPoly, SuperPoly)> {
    let ps = section_parities(theta, &[s, p])?;
    let pf = theta.base_parity(f)?;
    let (a, b) = (ps[0], ps[1]);
    let rho = |x: Parity, u: &SuperPoly, g: &SuperPoly| anchor_raw(theta, x, u, g);
    let commutator = &rho(a, s, &rho(b, p, f))
        - &rho(b, p, &rho(a, s, f)).scale(&koszul(a + Parity::Odd, b + Parity::Odd));
    let bracket_sp = pre_bracket_raw(theta, a, s, p);
    let lhs = &commutator - &rho(a + b + Parity::Odd, &bracket_sp, f);
    let master = theta.master();
    let nested = theta.br(&theta.br(&theta.br(&master, f), s), p);
    let exponent = (pf.is_odd() && (a + b).is_odd()) != b.is_odd();
    let rhs = nested.scale(&(ratio(1, 2) * sign(exponent)));
    Ok((lhs, rhs))
}

pub fn anchor_defect(theta: &Potential, s: &SuperPoly, p: &SuperPoly, f: &SuperPoly) -> Result<SuperPoly> {
    let (lhs, rhs) = anchor_defect_sides(theta, s, p, f)?;
    Ok(&lhs - &rhs)
}

/// `⟦σ, fψ⟧ - ρ(σ)f ψ - (-1)^(f(σ+1)) f ⟦σ,ψ⟧`.
pub fn leibniz_residual(theta: &Potential, s: &SuperPoly, f: &SuperPoly, p: &SuperPoly) -> Result<SuperPoly> {
    let a = theta.section_parity(s)?;
    theta.section_parity(p)?;
    let pf = theta.base_parity(f)?;
    let fp = f * p;
    let lhs = pre_bracket_raw(theta, a, s, &fp);
    let t1 = &anchor_raw(theta, a, s, f) * p;
    let t2 = (f * &pre_bracket_raw(theta, a, s, p)).scale(&koszul(pf, a + Parity::Odd));
    Ok(&(&lhs - &t1) - &t2)
}

/// `ρ(σ)⟨ψ,λ⟩ - ⟨⟦σ,ψ⟧,λ⟩ - (-1)^(ψ(σ+1)) ⟨ψ,⟦σ,λ⟧⟩`.
pub fn invariance_residual(theta: &Potential, s: &SuperPoly, p: &SuperPoly, l: &SuperPoly) -> Result<SuperPoly> {
    let ps = section_parities(theta, &[s, p, l])?;
    let (a, b) = (ps[0], ps[1]);
    let lhs = anchor_raw(theta, a, s, &theta.br(p, l));
    let t1 = theta.br(&pre_bracket_raw(theta, a, s, p), l);
    let t2 = theta
        .br(p, &pre_bracket_raw(theta, a, s, l))
        .scale(&koszul(b, a + Parity::Odd));
    Ok(&(&lhs - &t1) - &t2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Nearly,
    PreCourant,
    Courant,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Nearly => "Nearly",
            Verdict::PreCourant => "PreCourant",
            Verdict::Courant => "Courant",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Nearly" => Ok(Verdict::Nearly),
            "PreCourant" => Ok(Verdict::PreCourant),
            "Courant" => Ok(Verdict::Courant),
            other => Err(Error::InvalidArgument(format!("unknown verdict `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureClass {
    pub verdict: Verdict,
    /// `{Θ, Θ}`.
    pub master: SuperPoly,
    /// A base generator `b` with `{{Θ,Θ}, b} != 0`, and that value.
    pub witness: Option<(usize, SuperPoly)>,
}

/// Courant iff `{Θ,Θ} = 0`; pre-Courant iff `{{Θ,Θ}, b} = 0` for every
/// generator `b` of symplectic weight 0, which covers every base function
/// by the chain rule; nearly otherwise.
pub fn classify(theta: &Potential) -> StructureClass {
    let chart = &theta.chart;
    let master = theta.master();
    if master.is_zero() {
        return StructureClass {
            verdict: Verdict::Courant,
            master,
            witness: None,
        };
    }
    let witness = chart.base_sector().into_iter().find_map(|b| {
        let v = theta.br(&master, &SuperPoly::generator(chart, b));
        (!v.is_zero()).then_some((b, v))
    });
    StructureClass {
        verdict: if witness.is_some() {
            Verdict::Nearly
        } else {
            Verdict::PreCourant
        },
        master,
        witness,
    }
}

/// `{{Θ,Θ}, f}` for a formal function `f` of all base arguments: the
/// sampled counterpart of the structural test in [`classify`].
pub fn master_on_formal_function(theta: &Potential, name: &str) -> SuperPoly {
    let f = SuperPoly::function(&theta.chart, name);
    theta.br(&theta.master(), &f)
}

/// Structure functions of a potential on an affine Darboux chart,
/// `Θ = ξ^i Q_i^a p_a + 1/3! ξ^i ξ^j ξ^k Q_kji`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFunctions {
    /// `(i, a, Q_i^a)` with fibre index `i` and base index `a`, nonzero only.
    pub anchor: Vec<(usize, usize, SuperPoly)>,
    /// `(k, j, i, Q_kji)` with `k > j > i`, nonzero only.
    pub cubic: Vec<(usize, usize, usize, SuperPoly)>,
}

impl StructureFunctions {
    pub fn anchor_entry(&self, chart: &Chart, i: usize, a: usize) -> SuperPoly {
        self.anchor
            .iter()
            .find(|e| e.0 == i && e.1 == a)
            .map(|e| e.2.clone())
            .unwrap_or_else(|| SuperPoly::zero(chart))
    }

    /// `Q_kji` for any index order, using total antisymmetry.
    pub fn cubic_entry(&self, chart: &Chart, k: usize, j: usize, i: usize) -> SuperPoly {
        if k == j || j == i || k == i {
            return SuperPoly::zero(chart);
        }
        let mut idx = [k, j, i];
        let mut swaps = 0;
        for x in 0..3 {
            for y in 0..2 - x {
                if idx[y] < idx[y + 1] {
                    idx.swap(y, y + 1);
                    swaps += 1;
                }
            }
        }
        self.cubic
            .iter()
            .find(|e| (e.0, e.1, e.2) == (idx[0], idx[1], idx[2]))
            .map(|e| e.3.scale(&sign(swaps % 2 == 1)))
            .unwrap_or_else(|| SuperPoly::zero(chart))
    }

    /// Rebuild the potential from the tables.
    pub fn reassemble(&self, chart: &Chart) -> Result<SuperPoly> {
        let layout = chart.darboux().ok_or(Error::NotDarboux)?;
        let mut out = SuperPoly::zero(chart);
        for (i, a, q) in &self.anchor {
            let xi = SuperPoly::generator(chart, layout.fibre[*i]);
            let p = SuperPoly::generator(chart, layout.momenta[*a]);
            out = &out + &(&(&xi * q) * &p);
        }
        for (k, j, i, q) in &self.cubic {
            let g = |n: usize| SuperPoly::generator(chart, layout.fibre[n]);
            out = &out + &(&(&(&g(*i) * &g(*j)) * &g(*k)) * q);
        }
        Ok(out)
    }
}

pub fn extract_structure_functions(theta: &Potential) -> Result<StructureFunctions> {
    let chart = &theta.chart;
    let layout = chart.darboux().ok_or(Error::NotDarboux)?;
    let t = &theta.theta;
    let mut anchor = Vec::new();
    for (i, &xi) in layout.fibre.iter().enumerate() {
        let d = t.partial(chart, xi);
        for (a, &p) in layout.momenta.iter().enumerate() {
            let q = d.partial(chart, p);
            if !q.is_zero() {
                anchor.push((i, a, q));
            }
        }
    }
    let momentum_free = t.filter(|m| layout.momenta.iter().all(|&p| m.exponent(p) == 0));
    let r = layout.fibre.len();
    let mut cubic = Vec::new();
    for i in 0..r {
        let di = momentum_free.partial(chart, layout.fibre[i]);
        for j in i + 1..r {
            let dj = di.partial(chart, layout.fibre[j]);
            for k in j + 1..r {
                let q = dj.partial(chart, layout.fibre[k]);
                if !q.is_zero() {
                    cubic.push((k, j, i, q));
                }
            }
        }
    }
    let tables = StructureFunctions { anchor, cubic };
    let back = tables.reassemble(chart)?;
    if &back != t {
        return Err(Error::NotNormalForm(format!(
            "leftover `{}`",
            format_poly(&(t - &back), chart)
        )));
    }
    Ok(tables)
}

/// The two structure-equation residuals, packed as polynomials:
/// `Σ_{i<j,a} (Q_i^b ∂_b Q_j^a - Q_j^b ∂_b Q_i^a - g^lm Q_mij Q_l^a) ξ^i ξ^j p_a`
/// and `Σ_{a<=b} (g^ij Q_j^a Q_i^b) p_a p_b`.
pub fn structure_equations_residual(theta: &Potential) -> Result<(SuperPoly, SuperPoly)> {
    let chart = &theta.chart;
    if !chart.is_n_manifold() {
        return Err(Error::InvalidChart("structure equations need an N-manifold chart".into()));
    }
    let layout = chart.darboux().ok_or(Error::NotDarboux)?;
    let ginv = chart.metric().ok_or(Error::NotDarboux)?.inverse().clone();
    let tables = extract_structure_functions(theta)?;
    let (r, n) = (layout.fibre.len(), layout.base.len());
    let q = |i: usize, a: usize| tables.anchor_entry(chart, i, a);
    let zero = SuperPoly::zero(chart);
    let mut first = zero.clone();
    for i in 0..r {
        for j in i + 1..r {
            for a in 0..n {
                let mut c = zero.clone();
                for b in 0..n {
                    let xb = layout.base[b];
                    c = &c + &(&q(i, b) * &q(j, a).partial(chart, xb));
                    c = &c - &(&q(j, b) * &q(i, a).partial(chart, xb));
                }
                for l in 0..r {
                    for m in 0..r {
                        if ginv[l][m] == int(0) {
                            continue;
                        }
                        let term = &tables.cubic_entry(chart, m, i, j) * &q(l, a);
                        c = &c - &term.scale(&ginv[l][m]);
                    }
                }
                let mono = &(&SuperPoly::generator(chart, layout.fibre[i])
                    * &SuperPoly::generator(chart, layout.fibre[j]))
                    * &SuperPoly::generator(chart, layout.momenta[a]);
                first = &first + &(&c * &mono);
            }
        }
    }
    let mut second = zero.clone();
    for a in 0..n {
        for b in a..n {
            let mut c = zero.clone();
            for i in 0..r {
                for j in 0..r {
                    if ginv[i][j] != int(0) {
                        c = &c + &(&q(j, a) * &q(i, b)).scale(&ginv[i][j]);
                    }
                }
            }
            let mono = &SuperPoly::generator(chart, layout.momenta[a])
                * &SuperPoly::generator(chart, layout.momenta[b]);
            second = &second + &(&c * &mono);
        }
    }
    Ok((first, second))
}
