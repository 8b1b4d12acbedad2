//! The Poisson bracket induced by a chart's constant pairing.

use std::fmt;

use serde::Serialize;

use crate::charts::Chart;
use crate::error::{Error, Result};
use crate::sampling::{self, SampleConfig};
use crate::superpoly::{format_poly, sign, Parity, SuperPoly};

fn check_chart(chart: &Chart, polys: &[&SuperPoly]) -> Result<()> {
    if polys.iter().all(|p| p.belongs_to(chart)) {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

/// `{X, Y}`. For odd `g` the contraction through `g` picks up
/// `(-1)^(X + 1)`, which reproduces the Darboux formula literally.
pub fn bracket(x: &SuperPoly, y: &SuperPoly, chart: &Chart) -> Result<SuperPoly> {
    check_chart(chart, &[x, y])?;
    Ok(bracket_unchecked(x, y, chart))
}

pub(crate) fn bracket_unchecked(x: &SuperPoly, y: &SuperPoly, chart: &Chart) -> SuperPoly {
    let mut out = SuperPoly::zero(chart);
    if x.is_zero() || y.is_zero() {
        return out;
    }
    let n = chart.len();
    let (x_even, x_odd) = x.split_parity();
    let in_y = mentioned(y, n);
    let mut dy: Vec<Option<SuperPoly>> = vec![None; n];
    for (part, parity) in [(x_even, Parity::Even), (x_odd, Parity::Odd)] {
        if part.is_zero() {
            continue;
        }
        let in_x = mentioned(&part, n);
        let mut dx: Vec<Option<SuperPoly>> = vec![None; n];
        for (g, h, value) in chart.pairing_entries() {
            let (g, h) = (*g, *h);
            if !in_x[g] || !in_y[h] {
                continue;
            }
            let dxg = dx[g].get_or_insert_with(|| part.partial(chart, g));
            if dxg.is_zero() {
                continue;
            }
            let dyh = dy[h].get_or_insert_with(|| y.partial(chart, h));
            if dyh.is_zero() {
                continue;
            }
            let odd_g = chart.generator(g).parity.is_odd();
            let negative = odd_g && !parity.is_odd();
            let c = value * sign(negative);
            out = &out + &(&*dxg * &*dyh).scale(&c);
        }
    }
    out
}

/// Generators a polynomial depends on, symbol arguments included.
fn mentioned(p: &SuperPoly, n: usize) -> Vec<bool> {
    let mut out = vec![false; n];
    for (m, _) in p.terms() {
        for g in m.generators() {
            out[g] = true;
        }
        for s in &m.scalars {
            for &g in &s.args {
                out[g] = true;
            }
        }
    }
    out
}

/// The three-term Darboux formula evaluated literally:
/// `dX/dp_a dY/dx^a - dX/dx^a dY/dp_a + (-1)^(X+1) g^ij dX/dxi^j dY/dxi^i`.
pub fn darboux_literal(x: &SuperPoly, y: &SuperPoly, chart: &Chart) -> Result<SuperPoly> {
    check_chart(chart, &[x, y])?;
    let layout = chart.darboux().ok_or(Error::NotDarboux)?;
    let ginv = chart.metric().ok_or(Error::NotDarboux)?.inverse();
    let mut out = SuperPoly::zero(chart);
    for (&xa, &pa) in layout.base.iter().zip(&layout.momenta) {
        out = &out + &(&x.partial(chart, pa) * &y.partial(chart, xa));
        out = &out - &(&x.partial(chart, xa) * &y.partial(chart, pa));
    }
    let (x_even, x_odd) = x.split_parity();
    for (part, odd) in [(x_even, false), (x_odd, true)] {
        let s = sign(!odd);
        for (i, &xi_i) in layout.fibre.iter().enumerate() {
            for (j, &xi_j) in layout.fibre.iter().enumerate() {
                let c = &ginv[i][j] * &s;
                if c == num_traits::Zero::zero() {
                    continue;
                }
                out = &out + &(&part.partial(chart, xi_j) * &y.partial(chart, xi_i)).scale(&c);
            }
        }
    }
    Ok(out)
}

/// Koszul sign `(-1)^(a b)`.
pub fn koszul(a: Parity, b: Parity) -> crate::superpoly::Rational {
    sign(a.is_odd() && b.is_odd())
}

pub(crate) fn parity_of(p: &SuperPoly) -> Result<Parity> {
    p.parity()
        .ok_or_else(|| Error::Inhomogeneous("terms of both parities".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Skew,
    Jacobi,
    LeibnizRight,
    LeibnizLeft,
    Weight,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Skew => "graded skew-symmetry",
            Axiom::Jacobi => "graded Jacobi identity",
            Axiom::LeibnizRight => "Leibniz rule (second slot)",
            Axiom::LeibnizLeft => "Leibniz rule (first slot)",
            Axiom::Weight => "weight homogeneity",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub inputs: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub failure: Option<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Residuals of the bracket axioms on one homogeneous triple, in the order
/// skew, Jacobi, Leibniz (second slot), Leibniz (first slot). The weight check
/// is a boolean.
pub fn axiom_residuals(
    x: &SuperPoly,
    y: &SuperPoly,
    z: &SuperPoly,
    chart: &Chart,
) -> Result<(Vec<(Axiom, SuperPoly)>, bool)> {
    check_chart(chart, &[x, y, z])?;
    let (px, py, pz) = (parity_of(x)?, parity_of(y)?, parity_of(z)?);
    let b = |a: &SuperPoly, c: &SuperPoly| bracket_unchecked(a, c, chart);
    let xy = b(x, y);
    let skew = &xy + &b(y, x).scale(&koszul(px, py));
    let jacobi = &(&b(x, &b(y, z)) - &b(&xy, z)) - &b(y, &b(x, z)).scale(&koszul(px, py));
    let yz = y * z;
    let leibniz_r = &(&b(x, &yz) - &(&xy * z)) - &(y * &b(x, z)).scale(&koszul(px, py));
    let xy_prod = x * y;
    let leibniz_l = &(&b(&xy_prod, z) - &(x * &b(y, z))) - &(&b(x, z) * y).scale(&koszul(py, pz));
    let weight_ok = match (x.weight(chart), y.weight(chart), xy.weight(chart)) {
        (Some(wx), Some(wy), Some(w)) => w == &(&wx + &wy) + chart.bracket_weight(),
        (_, _, None) => xy.is_zero(),
        _ => true,
    };
    Ok((
        vec![
            (Axiom::Skew, skew),
            (Axiom::Jacobi, jacobi),
            (Axiom::LeibnizRight, leibniz_r),
            (Axiom::LeibnizLeft, leibniz_l),
        ],
        weight_ok,
    ))
}

/// Random-sample the bracket axioms; stops at the first counterexample.
pub fn check_poisson_axioms(chart: &Chart, samples: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::rng(seed);
    let cfg = SampleConfig::default();
    for i in 0..samples {
        let x = sampling::random_homogeneous(&mut rng, chart, 4, &cfg);
        let y = sampling::random_homogeneous(&mut rng, chart, 4, &cfg);
        let z = sampling::random_homogeneous(&mut rng, chart, 3, &cfg);
        let inputs = || {
            [&x, &y, &z]
                .iter()
                .map(|p| format_poly(p, chart))
                .collect::<Vec<_>>()
        };
        let (residuals, weight_ok) =
            axiom_residuals(&x, &y, &z, chart).expect("samples are homogeneous");
        if let Some((axiom, r)) = residuals.into_iter().find(|(_, r)| !r.is_zero()) {
            return AxiomReport {
                samples: i + 1,
                failure: Some(AxiomFailure {
                    axiom,
                    inputs: inputs(),
                    residual: format_poly(&r, chart),
                }),
            };
        }
        if !weight_ok {
            return AxiomReport {
                samples: i + 1,
                failure: Some(AxiomFailure {
                    axiom: Axiom::Weight,
                    inputs: inputs(),
                    residual: format_poly(&bracket_unchecked(&x, &y, chart), chart),
                }),
            };
        }
    }
    AxiomReport {
        samples,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{make_cotangent_antivb_chart, make_darboux_chart, Chart, ChartSpec, Metric};
    use crate::superpoly::{parse_expr, Parity};

    fn p(c: &Chart, s: &str) -> SuperPoly {
        parse_expr(s, c).unwrap()
    }

    #[test]
    fn coordinate_brackets() {
        let c = make_darboux_chart(2, 2, &Metric::diagonal(&[1, -1]).unwrap()).unwrap();
        assert_eq!(bracket(&p(&c, "p1"), &p(&c, "x1"), &c).unwrap(), p(&c, "1"));
        assert_eq!(bracket(&p(&c, "x1"), &p(&c, "p1"), &c).unwrap(), p(&c, "-1"));
        assert!(bracket(&p(&c, "p1"), &p(&c, "x2"), &c).unwrap().is_zero());
        assert_eq!(bracket(&p(&c, "xi2"), &p(&c, "xi2"), &c).unwrap(), p(&c, "-1"));
        assert_eq!(bracket(&p(&c, "xi1"), &p(&c, "xi1"), &c).unwrap(), p(&c, "1"));
    }

    #[test]
    fn matches_darboux_formula() {
        let c = make_darboux_chart(2, 3, &Metric::diagonal(&[1, 2, -1]).unwrap()).unwrap();
        let mut rng = sampling::rng(11);
        let cfg = SampleConfig::default();
        for _ in 0..100 {
            let x = sampling::random_homogeneous(&mut rng, &c, 4, &cfg);
            let y = sampling::random_homogeneous(&mut rng, &c, 4, &cfg);
            assert_eq!(bracket(&x, &y, &c).unwrap(), darboux_literal(&x, &y, &c).unwrap());
        }
    }

    #[test]
    fn axioms_on_chart_families() {
        let charts = [
            make_darboux_chart(1, 2, &Metric::identity(2)).unwrap(),
            make_darboux_chart(2, 4, &Metric::diagonal(&[1, 1, -1, 2]).unwrap()).unwrap(),
            make_cotangent_antivb_chart(1, 2),
        ];
        for c in &charts {
            let r = check_poisson_axioms(c, 60, 3);
            assert!(r.passed(), "{:?}", r.failure);
        }
    }

    #[test]
    fn broken_antisymmetry_is_caught() {
        let spec = ChartSpec::new(1)
            .generator("x", Parity::Even, &[0])
            .generator("xi", Parity::Odd, &[1])
            .generator("p", Parity::Even, &[2])
            .pair("p", "x", "1")
            .pair("x", "p", "1")
            .pair("xi", "xi", "1");
        let c = Chart::from_spec(&spec).unwrap();
        let r = check_poisson_axioms(&c, 200, 1);
        assert_eq!(r.failure.map(|f| f.axiom), Some(Axiom::Skew));
    }

    #[test]
    fn cotangent_bracket_has_biweight() {
        let c = make_cotangent_antivb_chart(1, 2);
        let b = bracket(&p(&c, "x1*pi1"), &p(&c, "p1*xi1"), &c).unwrap();
        assert_eq!(b.weight(&c), Some(crate::superpoly::WeightVec(vec![1, 1])));
        assert_eq!(b, p(&c, "x1*p1 + xi1*pi1"));
    }

    #[test]
    fn mismatched_chart_is_an_error() {
        let a = make_darboux_chart(1, 1, &Metric::identity(1)).unwrap();
        let b = make_darboux_chart(1, 2, &Metric::identity(2)).unwrap();
        assert_eq!(bracket(&p(&a, "x1"), &p(&b, "x1"), &a), Err(Error::ChartMismatch));
    }
}
