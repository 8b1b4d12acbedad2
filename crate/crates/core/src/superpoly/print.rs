use num_traits::{One, Signed};

use super::{Monomial, Rational, ScalarSymbol, SuperPoly};
use crate::charts::Chart;

fn format_symbol(s: &ScalarSymbol, chart: &Chart) -> String {
    let args: Vec<&str> = s.args.iter().map(|&g| chart.generator(g).name.as_str()).collect();
    if s.derivs.is_empty() {
        format!("{}({})", s.name, args.join(","))
    } else {
        let derivs: Vec<&str> = s
            .derivs
            .iter()
            .map(|&g| chart.generator(g).name.as_str())
            .collect();
        format!("D[{}; {}]({})", s.name, derivs.join(", "), args.join(","))
    }
}

fn format_monomial(m: &Monomial, chart: &Chart) -> Vec<String> {
    let mut factors: Vec<String> = m.scalars.iter().map(|s| format_symbol(s, chart)).collect();
    for &(g, e) in &m.even {
        let name = &chart.generator(g).name;
        if e == 1 {
            factors.push(name.clone());
        } else {
            factors.push(format!("{name}^{e}"));
        }
    }
    for &g in &m.odd {
        factors.push(chart.generator(g).name.clone());
    }
    factors
}

fn format_term(m: &Monomial, c: &Rational, chart: &Chart) -> String {
    let factors = format_monomial(m, chart);
    if factors.is_empty() {
        return c.to_string();
    }
    let body = factors.join("*");
    if c.is_one() {
        body
    } else if (-c).is_one() {
        format!("-{body}")
    } else {
        format!("{c}*{body}")
    }
}

/// Canonical text form. Parsing it back yields the same polynomial.
pub fn format_poly(p: &SuperPoly, chart: &Chart) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let t = format_term(m, c, chart);
        if i == 0 {
            out.push_str(&t);
        } else if c.is_negative() {
            out.push_str(" - ");
            out.push_str(&t[1..]);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}
