//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ['^' nat]
//! primary := rational
//!          | ident                              generator
//!          | ident '(' [ident (',' ident)*] ')' function symbol
//!          | 'D[' ident [';' ident (',' ident)*] ']' ['(' args ')']
//!          | '(' expr ')'
//! ```
//!
//! A derivative marker without an argument list depends on every base
//! (weight-zero even) generator of the chart.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Rational, ScalarSymbol, SuperPoly};
use crate::charts::Chart;
use crate::error::{Error, Result};

pub fn parse_expr(text: &str, chart: &Chart) -> Result<SuperPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        chart,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<SuperPoly> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SuperPoly> {
        let mut bare_odd: BTreeSet<usize> = BTreeSet::new();
        let mut acc = self.factor(&mut bare_odd)?;
        while self.eat(b'*') {
            let f = self.factor(&mut bare_odd)?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self, bare_odd: &mut BTreeSet<usize>) -> Result<SuperPoly> {
        self.skip_ws();
        let start = self.pos;
        let (base, odd_gen) = self.primary()?;
        if self.eat(b'^') {
            let n = self.nat()?;
            if let Some(g) = odd_gen {
                if n >= 2 {
                    return Err(Error::OddPower {
                        name: self.chart.generator(g).name.clone(),
                        power: n,
                        pos: start,
                    });
                }
            }
            if n == 0 {
                return Ok(SuperPoly::one(self.chart));
            }
            if n >= 2 {
                return Ok(base.pow(n));
            }
        }
        if let Some(g) = odd_gen {
            if !bare_odd.insert(g) {
                return Err(Error::OddSquare {
                    name: self.chart.generator(g).name.clone(),
                    pos: start,
                });
            }
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "exponent out of range".into(),
            })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .unwrap())
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.error("expected an identifier"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn base_generator(&mut self) -> Result<usize> {
        let start = self.pos;
        let name = self.ident()?;
        let g = self
            .chart
            .index_of(&name)
            .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?;
        let gen = self.chart.generator(g);
        if gen.parity.is_odd() || !gen.weight.is_zero() {
            return Err(Error::Parse {
                pos: start,
                msg: format!("`{name}` is not a weight-zero even generator"),
            });
        }
        Ok(g)
    }

    fn arg_list(&mut self) -> Result<Vec<usize>> {
        self.expect(b'(')?;
        let mut args = Vec::new();
        if self.eat(b')') {
            return Ok(self.chart.function_args());
        }
        loop {
            args.push(self.base_generator()?);
            if self.eat(b')') {
                return Ok(args);
            }
            self.expect(b',')?;
        }
    }

    /// Returns the parsed value and, for a bare odd generator, its index.
    fn primary(&mut self) -> Result<(SuperPoly, Option<usize>)> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok((e, None))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = Rational::from_integer(num);
                // A `/` directly after an integer literal makes a rational.
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                }
                Ok((SuperPoly::constant(self.chart, value), None))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.ident()?;
                if name == "D" && self.peek() == Some(b'[') {
                    return self.derivative_marker().map(|p| (p, None));
                }
                if self.peek() == Some(b'(') {
                    if self.chart.index_of(&name).is_some() {
                        return Err(Error::Parse {
                            pos: start,
                            msg: format!("generator `{name}` used as a function"),
                        });
                    }
                    let args = self.arg_list()?;
                    let sym = ScalarSymbol::new(name, args);
                    return Ok((SuperPoly::symbol(self.chart, sym), None));
                }
                let g = self
                    .chart
                    .index_of(&name)
                    .ok_or(Error::UnknownIdentifier(name))?;
                let odd = self.chart.generator(g).parity.is_odd();
                Ok((SuperPoly::generator(self.chart, g), odd.then_some(g)))
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn derivative_marker(&mut self) -> Result<SuperPoly> {
        self.expect(b'[')?;
        let name = self.ident()?;
        if self.chart.index_of(&name).is_some() {
            return Err(self.error(&format!("generator `{name}` used as a function")));
        }
        let mut derivs = Vec::new();
        if self.eat(b';') {
            loop {
                derivs.push(self.base_generator()?);
                if !self.eat(b',') {
                    break;
                }
            }
        }
        self.expect(b']')?;
        let args = if self.peek() == Some(b'(') {
            self.arg_list()?
        } else {
            self.chart.function_args()
        };
        let mut p = SuperPoly::symbol(self.chart, ScalarSymbol::new(name, args));
        for g in derivs {
            p = p.partial(self.chart, g);
        }
        if p.is_zero() {
            return Ok(p);
        }
        debug_assert!(p.terms().all(|(_, c)| c.is_one()));
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{make_darboux_chart, Metric};
    use crate::superpoly::format_poly;

    fn chart() -> Chart {
        make_darboux_chart(2, 2, &Metric::identity(2)).unwrap()
    }

    #[test]
    fn parses_rational_products() {
        let c = chart();
        let e = parse_expr("1/2 * xi1 * xi2 * Q(x1)", &c).unwrap();
        assert_eq!(format_poly(&e, &c), "1/2*Q(x1)*xi1*xi2");
        let swapped = parse_expr("1/2 * xi2 * xi1 * Q(x1)", &c).unwrap();
        assert_eq!(swapped, -e);
    }

    #[test]
    fn odd_square_is_rejected() {
        let c = chart();
        assert!(matches!(parse_expr("xi1 * xi1", &c), Err(Error::OddSquare { .. })));
        assert!(matches!(parse_expr("xi1^2", &c), Err(Error::OddPower { power: 2, .. })));
        assert_eq!(parse_expr("xi1^1", &c).unwrap(), parse_expr("xi1", &c).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let c = chart();
        match parse_expr("x1 + * x2", &c) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            parse_expr("x1 + zz", &c),
            Err(Error::UnknownIdentifier("zz".into()))
        );
        assert!(parse_expr("x1(x2)", &c).is_err());
        assert!(parse_expr("f(xi1)", &c).is_err());
        assert!(parse_expr("(x1", &c).is_err());
    }

    #[test]
    fn derivative_markers() {
        let c = chart();
        let a = parse_expr("D[f; x1, x2]", &c).unwrap();
        let b = parse_expr("D[f; x2, x1](x1,x2)", &c).unwrap();
        assert_eq!(a, b);
        assert_eq!(format_poly(&a, &c), "D[f; x1, x2](x1,x2)");
        assert!(parse_expr("D[f; x2](x1)", &c).unwrap().is_zero());
    }

    #[test]
    fn parenthesised_and_signed() {
        let c = chart();
        let e = parse_expr("-(x1 - 2*x2)^2 + 3", &c).unwrap();
        let f = parse_expr("-x1^2 + 4*x1*x2 - 4*x2^2 + 3", &c).unwrap();
        assert_eq!(e, f);
        let printed = format_poly(&e, &c);
        assert_eq!(parse_expr(&printed, &c).unwrap(), e);
    }
}
