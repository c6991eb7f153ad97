//! Distribution spec grammar.
//!
//! ```text
//! spec     := family [interval] args
//! interval := "[" rational "," rational "]"          (default [0,1])
//! uniform                                            Beta(1,1), or flat on [a,b]
//! beta ALPHA BETA
//! point[a,b] C
//! atomic[a,b] C:W C:W ...
//! pwpoly[a,b] c0,c1,... @KNOT c0,c1,... ...          coefficients of 1, x, x^2, ...
//! mix W:(spec) W:(spec) ...
//! ```

use crate::error::{Error, Result};
use crate::exactmath::{int, parse_rational, Polynomial, Rational};
use crate::seqcore::Interval;

use super::{BetaRational, Distribution, FiniteAtomic, Mixture, PiecewisePolyDensity, PointMass};

pub fn parse_dist_spec(text: &str) -> Result<Distribution> {
    let mut p = Parser { src: text, pos: 0 };
    let d = p.spec()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(err_at(p.pos, "unexpected trailing input"));
    }
    Ok(d)
}

fn err_at(pos: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("distribution spec, column {}: {msg}", pos + 1))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err_at(self.pos, format!("expected `{c}`")))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> (usize, &'a str) {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += self.peek().unwrap().len_utf8();
        }
        (start, &self.src[start..self.pos])
    }

    fn rational(&self, start: usize, text: &str) -> Result<Rational> {
        parse_rational(text).map_err(|_| err_at(start, format!("malformed rational `{text}`")))
    }

    /// Next whitespace-delimited argument, or `None` at the end of this spec.
    fn arg(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        match self.peek() {
            None | Some(')') => None,
            _ => Some(self.take_while(|c| !c.is_whitespace() && c != ')')),
        }
    }

    fn spec(&mut self) -> Result<Distribution> {
        self.skip_ws();
        let (start, family) = self.take_while(|c| c.is_ascii_alphabetic());
        if family.is_empty() {
            return Err(err_at(start, "expected a family name"));
        }
        let interval = if self.peek() == Some('[') {
            Some(self.interval()?)
        } else {
            None
        };
        let iv = interval.clone().unwrap_or_else(Interval::unit);
        let invalid = move |e: Error| err_at(start, e);
        match family {
            "uniform" => {
                if iv == Interval::unit() {
                    Ok(Distribution::uniform())
                } else {
                    let h = int(1) / iv.width();
                    let d = PiecewisePolyDensity::new(
                        vec![iv.a().clone(), iv.b().clone()],
                        vec![Polynomial::monomial(vec![h])],
                    )
                    .map_err(invalid)?;
                    Ok(Distribution::PiecewisePolyDensity(d))
                }
            }
            "beta" => {
                if interval.is_some() && iv != Interval::unit() {
                    return Err(err_at(start, "beta lives on [0,1]"));
                }
                let a = self.rational_arg("alpha")?;
                let b = self.rational_arg("beta")?;
                Ok(Distribution::BetaRational(BetaRational::new(a, b).map_err(invalid)?))
            }
            "point" => {
                let c = self.rational_arg("atom location")?;
                Ok(Distribution::PointMass(PointMass::new(iv, c).map_err(invalid)?))
            }
            "atomic" => {
                let mut points = Vec::new();
                let mut weights = Vec::new();
                while let Some((at, tok)) = self.arg() {
                    let Some((c, w)) = tok.split_once(':') else {
                        return Err(err_at(at, format!("expected `point:weight`, got `{tok}`")));
                    };
                    points.push(self.rational(at, c)?);
                    weights.push(self.rational(at + c.len() + 1, w)?);
                }
                if points.is_empty() {
                    return Err(err_at(self.pos, "atomic needs at least one atom"));
                }
                Ok(Distribution::FiniteAtomic(
                    FiniteAtomic::new(iv, points, weights).map_err(invalid)?,
                ))
            }
            "pwpoly" => {
                let mut knots = vec![iv.a().clone()];
                let mut pieces = Vec::new();
                let mut expect_piece = true;
                while let Some((at, tok)) = self.arg() {
                    if let Some(k) = tok.strip_prefix('@') {
                        if expect_piece {
                            return Err(err_at(at, "knot without a preceding piece"));
                        }
                        let (at, k) = if k.is_empty() {
                            self.arg().ok_or_else(|| err_at(self.pos, "expected a knot"))?
                        } else {
                            (at + 1, k)
                        };
                        knots.push(self.rational(at, k)?);
                        expect_piece = true;
                    } else {
                        if !expect_piece {
                            return Err(err_at(at, "expected `@knot` between pieces"));
                        }
                        let mut coeffs = Vec::new();
                        let mut off = at;
                        for c in tok.split(',') {
                            coeffs.push(self.rational(off, c)?);
                            off += c.len() + 1;
                        }
                        pieces.push(Polynomial::monomial(coeffs));
                        expect_piece = false;
                    }
                }
                if expect_piece {
                    return Err(err_at(self.pos, "expected a coefficient list"));
                }
                knots.push(iv.b().clone());
                Ok(Distribution::PiecewisePolyDensity(
                    PiecewisePolyDensity::new(knots, pieces).map_err(invalid)?,
                ))
            }
            "mix" => {
                let mut comps = Vec::new();
                let mut weights = Vec::new();
                loop {
                    self.skip_ws();
                    if matches!(self.peek(), None | Some(')')) {
                        break;
                    }
                    let (at, w) = self.take_while(|c| c != ':' && c != '(' && !c.is_whitespace());
                    weights.push(self.rational(at, w)?);
                    self.expect(':')?;
                    self.expect('(')?;
                    comps.push(self.spec()?);
                    self.skip_ws();
                    self.expect(')')?;
                }
                if comps.is_empty() {
                    return Err(err_at(self.pos, "mix needs at least one component"));
                }
                let mx = Mixture::new(comps, weights).map_err(invalid)?;
                if interval.is_some() && mx.components()[0].interval() != iv {
                    return Err(err_at(start, "mix interval disagrees with its components"));
                }
                Ok(Distribution::Mixture(mx))
            }
            other => Err(err_at(start, format!("unknown family `{other}`"))),
        }
    }

    fn rational_arg(&mut self, what: &str) -> Result<Rational> {
        let (at, tok) = self
            .arg()
            .ok_or_else(|| err_at(self.pos, format!("missing {what}")))?;
        self.rational(at, tok)
    }

    fn interval(&mut self) -> Result<Interval> {
        let open = self.pos;
        self.expect('[')?;
        self.skip_ws();
        let (sa, a) = self.take_while(|c| c != ',' && c != ']');
        let a = self.rational(sa, a.trim())?;
        self.expect(',')?;
        self.skip_ws();
        let (sb, b) = self.take_while(|c| c != ']');
        let b = self.rational(sb, b.trim())?;
        self.expect(']')?;
        Interval::new(a, b).map_err(|e| err_at(open, e))
    }
}
