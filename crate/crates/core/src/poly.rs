//! Text notation for lamp configurations and elements.
//!
//! Polynomials: `2t^-9 + 3t^-6 + 1 + 2t + t^6` over `Z_n`, or
//! `(0,1)t^-2 + (1,0)t^-1` over a product group. A term is `coeff? t (^ int)?`
//! or a bare `coeff`; `"0"` is the empty configuration. An omitted
//! coefficient means 1 and is only allowed for cyclic groups.
//!
//! Words: `t^-3 a t^3` multiplies generators left to right; `a`, `b`, `c`, ...
//! name the unit vectors of the cyclic factors.

use crate::config::LampConfig;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{Coeff, GroupDesc};

pub const DEFAULT_EXPONENT_BOUND: i64 = 1_000_000;

pub fn parse_poly(text: &str, g: &GroupDesc) -> Result<LampConfig> {
    parse_poly_bounded(text, g, DEFAULT_EXPONENT_BOUND)
}

pub fn parse_poly_bounded(text: &str, g: &GroupDesc, bound: i64) -> Result<LampConfig> {
    let mut p = Cursor::new(text);
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty polynomial"));
    }
    let mut out = LampConfig::new();
    let mut seen = std::collections::BTreeSet::new();
    loop {
        let (exp, coeff) = p.term(g, bound)?;
        if !seen.insert(exp) {
            return Err(Error::DuplicateExponent(exp));
        }
        out.set(exp, coeff);
        p.skip_ws();
        if p.at_end() {
            break;
        }
        p.expect(b'+')?;
        p.skip_ws();
    }
    Ok(out)
}

/// Canonical text: increasing exponents, unit coefficients omitted in the
/// cyclic case.
pub fn format_poly(f: &LampConfig) -> String {
    if f.is_empty() {
        return "0".to_string();
    }
    let terms: Vec<String> = f
        .iter()
        .map(|(e, c)| {
            let unit = c.0.len() == 1 && c.0[0] == 1;
            let coeff = c.to_string();
            match e {
                0 => coeff,
                1 if unit => "t".to_string(),
                1 => format!("{coeff}t"),
                _ if unit => format!("t^{e}"),
                _ => format!("{coeff}t^{e}"),
            }
        })
        .collect();
    terms.join(" + ")
}

/// A single coefficient literal: `5` or `(1,0)`.
pub fn parse_coeff(text: &str, g: &GroupDesc) -> Result<Coeff> {
    let mut p = Cursor::new(text);
    p.skip_ws();
    let c = p
        .coeff(g)?
        .ok_or_else(|| p.error("expected a coefficient"))?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input after coefficient"));
    }
    Ok(c)
}

/// A generator list `{}`, `{2}`, `{4,2}` or `{(0,1),(1,0)}`.
pub fn parse_coeff_list(text: &str, g: &GroupDesc) -> Result<Vec<Coeff>> {
    let mut p = Cursor::new(text);
    p.skip_ws();
    p.expect(b'{')?;
    let mut out = Vec::new();
    p.skip_ws();
    if p.eat(b'}') {
        p.skip_ws();
        return if p.at_end() {
            Ok(out)
        } else {
            Err(p.error("trailing input after '}'"))
        };
    }
    loop {
        p.skip_ws();
        out.push(
            p.coeff(g)?
                .ok_or_else(|| p.error("expected a coefficient"))?,
        );
        p.skip_ws();
        if p.eat(b'}') {
            break;
        }
        p.expect(b',')?;
    }
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input after '}'"));
    }
    Ok(out)
}

/// A word in the generators, e.g. `t^-3 a t^3` or `t a^-1 b`.
pub fn parse_word(text: &str, g: &GroupDesc) -> Result<Element> {
    let gens = g.standard_generators();
    let mut p = Cursor::new(text);
    let mut acc = Element::identity();
    loop {
        p.skip_ws();
        if p.at_end() {
            return Ok(acc);
        }
        let start = p.pos;
        let letter = p.bump().unwrap();
        let power = if p.eat(b'^') { p.int()? } else { 1 };
        let factor = match letter {
            b't' => Element::t(power),
            b'a'..=b's' => {
                let j = (letter - b'a') as usize;
                let gen = gens.get(j).ok_or(Error::Parse {
                    pos: start,
                    msg: format!("generator {} not defined for {g}", letter as char),
                })?;
                Element::base(LampConfig::single(0, g.coeff_scale(gen, power)))
            }
            _ => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character {:?}", letter as char),
                })
            }
        };
        acc = g.elem_mul_unchecked(&acc, &factor);
    }
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "integer too large".into(),
            })
    }

    /// Signed integer, optionally wrapped in braces: `-9`, `{-9}`.
    fn int(&mut self) -> Result<i64> {
        let braced = self.eat(b'{');
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let start = self.pos;
        let v = i64::try_from(self.digits()?).map_err(|_| Error::Parse {
            pos: start,
            msg: "integer too large".into(),
        })?;
        if braced {
            self.expect(b'}')?;
        }
        Ok(if neg { -v } else { v })
    }

    fn coeff(&mut self, g: &GroupDesc) -> Result<Option<Coeff>> {
        let start = self.pos;
        let raw: Vec<u64> = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut parts = Vec::new();
                loop {
                    self.skip_ws();
                    parts.push(self.digits()?);
                    self.skip_ws();
                    if self.eat(b')') {
                        break;
                    }
                    self.expect(b',')?;
                }
                parts
            }
            Some(b) if b.is_ascii_digit() => vec![self.digits()?],
            _ => return Ok(None),
        };
        if raw.len() != g.rank() {
            return Err(Error::Parse {
                pos: start,
                msg: format!("coefficient needs {} components for {g}", g.rank()),
            });
        }
        for (&v, &n) in raw.iter().zip(g.orders()) {
            if v >= n as u64 {
                return Err(Error::CoeffOutOfRange {
                    value: v.min(i64::MAX as u64) as i64,
                    modulus: n,
                });
            }
        }
        Ok(Some(Coeff(raw.into_iter().map(|v| v as u32).collect())))
    }

    fn term(&mut self, g: &GroupDesc, bound: i64) -> Result<(i64, Coeff)> {
        let start = self.pos;
        let coeff = self.coeff(g)?;
        self.skip_ws();
        if self.eat(b'*') {
            self.skip_ws();
        }
        if self.eat(b't') {
            let exp = if self.eat(b'^') { self.int()? } else { 1 };
            if exp.abs() > bound {
                return Err(Error::ExponentOutOfBounds { exp, bound });
            }
            let coeff = match coeff {
                Some(c) => c,
                None if g.rank() == 1 => Coeff::cyclic(1),
                None => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("coefficient required for {g}"),
                    })
                }
            };
            Ok((exp, coeff))
        } else {
            match coeff {
                Some(c) => Ok((0, c)),
                None => Err(self.error("expected a coefficient or 't'")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_degree_example() {
        let g = GroupDesc::cyclic(10).unwrap();
        let f = parse_poly("2t^-9 + 3t^-6 + 1 + 2t + t^6", &g).unwrap();
        assert_eq!(
            f,
            LampConfig::from_cyclic(&[(-9, 2), (-6, 3), (0, 1), (1, 2), (6, 1)])
        );
        assert_eq!(format_poly(&f), "2t^-9 + 3t^-6 + 1 + 2t + t^6");
        assert_eq!(f.min_pos(), Some(-9));
    }

    #[test]
    fn zero_is_empty() {
        let g = GroupDesc::cyclic(3).unwrap();
        assert!(parse_poly("0", &g).unwrap().is_empty());
        assert_eq!(format_poly(&LampConfig::new()), "0");
    }

    #[test]
    fn product_coefficients() {
        let g = GroupDesc::parse("Z2xZ2").unwrap();
        let f = parse_poly("(0,1)t^-2 + (1,0)t^-1", &g).unwrap();
        assert_eq!(
            f,
            LampConfig::from_entries([(-2, Coeff(vec![0, 1])), (-1, Coeff(vec![1, 0]))])
        );
        assert_eq!(format_poly(&f), "(0,1)t^-2 + (1,0)t^-1");
        assert!(parse_poly("t^2", &g).is_err());
    }

    #[test]
    fn canonical_output_order() {
        let g = GroupDesc::cyclic(5).unwrap();
        let f = parse_poly("t^3+4 + 2t^{-1}", &g).unwrap();
        assert_eq!(format_poly(&f), "2t^-1 + 4 + t^3");
    }

    #[test]
    fn errors() {
        let g = GroupDesc::cyclic(4).unwrap();
        assert!(matches!(
            parse_poly("5t", &g),
            Err(Error::CoeffOutOfRange {
                value: 5,
                modulus: 4
            })
        ));
        assert_eq!(parse_poly("t + 2t", &g), Err(Error::DuplicateExponent(1)));
        assert!(matches!(
            parse_poly("2t^", &g),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(matches!(parse_poly("2t +", &g), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_poly("2 t^x", &g),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly_bounded("t^100", &g, 10),
            Err(Error::ExponentOutOfBounds {
                exp: 100,
                bound: 10
            })
        ));
    }

    #[test]
    fn coefficient_lists() {
        let g = GroupDesc::cyclic(12).unwrap();
        assert!(parse_coeff_list("{}", &g).unwrap().is_empty());
        assert_eq!(
            parse_coeff_list("{4, 6}", &g).unwrap(),
            vec![Coeff::cyclic(4), Coeff::cyclic(6)]
        );
        let k = GroupDesc::parse("Z2xZ2").unwrap();
        assert_eq!(
            parse_coeff_list("{(0,1)}", &k).unwrap(),
            vec![Coeff(vec![0, 1])]
        );
        assert!(parse_coeff_list("{4", &g).is_err());
    }

    #[test]
    fn words() {
        let g = GroupDesc::cyclic(2).unwrap();
        let w = parse_word("t^-3 a t^3", &g).unwrap();
        assert_eq!(w, Element::base(LampConfig::from_cyclic(&[(-3, 1)])));
        let k = GroupDesc::parse("Z2xZ2").unwrap();
        let w = parse_word("t b t^-1", &k).unwrap();
        assert_eq!(w, Element::base(LampConfig::single(1, Coeff(vec![0, 1]))));
        assert!(parse_word("c", &k).is_err());
    }
}
