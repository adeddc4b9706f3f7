//! Canonical text form of [`ScalarPoly`], e.g. `5/24*X1*Y1*hp*pi*Omega3 - X4^2`.
//!
//! Terms appear in map order (registry id, then exponent), so the text is a
//! pure function of the polynomial and the registration order.

use std::fmt;
use std::sync::Arc;

use super::exact::ExactScalar;
use super::poly::{Monomial, ScalarPoly};
use super::registry::{Kind, Registry};
use crate::error::ParseError;

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let reg = self.registry();
        for (k, (m, c)) in self.terms().enumerate() {
            let mut body = String::new();
            for (n, &(v, e)) in m.factors().iter().enumerate() {
                if n > 0 {
                    body.push('*');
                }
                body.push_str(&reg.name(v));
                if e > 1 {
                    body.push_str(&format!("^{e}"));
                }
            }
            let mut coeff = c.clone();
            let negative = c.is_real() && c.re() < &num_rational::BigRational::default();
            if k > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
                if negative {
                    coeff = -coeff;
                }
            }
            if m.is_one() {
                write!(f, "{coeff}")?;
            } else if coeff.is_one() {
                f.write_str(&body)?;
            } else if coeff == -ExactScalar::one() {
                write!(f, "-{body}")?;
            } else {
                write!(f, "{coeff}*{body}")?;
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Poly {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && f(self.s[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap()
    }
}

fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'[' | b']' | b';' | b',')
}

impl ScalarPoly {
    /// Parses the canonical rendering. Unknown names are interned, so a
    /// rendering from one registry parses into another.
    pub fn parse(reg: &Arc<Registry>, text: &str) -> Result<ScalarPoly, ParseError> {
        let mut cur = Cursor {
            s: text.as_bytes(),
            pos: 0,
        };
        let mut out = ScalarPoly::zero(reg);
        cur.skip_ws();
        if cur.peek() == Some(b'0') && text.trim() == "0" {
            return Ok(out);
        }
        let mut first = true;
        loop {
            cur.skip_ws();
            if cur.peek().is_none() {
                if first {
                    return Err(cur.err("empty input"));
                }
                break;
            }
            let mut sign = ExactScalar::one();
            match cur.peek() {
                Some(b'+') if !first => cur.pos += 1,
                Some(b'-') => {
                    cur.pos += 1;
                    sign = -sign;
                }
                _ if !first => return Err(cur.err("expected + or -")),
                _ => {}
            }
            cur.skip_ws();
            let mut coeff = ExactScalar::one();
            let mut mono = Monomial::one();
            let mut need_factor = true;
            match cur.peek() {
                Some(b'(') => {
                    let start = cur.pos;
                    while cur.peek().is_some_and(|b| b != b')') {
                        cur.pos += 1;
                    }
                    cur.pos += 1;
                    let lit = std::str::from_utf8(&cur.s[start..cur.pos.min(cur.s.len())]).unwrap();
                    coeff = lit.parse()?;
                    need_factor = false;
                }
                Some(b) if b.is_ascii_digit() => {
                    let lit = cur.take_while(|b| b.is_ascii_digit() || b == b'/');
                    coeff = lit.parse()?;
                    need_factor = false;
                }
                _ => {}
            }
            loop {
                if !need_factor {
                    if cur.peek() != Some(b'*') {
                        break;
                    }
                    cur.pos += 1;
                }
                let name = cur.take_while(is_name_byte);
                if name.is_empty() {
                    return Err(cur.err("expected indeterminate"));
                }
                let id = reg.intern(Kind::parse(name)?);
                let mut e = 1u32;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    e = cur
                        .take_while(|b| b.is_ascii_digit())
                        .parse()
                        .map_err(|_| cur.err("bad exponent"))?;
                }
                mono = mono.mul(&Monomial::power(id, e));
                need_factor = false;
            }
            out.add_term(mono, &coeff * &sign);
            first = false;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::registry::{Family, Marker};
    use proptest::prelude::*;

    #[test]
    fn renders_signs() {
        let r = Registry::global();
        let x4 = ScalarPoly::of(&r, Kind::X(4));
        let y4 = ScalarPoly::of(&r, Kind::Y(4));
        let p = &(&x4 * &y4).scale(&ExactScalar::ratio(-1, 8)) + &ScalarPoly::one(&r);
        assert_eq!(p.to_string(), "1 - 1/8*X4*Y4");
        let q = (&x4 * &x4).scale(&ExactScalar::gaussian(0, 3, 2));
        assert_eq!(q.to_string(), "(0+3/2i)*X4^2");
        assert_eq!((-&x4).to_string(), "-X4");
    }

    #[test]
    fn parse_known_strings() {
        let r = Registry::global();
        let p = ScalarPoly::parse(&r, "-X1*G[1;2,4] + (1/2-1i)*pi*Omega3 - 5/24").unwrap();
        let g = ScalarPoly::family(&r, Family::Gamma, &[1, 2, 4]);
        let pm = &ScalarPoly::marker(&r, Marker::Pi) * &ScalarPoly::marker(&r, Marker::Omega3);
        let expect = &(&(-&(&ScalarPoly::of(&r, Kind::X(1)) * &g)) + &pm.scale(&ExactScalar::gaussian(1, -2, 2)))
            - &ScalarPoly::constant(&r, ExactScalar::ratio(5, 24));
        assert_eq!(p, expect);
        assert!(ScalarPoly::parse(&r, "X1 +").is_err());
        assert!(ScalarPoly::parse(&r, "").is_err());
        assert!(ScalarPoly::parse(&r, "2 X1").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(p in crate::scalar::poly::tests::arb_poly()) {
            let text = p.to_string();
            let back = ScalarPoly::parse(p.registry(), &text).unwrap();
            prop_assert_eq!(back, p, "{}", text);
        }
    }
}
