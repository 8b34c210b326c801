//! Text form of `B_n` elements.
//!
//! ```text
//! poly  := term (('+' | '-') term)*
//! term  := coeff? ('*'? var ('^' exp)?)*
//! var   := 'x' digits
//! coeff := digits | '[' int (',' int)* ']'
//! ```
//!
//! Whitespace is ignored and a leading sign is accepted. Bracketed
//! coefficients list the coordinates of an extension-field element, constant
//! coordinate first.

use super::{RingRef, TruncPoly};
use crate::error::{Error, Result};
use crate::gf::Scalar;

pub const GRAMMAR: &str = "poly := term (('+'|'-') term)* ; term := coeff? ('*'? var ('^' exp)?)* ; \
var := 'x' digits ; coeff := digits | '[' c0,c1,... ']'";

/// A parsed polynomial together with any truncation warnings.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub poly: TruncPoly,
    pub warnings: Vec<String>,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected digits");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.number()? as i64;
        Ok(if neg { -v } else { v })
    }
}

pub fn parse_poly(text: &str, ring: &RingRef) -> Result<Parsed> {
    let f = ring.field().clone();
    let p = f.p() as u64;
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut out = ring.zero();
    let mut warnings = Vec::new();
    let mut sign = match lx.peek() {
        Some(b'-') => {
            lx.pos += 1;
            -1
        }
        Some(b'+') => {
            lx.pos += 1;
            1
        }
        None => return lx.error("empty polynomial"),
        _ => 1,
    };
    loop {
        let term_start = lx.pos;
        let mut coeff = Scalar::ONE;
        let mut seen_any = false;
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = f.from_int((lx.number()? % p) as i64);
                seen_any = true;
            }
            Some(b'[') => {
                lx.pos += 1;
                let mut digits = vec![lx.signed()?];
                while lx.peek() == Some(b',') {
                    lx.pos += 1;
                    digits.push(lx.signed()?);
                }
                if lx.bump() != Some(b']') {
                    return lx.error("expected ']'");
                }
                coeff = f.from_digits(&digits).map_err(|e| Error::Parse { pos: term_start, msg: e.to_string() })?;
                seen_any = true;
            }
            _ => {}
        }
        let mut exps = vec![0u64; ring.n()];
        loop {
            let save = lx.pos;
            if lx.peek() == Some(b'*') {
                lx.pos += 1;
                if lx.peek() != Some(b'x') {
                    return lx.error("expected a variable after '*'");
                }
            }
            if lx.peek() != Some(b'x') {
                lx.pos = save;
                break;
            }
            lx.pos += 1;
            let var_pos = lx.pos;
            let idx = lx.number()? as usize;
            if idx == 0 || idx > ring.n() {
                return Err(Error::Parse { pos: var_pos, msg: format!("variable x{idx} outside x1..x{}", ring.n()) });
            }
            let e = if lx.peek() == Some(b'^') {
                lx.pos += 1;
                lx.number()?
            } else {
                1
            };
            exps[idx - 1] = exps[idx - 1].saturating_add(e);
            seen_any = true;
        }
        if !seen_any {
            return lx.error("expected a coefficient or a variable");
        }
        if let Some(i) = exps.iter().position(|&e| e >= p) {
            let end = lx.pos.min(text.len());
            warnings.push(format!(
                "term '{}' has x{}^{} with exponent >= {p}; truncated to 0",
                text[term_start..end].trim(),
                i + 1,
                exps[i]
            ));
        } else {
            let e: Vec<usize> = exps.iter().map(|&e| e as usize).collect();
            let idx = ring.index(&e).expect("exponents below p");
            let c = if sign < 0 { f.neg(coeff) } else { coeff };
            out.set_coeff(idx, f.add(out.coeff(idx), c));
        }
        match lx.bump() {
            None => break,
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(c) => {
                lx.pos -= 1;
                return lx.error(format!("unexpected '{}'", c as char));
            }
        }
    }
    Ok(Parsed { poly: out, warnings })
}
