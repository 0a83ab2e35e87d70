//! Text notation for elements of `W_ex`: `t(a1,...,ar)*w[i1 i2 ...]`.
//!
//! Word indices are 1-based finite simple reflections, with `0` standing for
//! `s_0`; either part may be omitted and `e` is the identity. Output always uses
//! the `t(λ)w` normal form with the canonical reduced word of `w`.

use crate::error::{Error, Result};
use crate::rootdata::Weight;
use crate::weyl::{AffineGen, AffineWeylGroup, ExtAffineElement};

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.s[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        let sign = usize::from(rest.starts_with(['-', '+']));
        let digits = rest[sign..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let text = &rest[..sign + digits];
        self.pos += text.len();
        text.parse()
            .map_err(|_| Error::parse(format!("integer `{text}` out of range")))
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.s.len()
    }

    fn error(&self, what: &str) -> Error {
        Error::parse(format!("{what} at offset {} in `{}`", self.pos, self.s))
    }
}

/// Largest translation coordinate accepted by the parser.
pub const MAX_COORD: i64 = 1 << 20;

impl AffineWeylGroup {
    pub fn parse_element(&self, text: &str) -> Result<ExtAffineElement> {
        let mut c = Cursor { s: text, pos: 0 };
        if c.eat("e") {
            return if c.at_end() {
                Ok(self.identity())
            } else {
                Err(c.error("trailing input"))
            };
        }
        let mut x = self.identity();
        let mut any = false;
        if c.eat("t(") {
            let mut coords = vec![c.int()?];
            while c.eat(",") {
                coords.push(c.int()?);
            }
            c.expect(")")?;
            if coords.len() != self.rank() {
                return Err(Error::input(format!(
                    "translation has {} coordinates, expected {}",
                    coords.len(),
                    self.rank()
                )));
            }
            if coords.iter().any(|c| c.unsigned_abs() > MAX_COORD as u64) {
                return Err(Error::input(format!(
                    "translation coordinates exceed {MAX_COORD}"
                )));
            }
            x = self.translation(Weight::new(&coords));
            any = true;
            if !c.eat("*") {
                return if c.at_end() {
                    Ok(x)
                } else {
                    Err(c.error("expected `*` or end of input"))
                };
            }
        }
        if !c.eat("w[") {
            return Err(c.error(if any {
                "expected `w[`"
            } else {
                "expected `e`, `t(` or `w[`"
            }));
        }
        loop {
            if c.eat("]") {
                break;
            }
            c.eat(",");
            let i = c.int()?;
            if i < 0 || i as usize > self.rank() {
                return Err(Error::input(format!(
                    "generator index {i} out of range 0..={}",
                    self.rank()
                )));
            }
            x = self.mul_gen(&x, AffineGen(i as u8));
            if x.translation.height() > MAX_COORD as u64 {
                return Err(Error::input(format!(
                    "translation coordinates exceed {MAX_COORD}"
                )));
            }
        }
        if !c.at_end() {
            return Err(c.error("trailing input"));
        }
        Ok(x)
    }

    pub fn format_element(&self, x: &ExtAffineElement) -> String {
        let word = self.finite_group().word(x.finite);
        let trans = !x.translation.is_zero();
        let mut out = String::new();
        if trans {
            out.push('t');
            out.push_str(&x.translation.to_string());
        }
        if !word.is_empty() {
            if trans {
                out.push('*');
            }
            out.push_str("w[");
            let idx: Vec<String> = word.iter().map(|i| (i + 1).to_string()).collect();
            out.push_str(&idx.join(" "));
            out.push(']');
        }
        if out.is_empty() {
            out.push('e');
        }
        out
    }
}
