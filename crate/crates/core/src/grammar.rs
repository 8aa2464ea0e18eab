//! Text form of sums, presentations and ideal resolutions.
//!
//! ```text
//! presentation := SUM "->" SUM | SUM
//! resolution   := SUM "->" SUM "=>" "I"
//! SUM          := term ("+" term)*
//! term         := [INT] ATOM ["(" INT ")"]
//! ATOM         := "O" | "T" | "Om" | "Om^" INT
//! ```
//!
//! `Om` is `Ω^1`; `Om^p` is `Ω^p`, used when printing atoms with `1 < p < n-1`.

use crate::cohomology::{Ambient, BundleAtom, FreeSum};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn int(&mut self) -> Result<Option<i64>> {
        self.skip_ws();
        let rest = self.rest();
        let sign_len = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        let digits = rest[sign_len..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Ok(None);
        }
        let text = &rest[..sign_len + digits];
        match text.parse::<i64>() {
            Ok(v) => {
                self.pos += text.len();
                Ok(Some(v))
            }
            Err(_) => self.err(format!("integer out of range: {text}")),
        }
    }

    fn unsigned(&mut self) -> Result<Option<u64>> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Ok(None);
        }
        let text = &self.rest()[..digits];
        match text.parse::<u64>() {
            Ok(v) => {
                self.pos += digits;
                Ok(Some(v))
            }
            Err(_) => self.err(format!("multiplicity out of range: {text}")),
        }
    }

    fn term(&mut self, amb: Ambient) -> Result<(BundleAtom, u64)> {
        let mult = self.unsigned()?.unwrap_or(1);
        if mult == 0 {
            return self.err("multiplicity must be positive");
        }
        self.skip_ws();
        enum Kind {
            Line,
            Tangent,
            Forms(u32),
        }
        let kind = if self.eat("Om") {
            if self.eat("^") {
                match self.unsigned()? {
                    Some(p) if p <= amb.n() as u64 => Kind::Forms(p as u32),
                    Some(p) => return self.err(format!("Ω^{p} does not exist on {amb}")),
                    None => return self.err("expected form degree after '^'"),
                }
            } else {
                Kind::Forms(1)
            }
        } else if self.eat("O") {
            Kind::Line
        } else if self.eat("T") {
            Kind::Tangent
        } else {
            return self.err("expected atom O, T or Om");
        };
        let twist = if self.eat("(") {
            let Some(k) = self.int()? else {
                return self.err("expected integer twist");
            };
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            k
        } else {
            0
        };
        let atom = match kind {
            Kind::Line => BundleAtom::Line(twist),
            Kind::Tangent => BundleAtom::tangent(amb, twist)?,
            Kind::Forms(p) => BundleAtom::form_power(amb, p, twist)?,
        };
        Ok((atom, mult))
    }

    fn sum(&mut self, amb: Ambient) -> Result<FreeSum> {
        let mut out = FreeSum::new(amb);
        loop {
            let (atom, mult) = self.term(amb)?;
            out.push(atom, mult)?;
            if !self.eat("+") {
                return Ok(out);
            }
        }
    }
}

/// Parses a single `SUM`.
pub fn parse_sum(amb: Ambient, src: &str) -> Result<FreeSum> {
    let mut c = Cursor::new(src);
    let sum = c.sum(amb)?;
    if !c.at_end() {
        return c.err("unexpected trailing input");
    }
    Ok(sum)
}

/// Parsed shape of `SUM [-> SUM] [=> I]`: `(source, target, ideal_marker)`.
pub(crate) fn parse_arrow(amb: Ambient, src: &str) -> Result<(FreeSum, FreeSum, bool)> {
    let mut c = Cursor::new(src);
    let first = c.sum(amb)?;
    let (l1, l0) = if c.eat("->") {
        (first, c.sum(amb)?)
    } else {
        (FreeSum::new(amb), first)
    };
    let ideal = if c.eat("=>") {
        if !c.eat("I") {
            return c.err("expected 'I' after '=>'");
        }
        true
    } else {
        false
    };
    if !c.at_end() {
        return c.err("unexpected trailing input");
    }
    Ok((l1, l0, ideal))
}

fn with_twist(name: &str, k: i64) -> String {
    if k == 0 {
        name.to_string()
    } else {
        format!("{name}({k})")
    }
}

pub fn format_atom(amb: Ambient, atom: &BundleAtom) -> String {
    match *atom {
        BundleAtom::Line(k) => with_twist("O", k),
        BundleAtom::FormPower { p: 1, k } => with_twist("Om", k),
        BundleAtom::FormPower { p, k } if p + 1 == amb.n() => {
            with_twist("T", k - amb.n() as i64 - 1)
        }
        BundleAtom::FormPower { p, k } => with_twist(&format!("Om^{p}"), k),
    }
}

pub fn format_sum(f: &FreeSum) -> String {
    if f.is_empty() {
        return "0".to_string();
    }
    f.iter()
        .map(|(a, m)| {
            let atom = format_atom(f.ambient(), a);
            if m == 1 {
                atom
            } else {
                format!("{m}{atom}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(n: u32) -> Ambient {
        Ambient::new(n).unwrap()
    }

    #[test]
    fn parses_terms() {
        let s = parse_sum(amb(2), "2O + O(2)").unwrap();
        assert_eq!(s, FreeSum::lines(amb(2), [(0, 2), (2, 1)]));
        let s = parse_sum(amb(4), "T(-2)").unwrap();
        assert_eq!(s.expanded(), vec![BundleAtom::FormPower { p: 3, k: 3 }]);
        let s = parse_sum(amb(4), "Om(2)").unwrap();
        assert_eq!(s.expanded(), vec![BundleAtom::FormPower { p: 1, k: 2 }]);
        let s = parse_sum(amb(5), "Om^2(-1)").unwrap();
        assert_eq!(s.expanded(), vec![BundleAtom::FormPower { p: 2, k: -1 }]);
    }

    #[test]
    fn arrow_forms() {
        let (l1, l0, ideal) = parse_arrow(amb(2), "O(-2)+O(-1) -> 6O").unwrap();
        assert!(!ideal);
        assert_eq!(l1, FreeSum::lines(amb(2), [(-2, 1), (-1, 1)]));
        assert_eq!(l0, FreeSum::lines(amb(2), [(0, 6)]));
        let (_, _, ideal) = parse_arrow(amb(2), "2O(-3) -> 3O(-2) => I").unwrap();
        assert!(ideal);
        let (l1, _, _) = parse_arrow(amb(2), "T").unwrap();
        assert!(l1.is_empty());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "3", "O(", "O(x)", "0O", "O -> ", "O -> O junk", "Om^7", "X"] {
            assert!(
                matches!(parse_arrow(amb(2), bad), Err(Error::Parse { .. })),
                "{bad:?} should not parse"
            );
        }
    }

    #[test]
    fn formats() {
        let p2 = amb(2);
        assert_eq!(format_sum(&parse_sum(p2, "O(2)+2O").unwrap()), "2O+O(2)");
        // On P^2 the tangent bundle is Ω^1(3).
        assert_eq!(format_sum(&parse_sum(p2, "T").unwrap()), "Om(3)");
        assert_eq!(format_sum(&parse_sum(amb(4), "T(-2)").unwrap()), "T(-2)");
        assert_eq!(format_sum(&parse_sum(amb(5), "Om^2").unwrap()), "Om^2");
    }
}
