//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' int)?        int may be signed or parenthesized
//! primary := number | symbol | '(' expr ')'
//! ```
//!
//! Symbols: `s t x y z`, velocities `td xd yd zd`, accelerations
//! `tdd xdd ydd zdd`, metric functions `A(t)`, `A'(t)`, `A''(t)` (the `(t)`
//! may be omitted), parameters `a1..a9 a b`, and abstract coefficient
//! functions `mu tau xi eta phi f` with optional partial suffix such as
//! `tau_x` or `mu_st`.

use super::atom::{Atom, Coord, Dir, Func, Param, Unknown};
use super::expr::Expr;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn parse<K: Scalar>(text: &str) -> Result<Expr<K>> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

/// Resolves a bare symbol name (no `(t)` suffix) to an atom.
pub fn atom_by_name(name: &str) -> Option<Atom> {
    let coord = |c: char| Coord::ALL.into_iter().find(|k| k.letter() == c);
    let dir = |c: char| Dir::ALL.into_iter().find(|k| k.letter() == c);
    if let [c] = name.as_bytes() {
        if let Some(k) = coord(*c as char) {
            return Some(Atom::Coord(k));
        }
    }
    match name {
        "a" => return Some(Atom::Param(Param::LowerA)),
        "b" => return Some(Atom::Param(Param::LowerB)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix('a') {
        if let Ok(i @ 1..=9) = rest.parse::<u8>() {
            return Some(Atom::Param(Param::Alpha(i)));
        }
    }
    let bytes = name.as_bytes();
    if bytes.len() == 2 && bytes[1] == b'd' {
        if let Some(d) = dir(bytes[0] as char) {
            return Some(Atom::Vel(d));
        }
    }
    if bytes.len() == 3 && &bytes[1..] == b"dd" {
        if let Some(d) = dir(bytes[0] as char) {
            return Some(Atom::Acc(d));
        }
    }
    let func = Func::ALL.into_iter().find(|f| name.starts_with(f.letter()));
    if let Some(f) = func {
        let primes = &name[1..];
        if primes.bytes().all(|b| b == b'\'') && primes.len() <= usize::from(u8::MAX) {
            return Some(Atom::Func(f, primes.len() as u8));
        }
    }
    let (base, suffix) = name.split_once('_').unwrap_or((name, ""));
    let unknown = Unknown::from_name(base)?;
    if name.contains('_') && suffix.is_empty() {
        return None;
    }
    let mut idx = [0u8; 5];
    for c in suffix.chars() {
        idx[coord(c)?.index()] += 1;
    }
    Some(Atom::Partial(unknown, idx))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr<K: Scalar>(&mut self) -> Result<Expr<K>> {
        let mut items = vec![self.term()?];
        loop {
            if self.eat('+') {
                items.push(self.term()?);
            } else if self.eat('-') {
                items.push(self.term()?.neg());
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Add(items) })
    }

    fn term<K: Scalar>(&mut self) -> Result<Expr<K>> {
        let mut items = vec![self.unary()?];
        loop {
            if self.eat('*') {
                items.push(self.unary()?);
            } else if self.eat('/') {
                let at = self.pos;
                let denom: Expr<K> = self.unary()?;
                if let Expr::Num(k) = &denom {
                    if k.is_zero() {
                        return Err(Error::Syntax { position: at, message: "division by zero".into() });
                    }
                }
                items.push(denom.pow(-1));
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Mul(items) })
    }

    fn unary<K: Scalar>(&mut self) -> Result<Expr<K>> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power<K: Scalar>(&mut self) -> Result<Expr<K>> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let negative = self.eat('-');
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.syntax("expected integer exponent"));
        }
        let mut exp: i32 = digits.parse().map_err(|_| self.syntax("exponent out of range"))?;
        if negative {
            exp = -exp;
        }
        if paren && !self.eat(')') {
            return Err(self.syntax("expected `)` after exponent"));
        }
        Ok(base.pow(exp))
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn primary<K: Scalar>(&mut self) -> Result<Expr<K>> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let atom = atom_by_name(name)
                    .ok_or_else(|| Error::UnknownSymbol { position: start, name: name.to_string() })?;
                if atom.is_function() {
                    let save = self.pos;
                    if self.eat('(') {
                        if !(self.eat('t') && self.eat(')')) {
                            self.pos = save;
                            return Err(self.syntax("metric functions take the argument `(t)`"));
                        }
                    }
                }
                Ok(Expr::Atom(atom))
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number<K: Scalar>(&mut self) -> Result<Expr<K>> {
        let start = self.pos;
        let int = self.digits();
        let mut frac = "";
        if self.peek() == Some('.') {
            self.pos += 1;
            frac = self.digits();
        }
        let text = format!("{int}{frac}");
        let num: i64 = text
            .parse()
            .map_err(|_| Error::Syntax { position: start, message: "number out of range".into() })?;
        let den = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| Error::Syntax { position: start, message: "too many decimals".into() })?;
        Ok(Expr::Num(K::from_ratio(num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn canon(s: &str) -> String {
        parse::<Rational>(s).unwrap().to_poly().unwrap().to_string()
    }

    #[test]
    fn grammar_examples() {
        let e: Expr<Rational> = parse("A(t)^2 * xd^2").unwrap();
        assert_eq!(
            e,
            Expr::Mul(vec![Expr::Atom(Atom::func(Func::A)).pow(2), Expr::Atom(Atom::Vel(Dir::X)).pow(2)])
        );
        assert_eq!(canon("-(td^2) + 3/2*x"), "-td^2 + 3/2*x");
        assert_eq!(
            canon("B(t)^2*(yd^2 + x^2*zd^2 - 2*x*yd*zd)"),
            "x^2*zd^2*B(t)^2 - 2*x*yd*zd*B(t)^2 + yd^2*B(t)^2"
        );
    }

    #[test]
    fn symbols() {
        assert_eq!(atom_by_name("A''"), Some(Atom::Func(Func::A, 2)));
        assert_eq!(atom_by_name("tau_x"), Some(Atom::Partial(Unknown::Tau, [0, 0, 1, 0, 0])));
        assert_eq!(atom_by_name("f_s"), Some(Atom::Partial(Unknown::Gauge, [1, 0, 0, 0, 0])));
        assert_eq!(atom_by_name("a9"), Some(Atom::Param(Param::Alpha(9))));
        assert_eq!(atom_by_name("a10"), None);
        assert_eq!(atom_by_name("tau_"), None);
        assert_eq!(atom_by_name("zdd"), Some(Atom::Acc(Dir::Z)));
        assert_eq!(canon("A'(t) + A'"), "2*A'(t)");
    }

    #[test]
    fn errors_carry_positions() {
        match parse::<Rational>("x + q") {
            Err(Error::UnknownSymbol { position, name }) => {
                assert_eq!((position, name.as_str()), (4, "q"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse::<Rational>("x + (y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse::<Rational>("x ^ y"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse::<Rational>("x / 0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse::<Rational>("A(x)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn exponents_and_decimals() {
        assert_eq!(canon("A^(-2) * A^2"), "1");
        assert_eq!(canon("C(t)^-1"), "C(t)^(-1)");
        assert_eq!(canon("0.25*x"), "1/4*x");
        assert_eq!(canon("--x"), "x");
    }
}
