//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      division only by nonzero constants
//! unary  := ('-' | '+') unary | power
//! power  := atom (('^' | '**') UINT)?
//! atom   := NUMBER | IDENT | '(' expr ')'
//! ```

use exactalg::{MultiPoly, Rat};
use num_traits::Zero;

use crate::error::DslError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Lexed>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '*' => {
                if chars.get(i + 1) == Some(&'*') {
                    i += 1;
                    Some(Tok::Caret)
                } else {
                    Some(Tok::Star)
                }
            }
            _ => None,
        };
        if let Some(t) = single {
            out.push(Lexed { tok: t, col });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = parse_decimal(&text).ok_or_else(|| DslError::syntax(line, col, format!("bad number `{text}`")))?;
            out.push(Lexed { tok: Tok::Num(v), col });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Lexed { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        return Err(DslError::syntax(line, col, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Exact value of a decimal literal such as `12`, `0.25` or `3.`.
fn parse_decimal(s: &str) -> Option<Rat> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: exactalg::BigInt = digits.parse().ok()?;
    let den = num_traits::pow(exactalg::BigInt::from(10), frac_part.len());
    Some(Rat::new(num, den))
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    line: usize,
    end_col: usize,
    symbols: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn expr(&mut self) -> Result<MultiPoly, DslError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, DslError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    let d = self.unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(Rat::from_integer(1.into()) / c)),
                        Some(_) => return Err(DslError::syntax(self.line, col, "division by zero")),
                        None => {
                            return Err(DslError::syntax(self.line, col, "division by a non-constant expression"))
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, DslError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, DslError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| DslError::syntax(self.line, col, "exponent out of range"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(DslError::syntax(self.line, col, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, DslError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(n).with_vars(self.symbols).expect("constant fits any variable list"))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if !self.symbols.contains(&name) {
                    return Err(DslError::Undeclared { line: self.line, col, name });
                }
                Ok(MultiPoly::var(&name).with_vars(self.symbols).expect("declared symbol"))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(DslError::syntax(self.line, self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(DslError::syntax(self.line, col, format!("unexpected token {t:?}"))),
            None => Err(DslError::syntax(self.line, col, "unexpected end of expression")),
        }
    }
}

/// Parses `src` into a polynomial over `symbols`. `line` and `col0` locate the
/// expression inside its document for error messages (both 1-based).
pub fn parse_expr(src: &str, symbols: &[String], line: usize, col0: usize) -> Result<MultiPoly, DslError> {
    let toks = lex(src, line, col0)?;
    let end_col = col0 + src.chars().count();
    let mut p = Parser { toks, pos: 0, line, end_col, symbols };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(DslError::syntax(line, p.col(), "trailing input"));
    }
    Ok(e.with_vars(symbols).expect("parsed over declared symbols"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::rational::rat;

    fn syms(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn precedence() {
        let s = syms(&["x", "y"]);
        let p = parse_expr("-x^2 + 3/4*x*y - (y - 1)**2", &s, 1, 1).unwrap();
        assert_eq!(p.to_string(), "-x^2 + 3/4*x*y - y^2 + 2*y - 1");
    }

    #[test]
    fn decimals_are_exact() {
        let p = parse_expr("0.25*x", &syms(&["x"]), 1, 1).unwrap();
        assert_eq!(p, MultiPoly::var("x").scale(&rat(1, 4)));
    }

    #[test]
    fn errors_carry_position() {
        let s = syms(&["x"]);
        assert_eq!(
            parse_expr("x + q", &s, 3, 10),
            Err(DslError::Undeclared { line: 3, col: 14, name: "q".into() })
        );
        assert!(matches!(parse_expr("x / x", &s, 1, 1), Err(DslError::Syntax { col: 5, .. })));
        assert!(matches!(parse_expr("x^y", &s, 1, 1), Err(DslError::Syntax { .. })));
        assert!(matches!(parse_expr("(x", &s, 1, 1), Err(DslError::Syntax { .. })));
        assert!(matches!(parse_expr("x $", &s, 1, 1), Err(DslError::Syntax { col: 3, .. })));
        assert!(matches!(parse_expr("", &s, 1, 1), Err(DslError::Syntax { .. })));
    }
}
