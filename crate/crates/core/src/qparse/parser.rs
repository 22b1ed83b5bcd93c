//! Recursive-descent parser for quadratic forms over Q(i).
//!
//! Grammar (whitespace-insensitive, juxtaposition multiplies):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/')? factor)*
//! factor  := ('+' | '-') factor | power
//! power   := primary ('^' integer)?
//! primary := integer | 'i' | 'z' integer | '(' expr ')'
//! ```
//!
//! Intermediate results are polynomials of degree at most two; the final
//! result must be homogeneous of degree two.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{format_gaussian, real, GaussianRational, Rational};
use crate::symlin::ComplexSymMatrix;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(BigInt),
    Imag,
    Var(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && (chars[k] == '.' || chars[k] == 'e' || chars[k] == 'E') {
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '.') {
                    k += 1;
                }
                let literal: String = chars[start..k].iter().collect();
                return Err(Error::BadCoefficient(literal));
            }
            let digits: String = chars[start..k].iter().collect();
            tokens.push(Token::Number(digits.parse().expect("ascii digits")));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let word: String = chars[start..k].iter().collect();
            split_word(&word, &mut tokens)?;
            continue;
        }
        let token = match c {
            '+' => Token::Plus,
            '-' | '\u{2212}' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '.' => {
                return Err(Error::BadCoefficient(chars[k..].iter().take(8).collect()));
            }
            other => return Err(Error::Syntax(format!("unexpected character {other:?}"))),
        };
        tokens.push(token);
        k += 1;
    }
    Ok(tokens)
}

/// Splits an identifier run such as `iz0` or `z1z2` into `i` and `z<k>` tokens.
fn split_word(word: &str, tokens: &mut Vec<Token>) -> Result<()> {
    let mut rest = word;
    while !rest.is_empty() {
        if let Some(tail) = rest.strip_prefix('i') {
            tokens.push(Token::Imag);
            rest = tail;
        } else if let Some(tail) = rest.strip_prefix('z') {
            let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                return Err(Error::VariableOutOfRange(word.to_string()));
            }
            tokens.push(Token::Var(format!("z{digits}")));
            rest = &tail[digits.len()..];
        } else {
            return Err(Error::VariableOutOfRange(word.to_string()));
        }
    }
    Ok(())
}

/// Monomial as a sorted list of variable indices; length is the degree.
type Monomial = Vec<usize>;

#[derive(Clone, Debug, Default)]
struct Poly(BTreeMap<Monomial, GaussianRational>);

impl Poly {
    fn constant(c: GaussianRational) -> Poly {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.0.insert(Vec::new(), c);
        }
        p
    }

    fn var(index: usize) -> Poly {
        let mut p = Poly::default();
        p.0.insert(vec![index], GaussianRational::one());
        p
    }

    fn as_constant(&self) -> Option<GaussianRational> {
        match self.0.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn add(mut self, other: Poly, sign: bool) -> Poly {
        for (m, c) in other.0 {
            let c = if sign { c } else { -c };
            let entry = self
                .0
                .entry(m.clone())
                .or_insert_with(GaussianRational::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                self.0.remove(&m);
            }
        }
        self
    }

    fn mul(&self, other: &Poly) -> Result<Poly> {
        let mut out = Poly::default();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                if ma.len() + mb.len() > 2 {
                    return Err(Error::NotQuadratic);
                }
                let mut m = ma.clone();
                m.extend(mb);
                m.sort_unstable();
                let mut term = Poly::default();
                term.0.insert(m, ca * cb);
                out = out.add(term, true);
            }
        }
        Ok(out)
    }

    fn scale(self, c: &GaussianRational) -> Poly {
        Poly(self.0.into_iter().map(|(m, v)| (m, v * c)).collect())
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            let sign = match t {
                Token::Plus => true,
                Token::Minus => false,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(rhs, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let divisor = rhs.as_constant().ok_or_else(|| {
                        Error::Syntax("division by a non-constant expression".into())
                    })?;
                    if divisor.is_zero() {
                        return Err(Error::BadCoefficient("division by zero".into()));
                    }
                    acc = acc.scale(&(GaussianRational::one() / divisor));
                }
                Some(Token::Number(_) | Token::Imag | Token::Var(_) | Token::LParen) => {
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.scale(&-GaussianRational::one()))
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp = match self.bump() {
            Some(Token::Number(e)) => e,
            other => {
                return Err(Error::Syntax(format!(
                    "expected an integer exponent, found {other:?}"
                )))
            }
        };
        if let Some(c) = base.as_constant() {
            let e: u32 = exp
                .try_into()
                .map_err(|_| Error::BadCoefficient("exponent too large".into()))?;
            let mut v = GaussianRational::one();
            for _ in 0..e {
                v *= c.clone();
            }
            return Ok(Poly::constant(v));
        }
        let e: usize = exp.try_into().map_err(|_| Error::NotQuadratic)?;
        if e > 2 {
            return Err(Error::NotQuadratic);
        }
        let mut acc = Poly::constant(GaussianRational::one());
        for _ in 0..e {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.bump() {
            Some(Token::Number(v)) => Ok(Poly::constant(real(Rational::from_integer(v)))),
            Some(Token::Imag) => Ok(Poly::constant(GaussianRational::i())),
            Some(Token::Var(name)) => {
                let index: usize = name[1..]
                    .parse()
                    .map_err(|_| Error::VariableOutOfRange(name.clone()))?;
                if index > self.n {
                    return Err(Error::VariableOutOfRange(name));
                }
                Ok(Poly::var(index))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Syntax("unbalanced parenthesis".into())),
                }
            }
            Some(other) => Err(Error::Syntax(format!("unexpected token {other:?}"))),
            None => Err(Error::Syntax("unexpected end of input".into())),
        }
    }
}

/// Parses a homogeneous quadratic polynomial in `z0..=zn` into its symmetric
/// Gram matrix; the coefficient of `zi*zj` (`i != j`) is split between the
/// two off-diagonal entries.
pub fn parse_quadric(text: &str, n: usize) -> Result<ComplexSymMatrix> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::ZeroQuadric);
    }
    let mut parser = Parser { tokens, pos: 0, n };
    let poly = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(Error::Syntax(format!("unexpected token {t:?}")));
    }
    if poly.0.is_empty() {
        return Err(Error::ZeroQuadric);
    }
    let half = real(Rational::new(1.into(), 2.into()));
    let mut m = ComplexSymMatrix::zeros(n + 1);
    for (mono, c) in poly.0 {
        match mono.as_slice() {
            [a, b] if a == b => m.set(*a, *a, c),
            [a, b] => m.set(*a, *b, c * &half),
            _ => return Err(Error::NotQuadratic),
        }
    }
    Ok(m)
}

/// Parses a constant Gaussian-rational expression such as `-1/2`, `2-3i` or `(1+i)/2`.
pub fn parse_scalar(text: &str) -> Result<GaussianRational> {
    let bad = || Error::BadCoefficient(text.trim().to_string());
    let tokens = tokenize(text)?;
    if tokens.is_empty() || tokens.iter().any(|t| matches!(t, Token::Var(_))) {
        return Err(bad());
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        n: 0,
    };
    let value = parser.expr().map_err(|_| bad())?;
    if parser.peek().is_some() {
        return Err(bad());
    }
    value.as_constant().ok_or_else(bad)
}

/// Prints a Gram matrix as polynomial text that [`parse_quadric`] reads back
/// to the same matrix. The zero matrix prints as `0`.
pub fn format_quadric(m: &ComplexSymMatrix) -> String {
    let two = real(Rational::from_integer(2.into()));
    let mut out = String::new();
    for a in 0..m.size() {
        for b in a..m.size() {
            let c = if a == b {
                m.get(a, a).clone()
            } else {
                m.get(a, b) * &two
            };
            if c.is_zero() {
                continue;
            }
            let mono = if a == b {
                format!("z{a}^2")
            } else {
                format!("z{a}*z{b}")
            };
            let coeff = if c.is_one() {
                String::new()
            } else if (-&c).is_one() {
                "-".to_string()
            } else {
                format!("{}*", format_gaussian(&c))
            };
            let term = format!("{coeff}{mono}");
            match (out.is_empty(), term.strip_prefix('-')) {
                (true, _) => out.push_str(&term),
                (false, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (false, None) => {
                    out.push_str(" + ");
                    out.push_str(&term);
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{gi, rational};

    #[test]
    fn cubic_quadric() {
        let m = parse_quadric("z0*z2 - z1^2", 3).unwrap();
        let mut want = ComplexSymMatrix::zeros(4);
        want.set(0, 2, real(rational(1, 2)));
        want.set(1, 1, gi(-1, 0));
        assert_eq!(m, want);
    }

    #[test]
    fn imaginary_unit() {
        let m = parse_quadric("i*z0^2", 0).unwrap();
        assert_eq!(m.rows(), vec![vec![gi(0, 1)]]);
        assert_eq!(parse_quadric("iz0^2", 0).unwrap(), m);
    }

    #[test]
    fn literals() {
        let m = parse_quadric("(1+i)/2 z0^2 + (2-3i) z0 z1 - 1/2*z1^2", 1).unwrap();
        assert_eq!(
            m.get(0, 0),
            &GaussianRational::new(rational(1, 2), rational(1, 2))
        );
        assert_eq!(
            m.get(0, 1),
            &GaussianRational::new(rational(1, 1), rational(-3, 2))
        );
        assert_eq!(m.get(1, 1), &real(rational(-1, 2)));
        let sq = parse_quadric("(z0 + z1)^2 - (z0 - z1)^2", 1).unwrap();
        assert_eq!(sq.get(0, 1), &gi(2, 0));
        assert_eq!(sq.get(0, 0), &gi(0, 0));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_quadric("z0*z1 + z2", 2), Err(Error::NotQuadratic));
        assert_eq!(parse_quadric("z0*z1*z2", 2), Err(Error::NotQuadratic));
        assert_eq!(parse_quadric("z0^2 + 1", 2), Err(Error::NotQuadratic));
        assert!(matches!(
            parse_quadric("z3^2", 2),
            Err(Error::VariableOutOfRange(_))
        ));
        assert!(matches!(
            parse_quadric("x^2", 2),
            Err(Error::VariableOutOfRange(_))
        ));
        assert!(matches!(
            parse_quadric("1.5*z0^2", 2),
            Err(Error::BadCoefficient(_))
        ));
        assert!(matches!(
            parse_quadric("z0^2/0", 2),
            Err(Error::BadCoefficient(_))
        ));
        assert_eq!(parse_quadric("", 2), Err(Error::ZeroQuadric));
        assert_eq!(parse_quadric("   ", 2), Err(Error::ZeroQuadric));
        assert_eq!(parse_quadric("z0^2 - z0^2", 2), Err(Error::ZeroQuadric));
        assert!(matches!(parse_quadric("(z0^2", 2), Err(Error::Syntax(_))));
        assert!(matches!(
            parse_quadric("z0^2 /z1", 2),
            Err(Error::Syntax(_))
        ));
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("-1/2").unwrap(), real(rational(-1, 2)));
        assert_eq!(parse_scalar("2-3i").unwrap(), gi(2, -3));
        assert_eq!(
            parse_scalar("(1+i)/2").unwrap(),
            GaussianRational::new(rational(1, 2), rational(1, 2))
        );
        assert!(parse_scalar("z0").is_err());
        assert!(parse_scalar("0.5").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn printing_round_trip() {
        for text in [
            "z0*z2 - z1^2",
            "-z0^2 + i*z1^2 - (1/2-3*i)*z0*z1",
            "-i*z0*z2 + 7/3*z2^2",
        ] {
            let m = parse_quadric(text, 2).unwrap();
            let printed = format_quadric(&m);
            assert_eq!(parse_quadric(&printed, 2).unwrap(), m, "{printed}");
        }
        assert_eq!(
            format_quadric(&parse_quadric("z0*z2 - z1^2", 2).unwrap()),
            "z0*z2 - z1^2"
        );
    }
}
