//! Ordinals in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + ... + w^ek*ck` with strictly
//! decreasing exponents `e1 > ... > ek` (themselves ordinals) and positive
//! coefficients. The empty sum is `0`. Values are kept canonical at all times,
//! so structural equality is ordinal equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term { exp: e, coeff: 1 }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, rejecting
    /// anything that is not already in Cantor normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        for pair in terms.windows(2) {
            if pair[0].0 <= pair[1].0 {
                return Err(Error::OrdinalSyntax {
                    pos: 0,
                    message: "exponents must be strictly decreasing".into(),
                });
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(Error::OrdinalSyntax {
                pos: 0,
                message: "coefficients must be positive".into(),
            });
        }
        Ok(Ordinal {
            terms: terms
                .into_iter()
                .map(|(exp, coeff)| Term { exp, coeff })
                .collect(),
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if it is finite.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    /// Exponent of the leading term.
    pub fn degree(&self) -> Result<Ordinal> {
        self.terms
            .first()
            .map(|t| t.exp.clone())
            .ok_or(Error::DegreeOfZero)
    }

    /// True iff the value is `w^e` for some `e`. Zero is not a power of `w`.
    pub fn is_omega_power(&self) -> bool {
        matches!(self.terms.as_slice(), [t] if t.coeff == 1)
    }

    pub fn add(&self, other: &Ordinal) -> Result<Ordinal> {
        let Some(lead) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp >= lead.exp)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exp == lead.exp {
                last.coeff = last
                    .coeff
                    .checked_add(lead.coeff)
                    .ok_or(Error::CoefficientOverflow)?;
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ok(Ordinal { terms })
    }

    pub fn mul(&self, other: &Ordinal) -> Result<Ordinal> {
        if self.is_zero() || other.is_zero() {
            return Ok(Ordinal::zero());
        }
        let lead = &self.terms[0];
        let mut terms = Vec::new();
        for t in &other.terms {
            if t.exp.is_zero() {
                terms.push(Term {
                    exp: lead.exp.clone(),
                    coeff: lead
                        .coeff
                        .checked_mul(t.coeff)
                        .ok_or(Error::CoefficientOverflow)?,
                });
                terms.extend(self.terms[1..].iter().cloned());
            } else {
                terms.push(Term {
                    exp: lead.exp.add(&t.exp)?,
                    coeff: t.coeff,
                });
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn pow_nat(&self, n: u64) -> Result<Ordinal> {
        let mut acc = Ordinal::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `self^w`: the supremum of the finite powers.
    pub fn pow_omega(&self) -> Result<Ordinal> {
        match self.as_finite() {
            Some(0) => Ok(Ordinal::zero()),
            Some(1) => Ok(Ordinal::one()),
            Some(_) => Ok(Ordinal::omega()),
            None => Ok(Ordinal::omega_pow(self.degree()?.mul(&Ordinal::omega())?)),
        }
    }

    /// True iff every exponent of every exponent is finite, i.e. the value is
    /// below `w^(w^w)`.
    pub fn below_omega_omega_omega(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.exp.terms.iter().all(|s| s.exp.is_finite()))
    }

    fn fmt_into(&self, out: &mut String) {
        if self.is_zero() {
            out.push('0');
            return;
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            match t.exp.as_finite() {
                Some(0) => {
                    out.push_str(&t.coeff.to_string());
                    continue;
                }
                Some(1) => out.push('w'),
                Some(k) => {
                    out.push_str("w^");
                    out.push_str(&k.to_string());
                }
                None => {
                    out.push_str("w^(");
                    t.exp.fmt_into(out);
                    out.push(')');
                }
            }
            if t.coeff >= 2 {
                out.push('*');
                out.push_str(&t.coeff.to_string());
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.fmt_into(&mut s);
        s
    }

    pub fn parse_text(s: &str) -> Result<Ordinal> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let v = p.ordinal()?;
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exp: Ordinal::zero(),
                    coeff: n,
                }],
            }
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a.exp.cmp(&b.exp).then(a.coeff.cmp(&b.coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ordinal::parse_text(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::OrdinalSyntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        if self.src[start] == b'0' && self.pos - start > 1 {
            return Err(Error::OrdinalSyntax {
                pos: start,
                message: "leading zero".into(),
            });
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::OrdinalSyntax {
                pos: start,
                message: "number out of range".into(),
            })
    }

    fn ordinal(&mut self) -> Result<Ordinal> {
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(Ordinal::zero());
        }
        let mut terms: Vec<Term> = Vec::new();
        loop {
            let at = self.pos;
            let term = self.term()?;
            if let Some(prev) = terms.last() {
                if prev.exp <= term.exp {
                    return Err(Error::OrdinalSyntax {
                        pos: at,
                        message: "exponents must be strictly decreasing".into(),
                    });
                }
            }
            terms.push(term);
            if !self.eat(" + ") {
                break;
            }
        }
        Ok(Ordinal { terms })
    }

    fn term(&mut self) -> Result<Term> {
        if self.peek() != Some(b'w') {
            let at = self.pos;
            let coeff = self.number()?;
            if coeff == 0 {
                return Err(Error::OrdinalSyntax {
                    pos: at,
                    message: "zero coefficient".into(),
                });
            }
            return Ok(Term {
                exp: Ordinal::zero(),
                coeff,
            });
        }
        self.pos += 1;
        let exp = if self.eat("^(") {
            let at = self.pos;
            let e = self.ordinal()?;
            if e.is_finite() {
                return Err(Error::OrdinalSyntax {
                    pos: at,
                    message: "finite exponent must not be parenthesized".into(),
                });
            }
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            e
        } else if self.eat("^") {
            let at = self.pos;
            let k = self.number()?;
            if k < 2 {
                return Err(Error::OrdinalSyntax {
                    pos: at,
                    message: "exponent 0 or 1 must not be written".into(),
                });
            }
            Ordinal::from(k)
        } else {
            Ordinal::one()
        };
        let coeff = if self.eat("*") {
            let at = self.pos;
            let c = self.number()?;
            if c < 2 {
                return Err(Error::OrdinalSyntax {
                    pos: at,
                    message: "coefficient 0 or 1 must not be written".into(),
                });
            }
            c
        } else {
            1
        };
        Ok(Term { exp, coeff })
    }
}
