//! Affine rational forms in named parameters, and phase exponents `ζ^θ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chaincore::format_rational;

use super::CycloError;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `constant + Σ coefficient·parameter`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Affine {
    pub constant: Q,
    pub coefficients: BTreeMap<String, Q>,
}

impl Affine {
    pub fn constant(c: Q) -> Self {
        Affine {
            constant: c,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn int(c: i64) -> Self {
        Affine::constant(q(c))
    }

    pub fn param(name: &str) -> Self {
        Affine::term(name, q(1))
    }

    pub fn term(name: &str, c: Q) -> Self {
        let mut a = Affine::default();
        if !c.is_zero() {
            a.coefficients.insert(name.to_string(), c);
        }
        a
    }

    pub fn coefficient(&self, name: &str) -> Q {
        self.coefficients.get(name).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.coefficients.keys().map(String::as_str)
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (k, v) in &other.coefficients {
            let e = out.coefficients.entry(k.clone()).or_insert_with(Q::zero);
            *e += v;
            if e.is_zero() {
                out.coefficients.remove(k);
            }
        }
        out
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Affine {
        if c.is_zero() {
            return Affine::default();
        }
        Affine {
            constant: &self.constant * c,
            coefficients: self
                .coefficients
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Replaces each parameter found in `map` by its affine expression.
    pub fn substitute(&self, map: &BTreeMap<String, Affine>) -> Affine {
        let mut out = Affine::constant(self.constant.clone());
        for (k, v) in &self.coefficients {
            let piece = match map.get(k) {
                Some(e) => e.scale(v),
                None => Affine::term(k, v.clone()),
            };
            out = out.add(&piece);
        }
        out
    }

    /// Value at a point; parameters missing from `point` count as zero.
    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Q {
        let mut acc = self.constant.clone();
        for (k, v) in &self.coefficients {
            if let Some(x) = point.get(k) {
                acc += v * x;
            }
        }
        acc
    }

    /// Exact range over a box; parameters missing from the box are an error.
    pub fn range(&self, bounds: &BTreeMap<String, (Q, Q)>) -> Result<(Q, Q), CycloError> {
        let (mut lo, mut hi) = (self.constant.clone(), self.constant.clone());
        for (k, v) in &self.coefficients {
            let (a, b) = bounds
                .get(k)
                .ok_or_else(|| CycloError::Invalid(format!("parameter {k} has no box")))?;
            if v.is_positive() {
                lo += v * a;
                hi += v * b;
            } else {
                lo += v * b;
                hi += v * a;
            }
        }
        Ok((lo, hi))
    }

    /// The constant reduced into `[0, m)`.
    pub fn reduce_constant(&self, m: u32) -> Affine {
        let mm = q(m as i64);
        let k = (&self.constant / &mm).floor();
        Affine {
            constant: &self.constant - k * mm,
            coefficients: self.coefficients.clone(),
        }
    }

    pub fn parse(s: &str) -> Result<Affine, CycloError> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(CycloError::Invalid(format!(
                "trailing input in expression '{s}'"
            )));
        }
        Ok(e)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.constant.is_zero() || self.coefficients.is_empty() {
            write!(f, "{}", format_rational(&self.constant))?;
            first = false;
        }
        for (k, v) in &self.coefficients {
            let neg = v.is_negative();
            let a = v.abs();
            let sign = match (first, neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            if a.is_one() {
                write!(f, "{sign}{k}")?;
            } else if a.is_integer() {
                write!(f, "{sign}{}{k}", a.numer())?;
            } else {
                write!(f, "{sign}{}*{k}", format_rational(&a))?;
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, CycloError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n: BigInt = digits
                .parse()
                .map_err(|_| CycloError::Invalid(format!("bad number '{digits}'")))?;
            out.push(Tok::Num(Q::from_integer(n)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(CycloError::Invalid(format!(
                "unexpected character '{c}' in expression"
            )));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Affine, CycloError> {
        let mut acc = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                self.term()?.scale(&q(-1))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Affine, CycloError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = product(&acc, &f)?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    if !f.is_constant() || f.constant.is_zero() {
                        return Err(CycloError::Invalid(
                            "division by a non-constant or zero".into(),
                        ));
                    }
                    acc = acc.scale(&f.constant.recip());
                }
                // Juxtaposition such as `4t` or `2(1+s)`.
                Some(Tok::Ident(_)) | Some(Tok::Op('(')) | Some(Tok::Num(_)) => {
                    let f = self.factor()?;
                    acc = product(&acc, &f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Affine, CycloError> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Affine::constant(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Affine::param(&name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(CycloError::Invalid("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(CycloError::Invalid(format!("unexpected token {other:?}"))),
        }
    }
}

fn product(a: &Affine, b: &Affine) -> Result<Affine, CycloError> {
    if a.is_constant() {
        Ok(b.scale(&a.constant))
    } else if b.is_constant() {
        Ok(a.scale(&b.constant))
    } else {
        Err(CycloError::Invalid(
            "product of two non-constant terms is not affine".into(),
        ))
    }
}

/// `ζ^θ` with `ζ = e^{2πi/m}`; the exponent may take any real value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseExponent {
    pub exponent: Affine,
    pub modulus: u32,
}

impl PhaseExponent {
    pub fn new(exponent: Affine, modulus: u32) -> Result<Self, CycloError> {
        if modulus < 2 {
            return Err(CycloError::Invalid(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        Ok(PhaseExponent { exponent, modulus })
    }

    pub fn constant(&self) -> &Q {
        &self.exponent.constant
    }

    pub fn coefficients(&self) -> &BTreeMap<String, Q> {
        &self.exponent.coefficients
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta({})", self.exponent)
    }
}

/// `⌈x⌉` and `⌊x⌋` for rationals.
pub(crate) fn ceil_int(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub(crate) fn floor_int(x: &Q) -> BigInt {
    let (n, d) = (x.numer(), x.denom());
    n.div_floor(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let a = Affine::parse("2+2s").unwrap();
        assert_eq!(a.constant, q(2));
        assert_eq!(a.coefficient("s"), q(2));
        let b = Affine::parse("(1+s)/4").unwrap();
        assert_eq!(b.coefficient("s"), qf(1, 4));
        assert_eq!(b.constant, qf(1, 4));
        let c = Affine::parse("-t/2 + 3*u - 1/2").unwrap();
        assert_eq!(c.coefficient("t"), qf(-1, 2));
        assert_eq!(c.coefficient("u"), q(3));
        assert_eq!(c.constant, qf(-1, 2));
        assert!(Affine::parse("t*s").is_err());
        assert!(Affine::parse("t/s").is_err());
        assert!(Affine::parse("1+").is_err());
        assert_eq!(
            Affine::parse("k - 1 + t - k").unwrap(),
            Affine::parse("t-1").unwrap()
        );
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "4t", "1 + s", "-1/2 + s", "1/4 + 1/4*s", "-t + 2u"] {
            let a = Affine::parse(s).unwrap();
            assert_eq!(Affine::parse(&a.to_string()).unwrap(), a, "{s}");
        }
    }

    #[test]
    fn exact_range() {
        let a = Affine::parse("4t - 1 - s").unwrap();
        let b: BTreeMap<String, (Q, Q)> = [
            ("t".to_string(), (q(0), q(1))),
            ("s".to_string(), (q(0), q(1))),
        ]
        .into_iter()
        .collect();
        assert_eq!(a.range(&b).unwrap(), (q(-2), q(3)));
        assert_eq!(floor_int(&qf(-3, 2)), BigInt::from(-2));
        assert_eq!(ceil_int(&qf(-3, 2)), BigInt::from(-1));
    }
}
