use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Ratio of two polynomials in canonical form: coprime, monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let l = den.lead().expect("nonzero denominator").recip();
        RationalFunction {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(c))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// `a / (z - b)`.
    pub fn first_order(a: i64, b: i64) -> Self {
        Self::reduce(
            Polynomial::from_int(a),
            &Polynomial::z() - &Polynomial::from_int(b),
        )
    }

    /// `z^k` for any integer `k`.
    pub fn z_pow(k: i64) -> Self {
        let m = Polynomial::monomial(BigRational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RationalFunction {
                num: Polynomial::one(),
                den: m,
            }
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `deg num - deg den`, or `None` for zero.
    pub fn relative_degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(dn - self.den.degree().expect("nonzero") as i64)
    }

    /// Zero counts as (strictly) proper.
    pub fn is_proper(&self) -> bool {
        self.relative_degree().is_none_or(|d| d <= 0)
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.relative_degree().is_none_or(|d| d < 0)
    }

    /// Largest of the numerator and denominator degrees.
    pub fn max_degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn is_canonical(&self) -> bool {
        self.den.lead().is_some_and(One::is_one) && Polynomial::gcd(&self.num, &self.den).is_one()
    }

    /// Limit as `z → ∞`; `None` when the function is improper.
    pub fn limit_at_infinity(&self) -> Option<BigRational> {
        match self.relative_degree() {
            None => Some(BigRational::zero()),
            Some(d) if d < 0 => Some(BigRational::zero()),
            Some(0) => Some(self.num.lead().expect("nonzero") / self.den.lead().expect("nonzero")),
            Some(_) => None,
        }
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::reduce(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        let rn = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.den == rhs.den {
            return Self::reduce(&self.num + &rn, self.den.clone());
        }
        Self::reduce(
            &(&self.num * &rhs.den) + &(&rn * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; see [`RationalFunction::checked_div`].
impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs)
            .expect("rational function division by zero")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let mut terms = self.num.coeffs().iter().filter(|c| !c.is_zero());
        let simple_num = terms.next().is_some_and(|c| c.is_integer()) && terms.next().is_none();
        // The denominator is monic, so a single term is a bare power of z.
        let simple_den = self.den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        match (simple_num, simple_den) {
            (true, true) => write!(f, "{}/{}", self.num, self.den),
            (true, false) => write!(f, "{}/({})", self.num, self.den),
            (false, true) => write!(f, "({})/{}", self.num, self.den),
            (false, false) => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Z,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            'z' | 'Z' => {
                out.push(Tok::Z);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(parse_decimal(&text)?));
            }
            other => {
                return Err(Error::Syntax(format!(
                    "unexpected '{other}' in rational literal"
                )))
            }
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::Syntax(format!("bad number '{text}'"));
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, d))
}

struct LiteralParser {
    toks: Vec<Tok>,
    pos: usize,
}

impl LiteralParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else if matches!(self.peek(), Some(Tok::Z) | Some(Tok::Op('('))) {
                // implicit product, e.g. `2z` or `3(z+1)`
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let exp = match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) if n.is_integer() => {
                self.pos += 1;
                i64::try_from(n.to_integer())
                    .map_err(|_| Error::Syntax("exponent too large".into()))?
            }
            other => {
                return Err(Error::Syntax(format!(
                    "expected integer exponent, found {other:?}"
                )))
            }
        };
        base.pow(if negative { -exp } else { exp })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(n))
            }
            Some(Tok::Z) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(Polynomial::z()))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Syntax("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Syntax(format!(
                "unexpected {other:?} in rational literal"
            ))),
        }
    }
}

/// Parses literals such as `(2*z+1)/(z^2-3)`, `1/2*z`, or `z^-1`.
impl FromStr for RationalFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LiteralParser {
            toks: lex(s)?,
            pos: 0,
        };
        if p.toks.is_empty() {
            return Err(Error::Syntax("empty rational literal".into()));
        }
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Syntax(format!("trailing input in '{s}'")));
        }
        Ok(e)
    }
}
