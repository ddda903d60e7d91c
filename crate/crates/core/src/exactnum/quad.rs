use std::cmp::Ordering;
use std::fmt;

use num::BigInt;

use super::rational::{parse_rational, rational_to_string};
use super::{rat, ExactText, Field, OrderedField, Rational};

/// The field `Q(sqrt d)` for a square-free radicand `d > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: u64,
}

impl QuadField {
    pub fn new(d: u64) -> Result<Self, String> {
        if d < 2 {
            return Err(format!("radicand must be > 1, got {d}"));
        }
        if !is_square_free(d) {
            return Err(format!("radicand {d} is not square-free"));
        }
        Ok(Self { d })
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    /// `a + b sqrt(d)`.
    pub fn element(&self, a: Rational, b: Rational) -> QuadExt {
        QuadExt { a, b, d: self.d }
    }

    pub fn sqrt_d(&self) -> QuadExt {
        self.element(rat(0), rat(1))
    }

    /// Parses the field descriptor `Q(sqrt d)`.
    pub fn parse_name(s: &str) -> Result<Self, String> {
        let inner = s
            .trim()
            .strip_prefix("Q(sqrt")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("not a quadratic field name: {s:?}"))?;
        let d: u64 = inner.trim().parse().map_err(|_| format!("bad radicand in {s:?}"))?;
        Self::new(d)
    }
}

fn is_square_free(mut d: u64) -> bool {
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        if d.is_multiple_of(p) {
            d /= p;
        }
        p += 1;
    }
    true
}

/// Element `a + b sqrt(d)` of a quadratic extension of `Q`.
///
/// Arithmetic between elements of different radicands is a logic error and
/// panics; use [`QuadExt::try_add`] and friends where radicands are not known
/// to agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    d: u64,
}

impl QuadExt {
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn field(&self) -> QuadField {
        QuadField { d: self.d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    fn check(&self, rhs: &Self) {
        assert_eq!(self.d, rhs.d, "mixed radicands: sqrt({}) and sqrt({})", self.d, rhs.d);
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, String> {
        self.same_field(rhs).map(|_| Field::add(self, rhs))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, String> {
        self.same_field(rhs).map(|_| Field::mul(self, rhs))
    }

    fn same_field(&self, rhs: &Self) -> Result<(), String> {
        if self.d == rhs.d {
            Ok(())
        } else {
            Err(format!("mixed radicands: sqrt({}) and sqrt({})", self.d, rhs.d))
        }
    }
}

/// Exact sign of `a + b sqrt(d)`.
pub fn qext_sign(x: &QuadExt) -> i32 {
    let sa = sign(&x.a);
    let sb = sign(&x.b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let a2 = &x.a * &x.a;
    let b2d = &x.b * &x.b * Rational::from_integer(BigInt::from(x.d));
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Field for QuadExt {
    type Ctx = QuadField;

    fn ctx(&self) -> QuadField {
        self.field()
    }

    fn zero(ctx: &QuadField) -> Self {
        ctx.element(rat(0), rat(0))
    }

    fn one(ctx: &QuadField) -> Self {
        ctx.element(rat(1), rat(0))
    }

    fn from_rational(ctx: &QuadField, r: &Rational) -> Self {
        ctx.element(r.clone(), rat(0))
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Self { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d: self.d }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Self { a: &self.a - &rhs.a, b: &self.b - &rhs.b, d: self.d }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let d = Rational::from_integer(BigInt::from(self.d));
        Self { a: &self.a * &rhs.a + &self.b * &rhs.b * d, b: &self.a * &rhs.b + &rhs.a * &self.b, d: self.d }
    }

    fn neg(&self) -> Self {
        Self { a: -&self.a, b: -&self.b, d: self.d }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self { a: &self.a / &n, b: -&self.b / &n, d: self.d })
    }

    fn field_name(ctx: &QuadField) -> String {
        format!("Q(sqrt {})", ctx.d)
    }
}

impl OrderedField for QuadExt {
    fn signum(&self) -> i32 {
        qext_sign(self)
    }

    fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

impl ExactText for QuadExt {
    /// `a+b*sqrt(d)`, with `-` in place of `+` when `b` is negative.
    fn to_exact_string(&self) -> String {
        let a = rational_to_string(&self.a);
        if self.b.is_negative() {
            format!("{a}-{}*sqrt({})", rational_to_string(&-&self.b), self.d)
        } else {
            format!("{a}+{}*sqrt({})", rational_to_string(&self.b), self.d)
        }
    }

    fn parse_exact(ctx: &QuadField, s: &str) -> Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(idx) = s.find("sqrt(") else {
            return Ok(ctx.element(parse_rational(&s)?, rat(0)));
        };
        let rest = &s[idx + 5..];
        let close = rest.find(')').ok_or_else(|| format!("unclosed sqrt in {s:?}"))?;
        if close + 1 != rest.len() {
            return Err(format!("trailing input after sqrt(..) in {s:?}"));
        }
        let d: u64 = rest[..close].parse().map_err(|_| format!("bad radicand in {s:?}"))?;
        if d != ctx.d {
            return Err(format!("radicand {d} does not match field Q(sqrt {})", ctx.d));
        }
        let head = s[..idx].strip_suffix('*').unwrap_or(&s[..idx]);
        // The b term starts at the last sign that is not the leading one.
        let split = head
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back()
            .map(|i| if i > 1 && &head[i - 1..=i] == "+-" { i - 1 } else { i });
        let (a_txt, b_txt) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let b = match b_txt {
            "" | "+" => rat(1),
            "-" => rat(-1),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        Ok(ctx.element(parse_rational(a_txt)?, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn radicand_validation() {
        assert!(QuadField::new(5).is_ok());
        assert!(QuadField::new(6).is_ok());
        assert!(QuadField::new(1).is_err());
        assert!(QuadField::new(12).is_err());
        assert!(QuadField::new(49).is_err());
    }

    #[test]
    fn sign_examples() {
        let f = QuadField::new(5).unwrap();
        assert_eq!(qext_sign(&f.element(q(0), q(0))), 0);
        assert_eq!(qext_sign(&f.element(q(-1), q(1))), 1);
        assert_eq!(qext_sign(&f.element(q(3), q(-2))), -1);
        assert_eq!(qext_sign(&f.element(q(3), q(-1))), 1);
        assert_eq!(qext_sign(&f.element(q(-3), q(0))), -1);
    }

    #[test]
    fn golden_ratio_identity() {
        let f = QuadField::new(5).unwrap();
        let half = Rational::new(1.into(), 2.into());
        let tau = f.element(half.clone(), half);
        // tau^2 = tau + 1
        assert_eq!(tau.mul(&tau), tau.add(&QuadExt::one(&f)));
        assert_eq!(tau.mul(&tau.inv().unwrap()), QuadExt::one(&f));
    }

    #[test]
    fn text_encoding() {
        let f = QuadField::new(5).unwrap();
        let x = f.element(Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into()));
        assert_eq!(x.to_exact_string(), "1/2-3/4*sqrt(5)");
        assert_eq!(QuadExt::parse_exact(&f, "1/2-3/4*sqrt(5)").unwrap(), x);
        assert_eq!(QuadExt::parse_exact(&f, "-1/2+-3/4*sqrt(5)").unwrap().b, x.b);
        assert_eq!(QuadExt::parse_exact(&f, "2+1*sqrt(5)").unwrap(), f.element(q(2), q(1)));
        assert_eq!(QuadExt::parse_exact(&f, "-sqrt(5)").unwrap(), f.element(q(0), q(-1)));
        assert_eq!(QuadExt::parse_exact(&f, "7").unwrap(), f.element(q(7), q(0)));
        assert!(QuadExt::parse_exact(&f, "1+sqrt(3)").is_err());
        assert_eq!(QuadField::parse_name("Q(sqrt 5)").unwrap(), f);
        assert_eq!(QuadExt::field_name(&f), "Q(sqrt 5)");
    }

    #[test]
    #[should_panic(expected = "mixed radicands")]
    fn mixed_radicands_panic() {
        let a = QuadField::new(5).unwrap().sqrt_d();
        let b = QuadField::new(2).unwrap().sqrt_d();
        let _ = a.add(&b);
    }

    #[test]
    fn mixed_radicands_checked() {
        let a = QuadField::new(5).unwrap().sqrt_d();
        let b = QuadField::new(2).unwrap().sqrt_d();
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&a).is_ok());
    }
}
