//! Exact arithmetic: rationals, quadratic extensions `Q(sqrt d)`, univariate
//! polynomials and rational functions over `Q`, and dense linear algebra over
//! any of these fields.
//!
//! Every field type implements [`Field`]. Elements of `Q(sqrt d)` carry their
//! radicand, so constants such as zero and one are built from a context value
//! ([`Field::Ctx`]) rather than from nothing.

mod matrix;
mod poly;
mod quad;
mod ratfunc;
mod rational;

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational};

pub use matrix::{dot, normalize_first_nonzero, Matrix};
pub use poly::{rational_root_test, Poly};
pub use quad::{qext_sign, QuadExt, QuadField};
pub use ratfunc::RatFunc;
pub use rational::{parse_rational, rational_to_string};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// The integer `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d`; panics if `d` is zero.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A commutative field with exact arithmetic.
///
/// Methods take references and return owned values; they deliberately shadow
/// nothing from `std::ops` so generic code reads the same for every field.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Data needed to build constants (the radicand for `Q(sqrt d)`).
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self {
        Self::from_rational(ctx, &Rational::from_integer(BigInt::from(v)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    /// Short human-readable name of the field, as used in JSON files.
    fn field_name(ctx: &Self::Ctx) -> String;
}

/// A field with an exact total order compatible with its arithmetic.
pub trait OrderedField: Field {
    /// Sign of the element as -1, 0 or +1.
    fn signum(&self) -> i32;

    /// Nearest double, used only for display and OBJ export.
    fn to_f64(&self) -> f64;

    fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn cmp_exact(&self, other: &Self) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }

    /// Largest integer not exceeding the element.
    fn floor(&self) -> BigInt {
        let ctx = self.ctx();
        let guess = self.to_f64().floor();
        let mut lo = if guess.is_finite() { BigInt::from(guess as i64) } else { BigInt::from(0) };
        let as_field = |k: &BigInt| Self::from_rational(&ctx, &Rational::from_integer(k.clone()));
        // Expand a bracket [lo, hi) around the value, then bisect.
        let mut step = BigInt::from(1);
        while as_field(&lo).cmp_exact(self) == Ordering::Greater {
            lo -= &step;
            step *= 2;
        }
        let mut hi = &lo + BigInt::from(1);
        step = BigInt::from(1);
        while as_field(&hi).cmp_exact(self) != Ordering::Greater {
            hi += &step;
            step *= 2;
        }
        while &hi - &lo > BigInt::from(1) {
            let mid: BigInt = (&lo + &hi) / 2;
            if as_field(&mid).cmp_exact(self) == Ordering::Greater {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }
}

/// Parsing and printing of field elements in the string encodings used by
/// the JSON formats.
pub trait ExactText: Field {
    fn to_exact_string(&self) -> String;
    fn parse_exact(ctx: &Self::Ctx, s: &str) -> Result<Self, String>;
}

/// Fixed-point decimal with `digits` fractional digits, correctly rounded
/// (ties to even) from the exact value.
pub fn to_decimal_string<F: OrderedField>(x: &F, digits: usize) -> String {
    let ctx = x.ctx();
    let scale = num::pow(BigInt::from(10), digits);
    let scaled = x.mul(&F::from_rational(&ctx, &Rational::from_integer(scale.clone())));
    let fl = scaled.floor();
    let frac = scaled.sub(&F::from_rational(&ctx, &Rational::from_integer(fl.clone())));
    let half = F::from_rational(&ctx, &Rational::new(BigInt::from(1), BigInt::from(2)));
    let rounded = match frac.cmp_exact(&half) {
        Ordering::Less => fl,
        Ordering::Greater => fl + 1,
        Ordering::Equal => {
            if num::Integer::is_even(&fl) {
                fl
            } else {
                fl + 1
            }
        }
    };
    let negative = num::Signed::is_negative(&rounded);
    let mag = num::Signed::abs(&rounded).to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if digits == 0 {
        out.push_str(&mag);
        return out;
    }
    let padded = if mag.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag) } else { mag };
    let (int_part, frac_part) = padded.split_at(padded.len() - digits);
    out.push_str(int_part);
    out.push('.');
    out.push_str(frac_part);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(to_decimal_string(&q(1, 3), 6), "0.333333");
        assert_eq!(to_decimal_string(&q(2, 3), 6), "0.666667");
        assert_eq!(to_decimal_string(&q(-1, 3), 2), "-0.33");
        assert_eq!(to_decimal_string(&q(5, 2), 0), "2");
        assert_eq!(to_decimal_string(&q(7, 2), 0), "4");
        assert_eq!(to_decimal_string(&q(1, 200), 2), "0.00");
        assert_eq!(to_decimal_string(&q(123, 1), 1), "123.0");
    }

    #[test]
    fn decimal_rounding_quadratic() {
        let field = QuadField::new(5).unwrap();
        let tau = field.element(q(1, 2), q(1, 2));
        assert_eq!(to_decimal_string(&tau, 6), "1.618034");
        assert_eq!(to_decimal_string(&tau.neg(), 3), "-1.618");
    }

    #[test]
    fn floor_handles_large_values() {
        let big = Rational::from_integer(num::pow(BigInt::from(10), 40)) + q(1, 2);
        assert_eq!(OrderedField::floor(&big), num::pow(BigInt::from(10), 40));
        assert_eq!(OrderedField::floor(&q(-1, 2)), BigInt::from(-1));
    }
}
