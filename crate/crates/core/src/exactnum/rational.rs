use num::{BigInt, One, Signed, ToPrimitive, Zero};

use super::{ExactText, Field, OrderedField, Rational};

impl Field for Rational {
    type Ctx = ();

    fn ctx(&self) -> Self::Ctx {}

    fn zero(_: &()) -> Self {
        Zero::zero()
    }

    fn one(_: &()) -> Self {
        One::one()
    }

    fn from_rational(_: &(), r: &Rational) -> Self {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn field_name(_: &()) -> String {
        "Q".to_string()
    }
}

impl OrderedField for Rational {
    fn signum(&self) -> i32 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn floor(&self) -> BigInt {
        Rational::floor(self).to_integer()
    }
}

impl ExactText for Rational {
    fn to_exact_string(&self) -> String {
        rational_to_string(self)
    }

    fn parse_exact(_: &(), s: &str) -> Result<Self, String> {
        parse_rational(s)
    }
}

/// `p/q`, or just `p` when the denominator is one.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let whole: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(|_| format!("bad decimal {s:?}"))?
        };
        let frac: BigInt = frac_part.parse().map_err(|_| format!("bad decimal {s:?}"))?;
        let scale = num::pow(BigInt::from(10), frac_part.len());
        let mag = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
    Ok(Rational::from_integer(n))
}

fn ratio_to_f64(r: &Rational) -> f64 {
    // Shift so both parts fit comfortably in an f64 before dividing.
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = (nb - db).clamp(-1000, 1000);
    let (n2, d2) = if shift > 0 {
        (n.clone(), d.clone() << (shift as usize))
    } else {
        (n.clone() << ((-shift) as usize), d.clone())
    };
    let q = (n2 << 60usize) / d2;
    let mant = q.to_f64().unwrap_or(0.0);
    mant * 2f64.powi((shift - 60) as i32)
}
