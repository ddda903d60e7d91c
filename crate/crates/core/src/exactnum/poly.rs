use std::fmt;

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};

use super::rational::rational_to_string;
use super::Rational;

/// Univariate polynomial over `Q`, coefficients stored constant term first.
///
/// The coefficient vector never has trailing zeros; the zero polynomial is the
/// empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Scaled to leading coefficient one; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lead = self.leading();
        self.scale(&lead.recip())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(BigInt::from(k))).collect(),
        )
    }

    /// Horner evaluation in any field containing `Q`.
    pub fn eval<F: super::Field>(&self, ctx: &F::Ctx, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(ctx), |acc, c| acc.mul(x).add(&F::from_rational(ctx, c)))
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.eval::<Rational>(&(), x)
    }

    /// Integer coefficients with content one and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }

    /// The primitive integer form as a polynomial.
    pub fn primitive(&self) -> Self {
        Self::new(self.primitive_integer().into_iter().map(Rational::from_integer).collect())
    }

    /// Equality up to a nonzero rational factor.
    pub fn equal_up_to_scalar(&self, other: &Self) -> bool {
        self.primitive_integer() == other.primitive_integer()
    }

    /// Renders with the given variable name, e.g. `a^2 - 4a - 1`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            let mag_text = rational_to_string(&mag);
            let coeff_text = if k > 0 && mag.is_one() {
                String::new()
            } else if k > 0 && !mag.denom().is_one() {
                format!("({mag_text})")
            } else {
                mag_text
            };
            out.push_str(&coeff_text);
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= n {
        if (&n % &k).is_zero() {
            let other = &n / &k;
            if other != k {
                large.push(other);
            }
            small.push(k.clone());
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All rational roots of `p`, via the rational-root theorem on its primitive
/// integer form. An empty result certifies that `p` has no rational root.
///
/// Roots are ordered by absolute value, the positive one first on ties.
pub fn rational_root_test(p: &Poly) -> Result<Vec<Rational>, String> {
    if p.is_zero() {
        return Err("rational root test on the zero polynomial".into());
    }
    let ints = p.primitive_integer();
    let zero_mult = ints.iter().take_while(|c| c.is_zero()).count();
    let reduced = &ints[zero_mult..];
    let mut roots = Vec::new();
    if zero_mult > 0 {
        roots.push(Rational::zero());
    }
    if reduced.len() > 1 {
        let reduced_poly = Poly::new(reduced.iter().cloned().map(Rational::from_integer).collect());
        let num_cands = divisors(&reduced[0]);
        let den_cands = divisors(reduced.last().unwrap());
        let mut cands: Vec<Rational> = Vec::new();
        for pn in &num_cands {
            for qd in &den_cands {
                let r = Rational::new(pn.clone(), qd.clone());
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
        cands.sort();
        for r in cands {
            for cand in [r.clone(), -r] {
                if reduced_poly.eval_rational(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort_by(|x, y| x.abs().cmp(&y.abs()).then_with(|| y.cmp(x)));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn root_test_examples() {
        let two = Rational::from_integer(2.into());
        assert_eq!(rational_root_test(&Poly::from_i64(&[-4, 0, 1])).unwrap(), vec![two.clone(), -two]);
        assert!(rational_root_test(&Poly::from_i64(&[-1, -4, 1])).unwrap().is_empty());
        assert!(rational_root_test(&Poly::from_i64(&[-1, -1, 1])).unwrap().is_empty());
        assert!(rational_root_test(&Poly::zero()).is_err());
        // 6x^2 - x - 1 = (3x + 1)(2x - 1)
        assert_eq!(rational_root_test(&Poly::from_i64(&[-1, -1, 6])).unwrap(), vec![q(-1, 3), q(1, 2)]);
        // x^3 - x has roots 0, 1, -1
        assert_eq!(rational_root_test(&Poly::from_i64(&[0, -1, 0, 1])).unwrap(), vec![q(0, 1), q(1, 1), q(-1, 1)]);
        // non-integer coefficients: x/2 - 3/4 has root 3/2
        let p = Poly::new(vec![q(-3, 4), q(1, 2)]);
        assert_eq!(rational_root_test(&p).unwrap(), vec![q(3, 2)]);
    }

    #[test]
    fn display_matches_conventional_form() {
        assert_eq!(Poly::from_i64(&[-1, -4, 1]).to_string_in("a"), "a^2 - 4a - 1");
        assert_eq!(Poly::from_i64(&[0, 1]).to_string_in("a"), "a");
        assert_eq!(Poly::new(vec![q(1, 2), q(-3, 2)]).to_string_in("t"), "-(3/2)t + 1/2");
        assert_eq!(Poly::zero().to_string_in("a"), "0");
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let b = Poly::from_i64(&[1, 1]); // x + 1
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot, Poly::from_i64(&[-1, 1]));
        assert!(rem.is_zero());
        let c = Poly::from_i64(&[2, 3, 1]); // (x+1)(x+2)
        assert_eq!(a.gcd(&c), b);
        assert_eq!(a.gcd(&Poly::from_i64(&[5])), Poly::one());
    }

    #[test]
    fn primitive_form_and_scalar_equality() {
        let p = Poly::new(vec![q(1, 2), q(2, 1), q(-1, 2)]);
        assert_eq!(p.primitive(), Poly::from_i64(&[-1, -4, 1]));
        assert!(p.equal_up_to_scalar(&Poly::from_i64(&[-3, -12, 3])));
        assert!(!p.equal_up_to_scalar(&Poly::from_i64(&[1, -4, 1])));
    }
}
