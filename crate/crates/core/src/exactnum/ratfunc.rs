use std::fmt;

use super::{Field, Poly, Rational};

/// Quotient of two polynomials over `Q`, kept in lowest terms with a monic
/// denominator. The variable is the construction parameter `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Reduces `num/den`; `None` if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading();
        let inv = lead.recip();
        Some(Self { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// The parameter `a` itself.
    pub fn param() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Evaluates at `x`; `None` when the denominator vanishes there.
    pub fn eval<F: Field>(&self, ctx: &F::Ctx, x: &F) -> Option<F> {
        let d = self.den.eval(ctx, x);
        self.num.eval(ctx, x).checked_div(&d)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.den.is_constant() {
            self.num.to_string_in(var)
        } else {
            format!("({})/({})", self.num.to_string_in(var), self.den.to_string_in(var))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("a"))
    }
}

impl Field for RatFunc {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero(_: &()) -> Self {
        Self::from_poly(Poly::zero())
    }

    fn one(_: &()) -> Self {
        Self::from_poly(Poly::one())
    }

    fn from_rational(_: &(), r: &Rational) -> Self {
        Self::from_poly(Poly::constant(r.clone()))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone()).expect("nonzero denominator");
        }
        Self::new(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
            .expect("nonzero denominator")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&());
        }
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero denominator")
    }

    fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Self::new(self.den.clone(), self.num.clone())
        }
    }

    fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.is_constant() && self.num.coeff(0) == super::rat(1)
    }

    fn field_name(_: &()) -> String {
        "Q(a)".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (a^2 - 1) / (2a + 2) = (a - 1)/2 ... with monic denominator (1/2)a - 1/2 over 1
        let r = RatFunc::new(p(&[-1, 0, 1]), p(&[2, 2])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(
            r.numer(),
            &Poly::new(vec![Rational::new((-1).into(), 2.into()), Rational::new(1.into(), 2.into())])
        );
        let s = RatFunc::new(p(&[1]), p(&[0, 3])).unwrap();
        assert_eq!(s.denom(), &p(&[0, 1]));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_none());
    }

    #[test]
    fn arithmetic_cancels() {
        let a = RatFunc::param();
        let one = RatFunc::one(&());
        let x = one.checked_div(&a.add(&one)).unwrap(); // 1/(a+1)
        let y = a.checked_div(&a.add(&one)).unwrap(); // a/(a+1)
        assert_eq!(x.add(&y), one);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.mul(&x.inv().unwrap()), one);
        assert_eq!(x.to_string(), "(1)/(a + 1)");
    }

    #[test]
    fn evaluation() {
        let a = RatFunc::param();
        let one = RatFunc::one(&());
        let f = a.checked_div(&a.sub(&one)).unwrap();
        assert_eq!(f.eval::<Rational>(&(), &Rational::from_integer(3.into())), Some(Rational::new(3.into(), 2.into())));
        assert_eq!(f.eval::<Rational>(&(), &super::super::rat(1)), None);
    }
}
