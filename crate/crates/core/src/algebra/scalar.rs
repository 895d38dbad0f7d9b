//! Exact rationals and Gaussian rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `num / den` as a reduced rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent of the largest power of two dividing `q` (negative when the
/// denominator is even). `None` for zero.
pub fn two_adic_valuation(q: &Rational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let tz = |n: &BigInt| n.trailing_zeros().unwrap_or(0) as i64;
    Some(tz(q.numer()) - tz(q.denom()))
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let bad = || AlgebraError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `re + im·i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field operation on Gaussian rationals.
pub fn scalar_arith(
    a: &GaussianRational,
    b: &GaussianRational,
    op: ScalarOp,
) -> Result<GaussianRational, AlgebraError> {
    Ok(match op {
        ScalarOp::Add => a + b,
        ScalarOp::Sub => a - b,
        ScalarOp::Mul => a * b,
        ScalarOp::Div => a.checked_div(b)?,
    })
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(int(n), Rational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(ratio(num, den), Rational::zero())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::new(q, Rational::zero())
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Real integer value, if this is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.is_real() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let inv = rhs.inverse().ok_or(AlgebraError::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self::new(&self.re * q, &self.im * q)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `i^e` for any integer `e`.
    pub fn i_pow(e: i64) -> Self {
        match e.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }

    /// True when the value must be parenthesised inside a product.
    pub(crate) fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    pub(crate) fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical form: `a/b`, `c/d*i` or `a/b+c/d*i`; integers print without
    /// a denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let im = fmt_rational(&self.im);
        if self.re.is_zero() {
            return write!(f, "{im}*i");
        }
        let re = fmt_rational(&self.re);
        if self.im.is_negative() {
            write!(f, "{re}{im}*i")
        } else {
            write!(f, "{re}+{im}*i")
        }
    }
}

impl FromStr for GaussianRational {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let Some(body) = s.strip_suffix("*i") else {
            return Ok(Self::from_rational(parse_rational(s)?));
        };
        // split at the sign that separates the real from the imaginary part
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let re = parse_rational(&body[..i])?;
                let im = parse_rational(body[i..].trim_start_matches('+'))?;
                Ok(Self::new(re, im))
            }
            None => Ok(Self::new(Rational::zero(), parse_rational(body)?)),
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from_rational(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(ratio(re.0, re.1), ratio(im.0, im.1))
    }

    #[test]
    fn field_examples() {
        let half = GaussianRational::from_ratio(1, 2);
        let third = GaussianRational::from_ratio(1, 3);
        let sum = scalar_arith(&half, &third, ScalarOp::Add).unwrap();
        assert_eq!(sum, GaussianRational::from_ratio(5, 6));

        let i = GaussianRational::i();
        assert_eq!(scalar_arith(&i, &i, ScalarOp::Mul).unwrap(), GaussianRational::from_int(-1));

        // (1+i)/(1-i) = (1+i)^2/2 = i
        let q = scalar_arith(&g((1, 1), (1, 1)), &g((1, 1), (-1, 1)), ScalarOp::Div).unwrap();
        assert_eq!(q, GaussianRational::i());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = scalar_arith(&GaussianRational::one(), &GaussianRational::zero(), ScalarOp::Div);
        assert_eq!(r, Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn lowest_terms() {
        let q = GaussianRational::from_ratio(6, -4);
        assert_eq!(q.re.numer(), &BigInt::from(-3));
        assert_eq!(q.re.denom(), &BigInt::from(2));
    }

    #[test]
    fn canonical_text_roundtrip() {
        for (v, s) in [
            (g((5, 6), (0, 1)), "5/6"),
            (g((0, 1), (-1, 2)), "-1/2*i"),
            (g((3, 1), (1, 4)), "3+1/4*i"),
            (g((-1, 3), (-2, 1)), "-1/3-2*i"),
        ] {
            assert_eq!(v.to_string(), s);
            assert_eq!(s.parse::<GaussianRational>().unwrap(), v);
        }
        assert_eq!("(1/2+1/3*i)".parse::<GaussianRational>().unwrap(), g((1, 2), (1, 3)));
        assert!("1/0".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn conjugation_is_involution() {
        let z = g((2, 7), (-5, 3));
        assert_eq!(z.conj().conj(), z);
        assert!((&z * &z.conj()).is_real());
    }

    #[test]
    fn valuation() {
        assert_eq!(two_adic_valuation(&ratio(48, 1)), Some(4));
        assert_eq!(two_adic_valuation(&ratio(3, 64)), Some(-6));
        assert_eq!(two_adic_valuation(&int(0)), None);
    }
}
