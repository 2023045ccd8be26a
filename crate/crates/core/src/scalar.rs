//! Exact scalars: Gaussian rationals `a + b*i` with arbitrary-precision
//! rational components. Plain rationals are the subfield with vanishing
//! imaginary part; both components are kept reduced with positive
//! denominators by the underlying rational type.
//!
//! The canonical string form is `n`, `n/d`, `c/d*i`, or `a/b+c/d*i` (with the
//! sign of the imaginary part folded into its numerator), and `i`/`-i` when
//! the imaginary coefficient is a unit. `parse` accepts exactly these shapes.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;

/// An exact Gaussian rational.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rational,
    im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(Rational::from_integer(Int::from(n)), Rational::zero())
    }

    pub fn from_big(n: Int) -> Self {
        Scalar::new(Rational::from_integer(n), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::new(r, Rational::zero())
    }

    /// The reduced fraction `num/den`; panics only if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(Rational::new(Int::from(num), Int::from(den)))
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`, the norm form of the field extension.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Non-negative integer power by repeated multiplication.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn fmt_rational(r: &Rational) -> String {
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            r.to_string()
        }
    }

    /// Canonical display form; inverse of [`Scalar::parse`].
    pub fn to_canonical_string(&self) -> String {
        if self.im.is_zero() {
            return Self::fmt_rational(&self.re);
        }
        let im_part = if self.im.is_one() {
            String::from("i")
        } else if (-&self.im).is_one() {
            String::from("-i")
        } else {
            let mut s = Self::fmt_rational(&self.im);
            s.push_str("*i");
            s
        };
        if self.re.is_zero() {
            return im_part;
        }
        let mut s = Self::fmt_rational(&self.re);
        if !self.im.is_negative() {
            s.push('+');
        }
        s.push_str(&im_part);
        s
    }

    fn parse_rational(s: &str) -> Result<Rational> {
        s.parse::<Rational>()
            .map_err(|_| Error::Parse(alloc::format!("bad rational literal: {s:?}")))
    }

    /// Parses the canonical forms `a/b`, `a/b+c/d*i`, `c/d*i`, `i`, `-i`.
    pub fn parse(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse(String::from("empty scalar literal")));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar::from_rational(Self::parse_rational(&s)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // Split a trailing imaginary coefficient off an optional real part:
        // the separating sign is the last '+' or '-' not at position 0.
        let split = body
            .char_indices()
            .rev()
            .find(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
            .map(|(idx, _)| idx);
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let im = match im_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            lit => Self::parse_rational(lit)?,
        };
        let re = if re_str.is_empty() {
            Rational::zero()
        } else {
            Self::parse_rational(re_str)?
        };
        Ok(Scalar::new(re, im))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_reduction() {
        assert_eq!(Scalar::ratio(2, 4), Scalar::ratio(1, 2));
        assert_eq!(Scalar::ratio(1, -2).to_canonical_string(), "-1/2");
        assert_eq!(Scalar::ratio(-6, -3).to_canonical_string(), "2");
    }

    #[test]
    fn field_arithmetic() {
        let x = Scalar::new(Rational::new(Int::from(1), Int::from(2)), Rational::from_integer(Int::from(3)));
        let y = &x * &x.conj();
        assert_eq!(y, Scalar::ratio(37, 4));
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        assert_eq!((&Scalar::i() * &Scalar::i()), Scalar::from_int(-1));
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["0", "-1", "3/7", "-12/5", "i", "-i", "2*i", "-3/4*i", "1/2+3/4*i", "1/2-3/4*i", "-2+i", "5-i"] {
            let v = Scalar::parse(s).unwrap();
            assert_eq!(v.to_canonical_string(), s, "roundtrip through {s}");
        }
        assert_eq!(Scalar::parse("2/4").unwrap().to_canonical_string(), "1/2");
        assert!(Scalar::parse("").is_err());
        assert!(Scalar::parse("x+i").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(Scalar::i().pow(2), Scalar::from_int(-1));
        assert_eq!(Scalar::ratio(2, 3).pow(3), Scalar::ratio(8, 27));
        assert_eq!(Scalar::ratio(5, 1).pow(0), Scalar::one());
    }
}
