//! Gaussian rationals: exact complex numbers with rational real and imaginary parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Exact rational with an `i64` fast path. Values that fit are always held
/// as reduced `Small(num, den)` with `den > 0`, so derived equality is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

impl Rat {
    const ZERO: Rat = Rat::Small(0, 1);

    fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    fn small(n: i128, d: i128) -> Rat {
        let g = n.gcd(&d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Rat::Small(a, b),
            _ => Rat::from_big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    fn add(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(0, _), _) => o.clone(),
            (_, Rat::Small(0, _)) => self.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rat::small(a + c, b)
                } else {
                    Rat::small(a * d + c * b, b * d)
                }
            }
            _ => Rat::from_big(self.to_big() + o.to_big()),
        }
    }

    fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) if *n != i64::MIN => Rat::Small(-n, *d),
            _ => Rat::from_big(-self.to_big()),
        }
    }

    fn sub(&self, o: &Rat) -> Rat {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(0, _), _) | (_, Rat::Small(0, _)) => Rat::ZERO,
            (Rat::Small(1, 1), _) => o.clone(),
            (_, Rat::Small(1, 1)) => self.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => Rat::small(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Rat::from_big(self.to_big() * o.to_big()),
        }
    }

    fn div(&self, o: &Rat) -> Rat {
        Rat::from_big(self.to_big() / o.to_big())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff {
    re: Rat,
    im: Rat,
}

impl Coeff {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coeff { re: Rat::from_big(re), im: Rat::from_big(im) }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn zero() -> Self {
        Coeff { re: Rat::ZERO, im: Rat::ZERO }
    }

    pub fn one() -> Self {
        Coeff::int(1)
    }

    pub fn i() -> Self {
        Coeff { re: Rat::ZERO, im: Rat::Small(1, 1) }
    }

    pub fn int(v: i64) -> Self {
        Coeff { re: Rat::Small(v, 1), im: Rat::ZERO }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coeff { re: Rat::small(num as i128, den as i128), im: Rat::ZERO }
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        Coeff { re: Rat::small(re_num as i128, re_den as i128), im: Rat::small(im_num as i128, im_den as i128) }
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

    pub fn conj(&self) -> Self {
        Coeff { re: self.re.clone(), im: self.im.neg() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        Some(Coeff { re: self.re.div(&norm), im: self.im.neg().div(&norm) })
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = Rat::Small(k, 1);
        Coeff { re: self.re.mul(&k), im: self.im.mul(&k) }
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        Coeff { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        Coeff { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        if self.im.is_zero() && o.im.is_zero() {
            return Coeff { re: self.re.mul(&o.re), im: Rat::ZERO };
        }
        Coeff { re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)), im: self.re.mul(&o.im).add(&self.im.mul(&o.re)) }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { re: self.re.neg(), im: self.im.neg() }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, o: &Coeff) {
        self.re = self.re.add(&o.re);
        if !o.im.is_zero() {
            self.im = self.im.add(&o.im);
        }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    /// `3/2`, `-1/3i`, `3/2+1/3i`, `i`, `-i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = |f: &mut fmt::Formatter<'_>, v: &BigRational, lead: bool| -> fmt::Result {
            let mag = v.abs();
            let sign = if v.is_negative() {
                "-"
            } else if lead {
                ""
            } else {
                "+"
            };
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{}i", fmt_rat(&mag))
            }
        };
        let (re, imv) = (self.re(), self.im());
        match (re.is_zero(), imv.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&re)),
            (true, false) => im(f, &imv, true),
            (false, false) => {
                write!(f, "{}", fmt_rat(&re))?;
                im(f, &imv, false)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Coeff::complex(1, 2, 1, 3);
        let b = Coeff::complex(2, 1, -1, 1);
        let p = &a * &b;
        // (1/2 + i/3)(2 - i) = 1 - i/2 + 2i/3 + 1/3
        assert_eq!(p, Coeff::complex(4, 3, 1, 6));
        assert_eq!(&(&a * &a.inv().unwrap()), &Coeff::one());
        assert!((&a - &a).is_zero());
        let big = Coeff::int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(&sq * &big.inv().unwrap(), big);
        assert_eq!(&(&sq - &sq) + &Coeff::one(), Coeff::one());
    }

    #[test]
    fn display() {
        assert_eq!(Coeff::complex(3, 2, 1, 3).to_string(), "3/2+1/3i");
        assert_eq!(Coeff::complex(0, 1, -1, 1).to_string(), "-i");
        assert_eq!(Coeff::complex(-2, 1, -5, 2).to_string(), "-2-5/2i");
        assert_eq!(Coeff::int(0).to_string(), "0");
    }
}
