//! Exact scalars and outward-rounded enclosures.
//!
//! Rational arithmetic is exact everywhere. The only irrational quantities the
//! crate ever needs are square roots (circle maps, distances) and logarithms
//! (the Hausdorff dimension bound); both are produced as [`Enclosure`]s whose
//! endpoints are rationals, rounded outward so the true value is always inside.

use alloc::string::ToString;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact scalar used for every coordinate and length in the crate.
pub type Rational = num_rational::BigRational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `1 / 2^bits`.
pub fn pow2_inv(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

/// A closed interval `[lo, hi]` with exact rational endpoints, used as a
/// certified container: the true (possibly irrational) value lies inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter("enclosure requires lo <= hi".to_string()));
        }
        Ok(Enclosure { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        Enclosure { lo, hi }
    }

    /// Enclosure of the square; tight even when the interval straddles zero.
    pub fn square(&self) -> Enclosure {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.lo.is_negative() && self.hi.is_positive() {
            Enclosure { lo: Rational::zero(), hi: a.max(b) }
        } else {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            Enclosure { lo, hi }
        }
    }

    /// Division by an interval that must not contain zero.
    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if !other.lo.is_positive() && !other.hi.is_negative() {
            return Err(Error::InvalidParameter("division by enclosure containing zero".to_string()));
        }
        let inv = Enclosure {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        Ok(self.mul(&inv))
    }
}

/// Floor of the square root of a non-negative big integer.
fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Outward-rounded enclosure of `sqrt(x)` for `x >= 0`, with width at most
/// `2^-abs_bits`.
pub fn sqrt_enclosure(x: &Rational, abs_bits: u32) -> Result<Enclosure> {
    if x.is_negative() {
        return Err(Error::InvalidParameter("sqrt of negative rational".to_string()));
    }
    if x.is_zero() {
        return Ok(Enclosure::point(Rational::zero()));
    }
    let p = x.numer().magnitude().clone();
    let q = x.denom().magnitude().clone();
    // sqrt(p/q) = sqrt(p*q) / q; scale by 4^m so the denominator q*2^m
    // guarantees the requested absolute width.
    let m = abs_bits;
    let n = &p * &q << (2 * m as usize);
    let r = isqrt(&n);
    let den = BigInt::from(q) << (m as usize);
    let lo = Rational::new(BigInt::from(r.clone()), den.clone());
    if &r * &r == n {
        return Ok(Enclosure::point(lo));
    }
    let hi = Rational::new(BigInt::from(r + BigUint::one()), den);
    Ok(Enclosure { lo, hi })
}

/// Exact square root when `x` is the square of a rational, `None` otherwise.
pub fn sqrt_exact(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    let rp = isqrt(p);
    let rq = isqrt(q);
    if &rp * &rp == *p && &rq * &rq == *q {
        Some(Rational::new(BigInt::from(rp), BigInt::from(rq)))
    } else {
        None
    }
}

/// `atanh(z)` enclosure for `0 <= z < 1/2`, via the odd power series with an
/// explicit geometric tail bound.
fn atanh_enclosure(z: &Rational, width_target: &Rational) -> Enclosure {
    debug_assert!(!z.is_negative() && z < &ratio(1, 2));
    if z.is_zero() {
        return Enclosure::point(Rational::zero());
    }
    let z2 = z * z;
    let mut term = z.clone(); // z^(2k+1)
    let mut sum = Rational::zero();
    let mut k: u64 = 0;
    loop {
        sum += &term / int(2 * k as i64 + 1);
        term *= &z2;
        k += 1;
        // tail <= term / ((2k+1) * (1 - z^2))
        let tail = &term / (int(2 * k as i64 + 1) * (Rational::one() - &z2));
        if &tail < width_target || k > 10_000 {
            return Enclosure { lo: sum.clone(), hi: sum + tail };
        }
    }
}

/// Outward-rounded enclosure of the natural logarithm of `x > 0`, with width
/// at most `width_target`.
pub fn ln_enclosure(x: &Rational, width_target: &Rational) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::InvalidParameter("ln of non-positive rational".to_string()));
    }
    // Reduce x = 2^e * m with m in [1, 2).
    let mut m = x.clone();
    let mut e: i64 = 0;
    let two = int(2);
    let one = Rational::one();
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < one {
        m *= &two;
        e -= 1;
    }
    // Work to a tighter target so the combination stays within budget.
    let sub_target = width_target / int(4 * (e.unsigned_abs() as i64 + 2));
    let ln2 = {
        let a = atanh_enclosure(&ratio(1, 3), &sub_target);
        a.add(&a)
    };
    let z = (&m - &one) / (&m + &one); // in [0, 1/3)
    let lnm = {
        let a = atanh_enclosure(&z, &sub_target);
        a.add(&a)
    };
    let e_enc = Enclosure::point(int(e));
    Ok(e_enc.mul(&ln2).add(&lnm))
}
