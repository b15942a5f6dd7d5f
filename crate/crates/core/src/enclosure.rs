//! Directed dyadic interval arithmetic.
//!
//! Values are `m * 2^e` with arbitrary-precision mantissa; every inexact
//! operation rounds the lower endpoint down and the upper endpoint up, so an
//! `Enclosure` always contains the exact real it tracks. Used for the zeta
//! machinery (Euler products, pi, |disc|^{3/2}, cube roots) where exact
//! rationals would blow up. Comparisons against enclosures fail loudly when
//! the intervals overlap.

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Working precision in fractional bits (spec asks for at least 128).
pub const PREC: u32 = 192;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub m: BigInt,
    pub e: i64,
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        Dyadic { m, e }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Dyadic::new(n.clone(), 0)
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.e.min(b.e);
        let ma = &a.m << (a.e - e) as u32;
        let mb = &b.m << (b.e - e) as u32;
        (ma, mb, e)
    }

    pub fn cmp(&self, other: &Dyadic) -> std::cmp::Ordering {
        let (ma, mb, _) = Dyadic::aligned(self, other);
        ma.cmp(&mb)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (ma, mb, e) = Dyadic::aligned(self, other);
        Dyadic::new(ma + mb, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (ma, mb, e) = Dyadic::aligned(self, other);
        Dyadic::new(ma - mb, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-self.m.clone(), self.e)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.m * &other.m, self.e + other.e)
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// Round to at most PREC fractional bits, towards -inf (`up = false`) or +inf.
    pub fn round_dir(&self, up: bool) -> Dyadic {
        let target = -(PREC as i64);
        if self.e >= target {
            return self.clone();
        }
        let shift = (target - self.e) as u32;
        let q = &self.m >> shift;
        let exact = (&q << shift) == self.m;
        let m = if exact || !up { q } else { q + 1 };
        Dyadic::new(m, target)
    }

    /// Directed division self / other, other != 0.
    pub fn div_dir(&self, other: &Dyadic, up: bool) -> Dyadic {
        assert!(!other.m.is_zero(), "dyadic division by zero");
        if other.m.is_negative() {
            return self.neg().div_dir(&other.neg(), !up).neg();
        }
        let e = self.e - other.e - PREC as i64;
        let num = &self.m << PREC;
        let (q, r) = num.div_mod_floor(&other.m);
        let m = if up && !r.is_zero() { q + 1 } else { q };
        Dyadic::new(m, e)
    }

    /// Directed n-th root (value must be >= 0).
    pub fn nth_root_dir(&self, n: u32, up: bool) -> Dyadic {
        assert!(!self.m.is_negative(), "root of negative dyadic");
        if self.m.is_zero() {
            return Dyadic::zero();
        }
        // want integer R with R^n approx v * 2^(n*prec); result exponent -prec
        let target_e = -(PREC as i64);
        let shift = self.e - (n as i64) * target_e; // v*2^(n*prec) = m * 2^shift
        let x: BigInt = if shift >= 0 {
            &self.m << shift as u32
        } else {
            &self.m >> (-shift) as u32 // floor; only affects the lower bound direction
        };
        let r = num_integer::Roots::nth_root(&x, n);
        if !up {
            // r^n <= x <= v*2^(n*prec)  when shift >= 0; when shift < 0 floor made x smaller, still a lower bound
            Dyadic::new(r, target_e)
        } else {
            Dyadic::new(r + 2, target_e)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from(&self.m << self.e as u32)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as u32)
        }
    }

    /// Decimal string with `digits` fractional digits, rounded directionally.
    pub fn to_decimal(&self, digits: u32, up: bool) -> String {
        let ten_d = BigInt::from(10u32).pow(digits);
        let scaled: BigInt = if self.e >= 0 {
            (&self.m << self.e as u32) * &ten_d
        } else {
            let num = &self.m * &ten_d;
            let den = BigInt::one() << (-self.e) as u32;
            let (q, r) = num.div_mod_floor(&den);
            if up && !r.is_zero() {
                q + 1
            } else {
                q
            }
        };
        let neg = scaled.is_negative();
        let abs = scaled.abs();
        let (int_part, frac_part) = abs.div_mod_floor(&ten_d);
        let frac_str = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_str)
    }
}

#[derive(Debug, Clone)]
pub struct Enclosure {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Enclosure {
    pub fn point(d: Dyadic) -> Self {
        Enclosure { lo: d.clone(), hi: d }
    }

    pub fn from_int(n: i64) -> Self {
        Enclosure::point(Dyadic::from_int(n))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Enclosure::point(Dyadic::from_bigint(n))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let num = Dyadic::from_bigint(r.numer());
        let den = Dyadic::from_bigint(r.denom());
        Enclosure {
            lo: num.div_dir(&den, false),
            hi: num.div_dir(&den, true),
        }
    }

    /// Exact decimal literal `intpart.fracpart` (no exponent), as a point value.
    pub fn from_decimal_str(s: &str) -> Self {
        let (sign, s) = match s.strip_prefix('-') {
            Some(rest) => (Sign::Minus, rest),
            None => (Sign::Plus, s),
        };
        let (ip, fp) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        let digits: BigInt = format!("{ip}{fp}").parse().unwrap();
        let digits = if sign == Sign::Minus { -digits } else { digits };
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        Enclosure::from_rational(&BigRational::new(digits, den))
    }

    fn renorm(self) -> Self {
        Enclosure {
            lo: self.lo.round_dir(false),
            hi: self.hi.round_dir(true),
        }
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.add(&o.lo),
            hi: self.hi.add(&o.hi),
        }
        .renorm()
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.sub(&o.hi),
            hi: self.hi.sub(&o.lo),
        }
        .renorm()
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let cands = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp(&lo) == std::cmp::Ordering::Less {
                lo = c.clone();
            }
            if c.cmp(&hi) == std::cmp::Ordering::Greater {
                hi = c.clone();
            }
        }
        Enclosure { lo, hi }.renorm()
    }

    /// Division by an enclosure that is strictly positive.
    pub fn div(&self, o: &Enclosure) -> Enclosure {
        assert!(
            !o.lo.m.is_negative() && !o.lo.m.is_zero(),
            "enclosure division requires strictly positive divisor"
        );
        let lo = if self.lo.is_negative() {
            self.lo.div_dir(&o.lo, false)
        } else {
            self.lo.div_dir(&o.hi, false)
        };
        let hi = if self.hi.is_negative() {
            self.hi.div_dir(&o.hi, true)
        } else {
            self.hi.div_dir(&o.lo, true)
        };
        Enclosure { lo, hi }
    }

    pub fn recip(&self) -> Enclosure {
        Enclosure::from_int(1).div(self)
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn abs(&self) -> Enclosure {
        if self.lo.is_negative() && !self.hi.is_negative() {
            let a = self.lo.neg();
            let hi = if a.cmp(&self.hi) == std::cmp::Ordering::Greater {
                a
            } else {
                self.hi.clone()
            };
            Enclosure { lo: Dyadic::zero(), hi }
        } else if self.hi.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, mut n: u32) -> Enclosure {
        let mut acc = Enclosure::from_int(1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// n-th root of a nonnegative enclosure.
    pub fn nth_root(&self, n: u32) -> Enclosure {
        Enclosure {
            lo: self.lo.nth_root_dir(n, false),
            hi: self.hi.nth_root_dir(n, true),
        }
    }

    pub fn sqrt(&self) -> Enclosure {
        self.nth_root(2)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    /// Exact comparison against a rational; errors if the enclosure straddles it.
    pub fn cmp_rational(&self, r: &BigRational) -> Result<std::cmp::Ordering> {
        let rr = r.clone();
        if self.hi.to_rational() < rr {
            Ok(std::cmp::Ordering::Less)
        } else if self.lo.to_rational() > rr {
            Ok(std::cmp::Ordering::Greater)
        } else {
            Err(Error::InvariantViolation(
                "enclosure overlaps comparison point; refine first".into(),
            ))
        }
    }

    /// "[lo,hi]" with directed decimal rounding.
    pub fn display(&self, digits: u32) -> String {
        format!(
            "[{},{}]",
            self.lo.to_decimal(digits, false),
            self.hi.to_decimal(digits, true)
        )
    }
}

/// pi, truncated to 59 certain decimal digits (next digits are 59...), so the
/// true value lies in [PI_TRUNC, PI_TRUNC + 1e-59].
const PI_TRUNC: &str = "3.14159265358979323846264338327950288419716939937510582097494";

pub fn pi() -> Enclosure {
    let lo = Enclosure::from_decimal_str(PI_TRUNC);
    let ulp = Enclosure::from_rational(&BigRational::new(
        BigInt::one(),
        BigInt::from(10u32).pow(59),
    ));
    Enclosure {
        lo: lo.lo.clone(),
        hi: lo.hi.add(&ulp.hi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_division() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(3);
        let lo = a.div_dir(&b, false);
        let hi = a.div_dir(&b, true);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(lo.to_rational() < third && third < hi.to_rational());
        let w = hi.sub(&lo).to_rational();
        assert!(w < BigRational::new(BigInt::one(), BigInt::one() << 190));
    }

    #[test]
    fn sqrt_encloses() {
        let two = Enclosure::from_int(2);
        let s = two.sqrt();
        let sq = s.mul(&s);
        assert!(sq.contains_rational(&BigRational::from(BigInt::from(2))));
        assert!(s.display(10).starts_with("[1.4142135623,1.4142135624"));
    }

    #[test]
    fn pi_value() {
        let p = pi();
        assert_eq!(&p.display(8)[..11], "[3.14159265");
        let w = p.width().to_rational();
        assert!(w < BigRational::new(BigInt::one(), BigInt::from(10u32).pow(40)));
    }

    #[test]
    fn decimal_rendering_negative() {
        let e = Enclosure::from_rational(&BigRational::new(BigInt::from(-1), BigInt::from(8)));
        assert_eq!(e.display(3), "[-0.125,-0.125]");
    }
}
