//! Exact polynomial arithmetic over Z, Q and F_p.
//!
//! Polynomials are coefficient vectors, constant term first. The Z/Q side
//! carries what the field layer needs (reduction, gcd, Sturm sequences,
//! resultants); the F_p side carries squarefree and distinct-degree
//! factorization for prime splitting in monogenic orders.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type IPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn trim<T: Zero>(mut p: Vec<T>) -> Vec<T> {
    while let Some(c) = p.last() {
        if c.is_zero() {
            p.pop();
        } else {
            break;
        }
    }
    p
}

pub fn degree<T: Zero>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn to_q(p: &[BigInt]) -> QPoly {
    p.iter().map(|c| BigRational::from(c.clone())).collect()
}

pub fn mul_z(a: &[BigInt], b: &[BigInt]) -> IPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

pub fn derivative_z(p: &[BigInt]) -> IPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

pub fn eval_q(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn eval_z_at_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Remainder of a by b over Q; b need not be monic.
pub fn rem_q(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let c = r.last().unwrap() / &lead;
        let k = r.len() - 1 - db;
        for i in 0..=db {
            let t = &c * &b[i];
            r[k + i] -= t;
        }
        r = trim(r);
        if r.len() <= k {
            // exact cancellation of several leading terms
            continue;
        }
    }
    r
}

pub fn gcd_q(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    while !r1.is_empty() {
        let r = rem_q(&r0, &r1);
        r0 = r1;
        r1 = r;
    }
    if let Some(lead) = r0.last().cloned() {
        for c in &mut r0 {
            *c /= lead.clone();
        }
    }
    r0
}

pub fn is_squarefree_z(p: &[BigInt]) -> bool {
    let g = gcd_q(&to_q(p), &to_q(&derivative_z(p)));
    g.len() <= 1
}

/// Sturm chain of a squarefree rational polynomial.
pub fn sturm_chain(p: &[BigRational]) -> Vec<QPoly> {
    let mut chain = vec![trim(p.to_vec())];
    let d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
        .collect();
    chain.push(trim(d));
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let mut r = rem_q(&chain[n - 2], &chain[n - 1]);
        for c in &mut r {
            *c = -c.clone();
        }
        chain.push(r);
    }
    chain
}

fn sign_changes_at(chain: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in chain {
        let v = eval_q(p, x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of real roots of the squarefree polynomial in the half-open interval (lo, hi].
pub fn sturm_count(chain: &[QPoly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes_at(chain, lo) - sign_changes_at(chain, hi)
}

/// Cauchy bound: all real roots of the monic integer polynomial lie in (-b, b).
pub fn root_bound(p: &[BigInt]) -> BigInt {
    let d = p.len() - 1;
    let mut m = BigInt::zero();
    for c in &p[..d] {
        if c.abs() > m {
            m = c.abs();
        }
    }
    m + 1
}

// ---------------------------------------------------------------------------
// F_p[x]: enough machinery for splitting data of a monogenic order.
// Coefficients are reduced mod p; p is a u64 prime below 2^31.

#[derive(Clone, Debug, PartialEq)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>, // constant first, trimmed
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_ipoly(p: u64, f: &[BigInt]) -> Self {
        let pp = BigInt::from(p);
        let c = f
            .iter()
            .map(|x| {
                let mut r = x % &pp;
                if r.is_negative() {
                    r += &pp;
                }
                u64::try_from(r).unwrap()
            })
            .collect();
        FpPoly::new(p, c)
    }

    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, vec![]);
        }
        let mut r = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate() {
                r[i + j] = (r[i + j] + self.mulmod(x, y)) % self.p;
            }
        }
        FpPoly::new(self.p, r)
    }

    fn inv_mod_p(&self, a: u64) -> u64 {
        // p prime; Fermat
        let mut e = self.p - 2;
        let mut base = a % self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn rem(&self, modulus: &FpPoly) -> FpPoly {
        let dm = modulus.deg().expect("zero modulus");
        let lead_inv = self.inv_mod_p(modulus.c[dm]);
        let mut r = self.c.clone();
        while r.len() > dm {
            let c = self.mulmod(*r.last().unwrap(), lead_inv);
            let k = r.len() - 1 - dm;
            if c != 0 {
                for i in 0..=dm {
                    let t = self.mulmod(c, modulus.c[i]);
                    r[k + i] = (r[k + i] + self.p - t) % self.p;
                }
            }
            r.pop();
        }
        FpPoly::new(self.p, r)
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> FpPoly {
        match self.deg() {
            None => self.clone(),
            Some(d) => {
                let inv = self.inv_mod_p(self.c[d]);
                FpPoly::new(self.p, self.c.iter().map(|&x| self.mulmod(x, inv)).collect())
            }
        }
    }

    pub fn derivative(&self) -> FpPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| self.mulmod(x, (i as u64) % self.p))
            .collect();
        FpPoly::new(self.p, c)
    }

    /// self^e mod m, e as u128.
    pub fn pow_mod(&self, mut e: u128, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::new(self.p, vec![1]);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn div_exact(&self, other: &FpPoly) -> FpPoly {
        // self = q*other exactly
        let dm = other.deg().expect("zero divisor");
        let lead_inv = self.inv_mod_p(other.c[dm]);
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len().saturating_sub(dm)];
        while r.len() > dm {
            let c = self.mulmod(*r.last().unwrap(), lead_inv);
            let k = r.len() - 1 - dm;
            q[k] = c;
            if c != 0 {
                for i in 0..=dm {
                    let t = self.mulmod(c, other.c[i]);
                    r[k + i] = (r[k + i] + self.p - t) % self.p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        assert!(r.is_empty(), "division was not exact");
        FpPoly::new(self.p, q)
    }

    /// p-th root of a polynomial that is a p-th power (all exponents divisible by p).
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let mut c = Vec::new();
        for (i, &x) in self.c.iter().enumerate() {
            if i % p == 0 {
                c.push(x); // x^(1/p) = x in F_p
            } else {
                assert_eq!(x, 0, "not a p-th power");
            }
        }
        FpPoly::new(self.p, c)
    }
}

/// Squarefree decomposition over F_p: returns (g, e) pairs with
/// f = prod g_i^{e_i}, the g_i squarefree and pairwise coprime.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let mut out: Vec<(FpPoly, usize)> = Vec::new();
    let f = f.monic();
    if f.deg().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p) = h(x)^p
        let inner = squarefree_decomposition(&f.pth_root());
        return inner
            .into_iter()
            .map(|(g, e)| (g, e * f.p as usize))
            .collect();
    }
    let mut t = f.gcd(&d); // product of repeated parts
    let mut v = f.div_exact(&t); // squarefree part containing each factor once (with p | e factors removed)
    let mut e = 1usize;
    while v.deg().unwrap_or(0) > 0 {
        let w = v.gcd(&t);
        let g = v.div_exact(&w);
        if g.deg().unwrap_or(0) > 0 {
            out.push((g.monic(), e));
        }
        v = w;
        t = t.div_exact(&v.gcd(&t));
        // factors fully divided out of t but still in v are handled next round
        e += 1;
        if v.deg().unwrap_or(0) == 0 {
            break;
        }
    }
    if t.deg().unwrap_or(0) > 0 {
        // remaining part is a p-th power
        let inner = squarefree_decomposition(&t.pth_root());
        for (g, ee) in inner {
            // merge with existing exponents if the factor already appeared
            let mut merged = false;
            for (h, me) in &mut out {
                if *h == g {
                    *me += ee * f.p as usize;
                    merged = true;
                    break;
                }
            }
            if !merged {
                out.push((g, ee * f.p as usize));
            }
        }
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial: returns
/// (degree k, product of all irreducible factors of degree k) pairs.
pub fn distinct_degree_factorization(f: &FpPoly) -> Vec<(usize, FpPoly)> {
    let mut out = Vec::new();
    let mut f = f.monic();
    let p = f.p;
    let mut h = FpPoly::x(p); // x^(p^k) mod f, starting k = 0
    let mut k = 0usize;
    while f.deg().unwrap_or(0) > 0 {
        k += 1;
        if 2 * k > f.deg().unwrap() {
            // remainder is irreducible
            out.push((f.deg().unwrap(), f.clone()));
            break;
        }
        h = h.pow_mod(p as u128, &f);
        let mut hx = h.clone();
        // h - x
        let mut c = hx.c.clone();
        while c.len() < 2 {
            c.push(0);
        }
        c[1] = (c[1] + p - 1) % p;
        hx = FpPoly::new(p, c);
        let g = f.gcd(&hx);
        if g.deg().unwrap_or(0) > 0 {
            out.push((k, g.clone()));
            f = f.div_exact(&g);
            h = h.rem(&f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn zp(v: &[i64]) -> IPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn squarefree_detection() {
        assert!(is_squarefree_z(&zp(&[-1, -1, 1])));
        assert!(!is_squarefree_z(&zp(&[1, 2, 1]))); // (x+1)^2
    }

    #[test]
    fn sturm_counts_roots() {
        // x^3 - x^2 - 2x + 1 has roots near 1.80, 0.445, -1.247
        let f = to_q(&zp(&[1, -2, -1, 1]));
        let chain = sturm_chain(&f);
        let r = |a: i64, b: i64| {
            sturm_count(
                &chain,
                &BigRational::from(BigInt::from(a)),
                &BigRational::from(BigInt::from(b)),
            )
        };
        assert_eq!(r(-2, 2), 3);
        assert_eq!(r(-2, -1), 1);
        assert_eq!(r(0, 1), 1);
        assert_eq!(r(1, 2), 1);
    }

    #[test]
    fn ddf_inert_and_ramified() {
        // cubic mod 2 is irreducible (2 inert)
        let f = FpPoly::from_ipoly(2, &zp(&[1, -2, -1, 1]));
        let sq = squarefree_decomposition(&f);
        assert_eq!(sq.len(), 1);
        assert_eq!(sq[0].1, 1);
        let dd = distinct_degree_factorization(&sq[0].0);
        assert_eq!(dd, vec![(3, sq[0].0.clone())]);

        // cubic mod 7 is (x-5)^3 (totally ramified)
        let f7 = FpPoly::from_ipoly(7, &zp(&[1, -2, -1, 1]));
        let sq7 = squarefree_decomposition(&f7);
        assert_eq!(sq7.len(), 1);
        assert_eq!(sq7[0].1, 3);
        assert_eq!(sq7[0].0.deg(), Some(1));
    }

    #[test]
    fn ddf_split() {
        // x^2 - x - 1 mod 11 has roots 4 and 8
        let f = FpPoly::from_ipoly(11, &zp(&[-1, -1, 1]));
        let sq = squarefree_decomposition(&f);
        assert_eq!(sq.len(), 1);
        let dd = distinct_degree_factorization(&sq[0].0);
        assert_eq!(dd.len(), 1);
        assert_eq!(dd[0].0, 1);
        assert_eq!(dd[0].1.deg(), Some(2)); // two linear factors
    }
}
