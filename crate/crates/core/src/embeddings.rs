//! Certified real embeddings, exact signature tests, and enumeration of
//! order elements inside boxes in embedding space.
//!
//! Screening is interval arithmetic over refinable isolating intervals; every
//! accepted element is confirmed by an exact test (charpoly alternation for
//! total positivity, refine-until-separated sign tests for per-embedding
//! comparisons). Precision starts at 64 fractional bits and doubles on demand
//! up to a hard cap.

use crate::error::{Error, Result};
use crate::field::{eval_interval, Field, FieldElement};
use crate::poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub const PRECISION_CAP_BITS: u32 = 4096;

/// Signs of the real embeddings, descending root order; entries +1 / -1.
pub type Signature = Vec<i8>;

/// Refinable isolating intervals for the roots of the minimal polynomial.
#[derive(Debug, Clone)]
pub struct EmbeddingData {
    chain: Vec<poly::QPoly>,
    pub intervals: Vec<(BigRational, BigRational)>,
    pub bits: u32,
}

impl EmbeddingData {
    pub fn new(field: &Field) -> Self {
        EmbeddingData {
            chain: poly::sturm_chain(&poly::to_q(&field.minpoly)),
            intervals: field.root_intervals.clone(),
            bits: 16,
        }
    }

    /// Refine all intervals to width <= 2^-bits.
    pub fn refine_to(&mut self, bits: u32) -> Result<()> {
        if bits > PRECISION_CAP_BITS {
            return Err(Error::PrecisionExhausted(PRECISION_CAP_BITS));
        }
        if bits <= self.bits {
            return Ok(());
        }
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        for iv in &mut self.intervals {
            while &iv.1 - &iv.0 > width {
                let mid = (&iv.0 + &iv.1) / BigRational::from(BigInt::from(2));
                if poly::eval_q(&self.chain[0], &mid).is_zero() {
                    let q = (&iv.0 + &mid) / BigRational::from(BigInt::from(2));
                    if poly::sturm_count(&self.chain, &iv.0, &q) == 1 {
                        iv.1 = q;
                    } else {
                        iv.0 = q;
                    }
                    continue;
                }
                if poly::sturm_count(&self.chain, &iv.0, &mid) == 1 {
                    iv.1 = mid;
                } else {
                    iv.0 = mid;
                }
            }
        }
        self.bits = bits;
        Ok(())
    }
}

/// Isolating intervals of width <= 2^-precision_bits for all real roots.
pub fn isolate_roots(field: &Field, precision_bits: u32) -> Result<EmbeddingData> {
    let mut e = EmbeddingData::new(field);
    e.refine_to(precision_bits.max(16))?;
    Ok(e)
}

/// Exact signature of a nonzero element.
pub fn signature_of(field: &Field, a: &FieldElement) -> Result<Signature> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    // den > 0 does not affect signs
    let mut data = EmbeddingData::new(field);
    let mut bits = 64u32;
    let mut sig = vec![0i8; field.degree];
    loop {
        data.refine_to(bits)?;
        let mut undecided = false;
        for (i, iv) in data.intervals.iter().enumerate() {
            if sig[i] != 0 {
                continue;
            }
            let (lo, hi) = eval_interval(&a.num, iv);
            if lo.is_positive() {
                sig[i] = 1;
            } else if hi.is_negative() {
                sig[i] = -1;
            } else {
                undecided = true;
            }
        }
        if !undecided {
            return Ok(sig);
        }
        bits *= 2;
        if bits > PRECISION_CAP_BITS {
            return Err(Error::PrecisionExhausted(PRECISION_CAP_BITS));
        }
    }
}

/// Exact comparison of sigma_i(x) (x integral coords) against a rational,
/// refining the shared isolation data as needed (refinement persists, so
/// batched callers pay for deep refinement at most once).
pub fn cmp_embedding_shared(
    data: &mut EmbeddingData,
    coords: &[BigInt],
    i: usize,
    q: &BigRational,
) -> Result<Ordering> {
    // equality only when x is literally the rational constant q
    let is_const_q = q.is_integer()
        && coords[0] == q.to_integer()
        && coords[1..].iter().all(|c| c.is_zero());
    if is_const_q {
        return Ok(Ordering::Equal);
    }
    let mut bits = data.bits.max(64);
    loop {
        data.refine_to(bits)?;
        let (lo, hi) = eval_interval(coords, &data.intervals[i]);
        if &lo > q {
            return Ok(Ordering::Greater);
        }
        if &hi < q {
            return Ok(Ordering::Less);
        }
        bits *= 2;
        if bits > PRECISION_CAP_BITS {
            return Err(Error::PrecisionExhausted(PRECISION_CAP_BITS));
        }
    }
}

/// Exact comparison of sigma_i(x) against a rational.
pub fn cmp_embedding(
    field: &Field,
    coords: &[BigInt],
    i: usize,
    q: &BigRational,
) -> Result<Ordering> {
    let mut data = EmbeddingData::new(field);
    cmp_embedding_shared(&mut data, coords, i, q)
}

/// Open per-embedding box with an optional integer linear equality.
#[derive(Debug, Clone)]
pub struct EnumerationBox {
    pub lo: Vec<Option<BigRational>>,
    pub hi: Vec<Option<BigRational>>,
    /// sum_j c_j x_j = t over the power-basis coordinates.
    pub constraint: Option<(Vec<BigInt>, BigInt)>,
}

impl EnumerationBox {
    pub fn open(lo: Vec<BigRational>, hi: Vec<BigRational>) -> Self {
        EnumerationBox {
            lo: lo.into_iter().map(Some).collect(),
            hi: hi.into_iter().map(Some).collect(),
            constraint: None,
        }
    }

    pub fn with_constraint(mut self, coeffs: Vec<BigInt>, target: BigInt) -> Self {
        self.constraint = Some((coeffs, target));
        self
    }

    /// Symmetric box |sigma_i(x)| < b_i.
    pub fn symmetric(bounds: Vec<BigRational>) -> Self {
        let lo = bounds.iter().map(|b| Some(-b.clone())).collect();
        let hi = bounds.into_iter().map(Some).collect();
        EnumerationBox {
            lo,
            hi,
            constraint: None,
        }
    }
}

type RatInterval = (BigRational, BigRational);

fn iv_sub(a: &RatInterval, b: &RatInterval) -> RatInterval {
    (&a.0 - &b.1, &a.1 - &b.0)
}
fn iv_mul(a: &RatInterval, b: &RatInterval) -> RatInterval {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let mut lo = c[0].clone();
    let mut hi = c[0].clone();
    for x in &c[1..] {
        if *x < lo {
            lo = x.clone();
        }
        if *x > hi {
            hi = x.clone();
        }
    }
    (lo, hi)
}
fn iv_div(a: &RatInterval, b: &RatInterval) -> Option<RatInterval> {
    if (b.0.is_positive() && b.1.is_positive()) || (b.0.is_negative() && b.1.is_negative()) {
        let c = [&a.0 / &b.0, &a.0 / &b.1, &a.1 / &b.0, &a.1 / &b.1];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for x in &c[1..] {
            if *x < lo {
                lo = x.clone();
            }
            if *x > hi {
                hi = x.clone();
            }
        }
        Some((lo, hi))
    } else {
        None
    }
}

/// Enclosing per-coordinate ranges for {x integral : sigma(x) in box} via
/// interval Gaussian elimination of the Vandermonde system.
fn coordinate_ranges(
    field: &Field,
    lo: &[BigRational],
    hi: &[BigRational],
) -> Result<Vec<(BigInt, BigInt)>> {
    let d = field.degree;
    let mut bits = 64u32;
    let mut data = EmbeddingData::new(field);
    'retry: loop {
        data.refine_to(bits)?;
        // W[i][j] = root_i^j as intervals; augmented with the box intervals
        let mut w: Vec<Vec<RatInterval>> = Vec::with_capacity(d);
        for iv in &data.intervals {
            let mut row = Vec::with_capacity(d + 1);
            let mut cur: RatInterval = (BigRational::one(), BigRational::one());
            for _ in 0..d {
                row.push(cur.clone());
                cur = iv_mul(&cur, iv);
            }
            w.push(row);
        }
        for i in 0..d {
            w[i].push((lo[i].clone(), hi[i].clone()));
        }
        // forward elimination with pivot intervals bounded away from zero
        for col in 0..d {
            let pivot_row = (col..d)
                .filter(|&r| {
                    let p = &w[r][col];
                    p.0.is_positive() || p.1.is_negative()
                })
                .max_by_key(|&r| {
                    let p = &w[r][col];
                    std::cmp::min_by(p.0.clone().abs(), p.1.clone().abs(), |a, b| a.cmp(b))
                });
            let Some(pr) = pivot_row else {
                bits *= 2;
                if bits > PRECISION_CAP_BITS {
                    return Err(Error::PrecisionExhausted(PRECISION_CAP_BITS));
                }
                continue 'retry;
            };
            w.swap(col, pr);
            for r in col + 1..d {
                let factor = match iv_div(&w[r][col], &w[col][col]) {
                    Some(f) => f,
                    None => {
                        bits *= 2;
                        if bits > PRECISION_CAP_BITS {
                            return Err(Error::PrecisionExhausted(PRECISION_CAP_BITS));
                        }
                        continue 'retry;
                    }
                };
                for c in col..=d {
                    let t = iv_mul(&factor, &w[col][c]);
                    w[r][c] = iv_sub(&w[r][c], &t);
                }
            }
        }
        // back substitution
        let mut sol: Vec<RatInterval> = vec![(BigRational::zero(), BigRational::zero()); d];
        for col in (0..d).rev() {
            let mut rhs = w[col][d].clone();
            for c in col + 1..d {
                let t = iv_mul(&w[col][c], &sol[c]);
                rhs = iv_sub(&rhs, &t);
            }
            match iv_div(&rhs, &w[col][col]) {
                Some(x) => sol[col] = x,
                None => {
                    bits *= 2;
                    if bits > PRECISION_CAP_BITS {
                        return Err(Error::PrecisionExhausted(PRECISION_CAP_BITS));
                    }
                    continue 'retry;
                }
            }
        }
        let ranges = sol
            .into_iter()
            .map(|(l, h)| (l.ceil().to_integer(), h.floor().to_integer()))
            .collect();
        return Ok(ranges);
    }
}

/// Fixed-point interval at scale 2^FP_SHIFT with outward rounding; the fast
/// screening layer in front of the exact per-embedding tests.
const FP_SHIFT: u32 = 40;

#[derive(Clone, Copy, Debug)]
struct FpInterval {
    lo: i128,
    hi: i128,
}

fn fp_from_rational_outward(r: &BigRational) -> Option<(i128, i128)> {
    let scaled = r * BigRational::from(BigInt::one() << FP_SHIFT);
    let lo = scaled.floor().to_integer();
    let hi = scaled.ceil().to_integer();
    Some((i128::try_from(&lo).ok()?, i128::try_from(&hi).ok()?))
}

fn fp_mul(a: FpInterval, b: FpInterval) -> Option<FpInterval> {
    let prods = [
        a.lo.checked_mul(b.lo)?,
        a.lo.checked_mul(b.hi)?,
        a.hi.checked_mul(b.lo)?,
        a.hi.checked_mul(b.hi)?,
    ];
    let lo = *prods.iter().min().unwrap();
    let hi = *prods.iter().max().unwrap();
    Some(FpInterval {
        lo: (lo >> FP_SHIFT) - 1,
        hi: (hi >> FP_SHIFT) + 1,
    })
}

/// Outward-rounded sigma_i(x) at fixed precision; None on overflow risk.
fn fp_eval(coords: &[BigInt], root: FpInterval) -> Option<FpInterval> {
    let one = 1i128 << FP_SHIFT;
    let mut acc = FpInterval { lo: 0, hi: 0 };
    for c in coords.iter().rev() {
        let ci = i128::try_from(c).ok()?;
        let ci = ci.checked_mul(one)?;
        let m = fp_mul(acc, root)?;
        acc = FpInterval {
            lo: m.lo.checked_add(ci)?,
            hi: m.hi.checked_add(ci)?,
        };
        if acc.lo.abs().max(acc.hi.abs()) > i128::MAX >> (FP_SHIFT + 2) {
            return None;
        }
    }
    Some(acc)
}

/// All order elements x (integer coordinate vectors) with
/// lo_i < sigma_i(x) < hi_i for every embedding, satisfying the optional
/// linear constraint; screening by interval ranges, every candidate confirmed
/// by the exact per-embedding sign test. Sorted lexicographically.
pub fn enumerate_box(field: &Field, bx: &EnumerationBox) -> Result<Vec<Vec<BigInt>>> {
    let d = field.degree;
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        match (&bx.lo[i], &bx.hi[i]) {
            (Some(l), Some(h)) => {
                if l >= h {
                    return Ok(vec![]);
                }
                lo.push(l.clone());
                hi.push(h.clone());
            }
            _ => return Err(Error::UnboundedBox),
        }
    }
    let ranges = coordinate_ranges(field, &lo, &hi)?;
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); d];
    let mut data = EmbeddingData::new(field);
    data.refine_to(64)?;

    // fixed-point screen from the 64-bit intervals
    let screen: Option<Screen> = (|| {
        let mut roots = Vec::with_capacity(d);
        let mut lo_floor = Vec::with_capacity(d);
        let mut hi_ceil = Vec::with_capacity(d);
        for i in 0..d {
            let (rl, _) = fp_from_rational_outward(&data.intervals[i].0)?;
            let (_, rh) = fp_from_rational_outward(&data.intervals[i].1)?;
            roots.push(FpInterval { lo: rl, hi: rh });
            lo_floor.push(fp_from_rational_outward(&lo[i])?.0);
            hi_ceil.push(fp_from_rational_outward(&hi[i])?.1);
        }
        Some(Screen {
            roots,
            lo_floor,
            hi_ceil,
        })
    })();

    // choose a constraint pivot with the smallest nonzero |coefficient|
    let pivot = bx.constraint.as_ref().and_then(|(c, _)| {
        (0..d)
            .filter(|&j| !c[j].is_zero())
            .min_by_key(|&j| c[j].clone().abs())
    });

    struct Screen {
        roots: Vec<FpInterval>,
        lo_floor: Vec<i128>,
        hi_ceil: Vec<i128>,
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        data: &mut EmbeddingData,
        screen: &Option<Screen>,
        ranges: &[(BigInt, BigInt)],
        bx: &EnumerationBox,
        pivot: Option<usize>,
        lo: &[BigRational],
        hi: &[BigRational],
        j: usize,
        x: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) -> Result<()> {
        let d = ranges.len();
        if j == d {
            if let Some(p) = pivot {
                // pivot never solved inline (it was the only coordinate)
                let (c, t) = bx.constraint.as_ref().expect("pivot implies constraint");
                let mut s = BigInt::zero();
                for k in 0..d {
                    if k != p {
                        s += &c[k] * &x[k];
                    }
                }
                let num = t - &s;
                let (q, r) = num.div_mod_floor(&c[p]);
                if !r.is_zero() || q < ranges[p].0 || q > ranges[p].1 {
                    return Ok(());
                }
                x[p] = q;
            } else if let Some((c, t)) = &bx.constraint {
                let s: BigInt = c.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                if &s != t {
                    return Ok(());
                }
            }
            // cheap certified rejection first
            if let Some(sc) = screen {
                for i in 0..d {
                    if let Some(ev) = fp_eval(x, sc.roots[i]) {
                        if ev.hi < sc.lo_floor[i] || ev.lo > sc.hi_ceil[i] {
                            return Ok(());
                        }
                    }
                }
            }
            // per-embedding confirmation: screen with the current intervals,
            // escalate to the exact comparison only when undecided
            for i in 0..d {
                let (el, eh) = eval_interval(x, &data.intervals[i]);
                if el > lo[i] && eh < hi[i] {
                    continue;
                }
                if cmp_embedding_shared(data, x, i, &lo[i])? != Ordering::Greater {
                    return Ok(());
                }
                if cmp_embedding_shared(data, x, i, &hi[i])? != Ordering::Less {
                    return Ok(());
                }
            }
            out.push(x.clone());
            return Ok(());
        }
        if Some(j) == pivot {
            // defer the pivot coordinate: solve it from the constraint last
            return rec(data, screen, ranges, bx, pivot, lo, hi, j + 1, x, out);
        }
        let (ref a, ref b) = ranges[j];
        let mut v = a.clone();
        while &v <= b {
            x[j] = v.clone();
            let next = j + 1;
            // if all non-pivot coords are set and a pivot exists, solve it
            let all_set_after = match pivot {
                Some(p) => (next..d).all(|k| k == p),
                None => next == d,
            };
            if all_set_after {
                if let (Some(p), Some((c, t))) = (pivot, bx.constraint.as_ref()) {
                    let mut s = BigInt::zero();
                    for k in 0..d {
                        if k != p {
                            s += &c[k] * &x[k];
                        }
                    }
                    let num = t - &s;
                    let (q, r) = num.div_mod_floor(&c[p]);
                    if r.is_zero() && q >= ranges[p].0 && q <= ranges[p].1 {
                        x[p] = q;
                        rec(data, screen, ranges, bx, None, lo, hi, d, x, out)?;
                    }
                } else {
                    rec(data, screen, ranges, bx, pivot, lo, hi, d, x, out)?;
                }
            } else {
                rec(data, screen, ranges, bx, pivot, lo, hi, next, x, out)?;
            }
            v += 1;
        }
        x[j] = BigInt::zero();
        Ok(())
    }

    rec(&mut data, &screen, &ranges, bx, pivot, &lo, &hi, 0, &mut x, &mut out)?;
    out.sort();
    Ok(out)
}

/// Totally positive order elements with exact trace t (uses the trace linear
/// form and the open box (0, t)^d, then the exact alternation test).
pub fn totally_positive_with_trace(field: &Field, t: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    if !t.is_positive() {
        return Ok(vec![]);
    }
    let d = field.degree;
    // a totally positive element of trace t has every embedding below t, but
    // the screening box is widened by 1 so the degree-1 edge case (sigma = t
    // exactly) stays inside; the trace constraint is exact anyway
    let tr = BigRational::from(t + BigInt::one());
    let bx = EnumerationBox::open(vec![BigRational::zero(); d], vec![tr; d]).with_constraint(
        field.power_traces[..d].to_vec(),
        t.clone(),
    );
    let cands = enumerate_box(field, &bx)?;
    Ok(cands
        .into_iter()
        .filter(|x| field.is_totally_positive_raw(x))
        .collect())
}

/// Totally positive order elements with trace <= bound, sorted by
/// (trace, coordinates).
pub fn totally_positive_up_to_trace(field: &Field, bound: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    let mut out = Vec::new();
    let mut t = BigInt::from(field.degree as i64);
    while &t <= bound {
        out.extend(totally_positive_with_trace(field, &t)?);
        t += 1;
    }
    Ok(out)
}

/// Rational upper bound for sqrt(r), r >= 0.
pub fn sqrt_upper(r: &BigRational) -> BigRational {
    assert!(!r.is_negative());
    let k = 64u32;
    let scaled = r * BigRational::from(BigInt::one() << (2 * k));
    let n = scaled.ceil().to_integer();
    let s = num_integer::Roots::sqrt(&n) + 1;
    BigRational::new(s, BigInt::one() << k)
}

/// Per-embedding rational enclosures of an element at the given precision.
pub fn embedding_enclosures(
    field: &Field,
    a: &FieldElement,
    bits: u32,
) -> Result<Vec<(BigRational, BigRational)>> {
    let mut data = EmbeddingData::new(field);
    data.refine_to(bits)?;
    let den = BigRational::from(a.den.clone());
    Ok(data
        .intervals
        .iter()
        .map(|iv| {
            let (lo, hi) = eval_interval(&a.num, iv);
            (lo / &den, hi / &den)
        })
        .collect())
}

/// F2 span of the listed unit signatures together with -1; true iff every
/// sign pattern is realized.
pub fn units_cover_all_signatures(field: &Field) -> Result<bool> {
    let d = field.degree;
    let mut basis: Vec<u64> = Vec::new();
    let add = |mut v: u64, basis: &mut Vec<u64>| {
        for b in basis.iter() {
            let lead = 63 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_by(|a, b| b.cmp(a));
        }
    };
    add((1u64 << d) - 1, &mut basis); // -1 flips every sign
    for u in field.unit_elements() {
        let sig = signature_of(field, &u)?;
        let mut v = 0u64;
        for (i, s) in sig.iter().enumerate() {
            if *s < 0 {
                v |= 1 << i;
            }
        }
        add(v, &mut basis);
    }
    Ok(basis.len() == d)
}

/// Deterministic graded search for a product of listed units (optionally
/// negated) realizing the target signature: subsets ordered by size then
/// mask, positive sign preferred.
pub fn unit_with_signature(field: &Field, target: &Signature) -> Result<Option<FieldElement>> {
    let units = field.unit_elements();
    let n = units.len();
    let mut sigs = Vec::with_capacity(n);
    for u in &units {
        sigs.push(signature_of(field, u)?);
    }
    let d = field.degree;
    let tmask: u64 = target
        .iter()
        .enumerate()
        .map(|(i, s)| if *s < 0 { 1u64 << i } else { 0 })
        .sum();
    let mut masks: Vec<u64> = (0u64..(1 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for m in masks {
        let mut acc = 0u64;
        for i in 0..n {
            if m >> i & 1 == 1 {
                for j in 0..d {
                    if sigs[i][j] < 0 {
                        acc ^= 1 << j;
                    }
                }
            }
        }
        for neg in [false, true] {
            let s = if neg { acc ^ ((1 << d) - 1) } else { acc };
            if s == tmask {
                let mut e = field.one();
                for i in 0..n {
                    if m >> i & 1 == 1 {
                        e = e.mul(&units[i])?;
                    }
                }
                if neg {
                    e = e.neg();
                }
                return Ok(Some(e));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::benchmark_field;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn isolation_brackets_known_roots() {
        let q5 = benchmark_field("q5").unwrap();
        let e = isolate_roots(&q5, 32).unwrap();
        // descending: golden ratio first, then its conjugate
        assert!(e.intervals[0].0 > rat(16, 10) && e.intervals[0].1 < rat(162, 100));
        assert!(e.intervals[1].0 > rat(-62, 100) && e.intervals[1].1 < rat(-61, 100));

        let cubic = benchmark_field("zeta7").unwrap();
        let e = isolate_roots(&cubic, 16).unwrap();
        let in_range = |iv: &(BigRational, BigRational), a: i64, b: i64| {
            iv.0 >= rat(a, 1) && iv.1 <= rat(b, 1)
        };
        assert!(in_range(&e.intervals[0], 1, 2));
        assert!(in_range(&e.intervals[1], 0, 1));
        assert!(in_range(&e.intervals[2], -2, -1));
    }

    #[test]
    fn refinement_nests() {
        let q5 = benchmark_field("q5").unwrap();
        let coarse = isolate_roots(&q5, 20).unwrap();
        let fine = isolate_roots(&q5, 200).unwrap();
        for (c, f) in coarse.intervals.iter().zip(&fine.intervals) {
            assert!(f.0 >= c.0 && f.1 <= c.1);
        }
    }

    #[test]
    fn signatures() {
        let q5 = benchmark_field("q5").unwrap();
        assert_eq!(signature_of(&q5, &q5.one()).unwrap(), vec![1, 1]);
        assert_eq!(signature_of(&q5, &q5.omega()).unwrap(), vec![1, -1]);
        assert_eq!(
            signature_of(&q5, &q5.zero()).unwrap_err(),
            Error::ZeroElement
        );
        let cubic = benchmark_field("zeta7").unwrap();
        let a = crate::field::parse_element(&cubic, "omega+2").unwrap();
        assert_eq!(signature_of(&cubic, &a).unwrap(), vec![1, 1, 1]);
        assert!(a.is_totally_positive());
    }

    #[test]
    fn signature_agrees_with_alternation_on_samples() {
        let cubic = benchmark_field("zeta7").unwrap();
        for s in [
            "omega^2-omega+1",
            "omega+2",
            "2*omega-1",
            "omega^2+3",
            "-omega+1",
            "5",
        ] {
            let a = crate::field::parse_element(&cubic, s).unwrap();
            let all_pos = signature_of(&cubic, &a).unwrap().iter().all(|&x| x > 0);
            assert_eq!(all_pos, a.is_totally_positive(), "{s}");
        }
    }

    #[test]
    fn unit_box_is_empty() {
        for name in ["q5", "zeta7"] {
            let f = benchmark_field(name).unwrap();
            let d = f.degree;
            let bx = EnumerationBox::open(
                vec![BigRational::zero(); d],
                vec![BigRational::one(); d],
            );
            assert!(enumerate_box(&f, &bx).unwrap().is_empty());
        }
    }

    #[test]
    fn q5_small_box_matches_brute_force() {
        let q5 = benchmark_field("q5").unwrap();
        let bx = EnumerationBox::open(vec![rat(0, 1); 2], vec![rat(3, 1); 2]);
        let got = enumerate_box(&q5, &bx).unwrap();
        // oracle: scan all |coords| <= 6, keep 0 < sigma_i(x) < 3 exactly
        let mut expect = Vec::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let x = vec![BigInt::from(a), BigInt::from(b)];
                let inside = (0..2).all(|i| {
                    cmp_embedding(&q5, &x, i, &rat(0, 1)).unwrap() == Ordering::Greater
                        && cmp_embedding(&q5, &x, i, &rat(3, 1)).unwrap() == Ordering::Less
                });
                if inside {
                    expect.push(x);
                }
            }
        }
        expect.sort();
        assert_eq!(got, expect);
        assert_eq!(got.len(), 4); // 1, 2, 1+w, 2-w
    }

    #[test]
    fn box_monotonicity() {
        let q5 = benchmark_field("q5").unwrap();
        let small = EnumerationBox::open(vec![rat(0, 1); 2], vec![rat(2, 1); 2]);
        let large = EnumerationBox::open(vec![rat(0, 1); 2], vec![rat(4, 1); 2]);
        let s = enumerate_box(&q5, &small).unwrap();
        let l = enumerate_box(&q5, &large).unwrap();
        for x in &s {
            assert!(l.contains(x));
        }
    }

    #[test]
    fn trace_slice_enumeration() {
        let q5 = benchmark_field("q5").unwrap();
        // trace-2 totally positive elements of Z[w]: 1+w-? Tr(a+bw)=2a+b
        let els = totally_positive_with_trace(&q5, &BigInt::from(2)).unwrap();
        assert_eq!(els, vec![vec![BigInt::one(), BigInt::zero()]]);
        // Tr >= d with equality iff 1: trace-bound d gives exactly {1}
        let window = totally_positive_up_to_trace(&q5, &BigInt::from(2)).unwrap();
        assert_eq!(window.len(), 1);
    }

    #[test]
    fn unit_signature_coverage() {
        for name in ["q5", "q2", "zeta7", "quartic725", "zeta11"] {
            let f = benchmark_field(name).unwrap();
            assert!(units_cover_all_signatures(&f).unwrap(), "{name}");
        }
        for name in ["q3", "q6", "q7"] {
            let f = benchmark_field(name).unwrap();
            assert!(!units_cover_all_signatures(&f).unwrap(), "{name}");
        }
    }

    #[test]
    fn unit_with_target_signature() {
        let q5 = benchmark_field("q5").unwrap();
        let u = unit_with_signature(&q5, &vec![1, -1]).unwrap().unwrap();
        assert_eq!(signature_of(&q5, &u).unwrap(), vec![1, -1]);
        let q3 = benchmark_field("q3").unwrap();
        assert!(unit_with_signature(&q3, &vec![1, -1]).unwrap().is_none());
    }
}
