//! Exact arithmetic in a monogenic order Z[w] of a totally real field.
//!
//! A field is loaded from a small spec (label, monic minimal polynomial,
//! claimed unit generators) and validated: monic, squarefree, totally real,
//! every listed unit of norm +-1. Elements are integer coordinate vectors in
//! the power basis over a positive denominator, kept in lowest terms.
//!
//! Real embeddings are ordered by descending root, so `sigma_1` sends omega to
//! the largest real root of the minimal polynomial.

use crate::error::{Error, Result};
use crate::intmat::{self, IMat};
use crate::poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub label: String,
    pub minpoly: Vec<BigInt>,
    pub units: Vec<Vec<BigInt>>,
    pub provenance: String,
}

impl FieldSpec {
    /// Parse the `key = value` field-file format (UTF-8, `#` comments).
    pub fn parse(text: &str) -> Result<FieldSpec> {
        let mut label = None;
        let mut minpoly = None;
        let mut units = None;
        let mut provenance = String::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::SpecParse(format!("expected `key = value`: {line}")))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "label" => label = Some(value.to_string()),
                "minpoly" => minpoly = Some(parse_int_list(value)?),
                "units" => units = Some(parse_int_list_list(value)?),
                "provenance" => provenance = value.to_string(),
                other => return Err(Error::SpecParse(format!("unknown key `{other}`"))),
            }
        }
        Ok(FieldSpec {
            label: label.ok_or_else(|| Error::SpecParse("missing label".into()))?,
            minpoly: minpoly.ok_or_else(|| Error::SpecParse("missing minpoly".into()))?,
            units: units.unwrap_or_default(),
            provenance,
        })
    }
}

fn parse_int_list(s: &str) -> Result<Vec<BigInt>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::SpecParse(format!("expected bracketed list: {s}")))?;
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::SpecParse(format!("bad integer `{t}`")))
        })
        .collect()
}

fn parse_int_list_list(s: &str) -> Result<Vec<Vec<BigInt>>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::SpecParse(format!("expected bracketed list of lists: {s}")))?;
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
                if depth == 0 {
                    out.push(parse_int_list(cur.trim())?);
                    cur.clear();
                }
            }
            ',' if depth == 0 => {}
            _ => {
                if depth > 0 {
                    cur.push(ch);
                }
            }
        }
    }
    Ok(out)
}

/// A validated monogenic totally real field/order.
#[derive(Debug)]
pub struct NumberField {
    pub label: String,
    pub degree: usize,
    pub minpoly: Vec<BigInt>,
    /// omega^k in the power basis, k = 0 .. 2d-2.
    power_rows: Vec<Vec<BigInt>>,
    pub companion: IMat,
    pub disc: BigInt,
    /// Tr(omega^k), k = 0 .. 2d-2.
    pub power_traces: Vec<BigInt>,
    /// Isolating intervals for the real roots, descending, width <= 2^-16.
    pub root_intervals: Vec<(BigRational, BigRational)>,
    pub units: Vec<Vec<BigInt>>,
    pub provenance: String,
}

pub type Field = Arc<NumberField>;

/// Validate a spec and construct the field.
pub fn load_field(spec: &FieldSpec) -> Result<Field> {
    let f = &spec.minpoly;
    if f.len() < 2 {
        return Err(Error::SpecParse("minpoly must have degree >= 1".into()));
    }
    let d = f.len() - 1;
    if f[d] != BigInt::one() {
        return Err(Error::NotMonic);
    }
    if !poly::is_squarefree_z(f) {
        return Err(Error::NotSquarefree);
    }

    let chain = poly::sturm_chain(&poly::to_q(f));
    let bound = poly::root_bound(f);
    let lo = BigRational::from(-bound.clone());
    let hi = BigRational::from(bound);
    let nreal = poly::sturm_count(&chain, &lo, &hi);
    if nreal != d {
        return Err(Error::NotTotallyReal(nreal, d));
    }
    let mut intervals = isolate(&chain, lo, hi, d);
    let target = BigRational::new(BigInt::one(), BigInt::one() << 16);
    for iv in &mut intervals {
        refine_interval(&chain, iv, &target);
    }
    // descending by position
    intervals.sort_by(|a, b| b.0.cmp(&a.0));

    let mut power_rows = Vec::with_capacity(2 * d - 1);
    let mut cur = vec![BigInt::zero(); d];
    cur[0] = BigInt::one();
    power_rows.push(cur.clone());
    for _ in 1..(2 * d - 1).max(1) {
        cur = shift_reduce(&cur, f);
        power_rows.push(cur.clone());
    }

    let mut companion = vec![vec![BigInt::zero(); d]; d];
    for j in 0..d {
        let col = if j + 1 < d {
            let mut e = vec![BigInt::zero(); d];
            e[j + 1] = BigInt::one();
            e
        } else {
            // omega^d = -(f_0 + f_1 omega + ...)
            (0..d).map(|i| -f[i].clone()).collect()
        };
        for i in 0..d {
            companion[i][j] = col[i].clone();
        }
    }

    let disc = poly_discriminant(f);
    let power_traces = power_sums(f, 2 * d - 2);

    let field = NumberField {
        label: spec.label.clone(),
        degree: d,
        minpoly: f.clone(),
        power_rows,
        companion,
        disc,
        power_traces,
        root_intervals: intervals,
        units: vec![],
        provenance: spec.provenance.clone(),
    };

    for u in &spec.units {
        if u.len() != d {
            return Err(Error::BadUnit(format!("{u:?}")));
        }
        let n = field.norm_raw(u);
        if n.abs() != BigInt::one() {
            return Err(Error::BadUnit(format!("{u:?}")));
        }
    }
    let mut field = field;
    field.units = spec.units.clone();
    Ok(Arc::new(field))
}

fn isolate(
    chain: &[poly::QPoly],
    lo: BigRational,
    hi: BigRational,
    want: usize,
) -> Vec<(BigRational, BigRational)> {
    // bisect (lo, hi] until each piece holds exactly one root
    let mut stack = vec![(lo, hi, want)];
    let mut out = Vec::new();
    while let Some((a, b, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / BigRational::from(BigInt::from(2));
        // avoid a midpoint that is itself a root
        let mid = if poly::eval_q(&chain[0], &mid).is_zero() {
            (&a + &mid) / BigRational::from(BigInt::from(2))
        } else {
            mid
        };
        let left = poly::sturm_count(chain, &a, &mid);
        stack.push((a, mid.clone(), left));
        stack.push((mid, b, n - left));
    }
    out
}

fn refine_interval(
    chain: &[poly::QPoly],
    iv: &mut (BigRational, BigRational),
    width: &BigRational,
) {
    while &(&iv.1 - &iv.0) > width {
        let mid = (&iv.0 + &iv.1) / BigRational::from(BigInt::from(2));
        if poly::eval_q(&chain[0], &mid).is_zero() {
            // nudge: root exactly at midpoint (rational root); shrink asymmetrically
            let q = (&iv.0 + &mid) / BigRational::from(BigInt::from(2));
            if poly::sturm_count(chain, &iv.0, &q) == 1 {
                iv.1 = q;
            } else {
                iv.0 = q;
            }
            continue;
        }
        if poly::sturm_count(chain, &iv.0, &mid) == 1 {
            iv.1 = mid;
        } else {
            iv.0 = mid;
        }
    }
}

fn shift_reduce(row: &[BigInt], f: &[BigInt]) -> Vec<BigInt> {
    // multiply by omega and reduce mod f (monic)
    let d = f.len() - 1;
    let mut r = vec![BigInt::zero(); d + 1];
    for i in 0..d {
        r[i + 1] = row[i].clone();
    }
    let lead = r[d].clone();
    if !lead.is_zero() {
        for i in 0..d {
            r[i] -= &lead * &f[i];
        }
    }
    r.truncate(d);
    r
}

fn poly_discriminant(f: &[BigInt]) -> BigInt {
    let d = f.len() - 1;
    let fp = poly::derivative_z(f);
    let res = resultant(f, &fp);
    let sign = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
    BigInt::from(sign) * res
}

fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let m = g.len() - 1;
    let size = n + m;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for i in 0..m {
        for (j, c) in f.iter().rev().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..n {
        for (j, c) in g.iter().rev().enumerate() {
            s[m + i][i + j] = c.clone();
        }
    }
    intmat::det_bareiss(&s)
}

fn power_sums(f: &[BigInt], upto: usize) -> Vec<BigInt> {
    let d = f.len() - 1;
    // e_k with sign convention x^d - e1 x^{d-1} + e2 x^{d-2} - ...
    let mut e = vec![BigInt::zero(); d + 1];
    e[0] = BigInt::one();
    for k in 1..=d {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        e[k] = BigInt::from(sign) * &f[d - k];
    }
    let mut p: Vec<BigInt> = vec![BigInt::from(d as i64)];
    for k in 1..=upto {
        let mut s = BigInt::zero();
        for i in 1..=k.saturating_sub(1).min(d) {
            let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
            s += BigInt::from(sign) * &e[i] * &p[k - i];
        }
        if k <= d {
            let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
            s += BigInt::from(sign) * BigInt::from(k as i64) * &e[k];
        }
        p.push(s);
    }
    p
}

impl NumberField {
    pub fn same_field(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.minpoly == other.minpoly
    }

    pub fn zero_coords(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree]
    }

    /// Product of two coordinate vectors, reduced to the power basis.
    pub fn mul_raw(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let mut acc = vec![BigInt::zero(); d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                for (k, c) in self.power_rows[i + j].iter().enumerate() {
                    if !c.is_zero() {
                        acc[k] += &t * c;
                    }
                }
            }
        }
        acc
    }

    /// omega^k reduced to the power basis, k <= 2d-2.
    pub fn power_element(&self, k: usize) -> &[BigInt] {
        &self.power_rows[k]
    }

    /// Matrix of multiplication by `a` in the power basis (columns a*omega^j).
    pub fn mult_matrix(&self, a: &[BigInt]) -> IMat {
        let d = self.degree;
        let mut m = vec![vec![BigInt::zero(); d]; d];
        let mut cur = a.to_vec();
        for j in 0..d {
            for i in 0..d {
                m[i][j] = cur[i].clone();
            }
            if j + 1 < d {
                cur = shift_reduce(&cur, &self.minpoly);
            }
        }
        m
    }

    pub fn trace_raw(&self, a: &[BigInt]) -> BigInt {
        a.iter()
            .zip(&self.power_traces)
            .map(|(c, t)| c * t)
            .sum()
    }

    pub fn norm_raw(&self, a: &[BigInt]) -> BigInt {
        intmat::det_bareiss(&self.mult_matrix(a))
    }

    /// Monic characteristic polynomial (constant first) of an integral element;
    /// Faddeev-LeVerrier, exact over Z.
    pub fn charpoly_int(&self, a: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let m = self.mult_matrix(a);
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut mk = m.clone();
        for k in 1..=d {
            let tr: BigInt = (0..d).map(|i| mk[i][i].clone()).sum();
            let (c, r) = (-tr).div_mod_floor(&BigInt::from(k as i64));
            debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
            coeffs[d - k] = c.clone();
            if k < d {
                for i in 0..d {
                    mk[i][i] += &c;
                }
                mk = intmat::mat_mul(&m, &mk);
            }
        }
        coeffs
    }

    /// Exact total positivity of an integral coordinate vector:
    /// charpoly coefficients must strictly alternate in sign.
    pub fn is_totally_positive_raw(&self, a: &[BigInt]) -> bool {
        if a.iter().all(|c| c.is_zero()) {
            return false;
        }
        // interval pre-filter: a definite negative embedding rejects early
        if let Some(ans) = self.interval_positivity_hint(a) {
            if !ans {
                return false;
            }
        }
        let cp = self.charpoly_int(a);
        let d = self.degree;
        for (k, c) in cp.iter().enumerate() {
            let want_positive = (d - k) % 2 == 0;
            if c.is_zero() {
                return false;
            }
            if c.is_positive() != want_positive {
                return false;
            }
        }
        true
    }

    /// Some(false) if an embedding is certainly negative, Some(true) if all
    /// certainly positive, None if undecided at the stored interval width.
    fn interval_positivity_hint(&self, a: &[BigInt]) -> Option<bool> {
        let mut all_pos = true;
        for iv in &self.root_intervals {
            let (lo, hi) = eval_interval(a, iv);
            if hi.is_negative() || hi.is_zero() {
                return Some(false);
            }
            if !lo.is_positive() {
                all_pos = false;
            }
        }
        if all_pos {
            Some(true)
        } else {
            None
        }
    }

    pub fn elem(self: &Arc<Self>, num: Vec<BigInt>, den: BigInt) -> FieldElement {
        FieldElement::new(self.clone(), num, den)
    }

    pub fn int_elem(self: &Arc<Self>, num: Vec<BigInt>) -> FieldElement {
        FieldElement::new(self.clone(), num, BigInt::one())
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.int_elem(self.zero_coords())
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        let mut c = self.zero_coords();
        c[0] = BigInt::one();
        self.int_elem(c)
    }

    pub fn omega(self: &Arc<Self>) -> FieldElement {
        let mut c = self.zero_coords();
        if self.degree > 1 {
            c[1] = BigInt::one();
        } else {
            // degree-1 sanity case: omega is the root of the linear minpoly
            c[0] = -self.minpoly[0].clone();
        }
        self.int_elem(c)
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> FieldElement {
        let mut c = self.zero_coords();
        c[0] = BigInt::from(n);
        self.int_elem(c)
    }

    pub fn unit_elements(self: &Arc<Self>) -> Vec<FieldElement> {
        self.units.iter().map(|u| self.int_elem(u.clone())).collect()
    }
}

/// Evaluate coordinates at a root interval with outward rounding.
pub fn eval_interval(a: &[BigInt], iv: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for c in a.iter().rev() {
        // [lo,hi] * [iv.0, iv.1] + c
        let cands = [&lo * &iv.0, &lo * &iv.1, &hi * &iv.0, &hi * &iv.1];
        let mut nl = cands[0].clone();
        let mut nh = cands[0].clone();
        for x in &cands[1..] {
            if *x < nl {
                nl = x.clone();
            }
            if *x > nh {
                nh = x.clone();
            }
        }
        let cr = BigRational::from(c.clone());
        lo = nl + &cr;
        hi = nh + cr;
    }
    (lo, hi)
}

#[derive(Clone)]
pub struct FieldElement {
    pub field: Field,
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl FieldElement {
    pub fn new(field: Field, num: Vec<BigInt>, den: BigInt) -> Self {
        assert_eq!(num.len(), field.degree);
        assert!(!den.is_zero());
        let mut el = FieldElement { field, num, den };
        el.canonicalize();
        el
    }

    fn canonicalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            g = g.gcd(c);
        }
        if g > BigInt::one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_integral()
            && self.num[0].is_one()
            && self.num[1..].iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        let num: Vec<BigInt> = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(FieldElement::new(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement::new(
            self.field.clone(),
            self.num.iter().map(|c| -c.clone()).collect(),
            self.den.clone(),
        )
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        let num = self.field.mul_raw(&self.num, &other.num);
        Ok(FieldElement::new(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn scalar_mul(&self, k: &BigRational) -> FieldElement {
        let num: Vec<BigInt> = self.num.iter().map(|c| c * k.numer()).collect();
        FieldElement::new(self.field.clone(), num, &self.den * k.denom())
    }

    pub fn pow(&self, mut n: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            n >>= 1;
        }
        acc
    }

    pub fn invert(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.field.mult_matrix(&self.num);
        let mut e0 = vec![BigInt::zero(); self.field.degree];
        e0[0] = BigInt::one();
        let x = intmat::solve_q(&m, &e0).ok_or(Error::DivisionByZero)?;
        // 1/self = den * (num)^{-1}
        let mut lcm = BigInt::one();
        for r in &x {
            lcm = lcm.lcm(r.denom());
        }
        let num: Vec<BigInt> = x
            .iter()
            .map(|r| r.numer() * (&lcm / r.denom()) * &self.den)
            .collect();
        Ok(FieldElement::new(self.field.clone(), num, lcm))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.mul(&other.invert()?)
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(self.field.trace_raw(&self.num), self.den.clone())
    }

    pub fn norm(&self) -> BigRational {
        let d = self.field.degree as u32;
        BigRational::new(self.field.norm_raw(&self.num), self.den.pow(d))
    }

    /// Monic characteristic polynomial over Q (constant first, length d+1).
    pub fn charpoly(&self) -> Vec<BigRational> {
        let d = self.field.degree;
        let cp = self.field.charpoly_int(&self.num);
        (0..=d)
            .map(|k| BigRational::new(cp[k].clone(), self.den.pow((d - k) as u32)))
            .collect()
    }

    /// Exact: positive under every real embedding.
    pub fn is_totally_positive(&self) -> bool {
        // den > 0, so positivity is decided by the integral numerator part
        self.field.is_totally_positive_raw(&self.num)
    }

    pub fn is_totally_nonnegative(&self) -> bool {
        self.is_zero() || self.is_totally_positive()
    }

    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs() == BigRational::one()
    }

    /// Deterministic ordering key: (den, coordinate vector).
    pub fn sort_key(&self) -> (BigInt, Vec<BigInt>) {
        (self.den.clone(), self.num.clone())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.num == other.num && self.den == other.den
    }
}
impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")?;
        if !self.den.is_one() {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse an element: `[c0,c1,...]`, `[c0,...]/den`, `inv:<expr>`, or a
/// polynomial expression in `omega`/`w` with + - * ^ and parentheses.
pub fn parse_element(field: &Field, s: &str) -> Result<FieldElement> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("inv:") {
        return parse_element(field, rest)?.invert();
    }
    if s.starts_with('[') {
        let (vec_part, den_part) = match s.rsplit_once('/') {
            Some((v, d)) if v.ends_with(']') => (v, Some(d)),
            _ => (s, None),
        };
        let num = parse_int_list(vec_part)?;
        if num.len() != field.degree {
            return Err(Error::SpecParse(format!(
                "expected {} coordinates, got {}",
                field.degree,
                num.len()
            )));
        }
        let den = match den_part {
            Some(d) => d
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::SpecParse(format!("bad denominator `{d}`")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::SpecParse("zero denominator".into()));
        }
        return Ok(field.elem(num, den));
    }
    ExprParser {
        field,
        chars: s.chars().collect(),
        pos: 0,
    }
    .parse()
}

struct ExprParser<'a> {
    field: &'a Field,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn parse(mut self) -> Result<FieldElement> {
        let e = self.expr()?;
        self.skip_ws();
        if self.pos != self.chars.len() {
            return Err(Error::SpecParse(format!(
                "trailing input at position {}",
                self.pos
            )));
        }
        Ok(e)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.factor()?;
        while let Some('*') = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FieldElement> {
        let base = self.atom()?;
        if let Some('^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let exp: u64 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::SpecParse("bad exponent".into()))?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::SpecParse("expected `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = self.chars[start..self.pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .unwrap();
                let mut co = self.field.zero_coords();
                co[0] = n;
                Ok(self.field.int_elem(co))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_alphanumeric() {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "omega" | "w" => Ok(self.field.omega()),
                    other => Err(Error::SpecParse(format!("unknown symbol `{other}`"))),
                }
            }
            other => Err(Error::SpecParse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn benchmark_discriminants() {
        for (name, disc) in [
            ("q5", 5i64),
            ("zeta7", 49),
            ("quartic725", 725),
            ("zeta11", 14641),
            ("zeta11-std", 14641),
            ("q2", 8),
            ("q3", 12),
            ("q6", 24),
            ("q7", 28),
        ] {
            let f = presets::benchmark_field(name).unwrap();
            assert_eq!(f.disc, BigInt::from(disc), "field {name}");
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let not_real = FieldSpec {
            label: "gauss".into(),
            minpoly: vec![BigInt::from(1), BigInt::zero(), BigInt::one()],
            units: vec![],
            provenance: String::new(),
        };
        assert_eq!(load_field(&not_real).unwrap_err(), Error::NotTotallyReal(0, 2));

        let not_monic = FieldSpec {
            label: "x".into(),
            minpoly: vec![BigInt::from(-1), BigInt::zero(), BigInt::from(2)],
            units: vec![],
            provenance: String::new(),
        };
        assert_eq!(load_field(&not_monic).unwrap_err(), Error::NotMonic);

        let not_sf = FieldSpec {
            label: "sq".into(),
            minpoly: vec![BigInt::from(1), BigInt::from(2), BigInt::one()],
            units: vec![],
            provenance: String::new(),
        };
        assert_eq!(load_field(&not_sf).unwrap_err(), Error::NotSquarefree);

        let bad_unit = FieldSpec {
            label: "bu".into(),
            minpoly: vec![BigInt::from(-1), BigInt::from(-1), BigInt::one()],
            units: vec![vec![BigInt::from(2), BigInt::zero()]],
            provenance: String::new(),
        };
        assert!(matches!(load_field(&bad_unit).unwrap_err(), Error::BadUnit(_)));
    }

    #[test]
    fn ring_ops_reduce_by_minpoly() {
        let q5 = presets::benchmark_field("q5").unwrap();
        let w = q5.omega();
        let w2 = w.mul(&w).unwrap();
        assert_eq!(w2, parse_element(&q5, "omega+1").unwrap());

        let cubic = presets::benchmark_field("zeta7").unwrap();
        let w = cubic.omega();
        let w3 = w.mul(&w.mul(&w).unwrap()).unwrap();
        // omega^3 = omega^2 + 2 omega - 1
        assert_eq!(w3, parse_element(&cubic, "omega^2+2*omega-1").unwrap());

        let a = parse_element(&cubic, "omega-3").unwrap();
        assert_eq!(a.add(&cubic.zero()).unwrap(), a);
    }

    #[test]
    fn mixed_fields_rejected() {
        let q5 = presets::benchmark_field("q5").unwrap();
        let q2 = presets::benchmark_field("q2").unwrap();
        assert_eq!(
            q5.omega().add(&q2.omega()).unwrap_err(),
            Error::MixedFields
        );
    }

    #[test]
    fn algebraic_invariants() {
        let q5 = presets::benchmark_field("q5").unwrap();
        let w = q5.omega();
        assert_eq!(w.trace(), BigRational::from(BigInt::one()));
        assert_eq!(w.norm(), BigRational::from(BigInt::from(-1)));

        let cubic = presets::benchmark_field("zeta7").unwrap();
        let a = parse_element(&cubic, "omega+2").unwrap();
        let cp = a.charpoly();
        let expect: Vec<BigRational> = [-7i64, 14, -7, 1]
            .iter()
            .map(|&x| BigRational::from(BigInt::from(x)))
            .collect();
        assert_eq!(cp, expect);
        assert_eq!(a.norm(), BigRational::from(BigInt::from(7)));

        let one = cubic.one();
        assert_eq!(one.trace(), BigRational::from(BigInt::from(3)));
        assert_eq!(one.norm(), BigRational::from(BigInt::one()));
    }

    #[test]
    fn inversion() {
        let q5 = presets::benchmark_field("q5").unwrap();
        let a = parse_element(&q5, "2*omega-1").unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(inv, parse_element(&q5, "[-1,2]/5").unwrap());
        assert!(a.mul(&inv).unwrap().is_one());
        assert!(q5.one().invert().unwrap().is_one());

        let cubic = presets::benchmark_field("zeta7").unwrap();
        let b = parse_element(&cubic, "omega+2").unwrap();
        assert!(b.invert().unwrap().mul(&b).unwrap().is_one());
        assert_eq!(cubic.zero().invert().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn element_serialization_roundtrip() {
        let q5 = presets::benchmark_field("q5").unwrap();
        let a = q5.elem(vec![BigInt::from(2), BigInt::from(-4)], BigInt::from(-6));
        assert_eq!(a.to_string(), "[-1,2]/3");
        assert_eq!(parse_element(&q5, "[-1,2]/3").unwrap(), a);
        let b = parse_element(&q5, "[7,0]").unwrap();
        assert_eq!(b.to_string(), "[7,0]");
    }

    #[test]
    fn cayley_hamilton_and_multiplicativity() {
        let cubic = presets::benchmark_field("zeta7").unwrap();
        let samples = [
            parse_element(&cubic, "omega^2-3*omega+2").unwrap(),
            parse_element(&cubic, "2*omega+5").unwrap(),
            parse_element(&cubic, "omega^2+omega").unwrap(),
        ];
        for a in &samples {
            // charpoly(a) evaluated at a is zero
            let cp = a.charpoly();
            let mut acc = cubic.zero();
            for c in cp.iter().rev() {
                acc = acc.mul(a).unwrap().add(&cubic.one().scalar_mul(c)).unwrap();
            }
            assert!(acc.is_zero(), "Cayley-Hamilton failed for {a}");
        }
        for a in &samples {
            for b in &samples {
                let ab = a.mul(b).unwrap();
                assert_eq!(ab.norm(), a.norm() * b.norm());
                assert_eq!(a.add(b).unwrap().trace(), a.trace() + b.trace());
            }
        }
    }

    #[test]
    fn listed_units_and_products_have_unit_norm() {
        for name in ["q5", "zeta7", "quartic725", "zeta11"] {
            let f = presets::benchmark_field(name).unwrap();
            let us = f.unit_elements();
            for u in &us {
                assert!(u.is_unit());
            }
            let mut prod = f.one();
            for u in &us {
                prod = prod.mul(u).unwrap();
            }
            assert!(prod.is_unit());
        }
    }

    #[test]
    fn totally_positive_examples() {
        let q5 = presets::benchmark_field("q5").unwrap();
        assert!(q5.one().is_totally_positive());
        assert!(!q5.omega().is_totally_positive()); // norm -1
        let cubic = presets::benchmark_field("zeta7").unwrap();
        assert!(parse_element(&cubic, "omega+2").unwrap().is_totally_positive());
        assert!(!cubic.zero().is_totally_positive());
        assert!(cubic.zero().is_totally_nonnegative());
    }
}
