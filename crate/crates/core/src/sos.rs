//! Sums of squares in the order: minimal square counts, Pythagoras-number
//! scans, and integral X^T X decompositions of small classical Gram matrices.
//!
//! The square-count search is depth-first over candidates x with x^2 below
//! the target, in non-increasing order, with two sound prunes: a trace bound
//! (every totally positive square has trace >= d) and the norm
//! superadditivity bound (a candidate followed by a nonzero remainder needs
//! N(x^2)^(1/d) + 1 <= N(target)^(1/d)).

use crate::embeddings::{embedding_enclosures, enumerate_box, sqrt_upper, EnumerationBox};
use crate::error::{Error, Result};
use crate::exec;
use crate::field::{Field, FieldElement};
use crate::intmat::IMat;
use crate::zform::ZForm;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

struct Candidate {
    square: FieldElement,
    base: FieldElement,
    trace2: BigInt,   // Tr(x^2)
    norm_abs: BigInt, // |N(x)|
}

fn candidates_below(field: &Field, alpha: &FieldElement) -> Result<Vec<Candidate>> {
    let encl = embedding_enclosures(field, alpha, 64)?;
    let bounds: Vec<_> = encl.into_iter().map(|(_, h)| sqrt_upper(&h)).collect();
    let bx = EnumerationBox::symmetric(bounds);
    let mut out = Vec::new();
    for x in enumerate_box(field, &bx)? {
        // one representative per +- pair: first nonzero coordinate positive
        match x.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_positive() => {}
            _ => continue,
        }
        let base = field.int_elem(x);
        let square = base.mul(&base)?;
        if !alpha.sub(&square)?.is_totally_nonnegative() {
            continue;
        }
        let trace2 = square.trace().to_integer();
        let norm_abs = base.norm().abs().to_integer();
        out.push(Candidate {
            square,
            base,
            trace2,
            norm_abs,
        });
    }
    // non-increasing by Tr(x^2), then by coordinates for determinism
    out.sort_by(|a, b| {
        b.trace2
            .cmp(&a.trace2)
            .then_with(|| a.base.sort_key().cmp(&b.base.sort_key()))
    });
    Ok(out)
}

/// Sound prune: certainly N(x)^(2/d) + 1 > N(rem_total)^(1/d)?
fn norm_prune_fires(d: u32, norm_x_sq: &BigInt, norm_total: &BigInt) -> bool {
    // compare at 24 fractional bits; undecided means no prune
    let bits = 24u32;
    let shift = (d * bits) as usize;
    let lb_x = num_integer::Roots::nth_root(&(norm_x_sq << shift), d);
    let ub_t = num_integer::Roots::nth_root(&(norm_total << shift), d) + 1u8;
    lb_x + (BigInt::one() << bits) > ub_t
}

/// Least k <= max_len with alpha a sum of k nonzero squares, with the
/// decomposition as witness; None if no such k exists within the cap.
pub fn sos_length(
    field: &Field,
    alpha: &FieldElement,
    max_len: usize,
) -> Result<Option<(usize, Vec<FieldElement>)>> {
    if !alpha.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !alpha.is_totally_nonnegative() {
        return Err(Error::NotTotallyNonnegative);
    }
    if alpha.is_zero() {
        return Ok(Some((0, vec![])));
    }
    let cands = candidates_below(field, alpha)?;
    let d = field.degree as u32;
    let norm_alpha = alpha.norm().abs().to_integer();

    fn dfs(
        field: &Field,
        cands: &[Candidate],
        norm_total: &BigInt,
        d: u32,
        rem: &FieldElement,
        rem_trace: &BigInt,
        slots: usize,
        start: usize,
        chosen: &mut Vec<FieldElement>,
    ) -> Result<bool> {
        if rem.is_zero() {
            return Ok(true);
        }
        if slots == 0 {
            return Ok(false);
        }
        for idx in start..cands.len() {
            let c = &cands[idx];
            // trace prune: slots copies of this-or-smaller candidates must reach the trace
            if BigInt::from(slots as i64) * &c.trace2 < *rem_trace {
                return Ok(false);
            }
            let next = match rem.sub(&c.square) {
                Ok(n) => n,
                Err(_) => unreachable!("same field"),
            };
            if !next.is_totally_nonnegative() {
                continue;
            }
            if !next.is_zero() {
                // a nonzero remainder costs at least norm 1
                if norm_prune_fires(d, &c.norm_abs.pow(2), norm_total) {
                    continue;
                }
            }
            chosen.push(c.base.clone());
            let nt = rem_trace - &c.trace2;
            if dfs(field, cands, norm_total, d, &next, &nt, slots - 1, idx, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    let t0 = alpha.trace().to_integer();
    for k in 1..=max_len {
        let mut chosen = Vec::new();
        if dfs(field, &cands, &norm_alpha, d, alpha, &t0, k, 0, &mut chosen)? {
            // soundness: re-verify the decomposition exactly
            let mut acc = field.zero();
            for x in &chosen {
                acc = acc.add(&x.mul(x)?)?;
            }
            if acc != *alpha {
                return Err(Error::InvariantViolation(
                    "sum-of-squares witness failed re-verification".into(),
                ));
            }
            return Ok(Some((chosen.len(), chosen)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct PythagorasReport {
    /// Largest square count needed in the window: a certified lower bound for
    /// the Pythagoras number.
    pub observed_max: usize,
    /// square count -> number of window elements needing exactly that count.
    pub histogram: BTreeMap<usize, usize>,
    /// A window element realizing observed_max.
    pub witness: Option<FieldElement>,
    /// First window element that is not a sum of squares, if any.
    pub first_non_sos: Option<FieldElement>,
    /// The d+3 upper bound that applies for 2 <= d <= 5.
    pub upper_bound: Option<usize>,
    pub trace_bound: BigInt,
}

/// Scan all totally positive integers (and zero) with trace at most the
/// bound; the maximum square count observed is a lower bound for P(O_K).
pub fn pythagoras_scan(field: &Field, trace_bound: &BigInt) -> Result<PythagorasReport> {
    let d = field.degree;
    let cap = d + 3;
    let window = crate::embeddings::totally_positive_up_to_trace(field, trace_bound)?;
    let results: Vec<Result<Option<(usize, Vec<FieldElement>)>>> = exec::par_map(&window, |coords| {
        let alpha = field.int_elem(coords.clone());
        sos_length(field, &alpha, cap)
    });
    let mut histogram = BTreeMap::new();
    histogram.insert(0usize, 1); // zero is the empty sum
    let mut observed = 0usize;
    let mut witness = None;
    let mut first_non_sos = None;
    for (coords, res) in window.iter().zip(results) {
        let alpha = field.int_elem(coords.clone());
        match res? {
            Some((k, _)) => {
                *histogram.entry(k).or_insert(0) += 1;
                if k > observed {
                    observed = k;
                    witness = Some(alpha);
                }
            }
            None => {
                if first_non_sos.is_none() {
                    first_non_sos = Some(alpha);
                }
            }
        }
    }
    Ok(PythagorasReport {
        observed_max: observed,
        histogram,
        witness,
        first_non_sos,
        upper_bound: if (2..=5).contains(&d) { Some(d + 3) } else { None },
        trace_bound: trace_bound.clone(),
    })
}

/// Integral X with M_Q = X^T X for a classical positive semidefinite form of
/// rank <= 5 (the k(r) = 1 regime); column-by-column backtracking, at most
/// s_max rows, zero rows trimmed. Deterministic first solution or None.
pub fn gram_sos_decomposition(q: &ZForm, s_max: usize) -> Result<Option<IMat>> {
    if !q.classical {
        return Err(Error::NotClassical);
    }
    if q.rank > 5 {
        return Err(Error::RankTooLarge(q.rank));
    }
    if !q.is_positive_semidefinite() {
        return Err(Error::NotSemidefinite);
    }
    let r = q.rank;
    let m: IMat = q
        .doubled
        .iter()
        .map(|row| row.iter().map(|x| x / 2).collect())
        .collect();

    // integer vectors in Z^s of given squared length, canonical: entries
    // non-increasing and nonnegative (first column only)
    fn canonical_norm_vectors(s: usize, target: &BigInt) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        let mut cur = vec![BigInt::zero(); s];
        fn rec(
            s: usize,
            i: usize,
            rem: BigInt,
            cap: BigInt,
            cur: &mut Vec<BigInt>,
            out: &mut Vec<Vec<BigInt>>,
        ) {
            if i == s {
                if rem.is_zero() {
                    out.push(cur.clone());
                }
                return;
            }
            let mut v = num_integer::Roots::sqrt(&rem);
            if v > cap {
                v = cap.clone();
            }
            while !v.is_negative() {
                let used = &v * &v;
                if used <= rem {
                    cur[i] = v.clone();
                    rec(s, i + 1, &rem - used, v.clone(), cur, out);
                }
                if v.is_zero() {
                    break;
                }
                v -= 1;
            }
            cur[i] = BigInt::zero();
        }
        let cap = num_integer::Roots::sqrt(target);
        rec(s, 0, target.clone(), cap, &mut cur, &mut out);
        out
    }

    // all integer vectors of given squared length (both signs)
    fn all_norm_vectors(s: usize, target: &BigInt) -> Vec<Vec<BigInt>> {
        if target.is_zero() {
            return vec![vec![BigInt::zero(); s]];
        }
        let i_s = ZForm::identity(s).unwrap();
        let reps = i_s.vectors_with_value(target).unwrap();
        let mut out = Vec::with_capacity(2 * reps.len());
        for v in reps {
            let neg = v.iter().map(|c| -c.clone()).collect();
            out.push(v);
            out.push(neg);
        }
        out.sort();
        out
    }

    fn bt(m: &IMat, s: usize, cols: &mut Vec<Vec<BigInt>>, r: usize) -> Option<Vec<Vec<BigInt>>> {
        let j = cols.len();
        if j == r {
            return Some(cols.clone());
        }
        let cands = if j == 0 {
            canonical_norm_vectors(s, &m[0][0])
        } else {
            all_norm_vectors(s, &m[j][j])
        };
        'cand: for c in cands {
            for (i, prev) in cols.iter().enumerate() {
                let dot: BigInt = prev.iter().zip(&c).map(|(a, b)| a * b).sum();
                if dot != m[i][j] {
                    continue 'cand;
                }
            }
            cols.push(c);
            if let Some(sol) = bt(m, s, cols, r) {
                return Some(sol);
            }
            cols.pop();
        }
        None
    }

    let mut cols = Vec::new();
    match bt(&m, s_max, &mut cols, r) {
        None => Ok(None),
        Some(cols) => {
            // X has the columns as columns; drop all-zero rows
            let keep: Vec<usize> = (0..s_max)
                .filter(|&row| cols.iter().any(|c| !c[row].is_zero()))
                .collect();
            let keep = if keep.is_empty() { vec![0] } else { keep };
            let x: IMat = keep
                .iter()
                .map(|&row| cols.iter().map(|c| c[row].clone()).collect())
                .collect();
            // verify X^T X = M
            for i in 0..r {
                for j in 0..r {
                    let dot: BigInt = x.iter().map(|rw| &rw[i] * &rw[j]).sum();
                    if dot != m[i][j] {
                        return Err(Error::InvariantViolation(
                            "X^T X does not reproduce the Gram matrix".into(),
                        ));
                    }
                }
            }
            Ok(Some(x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_element;
    use crate::presets::{benchmark_field, parse_form};

    #[test]
    fn basic_lengths() {
        let q5 = benchmark_field("q5").unwrap();
        assert_eq!(sos_length(&q5, &q5.one(), 5).unwrap().unwrap().0, 1);
        assert_eq!(sos_length(&q5, &q5.zero(), 5).unwrap().unwrap().0, 0);
        let two = q5.from_i64(2);
        assert_eq!(sos_length(&q5, &two, 5).unwrap().unwrap().0, 2);
        let w = q5.omega();
        assert_eq!(
            sos_length(&q5, &w, 5).unwrap_err(),
            Error::NotTotallyNonnegative
        );
    }

    #[test]
    fn decomposition_reverifies_and_is_monotone_for_squares() {
        let cubic = benchmark_field("zeta7").unwrap();
        for s in ["omega^2", "omega+2", "4", "omega^2-omega+1"] {
            let a = parse_element(&cubic, s).unwrap();
            if let Some((k, parts)) = sos_length(&cubic, &a, 6).unwrap() {
                let mut acc = cubic.zero();
                for p in &parts {
                    acc = acc.add(&p.mul(p).unwrap()).unwrap();
                }
                assert_eq!(acc, a);
                assert_eq!(parts.len(), k);
            }
        }
        // a square has length 1
        let sq = parse_element(&cubic, "omega+2").unwrap(); // (omega+2) = ?
        let x = parse_element(&cubic, "omega^2-2").unwrap();
        let x2 = x.mul(&x).unwrap();
        assert_eq!(sos_length(&cubic, &x2, 6).unwrap().unwrap().0, 1);
        let _ = sq;
    }

    #[test]
    fn subadditivity_on_samples() {
        let q5 = benchmark_field("q5").unwrap();
        let pairs = [("2", "3"), ("omega+1", "2"), ("4", "omega+2")];
        for (s1, s2) in pairs {
            let a = parse_element(&q5, s1).unwrap();
            let b = parse_element(&q5, s2).unwrap();
            let la = sos_length(&q5, &a, 6).unwrap();
            let lb = sos_length(&q5, &b, 6).unwrap();
            let lab = sos_length(&q5, &a.add(&b).unwrap(), 6).unwrap();
            if let (Some((ka, _)), Some((kb, _)), Some((kab, _))) = (la, lb, lab) {
                assert!(kab <= ka + kb);
            }
        }
    }

    #[test]
    fn quartic_double_omega_plus_two_is_not_sos() {
        let k = benchmark_field("quartic725").unwrap();
        let beta = parse_element(&k, "omega+2").unwrap();
        assert_eq!(beta.norm().to_integer(), BigInt::from(11));
        let alpha = parse_element(&k, "2*omega+4").unwrap();
        assert_eq!(alpha.trace().to_integer(), BigInt::from(18));
        // every candidate below alpha is a unit (norm < 11 forces |N| = 1)
        let cands = candidates_below(&k, &alpha).unwrap();
        assert!(!cands.is_empty());
        for c in &cands {
            assert!(
                c.norm_abs >= BigInt::from(11) || c.norm_abs.is_one(),
                "unexpected small norm {}",
                c.norm_abs
            );
        }
        assert!(sos_length(&k, &alpha, 7).unwrap().is_none());
    }

    #[test]
    fn siegel_witness_exists_over_q2() {
        let q2 = benchmark_field("q2").unwrap();
        let rep = pythagoras_scan(&q2, &BigInt::from(12)).unwrap();
        assert!(rep.first_non_sos.is_some());
    }

    #[test]
    fn trace_window_of_d_gives_length_one() {
        let q5 = benchmark_field("q5").unwrap();
        let rep = pythagoras_scan(&q5, &BigInt::from(2)).unwrap();
        assert_eq!(rep.observed_max, 1);
    }

    #[test]
    fn gram_sos_examples() {
        let i3 = ZForm::identity(3).unwrap();
        let x = gram_sos_decomposition(&i3, 6).unwrap().unwrap();
        assert_eq!(x.len(), 3);

        // M = [[2,1],[1,2]]: columns (1,1,0), (1,0,1) up to symmetry; s = 3
        let q = ZForm::from_integral_gram(vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(2)],
        ])
        .unwrap();
        let x = gram_sos_decomposition(&q, 6).unwrap().unwrap();
        assert_eq!(x.len(), 3);

        // PSD rank-deficient: M = [[1,1],[1,1]] = (1 1)^T (1 1)
        let psd = ZForm::from_integral_gram(vec![
            vec![BigInt::one(), BigInt::one()],
            vec![BigInt::one(), BigInt::one()],
        ])
        .unwrap();
        let x = gram_sos_decomposition(&psd, 4).unwrap().unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x[0], vec![BigInt::one(), BigInt::one()]);

        let i6 = ZForm::identity(6).unwrap();
        assert_eq!(
            gram_sos_decomposition(&i6, 8).unwrap_err(),
            Error::RankTooLarge(6)
        );
        let a2 = parse_form("a2").unwrap();
        assert_eq!(gram_sos_decomposition(&a2, 6).unwrap_err(), Error::NotClassical);
    }

    #[test]
    fn xtx_values_are_sums_of_row_count_squares() {
        // values represented by Q = X^T X over an order split into <= s squares
        let q5 = benchmark_field("q5").unwrap();
        let q = ZForm::from_integral_gram(vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(2)],
        ])
        .unwrap();
        let x = gram_sos_decomposition(&q, 6).unwrap().unwrap();
        let s = x.len();
        // alpha = Q(v) for a few v over the order; linear forms give the split
        let samples = [
            ("omega", "1"),
            ("omega+1", "omega"),
            ("2", "omega-1"),
        ];
        for (s1, s2) in samples {
            let v1 = parse_element(&q5, s1).unwrap();
            let v2 = parse_element(&q5, s2).unwrap();
            // alpha = 2 v1^2 + 2 v1 v2 + 2 v2^2
            let alpha = v1
                .mul(&v1)
                .unwrap()
                .scalar_mul(&BigInt::from(2).into())
                .add(&v1.mul(&v2).unwrap().scalar_mul(&BigInt::from(2).into()))
                .unwrap()
                .add(&v2.mul(&v2).unwrap().scalar_mul(&BigInt::from(2).into()))
                .unwrap();
            if !alpha.is_totally_nonnegative() {
                continue;
            }
            let len = sos_length(&q5, &alpha, s).unwrap();
            assert!(len.is_some(), "Q-value {alpha} not a sum of {s} squares");
        }
    }
}
