//! Representation of totally positive integers by Z-forms over the order,
//! sampled universality scans over trace windows, rank compression of
//! representations, and lifted universal forms built from indecomposable
//! class data.
//!
//! A representation Q(v) = alpha with v in O^r corresponds to a vector of the
//! tensor lattice t_delta (x) Q of value Tr(delta alpha), so one bounded
//! enumeration of the tensor lattice decides a whole trace window at once.
//! Scans assert two instance-level consequences on every occurrence: a
//! represented indecomposable alpha at the tensor minimum forces alpha square
//! and min(Q) = 1, and every tensor minimal vector must split.

use crate::embeddings::{signature_of, unit_with_signature};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::indecomp::{is_indecomposable, square_root_in_order, IndecompClass};
use crate::intmat::{self, IMat};
use crate::traceform::{codifferent_generator, trace_form};
use crate::zform::{radical_quotient, ZForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Q evaluated at a vector of order elements.
pub fn evaluate_form(q: &ZForm, v: &[FieldElement]) -> Result<FieldElement> {
    assert_eq!(v.len(), q.rank);
    let field = v[0].field.clone();
    let mut acc = field.zero();
    for i in 0..q.rank {
        let mii = BigRational::from(q.doubled[i][i].clone() / BigInt::from(2));
        acc = acc.add(&v[i].mul(&v[i])?.scalar_mul(&mii))?;
        for j in i + 1..q.rank {
            let dij = BigRational::from(q.doubled[i][j].clone());
            acc = acc.add(&v[i].mul(&v[j])?.scalar_mul(&dij))?;
        }
    }
    Ok(acc)
}

/// Tensor coordinates (basis index outer, form index inner) to O^r.
pub fn tensor_vector_to_elements(field: &Field, r: usize, u: &[BigInt]) -> Vec<FieldElement> {
    let d = field.degree;
    (0..r)
        .map(|j| {
            let coords: Vec<BigInt> = (0..d).map(|i| u[i * r + j].clone()).collect();
            field.int_elem(coords)
        })
        .collect()
}

/// Exact integer Tr(delta * alpha) for integral alpha and codifferent delta.
fn twisted_trace(delta: &FieldElement, alpha: &FieldElement) -> Result<BigInt> {
    let t = delta.mul(alpha)?.trace();
    if !t.is_integer() {
        return Err(Error::InvariantViolation(
            "trace of delta * alpha must be integral".into(),
        ));
    }
    Ok(t.to_integer())
}

/// Find v in O^r with Q(v) = alpha, or None; complete by the tensor
/// identification. Deterministic: first witness in enumeration order.
pub fn represents(
    q: &ZForm,
    alpha: &FieldElement,
    field: &Field,
) -> Result<Option<Vec<FieldElement>>> {
    if !alpha.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !alpha.is_totally_positive() {
        return Err(Error::NotTotallyPositive);
    }
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let cd = codifferent_generator(field)?;
    let t = trace_form(field, &cd.delta)?;
    let tens = t.gram.tensor(q)?;
    let m = twisted_trace(&cd.delta, alpha)?;
    if m < BigInt::one() {
        return Ok(None);
    }
    for u in tens.vectors_with_value(&m)? {
        let v = tensor_vector_to_elements(field, q.rank, &u);
        let val = evaluate_form(q, &v)?;
        if &val == alpha {
            return Ok(Some(v));
        }
        let neg: Vec<FieldElement> = v.iter().map(|x| x.neg()).collect();
        let valn = evaluate_form(q, &neg)?;
        debug_assert_eq!(valn, val);
    }
    Ok(None)
}

/// Outcome of a trace-window universality scan. Universality is only ever
/// sampled; the positive outcome names the window, never "universal".
#[derive(Debug, Clone)]
pub enum ScanOutcome {
    AllRepresented {
        trace_bound: BigInt,
        checked: usize,
    },
    NotRepresented {
        alpha: FieldElement,
        tensor_value: BigInt,
        /// How many tensor vectors of that value were exhausted.
        enumerated: usize,
    },
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub outcome: ScanOutcome,
    pub delta: FieldElement,
    pub tensor_min: BigInt,
    /// Represented indecomposables found at the tensor minimum, all verified
    /// square with min(Q) = 1.
    pub prop44_instances: usize,
    /// First totally positive non-square unit in the window, if any: a
    /// field-level obstruction to universality of every Z-form.
    pub nonsquare_unit: Option<FieldElement>,
}

/// Scan every totally positive alpha with Tr(alpha) <= trace_bound, in
/// (trace, coordinate) order; stops at the first non-represented element.
pub fn universal_scan(q: &ZForm, field: &Field, trace_bound: &BigInt) -> Result<ScanReport> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let cd = codifferent_generator(field)?;
    let delta = cd.delta.clone();
    let window = crate::embeddings::totally_positive_up_to_trace(field, trace_bound)?;
    let alphas: Vec<FieldElement> = window.into_iter().map(|c| field.int_elem(c)).collect();

    // split route for large decomposable forms (orthogonal sums of copies)
    let constituents = q.orthogonal_constituents()?;
    let use_split = constituents.len() > 1 && field.degree * q.rank > 16;

    let rep = crate::traceform::twisted_tensor_min(field, &delta, q)?;
    let tensor_min = rep.min.clone();

    let represented: BTreeSet<Vec<BigInt>>;
    let mut bucket_sizes: BTreeMap<BigInt, usize> = BTreeMap::new();
    if !use_split {
        let t = trace_form(field, &delta)?;
        let tens = t.gram.tensor(q)?;
        let mut max_m = BigInt::zero();
        for a in &alphas {
            let m = twisted_trace(&delta, a)?;
            if m > max_m {
                max_m = m;
            }
        }
        let mut set = BTreeSet::new();
        if max_m >= BigInt::one() {
            for (val, u) in tens.enumerate_up_to(&max_m)? {
                *bucket_sizes.entry(val).or_insert(0) += 1;
                let v = tensor_vector_to_elements(field, q.rank, &u);
                let value = evaluate_form(q, &v)?;
                set.insert(value.num.clone());
            }
        }
        represented = set;
    } else {
        represented = split_represented_set(field, &delta, &constituents, &alphas)?;
    }

    let mut prop44 = 0usize;
    let qmin = q.minima()?.min;
    let mut outcome = None;
    for a in &alphas {
        let m = twisted_trace(&delta, a)?;
        if represented.contains(&a.num) {
            // Prop 4.4-style instance assertion
            if m == tensor_min && is_indecomposable(field, a)?.0 {
                let sq = square_root_in_order(field, a)?;
                if sq.is_none() || !qmin.is_one() {
                    return Err(Error::InvariantViolation(format!(
                        "represented indecomposable {a} at the tensor minimum must be a square with min(Q) = 1"
                    )));
                }
                prop44 += 1;
            }
        } else if outcome.is_none() {
            outcome = Some(ScanOutcome::NotRepresented {
                alpha: a.clone(),
                tensor_value: m.clone(),
                enumerated: bucket_sizes.get(&m).copied().unwrap_or(0),
            });
            break;
        }
    }
    let outcome = outcome.unwrap_or(ScanOutcome::AllRepresented {
        trace_bound: trace_bound.clone(),
        checked: alphas.len(),
    });

    // Cor 4.5-coupled field-level check: totally positive units in the window
    // must be squares for any form to be universal
    let mut nonsquare_unit = None;
    for a in &alphas {
        if a.is_unit() && square_root_in_order(field, a)?.is_none() {
            nonsquare_unit = Some(a.clone());
            break;
        }
    }

    Ok(ScanReport {
        outcome,
        delta,
        tensor_min,
        prop44_instances: prop44,
        nonsquare_unit,
    })
}

/// Represented set for an orthogonal sum: alpha is represented iff it is a
/// sum over constituents of represented values (or zero). Represented values
/// per constituent come from one bounded tensor enumeration each.
fn split_represented_set(
    field: &Field,
    delta: &FieldElement,
    constituents: &[(ZForm, IMat)],
    alphas: &[FieldElement],
) -> Result<BTreeSet<Vec<BigInt>>> {
    let mut max_m = BigInt::zero();
    for a in alphas {
        let m = twisted_trace(delta, a)?;
        if m > max_m {
            max_m = m;
        }
    }
    let t = trace_form(field, delta)?;
    // distinct constituents by doubled Gram
    let mut distinct: Vec<(ZForm, Vec<usize>)> = Vec::new();
    for (i, (c, _)) in constituents.iter().enumerate() {
        match distinct.iter_mut().find(|(f, _)| f == c) {
            Some((_, idxs)) => idxs.push(i),
            None => distinct.push((c.clone(), vec![i])),
        }
    }
    // represented values (as coordinate keys) per distinct constituent
    let mut values: Vec<BTreeSet<Vec<BigInt>>> = Vec::new();
    for (c, _) in &distinct {
        let tens = t.gram.tensor(c)?;
        let mut set = BTreeSet::new();
        for (_, u) in tens.enumerate_up_to(&max_m)? {
            let v = tensor_vector_to_elements(field, c.rank, &u);
            let value = evaluate_form(c, &v)?;
            set.insert(value.num.clone());
        }
        values.push(set);
    }
    // counts per distinct constituent
    let counts: Vec<usize> = distinct.iter().map(|(_, idxs)| idxs.len()).collect();
    // sorted candidate lists per distinct constituent
    let cand_lists: Vec<Vec<FieldElement>> = values
        .iter()
        .map(|set| {
            let mut v: Vec<FieldElement> =
                set.iter().map(|c| field.int_elem(c.clone())).collect();
            v.sort_by_key(|e| e.sort_key());
            v
        })
        .collect();

    fn can_sum(
        field: &Field,
        rem: &FieldElement,
        group: usize,
        slots_in_group: usize,
        start: usize,
        counts: &[usize],
        cands: &[Vec<FieldElement>],
    ) -> Result<bool> {
        if rem.is_zero() {
            return Ok(true);
        }
        if group == counts.len() {
            return Ok(false);
        }
        if slots_in_group == 0 {
            return can_sum(field, rem, group + 1, *counts.get(group + 1).unwrap_or(&0), 0, counts, cands);
        }
        // skip the rest of this group entirely
        if can_sum(field, rem, group + 1, *counts.get(group + 1).unwrap_or(&0), 0, counts, cands)? {
            return Ok(true);
        }
        for (idx, beta) in cands[group].iter().enumerate().skip(start) {
            let next = rem.sub(beta)?;
            if !next.is_totally_nonnegative() {
                continue;
            }
            if can_sum(field, &next, group, slots_in_group - 1, idx, counts, cands)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let mut out = BTreeSet::new();
    for a in alphas {
        if can_sum(field, a, 0, counts[0], 0, &counts, &cand_lists)? {
            out.insert(a.num.clone());
        }
    }
    Ok(out)
}

/// Rank compression of a representation: from Q'(v) = alpha build the d-ary
/// positive semidefinite integral form Q0 with Q0(w^0, ..., w^{d-1}) = alpha,
/// take its radical quotient Q of rank <= d, and return the compressed
/// witness. Everything is re-verified exactly.
pub fn compress_representation(
    field: &Field,
    qprime: &ZForm,
    witness: &[FieldElement],
    alpha: &FieldElement,
) -> Result<(ZForm, ZForm, Vec<FieldElement>)> {
    if witness.len() != qprime.rank || witness.iter().any(|w| !w.is_integral()) {
        return Err(Error::WitnessInvalid);
    }
    if &evaluate_form(qprime, witness)? != alpha {
        return Err(Error::WitnessInvalid);
    }
    let d = field.degree;
    let r = qprime.rank;
    // columns v^(i) of V: the omega^i-coordinate vectors of the witness
    let v_mat: IMat = (0..r)
        .map(|j| (0..d).map(|i| witness[j].num[i].clone()).collect())
        .collect(); // r x d
    let vt = intmat::transpose(&v_mat); // d x r
    let d0 = intmat::mat_mul(&vt, &intmat::mat_mul(&qprime.doubled, &v_mat)); // d x d doubled
    let q0 = ZForm::from_doubled(d0.clone())?;
    // Q0 evaluated at the power basis equals alpha
    let omegas: Vec<FieldElement> = (0..d)
        .map(|i| {
            let mut c = field.zero_coords();
            c[i] = BigInt::one();
            field.int_elem(c)
        })
        .collect();
    if &evaluate_form(&q0, &omegas)? != alpha {
        return Err(Error::InvariantViolation(
            "compressed semidefinite form does not evaluate to alpha".into(),
        ));
    }
    let (qred, proj) = radical_quotient(&d0)?;
    // new witness: image of the power basis under the projection
    let new_witness: Vec<FieldElement> = (0..qred.rank)
        .map(|k| {
            let mut acc = field.zero();
            for (col, om) in omegas.iter().enumerate() {
                acc = acc
                    .add(&om.scalar_mul(&BigRational::from(proj[k][col].clone())))
                    .unwrap();
            }
            acc
        })
        .collect();
    if qred.rank > 0 && &evaluate_form(&qred, &new_witness)? != alpha {
        return Err(Error::InvariantViolation(
            "compressed witness does not evaluate to alpha".into(),
        ));
    }
    Ok((q0, qred, new_witness))
}

/// Orthogonal sum Q^{perp m} with m = pythagoras_upper * #classes, after
/// checking that Q represents every class representative.
pub fn build_lifted_universal(
    q: &ZForm,
    field: &Field,
    pythagoras_upper: usize,
    classes: &[IndecompClass],
) -> Result<ZForm> {
    for c in classes {
        if represents(q, &c.representative, field)?.is_none() {
            return Err(Error::ClassNotRepresented(c.representative.to_string()));
        }
    }
    let m = pythagoras_upper * classes.len();
    if m == 0 {
        return Err(Error::SpecParse("lift multiplicity is zero".into()));
    }
    Ok(q.repeated_sum(m))
}

/// The quadratic-field mechanism: alpha = omega / epsilon has Tr(delta alpha)
/// = 1 for delta = epsilon / f'(omega); if any Z-form were universal, alpha
/// would have to be a unit. |N(alpha)| = |N(omega)| regardless of the twist.
#[derive(Debug, Clone)]
pub struct Thm1Report {
    pub has_all_signatures: bool,
    /// Mixed-signature unit used as the twist, when one exists.
    pub epsilon: Option<FieldElement>,
    pub alpha: FieldElement,
    pub alpha_norm_abs: BigInt,
    pub alpha_is_unit: bool,
    /// Exact check Tr(delta alpha) = 1, performed when epsilon exists.
    pub trace_one_verified: Option<bool>,
    pub obstruction: Option<Thm1Obstruction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Thm1Obstruction {
    /// No unit matches the signature of f'(omega): some totally positive
    /// unit is a non-square, so no universal Z-form exists.
    NoMixedSignatureUnit,
    /// The trace-1 element omega/epsilon is not a unit, contradicting the
    /// consequence of universality.
    TraceOneNonUnit,
}

pub fn thm1_quadratic(field: &Field) -> Result<Thm1Report> {
    if field.degree != 2 {
        return Err(Error::UnsupportedDegree(field.degree));
    }
    let has_all = crate::embeddings::units_cover_all_signatures(field)?;
    let fp = crate::traceform::fprime_element(field);
    let target = signature_of(field, &fp)?;
    let eps = unit_with_signature(field, &target)?;
    let omega = field.omega();
    let (alpha, trace_one_verified) = match &eps {
        Some(e) => {
            let alpha = omega.mul(&e.invert()?)?;
            let delta = e.mul(&fp.invert()?)?;
            let ok = delta.is_totally_positive()
                && alpha.is_totally_positive()
                && delta.mul(&alpha)?.trace() == BigRational::one();
            (alpha, Some(ok))
        }
        None => (omega.clone(), None),
    };
    let alpha_norm_abs = alpha.norm().abs();
    debug_assert!(alpha_norm_abs.is_integer());
    let alpha_norm_abs = alpha_norm_abs.to_integer();
    let alpha_is_unit = alpha_norm_abs.is_one();
    let obstruction = if eps.is_none() {
        Some(Thm1Obstruction::NoMixedSignatureUnit)
    } else if !alpha_is_unit {
        Some(Thm1Obstruction::TraceOneNonUnit)
    } else {
        None
    };
    Ok(Thm1Report {
        has_all_signatures: has_all,
        epsilon: eps,
        alpha,
        alpha_norm_abs,
        alpha_is_unit,
        trace_one_verified,
        obstruction,
    })
}

/// First totally positive unit in the trace window that is not a square.
pub fn first_nonsquare_tp_unit(
    field: &Field,
    trace_bound: &BigInt,
) -> Result<Option<FieldElement>> {
    for coords in crate::embeddings::totally_positive_up_to_trace(field, trace_bound)? {
        let a = field.int_elem(coords);
        if a.is_unit() && square_root_in_order(field, &a)?.is_none() {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_element;
    use crate::presets::{benchmark_field, parse_form};

    #[test]
    fn deutsch4_represents_one() {
        let cubic = benchmark_field("zeta7").unwrap();
        let q = parse_form("deutsch4").unwrap();
        let v = represents(&q, &cubic.one(), &cubic).unwrap().unwrap();
        assert!(evaluate_form(&q, &v).unwrap().is_one());
    }

    #[test]
    fn a2_represents_the_norm_seven_indecomposable() {
        let cubic = benchmark_field("zeta7").unwrap();
        let q = parse_form("a2").unwrap();
        let beta = parse_element(&cubic, "omega^2-omega+1").unwrap();
        let v = represents(&q, &beta, &cubic).unwrap().unwrap();
        assert_eq!(evaluate_form(&q, &v).unwrap(), beta);
    }

    #[test]
    fn q5_three_squares_small_window() {
        let q5 = benchmark_field("q5").unwrap();
        let q = parse_form("sum-squares:3").unwrap();
        let rep = universal_scan(&q, &q5, &BigInt::from(10)).unwrap();
        assert!(matches!(rep.outcome, ScanOutcome::AllRepresented { .. }));
        assert!(rep.nonsquare_unit.is_none());
    }

    #[test]
    fn q2_four_squares_finds_a_witness() {
        let q2 = benchmark_field("q2").unwrap();
        let q = parse_form("sum-squares:4").unwrap();
        let rep = universal_scan(&q, &q2, &BigInt::from(12)).unwrap();
        match rep.outcome {
            ScanOutcome::NotRepresented { ref alpha, .. } => {
                // independent cross-check
                assert!(represents(&q, alpha, &q2).unwrap().is_none());
            }
            _ => panic!("expected a Siegel witness over q2"),
        }
    }

    #[test]
    fn scan_coherence_with_single_representation() {
        let q5 = benchmark_field("q5").unwrap();
        let q = parse_form("sum-squares:3").unwrap();
        let bound = BigInt::from(9);
        let rep = universal_scan(&q, &q5, &bound).unwrap();
        assert!(matches!(rep.outcome, ScanOutcome::AllRepresented { .. }));
        // deterministic sample of the window re-checked one by one
        let window = crate::embeddings::totally_positive_up_to_trace(&q5, &bound).unwrap();
        for coords in window.iter().step_by(3) {
            let a = q5.int_elem(coords.clone());
            let w = represents(&q, &a, &q5).unwrap();
            assert!(w.is_some(), "{a} reported represented but recheck failed");
            assert_eq!(evaluate_form(&q, &w.unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn q3_has_nonsquare_unit_obstruction() {
        let q3 = benchmark_field("q3").unwrap();
        let u = first_nonsquare_tp_unit(&q3, &BigInt::from(10)).unwrap();
        assert_eq!(u.unwrap(), parse_element(&q3, "2-omega").unwrap());
        // over q5 and the cubic no such unit exists in a decent window
        for name in ["q5", "zeta7"] {
            let f = benchmark_field(name).unwrap();
            assert!(first_nonsquare_tp_unit(&f, &BigInt::from(12)).unwrap().is_none());
        }
    }

    #[test]
    fn thm1_mechanism_over_small_quadratic_fields() {
        for (name, expect_unit) in [("q2", false), ("q3", false), ("q6", false), ("q7", false), ("q5", true)] {
            let f = benchmark_field(name).unwrap();
            let rep = thm1_quadratic(&f).unwrap();
            assert_eq!(rep.alpha_is_unit, expect_unit, "{name}");
            if expect_unit {
                assert!(rep.obstruction.is_none());
                assert_eq!(rep.trace_one_verified, Some(true));
            } else {
                assert!(rep.obstruction.is_some());
            }
        }
        // q2 specifically: mixed unit exists, alpha = 2 - sqrt2 of norm 2
        let q2 = benchmark_field("q2").unwrap();
        let rep = thm1_quadratic(&q2).unwrap();
        assert_eq!(rep.obstruction, Some(Thm1Obstruction::TraceOneNonUnit));
        assert_eq!(rep.alpha_norm_abs, BigInt::from(2));
        assert_eq!(rep.trace_one_verified, Some(true));
        // q3: no mixed-signature unit at all
        let q3 = benchmark_field("q3").unwrap();
        let rep = thm1_quadratic(&q3).unwrap();
        assert_eq!(rep.obstruction, Some(Thm1Obstruction::NoMixedSignatureUnit));
        assert!(!rep.has_all_signatures);
        let cubic = benchmark_field("zeta7").unwrap();
        assert_eq!(
            thm1_quadratic(&cubic).unwrap_err(),
            Error::UnsupportedDegree(3)
        );
    }

    #[test]
    fn compression_examples() {
        let q5 = benchmark_field("q5").unwrap();
        // r = 1: Q' = x^2, v = (gamma)
        let x2 = parse_form("sum-squares:1").unwrap();
        let gamma = parse_element(&q5, "omega+1").unwrap();
        let alpha = gamma.mul(&gamma).unwrap();
        let (q0, qred, w) =
            compress_representation(&q5, &x2, &[gamma.clone()], &alpha).unwrap();
        assert!(qred.rank <= 2);
        assert_eq!(evaluate_form(&qred, &w).unwrap(), alpha);
        assert!(q0.is_positive_semidefinite());

        // degenerate: colinear coordinate columns give rank 1
        let i2 = parse_form("sum-squares:2").unwrap();
        let v = vec![q5.from_i64(3), q5.from_i64(4)];
        let alpha = q5.from_i64(25);
        let (_, qred, w) = compress_representation(&q5, &i2, &v, &alpha).unwrap();
        assert_eq!(qred.rank, 1);
        assert_eq!(evaluate_form(&qred, &w).unwrap(), alpha);

        // a scan witness compresses to rank <= d and still represents alpha
        let i3 = parse_form("sum-squares:3").unwrap();
        let a = parse_element(&q5, "omega+3").unwrap();
        let wit = represents(&i3, &a, &q5).unwrap().unwrap();
        let (_, qred, w2) = compress_representation(&q5, &i3, &wit, &a).unwrap();
        assert!(qred.rank <= 2);
        assert_eq!(evaluate_form(&qred, &w2).unwrap(), a);

        // invalid witness rejected
        let bad = vec![q5.one(), q5.one(), q5.one()];
        assert_eq!(
            compress_representation(&q5, &i3, &bad, &a).unwrap_err(),
            Error::WitnessInvalid
        );
    }

    #[test]
    fn lift_construction() {
        let cubic = benchmark_field("zeta7").unwrap();
        let a2 = parse_form("a2").unwrap();
        let classes = crate::indecomp::indecomposable_classes(
            &cubic,
            &BigInt::from(16),
            &BigInt::from(30),
        )
        .unwrap();
        assert_eq!(classes.classes.len(), 2);
        let lifted = build_lifted_universal(&a2, &cubic, 6, &classes.classes).unwrap();
        assert_eq!(lifted.rank, 24);
        assert_eq!(lifted.orthogonal_constituents().unwrap().len(), 12);

        // x^2 misses the norm-7 class
        let x2 = parse_form("sum-squares:1").unwrap();
        assert!(matches!(
            build_lifted_universal(&x2, &cubic, 6, &classes.classes).unwrap_err(),
            Error::ClassNotRepresented(_)
        ));
    }

    #[test]
    fn lifted_form_small_window_scan() {
        // the rank-24 lift, scanned over a small window through the split route
        let cubic = benchmark_field("zeta7").unwrap();
        let a2 = parse_form("a2").unwrap();
        let lifted = a2.repeated_sum(12);
        let rep = universal_scan(&lifted, &cubic, &BigInt::from(7)).unwrap();
        assert!(matches!(rep.outcome, ScanOutcome::AllRepresented { .. }));
    }

    #[test]
    fn degree_one_sanity_lagrange() {
        // Z itself: minpoly x, omega = 0; I4 represents small positives
        let spec = crate::field::FieldSpec {
            label: "zz".into(),
            minpoly: vec![BigInt::zero(), BigInt::one()],
            units: vec![],
            provenance: String::new(),
        };
        let zz = crate::field::load_field(&spec).unwrap();
        let x2 = parse_form("sum-squares:1").unwrap();
        let one_class = crate::indecomp::indecomposable_classes(&zz, &BigInt::from(16), &BigInt::from(1))
            .unwrap();
        assert_eq!(one_class.classes.len(), 1);
        let lifted = build_lifted_universal(&x2, &zz, 4, &one_class.classes).unwrap();
        assert_eq!(lifted, ZForm::identity(4).unwrap());
        let rep = universal_scan(&lifted, &zz, &BigInt::from(15)).unwrap();
        assert!(matches!(rep.outcome, ScanOutcome::AllRepresented { .. }));
    }
}
