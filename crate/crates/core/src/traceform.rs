//! Codifferent generators, twisted trace forms t_delta, trace-1 codifferent
//! elements, and minima of twisted tensor products.
//!
//! For a monogenic order the codifferent is (1/f'(omega)) O_K. The twisted
//! trace form t_delta has Gram matrix (Tr(delta w^i w^j)); it is classical
//! and positive definite whenever delta is a totally positive codifferent
//! element. Tensor minima are checked instance-by-instance against the
//! split-vector consequence of the E-type property; a non-split minimal
//! vector is a fatal inconsistency, never silently accepted.

use crate::embeddings::{
    embedding_enclosures, enumerate_box, signature_of, unit_with_signature, EnumerationBox,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::zform::{split_factor, ZForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct CodifferentData {
    /// 1/f'(omega).
    pub delta0: FieldElement,
    /// Totally positive generator: `twist * delta0`.
    pub delta: FieldElement,
    /// The unit (or negated unit product) used as the twist.
    pub twist: FieldElement,
    /// Norm of the different ideal, |disc|.
    pub different_norm: BigInt,
}

/// The derivative f'(omega) as an element of the order.
pub fn fprime_element(field: &Field) -> FieldElement {
    let d = field.degree;
    let mut coords = field.zero_coords();
    for (k, c) in crate::poly::derivative_z(&field.minpoly).iter().enumerate() {
        if k < d {
            coords[k] = c.clone();
        }
    }
    field.int_elem(coords)
}

/// Totally positive generator of the codifferent, found by twisting
/// 1/f'(omega) with a product of listed units (graded deterministic search).
pub fn codifferent_generator(field: &Field) -> Result<CodifferentData> {
    let fp = fprime_element(field);
    let delta0 = fp.invert()?;
    let sig = signature_of(field, &delta0)?;
    // a twist with the same signature as delta0 makes the product positive
    let twist: FieldElement = if sig.iter().all(|&s| s > 0) {
        field.one()
    } else {
        unit_with_signature(field, &sig)?.ok_or(Error::NoTotallyPositiveGenerator)?
    };
    let delta = twist.mul(&delta0)?;
    if !delta.is_totally_positive() {
        return Err(Error::NoTotallyPositiveGenerator);
    }
    Ok(CodifferentData {
        delta0,
        delta,
        twist,
        different_norm: field.disc.clone().abs(),
    })
}

#[derive(Debug, Clone)]
pub struct TraceForm {
    pub delta: FieldElement,
    pub gram: ZForm,
}

/// Twisted trace form t_delta with Gram (Tr(delta w^i w^j)); requires delta
/// totally positive and in the codifferent (every entry integral).
pub fn trace_form(field: &Field, delta: &FieldElement) -> Result<TraceForm> {
    if !delta.is_totally_positive() {
        return Err(Error::NotTotallyPositive);
    }
    let d = field.degree;
    let mut gram = vec![vec![BigInt::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let mono = field.power_element(i + j).to_vec();
            let prod = field
                .int_elem(mono)
                .mul(delta)
                .expect("same field");
            let t = prod.trace();
            if !t.is_integer() {
                return Err(Error::NotInCodifferent(delta.to_string()));
            }
            gram[i][j] = t.to_integer();
            gram[j][i] = gram[i][j].clone();
        }
    }
    let form = ZForm::from_integral_gram(gram)?;
    if !form.classical {
        return Err(Error::InvariantViolation(
            "trace form must be classical".into(),
        ));
    }
    if !form.is_positive_definite() {
        return Err(Error::InvariantViolation(
            "trace form of a totally positive twist must be definite".into(),
        ));
    }
    Ok(TraceForm {
        delta: delta.clone(),
        gram: form,
    })
}

/// The complete sorted list of alpha in the totally positive codifferent with
/// Tr(alpha) = 1. Works in beta = alpha * f'(omega) coordinates, which are
/// integral; the box is 0 < sigma_i(beta)/sigma_i(f') < 1 and the exact
/// filters are total positivity and the trace. No totally positive generator
/// is needed.
pub fn trace_one_codifferent_elements(field: &Field) -> Result<Vec<FieldElement>> {
    let fp = fprime_element(field);
    let delta0 = fp.invert()?;
    // cross-check the dual-basis identity Tr(w^k / f'(w)) = [k = d-1]
    let d = field.degree;
    for k in 0..d {
        let mut co = field.zero_coords();
        co[k] = BigInt::one();
        let t = field.int_elem(co).mul(&delta0)?.trace();
        let expect = if k + 1 == d {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        if t != expect {
            return Err(Error::InvariantViolation(
                "dual-basis trace identity failed".into(),
            ));
        }
    }
    // screening box for beta: between 0 and sigma_i(f'), outward-rounded
    let encl = embedding_enclosures(field, &fp, 64)?;
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for (l, h) in encl {
        if l.is_positive() {
            lo.push(BigRational::zero());
            hi.push(h);
        } else if h.is_negative() {
            lo.push(l);
            hi.push(BigRational::zero());
        } else {
            return Err(Error::InvariantViolation(
                "f'(omega) enclosure straddles zero at 64 bits".into(),
            ));
        }
    }
    let mut coeffs = vec![BigInt::zero(); d];
    coeffs[d - 1] = BigInt::one();
    let bx = EnumerationBox::open(lo, hi).with_constraint(coeffs, BigInt::one());
    let betas = enumerate_box(field, &bx)?;
    let mut out = Vec::new();
    for b in betas {
        let alpha = field.int_elem(b).mul(&delta0)?;
        if alpha.is_totally_positive() && alpha.trace() == BigRational::one() {
            out.push(alpha);
        }
    }
    out.sort_by_key(|a| a.sort_key());
    Ok(out)
}

/// Minimum of t_delta tensor Q with all minimal vectors, their split
/// factorizations mapped back to (field element, Z^r), and the exact
/// verification Tr(delta beta^2 Q(w)) = min for each.
#[derive(Debug, Clone)]
pub struct TensorMinReport {
    pub trace_form_min: BigInt,
    pub q_min: BigInt,
    pub min: BigInt,
    /// (tensor vector, beta, w) per +- pair.
    pub splits: Vec<(Vec<BigInt>, FieldElement, Vec<BigInt>)>,
}

pub fn twisted_tensor_min(field: &Field, delta: &FieldElement, q: &ZForm) -> Result<TensorMinReport> {
    let t = trace_form(field, delta)?;
    let tens = t.gram.tensor(q)?;
    let tmin = t.gram.minima()?;
    let qmin = q.minima()?;
    let m = tens.minima()?;
    // E-type instance checks (d <= 43 throughout this workbench)
    let expected = &tmin.min * &qmin.min;
    if m.min != expected {
        return Err(Error::InvariantViolation(format!(
            "tensor minimum {} differs from product of minima {}",
            m.min, expected
        )));
    }
    let mut splits = Vec::with_capacity(m.vectors.len());
    for v in &m.vectors {
        let Some((beta_coords, w)) = split_factor(v, field.degree, q.rank) else {
            return Err(Error::InvariantViolation(format!(
                "non-split tensor minimal vector {v:?}"
            )));
        };
        let beta = field.int_elem(beta_coords);
        let qw = q.evaluate(&w);
        let val = delta
            .mul(&beta)?
            .mul(&beta)?
            .scalar_mul(&BigRational::from(qw))
            .trace();
        if val != BigRational::from(m.min.clone()) {
            return Err(Error::InvariantViolation(
                "split factorization does not reproduce the minimum".into(),
            ));
        }
        splits.push((v.clone(), beta, w));
    }
    Ok(TensorMinReport {
        trace_form_min: tmin.min,
        q_min: qmin.min,
        min: m.min,
        splits,
    })
}
