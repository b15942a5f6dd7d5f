//! Embedded self-test battery: golden values from the benchmark fields and
//! the instance-level lattice invariants, one PASS/FAIL line each.

use crate::output::Record;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use uqf_core::error::Error;
use uqf_core::field::parse_element;
use uqf_core::presets::{benchmark_field, parse_form};
use uqf_core::zform::split_factor;

type Check = (&'static str, fn() -> Result<(), String>);

fn ok(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn benchmark_discriminants() -> Result<(), String> {
    for (name, disc) in [("q5", 5i64), ("zeta7", 49), ("quartic725", 725), ("zeta11", 14641)] {
        let f = benchmark_field(name).map_err(e2s)?;
        ok(f.disc == BigInt::from(disc), &format!("disc of {name}"))?;
    }
    Ok(())
}

fn quintic_gram_and_minimum() -> Result<(), String> {
    let k = benchmark_field("zeta11").map_err(e2s)?;
    let delta = parse_element(&k, "inv:omega+2").map_err(e2s)?;
    let t = uqf_core::traceform::trace_form(&k, &delta).map_err(e2s)?;
    let rows: [[i64; 5]; 5] = [
        [5, -5, 11, -13, 30],
        [-5, 11, -13, 30, -35],
        [11, -13, 30, -35, 86],
        [-13, 30, -35, 86, -94],
        [30, -35, 86, -94, 252],
    ];
    for i in 0..5 {
        for j in 0..5 {
            ok(
                t.gram.doubled[i][j] == BigInt::from(2 * rows[i][j]),
                &format!("gram[{i}][{j}]"),
            )?;
        }
    }
    let m = t.gram.minima().map_err(e2s)?;
    ok(m.min == BigInt::from(5), "min(t) = 5")
}

fn trace_one_counts() -> Result<(), String> {
    for (name, n) in [("q5", 2usize), ("zeta7", 3), ("q2", 3)] {
        let f = benchmark_field(name).map_err(e2s)?;
        let els = uqf_core::traceform::trace_one_codifferent_elements(&f).map_err(e2s)?;
        ok(els.len() == n, &format!("trace-one count over {name}"))?;
    }
    Ok(())
}

fn zeta_bound_oracle() -> Result<(), String> {
    let oracle = [
        (2usize, "5.5253375"),
        (3, "51.1893897"),
        (4, "742.7428285"),
        (5, "14885.9483357"),
        (7, "12386158.6055454"),
    ];
    for (d, prefix) in oracle {
        let e = uqf_core::zeta::discriminant_bound(d).map_err(e2s)?;
        let shown = e.display(7);
        ok(
            shown.starts_with(&format!("[{prefix}")),
            &format!("bound d={d}: {shown}"),
        )?;
    }
    Ok(())
}

fn sigma_values() -> Result<(), String> {
    let cubic = benchmark_field("zeta7").map_err(e2s)?;
    let b = parse_element(&cubic, "omega+2").map_err(e2s)?;
    ok(
        uqf_core::zeta::sigma_ideal(&cubic, &b).map_err(e2s)? == BigInt::from(8),
        "sigma(omega+2) = 8",
    )?;
    ok(
        uqf_core::zeta::sigma_ideal(&cubic, &cubic.from_i64(2)).map_err(e2s)? == BigInt::from(9),
        "sigma(2) = 9",
    )
}

fn siegel_identities() -> Result<(), String> {
    let q5 = benchmark_field("q5").map_err(e2s)?;
    let rep = uqf_core::zeta::siegel_consistency(&q5, 4000).map_err(e2s)?;
    ok(rep.lhs == BigInt::from(2), "lhs over q5")?;
    ok(rep.consistent, "enclosure over q5")?;
    ok(
        rep.zeta_minus_one == BigRational::new(BigInt::one(), BigInt::from(30)),
        "zeta(-1) over q5",
    )
}

fn tensor_split_instance() -> Result<(), String> {
    let cubic = benchmark_field("zeta7").map_err(e2s)?;
    let cd = uqf_core::traceform::codifferent_generator(&cubic).map_err(e2s)?;
    let q = parse_form("deutsch4").map_err(e2s)?;
    let rep = uqf_core::traceform::twisted_tensor_min(&cubic, &cd.delta, &q).map_err(e2s)?;
    ok(rep.min == &rep.trace_form_min * &rep.q_min, "tensor min multiplicativity")?;
    for (v, _, _) in &rep.splits {
        ok(
            split_factor(v, cubic.degree, q.rank).is_some(),
            "minimal vector splits",
        )?;
    }
    Ok(())
}

fn minima_brute_force_spot() -> Result<(), String> {
    let a2 = parse_form("a2").map_err(e2s)?;
    let m = a2.minima().map_err(e2s)?;
    ok(m.min == BigInt::one() && m.count == 6, "a2 minima")
}

fn thm1_verdicts() -> Result<(), String> {
    for (name, unit) in [("q2", false), ("q3", false), ("q6", false), ("q7", false), ("q5", true)] {
        let f = benchmark_field(name).map_err(e2s)?;
        let rep = uqf_core::represent::thm1_quadratic(&f).map_err(e2s)?;
        ok(rep.alpha_is_unit == unit, &format!("thm1 over {name}"))?;
    }
    Ok(())
}

fn cubic_classes() -> Result<(), String> {
    let cubic = benchmark_field("zeta7").map_err(e2s)?;
    let list = uqf_core::indecomp::indecomposable_classes(
        &cubic,
        &BigInt::from(16),
        &BigInt::from(30),
    )
    .map_err(e2s)?;
    ok(list.classes.len() == 2, "two cubic classes")?;
    ok(list.classes[1].norm == BigInt::from(7), "norm-7 class")
}

pub fn run(json: bool) -> Result<u8, Error> {
    let checks: Vec<Check> = vec![
        ("benchmark-discriminants", benchmark_discriminants),
        ("quintic-gram-and-minimum", quintic_gram_and_minimum),
        ("trace-one-counts", trace_one_counts),
        ("zeta-bound-oracle", zeta_bound_oracle),
        ("sigma-values", sigma_values),
        ("siegel-identities", siegel_identities),
        ("tensor-split-instance", tensor_split_instance),
        ("minima-spot-check", minima_brute_force_spot),
        ("thm1-verdicts", thm1_verdicts),
        ("cubic-classes", cubic_classes),
    ];
    let mut failures = 0usize;
    for (name, f) in checks {
        let mut rec = Record::new("selftest");
        rec.set("name", name);
        match f() {
            Ok(()) => rec.set("status", "PASS"),
            Err(msg) => {
                failures += 1;
                rec.set("status", "FAIL");
                rec.set("detail", msg);
            }
        }
        rec.emit(json);
    }
    if failures == 0 {
        Ok(0)
    } else {
        Err(Error::InvariantViolation(format!(
            "{failures} selftest check(s) failed"
        )))
    }
}
