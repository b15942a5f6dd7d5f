//! Command-line front end: reproducible, machine-readable access to the
//! field arithmetic, lattice, and zeta machinery.
//!
//! Exit codes: 0 success / all represented; 1 mathematical negative found
//! (non-representation witness, obstruction, no decomposition); 2 usage or
//! input error; 3 internal invariant violation.

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use std::path::Path;
use std::process::ExitCode;
use uqf_core::error::Error;
use uqf_core::field::{load_field, parse_element, Field, FieldElement, FieldSpec};
use uqf_core::represent::{ScanOutcome, Thm1Obstruction};
use uqf_core::zform::ZForm;

mod output;
mod selftest;

use output::Record;

#[derive(Parser)]
#[command(name = "uqf", version, about = "universal Z-form workbench over totally real fields")]
struct Cli {
    /// Worker threads (0 = library default); never affects output bytes.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Emit one JSON record per line (keys sorted).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate and describe a field: discriminant, units, embeddings.
    FieldInfo { field: String },
    /// Gram matrix and minimum of the twisted trace form t_delta.
    TraceForm {
        field: String,
        /// Element expression, `[coords]/den`, `inv:<expr>`, or `canonical`.
        #[arg(long, default_value = "canonical")]
        delta: String,
    },
    /// Minimum and minimal vectors of a positive definite form.
    Minima {
        /// Named preset or doubled-Gram literal `rank:[entries]`.
        #[arg(long)]
        form: String,
    },
    /// Indecomposable classes up to squares of listed units.
    Indecomposables {
        field: String,
        #[arg(long, default_value_t = 16)]
        norm_bound: i64,
        #[arg(long, default_value_t = 30)]
        trace_bound: i64,
    },
    /// Least number of squares summing to alpha.
    Sos {
        field: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Observed Pythagoras lower bound over a trace window.
    Pythagoras {
        field: String,
        #[arg(long, default_value_t = 60)]
        trace_bound: i64,
    },
    /// The discriminant-bound table for degrees 2, 3, 4, 5, 7.
    ZetaBounds,
    /// Exact trace-1 codifferent sum against the zeta_K(2) Euler product.
    SiegelCheck {
        field: String,
        #[arg(long, default_value_t = 10_000)]
        prime_limit: u64,
    },
    /// Decide representation of alpha by a form over the field.
    Represent {
        field: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        alpha: String,
    },
    /// Scan a trace window for non-represented totally positive integers.
    UniversalScan {
        field: String,
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 25)]
        trace_bound: i64,
    },
    /// Orthogonal-sum lift that represents everything the classes generate.
    Lift {
        field: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        pythagoras_upper: usize,
        #[arg(long, default_value_t = 16)]
        norm_bound: i64,
        #[arg(long, default_value_t = 30)]
        trace_bound: i64,
        /// Optionally scan the lifted form over this trace window.
        #[arg(long)]
        scan_bound: Option<i64>,
    },
    /// Run the embedded property and golden-value battery.
    Selftest,
}

fn resolve_field(arg: &str) -> Result<Field, Error> {
    if Path::new(arg).exists() {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Error::SpecParse(format!("cannot read {arg}: {e}")))?;
        return load_field(&FieldSpec::parse(&text)?);
    }
    let name = arg.trim_end_matches(".field");
    let name = name.rsplit('/').next().unwrap_or(name);
    uqf_core::presets::benchmark_field(name)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvariantViolation(_)
        | Error::PrecisionExhausted(_)
        | Error::PrimeSearchExhausted(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn gram_rows(q: &ZForm) -> Vec<String> {
    // integer Gram (halved doubled matrix) row-major; classical forms only
    q.doubled
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|x| (x / BigInt::from(2)).to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect()
}

fn form_literal(q: &ZForm) -> String {
    let mut cells = Vec::with_capacity(q.rank * q.rank);
    for row in &q.doubled {
        for x in row {
            cells.push(x.to_string());
        }
    }
    format!("{}:[{}]", q.rank, cells.join(","))
}

fn elements_str(v: &[FieldElement]) -> String {
    v.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::FieldInfo { field } => {
            let f = resolve_field(field)?;
            let mut rec = Record::new("field-info");
            rec.set("label", &f.label);
            rec.set("degree", f.degree);
            rec.set(
                "minpoly",
                format!(
                    "[{}]",
                    f.minpoly
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            );
            rec.set("disc", f.disc.to_string());
            rec.set("units", f.units.len());
            for (i, u) in f.unit_elements().iter().enumerate() {
                rec.set(format!("unit{i}"), u.to_string());
            }
            let cover = uqf_core::embeddings::units_cover_all_signatures(&f)?;
            rec.set("all-signatures", cover);
            match uqf_core::traceform::codifferent_generator(&f) {
                Ok(cd) => rec.set("codifferent-delta", cd.delta.to_string()),
                Err(Error::NoTotallyPositiveGenerator) => {
                    rec.set("codifferent-delta", "no-totally-positive-generator")
                }
                Err(e) => return Err(e),
            }
            let emb = uqf_core::embeddings::isolate_roots(&f, 64)?;
            for (i, iv) in emb.intervals.iter().enumerate() {
                let e = uqf_core::enclosure::Enclosure {
                    lo: uqf_core::enclosure::Enclosure::from_rational(&iv.0).lo,
                    hi: uqf_core::enclosure::Enclosure::from_rational(&iv.1).hi,
                };
                rec.set(format!("root{i}"), e.display(12));
            }
            if f.degree == 2 {
                let t = uqf_core::represent::thm1_quadratic(&f)?;
                rec.set("thm1-alpha", t.alpha.to_string());
                rec.set("thm1-alpha-norm", t.alpha_norm_abs.to_string());
                rec.set("thm1-alpha-is-unit", t.alpha_is_unit);
                rec.set(
                    "thm1-obstruction",
                    match t.obstruction {
                        None => "none".to_string(),
                        Some(Thm1Obstruction::NoMixedSignatureUnit) => {
                            "no-mixed-signature-unit".into()
                        }
                        Some(Thm1Obstruction::TraceOneNonUnit) => "trace-one-non-unit".into(),
                    },
                );
            }
            rec.emit(cli.json);
            Ok(0)
        }
        Cmd::TraceForm { field, delta } => {
            let f = resolve_field(field)?;
            let d = if delta == "canonical" {
                uqf_core::traceform::codifferent_generator(&f)?.delta
            } else {
                parse_element(&f, delta)?
            };
            let t = uqf_core::traceform::trace_form(&f, &d)?;
            let m = t.gram.minima()?;
            let mut rec = Record::new("trace-form");
            rec.set("field", &f.label);
            rec.set("delta", d.to_string());
            rec.set("rank", t.gram.rank);
            rec.set("classical", t.gram.classical);
            rec.set("min", m.min.to_string());
            rec.set("min-count", m.count);
            if cli.json {
                for (i, row) in gram_rows(&t.gram).iter().enumerate() {
                    rec.set(format!("row{i}"), row);
                }
                rec.emit(true);
            } else {
                rec.emit(false);
                for row in gram_rows(&t.gram) {
                    println!("{row}");
                }
            }
            Ok(0)
        }
        Cmd::Minima { form } => {
            let q = uqf_core::presets::parse_form(form)?;
            let m = q.minima()?;
            let mut rec = Record::new("minima");
            rec.set("form", form_literal(&q));
            rec.set("min", m.min.to_string());
            rec.set("count", m.count);
            for (i, v) in m.vectors.iter().enumerate() {
                rec.set(
                    format!("vec{i}"),
                    format!(
                        "[{}]",
                        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
                    ),
                );
            }
            rec.emit(cli.json);
            Ok(0)
        }
        Cmd::Indecomposables {
            field,
            norm_bound,
            trace_bound,
        } => {
            let f = resolve_field(field)?;
            let list = uqf_core::indecomp::indecomposable_classes(
                &f,
                &BigInt::from(*norm_bound),
                &BigInt::from(*trace_bound),
            )?;
            let mut rec = Record::new("indecomposables");
            rec.set("field", &f.label);
            rec.set("classes", list.classes.len());
            rec.set("norm-bound", norm_bound.to_string());
            rec.set("trace-bound", trace_bound.to_string());
            rec.emit(cli.json);
            for c in &list.classes {
                let mut line = Record::new("class");
                line.set("representative", c.representative.to_string());
                line.set("norm", c.norm.to_string());
                line.set("trace", c.trace.to_string());
                line.set("indecomposable", c.indecomposable);
                line.emit(cli.json);
            }
            Ok(0)
        }
        Cmd::Sos {
            field,
            alpha,
            max_len,
        } => {
            let f = resolve_field(field)?;
            let a = parse_element(&f, alpha)?;
            match uqf_core::sos::sos_length(&f, &a, *max_len)? {
                Some((k, parts)) => {
                    if cli.json {
                        let mut rec = Record::new("sos");
                        rec.set("alpha", a.to_string());
                        rec.set("length", k);
                        rec.set("parts", elements_str(&parts));
                        rec.emit(true);
                    } else {
                        println!("{a} -> {k} parts={}", elements_str(&parts));
                    }
                    Ok(0)
                }
                None => {
                    if cli.json {
                        let mut rec = Record::new("sos");
                        rec.set("alpha", a.to_string());
                        rec.set("length", "none");
                        rec.emit(true);
                    } else {
                        println!("{a} -> none");
                    }
                    Ok(1)
                }
            }
        }
        Cmd::Pythagoras { field, trace_bound } => {
            let f = resolve_field(field)?;
            let rep = uqf_core::sos::pythagoras_scan(&f, &BigInt::from(*trace_bound))?;
            let mut rec = Record::new("pythagoras");
            rec.set("field", &f.label);
            rec.set("trace-bound", trace_bound.to_string());
            rec.set("observed-max", rep.observed_max);
            rec.set(
                "upper-bound",
                rep.upper_bound
                    .map(|u| u.to_string())
                    .unwrap_or("none".into()),
            );
            if let Some(w) = &rep.witness {
                rec.set("witness", w.to_string());
            }
            if let Some(n) = &rep.first_non_sos {
                rec.set("first-non-sos", n.to_string());
            }
            for (k, n) in &rep.histogram {
                rec.set(format!("count{k}"), *n);
            }
            rec.emit(cli.json);
            Ok(0)
        }
        Cmd::ZetaBounds => {
            for d in [2usize, 3, 4, 5, 7] {
                let b = uqf_core::zeta::b_constant(d)?;
                let e = uqf_core::zeta::discriminant_bound(d)?;
                let mut rec = Record::new("zeta-bound");
                rec.set("d", d);
                rec.set("b", b.to_string());
                rec.set("bound", e.display(7));
                rec.emit(cli.json);
            }
            Ok(0)
        }
        Cmd::SiegelCheck { field, prime_limit } => {
            let f = resolve_field(field)?;
            let rep = uqf_core::zeta::siegel_consistency(&f, *prime_limit)?;
            let mut rec = Record::new("siegel-check");
            rec.set("field", &f.label);
            rec.set("degree", rep.degree);
            rec.set("prime-limit", rep.prime_limit.to_string());
            rec.set("trace-one-count", rep.trace_one_count);
            rec.set(
                "sigma-values",
                format!(
                    "[{}]",
                    rep.sigma_values
                        .iter()
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            );
            rec.set("lhs", rep.lhs.to_string());
            rec.set("zeta-minus-one", rep.zeta_minus_one.to_string());
            rec.set("zeta2", rep.zeta2.display(10));
            rec.set("rhs", rep.rhs.display(10));
            rec.set("consistent", rep.consistent);
            rec.set("relative-gap-upper", &rep.relative_gap_upper);
            rec.set("no-universal-possible", rep.no_universal_possible);
            rec.emit(cli.json);
            if rep.consistent {
                Ok(0)
            } else {
                Err(Error::InvariantViolation(
                    "Siegel identity enclosure does not contain the exact sum".into(),
                ))
            }
        }
        Cmd::Represent { field, form, alpha } => {
            let f = resolve_field(field)?;
            let q = uqf_core::presets::parse_form(form)?;
            let a = parse_element(&f, alpha)?;
            match uqf_core::represent::represents(&q, &a, &f)? {
                Some(v) => {
                    let mut rec = Record::new("represent");
                    rec.set("alpha", a.to_string());
                    rec.set("represented", true);
                    rec.set("witness", elements_str(&v));
                    rec.emit(cli.json);
                    Ok(0)
                }
                None => {
                    let mut rec = Record::new("represent");
                    rec.set("alpha", a.to_string());
                    rec.set("represented", false);
                    rec.emit(cli.json);
                    Ok(1)
                }
            }
        }
        Cmd::UniversalScan {
            field,
            form,
            trace_bound,
        } => {
            let f = resolve_field(field)?;
            let q = uqf_core::presets::parse_form(form)?;
            let rep = uqf_core::represent::universal_scan(&q, &f, &BigInt::from(*trace_bound))?;
            let mut rec = Record::new("universal-scan");
            rec.set("field", &f.label);
            rec.set("form", form_literal(&q));
            rec.set("delta", rep.delta.to_string());
            rec.set("tensor-min", rep.tensor_min.to_string());
            rec.set("prop44-instances", rep.prop44_instances);
            rec.set(
                "nonsquare-unit",
                rep.nonsquare_unit
                    .as_ref()
                    .map(|u| u.to_string())
                    .unwrap_or("none".into()),
            );
            let code = match &rep.outcome {
                ScanOutcome::AllRepresented {
                    trace_bound,
                    checked,
                } => {
                    rec.set("outcome", "all-represented");
                    rec.set("trace-bound", trace_bound.to_string());
                    rec.set("checked", *checked);
                    0
                }
                ScanOutcome::NotRepresented {
                    alpha,
                    tensor_value,
                    enumerated,
                } => {
                    rec.set("outcome", "not-represented");
                    rec.set("alpha", alpha.to_string());
                    rec.set("tensor-value", tensor_value.to_string());
                    rec.set("enumerated", *enumerated);
                    1
                }
            };
            rec.emit(cli.json);
            Ok(code)
        }
        Cmd::Lift {
            field,
            form,
            pythagoras_upper,
            norm_bound,
            trace_bound,
            scan_bound,
        } => {
            let f = resolve_field(field)?;
            let q = uqf_core::presets::parse_form(form)?;
            let classes = uqf_core::indecomp::indecomposable_classes(
                &f,
                &BigInt::from(*norm_bound),
                &BigInt::from(*trace_bound),
            )?;
            let lifted = uqf_core::represent::build_lifted_universal(
                &q,
                &f,
                *pythagoras_upper,
                &classes.classes,
            )?;
            let mut rec = Record::new("lift");
            rec.set("field", &f.label);
            rec.set("base-form", form_literal(&q));
            rec.set("classes", classes.classes.len());
            rec.set("pythagoras-upper", *pythagoras_upper);
            rec.set("multiplicity", classes.classes.len() * pythagoras_upper);
            rec.set("rank", lifted.rank);
            rec.set("form", form_literal(&lifted));
            rec.emit(cli.json);
            if let Some(sb) = scan_bound {
                let srep =
                    uqf_core::represent::universal_scan(&lifted, &f, &BigInt::from(*sb))?;
                let mut line = Record::new("lift-scan");
                match &srep.outcome {
                    ScanOutcome::AllRepresented { checked, .. } => {
                        line.set("outcome", "all-represented");
                        line.set("checked", *checked);
                        line.emit(cli.json);
                        return Ok(0);
                    }
                    ScanOutcome::NotRepresented { alpha, .. } => {
                        line.set("outcome", "not-represented");
                        line.set("alpha", alpha.to_string());
                        line.emit(cli.json);
                        return Ok(1);
                    }
                }
            }
            Ok(0)
        }
        Cmd::Selftest => selftest::run(cli.json),
    }
}
