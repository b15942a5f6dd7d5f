//! Shipped benchmark fields and named form presets.

use crate::error::{Error, Result};
use crate::field::{load_field, Field, FieldSpec};
use crate::zform::ZForm;
use num_bigint::BigInt;

macro_rules! field_file {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../fields/", $name, ".field")))
    };
}

pub const FIELD_FILES: [(&str, &str); 9] = [
    field_file!("q2"),
    field_file!("q3"),
    field_file!("q5"),
    field_file!("q6"),
    field_file!("q7"),
    field_file!("zeta7"),
    field_file!("quartic725"),
    field_file!("zeta11"),
    field_file!("zeta11-std"),
];

/// Load one of the shipped benchmark fields by label.
pub fn benchmark_field(name: &str) -> Result<Field> {
    let (_, text) = FIELD_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::SpecParse(format!("unknown benchmark field `{name}`")))?;
    load_field(&FieldSpec::parse(text)?)
}

fn gram(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Named presets: `sum-squares:r`, `deutsch4`, `a2`, `deutsch-pair`,
/// or a doubled-Gram literal `rank:[entries row-major]`.
pub fn parse_form(s: &str) -> Result<ZForm> {
    let s = s.trim();
    if let Some(r) = s.strip_prefix("sum-squares:") {
        let r: usize = r
            .parse()
            .map_err(|_| Error::SpecParse(format!("bad rank in `{s}`")))?;
        if r == 0 {
            return Err(Error::SpecParse("rank must be positive".into()));
        }
        return ZForm::identity(r);
    }
    match s {
        "a2" => return ZForm::from_doubled(gram(&[&[2, 1], &[1, 2]])),
        "deutsch4" => {
            return ZForm::from_doubled(gram(&[
                &[2, 1, 1, 1],
                &[1, 2, 0, 0],
                &[1, 0, 2, 0],
                &[1, 0, 0, 2],
            ]))
        }
        "deutsch-pair" => {
            return ZForm::from_doubled(gram(&[
                &[2, 1, 0, 0],
                &[1, 2, 0, 0],
                &[0, 0, 2, 1],
                &[0, 0, 1, 2],
            ]))
        }
        _ => {}
    }
    if let Some((rank, rest)) = s.split_once(':') {
        let rank: usize = rank
            .parse()
            .map_err(|_| Error::SpecParse(format!("bad form spec `{s}`")))?;
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::SpecParse(format!("bad form literal `{s}`")))?;
        let entries: Vec<BigInt> = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::SpecParse(format!("bad entry `{t}`")))
            })
            .collect::<Result<_>>()?;
        if entries.len() != rank * rank {
            return Err(Error::SpecParse(format!(
                "expected {} entries, got {}",
                rank * rank,
                entries.len()
            )));
        }
        let rows: Vec<Vec<BigInt>> = entries.chunks(rank).map(|c| c.to_vec()).collect();
        return ZForm::from_doubled(rows);
    }
    Err(Error::SpecParse(format!("unknown form `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!(parse_form("sum-squares:3").unwrap().rank, 3);
        assert_eq!(parse_form("deutsch4").unwrap().rank, 4);
        assert!(parse_form("a2").unwrap().is_positive_definite());
        assert!(!parse_form("a2").unwrap().classical);
        assert!(parse_form("deutsch-pair").unwrap().rank == 4);
        let lit = parse_form("2:[2,0,0,2]").unwrap();
        assert_eq!(lit, ZForm::identity(2).unwrap());
        assert!(parse_form("nonsense").is_err());
    }

    #[test]
    fn all_benchmark_fields_load() {
        for (name, _) in FIELD_FILES {
            benchmark_field(name).unwrap();
        }
    }
}
