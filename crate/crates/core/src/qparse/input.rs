//! Problem description shared by the CLI, the Python bindings and JSON input files.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;
use crate::qparse::parser::{parse_quadric, parse_scalar};
use crate::symlin::{ComplexSymMatrix, MAX_N};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected json or text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Flags {
    pub format: Format,
    pub dump_pages: bool,
    /// Overrides the default `b_0(C) >= 1` filter (on for pencils with `n >= 2`).
    pub assume_nonempty: Option<bool>,
    pub seed: u64,
    pub max_n: usize,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            format: Format::Text,
            dump_pages: false,
            assume_nonempty: None,
            seed: 0,
            max_n: MAX_N,
        }
    }
}

/// A matrix entry: `["re", "im"]` rational strings or one Gaussian literal such as `"2-3i"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntry {
    Pair([String; 2]),
    Literal(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuadricSource {
    Text(String),
    Matrix(Vec<Vec<MatrixEntry>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSpec {
    pub n: usize,
    pub quadrics: Vec<QuadricSource>,
    #[serde(default)]
    pub flags: Flags,
}

fn parse_entry(entry: &MatrixEntry) -> Result<GaussianRational> {
    match entry {
        MatrixEntry::Literal(s) => parse_scalar(s),
        MatrixEntry::Pair([re_text, im_text]) => {
            let re = parse_scalar(re_text)?;
            let im = parse_scalar(im_text)?;
            if !re.im.is_zero() || !im.im.is_zero() {
                return Err(Error::BadCoefficient(format!("[{re_text:?}, {im_text:?}]")));
            }
            Ok(GaussianRational::new(re.re, im.re))
        }
    }
}

impl InputSpec {
    pub fn from_texts(n: usize, quadrics: &[&str]) -> Self {
        InputSpec {
            n,
            quadrics: quadrics
                .iter()
                .map(|q| QuadricSource::Text(q.to_string()))
                .collect(),
            flags: Flags::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.quadrics.is_empty() || self.quadrics.len() > 2 {
            return Err(Error::Input(format!(
                "expected one or two quadrics, got {}",
                self.quadrics.len()
            )));
        }
        if self.n > self.flags.max_n {
            return Err(Error::TooLarge {
                n: self.n,
                max: self.flags.max_n,
            });
        }
        Ok(())
    }

    /// Gram matrices in input order; `None` marks a quadric that is identically zero.
    pub fn matrices(&self) -> Result<Vec<Option<ComplexSymMatrix>>> {
        self.validate()?;
        self.quadrics
            .iter()
            .map(|q| {
                let m = match q {
                    QuadricSource::Text(text) => match parse_quadric(text, self.n) {
                        Err(Error::ZeroQuadric) => return Ok(None),
                        other => other?,
                    },
                    QuadricSource::Matrix(rows) => {
                        if rows.len() != self.n + 1 {
                            return Err(Error::DimensionMismatch {
                                expected: self.n + 1,
                                found: rows.len(),
                            });
                        }
                        let parsed = rows
                            .iter()
                            .map(|row| {
                                if row.len() != self.n + 1 {
                                    return Err(Error::DimensionMismatch {
                                        expected: self.n + 1,
                                        found: row.len(),
                                    });
                                }
                                row.iter().map(parse_entry).collect::<Result<Vec<_>>>()
                            })
                            .collect::<Result<Vec<_>>>()?;
                        ComplexSymMatrix::from_rows(parsed)?
                    }
                };
                Ok((!m.is_zero()).then_some(m))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{gi, rational, real};

    #[test]
    fn json_matrix_input() {
        let spec = InputSpec::from_json(
            r#"{"n": 1, "quadrics": [[[["1","0"], "1/2"], ["1/2", "2-3i"]], "z0*z1"],
                "flags": {"format": "json", "seed": 4}}"#,
        )
        .unwrap();
        assert_eq!(spec.flags.format, Format::Json);
        assert_eq!(spec.flags.seed, 4);
        assert_eq!(spec.flags.max_n, MAX_N);
        let ms = spec.matrices().unwrap();
        let m = ms[0].as_ref().unwrap();
        assert_eq!(m.get(0, 1), &real(rational(1, 2)));
        assert_eq!(m.get(1, 1), &gi(2, -3));
        assert_eq!(ms[1].as_ref().unwrap().get(1, 0), &real(rational(1, 2)));
    }

    #[test]
    fn rejects_bad_input() {
        let asym =
            InputSpec::from_json(r#"{"n": 1, "quadrics": [[["1","2"],["3","1"]]]}"#).unwrap();
        assert_eq!(asym.matrices(), Err(Error::NotSymmetric));
        let wide = InputSpec::from_texts(3, &["z0^2", "z1^2", "z2^2"]);
        assert!(matches!(wide.matrices(), Err(Error::Input(_))));
        let mut big = InputSpec::from_texts(3, &["z0^2"]);
        big.flags.max_n = 2;
        assert_eq!(big.matrices(), Err(Error::TooLarge { n: 3, max: 2 }));
        let float = InputSpec::from_json(r#"{"n": 0, "quadrics": [[[["0.5","0"]]]]}"#).unwrap();
        assert!(matches!(float.matrices(), Err(Error::BadCoefficient(_))));
    }

    #[test]
    fn zero_quadric_is_none() {
        let spec = InputSpec::from_texts(2, &["z0^2", ""]);
        let ms = spec.matrices().unwrap();
        assert!(ms[0].is_some() && ms[1].is_none());
    }
}
