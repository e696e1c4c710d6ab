//! Concordance certificates and their `a1cert/1` JSON encoding.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::SplitBundle;
use crate::parse::parse_rational;
use crate::transition::ExtClass;

pub const FORMAT_TAG: &str = "a1cert/1";

/// One elementary step of a concordance chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// `from` is an extension `0 -> sub -> from -> quotient -> 0` with `sub = O(-m)`,
    /// hence directly concordant to `to = sub + quotient`. `class` is an explicit witness
    /// for the extension; `None` stands for a generic section of `from(m)`.
    Extension {
        from: SplitBundle,
        to: SplitBundle,
        sub: SplitBundle,
        quotient: SplitBundle,
        m: i64,
        class: Option<ExtClass>,
    },
    /// `O(-m) + L(m) + R` to `O + L + R` through `0 -> O(-m) -> O + L -> L(m) -> 0`,
    /// where `line` is the degree of `L`.
    TwistBridge {
        from: SplitBundle,
        to: SplitBundle,
        m: i64,
        line: i64,
    },
    /// `common + E0` to `common + E1`, justified by the nested certificate from `E0` to `E1`.
    Congruence {
        from: SplitBundle,
        to: SplitBundle,
        common: SplitBundle,
        inner: Box<ConcordanceCertificate>,
    },
}

impl Move {
    pub fn from(&self) -> &SplitBundle {
        match self {
            Move::Extension { from, .. } | Move::TwistBridge { from, .. } | Move::Congruence { from, .. } => from,
        }
    }

    pub fn to(&self) -> &SplitBundle {
        match self {
            Move::Extension { to, .. } | Move::TwistBridge { to, .. } | Move::Congruence { to, .. } => to,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Move::Extension { .. } => "extension",
            Move::TwistBridge { .. } => "twistBridge",
            Move::Congruence { .. } => "congruence",
        }
    }
}

/// A chain of moves from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcordanceCertificate {
    pub start: SplitBundle,
    pub end: SplitBundle,
    pub moves: Vec<Move>,
}

impl ConcordanceCertificate {
    /// Total number of moves, counting nested ones.
    pub fn total_moves(&self) -> usize {
        self.moves
            .iter()
            .map(|m| match m {
                Move::Congruence { inner, .. } => 1 + inner.total_moves(),
                _ => 1,
            })
            .sum()
    }

    /// Visits every move, nested ones included, depth first.
    pub fn for_each_move(&self, f: &mut impl FnMut(&Move)) {
        for m in &self.moves {
            f(m);
            if let Move::Congruence { inner, .. } = m {
                inner.for_each_move(f);
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CertDoc::from(self)).expect("certificate documents always serialize")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&CertDoc::from(self)).expect("certificate documents always serialize")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self, FormatError> {
        let doc: CertDoc = serde_json::from_value(value).map_err(|e| FormatError::Json(e.to_string()))?;
        doc.try_into()
    }

    pub fn from_json_str(text: &str) -> Result<Self, FormatError> {
        let doc: CertDoc = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
        doc.try_into()
    }
}

impl fmt::Display for ConcordanceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_moves(f, self, 0)
    }
}

fn write_moves(f: &mut fmt::Formatter<'_>, cert: &ConcordanceCertificate, depth: usize) -> fmt::Result {
    let pad = "  ".repeat(depth);
    if cert.moves.is_empty() {
        return writeln!(f, "{pad}{} (already canonical)", cert.start);
    }
    for mv in &cert.moves {
        match mv {
            Move::Extension {
                from,
                to,
                sub,
                quotient,
                m,
                class,
            } => {
                let witness = match class {
                    Some(c) if c.is_zero() => "split".to_string(),
                    Some(c) => format!(
                        "class [{}]",
                        c.coefficients()
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    None => "generic section".to_string(),
                };
                writeln!(
                    f,
                    "{pad}extension  {from} ~ {to}   (0 -> {sub} -> E -> {quotient} -> 0, m = {m}, {witness})"
                )?;
            }
            Move::TwistBridge { from, to, m, line } => {
                let l = SplitBundle::line(*line);
                writeln!(
                    f,
                    "{pad}bridge     {from} ~ {to}   (0 -> O({}) -> O+{l} -> ..., m = {m})",
                    -m
                )?;
            }
            Move::Congruence {
                from,
                to,
                common,
                inner,
            } => {
                writeln!(f, "{pad}congruence {from} ~ {to}   (common summand {common})")?;
                write_moves(f, inner, depth + 1)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid certificate JSON: {0}")]
    Json(String),
    #[error("unsupported certificate format `{0}`, expected `{FORMAT_TAG}`")]
    Version(String),
    #[error("invalid extension class: {0}")]
    ExtClass(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct CertDoc {
    format: String,
    endpoints: [SplitBundle; 2],
    moves: Vec<MoveDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
enum MoveDoc {
    #[serde(rename_all = "camelCase")]
    Extension {
        from: SplitBundle,
        to: SplitBundle,
        sub: SplitBundle,
        quotient: SplitBundle,
        m: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ext_class: Option<ExtClassDoc>,
    },
    #[serde(rename_all = "camelCase")]
    TwistBridge {
        from: SplitBundle,
        to: SplitBundle,
        m: i64,
        line: i64,
    },
    #[serde(rename_all = "camelCase")]
    Congruence {
        from: SplitBundle,
        to: SplitBundle,
        common_summand: SplitBundle,
        inner: Box<CertDoc>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct ExtClassDoc {
    sub: SplitBundle,
    quotient: SplitBundle,
    coefficients: Vec<String>,
}

impl From<&ConcordanceCertificate> for CertDoc {
    fn from(c: &ConcordanceCertificate) -> Self {
        CertDoc {
            format: FORMAT_TAG.to_string(),
            endpoints: [c.start.clone(), c.end.clone()],
            moves: c.moves.iter().map(MoveDoc::from).collect(),
        }
    }
}

impl From<&Move> for MoveDoc {
    fn from(m: &Move) -> Self {
        match m {
            Move::Extension {
                from,
                to,
                sub,
                quotient,
                m,
                class,
            } => MoveDoc::Extension {
                from: from.clone(),
                to: to.clone(),
                sub: sub.clone(),
                quotient: quotient.clone(),
                m: *m,
                ext_class: class.as_ref().map(|c| ExtClassDoc {
                    sub: c.sub().clone(),
                    quotient: c.quotient().clone(),
                    coefficients: c.coefficients().iter().map(|x| x.to_string()).collect(),
                }),
            },
            Move::TwistBridge { from, to, m, line } => MoveDoc::TwistBridge {
                from: from.clone(),
                to: to.clone(),
                m: *m,
                line: *line,
            },
            Move::Congruence {
                from,
                to,
                common,
                inner,
            } => MoveDoc::Congruence {
                from: from.clone(),
                to: to.clone(),
                common_summand: common.clone(),
                inner: Box::new(CertDoc::from(inner.as_ref())),
            },
        }
    }
}

impl TryFrom<CertDoc> for ConcordanceCertificate {
    type Error = FormatError;

    fn try_from(doc: CertDoc) -> Result<Self, Self::Error> {
        if doc.format != FORMAT_TAG {
            return Err(FormatError::Version(doc.format));
        }
        let [start, end] = doc.endpoints;
        let moves = doc.moves.into_iter().map(Move::try_from).collect::<Result<_, _>>()?;
        Ok(Self { start, end, moves })
    }
}

impl TryFrom<MoveDoc> for Move {
    type Error = FormatError;

    fn try_from(doc: MoveDoc) -> Result<Self, Self::Error> {
        Ok(match doc {
            MoveDoc::Extension {
                from,
                to,
                sub,
                quotient,
                m,
                ext_class,
            } => {
                let class = match ext_class {
                    None => None,
                    Some(c) => {
                        let coefficients = c
                            .coefficients
                            .iter()
                            .map(|s| parse_rational(s))
                            .collect::<Result<Vec<BigRational>, _>>()
                            .map_err(|e| FormatError::ExtClass(e.to_string()))?;
                        Some(
                            ExtClass::new(c.sub, c.quotient, coefficients)
                                .map_err(|e| FormatError::ExtClass(e.to_string()))?,
                        )
                    }
                };
                Move::Extension {
                    from,
                    to,
                    sub,
                    quotient,
                    m,
                    class,
                }
            }
            MoveDoc::TwistBridge { from, to, m, line } => Move::TwistBridge { from, to, m, line },
            MoveDoc::Congruence {
                from,
                to,
                common_summand,
                inner,
            } => Move::Congruence {
                from,
                to,
                common: common_summand,
                inner: Box::new((*inner).try_into()?),
            },
        })
    }
}
