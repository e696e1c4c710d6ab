//! Concordance classification: canonical forms, the decision, and certificate
//! generation and replay.
//!
//! A bundle of rank `n` is concordant to `O^{n-1} + det`. The certificate mirrors the
//! inductive argument: twist by the least `m` making `E(m)` and `det(E)(m)` globally
//! generated, split off `O(-m)` as a sub line bundle, normalize the rank `n-1` quotient
//! recursively under the common summand `O(-m)`, then bridge `O(-m) + L(m)` back to
//! `O + L`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bundle::SplitBundle;
use crate::certificate::{ConcordanceCertificate, Move};
use crate::error::PicError;
use crate::pic_group::{PicElement, PicGroup};
use crate::transition::{cech_basis, family, splitting_type, ExtClass};

/// Determinant of a bundle: an integer degree on the projective line, or a class in an
/// abstract Picard group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Determinant {
    Degree(i64),
    Pic(PicElement),
}

/// The complete concordance invariant `(rank, det)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BundleClass {
    rank: usize,
    det: Determinant,
}

impl BundleClass {
    pub fn new(rank: usize, det: Determinant) -> Option<Self> {
        (rank >= 1).then_some(Self { rank, det })
    }

    pub fn of(e: &SplitBundle) -> Self {
        Self {
            rank: e.rank(),
            det: Determinant::Degree(e.det()),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn det(&self) -> &Determinant {
        &self.det
    }
}

impl fmt::Display for BundleClass {
    /// `O^{n-1} + L` in the notation of the canonical representative.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trivial = match self.rank - 1 {
            0 => String::new(),
            1 => "O+".to_string(),
            k => format!("O^{k}+"),
        };
        match &self.det {
            Determinant::Degree(0) => write!(f, "{trivial}O"),
            Determinant::Degree(d) => write!(f, "{trivial}O({d})"),
            Determinant::Pic(p) => write!(f, "{trivial}L({p})"),
        }
    }
}

/// Whether two abstract bundle classes over a curve with Picard group `group` are
/// concordant: equal rank and equal determinant.
pub fn concordant_classes(group: &PicGroup, a: &BundleClass, b: &BundleClass) -> Result<bool, PicError> {
    for c in [a, b] {
        if let Determinant::Pic(p) = &c.det {
            if !group.contains(p) {
                return Err(PicError::ShapeMismatch {
                    expected: group.num_components(),
                    found: p.components().count(),
                });
            }
        }
    }
    Ok(a.rank == b.rank && a.det == b.det)
}

/// `O^{n-1} + O(det E)`.
pub fn canonical_form(e: &SplitBundle) -> SplitBundle {
    let mut degrees = vec![0; e.rank() - 1];
    degrees.push(e.det());
    SplitBundle::new(degrees).expect("rank is at least one")
}

pub fn concordant(e: &SplitBundle, f: &SplitBundle) -> bool {
    e.rank() == f.rank() && e.det() == f.det()
}

/// Builds a certificate from `e` to `canonical_form(e)`.
pub fn generate_certificate(e: &SplitBundle) -> ConcordanceCertificate {
    let end = canonical_form(e);
    if e.rank() == 1 {
        return ConcordanceCertificate {
            start: e.clone(),
            end,
            moves: Vec::new(),
        };
    }
    let line = e.det();
    let m = e.min_gg_twist();
    let sub = SplitBundle::line(-m);
    let quotient = quotient_after_section(e, m);
    let mid = sub.direct_sum(&quotient);
    let class = if quotient.rank() == 1 {
        rank_two_witness(e, &sub, &quotient)
    } else {
        None
    };

    let mut moves = vec![Move::Extension {
        from: e.clone(),
        to: mid.clone(),
        sub: sub.clone(),
        quotient: quotient.clone(),
        m,
        class,
    }];

    let normalized = sub.direct_sum(&canonical_form(&quotient));
    if quotient.rank() >= 2 {
        let inner = generate_certificate(&quotient);
        if !inner.moves.is_empty() {
            moves.push(Move::Congruence {
                from: mid,
                to: normalized.clone(),
                common: sub.clone(),
                inner: Box::new(inner),
            });
        }
    }
    if normalized != end {
        moves.push(Move::TwistBridge {
            from: normalized,
            to: end.clone(),
            m,
            line,
        });
    }
    ConcordanceCertificate {
        start: e.clone(),
        end,
        moves,
    }
}

/// Quotient `E'` in `0 -> O(-m) -> E -> E' -> 0` for an explicit nowhere-vanishing section
/// of `E(m) = O(b_1) + ... + O(b_n)` (all `b_i >= 0`): the unit section of `O(b_1)` when
/// `b_1 = 0`, otherwise `(x^{b_1}, y^{b_2}, 0, ...)`, whose cokernel is
/// `O(b_1 + b_2) + O(b_3) + ...`. Untwisted, `det E' = det E + m`.
fn quotient_after_section(e: &SplitBundle, m: i64) -> SplitBundle {
    let d = e.degrees();
    if d[0] + m == 0 {
        return e.remove_summands(&[d[0]]).expect("rank at least two");
    }
    let mut rest = vec![d[0] + d[1] + m];
    rest.extend_from_slice(&d[2..]);
    SplitBundle::new(rest).expect("nonempty")
}

/// A class in `Ext^1(quotient, sub)` whose extension bundle is `e`, checked by computing
/// its splitting type. Searches the zero class and the Čech basis vectors.
fn rank_two_witness(e: &SplitBundle, sub: &SplitBundle, quotient: &SplitBundle) -> Option<ExtClass> {
    let zero = ExtClass::zero(sub.clone(), quotient.clone());
    if &sub.direct_sum(quotient) == e {
        return Some(zero);
    }
    let dim = cech_basis(sub, quotient).len();
    (0..dim)
        .filter_map(|i| ExtClass::basis_vector(sub.clone(), quotient.clone(), i, BigRational::one()).ok())
        .find(|c| &splitting_type(&family(c, &BigRational::one())) == e)
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    /// The chain does not connect: some move starts where the previous one did not end.
    #[error("malformed chain at {location}: expected {expected}, found {found}")]
    Malformed {
        location: String,
        expected: SplitBundle,
        found: SplitBundle,
    },
    /// A move is well formed but mathematically invalid.
    #[error("invalid move {}: {violation}", fmt_path(.path))]
    Invalid { path: Vec<usize>, violation: Violation },
}

fn fmt_path(path: &[usize]) -> String {
    path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("rank changes from {0} to {1}")]
    RankChanged(usize, usize),
    #[error("determinant mismatch: {0} vs {1}")]
    DeterminantChanged(i64, i64),
    #[error("sub-bundle legality: {0}")]
    SubBundleLegality(String),
    #[error("quotient: {0}")]
    Quotient(String),
    #[error("twist bridge: {0}")]
    Bridge(String),
    #[error("congruence: {0}")]
    Congruence(String),
    #[error("extension fiber: {0}")]
    Fiber(String),
}

/// Replays a certificate, returning the first violated condition.
pub fn verify_certificate(cert: &ConcordanceCertificate) -> Result<(), CertificateError> {
    verify_at(cert, &[])
}

fn verify_at(cert: &ConcordanceCertificate, prefix: &[usize]) -> Result<(), CertificateError> {
    check_chain(cert, prefix)?;
    for (i, mv) in cert.moves.iter().enumerate() {
        let mut path = prefix.to_vec();
        path.push(i);
        let invalid = |violation| CertificateError::Invalid {
            path: path.clone(),
            violation,
        };
        let (from, to) = (mv.from(), mv.to());
        if from.rank() != to.rank() {
            return Err(invalid(Violation::RankChanged(from.rank(), to.rank())));
        }
        if from.det() != to.det() {
            return Err(invalid(Violation::DeterminantChanged(from.det(), to.det())));
        }
        match mv {
            Move::Extension {
                from,
                to,
                sub,
                quotient,
                m,
                class,
            } => check_extension(from, to, sub, quotient, *m, class.as_ref()).map_err(invalid)?,
            Move::TwistBridge { from, to, m, line } => check_bridge(from, to, *m, *line).map_err(invalid)?,
            Move::Congruence {
                from,
                to,
                common,
                inner,
            } => {
                if &common.direct_sum(&inner.start) != from || &common.direct_sum(&inner.end) != to {
                    return Err(invalid(Violation::Congruence(format!(
                        "{from} ~ {to} is not {common} plus the nested chain {} ~ {}",
                        inner.start, inner.end
                    ))));
                }
                verify_at(inner, &path)?;
            }
        }
    }
    Ok(())
}

fn check_chain(cert: &ConcordanceCertificate, prefix: &[usize]) -> Result<(), CertificateError> {
    let here = |what: String| {
        if prefix.is_empty() {
            what
        } else {
            format!("{what} of nested chain {}", fmt_path(prefix))
        }
    };
    let mut current = &cert.start;
    for (i, mv) in cert.moves.iter().enumerate() {
        if mv.from() != current {
            return Err(CertificateError::Malformed {
                location: here(format!("start of move {i}")),
                expected: current.clone(),
                found: mv.from().clone(),
            });
        }
        current = mv.to();
    }
    if current != &cert.end {
        return Err(CertificateError::Malformed {
            location: here("final endpoint".to_string()),
            expected: current.clone(),
            found: cert.end.clone(),
        });
    }
    Ok(())
}

fn check_extension(
    from: &SplitBundle,
    to: &SplitBundle,
    sub: &SplitBundle,
    quotient: &SplitBundle,
    m: i64,
    class: Option<&ExtClass>,
) -> Result<(), Violation> {
    if sub.rank() != 1 || sub.degrees()[0] != -m {
        return Err(Violation::SubBundleLegality(format!("{sub} is not O({})", -m)));
    }
    if from.rank() == 1 {
        // a line bundle only has itself as a locally free quotient by a line bundle
        return if from == to {
            Ok(())
        } else {
            Err(Violation::SubBundleLegality(format!("rank-one step {from} ~ {to}")))
        };
    }
    let twisted = from.twist(m);
    if !twisted.globally_generated() {
        return Err(Violation::SubBundleLegality(format!(
            "{from} twisted by {m} is {twisted}, not globally generated"
        )));
    }
    if quotient.rank() + 1 != from.rank() {
        return Err(Violation::Quotient(format!(
            "rank {} for a bundle of rank {}",
            quotient.rank(),
            from.rank()
        )));
    }
    if quotient.det() != from.det() + m {
        return Err(Violation::Quotient(format!(
            "determinant {} but Whitney requires {}",
            quotient.det(),
            from.det() + m
        )));
    }
    if &sub.direct_sum(quotient) != to {
        return Err(Violation::Quotient(format!("{to} is not {sub} + {quotient}")));
    }
    if let Some(c) = class {
        if c.sub() != sub || c.quotient() != quotient {
            return Err(Violation::Fiber(format!(
                "class lives in Ext^1({}, {}), move claims Ext^1({quotient}, {sub})",
                c.quotient(),
                c.sub()
            )));
        }
        let split = splitting_type(&family(c, &BigRational::zero()));
        if &split != to {
            return Err(Violation::Fiber(format!("fiber at 0 is {split}, expected {to}")));
        }
        let general = splitting_type(&family(c, &BigRational::one()));
        if &general != from {
            return Err(Violation::Fiber(format!("fiber at 1 is {general}, expected {from}")));
        }
    }
    Ok(())
}

fn check_bridge(from: &SplitBundle, to: &SplitBundle, m: i64, line: i64) -> Result<(), Violation> {
    if m < 0 || line + m < 0 {
        return Err(Violation::Bridge(format!(
            "O({m}) and O({}) need sections without common zeros",
            line + m
        )));
    }
    let twisted = [-m, line + m];
    let plain = [0, line];
    let forward = rest_after(from, &twisted).zip(rest_after(to, &plain));
    let backward = rest_after(from, &plain).zip(rest_after(to, &twisted));
    let matches = |pair: Option<(Vec<i64>, Vec<i64>)>| pair.is_some_and(|(a, b)| a == b);
    if matches(forward) || matches(backward) {
        Ok(())
    } else {
        Err(Violation::Bridge(format!(
            "{from} ~ {to} does not exchange O({}) + O({}) with O + O({line})",
            -m,
            line + m
        )))
    }
}

fn rest_after(b: &SplitBundle, part: &[i64]) -> Option<Vec<i64>> {
    let mut rest = b.degrees().to_vec();
    for d in part {
        let pos = rest.iter().position(|x| x == d)?;
        rest.remove(pos);
    }
    Some(rest)
}

/// Canonical class `O^{n-1} + L` in abstract-curve mode; the class is its own canonical
/// representative, so this only validates `L` against the group.
pub fn canonical_class(group: &PicGroup, rank: usize, det: &PicElement) -> Result<BundleClass, PicError> {
    if !group.contains(det) {
        return Err(PicError::ShapeMismatch {
            expected: group.num_components(),
            found: det.components().count(),
        });
    }
    if rank == 0 {
        return Err(PicError::Parse("rank must be positive".into()));
    }
    Ok(BundleClass {
        rank,
        det: Determinant::Pic(det.clone()),
    })
}
