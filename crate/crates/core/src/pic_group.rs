//! Finitely generated abelian groups in invariant-factor form.
//!
//! These stand in for the Picard group of a curve. A group is `Z^r x Z/m1 x ... x Z/mk`
//! with `m1 | m2 | ... | mk` and every `mi >= 2`; elements carry one integer per
//! free generator and one residue per torsion factor.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::PicError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PicGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PicElement {
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
}

impl PicElement {
    pub fn free_part(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion_part(&self) -> &[BigInt] {
        &self.torsion
    }

    /// All components, free ones first.
    pub fn components(&self) -> impl Iterator<Item = &BigInt> {
        self.free.iter().chain(self.torsion.iter())
    }
}

impl fmt::Display for PicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components().map(|c| c.to_string()).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

impl PicGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, PicError> {
        for (i, m) in torsion.iter().enumerate() {
            if *m < BigInt::from(2) {
                return Err(PicError::BadInvariant(m.clone()));
            }
            if i > 0 && !m.is_multiple_of(&torsion[i - 1]) {
                return Err(PicError::NotDivisibilityChain {
                    lower: torsion[i - 1].clone(),
                    upper: m.clone(),
                });
            }
        }
        Ok(Self { free_rank, torsion })
    }

    /// The infinite cyclic group, the Picard group of the projective line.
    pub fn integers() -> Self {
        Self {
            free_rank: 1,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_invariants(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn num_components(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Group order, `None` when the free rank is positive.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |acc, m| acc * m))
    }

    /// Builds an element, reducing torsion components into `[0, m_i)`.
    pub fn element(&self, free: Vec<BigInt>, torsion: Vec<BigInt>) -> Result<PicElement, PicError> {
        if free.len() != self.free_rank || torsion.len() != self.torsion.len() {
            return Err(PicError::ShapeMismatch {
                expected: self.num_components(),
                found: free.len() + torsion.len(),
            });
        }
        let torsion = torsion.iter().zip(&self.torsion).map(|(x, m)| x.mod_floor(m)).collect();
        Ok(PicElement { free, torsion })
    }

    /// Builds an element from a flat component list in declared order.
    pub fn element_from_components(&self, comps: &[BigInt]) -> Result<PicElement, PicError> {
        if comps.len() != self.num_components() {
            return Err(PicError::ShapeMismatch {
                expected: self.num_components(),
                found: comps.len(),
            });
        }
        let (free, tors) = comps.split_at(self.free_rank);
        self.element(free.to_vec(), tors.to_vec())
    }

    pub fn parse_element(&self, text: &str) -> Result<PicElement, PicError> {
        let text = text.trim();
        let comps: Vec<BigInt> = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<BigInt>()
                        .map_err(|_| PicError::Parse(format!("bad element component `{}`", s.trim())))
                })
                .collect::<Result<_, _>>()?
        };
        if comps.is_empty() && self.num_components() == 0 {
            return self.element(Vec::new(), Vec::new());
        }
        self.element_from_components(&comps)
    }

    pub fn identity(&self) -> PicElement {
        PicElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// `true` when `e` has this group's shape and reduced torsion.
    pub fn contains(&self, e: &PicElement) -> bool {
        e.free.len() == self.free_rank
            && e.torsion.len() == self.torsion.len()
            && e.torsion
                .iter()
                .zip(&self.torsion)
                .all(|(x, m)| !x.is_negative() && x < m)
    }

    fn check(&self, e: &PicElement) -> Result<(), PicError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(PicError::ShapeMismatch {
                expected: self.num_components(),
                found: e.free.len() + e.torsion.len(),
            })
        }
    }

    pub fn add(&self, a: &PicElement, b: &PicElement) -> Result<PicElement, PicError> {
        self.check(a)?;
        self.check(b)?;
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.torsion)
            .map(|((x, y), m)| (x + y).mod_floor(m))
            .collect();
        Ok(PicElement { free, torsion })
    }

    pub fn neg(&self, a: &PicElement) -> Result<PicElement, PicError> {
        self.scale(&BigInt::from(-1), a)
    }

    pub fn sub(&self, a: &PicElement, b: &PicElement) -> Result<PicElement, PicError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// `k·a`, the `k`-th tensor power written additively.
    pub fn scale(&self, k: &BigInt, a: &PicElement) -> Result<PicElement, PicError> {
        self.check(a)?;
        let free = a.free.iter().map(|x| k * x).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&self.torsion)
            .map(|(x, m)| (k * x).mod_floor(m))
            .collect();
        Ok(PicElement { free, torsion })
    }

    /// Finds some `x` with `k·x = e`, or `None` when `e` is not a `k`-th multiple.
    ///
    /// Free coordinates need `k | e_i`; the torsion coordinate `i` needs
    /// `gcd(k, m_i) | e_i` and is solved by inverting `k/g` modulo `m_i/g`.
    pub fn divisible_by(&self, e: &PicElement, k: &BigInt) -> Result<Option<PicElement>, PicError> {
        self.check(e)?;
        if !k.is_positive() {
            return Err(PicError::NonPositiveDivisor(k.clone()));
        }
        let mut free = Vec::with_capacity(e.free.len());
        for x in &e.free {
            let (q, r) = x.div_mod_floor(k);
            if !r.is_zero() {
                return Ok(None);
            }
            free.push(q);
        }
        let mut torsion = Vec::with_capacity(e.torsion.len());
        for (x, m) in e.torsion.iter().zip(&self.torsion) {
            match solve_linear_congruence(k, x, m) {
                Some(sol) => torsion.push(sol),
                None => return Ok(None),
            }
        }
        Ok(Some(PicElement { free, torsion }))
    }
}

/// Smallest nonnegative `x` with `k x ≡ e (mod m)`, if any.
fn solve_linear_congruence(k: &BigInt, e: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = k.gcd(m);
    if !e.is_multiple_of(&g) {
        return None;
    }
    let m_red = m / &g;
    let k_red = (k / &g).mod_floor(&m_red);
    let e_red = (e / &g).mod_floor(&m_red);
    if m_red.is_one() {
        return Some(BigInt::zero());
    }
    // k_red is a unit modulo m_red
    let ext = k_red.extended_gcd(&m_red);
    debug_assert!(ext.gcd.is_one());
    Some((ext.x * e_red).mod_floor(&m_red))
}

impl fmt::Display for PicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z/{m}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl FromStr for PicGroup {
    type Err = PicError;

    /// Parses `Z^r x Z/m1 x ... x Z/mk`; `0` is the trivial group.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return PicGroup::new(0, Vec::new());
        }
        let mut free_rank = 0usize;
        let mut torsion = Vec::new();
        for factor in s.split('x') {
            let factor: String = factor.chars().filter(|c| !c.is_whitespace()).collect();
            if let Some(m) = factor.strip_prefix("Z/") {
                let m = m
                    .parse::<BigInt>()
                    .map_err(|_| PicError::Parse(format!("bad torsion factor `{factor}`")))?;
                torsion.push(m);
            } else if factor == "Z" {
                if !torsion.is_empty() {
                    return Err(PicError::Parse("free factors must precede torsion factors".into()));
                }
                free_rank += 1;
            } else if let Some(r) = factor.strip_prefix("Z^") {
                if !torsion.is_empty() {
                    return Err(PicError::Parse("free factors must precede torsion factors".into()));
                }
                free_rank += r
                    .parse::<usize>()
                    .map_err(|_| PicError::Parse(format!("bad free rank `{factor}`")))?;
            } else {
                return Err(PicError::Parse(format!("unrecognised factor `{factor}`")));
            }
        }
        PicGroup::new(free_rank, torsion)
    }
}
