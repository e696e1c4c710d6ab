//! Vector bundles on the projective line, represented by their splitting type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BundleError, SyntaxError};

/// `O(d_1) + ... + O(d_n)`, degrees kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SplitBundle {
    degrees: Vec<i64>,
}

impl SplitBundle {
    pub fn new(mut degrees: Vec<i64>) -> Result<Self, BundleError> {
        if degrees.is_empty() {
            return Err(BundleError::Empty);
        }
        degrees.sort_unstable();
        Ok(Self { degrees })
    }

    pub fn line(d: i64) -> Self {
        Self { degrees: vec![d] }
    }

    /// `O^n`.
    pub fn trivial(rank: usize) -> Self {
        assert!(rank >= 1, "trivial bundle of rank 0");
        Self { degrees: vec![0; rank] }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn min_degree(&self) -> i64 {
        self.degrees[0]
    }

    pub fn max_degree(&self) -> i64 {
        self.degrees[self.degrees.len() - 1]
    }

    pub fn direct_sum(&self, other: &SplitBundle) -> SplitBundle {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        degrees.sort_unstable();
        SplitBundle { degrees }
    }

    pub fn tensor(&self, other: &SplitBundle) -> SplitBundle {
        let mut degrees: Vec<i64> = self
            .degrees
            .iter()
            .flat_map(|a| other.degrees.iter().map(move |b| a + b))
            .collect();
        degrees.sort_unstable();
        SplitBundle { degrees }
    }

    /// `E ⊗ O(m)`.
    pub fn twist(&self, m: i64) -> SplitBundle {
        SplitBundle {
            degrees: self.degrees.iter().map(|d| d + m).collect(),
        }
    }

    pub fn dual(&self) -> SplitBundle {
        let mut degrees: Vec<i64> = self.degrees.iter().map(|d| -d).collect();
        degrees.sort_unstable();
        SplitBundle { degrees }
    }

    /// Degree of the determinant line bundle.
    pub fn det(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn h0(&self) -> u64 {
        self.degrees.iter().map(|&d| (d + 1).max(0) as u64).sum()
    }

    pub fn h1(&self) -> u64 {
        self.degrees.iter().map(|&d| (-d - 1).max(0) as u64).sum()
    }

    /// Euler characteristic `h0 - h1`.
    pub fn euler_characteristic(&self) -> i64 {
        self.h0() as i64 - self.h1() as i64
    }

    pub fn globally_generated(&self) -> bool {
        self.min_degree() >= 0
    }

    /// Least `m >= 0` with `E(m)` and `det(E)(m)` both globally generated.
    pub fn min_gg_twist(&self) -> i64 {
        (-self.min_degree()).max(-self.det()).max(0)
    }

    /// Removes one copy of each degree of `part`; `None` if `part` is not a sub-multiset
    /// or nothing would remain.
    pub fn remove_summands(&self, part: &[i64]) -> Option<SplitBundle> {
        let mut rest = self.degrees.clone();
        for d in part {
            let pos = rest.iter().position(|x| x == d)?;
            rest.remove(pos);
        }
        if rest.is_empty() {
            None
        } else {
            Some(SplitBundle { degrees: rest })
        }
    }
}

impl TryFrom<Vec<i64>> for SplitBundle {
    type Error = BundleError;

    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        SplitBundle::new(v)
    }
}

impl From<SplitBundle> for Vec<i64> {
    fn from(b: SplitBundle) -> Self {
        b.degrees
    }
}

/// `dim Ext^1(quotient, sub) = h1(sub ⊗ quotient^∨)`.
pub fn ext1_dim(quotient: &SplitBundle, sub: &SplitBundle) -> u64 {
    sub.degrees
        .iter()
        .flat_map(|e| quotient.degrees.iter().map(move |f| (-(e - f) - 1).max(0) as u64))
        .sum()
}

impl fmt::Display for SplitBundle {
    /// Prints in the expression grammar, e.g. `O(-1)+O+O(1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if *d == 0 {
                write!(f, "O")?;
            } else {
                write!(f, "O({d})")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SplitBundle {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::parse::parse_bundle(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(d: &[i64]) -> SplitBundle {
        SplitBundle::new(d.to_vec()).unwrap()
    }

    #[test]
    fn construction_sorts_and_rejects_empty() {
        assert_eq!(b(&[1, -1, 0]).degrees(), &[-1, 0, 1]);
        assert_eq!(SplitBundle::new(vec![]), Err(BundleError::Empty));
    }

    #[test]
    fn sums_and_tensors() {
        assert_eq!(b(&[0]).direct_sum(&b(&[1])), b(&[0, 1]));
        assert_eq!(b(&[-1, 1]).direct_sum(&b(&[0])), b(&[-1, 0, 1]));
        assert_eq!(b(&[-1, 0, 1]).tensor(&b(&[7])), b(&[6, 7, 8]));
        assert_eq!(b(&[2, -5]).tensor(&b(&[0])), b(&[2, -5]));
        assert_eq!(b(&[1, 2]).tensor(&b(&[0, 1])), b(&[1, 2, 2, 3]));
    }

    #[test]
    fn determinant() {
        assert_eq!(b(&[-1, 0, 1]).det(), 0);
        assert_eq!(b(&[2, 3]).det(), 5);
    }

    #[test]
    fn cohomology_dimensions() {
        assert_eq!(b(&[-2]).h1(), 1);
        assert_eq!(b(&[0, 0]).h0(), 2);
        assert_eq!(b(&[0, 0]).h1(), 0);
        assert_eq!(b(&[-5]).h1(), 4);
        assert_eq!(b(&[-1]).h0() + b(&[-1]).h1(), 0);
    }

    #[test]
    fn ext_dimensions() {
        assert_eq!(ext1_dim(&b(&[1]), &b(&[-1])), 1);
        assert_eq!(ext1_dim(&b(&[0]), &b(&[0])), 0);
        assert_eq!(ext1_dim(&b(&[3]), &b(&[-1])), 3);
        assert_eq!(ext1_dim(&b(&[3]), &b(&[0])), 2);
    }

    #[test]
    fn global_generation() {
        assert!(!b(&[-1, 0, 1]).globally_generated());
        assert_eq!(b(&[-1, 0, 1]).min_gg_twist(), 1);
        assert!(b(&[0, 2]).globally_generated());
        assert_eq!(b(&[0, 2]).min_gg_twist(), 0);
        assert_eq!(b(&[-3]).min_gg_twist(), 3);
        // the determinant can dominate: det {-1,-1} = -2
        assert_eq!(b(&[-1, -1]).min_gg_twist(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(b(&[1, -1, 0]).to_string(), "O(-1)+O+O(1)");
        assert_eq!(b(&[0, 0, 0]).to_string(), "O+O+O");
    }

    #[test]
    fn remove_summands() {
        assert_eq!(b(&[-1, 0, 1]).remove_summands(&[1, -1]), Some(b(&[0])));
        assert_eq!(b(&[-1, 0, 1]).remove_summands(&[2]), None);
        assert_eq!(b(&[3]).remove_summands(&[3]), None);
    }
}
