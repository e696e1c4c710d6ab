//! Laurent polynomials in `t` with exact rational coefficients, and square matrices of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::TransitionError;

/// Finitely supported `Σ c_k t^k`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn add_term(&mut self, exp: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, k))` when the polynomial is `c t^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().expect("one term");
            Some((c.clone(), *e))
        } else {
            None
        }
    }

    /// Multiplication by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + m, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let var = match *e {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            if var.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{abs} {var}")?;
            }
        }
        Ok(())
    }
}

/// Square matrix of Laurent polynomials whose determinant is a unit `c t^k` of the
/// overlap ring, so that it is a transition function on the two-chart cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    n: usize,
    entries: Vec<LaurentPoly>,
    det: (BigRational, i64),
}

impl LaurentMatrix {
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, TransitionError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(TransitionError::NotSquare);
        }
        let entries: Vec<LaurentPoly> = rows.into_iter().flatten().collect();
        let d = determinant(n, &entries);
        let det = d
            .as_monomial()
            .ok_or_else(|| TransitionError::NonMonomialDeterminant(d.to_string()))?;
        Ok(Self { n, entries, det })
    }

    /// `diag(t^{d_1}, ..., t^{d_n})`.
    pub fn diagonal(degrees: &[i64]) -> Self {
        let n = degrees.len();
        assert!(n > 0, "empty diagonal");
        let mut entries = vec![LaurentPoly::zero(); n * n];
        for (i, d) in degrees.iter().enumerate() {
            entries[i * n + i] = LaurentPoly::t_pow(*d);
        }
        Self {
            n,
            entries,
            det: (BigRational::one(), degrees.iter().sum()),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[LaurentPoly]> {
        self.entries.chunks(self.n)
    }

    /// The determinant as `(c, k)` meaning `c t^k`.
    pub fn det_monomial(&self) -> (&BigRational, i64) {
        (&self.det.0, self.det.1)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::min_exp).min()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::max_exp).max()
    }

    /// `t^m · M`.
    pub fn twist(&self, m: i64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|p| p.shift(m)).collect(),
            det: (self.det.0.clone(), self.det.1 + m * self.n as i64),
        }
    }

    pub fn mul(&self, other: &LaurentMatrix) -> Result<LaurentMatrix, TransitionError> {
        if self.n != other.n {
            return Err(TransitionError::NotSquare);
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    let prod = self.get(i, k) * other.get(k, j);
                    acc = &acc + &prod;
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            n,
            entries,
            det: (&self.det.0 * &other.det.0, self.det.1 + other.det.1),
        })
    }

    /// Exact inverse `adj(M) / (c t^k)`.
    pub fn inverse(&self) -> LaurentMatrix {
        let n = self.n;
        let (c, k) = (&self.det.0, self.det.1);
        let inv_c = c.recip();
        let mut entries = vec![LaurentPoly::zero(); n * n];
        if n == 1 {
            entries[0] = LaurentPoly::monomial(inv_c.clone(), -k);
        } else {
            for i in 0..n {
                for j in 0..n {
                    let minor = minor_entries(n, &self.entries, i, j);
                    let mut cof = determinant(n - 1, &minor);
                    if (i + j) % 2 == 1 {
                        cof = -&cof;
                    }
                    // adjugate is the transposed cofactor matrix
                    entries[j * n + i] = cof.shift(-k).scale(&inv_c);
                }
            }
        }
        Self {
            n,
            entries,
            det: (inv_c, -k),
        }
    }

    pub fn transpose(&self) -> LaurentMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).clone());
            }
        }
        Self {
            n,
            entries,
            det: self.det.clone(),
        }
    }
}

fn minor_entries(n: usize, entries: &[LaurentPoly], row: usize, col: usize) -> Vec<LaurentPoly> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for i in (0..n).filter(|&i| i != row) {
        for j in (0..n).filter(|&j| j != col) {
            out.push(entries[i * n + j].clone());
        }
    }
    out
}

/// Determinant by Laplace expansion over column subsets, `O(2^n n)` products.
pub(crate) fn determinant(n: usize, entries: &[LaurentPoly]) -> LaurentPoly {
    let mut table: Vec<Option<LaurentPoly>> = vec![None; 1 << n];
    table[0] = Some(LaurentPoly::one());
    for mask in 0usize..(1 << n) {
        let Some(partial) = table[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            table[mask] = Some(partial);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let entry = &entries[row * n + col];
            if entry.is_zero() {
                continue;
            }
            // sign from the number of used columns to the right of `col`
            let inversions = (mask >> (col + 1)).count_ones();
            let mut term = &partial * entry;
            if inversions % 2 == 1 {
                term = -&term;
            }
            let next = mask | (1 << col);
            table[next] = Some(match table[next].take() {
                Some(acc) => &acc + &term,
                None => term,
            });
        }
    }
    table[(1 << n) - 1].take().unwrap_or_default()
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, p) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}
