//! Transition cocycles on the standard two-chart cover of the projective line.
//!
//! Conventions: `t` is the coordinate on the chart at zero and `s = 1/t` on the chart at
//! infinity. A transition matrix `M` relates local frames by `v_0(t) = M(t) · v_∞(1/t)`,
//! so `O(d)` has cocycle `t^d` and a global section of the bundle is a polynomial vector
//! `v_∞(s)` for which `M(t) v_∞(1/t)` is again polynomial in `t`.
//!
//! Changing trivializations on the two charts replaces `M` by `A(t) · M · B(1/t)` with
//! `A` invertible over `k[t]` and `B` invertible over `k[1/t]`; the splitting type is
//! the unique diagonal `diag(t^{a_i})` in that double coset.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use crate::bundle::{ext1_dim, SplitBundle};
use crate::error::TransitionError;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::linalg::{self, SparseRow};

/// Position of one Čech basis monomial of `Ext^1(quotient, sub)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CechIndex {
    /// Index into the sub bundle's sorted degrees.
    pub sub: usize,
    /// Index into the quotient bundle's sorted degrees.
    pub quotient: usize,
    /// Exponent `j` of the monomial `t^j`, `e - f + 1 <= j <= -1`.
    pub exponent: i64,
}

/// Čech monomial basis of `Ext^1(quotient, sub) = ⊕ H^1(O(e_i - f_j))`.
///
/// Ordered by sub summand, then quotient summand, then exponent `-1, -2, ...`.
pub fn cech_basis(sub: &SplitBundle, quotient: &SplitBundle) -> Vec<CechIndex> {
    let mut out = Vec::new();
    for (i, e) in sub.degrees().iter().enumerate() {
        for (j, f) in quotient.degrees().iter().enumerate() {
            let low = e - f + 1;
            let mut exp = -1;
            while exp >= low {
                out.push(CechIndex {
                    sub: i,
                    quotient: j,
                    exponent: exp,
                });
                exp -= 1;
            }
        }
    }
    out
}

/// An element of `Ext^1(quotient, sub)` in Čech coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtClass {
    sub: SplitBundle,
    quotient: SplitBundle,
    coefficients: Vec<BigRational>,
}

impl ExtClass {
    pub fn new(
        sub: SplitBundle,
        quotient: SplitBundle,
        coefficients: Vec<BigRational>,
    ) -> Result<Self, TransitionError> {
        let expected = ext1_dim(&quotient, &sub) as usize;
        if coefficients.len() != expected {
            return Err(TransitionError::ClassLength {
                expected,
                found: coefficients.len(),
            });
        }
        Ok(Self {
            sub,
            quotient,
            coefficients,
        })
    }

    /// The class with a single nonzero coefficient at basis position `index`.
    pub fn basis_vector(
        sub: SplitBundle,
        quotient: SplitBundle,
        index: usize,
        value: BigRational,
    ) -> Result<Self, TransitionError> {
        let dim = ext1_dim(&quotient, &sub) as usize;
        if index >= dim {
            return Err(TransitionError::ClassLength {
                expected: dim,
                found: index + 1,
            });
        }
        let mut coefficients = vec![BigRational::zero(); dim];
        coefficients[index] = value;
        Self::new(sub, quotient, coefficients)
    }

    pub fn zero(sub: SplitBundle, quotient: SplitBundle) -> Self {
        let dim = ext1_dim(&quotient, &sub) as usize;
        Self {
            sub,
            quotient,
            coefficients: vec![BigRational::zero(); dim],
        }
    }

    pub fn sub(&self) -> &SplitBundle {
        &self.sub
    }

    pub fn quotient(&self) -> &SplitBundle {
        &self.quotient
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, lambda: &BigRational) -> Self {
        Self {
            sub: self.sub.clone(),
            quotient: self.quotient.clone(),
            coefficients: self.coefficients.iter().map(|c| c * lambda).collect(),
        }
    }
}

/// Block upper-triangular cocycle `[[diag(t^e), X], [0, diag(t^f)]]` of the extension
/// `0 -> sub -> E -> quotient -> 0` classified by `class`.
pub fn build_extension(class: &ExtClass) -> LaurentMatrix {
    let rs = class.sub.rank();
    let rq = class.quotient.rank();
    let n = rs + rq;
    let mut rows = vec![vec![LaurentPoly::zero(); n]; n];
    for (i, e) in class.sub.degrees().iter().enumerate() {
        rows[i][i] = LaurentPoly::t_pow(*e);
    }
    for (j, f) in class.quotient.degrees().iter().enumerate() {
        rows[rs + j][rs + j] = LaurentPoly::t_pow(*f);
    }
    let basis = cech_basis(&class.sub, &class.quotient);
    for (idx, c) in basis.iter().zip(&class.coefficients) {
        let f = class.quotient.degrees()[idx.quotient];
        rows[idx.sub][rs + idx.quotient].add_term(f + idx.exponent, c.clone());
    }
    LaurentMatrix::from_rows(rows).expect("triangular with monomial diagonal")
}

/// Fiber at `lambda` of the line through the split extension and `class`.
pub fn family(class: &ExtClass, lambda: &BigRational) -> LaurentMatrix {
    build_extension(&class.scaled(lambda))
}

/// Cocycle of `E ⊗ O(m)`.
pub fn twist_matrix(m: &LaurentMatrix, k: i64) -> LaurentMatrix {
    m.twist(k)
}

/// Largest `s`-degree a global section of `E(m)` can have.
///
/// A section satisfies `v_∞ = t^{-m} M^{-1} v_0` with `v_0` polynomial in `t`, so every
/// exponent of `v_∞` is at least `min_exp(M^{-1}) - m`. `None` means no nonzero section.
pub fn section_degree_bound(inverse_min_exp: i64, m: i64) -> Option<usize> {
    let k = m - inverse_min_exp;
    (k >= 0).then_some(k as usize)
}

/// `h^0(E(m))` for the bundle with cocycle `M`.
pub fn h0_twist(matrix: &LaurentMatrix, m: i64) -> u64 {
    let inv_min = matrix.inverse().min_exp().unwrap_or(0);
    match section_degree_bound(inv_min, m) {
        Some(k) => section_count_truncated(matrix, m, k),
        None => 0,
    }
}

/// Dimension of `{ v ∈ k[s]^n : deg v <= max_deg, t^m M(t) v(1/t) ∈ k[t]^n }`.
pub fn section_count_truncated(matrix: &LaurentMatrix, m: i64, max_deg: usize) -> u64 {
    let n = matrix.size();
    let unknowns = (max_deg + 1) * n;
    let mut basis = linalg::EchelonBasis::new();
    for row in matrix.rows() {
        // exponent of t -> linear form in the unknowns v_{k,c} (coefficient of s^k in v_c)
        let mut forms: BTreeMap<i64, BTreeMap<usize, BigRational>> = BTreeMap::new();
        for (c, entry) in row.iter().enumerate() {
            for (e, coef) in entry.terms() {
                for k in 0..=max_deg {
                    let exp = m + e - k as i64;
                    if exp < 0 {
                        let slot = forms
                            .entry(exp)
                            .or_default()
                            .entry(k * n + c)
                            .or_insert_with(BigRational::zero);
                        *slot += coef;
                    }
                }
            }
        }
        for (_, form) in forms {
            let r: SparseRow = form.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            basis.insert(r);
        }
    }
    (unknowns - basis.rank()) as u64
}

/// Splitting type of the bundle with transition matrix `M`, by section counting.
///
/// With `s(m) = h^0(E(m)) = Σ max(0, a_i + m + 1)`, the number of `a_i >= d` is
/// `s(-d) - s(-d-1)`. Every `a_i` lies in `[-max_exp(M^{-1}), max_exp(M)]`; `s` vanishes
/// below that window and is `n(m+1) + deg det` above it, and both ends are located by
/// bisection before the profile is evaluated in between.
pub fn splitting_type(matrix: &LaurentMatrix) -> SplitBundle {
    let n = matrix.size() as i64;
    let (_, det_exp) = matrix.det_monomial();
    let inverse = matrix.inverse();
    let inv_min = inverse.min_exp().unwrap_or(0);
    let hi = matrix.max_exp().unwrap_or(0);
    let hi_inv = inverse.max_exp().unwrap_or(0);

    let mut cache: HashMap<i64, u64> = HashMap::new();
    let mut s = |m: i64| -> u64 {
        *cache
            .entry(m)
            .or_insert_with(|| match section_degree_bound(inv_min, m) {
                Some(k) => section_count_truncated(matrix, m, k),
                None => 0,
            })
    };
    let full = |m: i64| n * (m + 1) + det_exp;

    let lo_m = -hi - 1;
    let hi_m = hi_inv;
    debug_assert_eq!(s(lo_m), 0);
    debug_assert_eq!(s(hi_m) as i64, full(hi_m));

    // last m with s(m) = 0
    let (mut a, mut b) = (lo_m, hi_m);
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if s(mid) == 0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let zero_until = a;
    // first m with s(m) = full(m)
    let (mut a, mut b) = (zero_until, hi_m);
    if s(a) as i64 == full(a) {
        b = a;
    }
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if s(mid) as i64 == full(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    let full_from = b;

    let mut profile = |m: i64| -> i64 {
        if m <= zero_until {
            0
        } else if m >= full_from {
            full(m)
        } else {
            s(m) as i64
        }
    };
    // count of a_i >= d is profile(-d) - profile(-d-1)
    let mut degrees = Vec::with_capacity(n as usize);
    let mut above = 0i64;
    for d in (-full_from - 1..=-zero_until).rev() {
        let at_least = profile(-d) - profile(-d - 1);
        for _ in above..at_least {
            degrees.push(d);
        }
        above = above.max(at_least);
    }
    SplitBundle::new(degrees).expect("rank is at least one")
}
