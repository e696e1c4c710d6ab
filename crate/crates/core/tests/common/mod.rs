//! Shared generators and independent oracles for the integration suites.

#![allow(dead_code)]

use a1conc::{LaurentMatrix, LaurentPoly, SplitBundle};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every splitting type of rank `1..=max_rank` with degrees in `[lo, hi]`.
pub fn all_split_bundles(max_rank: usize, lo: i64, hi: i64) -> Vec<SplitBundle> {
    fn extend(prefix: &mut Vec<i64>, from: i64, hi: i64, left: usize, out: &mut Vec<SplitBundle>) {
        if !prefix.is_empty() {
            out.push(SplitBundle::new(prefix.clone()).unwrap());
        }
        if left == 0 {
            return;
        }
        for d in from..=hi {
            prefix.push(d);
            extend(prefix, d, hi, left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), lo, hi, max_rank, &mut out);
    out
}

pub fn bundle(d: &[i64]) -> SplitBundle {
    SplitBundle::new(d.to_vec()).unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Čech count for a line bundle `O(d)` on the cover `{t ≠ ∞}, {t ≠ 0}` with cocycle `t^d`.
///
/// Enumerates monomials explicitly: `H^0` is spanned by the `s^k` on the chart at
/// infinity whose image `t^{d-k}` is regular at zero, and `H^1` by the monomials `t^j`
/// of the overlap hit by neither chart (`j < 0` and `j > d`).
pub fn cech_line(d: i64) -> (u64, u64) {
    let window = d.abs() + 2;
    let h0 = (0..=window).filter(|k| d - k >= 0).count() as u64;
    let h1 = (-window..=window)
        .filter(|&j| {
            let from_zero_chart = j >= 0;
            let from_infinity_chart = j <= d;
            !from_zero_chart && !from_infinity_chart
        })
        .count() as u64;
    (h0, h1)
}

/// `dim Ext^1(quotient, sub)` as the Čech count of `H^1(sub ⊗ quotient^∨)`.
pub fn cech_ext1(quotient: &SplitBundle, sub: &SplitBundle) -> u64 {
    let mut total = 0;
    for e in sub.degrees() {
        for f in quotient.degrees() {
            total += cech_line(e - f).1;
        }
    }
    total
}

fn random_coefficient<R: Rng>(rng: &mut R) -> BigRational {
    const CHOICES: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-3, 2), (1, 3)];
    let (n, d) = CHOICES[rng.gen_range(0..CHOICES.len())];
    q(n, d)
}

/// Random polynomial of degree at most one in `t^sign` (sign = ±1).
fn random_linear<R: Rng>(rng: &mut R, sign: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for k in 0..=1 {
        if rng.gen_bool(0.6) {
            p.add_term(sign * k, random_coefficient(rng));
        }
    }
    p
}

fn identity_rows(n: usize) -> Vec<Vec<LaurentPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Random invertible matrix over `k[t]` (`sign = 1`) or `k[1/t]` (`sign = -1`) with
/// constant determinant: a signed permutation times a lower and an upper unitriangular
/// factor with entries of degree at most one, so every entry has degree at most two.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, sign: i64) -> LaurentMatrix {
    let mut lower = identity_rows(n);
    let mut upper = identity_rows(n);
    for i in 0..n {
        for j in 0..i {
            lower[i][j] = random_linear(rng, sign);
            upper[j][i] = random_linear(rng, sign);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut signed = vec![vec![LaurentPoly::zero(); n]; n];
    for (i, &p) in perm.iter().enumerate() {
        let c = if rng.gen_bool(0.5) { q(1, 1) } else { q(-1, 1) };
        signed[i][p] = LaurentPoly::constant(c);
    }
    let l = LaurentMatrix::from_rows(lower).unwrap();
    let u = LaurentMatrix::from_rows(upper).unwrap();
    let s = LaurentMatrix::from_rows(signed).unwrap();
    s.mul(&l).unwrap().mul(&u).unwrap()
}

/// Largest absolute exponent among the entries, i.e. the entry degree in `t` or `1/t`.
pub fn entry_degree(m: &LaurentMatrix) -> i64 {
    let lo = m.min_exp().unwrap_or(0);
    let hi = m.max_exp().unwrap_or(0);
    lo.abs().max(hi.abs())
}

/// A random bundle expression in the `+`/`*`/parentheses grammar together with the
/// splitting type it denotes, evaluated here independently of the parser.
pub struct GeneratedExpr {
    pub text: String,
    pub degrees: Vec<i64>,
}

/// Generates an expression of exactly `rank` summands whose degrees all lie in
/// `[-max_abs, max_abs]`.
pub fn random_expr<R: Rng>(rng: &mut R, rank: usize, max_abs: i64) -> GeneratedExpr {
    loop {
        let (text, mut degrees, _) = expr_of_rank(rng, rank, 3);
        if degrees.iter().all(|d| d.abs() <= max_abs) {
            degrees.sort_unstable();
            return GeneratedExpr { text, degrees };
        }
    }
}

/// Returns `(text, degrees, top_level_is_sum)`.
fn expr_of_rank<R: Rng>(rng: &mut R, rank: usize, depth: u32) -> (String, Vec<i64>, bool) {
    let leaf = rank == 1 && (depth == 0 || rng.gen_bool(0.5));
    if leaf {
        let d = rng.gen_range(-5..=5);
        let text = match (d, rng.gen_bool(0.5)) {
            (0, true) => "O".to_string(),
            (d, _) => format!("O({d})"),
        };
        return (text, vec![d], false);
    }
    let depth = depth.saturating_sub(1);
    let divisors: Vec<usize> = (1..=rank).filter(|k| rank.is_multiple_of(*k)).collect();
    if rank == 1 || rng.gen_bool(0.35) {
        let left = divisors[rng.gen_range(0..divisors.len())];
        let (a, da, a_sum) = expr_of_rank(rng, left, depth);
        let (b, db, b_sum) = expr_of_rank(rng, rank / left, depth);
        let wrap = |s: String, is_sum: bool, rng: &mut R| {
            if is_sum || rng.gen_bool(0.2) {
                format!("({s})")
            } else {
                s
            }
        };
        let a = wrap(a, a_sum, rng);
        let b = wrap(b, b_sum, rng);
        let degrees = da.iter().flat_map(|x| db.iter().map(move |y| x + y)).collect();
        let sep = if rng.gen_bool(0.2) { " * " } else { "*" };
        (format!("{a}{sep}{b}"), degrees, false)
    } else {
        let left = rng.gen_range(1..rank);
        let (a, mut da, _) = expr_of_rank(rng, left, depth);
        let (b, db, _) = expr_of_rank(rng, rank - left, depth);
        da.extend(db);
        let sep = if rng.gen_bool(0.2) { " + " } else { "+" };
        (format!("{a}{sep}{b}"), da, true)
    }
}

/// One row of the command-line contract: the argument vector (program name first), the
/// expected exit code, and a fragment the human-readable output must contain.
pub struct CliCase {
    pub args: Vec<String>,
    pub code: i32,
    pub contains: &'static str,
}

fn case(args: &[&str], code: i32, contains: &'static str) -> CliCase {
    CliCase {
        args: args.iter().map(|s| s.to_string()).collect(),
        code,
        contains,
    }
}

/// Writes `text` to a fresh file under the system temp directory and returns its path.
pub fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("a1conc-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

/// Every documented operation example, phrased as a command line.
pub fn exit_code_table() -> Vec<CliCase> {
    let good = a1conc::generate_certificate(&bundle(&[-1, 1])).to_json_string();
    let whitney = r#"{"format": "a1cert/1", "endpoints": [[0, 1], [0, 0]], "moves": [
        {"kind": "twistBridge", "from": [0, 1], "to": [0, 0], "m": 0, "line": 1}]}"#;
    let illegal_sub = r#"{"format": "a1cert/1", "endpoints": [[-1, 1], [-2, 2]], "moves": [
        {"kind": "extension", "from": [-1, 1], "to": [-2, 2], "sub": [-2], "quotient": [2], "m": 1}]}"#;
    let good = temp_file("good.json", &good);
    let whitney = temp_file("whitney.json", whitney);
    let illegal_sub = temp_file("illegal-sub.json", illegal_sub);
    let missing = std::env::temp_dir().join("a1conc-no-such-file.json");
    let missing = missing.to_string_lossy().into_owned();
    let garbage = temp_file("garbage.json", "{not json");

    let mut rows = vec![
        // splitting types and cohomology
        case(&["canon", "O(0)+O(1)"], 0, "O+O(1)"),
        case(&["canon", "(O(-1)+O(1))+O"], 0, "O+O+O"),
        case(&["canon", "(O(-1)+O+O(1))*O(4)"], 0, "O+O+O(12)"),
        case(&["canon", "(O(1)+O(2))*(O+O(1))"], 0, "O+O+O+O(8)"),
        case(&["canon", "O(-1)+O+O(1)"], 0, "O+O+O"),
        case(&["canon", "O(2)+O(3)"], 0, "O+O(5)"),
        case(&["canon", "O(7)"], 0, "O(7)"),
        case(&["canon", "O(1)*(O+O(2))"], 0, "O+O(4)"),
        case(&["ext-dim", "O(1)", "O(-1)"], 0, "1"),
        case(&["ext-dim", "O", "O"], 0, "0"),
        case(&["ext-dim", "O(3)", "O(-1)"], 0, "3"),
        case(&["ext-dim", "O", "O(-2)"], 0, "1"),
        case(&["ext-dim", "O", "O(-5)"], 0, "4"),
        // transition matrices
        case(&["build-ext", "O(-1)", "O(1)", "1"], 0, "t^-1, 1; 0, t"),
        case(&["build-ext", "O(-1)", "O(1)", "0"], 0, "t^-1, 0; 0, t"),
        case(&["build-ext", "O", "O(3)", "1,0"], 0, "1, t^2; 0, t^3"),
        case(&["family", "O(-1)", "O(1)", "1", "--lambda", "0"], 0, "t^-1, 0; 0, t"),
        case(&["family", "O(-1)", "O(1)", "1", "--lambda", "1"], 0, "t^-1, 1; 0, t"),
        case(&["family", "O(-1)", "O(1)", "1", "--lambda", "2"], 0, "t^-1, 2; 0, t"),
        case(&["split-type", "t^2, 0; 0, t^-3"], 0, "O(-3)+O(2)"),
        case(&["split-type", "t^-1, 1; 0, t"], 0, "O+O"),
        case(&["split-type", "t^-1, 0; 0, t"], 0, "O(-1)+O(1)"),
        // concordance
        case(&["concordant", "O(2)+O(-2)", "O+O"], 0, "true"),
        case(&["concordant", "O(1)+O", "O+O"], 1, "false"),
        case(&["concordant", "O(1)", "O(1)+O"], 1, "false"),
        case(&["certify", "O(5)"], 0, "already canonical"),
        case(&["certify", "O(-1)+O(1)"], 0, "bridge"),
        case(&["verify-cert", &good], 0, "true"),
        case(&["verify-cert", &whitney], 1, "determinant mismatch"),
        case(&["verify-cert", &illegal_sub], 1, "sub-bundle legality"),
        case(&["canon", "2:3", "--pic", "Z"], 0, "O+L(3)"),
        case(&["concordant", "2:1", "2:5", "--pic", "Z/4"], 0, "true"),
        case(&["concordant", "2:1", "2:2", "--pic", "Z/4"], 1, "false"),
        // Chow rings and weak equivalence
        case(&["weak-equiv", "--n", "1", "--a", "0", "--b", "2"], 0, "true"),
        case(&["weak-equiv", "--n", "2", "--a", "1", "--b", "2"], 1, "false"),
        case(&["weak-equiv", "--n", "3", "--a", "-5", "--b", "-5"], 0, "true"),
        case(
            &["weak-equiv", "--n", "2", "--a", "0", "--b", "3", "--pic", "Z"],
            0,
            "true",
        ),
        case(
            &["weak-equiv", "--n", "1", "--a", "1", "--b", "0", "--pic", "Z/4"],
            1,
            "false",
        ),
        case(
            &["weak-equiv", "--n", "4", "--a", "5,0", "--b", "0,0", "--pic", "Z x Z/5"],
            0,
            "true",
        ),
        case(&["chow-iso", "PB(n=2, a=1)", "PB(n=2, a=2)"], 0, "x -> -x, z -> x + z"),
        case(&["chow-iso", "PB(n=2, a=0)", "PB(n=2, a=1)"], 1, "none"),
        case(&["chow-iso", "PB(n=3, a=4)", "PB(n=3, a=4)"], 0, "x -> x, z -> z"),
        case(&["enum-isos", "PB(n=2, a=0)", "PB(n=2, a=0)"], 0, "x -> -x, z -> -z"),
        case(&["enum-isos", "PB(n=2, a=1)", "PB(n=2, a=-1)"], 0, "z -> -z"),
        case(
            &["enum-isos", "PB(n=2, a=0)", "PB(n=2, a=1)", "--bound", "5"],
            1,
            "none",
        ),
        case(&["verify-thm-count"], 0, "no-trivializing-twist"),
        // usage and parse errors
        case(&["canon", "O("], 2, ""),
        case(&["canon", ""], 2, ""),
        case(&["canon", "O(1)+"], 2, ""),
        case(&["ext-dim", "O(1)", "P"], 2, ""),
        case(&["build-ext", "O(-1)", "O(1)", "1,2"], 2, ""),
        case(&["family", "O(-1)", "O(1)", "1", "--lambda", "1/0"], 2, ""),
        case(&["split-type", "t, 1; 1, t"], 2, ""),
        case(&["split-type", "t, 1"], 2, ""),
        case(&["weak-equiv", "--n", "0", "--a", "0", "--b", "0"], 2, ""),
        case(
            &["weak-equiv", "--n", "1", "--a", "1", "--b", "0", "--pic", "Z/4 x Z/6"],
            2,
            "",
        ),
        case(&["chow-iso", "PB(n=2, a=0)", "PB(n=3, a=0)"], 2, ""),
        case(&["chow-iso", "PB(n=0, a=0)", "PB(n=0, a=0)"], 2, ""),
        case(&["verify-cert", &garbage], 2, ""),
        case(&["verify-cert", &missing], 2, ""),
        case(&["no-such-verb"], 2, ""),
        case(&[], 2, ""),
        case(&["--help"], 0, "Usage"),
        case(&["--version"], 0, "a1conc"),
    ];
    for row in rows.iter_mut() {
        row.args.insert(0, "a1conc".to_string());
    }
    rows
}
