//! Signed subset-sum counts over Z_N, N = 3(n+1), for D = {a ∈ Z_N : 3 ∤ a}.
//!
//! M(k, b) counts k-subsets of D with sum ≡ b (mod N), and
//! M(b) = Σ_k (−1)^k M(k, b). Three independent evaluators are provided:
//!
//! * [`dp_signed_counts`]: dynamic programming over the elements of D;
//! * [`enumerate_signed_counts`]: brute force over all 2^{|D|} subsets;
//! * [`DivisorFormula`]: N·M(k, b) = Σ_{d | N} c_d(b)·[t^k] G_d(t), where
//!   G_d(t) = ∏_{a ∈ D}(1 + χ(a)t) for any additive character χ of order d
//!   and c_d is Ramanujan's sum.
//!
//! [`printed_formula_eval`] evaluates the closed form for M(b) exactly as it is
//! printed in the source, for documentation only.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::{self, ArithmeticContext};
use crate::qpoly::IntPolynomial;
use crate::report::{json_int, json_ints, ReportDocument};

/// Largest |D| accepted by [`enumerate_signed_counts`].
pub const ENUMERATION_MAX_SET_SIZE: u64 = 24;

pub fn modulus_for(n: u64) -> u64 {
    3 * (n + 1)
}

/// The elements of D in ascending order.
pub fn residue_set(n: u64) -> Vec<u64> {
    (1..modulus_for(n)).filter(|a| a % 3 != 0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCountTable {
    pub n: u64,
    pub modulus: u64,
    /// `counts[k][b]` = M(k, b), k = 0..=|D|, b = 0..N.
    pub counts: Vec<Vec<BigUint>>,
    /// M(b) for b = 0..N.
    pub signed: Vec<BigInt>,
}

impl SignedCountTable {
    fn from_counts(n: u64, counts: Vec<Vec<BigUint>>) -> Self {
        let modulus = modulus_for(n);
        let mut signed = vec![BigInt::zero(); modulus as usize];
        for (k, row) in counts.iter().enumerate() {
            for (s, c) in signed.iter_mut().zip(row) {
                let c = BigInt::from(c.clone());
                if k % 2 == 0 {
                    *s += c;
                } else {
                    *s -= c;
                }
            }
        }
        SignedCountTable {
            n,
            modulus,
            counts,
            signed,
        }
    }

    /// |D| = 2N/3.
    pub fn set_size(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, k: usize, b: usize) -> &BigUint {
        &self.counts[k][b]
    }

    /// First (k, b) where the two tables differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for (k, (ra, rb)) in self.counts.iter().zip(&other.counts).enumerate() {
            if let Some(b) = ra.iter().zip(rb).position(|(x, y)| x != y) {
                return Some((k, b));
            }
        }
        if self.counts.len() != other.counts.len() {
            return Some((self.counts.len().min(other.counts.len()), 0));
        }
        None
    }
}

/// DP over the elements of D in ascending order, k-major layout.
pub fn dp_signed_counts(n: u64) -> SignedCountTable {
    let modulus = modulus_for(n) as usize;
    let elements = residue_set(n);
    let size = elements.len();
    let mut counts = vec![vec![BigUint::zero(); modulus]; size + 1];
    counts[0][0] = BigUint::one();
    for (used, &a) in elements.iter().enumerate() {
        let a = a as usize;
        for k in (1..=used + 1).rev() {
            let (lower, upper) = counts.split_at_mut(k);
            let prev = &lower[k - 1];
            let row = &mut upper[0];
            for (b, slot) in row.iter_mut().enumerate() {
                let src = &prev[(b + modulus - a) % modulus];
                if !src.is_zero() {
                    *slot += src;
                }
            }
        }
    }
    SignedCountTable::from_counts(n, counts)
}

/// Brute force over every subset of D, walked in Gray-code order.
pub fn enumerate_signed_counts(n: u64) -> Result<SignedCountTable> {
    let elements = residue_set(n);
    let size = elements.len() as u64;
    if size > ENUMERATION_MAX_SET_SIZE {
        return Err(Error::Capacity {
            what: "subset enumeration set size",
            requested: size,
            limit: ENUMERATION_MAX_SET_SIZE,
        });
    }
    let modulus = modulus_for(n);
    let mut counts = vec![vec![0u64; modulus as usize]; elements.len() + 1];
    let mut sum = 0u64;
    let mut k = 0usize;
    let mut mask = 0u64;
    counts[0][0] = 1;
    for i in 1..(1u64 << size) {
        let bit = i.trailing_zeros() as usize;
        let a = elements[bit];
        if mask & (1 << bit) == 0 {
            sum = (sum + a) % modulus;
            k += 1;
        } else {
            sum = (sum + modulus - a) % modulus;
            k -= 1;
        }
        mask ^= 1 << bit;
        counts[k][sum as usize] += 1;
    }
    let counts = counts
        .into_iter()
        .map(|row| row.into_iter().map(BigUint::from).collect())
        .collect();
    Ok(SignedCountTable::from_counts(n, counts))
}

/// ∏_{a ∈ D} (1 + χ(a)t) for a character χ of Z_N of order d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterClassPolynomial {
    pub modulus: u64,
    pub order: u64,
    pub poly: IntPolynomial,
}

/// (1 − (−t)^e)^power, expanded by the binomial theorem.
fn alternating_binomial_power(e: u64, power: u64) -> IntPolynomial {
    // 1 − (−t)^e = 1 + c·t^e with c = −(−1)^e
    let c: i64 = if e % 2 == 0 { -1 } else { 1 };
    let mut coeffs = vec![BigInt::zero(); (e * power) as usize + 1];
    let mut term = BigInt::one();
    for j in 0..=power {
        coeffs[(e * j) as usize] = term.clone();
        term = term * (power - j) * c / (j + 1);
    }
    IntPolynomial::new(coeffs)
}

/// G_d(t) = (1 − (−t)^d)^{N/d} / (1 − (−t)^{d'})^{N/(3d')}, d' = d / gcd(d, 3).
///
/// The numerator is the product over all of Z_N, the denominator the product
/// over 3Z_N, on which χ restricts to a character of order d'.
pub fn character_class_polynomial(modulus: u64, d: u64) -> Result<CharacterClassPolynomial> {
    if modulus == 0 || modulus % 3 != 0 {
        return Err(Error::domain(format!("N = {modulus} is not a positive multiple of 3")));
    }
    if d == 0 || modulus % d != 0 {
        return Err(Error::domain(format!("{d} does not divide N = {modulus}")));
    }
    let reduced = d / d.gcd(&3);
    let num = alternating_binomial_power(d, modulus / d);
    let den = alternating_binomial_power(reduced, modulus / (3 * reduced));
    let poly = num.exact_div(&den).map_err(|e| {
        Error::Derivation(format!("G_{d} for N = {modulus}: {e}"))
    })?;
    Ok(CharacterClassPolynomial {
        modulus,
        order: d,
        poly,
    })
}

/// The divisor-grouped character sum, with every G_d precomputed.
#[derive(Debug, Clone)]
pub struct DivisorFormula {
    pub n: u64,
    pub modulus: u64,
    /// (d, G_d, G_d(−1)) for every d | N.
    terms: Vec<(u64, IntPolynomial, BigInt)>,
    ctx: std::sync::Arc<ArithmeticContext>,
}

impl DivisorFormula {
    pub fn new(n: u64) -> Result<Self> {
        let modulus = modulus_for(n);
        let ctx = std::sync::Arc::new(ArithmeticContext::new());
        let mut terms = Vec::new();
        for d in ctx.divisors(modulus)? {
            let g = character_class_polynomial(modulus, d)?.poly;
            let at_minus_one = g.eval_at(&BigInt::from(-1));
            terms.push((d, g, at_minus_one));
        }
        Ok(DivisorFormula {
            n,
            modulus,
            terms,
            ctx,
        })
    }

    fn divide_by_modulus(&self, total: BigInt, what: &str) -> Result<BigInt> {
        let (q, r) = total.div_rem(&BigInt::from(self.modulus));
        if !r.is_zero() {
            return Err(Error::Derivation(format!(
                "{what}: sum {total} not divisible by N = {}",
                self.modulus
            )));
        }
        Ok(q)
    }

    /// M(k, b).
    pub fn count(&self, k: usize, b: i64) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (d, g, _) in &self.terms {
            let c = self.ctx.ramanujan_sum(*d, b)?;
            total += g.coeff(k) * c;
        }
        self.divide_by_modulus(total, &format!("M({k}, {b})"))
    }

    /// M(b) = (1/N) Σ_{d | N} c_d(b)·G_d(−1).
    pub fn signed(&self, b: i64) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (d, _, at_minus_one) in &self.terms {
            total += at_minus_one * self.ctx.ramanujan_sum(*d, b)?;
        }
        self.divide_by_modulus(total, &format!("M({b})"))
    }

    /// The full table, for comparison with the other evaluators.
    pub fn table(&self) -> Result<SignedCountTable> {
        let size = 2 * self.modulus as usize / 3;
        let mut counts = Vec::with_capacity(size + 1);
        for k in 0..=size {
            let mut row = Vec::with_capacity(self.modulus as usize);
            for b in 0..self.modulus as i64 {
                let v = self.count(k, b)?;
                row.push(v.to_biguint().ok_or_else(|| {
                    Error::Derivation(format!("negative count M({k}, {b}) = {v}"))
                })?);
            }
            counts.push(row);
        }
        let table = SignedCountTable::from_counts(self.n, counts);
        for b in 0..self.modulus as i64 {
            let direct = self.signed(b)?;
            if direct != table.signed[b as usize] {
                return Err(Error::Derivation(format!(
                    "G_d(-1) route gives M({b}) = {direct}, coefficient route gives {}",
                    table.signed[b as usize]
                )));
            }
        }
        Ok(table)
    }
}

/// M(k, b) when `k` is given, otherwise M(b).
pub fn divisor_formula_eval(n: u64, k: Option<usize>, b: i64) -> Result<BigInt> {
    let f = DivisorFormula::new(n)?;
    match k {
        Some(k) => f.count(k, b),
        None => f.signed(b),
    }
}

/// The printed closed form for M(b), 3 | b, evaluated with these conventions:
/// the inner k runs over multiples of d in [0, 2N/3], and C(x + j − 1, j) for
/// non-integral x = 2N/(3d) is the generalized binomial x(x+1)⋯(x+j−1)/j!.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrintedFormulaEval {
    pub n: u64,
    pub b: i64,
    pub main_term: BigRational,
    pub value: BigRational,
    pub oracle: BigInt,
    pub discrepancy: BigRational,
}

pub const PRINTED_FORMULA_CONVENTIONS: &[&str] = &[
    "inner sum over k with d | k and 0 <= k <= 2N/3",
    "C(x+j-1, j) with x = 2N/(3d) non-integral read as x(x+1)...(x+j-1)/j!",
    "outer sum over d | N with d not in {1, 3}",
];

fn generalized_rising_binomial(x: &BigRational, j: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..j {
        acc = acc * (x + BigRational::from_integer(BigInt::from(i)))
            / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

pub fn printed_formula_eval(n: u64, b: i64) -> Result<PrintedFormulaEval> {
    if b.rem_euclid(3) != 0 {
        return Err(Error::domain(format!("printed formula requires 3 | b, got b = {b}")));
    }
    let modulus = modulus_for(n);
    let big_n = BigInt::from(modulus);
    let main_term = BigRational::new(
        BigInt::from(2) * BigInt::from(3).pow((modulus / 3) as u32),
        big_n.clone(),
    );
    let mut correction = BigRational::zero();
    let size = 2 * modulus / 3;
    for d in exactmath::divisors(modulus)? {
        if d == 1 || d == 3 {
            continue;
        }
        let x = BigRational::new(BigInt::from(2 * modulus), BigInt::from(3 * d));
        let inner = (0..=size / d).fold(BigRational::zero(), |acc, j| {
            acc + generalized_rising_binomial(&x, j)
        });
        correction += inner * BigInt::from(exactmath::ramanujan_sum(d, b)?);
    }
    let value = &main_term + correction / big_n;
    let oracle = dp_signed_counts(n).signed[b.rem_euclid(modulus as i64) as usize].clone();
    let discrepancy = &value - BigRational::from_integer(oracle.clone());
    Ok(PrintedFormulaEval {
        n,
        b,
        main_term,
        value,
        oracle,
        discrepancy,
    })
}

fn rational_json(r: &BigRational) -> Value {
    if r.is_integer() {
        json_int(r.numer())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

/// DP vs enumeration (when within capacity) vs divisor formula, the
/// positivity of M(b) on 3Z_N, row sums, and the printed formula's
/// discrepancies as data.
pub fn cross_validate(n: u64) -> ReportDocument {
    let modulus = modulus_for(n);
    let mut report = ReportDocument::new("modcount").param("n", n);
    let dp = dp_signed_counts(n);

    compare_tables(&mut report, "dp = enumeration", &dp, enumerate_signed_counts(n), modulus);
    compare_tables(
        &mut report,
        "dp = divisor formula",
        &dp,
        DivisorFormula::new(n).and_then(|f| f.table()),
        modulus,
    );

    let row_sums: Vec<BigInt> = dp
        .counts
        .iter()
        .map(|row| BigInt::from(row.iter().sum::<BigUint>()))
        .collect();
    let binomials: Vec<BigInt> = (0..=dp.set_size() as u64)
        .map(|k| BigInt::from(exactmath::binomial(dp.set_size() as u64, k)))
        .collect();
    report.cross_check(
        format!("sum_b M(k, b) = C(2N/3, k), N={modulus}"),
        json_ints(&binomials),
        json_ints(&row_sums),
    );
    let signed_total: BigInt = dp.signed.iter().sum();
    report.cross_check(
        format!("sum_b M(b) = 0, N={modulus}"),
        Value::from(0),
        json_int(&signed_total),
    );

    for (b, v) in dp.signed.iter().enumerate().step_by(3) {
        if !v.is_positive() {
            report.violation(
                "M(b) > 0 for 3 | b",
                &[("N", modulus.into()), ("b", b.into())],
                json_int(v),
                ">0",
            );
        }
    }

    let off_class_negative = dp
        .signed
        .iter()
        .enumerate()
        .filter(|(b, _)| b % 3 != 0)
        .all(|(_, v)| v.is_negative());

    let mut printed = Vec::new();
    for b in (0..modulus as i64).step_by(3) {
        match printed_formula_eval(n, b) {
            Ok(e) => printed.push(json!({
                "b": b,
                "main_term": rational_json(&e.main_term),
                "value": rational_json(&e.value),
                "oracle": json_int(&e.oracle),
                "discrepancy": rational_json(&e.discrepancy),
            })),
            Err(e) => report.error(format!("printed formula, N={modulus}, b={b}: {e}")),
        }
    }

    report.set_data("N", modulus);
    report.set_data("signed", json_ints(&dp.signed));
    report.set_data("off_class_all_negative", off_class_negative);
    report.set_data(
        "printed_formula",
        json!({
            "conventions": PRINTED_FORMULA_CONVENTIONS,
            "evaluations": printed,
        }),
    );
    report
}

fn compare_tables(
    report: &mut ReportDocument,
    name: &str,
    dp: &SignedCountTable,
    other: Result<SignedCountTable>,
    modulus: u64,
) {
    match other {
        Ok(t) => match dp.first_difference(&t) {
            None => {
                report.cross_check(
                    format!("{name}, N={modulus}"),
                    json_ints(&dp.signed),
                    json_ints(&t.signed),
                );
            }
            Some((k, b)) => {
                let get = |t: &SignedCountTable| {
                    t.counts
                        .get(k)
                        .and_then(|r| r.get(b))
                        .map(|c| json_int(&c.clone().into()))
                        .unwrap_or(Value::Null)
                };
                report.cross_check(format!("{name}, N={modulus}, k={k}, b={b}"), get(dp), get(&t));
            }
        },
        Err(Error::Capacity { .. }) => {
            report.set_data(&format!("skipped: {name}"), "beyond enumeration capacity");
        }
        Err(e) => report.error(format!("{name}, N={modulus}: {e}")),
    }
}
