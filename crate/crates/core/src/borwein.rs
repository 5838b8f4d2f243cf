//! The product ∏_{j=0}^n (1 − q^{3j+1})(1 − q^{3j+2}) = Σ a_j q^j.
//!
//! Covers expansion, the split into A(q³) − qB(q³) − q²C(q³), the
//! alternating q-binomial formula for A, the sign pattern check and partial
//! sums of coefficients along residue classes mod N = 3(n+1).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::modcount;
use crate::qpoly::{self, expand_product_with, Engine, IntPolynomial, ProductSpec};
use crate::report::{json_int, json_ints, ReportDocument};

/// Largest n for which the partial sums are also compared with the DP table.
pub const DP_CROSS_CHECK_MAX_N: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorweinSeries {
    pub n: u64,
    pub coeffs: IntPolynomial,
}

impl BorweinSeries {
    /// 3(n+1)².
    pub fn expected_degree(n: u64) -> usize {
        (3 * (n + 1) * (n + 1)) as usize
    }

    pub fn modulus(&self) -> u64 {
        3 * (self.n + 1)
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.coeff(j)
    }
}

pub fn expand_borwein(n: u64) -> BorweinSeries {
    expand_borwein_with(n, Engine::Auto)
}

pub fn expand_borwein_with(n: u64, engine: Engine) -> BorweinSeries {
    let coeffs = expand_product_with(&ProductSpec::borwein_first(n), engine)
        .expect("the Borwein product spec is always valid");
    BorweinSeries { n, coeffs }
}

/// A_i = a_{3i}, B_i = −a_{3i+1}, C_i = −a_{3i+2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleDecomposition {
    pub a: IntPolynomial,
    pub b: IntPolynomial,
    pub c: IntPolynomial,
}

impl TripleDecomposition {
    /// A(q³) − q·B(q³) − q²·C(q³).
    pub fn reassemble(&self) -> IntPolynomial {
        let a = self.a.substitute_power(3);
        let b = self.b.substitute_power(3).shift(1);
        let c = self.c.substitute_power(3).shift(2);
        &(&a - &b) - &c
    }
}

pub fn decompose_abc(s: &BorweinSeries) -> TripleDecomposition {
    TripleDecomposition {
        a: s.coeffs.stride(0, 3),
        b: -&s.coeffs.stride(1, 3),
        c: -&s.coeffs.stride(2, 3),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedSign {
    NonNegative,
    NonPositive,
}

impl ExpectedSign {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpectedSign::NonNegative => ">=0",
            ExpectedSign::NonPositive => "<=0",
        }
    }

    fn admits(self, c: &BigInt) -> bool {
        match self {
            ExpectedSign::NonNegative => !c.is_negative(),
            ExpectedSign::NonPositive => !c.is_positive(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignViolation {
    pub exponent: usize,
    pub coefficient: BigInt,
    pub expected: ExpectedSign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignReport {
    pub n: u64,
    pub violations: Vec<SignViolation>,
}

impl SignReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Coefficients at exponents divisible by `period` must be ≥ 0, all others ≤ 0.
pub fn sign_pattern_violations(p: &IntPolynomial, period: usize) -> Vec<SignViolation> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, c)| {
            let expected = if j % period == 0 {
                ExpectedSign::NonNegative
            } else {
                ExpectedSign::NonPositive
            };
            (!expected.admits(c)).then(|| SignViolation {
                exponent: j,
                coefficient: c.clone(),
                expected,
            })
        })
        .collect()
}

pub fn check_sign_pattern(s: &BorweinSeries) -> SignReport {
    SignReport {
        n: s.n,
        violations: sign_pattern_violations(&s.coeffs, 3),
    }
}

/// Σ_{k=−⌊m/3⌋}^{⌊m/3⌋} (−1)^k q^{k(9k−1)/2} [2m; m+3k]_q.
///
/// Equals the A-polynomial of the product with m factor pairs, i.e.
/// `decompose_abc(&expand_borwein(m - 1)).a`.
pub fn a_via_qbinomial(m: u64) -> IntPolynomial {
    assert!(m >= 1, "a_via_qbinomial needs m >= 1");
    let m = m as i64;
    let kmax = m / 3;
    let row = qpoly::gaussian_binomial_row(2 * m as usize, (m + 3 * kmax) as usize);
    let mut acc = IntPolynomial::zero();
    for k in -kmax..=kmax {
        let shift = (k * (9 * k - 1) / 2) as usize;
        let term = row[(m + 3 * k) as usize].shift(shift);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Entry b is Σ_{i≥0} a_{b+iN} for N = 3(n+1), b = 0..N.
pub fn residue_partial_sums(s: &BorweinSeries) -> Vec<BigInt> {
    let modulus = s.modulus() as usize;
    let mut sums = vec![BigInt::zero(); modulus];
    for (j, c) in s.coeffs.coeffs().iter().enumerate() {
        sums[j % modulus] += c;
    }
    sums
}

/// Strict positivity of the residue partial sums at every b ≡ 0 (mod 3),
/// cross-checked against the signed subset counts.
pub fn verify_residue_positivity(n: u64) -> ReportDocument {
    verify_partial_sums(&expand_borwein(n))
}

pub fn verify_partial_sums(s: &BorweinSeries) -> ReportDocument {
    let n = s.n;
    let mut report = ReportDocument::new("partial-sums").param("n", n);
    let sums = residue_partial_sums(s);
    for (b, v) in sums.iter().enumerate().step_by(3) {
        if !v.is_positive() {
            report.violation(
                "residue partial sum positivity",
                &[("n", n.into()), ("b", b.into())],
                json_int(v),
                ">0",
            );
        }
    }
    report.set_data("N", s.modulus());
    report.set_data("partial_sums", json_ints(&sums));

    match modcount::DivisorFormula::new(n) {
        Ok(formula) => {
            let signed: Result<Vec<BigInt>, _> = (0..s.modulus() as i64)
                .map(|b| formula.signed(b))
                .collect();
            match signed {
                Ok(v) => {
                    report.cross_check(
                        format!("partial sums = divisor-formula M(b), n={n}"),
                        json_ints(&v),
                        json_ints(&sums),
                    );
                }
                Err(e) => report.error(format!("divisor formula, n={n}: {e}")),
            }
        }
        Err(e) => report.error(format!("divisor formula, n={n}: {e}")),
    }
    if n <= DP_CROSS_CHECK_MAX_N {
        let table = modcount::dp_signed_counts(n);
        report.cross_check(
            format!("partial sums = DP M(b), n={n}"),
            json_ints(&table.signed),
            json_ints(&sums),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &IntPolynomial) -> Vec<i64> {
        p.to_i64s().unwrap()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(
            ints(&expand_borwein(1).coeffs),
            vec![1, -1, -1, 1, -1, 0, 2, 0, -1, 1, -1, -1, 1]
        );
        assert_eq!(ints(&expand_borwein(0).coeffs), vec![1, -1, -1, 1]);
        let s2 = expand_borwein(2);
        assert_eq!(s2.coeffs.degree(), Some(27));
        assert_eq!(s2.coeff(9), BigInt::from(3));
        assert_eq!(s2.coeff(27), BigInt::from(1));
        let by_hand = expand_borwein(1)
            .coeffs
            .mul_sparse_factor(7, None)
            .mul_sparse_factor(8, None);
        assert_eq!(s2.coeffs, by_hand);
    }

    #[test]
    fn decomposition_examples() {
        let d1 = decompose_abc(&expand_borwein(1));
        assert_eq!(ints(&d1.a), vec![1, 1, 2, 1, 1]);
        assert_eq!(ints(&d1.b), vec![1, 1, 0, 1]);
        assert_eq!(ints(&d1.c), vec![1, 0, 1, 1]);
        let d0 = decompose_abc(&expand_borwein(0));
        assert_eq!((ints(&d0.a), ints(&d0.b), ints(&d0.c)), (vec![1, 1], vec![1], vec![1]));
        let d2 = decompose_abc(&expand_borwein(2));
        assert_eq!(ints(&d2.a), vec![1, 1, 2, 3, 2, 2, 3, 2, 1, 1]);
        for n in 0..6 {
            let s = expand_borwein(n);
            let d = decompose_abc(&s);
            assert_eq!(d.reassemble(), s.coeffs);
            assert_eq!(d.b.reverse(), d.c);
        }
    }

    #[test]
    fn sign_pattern_examples() {
        assert!(check_sign_pattern(&expand_borwein(1)).passed());
        assert!(check_sign_pattern(&expand_borwein(0)).passed());
        let bad = BorweinSeries {
            n: 0,
            coeffs: IntPolynomial::from_i64s(&[1, -1, -1, -1]),
        };
        let r = check_sign_pattern(&bad);
        assert_eq!(
            r.violations,
            vec![SignViolation {
                exponent: 3,
                coefficient: BigInt::from(-1),
                expected: ExpectedSign::NonNegative,
            }]
        );
        let positive_off_class = IntPolynomial::from_i64s(&[1, 2]);
        assert_eq!(sign_pattern_violations(&positive_off_class, 3)[0].expected, ExpectedSign::NonPositive);
    }

    #[test]
    fn qbinomial_examples() {
        assert_eq!(ints(&a_via_qbinomial(2)), vec![1, 1, 2, 1, 1]);
        assert_eq!(ints(&a_via_qbinomial(1)), vec![1, 1]);
        assert_eq!(
            ints(&a_via_qbinomial(3)),
            vec![1, 1, 2, 3, 2, 2, 3, 2, 1, 1]
        );
    }

    #[test]
    fn partial_sum_examples() {
        let v = |n| residue_partial_sums(&expand_borwein(n));
        let as_i64 = |xs: Vec<BigInt>| xs.iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(v(1)), vec![4, -1, -2, 2, -2, -1]);
        assert_eq!(as_i64(v(0)), vec![2, -1, -1]);
        assert_eq!(v(2)[0], BigInt::from(8));
    }

    #[test]
    fn residue_positivity_reports() {
        for n in 0..=2 {
            let r = verify_residue_positivity(n);
            assert!(r.is_pass(), "{}", r.to_json());
            assert_eq!(r.cross_checks.len(), 2);
        }
        let r = verify_residue_positivity(1);
        assert_eq!(r.data["partial_sums"], serde_json::json!([4, -1, -2, 2, -2, -1]));
    }
}
