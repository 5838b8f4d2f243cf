//! The infinite-product side: Euler's pentagonal series, prefixes of
//! ∏_{p ∤ n}(1 − q^n), partitions with forbidden residue classes, and
//! Stanley's two-term formula for a_{p, pk}.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::is_prime;
use crate::qpoly::IntPolynomial;
use crate::report::{json_int, json_uint, ReportDocument};

/// Σ_{n ∈ Z} (−1)^n x^{n(3n−1)/2}, truncated at degree `j_max`.
pub fn pentagonal_series(j_max: usize) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); j_max + 1];
    coeffs[0] = BigInt::one();
    for n in 1usize.. {
        let g = n * (3 * n - 1) / 2;
        if g > j_max {
            break;
        }
        let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        coeffs[g] = sign.clone();
        let g_neg = n * (3 * n + 1) / 2;
        if g_neg <= j_max {
            coeffs[g_neg] = sign;
        }
    }
    IntPolynomial::new(coeffs)
}

/// p(0..=k_max) by the pentagonal recurrence.
pub fn partition_numbers(k_max: usize) -> Vec<BigUint> {
    let mut p: Vec<BigInt> = vec![BigInt::zero(); k_max + 1];
    p[0] = BigInt::one();
    for i in 1..=k_max {
        let mut acc = BigInt::zero();
        for n in 1usize.. {
            let g = n * (3 * n - 1) / 2;
            if g > i {
                break;
            }
            let mut term = p[i - g].clone();
            let g_neg = n * (3 * n + 1) / 2;
            if g_neg <= i {
                term += &p[i - g_neg];
            }
            if n % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p[i] = acc;
    }
    p.into_iter()
        .map(|x| x.to_biguint().expect("partition numbers are nonnegative"))
        .collect()
}

/// Coefficients a_{p, 0..=J} of ∏_{n ≥ 1}(1 − q^n) / ∏_{n ≥ 1}(1 − q^{pn}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientPrefix {
    pub p: u64,
    pub j_max: usize,
    pub coeffs: Vec<BigInt>,
}

impl EtaQuotientPrefix {
    pub fn get(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }
}

/// Truncated expansion of ∏_{n ≤ J, p ∤ n}(1 − q^n).
pub fn eta_quotient_coeffs(p: u64, j_max: usize) -> Result<EtaQuotientPrefix> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let mut poly = IntPolynomial::one();
    for n in 1..=j_max {
        if n as u64 % p != 0 {
            poly.mul_sparse_factor_in_place(n, Some(j_max));
        }
    }
    let coeffs = (0..=j_max).map(|j| poly.coeff(j)).collect();
    Ok(EtaQuotientPrefix { p, j_max, coeffs })
}

/// Parts x ≥ 1 allowed unless x mod m is a forbidden residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictedPartitionSpec {
    modulus: u64,
    forbidden: BTreeSet<u64>,
}

impl RestrictedPartitionSpec {
    /// Residues are reduced into [0, m) and deduplicated.
    pub fn new(modulus: u64, forbidden: impl IntoIterator<Item = i64>) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let forbidden = forbidden
            .into_iter()
            .map(|r| r.rem_euclid(modulus as i64) as u64)
            .collect();
        RestrictedPartitionSpec { modulus, forbidden }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn forbidden(&self) -> &BTreeSet<u64> {
        &self.forbidden
    }

    pub fn allows(&self, part: u64) -> bool {
        !self.forbidden.contains(&(part % self.modulus))
    }

    /// P(0..=k_max).
    pub fn counts(&self, k_max: usize) -> Vec<BigUint> {
        let mut c = vec![BigUint::zero(); k_max + 1];
        c[0] = BigUint::one();
        for part in 1..=k_max {
            if !self.allows(part as u64) {
                continue;
            }
            for e in part..=k_max {
                let (lo, hi) = c.split_at_mut(e);
                hi[0] += &lo[e - part];
            }
        }
        c
    }
}

/// Partitions of `k` into allowed parts; zero for k < 0.
pub fn restricted_partition_count(k: i64, spec: &RestrictedPartitionSpec) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    spec.counts(k as usize).pop().unwrap()
}

/// Offset of the second term in Stanley's formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetConvention {
    /// (p+1)/6 when t = 1 and (p−1)/6 when t = 2, the exponent at which the
    /// second pentagonal subseries starts.
    Derived,
    /// t(pt+1)/6.
    Printed,
}

/// The ingredients of P₁(k) + P₂(k − Δ) for a prime p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StanleyTerms {
    pub p: u64,
    /// Smallest t ≥ 1 with 3 | pt + 1; `None` for p = 3.
    pub t: Option<u64>,
    pub first: RestrictedPartitionSpec,
    pub second: Option<RestrictedPartitionSpec>,
    pub offset: usize,
}

impl StanleyTerms {
    pub fn new(p: u64, convention: OffsetConvention) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::Unsupported(
                "Stanley's formula is only set up for odd primes".into(),
            ));
        }
        if p == 3 {
            return Ok(StanleyTerms {
                p,
                t: None,
                first: RestrictedPartitionSpec::new(9, [0, 4, 5]),
                second: None,
                offset: 0,
            });
        }
        let t = if (p + 1) % 3 == 0 { 1 } else { 2 };
        let m = 3 * p;
        let (pi, ti) = (p as i64, t as i64);
        let first = RestrictedPartitionSpec::new(m, [0, (3 * pi - 1) / 2, (3 * pi + 1) / 2]);
        let second = RestrictedPartitionSpec::new(
            m,
            [0, ((3 - 2 * ti) * pi - 1) / 2, ((3 + 2 * ti) * pi + 1) / 2],
        );
        let offset = match convention {
            OffsetConvention::Derived if t == 1 => (p + 1) / 6,
            OffsetConvention::Derived => (p - 1) / 6,
            OffsetConvention::Printed => t * (p * t + 1) / 6,
        } as usize;
        Ok(StanleyTerms {
            p,
            t: Some(t),
            first,
            second: Some(second),
            offset,
        })
    }

    /// Right-hand side for k = 0..=k_max.
    pub fn values(&self, k_max: usize) -> Vec<BigUint> {
        let mut out = self.first.counts(k_max);
        if let Some(second) = &self.second {
            let s = second.counts(k_max);
            for k in self.offset..=k_max {
                out[k] += &s[k - self.offset];
            }
        }
        out
    }

    fn describe(&self) -> Value {
        json!({
            "t": self.t,
            "modulus": self.first.modulus(),
            "first_forbidden": self.first.forbidden(),
            "second_forbidden": self.second.as_ref().map(|s| s.forbidden().clone()),
            "offset": self.offset,
        })
    }
}

/// P₁(k) + P₂(k − Δ) with the derived offset.
pub fn stanley_rhs(p: u64, k: i64) -> Result<BigUint> {
    stanley_rhs_with(p, k, OffsetConvention::Derived)
}

pub fn stanley_rhs_with(p: u64, k: i64, convention: OffsetConvention) -> Result<BigUint> {
    let terms = StanleyTerms::new(p, convention)?;
    if k < 0 {
        return Ok(BigUint::zero());
    }
    Ok(terms.values(k as usize).pop().unwrap())
}

fn mismatches(eta: &EtaQuotientPrefix, rhs: &[BigUint]) -> Vec<(usize, BigInt, BigUint)> {
    let p = eta.p as usize;
    rhs.iter()
        .enumerate()
        .filter_map(|(k, r)| {
            let a = eta.get(p * k);
            (*a != BigInt::from(r.clone())).then(|| (k, a.clone(), r.clone()))
        })
        .collect()
}

/// a_{p, pk} = stanley_rhs(p, k) for 0 ≤ k ≤ K, using the derived offset.
/// The printed offset is evaluated too and its mismatches are recorded as data.
pub fn verify_stanley_formula(p: u64, k_max: usize) -> ReportDocument {
    let mut report = ReportDocument::new("stanley")
        .param("p", p)
        .param("k_max", k_max);
    let (derived, printed) = match (
        StanleyTerms::new(p, OffsetConvention::Derived),
        StanleyTerms::new(p, OffsetConvention::Printed),
    ) {
        (Ok(d), Ok(pr)) => (d, pr),
        (Err(e), _) | (_, Err(e)) => {
            report.error(e.to_string());
            return report;
        }
    };
    let eta = match eta_quotient_coeffs(p, p as usize * k_max) {
        Ok(e) => e,
        Err(e) => {
            report.error(e.to_string());
            return report;
        }
    };
    for (k, a, r) in mismatches(&eta, &derived.values(k_max)) {
        report.violation(
            "a_{p,pk} = P1(k) + P2(k - offset)",
            &[("p", p.into()), ("k", k.into())],
            json_int(&a),
            &format!("={r}"),
        );
    }
    let printed_mismatch: Vec<Value> = mismatches(&eta, &printed.values(k_max))
        .into_iter()
        .map(|(k, a, r)| json!({"k": k, "a": json_int(&a), "rhs": json_uint(&r)}))
        .collect();
    report.set_data("derived", derived.describe());
    report.set_data(
        "printed_offset",
        json!({
            "offset": printed.offset,
            "agrees": printed_mismatch.is_empty(),
            "first_mismatches": printed_mismatch.into_iter().take(5).collect::<Vec<_>>(),
        }),
    );
    report
}

/// a_{p, j}·a_{p, j+p} ≥ 0 for 0 ≤ j ≤ J − p.
pub fn sign_coherence_check(p: u64, j_max: usize) -> ReportDocument {
    let mut report = ReportDocument::new("coherence")
        .param("p", p)
        .param("j_max", j_max);
    let eta = match eta_quotient_coeffs(p, j_max) {
        Ok(e) => e,
        Err(e) => {
            report.error(e.to_string());
            return report;
        }
    };
    let p = p as usize;
    for j in 0..=j_max.saturating_sub(p) {
        if j + p > j_max {
            break;
        }
        let (a, b) = (eta.get(j), eta.get(j + p));
        if (a * b).is_negative() {
            report.violation(
                "a_{p,j} * a_{p,j+p} >= 0",
                &[("p", p.into()), ("j", j.into())],
                json!([json_int(a), json_int(b)]),
                ">=0",
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn pentagonal_examples() {
        assert_eq!(
            pentagonal_series(6).to_i64s().unwrap(),
            vec![1, -1, -1, 0, 0, 1]
        );
        assert_eq!(pentagonal_series(0), IntPolynomial::one());
        let p15 = pentagonal_series(15).to_i64s().unwrap();
        let mut expected = vec![0; 16];
        for (e, c) in [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)] {
            expected[e] = c;
        }
        assert_eq!(p15, expected);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(ints(&eta_quotient_coeffs(3, 6).unwrap().coeffs), vec![1, -1, -1, 1, -1, 0, 2]);
        assert_eq!(ints(&eta_quotient_coeffs(5, 5).unwrap().coeffs), vec![1, -1, -1, 0, 0, 2]);
        assert_eq!(
            ints(&eta_quotient_coeffs(7, 7).unwrap().coeffs),
            vec![1, -1, -1, 0, 0, 1, 0, 2]
        );
        // (1 - q)(1 - q^3)
        assert_eq!(ints(&eta_quotient_coeffs(2, 4).unwrap().coeffs), vec![1, -1, 0, -1, 1]);
        assert!(matches!(eta_quotient_coeffs(9, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn restricted_examples() {
        let s9 = RestrictedPartitionSpec::new(9, [0, 4, 5]);
        assert_eq!(restricted_partition_count(2, &s9), BigUint::from(2u32));
        assert_eq!(restricted_partition_count(0, &s9), BigUint::one());
        assert_eq!(restricted_partition_count(-3, &s9), BigUint::zero());
        let s15 = RestrictedPartitionSpec::new(15, [0, 7, 8]);
        assert_eq!(restricted_partition_count(1, &s15), BigUint::one());
        let reduced = RestrictedPartitionSpec::new(21, [0, -4, 25, 4]);
        assert_eq!(reduced.forbidden().iter().copied().collect::<Vec<_>>(), vec![0, 4, 17]);
    }

    #[test]
    fn stanley_examples() {
        assert_eq!(stanley_rhs(3, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(stanley_rhs(5, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(stanley_rhs(7, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(
            stanley_rhs_with(7, 1, OffsetConvention::Printed).unwrap(),
            BigUint::one()
        );
        let t7 = StanleyTerms::new(7, OffsetConvention::Derived).unwrap();
        assert_eq!(t7.offset, 1);
        assert_eq!(
            t7.second.unwrap().forbidden().iter().copied().collect::<Vec<_>>(),
            vec![0, 4, 17]
        );
        assert!(matches!(stanley_rhs(2, 1), Err(Error::Unsupported(_))));
        assert!(stanley_rhs(9, 1).is_err());
    }

    #[test]
    fn stanley_reports() {
        assert!(verify_stanley_formula(3, 2).is_pass());
        assert!(verify_stanley_formula(5, 1).is_pass());
        let r7 = verify_stanley_formula(7, 1);
        assert!(r7.is_pass());
        assert_eq!(r7.data["printed_offset"]["agrees"], json!(false));
        assert_eq!(r7.data["printed_offset"]["first_mismatches"][0]["k"], json!(1));
    }

    #[test]
    fn coherence_reports() {
        assert!(sign_coherence_check(3, 6).is_pass());
        assert!(sign_coherence_check(2, 4).is_pass());
        assert!(sign_coherence_check(5, 5).is_pass());
        assert!(sign_coherence_check(5, 3).is_pass());
        assert_eq!(sign_coherence_check(4, 10).status, crate::Status::Error);
    }
}
