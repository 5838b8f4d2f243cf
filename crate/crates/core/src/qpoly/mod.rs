//! Dense univariate polynomials with exact integer coefficients.
//!
//! Everything is exact. Trailing zeros are trimmed after every operation, so
//! the zero polynomial is the one with no stored coefficients.

mod multimod;
mod product;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use multimod::expand_multimodular;
pub use product::{expand_product, expand_product_with, Engine, ProductSpec};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    /// `c·q^e`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        Self::new(coeffs)
    }

    /// `1 − q^m`.
    pub fn binomial_factor(m: usize) -> Self {
        let mut p = Self::one();
        p.mul_sparse_factor_in_place(m, None);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients for exponents `0..=degree`; empty for zero.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^e`, zero beyond the degree.
    pub fn coeff(&self, e: usize) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    /// Coefficients as `i64`, or `None` if any of them does not fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// `P·(1 − q^m)`, truncated to degree `trunc` when given.
    pub fn mul_sparse_factor(&self, m: usize, trunc: Option<usize>) -> Self {
        let mut out = self.clone();
        out.mul_sparse_factor_in_place(m, trunc);
        out
    }

    /// In-place form of [`Self::mul_sparse_factor`]; c_e ← c_e − c_{e−m}, descending in e.
    pub fn mul_sparse_factor_in_place(&mut self, m: usize, trunc: Option<usize>) {
        assert!(m >= 1, "sparse factor exponent must be positive");
        if self.is_zero() {
            return;
        }
        let mut len = self.coeffs.len() + m;
        if let Some(t) = trunc {
            len = len.min(t + 1);
        }
        self.coeffs.resize(len, BigInt::zero());
        for e in (m..len).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(e);
            hi[0] -= &lo[e - m];
        }
        trim(&mut self.coeffs);
    }

    /// Schoolbook product, truncated to degree `trunc` when given.
    pub fn mul_trunc(&self, other: &Self, trunc: Option<usize>) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(t) = trunc {
            len = len.min(t + 1);
        }
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Quotient `R` with `R·divisor = self`; any remainder is an error.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let dlead = match divisor.coeffs.last() {
            Some(c) => c,
            None => return Err(Error::domain("division by the zero polynomial")),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Err(Error::InexactDivision {
                remainder_degree: self.coeffs.len() - 1,
            });
        }
        let terms: Vec<(usize, &BigInt)> = divisor
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(dlead);
            if !r.is_zero() {
                return Err(Error::InexactDivision {
                    remainder_degree: i + dd,
                });
            }
            for &(j, c) in &terms {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        if let Some(pos) = rem.iter().rposition(|c| !c.is_zero()) {
            return Err(Error::InexactDivision {
                remainder_degree: pos,
            });
        }
        Ok(Self::new(quot))
    }

    /// `P^e` by repeated squaring, truncated when requested; `P^0 = 1`.
    pub fn pow_trunc(&self, mut e: u64, trunc: Option<usize>) -> Self {
        let mut result = Self::one().truncate(trunc);
        let mut base = self.truncate(trunc);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_trunc(&base, trunc);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_trunc(&base, trunc);
            }
        }
        result
    }

    /// Drops every term above degree `trunc`.
    pub fn truncate(&self, trunc: Option<usize>) -> Self {
        match trunc {
            Some(t) if self.coeffs.len() > t + 1 => Self::new(self.coeffs[..=t].to_vec()),
            _ => self.clone(),
        }
    }

    /// Horner evaluation at an integer point.
    pub fn eval_at(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients read back to front, `q^deg·P(1/q)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// `q^k·P`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// `P(q^k)` for k ≥ 1.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::new(c)
    }

    /// Every `stride`-th coefficient starting at `offset`, as a new polynomial.
    pub fn stride(&self, offset: usize, stride: usize) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .skip(offset)
                .step_by(stride)
                .cloned()
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }
}

fn trim(coeffs: &mut Vec<BigInt>) {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut c = long.coeffs.clone();
        for (a, b) in c.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        IntPolynomial::new(c)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.mul_trunc(rhs, None)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

/// The Gaussian binomial [n; k]_q via the q-Pascal rule
/// [n; k] = [n−1; k−1] + q^k·[n−1; k]. Zero when k > n.
pub fn gaussian_binomial(n: usize, k: usize) -> IntPolynomial {
    if k > n {
        return IntPolynomial::zero();
    }
    gaussian_binomial_row(n, k).swap_remove(k)
}

/// `[n; 0], …, [n; kmax]` (clamped to n) in one q-Pascal sweep.
pub fn gaussian_binomial_row(n: usize, kmax: usize) -> Vec<IntPolynomial> {
    let kmax = kmax.min(n);
    let mut row = vec![IntPolynomial::one()];
    for m in 1..=n {
        let top = kmax.min(m);
        let mut next = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let left = if k >= 1 { row.get(k - 1) } else { None };
            let right = row.get(k).map(|p| p.shift(k));
            next.push(match (left, right) {
                (Some(a), Some(b)) => a + &b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b,
                (None, None) => IntPolynomial::zero(),
            });
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn trims_and_zero() {
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(p(&[1, -1]).mul_sparse_factor(1, None), p(&[1, -2, 1]));
    }

    #[test]
    fn sparse_factor_examples() {
        assert_eq!(p(&[1, -1]).mul_sparse_factor(2, None), p(&[1, -1, -1, 1]));
        assert_eq!(
            IntPolynomial::one().mul_sparse_factor(5, None),
            p(&[1, 0, 0, 0, 0, -1])
        );
        assert_eq!(
            p(&[1, -1, -1, 1]).mul_sparse_factor(4, None),
            p(&[1, -1, -1, 1, -1, 1, 1, -1])
        );
        assert_eq!(
            p(&[1, -1, -1, 1]).mul_sparse_factor(4, Some(4)),
            p(&[1, -1, -1, 1, -1])
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
        let a = p(&[3, 0, -7, 2]);
        assert_eq!(&a * &IntPolynomial::one(), a);
        assert_eq!(&p(&[1, -1, 1]) * &p(&[1, -1, 1]), p(&[1, -2, 3, -2, 1]));
        assert_eq!(p(&[1, 1]).mul_trunc(&p(&[1, 1]), Some(1)), p(&[1, 2]));
        assert!((&a * &IntPolynomial::zero()).is_zero());
    }

    #[test]
    fn exact_div_examples() {
        let num = &p(&[1, 0, 0, 1]) * &p(&[1, 0, 0, 1]);
        let den = p(&[1, 2, 1]);
        assert_eq!(num.exact_div(&den).unwrap(), p(&[1, -2, 3, -2, 1]));
        let a = p(&[4, -1, 9]);
        assert_eq!(a.exact_div(&IntPolynomial::one()).unwrap(), a);
        assert_eq!(
            IntPolynomial::binomial_factor(6)
                .exact_div(&IntPolynomial::binomial_factor(2))
                .unwrap(),
            p(&[1, 0, 1, 0, 1])
        );
    }

    #[test]
    fn exact_div_errors() {
        assert!(matches!(
            p(&[1, 0, 1]).exact_div(&p(&[1, 1])),
            Err(Error::InexactDivision { .. })
        ));
        assert!(matches!(
            p(&[1, 1]).exact_div(&IntPolynomial::zero()),
            Err(Error::Domain(_))
        ));
        // non-unit leading coefficient that does not divide
        assert!(p(&[0, 1]).exact_div(&p(&[0, 2])).is_err());
    }

    #[test]
    fn pow_examples() {
        assert_eq!(p(&[1, 1]).pow_trunc(2, None), p(&[1, 2, 1]));
        assert_eq!(p(&[5, 7]).pow_trunc(0, None), IntPolynomial::one());
        assert_eq!(p(&[1, 1, 1]).pow_trunc(2, None), p(&[1, 2, 3, 2, 1]));
        assert_eq!(p(&[1, 1]).pow_trunc(10, Some(2)), p(&[1, 10, 45]));
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_binomial(4, 2), p(&[1, 1, 2, 1, 1]));
        assert_eq!(gaussian_binomial(9, 0), IntPolynomial::one());
        assert_eq!(
            gaussian_binomial(6, 3),
            p(&[1, 1, 2, 3, 3, 3, 3, 2, 1, 1])
        );
        assert!(gaussian_binomial(2, 3).is_zero());
        // product-formula oracle for [4;2]
        let num = &IntPolynomial::binomial_factor(3) * &IntPolynomial::binomial_factor(4);
        let den = &IntPolynomial::binomial_factor(1) * &IntPolynomial::binomial_factor(2);
        assert_eq!(num.exact_div(&den).unwrap(), gaussian_binomial(4, 2));
    }

    #[test]
    fn eval_examples() {
        let one = BigInt::one();
        assert_eq!(p(&[1, 0, -1]).eval_at(&one), BigInt::zero());
        assert_eq!(gaussian_binomial(4, 2).eval_at(&one), BigInt::from(6));
        assert_eq!(
            p(&[1, -2, 3, -2, 1]).eval_at(&BigInt::from(-1)),
            BigInt::from(9)
        );
    }

    #[test]
    fn helpers() {
        let a = p(&[1, 2, 3]);
        assert_eq!(a.reverse(), p(&[3, 2, 1]));
        assert_eq!(a.shift(2), p(&[0, 0, 1, 2, 3]));
        assert_eq!(a.substitute_power(3), p(&[1, 0, 0, 2, 0, 0, 3]));
        assert_eq!(p(&[1, 9, 9, 2, 9, 9, 3]).stride(0, 3), a);
        assert_eq!(&a - &a, IntPolynomial::zero());
        assert_eq!(p(&[1, -1, 0, 3]).to_string(), "1 - q + 3q^3");
        assert_eq!(p(&[0, -2, 1]).to_string(), "-2q + q^2");
    }
}
