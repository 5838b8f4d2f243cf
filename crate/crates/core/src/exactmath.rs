//! Exact integer arithmetic: divisors, Möbius, totient, Ramanujan sums,
//! binomial and trinomial coefficients, rising factorials and permutation
//! cycle-type counts.
//!
//! Inputs are desk-scale, so factorization is plain trial division.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn require_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::domain(format!("{what} requires n >= 1, got 0")))
    } else {
        Ok(())
    }
}

/// Prime factorization by trial division, as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    require_positive(n, "divisors")?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

pub fn mobius(n: u64) -> Result<i8> {
    require_positive(n, "mobius")?;
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

pub fn euler_phi(n: u64) -> Result<u64> {
    require_positive(n, "euler_phi")?;
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

/// Ramanujan's sum c_d(b) = Σ_{i | gcd(d, b)} μ(d/i)·i, with gcd(d, 0) = d.
///
/// Never evaluated through roots of unity.
pub fn ramanujan_sum(d: u64, b: i64) -> Result<i64> {
    require_positive(d, "ramanujan_sum")?;
    let g = (b.unsigned_abs()).gcd(&d);
    let mut total = 0i64;
    for i in divisors(g)? {
        total += i64::from(mobius(d / i)?) * i as i64;
    }
    Ok(total)
}

/// Exact C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Coefficient of x^k in (1 + x + x²)^m.
///
/// Uses T(m, k) = Σ_j C(m, j)·C(m − j, k − 2j), where j counts the x² picks.
pub fn trinomial_coeff(m: u64, k: u64) -> BigUint {
    if k > 2 * m {
        return BigUint::zero();
    }
    let mut total = BigUint::zero();
    for j in 0..=k / 2 {
        if j > m || k - 2 * j > m - j {
            continue;
        }
        total += binomial(m, j) * binomial(m - j, k - 2 * j);
    }
    total
}

/// q(q+1)⋯(q+k−1); the empty product for k = 0.
pub fn rising_factorial(q: i64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (BigInt::from(q) + i))
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Cycle type (c_1, …, c_k) of a permutation in S_k: c_i cycles of length i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    counts: Vec<u64>,
}

impl CycleType {
    /// `counts[i - 1]` is the number of cycles of length `i`.
    pub fn new(counts: Vec<u64>) -> Self {
        CycleType { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Σ i·c_i, the size of the permuted set.
    pub fn size(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum()
    }

    /// Total number of cycles Σ c_i.
    pub fn cycle_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Every cycle type of S_k, each padded to length k.
    pub fn all(k: u64) -> Vec<CycleType> {
        fn go(len: u64, remaining: u64, counts: &mut Vec<u64>, out: &mut Vec<CycleType>) {
            if len == 0 {
                if remaining == 0 {
                    out.push(CycleType::new(counts.clone()));
                }
                return;
            }
            for c in 0..=remaining / len {
                counts[len as usize - 1] = c;
                go(len - 1, remaining - c * len, counts, out);
            }
            counts[len as usize - 1] = 0;
        }
        let mut out = Vec::new();
        let mut counts = vec![0; k as usize];
        go(k, k, &mut counts, &mut out);
        out
    }
}

/// Number of permutations of S_k with cycle type `t`: k! / ∏ i^{c_i} c_i!.
///
/// `k` is taken to be `t.counts().len()`; the type must satisfy Σ i·c_i = k.
pub fn cycle_type_count(t: &CycleType) -> Result<BigUint> {
    let k = t.counts.len() as u64;
    if t.size() != k {
        return Err(Error::domain(format!(
            "cycle type {:?} has weight {} but k = {k}",
            t.counts,
            t.size()
        )));
    }
    let mut denom = BigUint::one();
    for (i, &c) in t.counts.iter().enumerate() {
        let len = BigUint::from(i as u64 + 1);
        denom *= len.pow(c as u32) * factorial(c);
    }
    let (q, r) = factorial(k).div_rem(&denom);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Memoizing front for [`divisors`] and [`mobius`], shareable across threads.
#[derive(Debug, Default)]
pub struct ArithmeticContext {
    divisors: RwLock<HashMap<u64, Vec<u64>>>,
    mobius: RwLock<HashMap<u64, i8>>,
}

impl ArithmeticContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn divisors(&self, n: u64) -> Result<Vec<u64>> {
        if let Some(v) = self.divisors.read().unwrap().get(&n) {
            return Ok(v.clone());
        }
        let v = divisors(n)?;
        self.divisors.write().unwrap().insert(n, v.clone());
        Ok(v)
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        if let Some(&v) = self.mobius.read().unwrap().get(&n) {
            return Ok(v);
        }
        let v = mobius(n)?;
        self.mobius.write().unwrap().insert(n, v);
        Ok(v)
    }

    pub fn ramanujan_sum(&self, d: u64, b: i64) -> Result<i64> {
        require_positive(d, "ramanujan_sum")?;
        let g = b.unsigned_abs().gcd(&d);
        let mut total = 0i64;
        for i in self.divisors(g)? {
            total += i64::from(self.mobius(d / i)?) * i as i64;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(6).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert!(matches!(divisors(0), Err(Error::Domain(_))));
    }

    #[test]
    fn mobius_and_phi_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(6).unwrap(), 1);
        assert_eq!(mobius(12).unwrap(), 0);
        assert!(mobius(0).is_err());
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(3).unwrap(), 2);
        assert_eq!(euler_phi(6).unwrap(), 2);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan_sum(3, 0).unwrap(), 2);
        assert_eq!(ramanujan_sum(6, 3).unwrap(), -2);
        assert_eq!(ramanujan_sum(6, 1).unwrap(), 1);
        assert_eq!(ramanujan_sum(6, -3).unwrap(), -2);
        assert!(ramanujan_sum(0, 1).is_err());
    }

    #[test]
    fn binomial_and_trinomial_examples() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(trinomial_coeff(2, 2), BigUint::from(3u32));
        assert_eq!(trinomial_coeff(7, 0), BigUint::one());
        assert_eq!(trinomial_coeff(2, 5), BigUint::zero());
        let row: Vec<u32> = (0..=4)
            .map(|k| trinomial_coeff(2, k).try_into().unwrap())
            .collect();
        assert_eq!(row, vec![1, 2, 3, 2, 1]);
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(3, 2), BigInt::from(12));
        assert_eq!(rising_factorial(-4, 0), BigInt::one());
        assert_eq!(rising_factorial(1, 4), BigInt::from(24));
        assert_eq!(rising_factorial(-2, 3), BigInt::zero());
    }

    #[test]
    fn cycle_type_examples() {
        let c = |v: Vec<u64>| cycle_type_count(&CycleType::new(v)).unwrap();
        assert_eq!(c(vec![1, 1, 0]), BigUint::from(3u32));
        assert_eq!(c(vec![3, 0, 0]), BigUint::one());
        assert_eq!(c(vec![0, 0, 1]), BigUint::from(2u32));
        assert!(cycle_type_count(&CycleType::new(vec![1, 0, 1])).is_err());
    }

    #[test]
    fn cycle_type_enumeration_counts_partitions() {
        // p(k) for k = 0..8
        let p = [1, 1, 2, 3, 5, 7, 11, 15, 22];
        for (k, &expected) in p.iter().enumerate() {
            assert_eq!(CycleType::all(k as u64).len(), expected);
        }
    }

    #[test]
    fn context_matches_free_functions() {
        let ctx = ArithmeticContext::new();
        for n in 1..60 {
            assert_eq!(ctx.divisors(n).unwrap(), divisors(n).unwrap());
            assert_eq!(ctx.mobius(n).unwrap(), mobius(n).unwrap());
            // second call hits the cache
            assert_eq!(ctx.mobius(n).unwrap(), mobius(n).unwrap());
            for b in -5..20 {
                assert_eq!(
                    ctx.ramanujan_sum(n, b).unwrap(),
                    ramanujan_sum(n, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
