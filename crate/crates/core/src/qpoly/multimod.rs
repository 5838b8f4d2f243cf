//! Multi-modular expansion of sparse binomial products.
//!
//! The `(1 − q^m)` recurrence is run independently modulo a set of primes just
//! below 2^62 and the coefficients are recovered with Garner's algorithm. Each
//! factor has coefficient 1-norm 2, so every coefficient of a product of F
//! factors is bounded by 2^F in absolute value; enough primes are taken that
//! their product exceeds 2^(F+1).

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{IntPolynomial, ProductSpec};

const PRIME_BITS: u32 = 62;

pub fn expand_multimodular(spec: &ProductSpec) -> IntPolynomial {
    let len = spec.output_degree() + 1;
    let factors = spec.factor_count();
    let primes = primes_below_2_62(prime_count_for_bound(factors));
    let exponents = spec.exponents();

    let residues: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&p| expand_mod(&exponents, spec.multiplicity, len, p))
        .collect();

    let crt = Crt::new(primes);
    let coeffs: Vec<BigInt> = (0..len)
        .into_par_iter()
        .with_min_len(1024)
        .map_init(
            || vec![0u64; crt.primes.len()],
            |digits, e| {
                for (d, r) in digits.iter_mut().zip(&residues) {
                    *d = r[e];
                }
                crt.reconstruct(digits)
            },
        )
        .collect();
    IntPolynomial::new(coeffs)
}

/// Primes needed so that their product exceeds 2^(factors + 1).
fn prime_count_for_bound(factors: u64) -> usize {
    // each prime exceeds 2^(PRIME_BITS - 1)
    ((factors + 2) / u64::from(PRIME_BITS - 1) + 1) as usize
}

fn expand_mod(exponents: &[u64], multiplicity: u32, len: usize, p: u64) -> Vec<u64> {
    let mut c = vec![0u64; len];
    c[0] = 1;
    let mut cur = 0usize;
    for &m in exponents {
        let m = m as usize;
        for _ in 0..multiplicity {
            cur = (cur + m).min(len - 1);
            // c[e] -= c[e - m] for e descending; blocks of width m never overlap
            // their source, so each block is a plain slice operation.
            let mut hi = cur + 1;
            while hi > m {
                let lo = hi.saturating_sub(m).max(m);
                let (src, dst) = c.split_at_mut(lo);
                sub_assign_mod(&mut dst[..hi - lo], &src[lo - m..hi - m], p);
                hi = lo;
            }
        }
    }
    c
}

#[inline]
fn sub_assign_mod(dst: &mut [u64], src: &[u64], p: u64) {
    for (d, s) in dst.iter_mut().zip(src) {
        let (x, borrow) = d.overflowing_sub(*s);
        *d = if borrow { x.wrapping_add(p) } else { x };
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below 2^62, descending.
fn primes_below_2_62(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << PRIME_BITS) - 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Multiplier `w` with its Shoup companion `⌊w·2^64 / p⌋`.
#[derive(Clone, Copy)]
struct Shoup {
    w: u64,
    w_shoup: u64,
}

impl Shoup {
    fn new(w: u64, p: u64) -> Self {
        Shoup {
            w,
            w_shoup: (((w as u128) << 64) / p as u128) as u64,
        }
    }

    #[inline]
    fn mul(self, x: u64, p: u64) -> u64 {
        let q = ((x as u128 * self.w_shoup as u128) >> 64) as u64;
        let r = x.wrapping_mul(self.w).wrapping_sub(q.wrapping_mul(p));
        if r >= p {
            r - p
        } else {
            r
        }
    }
}

struct Crt {
    primes: Vec<u64>,
    /// `inverses[i][j]` is p_j^{-1} mod p_i for j < i.
    inverses: Vec<Vec<Shoup>>,
    /// Mixed-radix digits of ⌊M/2⌋, M the product of all primes.
    half: Vec<u64>,
}

impl Crt {
    fn new(primes: Vec<u64>) -> Self {
        let inverses = primes
            .iter()
            .enumerate()
            .map(|(i, &pi)| {
                primes[..i]
                    .iter()
                    .map(|&pj| Shoup::new(pow_mod(pj % pi, pi - 2, pi), pi))
                    .collect()
            })
            .collect();
        let modulus: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
        let mut rest: BigUint = modulus >> 1u32;
        let half = primes
            .iter()
            .map(|&p| {
                let d = (&rest % p).to_u64().unwrap();
                rest /= p;
                d
            })
            .collect();
        Crt {
            primes,
            inverses,
            half,
        }
    }

    /// Turns residues into mixed-radix digits in place and returns the
    /// symmetric representative.
    fn reconstruct(&self, digits: &mut [u64]) -> BigInt {
        for i in 1..digits.len() {
            let p = self.primes[i];
            let mut x = digits[i];
            for j in 0..i {
                let mut v = digits[j];
                if v >= p {
                    v -= p;
                }
                x = if x >= v { x - v } else { x + (p - v) };
                x = self.inverses[i][j].mul(x, p);
            }
            digits[i] = x;
        }
        let negative = digits
            .iter()
            .zip(&self.half)
            .rev()
            .find(|(d, h)| d != h)
            .is_some_and(|(d, h)| d > h);
        if negative {
            for (d, &p) in digits.iter_mut().zip(&self.primes) {
                *d = p - 1 - *d;
            }
        }
        let mut mag = self.horner(digits);
        if negative {
            mag += 1u32;
            BigInt::from_biguint(Sign::Minus, mag)
        } else {
            BigInt::from_biguint(Sign::Plus, mag)
        }
    }

    fn horner(&self, digits: &[u64]) -> BigUint {
        let top = match digits.iter().rposition(|&d| d != 0) {
            Some(t) => t,
            None => return BigUint::zero(),
        };
        if top == 0 {
            return BigUint::from(digits[0]);
        }
        let mut acc = BigUint::from(digits[top]);
        for i in (0..top).rev() {
            acc *= self.primes[i];
            acc += digits[i];
        }
        acc
    }
}
