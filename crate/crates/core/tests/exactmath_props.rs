use borwein_core::exactmath::*;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

proptest! {
    #[test]
    fn mobius_sums_over_divisors(n in 1u64..5000) {
        let s: i64 = divisors(n).unwrap().iter().map(|&d| i64::from(mobius(d).unwrap())).sum();
        prop_assert_eq!(s, i64::from(n == 1));
    }

    #[test]
    fn phi_sums_to_n(n in 1u64..5000) {
        let s: u64 = divisors(n).unwrap().iter().map(|&d| euler_phi(d).unwrap()).sum();
        prop_assert_eq!(s, n);
    }

    #[test]
    fn ramanujan_at_zero_is_phi(d in 1u64..3000) {
        prop_assert_eq!(ramanujan_sum(d, 0).unwrap(), euler_phi(d).unwrap() as i64);
    }

    #[test]
    fn ramanujan_depends_only_on_gcd(d in 1u64..500, b in -2000i64..2000) {
        let g = (b.unsigned_abs()).gcd(&d) as i64;
        prop_assert_eq!(ramanujan_sum(d, b).unwrap(), ramanujan_sum(d, g).unwrap());
        prop_assert_eq!(ramanujan_sum(d, b).unwrap(), ramanujan_sum(d, b + d as i64).unwrap());
    }

    #[test]
    fn ramanujan_sums_vanish_over_a_period(d in 2u64..300) {
        let s: i64 = (0..d as i64).map(|b| ramanujan_sum(d, b).unwrap()).sum();
        prop_assert_eq!(s, 0);
    }

    #[test]
    fn trinomial_rows(m in 0u64..60) {
        let row: Vec<BigUint> = (0..=2 * m).map(|k| trinomial_coeff(m, k)).collect();
        let total: BigUint = row.iter().sum();
        prop_assert_eq!(total, BigUint::from(3u32).pow(m as u32));
        let mut alt = BigInt::zero();
        for (k, c) in row.iter().enumerate() {
            let c = BigInt::from(c.clone());
            if k % 2 == 0 { alt += c } else { alt -= c }
        }
        prop_assert_eq!(alt, BigInt::one());
        for k in 0..=2 * m as usize {
            prop_assert_eq!(&row[k], &row[2 * m as usize - k]);
        }
    }

    #[test]
    fn binomial_pascal(n in 1u64..200, k in 1u64..200) {
        prop_assume!(k <= n);
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
}

#[test]
fn ramanujan_against_roots_of_unity() {
    // c_d(b) = Σ_{gcd(a,d)=1} cos(2πab/d)
    for d in 1..=60u64 {
        for b in 0..=60i64 {
            let direct: f64 = (1..=d)
                .filter(|a| a.gcd(&d) == 1)
                .map(|a| (2.0 * std::f64::consts::PI * (a as f64) * (b as f64) / d as f64).cos())
                .sum();
            assert_eq!(ramanujan_sum(d, b).unwrap(), direct.round() as i64, "d={d} b={b}");
        }
    }
}

#[test]
fn cycle_types_count_all_permutations() {
    for k in 1..=10u64 {
        let total: BigUint = CycleType::all(k)
            .iter()
            .map(|t| cycle_type_count(t).unwrap())
            .sum();
        assert_eq!(total, factorial(k), "k={k}");
    }
}

#[test]
fn cycle_index_gives_rising_factorial() {
    // Σ_c N(c) q^{#cycles} = q(q+1)⋯(q+k−1), and with sign (−1)^{k−#cycles}
    // the falling factorial q(q−1)⋯(q−k+1).
    for k in 1..=8u64 {
        for q in -5i64..=5 {
            let mut rising = BigInt::zero();
            let mut falling = BigInt::zero();
            for t in CycleType::all(k) {
                let n = BigInt::from(cycle_type_count(&t).unwrap());
                let c = t.cycle_count() as u32;
                let term = &n * BigInt::from(q).pow(c);
                rising += &term;
                if (k - c as u64) % 2 == 0 { falling += term } else { falling -= term }
            }
            assert_eq!(rising, rising_factorial(q, k), "k={k} q={q}");
            let direct: BigInt = (0..k as i64).map(|i| BigInt::from(q - i)).product();
            assert_eq!(falling, direct, "k={k} q={q}");
        }
    }
}

#[test]
fn context_agrees_with_free_functions() {
    let ctx = ArithmeticContext::new();
    for d in 1..=120u64 {
        assert_eq!(ctx.divisors(d).unwrap(), divisors(d).unwrap());
        assert_eq!(ctx.mobius(d).unwrap(), mobius(d).unwrap());
        for b in -10..=10 {
            assert_eq!(ctx.ramanujan_sum(d, b).unwrap(), ramanujan_sum(d, b).unwrap());
        }
    }
}

#[test]
fn zero_arguments_are_domain_errors() {
    assert!(divisors(0).is_err());
    assert!(mobius(0).is_err());
    assert!(euler_phi(0).is_err());
    assert!(ramanujan_sum(0, 1).is_err());
}
