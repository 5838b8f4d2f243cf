use borwein_core::exactmath::binomial;
use borwein_core::modcount::*;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

#[test]
fn divisor_formula_matches_dp_up_to_30() {
    for n in 0..=30u64 {
        let dp = dp_signed_counts(n);
        let f = DivisorFormula::new(n).unwrap();
        let table = f.table().unwrap();
        assert_eq!(dp.first_difference(&table), None, "n={n}");
        assert_eq!(dp.signed, table.signed);
        for (b, v) in dp.signed.iter().enumerate().step_by(3) {
            assert!(v.is_positive(), "n={n} b={b}");
        }
    }
}

#[test]
fn enumeration_matches_dp_up_to_6() {
    for n in 0..=6u64 {
        let e = enumerate_signed_counts(n).unwrap();
        assert_eq!(dp_signed_counts(n).first_difference(&e), None, "n={n}");
    }
    assert!(enumerate_signed_counts(7).is_ok());
    assert!(enumerate_signed_counts(ENUMERATION_MAX_SET_SIZE).is_err());
}

#[test]
fn table_invariants() {
    for n in 0..=20u64 {
        let t = dp_signed_counts(n);
        let size = t.set_size() as u64;
        assert_eq!(size, 2 * modulus_for(n) / 3);
        for k in 0..=t.set_size() {
            let row: BigUint = (0..modulus_for(n) as usize).map(|b| t.count(k, b).clone()).sum();
            assert_eq!(row, binomial(size, k as u64), "n={n} k={k}");
        }
        assert_eq!(*t.count(0, 0), BigUint::from(1u32));
        assert!((1..modulus_for(n) as usize).all(|b| t.count(0, b).is_zero()));
        assert!(t.signed.iter().sum::<BigInt>().is_zero());
    }
}

#[test]
fn divisor_formula_handles_negative_and_large_residues() {
    let f = DivisorFormula::new(3).unwrap();
    let n12 = modulus_for(3) as i64;
    for b in 0..n12 {
        assert_eq!(f.signed(b).unwrap(), f.signed(b - n12).unwrap());
        assert_eq!(f.signed(b).unwrap(), f.signed(b + 5 * n12).unwrap());
    }
}

#[test]
fn printed_formula_is_reported_not_trusted() {
    let e = printed_formula_eval(1, 0).unwrap();
    assert_eq!(e.oracle, BigInt::from(4));
    assert!(!e.discrepancy.is_zero());
    assert!(printed_formula_eval(1, 1).is_err());
    let r = cross_validate(1);
    assert!(r.is_pass());
    assert_eq!(r.data["printed_formula"]["evaluations"][0]["discrepancy"], "1/3");
}

#[test]
fn off_class_values_are_negative_in_range() {
    // Observation only: M(b) < 0 whenever 3 ∤ b, for small n.
    for n in 0..=15u64 {
        let t = dp_signed_counts(n);
        for (b, v) in t.signed.iter().enumerate().filter(|(b, _)| b % 3 != 0) {
            assert!(v.is_negative(), "n={n} b={b}");
        }
    }
}
