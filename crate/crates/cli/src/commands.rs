//! Per-item work for each subcommand.

use borwein_core::borwein::{self, sign_pattern_violations, BorweinSeries};
use borwein_core::modcount;
use borwein_core::qpoly::{expand_product_with, Engine, IntPolynomial, ProductSpec};
use borwein_core::report::{json_int, ReportDocument};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

/// Sign violations kept per product; the total is always reported.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Product {
    First,
    Squared,
    Mod5,
}

impl Product {
    pub fn spec(self, n: u64) -> ProductSpec {
        match self {
            Product::First => ProductSpec::borwein_first(n),
            Product::Squared => ProductSpec::borwein_squared(n),
            Product::Mod5 => ProductSpec::borwein_mod5(n),
        }
    }

    /// Exponents divisible by this are expected non-negative, the rest non-positive.
    pub fn period(self) -> usize {
        match self {
            Product::First | Product::Squared => 3,
            Product::Mod5 => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Product::First => "first",
            Product::Squared => "squared",
            Product::Mod5 => "mod5",
        }
    }
}

/// Degree, end coefficients, reversal symmetry and value at q = 1 of an
/// expanded product, as an (expected, actual) pair.
pub fn structure(spec: &ProductSpec, p: &IntPolynomial) -> (Value, Value) {
    let sign = if spec.factor_count() % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let degree = spec.output_degree();
    let expected = json!({
        "degree": degree,
        "a_0": 1,
        "a_deg": json_int(&sign),
        "reverse_is_signed_copy": true,
        "value_at_1": 0,
    });
    let actual = json!({
        "degree": p.degree(),
        "a_0": json_int(&p.coeff(0)),
        "a_deg": json_int(&p.coeff(degree)),
        "reverse_is_signed_copy": p.reverse() == p.scale(&sign),
        "value_at_1": json_int(&p.eval_at(&BigInt::one())),
    });
    (expected, actual)
}

/// Sign pattern and structure of one product for one n.
pub fn check_product(report: &mut ReportDocument, product: Product, n: u64, engine: Engine) {
    let spec = product.spec(n);
    let poly = match expand_product_with(&spec, engine) {
        Ok(p) => p,
        Err(e) => {
            report.error(format!("{} n={n}: {e}", product.name()));
            return;
        }
    };
    let (expected, actual) = structure(&spec, &poly);
    report.cross_check(format!("structure, {} n={n}", product.name()), expected, actual);
    let violations = sign_pattern_violations(&poly, product.period());
    for v in violations.iter().take(MAX_LISTED_VIOLATIONS) {
        report.violation(
            &format!("sign pattern mod {}", product.period()),
            &[
                ("product", product.name().into()),
                ("n", n.into()),
                ("j", v.exponent.into()),
            ],
            json_int(&v.coefficient),
            v.expected.as_str(),
        );
    }
    report.set_data(
        product.name(),
        json!({"degree": poly.degree(), "sign_violations": violations.len()}),
    );
}

pub fn verify(n: u64, engine: Engine) -> ReportDocument {
    let mut r = ReportDocument::new("verify");
    check_product(&mut r, Product::First, n, engine);
    r
}

pub fn conjecture23(n: u64, products: &[Product], engine: Engine) -> ReportDocument {
    let mut r = ReportDocument::new("conjecture23");
    for &p in products {
        check_product(&mut r, p, n, engine);
    }
    r
}

pub fn partial_sums(n: u64, engine: Engine) -> ReportDocument {
    let mut r = borwein::verify_partial_sums(&borwein::expand_borwein_with(n, engine));
    r.params.clear();
    r
}

pub fn modcount(n: u64) -> ReportDocument {
    let mut r = modcount::cross_validate(n);
    r.params.clear();
    r
}

/// The alternating q-binomial sum against the A-polynomial of m factor pairs.
pub fn identity(m: u64, engine: Engine) -> ReportDocument {
    let mut r = ReportDocument::new("identity");
    let via_binomials = borwein::a_via_qbinomial(m);
    let series: BorweinSeries = borwein::expand_borwein_with(m - 1, engine);
    let a = borwein::decompose_abc(&series).a;
    let len = a.coeffs().len().max(via_binomials.coeffs().len());
    match (0..len).find(|&i| a.coeff(i) != via_binomials.coeff(i)) {
        None => {}
        Some(i) => r.violation(
            "A(q) = alternating q-binomial sum",
            &[("m", m.into()), ("i", i.into())],
            json_int(&via_binomials.coeff(i)),
            &format!("={}", a.coeff(i)),
        ),
    }
    r.set_data("degree", json!(a.degree()));
    r
}

pub fn stanley(p: u64, k_max: usize) -> ReportDocument {
    let mut r = borwein_core::partitions::verify_stanley_formula(p, k_max);
    r.params.clear();
    r
}

pub fn coherence(p: u64, j_max: usize) -> ReportDocument {
    let mut r = borwein_core::partitions::sign_coherence_check(p, j_max);
    r.params.clear();
    r
}
