use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{expand_multimodular, IntPolynomial};

/// ∏_{j=0..=upper_index} ∏_{r ∈ residues} (1 − q^{modulus·j + r})^multiplicity,
/// optionally truncated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductSpec {
    pub modulus: u64,
    pub residues: BTreeSet<u64>,
    pub multiplicity: u32,
    pub upper_index: u64,
    pub truncation: Option<usize>,
}

impl ProductSpec {
    pub fn new(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        multiplicity: u32,
        upper_index: u64,
    ) -> Self {
        ProductSpec {
            modulus,
            residues: residues.into_iter().collect(),
            multiplicity,
            upper_index,
            truncation: None,
        }
    }

    pub fn truncated(mut self, degree: usize) -> Self {
        self.truncation = Some(degree);
        self
    }

    /// ∏_{j=0}^n (1 − q^{3j+1})(1 − q^{3j+2}).
    pub fn borwein_first(n: u64) -> Self {
        Self::new(3, [1, 2], 1, n)
    }

    /// The square of [`Self::borwein_first`].
    pub fn borwein_squared(n: u64) -> Self {
        Self::new(3, [1, 2], 2, n)
    }

    /// ∏_{j=0}^n (1 − q^{5j+1})(1 − q^{5j+2})(1 − q^{5j+3})(1 − q^{5j+4}).
    pub fn borwein_mod5(n: u64) -> Self {
        Self::new(5, [1, 2, 3, 4], 1, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modulus == 0 {
            return Err(Error::domain("product modulus must be positive"));
        }
        if self.residues.is_empty() {
            return Err(Error::domain("product needs at least one residue"));
        }
        if let Some(&r) = self.residues.iter().find(|&&r| r >= self.modulus) {
            return Err(Error::domain(format!(
                "residue {r} is not reduced modulo {}",
                self.modulus
            )));
        }
        if self.multiplicity == 0 {
            return Err(Error::domain("multiplicity must be positive"));
        }
        if self.residues.contains(&0) {
            return Err(Error::domain(
                "residue 0 yields the degenerate factor (1 - q^0) at j = 0",
            ));
        }
        Ok(())
    }

    /// Distinct factor exponents in ascending order, each to be applied
    /// `multiplicity` times.
    pub fn exponents(&self) -> Vec<u64> {
        let mut out: Vec<u64> = (0..=self.upper_index)
            .flat_map(|j| self.residues.iter().map(move |&r| self.modulus * j + r))
            .collect();
        out.sort_unstable();
        out
    }

    /// Degree of the untruncated product.
    pub fn full_degree(&self) -> u64 {
        self.exponents().iter().sum::<u64>() * u64::from(self.multiplicity)
    }

    /// Number of binomial factors, counted with multiplicity.
    pub fn factor_count(&self) -> u64 {
        (self.upper_index + 1) * self.residues.len() as u64 * u64::from(self.multiplicity)
    }

    /// Degree actually materialized once truncation is applied.
    pub fn output_degree(&self) -> usize {
        let full = self.full_degree() as usize;
        self.truncation.map_or(full, |t| t.min(full))
    }
}

/// How [`expand_product_with`] computes the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Repeated in-place `(1 − q^m)` multiplication over big integers.
    Reference,
    /// The same recurrence over word-size primes, reconstructed by CRT.
    MultiModular,
    /// `MultiModular` for large outputs, `Reference` otherwise.
    #[default]
    Auto,
}

const AUTO_MULTIMODULAR_DEGREE: usize = 20_000;

pub fn expand_product(spec: &ProductSpec) -> Result<IntPolynomial> {
    expand_product_with(spec, Engine::Auto)
}

pub fn expand_product_with(spec: &ProductSpec, engine: Engine) -> Result<IntPolynomial> {
    spec.validate()?;
    let engine = match engine {
        Engine::Auto if spec.output_degree() >= AUTO_MULTIMODULAR_DEGREE => Engine::MultiModular,
        Engine::Auto => Engine::Reference,
        e => e,
    };
    match engine {
        Engine::MultiModular => Ok(expand_multimodular(spec)),
        _ => Ok(expand_reference(spec)),
    }
}

fn expand_reference(spec: &ProductSpec) -> IntPolynomial {
    let mut acc = IntPolynomial::one();
    for m in spec.exponents() {
        for _ in 0..spec.multiplicity {
            acc.mul_sparse_factor_in_place(m as usize, spec.truncation);
        }
    }
    acc
}
