//! Working-precision management.
//!
//! Every evaluation in this crate runs under a [`PrecisionContext`]. The
//! context fixes the mantissa width, the guard bits used for truncation
//! decisions and a hard cap on series/product length, so results are
//! reproducible bit for bit given the same context.

use crate::error::{Error, Result};
use rug::{Complex, Float};

/// Immutable precision policy for all evaluations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionContext {
    precision_bits: u32,
    guard_bits: u32,
    max_terms: usize,
}

impl PrecisionContext {
    /// Minimum accepted mantissa width.
    pub const MIN_PRECISION_BITS: u32 = 64;
    /// Minimum accepted guard width.
    pub const MIN_GUARD_BITS: u32 = 16;
    /// Minimum accepted series cap.
    pub const MIN_MAX_TERMS: usize = 1024;

    pub fn new(precision_bits: u32, guard_bits: u32, max_terms: usize) -> Result<Self> {
        if precision_bits < Self::MIN_PRECISION_BITS {
            return Err(Error::Config(format!(
                "precision_bits = {precision_bits}, need at least {}",
                Self::MIN_PRECISION_BITS
            )));
        }
        if guard_bits < Self::MIN_GUARD_BITS {
            return Err(Error::Config(format!(
                "guard_bits = {guard_bits}, need at least {}",
                Self::MIN_GUARD_BITS
            )));
        }
        if max_terms < Self::MIN_MAX_TERMS {
            return Err(Error::Config(format!(
                "max_terms = {max_terms}, need at least {}",
                Self::MIN_MAX_TERMS
            )));
        }
        Ok(Self {
            precision_bits,
            guard_bits,
            max_terms,
        })
    }

    /// Context with `precision_bits` mantissa bits and default guard/caps.
    pub fn with_bits(precision_bits: u32) -> Result<Self> {
        Self::new(precision_bits, 32, 100_000)
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Mantissa width actually used by intermediate arithmetic.
    pub fn working_prec(&self) -> u32 {
        self.precision_bits + self.guard_bits
    }

    /// `2^{-(precision_bits + guard_bits)}`, the truncation target.
    pub fn eps(&self) -> Float {
        Float::with_val(self.working_prec(), Float::i_exp(1, -(self.working_prec() as i32)))
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.working_prec(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.working_prec(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.working_prec(), rug::float::Constant::Pi)
    }
}

impl Default for PrecisionContext {
    /// 256 mantissa bits, 32 guard bits, 100000-term cap. The theorem
    /// checks at n = 128 produce magnitudes around `e^{pi * 128^{1.6}}`,
    /// which the unbounded-exponent floats handle at any width; 256 bits
    /// leaves headroom for the `O(e^{-2 pi n^a})` residuals being measured.
    fn default() -> Self {
        Self::new(256, 32, 100_000).expect("default context is valid")
    }
}


#[cfg(test)]
use rug::ops::Pow;
