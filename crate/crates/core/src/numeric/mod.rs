//! Multi-precision pipeline for arbitrary real `gamma >= 0`.
//!
//! Inner products come from a composite Gauss-Legendre rule split at
//! `x = t`; recurrence coefficients from the discrete Stieltjes procedure on
//! those nodes. Derivatives in `t` are taken by five-point central
//! differences, which are exact through fourth order.

mod checks;
mod quadrature;
mod recurrence;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use checks::{
    cross_check_even, numeric_verify_difference, numeric_verify_piv, numeric_verify_piv_range, CrossCheck,
    CrossCheckEntry, DifferenceCheck, DifferenceResidual, PivCheck,
};
pub use quadrature::{
    bits_for_digits, gauss_legendre, hp_inner_product, nodes_for_digits, sqrt_pi, truncation_radius, weighted_nodes,
    GaussLegendre, Layout, WeightedNodes,
};
pub use recurrence::{numeric_recurrence, NumericRecurrence};

pub const DEFAULT_PRECISION: u32 = 60;
pub const MIN_PRECISION: u32 = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    /// Working precision in decimal digits.
    pub precision_digits: u32,
    /// Graded panels per side of `x = t` for non-integer `gamma`. Chosen from
    /// the precision when `None`.
    pub quad_panels: Option<usize>,
    /// Gauss-Legendre points per panel.
    pub quad_nodes: Option<usize>,
    pub truncation_radius: Option<f64>,
    /// Base step for finite differences in `t`.
    pub fd_step: f64,
    pub n_max: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            precision_digits: DEFAULT_PRECISION,
            quad_panels: None,
            quad_nodes: None,
            truncation_radius: None,
            fd_step: 1e-6,
            n_max: 6,
        }
    }
}

impl NumericConfig {
    pub fn with_precision(digits: u32) -> Self {
        NumericConfig { precision_digits: digits, ..Default::default() }
    }

    pub fn n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_digits < MIN_PRECISION {
            return Err(Error::InvalidArgument(format!(
                "precision_digits must be at least {MIN_PRECISION}, got {}",
                self.precision_digits
            )));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1.0) {
            return Err(Error::InvalidArgument(format!("fd_step must lie in (0, 1), got {}", self.fd_step)));
        }
        if self.quad_nodes == Some(0) {
            return Err(Error::InvalidArgument("quad_nodes must be positive".into()));
        }
        if let Some(r) = self.truncation_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidArgument(format!("truncation_radius must be positive, got {r}")));
            }
        }
        Ok(())
    }
}

/// Decimal string with `digits` significant digits.
pub fn format_real(x: &Float, digits: u32) -> String {
    x.to_string_radix(10, Some(digits as usize))
}
