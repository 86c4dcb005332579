//! Special functions behind the closed-form EVM expressions.
//!
//! Every function here has two evaluation routes that do not share code
//! beyond Γ: a series route and an integral route. The integral routes are
//! exposed (`*_integral`) so callers and tests can cross-check a value.
//!
//! Supported domains (nothing outside them is silently accepted):
//!
//! * [`kummer_1f1`]: real `a`, `b` not a non-positive integer, any real `z`.
//! * [`gauss_2f1`]: real `a`, `b`, `c` with `c` not a non-positive integer
//!   and real `x < 1`.
//! * [`tricomi_u`]: `a > 0`, real `b`, `z > 0`.
//! * [`phi2_n`]: real `b_i`, `c > 0`, any real `x_i`.
//! * [`lauricella_fd`]: `a > 0`, real `b_i`, `c > 0`, every `x_i < 1`.

mod gamma;
mod gauss;
mod kummer;
mod lauricella;
pub(crate) mod quad;
mod tricomi;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gamma::{digamma, gamma_fn, ln_gamma, ln_pochhammer, pochhammer, recip_gamma};
pub use gauss::{gauss_2f1, gauss_2f1_integral, gauss_2f1_series};
pub use kummer::{kummer_1f1, kummer_1f1_series};
pub use lauricella::{
    lauricella_fd, lauricella_fd_integral, lauricella_fd_series, phi2_n, FdArguments,
    Phi2Arguments,
};
pub use tricomi::{tricomi_u, tricomi_u_scaled};

pub(crate) use gamma::gamma_ratio;
pub(crate) use kummer::ln_kummer_1f1;
pub(crate) use lauricella::phi2_scaled;

/// Tolerances and work limits shared by every series and quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Target relative accuracy.
    pub rel_tol: f64,
    /// Cap on the number of terms of a one-variable series.
    pub max_terms: usize,
    /// Cap on the number of multi-index terms visited by a multivariate series.
    pub max_multi_terms: usize,
    /// Cap on the number of Gauss–Kronrod panels in one adaptive integration.
    pub quad_nodes: usize,
    /// Fixed truncation point for semi-infinite integrals, in the integrand's
    /// natural scale. `None` truncates once the tail is below `rel_tol`.
    pub quad_upper_cutoff: Option<f64>,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_terms: 100_000,
            max_multi_terms: 10_000_000,
            quad_nodes: 512,
            quad_upper_cutoff: None,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1e-3), got {}",
                self.rel_tol
            )));
        }
        if self.max_terms < 100 {
            return Err(Error::InvalidParameter(format!(
                "max_terms must be at least 100, got {}",
                self.max_terms
            )));
        }
        if self.max_multi_terms < self.max_terms {
            return Err(Error::InvalidParameter(
                "max_multi_terms must be at least max_terms".into(),
            ));
        }
        if self.quad_nodes < 32 {
            return Err(Error::InvalidParameter(format!(
                "quad_nodes must be at least 32, got {}",
                self.quad_nodes
            )));
        }
        if let Some(c) = self.quad_upper_cutoff {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "quad_upper_cutoff must be positive and finite, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// Number of consecutive negligible terms required before a series is
/// declared converged. Multivariate and alternating series are not monotone,
/// so a single small term proves nothing.
pub(crate) const STOP_RUN: usize = 20;
