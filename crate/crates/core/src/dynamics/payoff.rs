use serde::{Deserialize, Serialize};

use super::Type;
use crate::{Error, Result};

/// A 2x2 payoff matrix `Pi(sigma, tau)` over `S = {1, 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrix {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
    /// `(b, c)` when built by [`PayoffMatrix::donation`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub donation: Option<(f64, f64)>,
}

impl PayoffMatrix {
    pub fn new(p11: f64, p10: f64, p01: f64, p00: f64) -> Self {
        PayoffMatrix {
            p11,
            p10,
            p01,
            p00,
            donation: None,
        }
    }

    /// Donation game: `Pi(1,1) = b - c`, `Pi(1,0) = -c`, `Pi(0,1) = b`,
    /// `Pi(0,0) = 0`.
    pub fn donation(b: f64, c: f64) -> Self {
        PayoffMatrix {
            p11: b - c,
            p10: -c,
            p01: b,
            p00: 0.0,
            donation: Some((b, c)),
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn get(&self, sigma: Type, tau: Type) -> f64 {
        match (sigma, tau) {
            (1, 1) => self.p11,
            (1, _) => self.p10,
            (_, 1) => self.p01,
            _ => self.p00,
        }
    }

    pub fn max_abs(&self) -> f64 {
        [self.p11, self.p10, self.p01, self.p00]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Writes `Pi(sigma, tau) = k + b tau - c sigma + d sigma tau` and returns
    /// `(b, c)` when the interaction term `d` vanishes.
    pub fn additive_form(&self) -> Option<(f64, f64)> {
        if let Some(bc) = self.donation {
            return Some(bc);
        }
        let d = self.p11 - self.p10 - self.p01 + self.p00;
        let scale = self.max_abs().max(1.0);
        (d.abs() <= 1e-12 * scale).then_some((self.p01 - self.p00, self.p00 - self.p10))
    }
}

/// `w_max = (2 + 2 max |Pi|)^-1`.
pub fn max_selection(payoff: &PayoffMatrix) -> f64 {
    1.0 / (2.0 + 2.0 * payoff.max_abs())
}

/// Payoff, selection strength and mutation rates `mu(1)`, `mu(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    pub payoff: PayoffMatrix,
    pub w: f64,
    pub mu1: f64,
    pub mu0: f64,
}

impl GameParams {
    pub fn new(payoff: PayoffMatrix, w: f64, mu1: f64, mu0: f64) -> Result<Self> {
        let p = GameParams {
            payoff,
            w,
            mu1,
            mu0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn neutral() -> Self {
        GameParams {
            payoff: PayoffMatrix::zero(),
            w: 0.0,
            mu1: 0.0,
            mu0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let max = max_selection(&self.payoff);
        if !(self.w >= 0.0 && self.w <= max) {
            return Err(Error::SelectionOutOfRange { w: self.w, max });
        }
        if !(self.mu1 >= 0.0 && self.mu0 >= 0.0 && self.mu1.is_finite() && self.mu0.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "mutation rates must be finite and nonnegative (mu1 = {}, mu0 = {})",
                self.mu1, self.mu0
            )));
        }
        Ok(())
    }

    pub fn total_mutation(&self) -> f64 {
        self.mu1 + self.mu0
    }

    /// `mu_bar(1), mu_bar(0)` with `0/0 = 0`.
    pub fn normalized_mutation(&self) -> (f64, f64) {
        let total = self.total_mutation();
        if total == 0.0 {
            (0.0, 0.0)
        } else {
            (self.mu1 / total, self.mu0 / total)
        }
    }
}
