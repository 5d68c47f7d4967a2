//! Rayleigh/path-loss channel model and the phase-1 energy harvest.
//!
//! Each D2D pair i sees four links: BS->tx (gain beta_i1), tx->CU
//! (beta_i2), tx->rx (beta_i3) and BS->rx (beta_i4). Under Rayleigh flat
//! fading the power gains are independent exponentials whose mean is set
//! by distance and path-loss exponent, `E[beta_ij] = d_j^{-v}`.

use crate::config::SystemConfig;
use crate::rng::TrialRng;

/// One draw of the `n_pairs x 4` link power gain matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    beta: Vec<[f64; 4]>,
}

impl ChannelRealization {
    pub fn from_rows(beta: Vec<[f64; 4]>) -> Self {
        ChannelRealization { beta }
    }

    pub fn n_pairs(&self) -> usize {
        self.beta.len()
    }

    pub fn rows(&self) -> &[[f64; 4]] {
        &self.beta
    }

    /// Gain of the BS -> D2D transmitter link of pair `i`.
    #[inline]
    pub fn bs_to_tx(&self, i: usize) -> f64 {
        self.beta[i][0]
    }

    /// Gain of the D2D transmitter -> cellular user link of pair `i`.
    #[inline]
    pub fn tx_to_cu(&self, i: usize) -> f64 {
        self.beta[i][1]
    }

    /// Gain of the D2D transmitter -> D2D receiver link of pair `i`.
    #[inline]
    pub fn tx_to_rx(&self, i: usize) -> f64 {
        self.beta[i][2]
    }

    /// Gain of the BS -> D2D receiver link of pair `i`.
    #[inline]
    pub fn bs_to_rx(&self, i: usize) -> f64 {
        self.beta[i][3]
    }

    /// A view of the first `n` pairs, for nesting arguments.
    pub fn truncated(&self, n: usize) -> ChannelRealization {
        ChannelRealization {
            beta: self.beta[..n].to_vec(),
        }
    }
}

/// Draw all `n_pairs x 4` gains for one trial. Draw order is fixed:
/// pair index outer, link index inner, so a seed reproduces the matrix
/// exactly regardless of the caller.
pub fn draw_channels(cfg: &SystemConfig, rng: &mut TrialRng) -> ChannelRealization {
    let means = [
        cfg.mean_gain(0),
        cfg.mean_gain(1),
        cfg.mean_gain(2),
        cfg.mean_gain(3),
    ];
    let mut beta = Vec::with_capacity(cfg.n_pairs);
    for _ in 0..cfg.n_pairs {
        let mut row = [0.0; 4];
        for (slot, mean) in row.iter_mut().zip(means) {
            *slot = rng.next_exponential(mean);
        }
        beta.push(row);
    }
    ChannelRealization { beta }
}

/// Transmission power available at a D2D transmitter after phase 1:
/// `eta * gamma * P_c * beta_i1 * alpha / (1 - alpha)`. The slot duration
/// cancels between harvest time and transmit time.
#[inline]
pub fn harvested_power(beta_i1: f64, cfg: &SystemConfig) -> f64 {
    debug_assert!(cfg.alpha < 1.0, "alpha >= 1 is rejected at config validation");
    cfg.eta * cfg.gamma * cfg.p_c * beta_i1 * cfg.alpha / (1.0 - cfg.alpha)
}
