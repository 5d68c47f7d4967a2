//! Closed-form outage probabilities and the alpha feasibility bounds.
//!
//! Building blocks: for exponential link gains, a phase-1 decode failure
//! has probability `p = 1 - exp(-d1^v t / (m (1-gamma)))`, and every
//! phase-2 threshold event reduces to `P[b1*b2 < q] = 1 - x K1(x)` with
//! `x = 2 sqrt(q d_a^v d_b^v)`, because the harvested transmit power is
//! itself proportional to a link gain.
//!
//! The cellular outage ships in two variants. The `Literal` variant
//! multiplies the binomial sum over decoding-set sizes by the probability
//! that the set is nonempty — exactly as printed in the reference
//! derivation these formulas come from. That prefactor double-counts:
//! the k >= 1 binomial terms already carry the probability of k
//! decoders, so the sum must stand alone. The `Corrected` variant drops
//! the prefactor; Monte Carlo arbitrates (see the validation report and
//! the acceptance suite). The D2D expression is evaluated exactly as
//! printed, quirks included, and its gap against Monte Carlo is reported
//! rather than patched.
//!
//! Symbol note: the reference derivation reuses `v` (path-loss exponent
//! vs a Bessel argument), `d` (distance vs a coefficient) and `T` (slot
//! duration vs a partial sum). Here those become `v_arg`, `d_coef` and
//! `t_term`.

use crate::bessel::one_minus_x_k1;
use crate::config::SystemConfig;

pub use crate::bessel::bessel_k1;

/// Which printed form of the cellular outage to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellularVariant {
    /// As printed: `P1 + (1 - P1) * sum_k C(N,k) p^{N-k} (1-p)^k w^k`.
    Literal,
    /// Law-of-total-probability form: `p^N + sum_k C(N,k) p^{N-k} (1-p)^k w^k`.
    Corrected,
}

/// Intermediate quantities of the cellular outage expression.
#[derive(Debug, Clone, Copy)]
pub struct CellularOutageTerms {
    /// Per-pair phase-1 decode-failure probability.
    pub p: f64,
    /// Probability that no pair decodes, `p^N`.
    pub p1: f64,
    /// Phase-1 SNR threshold `2^{r_ct/alpha} - 1`.
    pub t: f64,
    /// Transmit SNR scale `P_c / sigma2`.
    pub m: f64,
    /// Coefficient `a = sigma2 (1-alpha) (2^{r_ct/(1-alpha)} - 1) / (eta gamma P_c alpha)`.
    pub a_coef: f64,
    /// Coefficient `b = rho - (2^{r_ct/(1-alpha)} - 1)(1 - rho)`; the
    /// phase-2 cellular SINR can reach target only when positive.
    pub b_coef: f64,
    /// Bessel argument `u = sqrt(4a / (b d1^{-v} d2^{-v}))`; only defined
    /// on the feasible side (`b > 0`).
    pub u: Option<f64>,
    /// Per-decoder failure probability `1 - u K1(u)`, or exactly 1 when
    /// the SINR target is infeasible.
    pub w: f64,
    /// `delta = r_ct / log2(1 + rho/(1-rho))`; feasibility requires
    /// `alpha < 1 - delta`.
    pub delta: f64,
}

impl CellularOutageTerms {
    pub fn alpha_feasible(&self, cfg: &SystemConfig) -> bool {
        cfg.alpha < 1.0 - self.delta
    }
}

/// Intermediate quantities of the D2D outage expression.
#[derive(Debug, Clone, Copy)]
pub struct D2dOutageTerms {
    /// Bessel argument for the case-2 rate threshold (`None` when the
    /// coefficient is not finite, e.g. rho = 1).
    pub v_arg: Option<f64>,
    /// Coefficient `c = sigma2 (1-alpha) (2^{r_dt/(1-alpha)} - 1) / (eta gamma P_c alpha (1-rho))`.
    pub c_coef: f64,
    /// Bessel argument for the full-power D2D rate threshold.
    pub y_arg: Option<f64>,
    /// Coefficient `d = sigma2 (1-alpha) (2^{r_dt/(1-alpha)} - 1) / (eta gamma P_c alpha)`.
    pub d_coef: f64,
    /// Bessel argument for the case-3 rate threshold; only defined when
    /// `e_coef > 0`.
    pub z_arg: Option<f64>,
    /// Coefficient `e = (1-rho) - rho (2^{r_dt/(1-alpha)} - 1)`; the
    /// case-3 SINR can reach target only when positive.
    pub e_coef: f64,
    /// `mu = r_dt / log2(1/rho)`; case-3 feasibility requires `alpha < 1 - mu`.
    pub mu: f64,
    /// Probability that a D2D receiver decodes the cellular signal in
    /// phase 1, `exp(-d4^v t / m)`.
    pub phi: f64,
    /// `Q = 1 - y K1(y)`: full-power D2D rate below target.
    pub q_term: f64,
    /// `R = 1 - v_arg K1(v_arg)`: case-2 rate below target.
    pub r_term: f64,
    /// Cellular outage with the binomial w-sum, feasible branch (shared
    /// with the cellular expression).
    pub p21: f64,
    /// Same with the w-free binomial sum, infeasible branch.
    pub p22: f64,
}

impl D2dOutageTerms {
    /// Case-3 failure probability `1 - z K1(z)` on the feasible side of
    /// the `mu` bound, else 1.
    pub fn case3_fail_prob(&self, cfg: &SystemConfig) -> f64 {
        if cfg.alpha < 1.0 - self.mu {
            match self.z_arg {
                Some(z) => one_minus_x_k1(z),
                None => 1.0,
            }
        } else {
            1.0
        }
    }
}

/// Feasibility bounds on the time-switching factor: the cellular relay
/// path needs `alpha < delta_bound`, the case-3 D2D path needs
/// `alpha < mu_bound`. Either can be <= 0 (no feasible alpha) or
/// -inf when rho makes the corresponding SINR cap vanish entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBounds {
    pub delta_bound: f64,
    pub mu_bound: f64,
}

/// `(1 - delta, 1 - mu)` for the given config.
pub fn alpha_bounds(cfg: &SystemConfig) -> AlphaBounds {
    AlphaBounds {
        delta_bound: 1.0 - delta(cfg),
        mu_bound: 1.0 - mu(cfg),
    }
}

fn delta(cfg: &SystemConfig) -> f64 {
    // rho = 0: log2(1) = 0, delta = +inf (cellular relaying impossible).
    // rho = 1: log2(inf) = inf, delta = 0 (no cap from self-interference).
    cfg.r_ct / (1.0 + cfg.rho / (1.0 - cfg.rho)).log2()
}

fn mu(cfg: &SystemConfig) -> f64 {
    // rho = 1: log2(1) = 0, mu = +inf (case-3 D2D rate capped below any
    // target). rho = 0: mu = 0.
    cfg.r_dt / (1.0 / cfg.rho).log2()
}

/// All auxiliaries of the cellular outage expression.
pub fn cellular_outage_terms(cfg: &SystemConfig) -> CellularOutageTerms {
    let t = (cfg.r_ct / cfg.alpha).exp2() - 1.0;
    let m = cfg.snr_scale();
    // gamma = 1 starves the decoder: exponent -> -inf, p -> 1 exactly.
    let p = 1.0 - (-(cfg.d1.powf(cfg.v)) * t / (m * (1.0 - cfg.gamma))).exp();
    let p1 = p.powi(cfg.n_pairs as i32);

    let tau = (cfg.r_ct / (1.0 - cfg.alpha)).exp2() - 1.0;
    // gamma = 0: no harvested power, a -> +inf, w -> 1 via the K1 limit.
    let a_coef = cfg.sigma2 * (1.0 - cfg.alpha) * tau / (cfg.eta * cfg.gamma * cfg.p_c * cfg.alpha);
    let b_coef = cfg.rho - tau * (1.0 - cfg.rho);
    let delta = delta(cfg);

    let (u, w) = if b_coef > 0.0 {
        let u = (4.0 * a_coef / (b_coef * cfg.mean_gain(0) * cfg.mean_gain(1))).sqrt();
        (u.is_finite().then_some(u), one_minus_x_k1(u))
    } else {
        (None, 1.0)
    };

    CellularOutageTerms {
        p,
        p1,
        t,
        m,
        a_coef,
        b_coef,
        u,
        w,
        delta,
    }
}

/// Closed-form cellular outage probability.
pub fn cellular_outage(cfg: &SystemConfig, variant: CellularVariant) -> f64 {
    let terms = cellular_outage_terms(cfg);
    if !terms.alpha_feasible(cfg) {
        return 1.0;
    }
    let sum = binomial_w_sum(cfg.n_pairs, terms.p, terms.w);
    let value = match variant {
        CellularVariant::Literal => terms.p1 + (1.0 - terms.p1) * sum,
        CellularVariant::Corrected => terms.p1 + sum,
    };
    value.clamp(0.0, 1.0)
}

/// All auxiliaries of the D2D outage expression.
pub fn d2d_outage_terms(cfg: &SystemConfig) -> D2dOutageTerms {
    let cell = cellular_outage_terms(cfg);
    let tau_d = (cfg.r_dt / (1.0 - cfg.alpha)).exp2() - 1.0;
    let denom = cfg.eta * cfg.gamma * cfg.p_c * cfg.alpha;
    let d_coef = cfg.sigma2 * (1.0 - cfg.alpha) * tau_d / denom;
    let c_coef = d_coef / (1.0 - cfg.rho);
    let e_coef = (1.0 - cfg.rho) - cfg.rho * tau_d;
    let mu = mu(cfg);

    let gain_scale = cfg.mean_gain(0) * cfg.mean_gain(2);
    let y = (4.0 * d_coef / gain_scale).sqrt();
    let v_arg = (4.0 * c_coef / gain_scale).sqrt();
    let z_arg = (e_coef > 0.0)
        .then(|| (4.0 * d_coef / (e_coef * gain_scale)).sqrt())
        .filter(|z| z.is_finite());

    let phi = (-(cfg.d4.powf(cfg.v)) * cell.t / cell.m).exp();

    let t_term = binomial_w_sum(cfg.n_pairs, cell.p, cell.w);
    let plain_sum = binomial_w_sum(cfg.n_pairs, cell.p, 1.0);
    let p21 = cell.p1 + (1.0 - cell.p1) * t_term;
    let p22 = cell.p1 + (1.0 - cell.p1) * plain_sum;

    D2dOutageTerms {
        v_arg: v_arg.is_finite().then_some(v_arg),
        c_coef,
        y_arg: y.is_finite().then_some(y),
        d_coef,
        z_arg,
        e_coef,
        mu,
        phi,
        q_term: one_minus_x_k1(y),
        r_term: one_minus_x_k1(v_arg),
        p21,
        p22,
    }
}

/// Closed-form D2D outage probability, evaluated exactly as printed.
///
/// The four branches are selected by the `(alpha vs 1-delta, alpha vs
/// 1-mu)` quadrant. On the `alpha < 1-delta` side the case-weighting
/// probability is `p21`, else `p22`; on the `alpha < 1-mu` side the
/// case-3 contribution is weighted by the binomial w-sum (`t_term`, as
/// printed), else by 1.
pub fn d2d_outage(cfg: &SystemConfig) -> f64 {
    let cell = cellular_outage_terms(cfg);
    let d2d = d2d_outage_terms(cfg);
    let n = cfg.n_pairs;

    let p1 = cell.p1;
    let p1_comp = 1.0 - p1;
    let t_term = binomial_w_sum(n, cell.p, cell.w);
    let q_sum = binomial_w_sum(n, cell.p, d2d.q_term);
    let q_all = d2d.q_term.powi(n as i32);

    let weight = if cell.alpha_feasible(cfg) { d2d.p21 } else { d2d.p22 };
    let case3_factor = if cfg.alpha < 1.0 - d2d.mu { t_term } else { 1.0 };

    let value = p1 * q_all
        + p1_comp * (1.0 - weight) * d2d.r_term * d2d.phi
        + p1_comp * (1.0 - weight) * case3_factor * (1.0 - d2d.phi)
        + p1_comp * weight * q_sum;
    value.clamp(0.0, 1.0)
}

/// `sum_{k=1}^{n} C(n,k) p^{n-k} (1-p)^k w^k`. With `w = 1` this is
/// `1 - p^n` up to rounding; the k = 0 term is excluded by construction.
fn binomial_w_sum(n: usize, p: f64, w: f64) -> f64 {
    let q = 1.0 - p;
    let mut sum = 0.0;
    for k in 1..=n {
        sum += binomial_coeff(n, k) * p.powi((n - k) as i32) * q.powi(k as i32) * w.powi(k as i32);
    }
    sum
}

/// Binomial coefficient as f64: exact integer arithmetic up to n = 60,
/// log-domain beyond that to avoid overflow.
fn binomial_coeff(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    if n <= 60 {
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as f64
    } else {
        let mut ln = 0.0f64;
        for i in 0..k {
            ln += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
        ln.exp()
    }
}
