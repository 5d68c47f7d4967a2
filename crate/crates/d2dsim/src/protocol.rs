//! Two-phase relay-selection protocol: phase-1 rates, the decoding set,
//! selection of the serving D2D pair, and the phase-2 rates of the four
//! operating modes.
//!
//! Phase 1 (duration `alpha*T`): the BS broadcasts the cellular signal;
//! every D2D transmitter splits its received power between harvesting
//! (fraction gamma) and decoding, and every D2D receiver listens too.
//! Phase 2 (duration `(1-alpha)*T`): one selected transmitter spends its
//! harvested power on a mix of the relayed cellular signal (fraction rho)
//! and its own D2D signal (fraction 1-rho). Which mode phase 2 runs in
//! depends on who managed to decode what.

use crate::channel::{harvested_power, ChannelRealization};
use crate::config::SystemConfig;

/// Phase-2 operating mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatingCase {
    /// No transmitter decoded the cellular signal; the pair with the best
    /// D2D rate transmits its own signal at full harvested power.
    Case1,
    /// A decoder serves the cellular user above target, and the paired
    /// receiver also decoded the cellular signal in phase 1, so it
    /// cancels that component before decoding its own.
    Case2,
    /// A decoder serves the cellular user above target, but the paired
    /// receiver did not decode the cellular signal; the relayed component
    /// is interference at the D2D receiver.
    Case3,
    /// Decoders exist but none can reach the cellular target rate at the
    /// cellular user; the best of them transmits D2D-only, full power.
    Case4,
}

impl OperatingCase {
    pub const ALL: [OperatingCase; 4] = [
        OperatingCase::Case1,
        OperatingCase::Case2,
        OperatingCase::Case3,
        OperatingCase::Case4,
    ];

    pub fn index(self) -> usize {
        match self {
            OperatingCase::Case1 => 0,
            OperatingCase::Case2 => 1,
            OperatingCase::Case3 => 2,
            OperatingCase::Case4 => 3,
        }
    }

    /// The cellular user is served only in cases 2 and 3.
    pub fn serves_cellular(self) -> bool {
        matches!(self, OperatingCase::Case2 | OperatingCase::Case3)
    }
}

/// Outcome of the selection procedure for one channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    /// Pairs whose transmitter decoded the cellular signal in phase 1.
    pub decoding_set: Vec<usize>,
    /// The pair chosen to transmit in phase 2. Always present for a
    /// valid config (`n_pairs >= 1`).
    pub selected: Option<usize>,
    pub operating_case: OperatingCase,
    /// Rate achieved at the cellular user in phase 2; 0 when no relay
    /// serves it (cases 1 and 4).
    pub rate_cu: f64,
    /// Rate achieved on the selected pair's D2D link in phase 2.
    pub rate_d2d: f64,
}

/// Per-trial outage indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// The cellular user did not receive its signal at `r_ct` or better.
    pub cellular_outage: bool,
    /// The selected pair's D2D rate fell short of `r_dt`.
    pub d2d_outage: bool,
    pub outcome: SelectionOutcome,
}

/// Phase-1 rate at a D2D transmitter, `alpha * log2(1 + (1-gamma) P_c b / sigma2)`.
/// Only the non-harvesting fraction of the received power reaches the decoder.
#[inline]
pub fn phase1_rate_du1(beta_i1: f64, cfg: &SystemConfig) -> f64 {
    let snr = (1.0 - cfg.gamma) * cfg.p_c * beta_i1 / cfg.sigma2;
    cfg.alpha * (1.0 + snr).log2()
}

/// Phase-1 rate at a D2D receiver listening to the BS,
/// `alpha * log2(1 + P_c b / sigma2)`. No power split on the receive side.
#[inline]
pub fn phase1_rate_du2(beta_i4: f64, cfg: &SystemConfig) -> f64 {
    let snr = cfg.p_c * beta_i4 / cfg.sigma2;
    cfg.alpha * (1.0 + snr).log2()
}

/// Phase-2 rate of the relayed cellular signal at the cellular user.
/// The transmitter's own D2D component rides on the same link and acts
/// as self-interference:
/// `(1-alpha) * log2(1 + rho P_h b2 / ((1-rho) P_h b2 + sigma2))`.
#[inline]
pub fn phase2_rate_cu(beta_i1: f64, beta_i2: f64, cfg: &SystemConfig) -> f64 {
    let ph = harvested_power(beta_i1, cfg);
    let signal = cfg.rho * ph * beta_i2;
    let interference = (1.0 - cfg.rho) * ph * beta_i2;
    (1.0 - cfg.alpha) * (1.0 + signal / (interference + cfg.sigma2)).log2()
}

/// Phase-2 rate on the selected pair's own link, per operating mode:
/// full harvested power in cases 1/4, the `1-rho` share with the relayed
/// component cancelled in case 2, and the same share with the relayed
/// component as interference in case 3.
#[inline]
pub fn phase2_rate_d2d(
    case: OperatingCase,
    beta_i1: f64,
    beta_i3: f64,
    cfg: &SystemConfig,
) -> f64 {
    let ph = harvested_power(beta_i1, cfg);
    let sinr = match case {
        OperatingCase::Case1 | OperatingCase::Case4 => ph * beta_i3 / cfg.sigma2,
        OperatingCase::Case2 => (1.0 - cfg.rho) * ph * beta_i3 / cfg.sigma2,
        OperatingCase::Case3 => {
            (1.0 - cfg.rho) * ph * beta_i3 / (cfg.rho * ph * beta_i3 + cfg.sigma2)
        }
    };
    (1.0 - cfg.alpha) * (1.0 + sinr).log2()
}

/// Run the selection procedure on one channel realization.
///
/// 1. Build the decoding set `D = { i : phase-1 rate at tx_i > r_ct }`.
/// 2. `D` empty: case 1, pick the pair with the best full-power D2D rate
///    among all pairs.
/// 3. Otherwise, find the decoder whose phase-2 cellular rate is largest.
///    If it clears `r_ct`, it transmits; case 2 or 3 depending on whether
///    its paired receiver decoded the cellular signal in phase 1.
/// 4. Otherwise case 4: the decoder with the best full-power D2D rate
///    transmits its own signal only.
///
/// All comparisons against targets are strict; argmax ties break toward
/// the lowest pair index (ties have probability zero under continuous
/// fading, but the rule keeps tests deterministic).
pub fn select_and_classify(ch: &ChannelRealization, cfg: &SystemConfig) -> SelectionOutcome {
    assert_eq!(ch.n_pairs(), cfg.n_pairs, "realization size mismatch");
    let n = ch.n_pairs();

    let decoding_set: Vec<usize> = (0..n)
        .filter(|&i| phase1_rate_du1(ch.bs_to_tx(i), cfg) > cfg.r_ct)
        .collect();

    if decoding_set.is_empty() {
        let (best, rate) = argmax_by(0..n, |i| {
            phase2_rate_d2d(OperatingCase::Case1, ch.bs_to_tx(i), ch.tx_to_rx(i), cfg)
        });
        return SelectionOutcome {
            decoding_set,
            selected: best,
            operating_case: OperatingCase::Case1,
            rate_cu: 0.0,
            rate_d2d: rate,
        };
    }

    let (best_cu, best_cu_rate) = argmax_by(decoding_set.iter().copied(), |i| {
        phase2_rate_cu(ch.bs_to_tx(i), ch.tx_to_cu(i), cfg)
    });
    if best_cu_rate > cfg.r_ct {
        let b = best_cu.expect("decoding set is nonempty");
        let case = if phase1_rate_du2(ch.bs_to_rx(b), cfg) > cfg.r_ct {
            OperatingCase::Case2
        } else {
            OperatingCase::Case3
        };
        let rate_d2d = phase2_rate_d2d(case, ch.bs_to_tx(b), ch.tx_to_rx(b), cfg);
        return SelectionOutcome {
            decoding_set,
            selected: Some(b),
            operating_case: case,
            rate_cu: best_cu_rate,
            rate_d2d,
        };
    }

    let (best, rate) = argmax_by(decoding_set.iter().copied(), |i| {
        phase2_rate_d2d(OperatingCase::Case4, ch.bs_to_tx(i), ch.tx_to_rx(i), cfg)
    });
    SelectionOutcome {
        decoding_set,
        selected: best,
        operating_case: OperatingCase::Case4,
        rate_cu: 0.0,
        rate_d2d: rate,
    }
}

/// One full protocol trial: selection plus the two outage indicators.
pub fn run_trial(ch: &ChannelRealization, cfg: &SystemConfig) -> TrialResult {
    let outcome = select_and_classify(ch, cfg);
    TrialResult {
        cellular_outage: !outcome.operating_case.serves_cellular(),
        d2d_outage: outcome.rate_d2d < cfg.r_dt,
        outcome,
    }
}

/// Argmax with lowest-index tie break. Returns `(None, 0.0)` only on an
/// empty iterator.
fn argmax_by(indices: impl IntoIterator<Item = usize>, mut key: impl FnMut(usize) -> f64) -> (Option<usize>, f64) {
    let mut best: Option<usize> = None;
    let mut best_val = f64::NEG_INFINITY;
    for i in indices {
        let val = key(i);
        if best.is_none() || val > best_val {
            best = Some(i);
            best_val = val;
        }
    }
    match best {
        Some(i) => (Some(i), best_val),
        None => (None, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_channels;
    use crate::rng::TrialRng;

    fn cfg_half() -> SystemConfig {
        // alpha = 0.5, gamma = 0.75, P_c = 10 mW, sigma2 = 1e-12 W
        let mut cfg = SystemConfig::baseline();
        cfg.alpha = 0.5;
        cfg.p_c = 0.01;
        cfg.sigma2 = 1e-12;
        cfg
    }

    #[test]
    fn phase1_du1_hand_value() {
        // 0.5*log2(1 + 0.25*0.01*3.7e-5/1e-12) = 0.5*log2(1+9.25e4)
        let got = phase1_rate_du1(3.7e-5, &cfg_half());
        assert!((got - 8.248590670898619).abs() < 1e-12, "got {got}");
        assert_eq!(phase1_rate_du1(0.0, &cfg_half()), 0.0);
        let mut all_harvest = cfg_half();
        all_harvest.gamma = 1.0;
        assert_eq!(phase1_rate_du1(5.0, &all_harvest), 0.0);
    }

    #[test]
    fn phase1_du2_hand_value() {
        // 0.5*log2(1+1e7)
        let got = phase1_rate_du2(1e-3, &cfg_half());
        assert!((got - 11.626748404240517).abs() < 1e-12, "got {got}");
        assert_eq!(phase1_rate_du2(0.0, &cfg_half()), 0.0);

        let mut doubled = cfg_half();
        doubled.alpha = 0.5;
        let mut halved = cfg_half();
        halved.alpha = 0.25;
        let r1 = phase1_rate_du2(1e-3, &doubled);
        let r2 = phase1_rate_du2(1e-3, &halved);
        assert!((r1 - 2.0 * r2).abs() < 1e-12, "linear in alpha");
    }

    #[test]
    fn phase2_cu_limits() {
        let mut cfg = cfg_half();
        cfg.rho = 0.0;
        assert_eq!(phase2_rate_cu(1e-3, 1e-3, &cfg), 0.0);
        let cfg = cfg_half();
        assert_eq!(phase2_rate_cu(0.0, 1e-3, &cfg), 0.0);
    }

    #[test]
    fn phase2_cu_interference_free_limit() {
        // rho = 1 and P_h*b2/sigma2 = 1e4: rate = (1-alpha)*log2(1+1e4).
        let mut cfg = cfg_half();
        cfg.rho = 1.0;
        // harvested power with beta_i1: 0.8*0.75*0.01*b1*(0.5/0.5) = 6e-3*b1
        // want P_h*b2/sigma2 = 1e4 -> pick b1 = 1e-3 (P_h = 6e-6), b2 = 1e4*1e-12/6e-6
        let b1 = 1e-3;
        let b2 = 1e4 * cfg.sigma2 / 6e-6;
        let got = phase2_rate_cu(b1, b2, &cfg);
        assert!((got - 6.643928320920272).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn phase2_d2d_case3_hand_value() {
        // rho=0.75, P_h*b3/sigma2 = 100, alpha=0.5:
        // 0.5*log2(1 + 25/76)
        let cfg = cfg_half(); // rho = 0.75 in baseline
        let b1 = 1e-3; // P_h = 6e-6
        let b3 = 100.0 * cfg.sigma2 / 6e-6;
        let got = phase2_rate_d2d(OperatingCase::Case3, b1, b3, &cfg);
        assert!((got - 0.20514198465410462).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn phase2_d2d_case2_all_power_on_cellular() {
        let mut cfg = cfg_half();
        cfg.rho = 1.0;
        assert_eq!(phase2_rate_d2d(OperatingCase::Case2, 1e-3, 1e-3, &cfg), 0.0);
    }

    #[test]
    fn phase2_d2d_interference_ordering() {
        let cfg = cfg_half();
        let (b1, b3) = (2e-4, 7e-4);
        let r1 = phase2_rate_d2d(OperatingCase::Case1, b1, b3, &cfg);
        let r2 = phase2_rate_d2d(OperatingCase::Case2, b1, b3, &cfg);
        let r3 = phase2_rate_d2d(OperatingCase::Case3, b1, b3, &cfg);
        assert!(r3 <= r2 && r2 <= r1, "{r3} <= {r2} <= {r1}");
    }

    #[test]
    fn forced_case1_when_nobody_decodes() {
        let mut cfg = SystemConfig::baseline();
        cfg.n_pairs = 1;
        let ch = ChannelRealization::from_rows(vec![[1e-15, 1e-4, 1e-4, 1e-4]]);
        let out = select_and_classify(&ch, &cfg);
        assert!(out.decoding_set.is_empty());
        assert_eq!(out.operating_case, OperatingCase::Case1);
        assert_eq!(out.selected, Some(0));
        assert_eq!(out.rate_cu, 0.0);
    }

    #[test]
    fn forced_case2_when_everything_clears() {
        let mut cfg = SystemConfig::baseline();
        cfg.n_pairs = 1;
        let ch = ChannelRealization::from_rows(vec![[1.0, 1.0, 1.0, 1.0]]);
        let out = select_and_classify(&ch, &cfg);
        assert_eq!(out.decoding_set, vec![0]);
        assert_eq!(out.operating_case, OperatingCase::Case2);
        assert_eq!(out.selected, Some(0));
        assert!(out.rate_cu > cfg.r_ct);
    }

    /// Three pairs, built by inverting the rate formulas at their
    /// thresholds: only pair 2 decodes, its cellular-relay rate clears
    /// the target, but its paired receiver misses the phase-1 decode, so
    /// the protocol must land in case 3 with pair 2 selected.
    #[test]
    fn hand_built_case3_selection() {
        let mut cfg = SystemConfig::baseline();
        cfg.n_pairs = 3;
        cfg.alpha = 0.3;
        // phase-1 decode threshold on beta_i1:
        //   alpha*log2(1+(1-gamma)*m*b) > r_ct  <=>  b > t/(m*(1-gamma))
        let m = cfg.p_c / cfg.sigma2;
        let t = 2f64.powf(cfg.r_ct / cfg.alpha) - 1.0;
        let b1_threshold = t / (m * (1.0 - cfg.gamma));
        // receiver-side decode threshold on beta_i4: b > t/m
        let b4_threshold = t / m;

        let decoder_b1 = b1_threshold * 50.0; // comfortably decodes
        let mute_b1 = b1_threshold / 50.0; // comfortably fails
        // big tx->CU gain so the phase-2 cellular rate clears r_ct
        let rows = vec![
            [mute_b1, 1.0, 1e-4, 1.0],
            [decoder_b1, 1.0, 1e-4, b4_threshold / 10.0],
            [mute_b1, 1.0, 1e-4, 1.0],
        ];
        let ch = ChannelRealization::from_rows(rows);
        let out = select_and_classify(&ch, &cfg);
        assert_eq!(out.decoding_set, vec![1]);
        assert_eq!(out.selected, Some(1));
        assert_eq!(out.operating_case, OperatingCase::Case3);
        assert!(out.rate_cu > cfg.r_ct);
    }

    #[test]
    fn run_trial_indicator_wiring() {
        let mut cfg = SystemConfig::baseline();
        cfg.n_pairs = 1;
        let ch = ChannelRealization::from_rows(vec![[1.0, 1.0, 1.0, 1.0]]);
        let tr = run_trial(&ch, &cfg);
        assert_eq!(tr.outcome.operating_case, OperatingCase::Case2);
        assert!(!tr.cellular_outage);
        assert!(!tr.d2d_outage, "huge gains give a huge D2D rate");

        let ch = ChannelRealization::from_rows(vec![[1e-15, 1.0, 1.0, 1.0]]);
        let tr = run_trial(&ch, &cfg);
        assert_eq!(tr.outcome.operating_case, OperatingCase::Case1);
        assert!(tr.cellular_outage, "case 1 always fails the cellular user");
    }

    /// Adding a pair can only help the cellular user: re-running the
    /// protocol on a superset of pairs never flips its outage from
    /// false to true.
    #[test]
    fn cellular_outage_monotone_in_pairs() {
        let mut big = SystemConfig::baseline();
        big.n_pairs = 4;
        let mut small = big.clone();
        small.n_pairs = 3;
        for trial in 0..2000 {
            let ch = draw_channels(&big, &mut TrialRng::substream(314, trial));
            let sub = ch.truncated(3);
            let small_res = run_trial(&sub, &small);
            let big_res = run_trial(&ch, &big);
            if !small_res.cellular_outage {
                assert!(
                    !big_res.cellular_outage,
                    "adding a pair flipped cellular outage at trial {trial}"
                );
            }
        }
    }

    /// Scaling transmit power and noise power together changes no rate:
    /// everything depends on them only through P_c/sigma2 (the harvested
    /// power picks up the same factor as the noise). The factor is a
    /// power of two so the scaling is exact in floating point.
    #[test]
    fn joint_power_noise_scaling_is_invariant() {
        let cfg = SystemConfig::baseline();
        let mut scaled = cfg.clone();
        scaled.p_c *= 1024.0;
        scaled.sigma2 *= 1024.0;
        for trial in 0..500 {
            let ch = draw_channels(&cfg, &mut TrialRng::substream(77, trial));
            assert_eq!(run_trial(&ch, &cfg), run_trial(&ch, &scaled));
        }
    }

    /// With alpha at or beyond 1 - delta the phase-2 cellular SINR can
    /// never reach target, so cases 2 and 3 are unreachable.
    #[test]
    fn cases_2_3_unreachable_beyond_alpha_bound() {
        let mut cfg = SystemConfig::baseline();
        cfg.alpha = 0.5; // 1 - delta = 0.5 for rho = 0.75, r_ct = 1
        for trial in 0..2000 {
            let ch = draw_channels(&cfg, &mut TrialRng::substream(99, trial));
            let out = select_and_classify(&ch, &cfg);
            assert!(
                !out.operating_case.serves_cellular(),
                "case {:?} reached at alpha = 1 - delta",
                out.operating_case
            );
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn gain() -> impl Strategy<Value = f64> {
        // spans dead links to gains far above every threshold
        prop_oneof![Just(0.0), 1e-12f64..1.0]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn interference_ordering_holds(b1 in gain(), b3 in gain(), rho in 0.0f64..=1.0) {
            let mut cfg = SystemConfig::baseline();
            cfg.rho = rho;
            let r1 = phase2_rate_d2d(OperatingCase::Case1, b1, b3, &cfg);
            let r2 = phase2_rate_d2d(OperatingCase::Case2, b1, b3, &cfg);
            let r3 = phase2_rate_d2d(OperatingCase::Case3, b1, b3, &cfg);
            prop_assert!(r3 <= r2 + 1e-15 && r2 <= r1 + 1e-15, "{r3} <= {r2} <= {r1}");
        }

        #[test]
        fn outcome_invariants_hold(rows in proptest::collection::vec((gain(), gain(), gain(), gain()), 1..6)) {
            let mut cfg = SystemConfig::baseline();
            cfg.n_pairs = rows.len();
            let ch = ChannelRealization::from_rows(
                rows.into_iter().map(|(a, b, c, d)| [a, b, c, d]).collect(),
            );
            let result = run_trial(&ch, &cfg);
            let out = &result.outcome;
            match out.operating_case {
                OperatingCase::Case1 => {
                    prop_assert!(out.decoding_set.is_empty());
                    prop_assert_eq!(out.rate_cu, 0.0);
                    prop_assert!(result.cellular_outage);
                }
                OperatingCase::Case2 | OperatingCase::Case3 => {
                    prop_assert!(out.decoding_set.contains(&out.selected.unwrap()));
                    prop_assert!(out.rate_cu > cfg.r_ct);
                    prop_assert!(!result.cellular_outage);
                }
                OperatingCase::Case4 => {
                    prop_assert!(!out.decoding_set.is_empty());
                    prop_assert_eq!(out.rate_cu, 0.0);
                    prop_assert!(result.cellular_outage);
                }
            }
            prop_assert!(out.selected.is_some());
            prop_assert_eq!(result.d2d_outage, out.rate_d2d < cfg.r_dt);
        }
    }
}
