//! System configuration: every physical and protocol parameter of the
//! two-phase relay-selection scheme.
//!
//! Powers may be given in dBm or watts in the JSON form; they are converted
//! to linear-scale watts once at load time and all internal math stays in
//! watts from there on.

use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

/// Validated system parameters. Immutable by convention after
/// construction; nothing in the crate mutates a config it was handed.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Base-station transmit power, watts.
    pub p_c: f64,
    /// Noise power at every receiver, watts.
    pub sigma2: f64,
    /// RF-to-DC conversion efficiency, in (0, 1].
    pub eta: f64,
    /// Power-splitting factor: fraction of phase-1 received power routed
    /// to the energy harvester, in [0, 1].
    pub gamma: f64,
    /// Time-switching factor: fraction of the slot spent in phase 1, in (0, 1).
    pub alpha: f64,
    /// Phase-2 power-allocation factor for the cellular signal, in [0, 1].
    pub rho: f64,
    /// Number of D2D pairs.
    pub n_pairs: usize,
    /// Distance BS -> D2D transmitter, meters.
    pub d1: f64,
    /// Distance D2D transmitter -> cellular user, meters.
    pub d2: f64,
    /// Distance D2D transmitter -> D2D receiver, meters.
    pub d3: f64,
    /// Distance BS -> D2D receiver, meters.
    pub d4: f64,
    /// Path-loss exponent.
    pub v: f64,
    /// Cellular target rate, bits/s/Hz.
    pub r_ct: f64,
    /// D2D target rate, bits/s/Hz.
    pub r_dt: f64,
    /// Total slot duration. It cancels out of the harvested-power
    /// expression and is kept at 1 by convention.
    pub t_slot: f64,
}

/// A power that may be written as `{"dbm": x}` or `{"watts": x}`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum PowerValue {
    Dbm { dbm: f64 },
    Watts { watts: f64 },
}

impl PowerValue {
    pub fn watts(self) -> f64 {
        match self {
            PowerValue::Dbm { dbm } => dbm_to_watts(dbm),
            PowerValue::Watts { watts } => watts,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

#[derive(Debug, Error)]
pub enum ConfigError {
    /// A field failed validation; carries the field name and the violated
    /// constraint so the CLI can report exactly what to fix.
    #[error("config field `{field}`: {constraint}")]
    Invalid {
        field: &'static str,
        constraint: &'static str,
    },
    #[error("failed to parse config JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("failed to read config file: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p_c: PowerValue,
    sigma2: PowerValue,
    eta: f64,
    gamma: f64,
    alpha: f64,
    rho: f64,
    n_pairs: usize,
    d1: f64,
    d2: f64,
    d3: f64,
    d4: f64,
    v: f64,
    r_ct: f64,
    r_dt: f64,
    #[serde(default = "default_t_slot")]
    t_slot: f64,
}

fn default_t_slot() -> f64 {
    1.0
}

impl SystemConfig {
    /// Parse and validate a JSON config document.
    pub fn from_json_str(json: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = serde_json::from_str(json)?;
        let cfg = SystemConfig {
            p_c: raw.p_c.watts(),
            sigma2: raw.sigma2.watts(),
            eta: raw.eta,
            gamma: raw.gamma,
            alpha: raw.alpha,
            rho: raw.rho,
            n_pairs: raw.n_pairs,
            d1: raw.d1,
            d2: raw.d2,
            d3: raw.d3,
            d4: raw.d4,
            v: raw.v,
            r_ct: raw.r_ct,
            r_dt: raw.r_dt,
            t_slot: raw.t_slot,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// Baseline parameter set used throughout the test suite and as the
    /// CLI default: sigma2 = -90 dBm, P_c = 10 dBm, eta = 0.8,
    /// gamma = 0.75, v = 3, distances 30/20/10/20 m, unit target rates.
    pub fn baseline() -> Self {
        let cfg = SystemConfig {
            p_c: dbm_to_watts(10.0),
            sigma2: dbm_to_watts(-90.0),
            eta: 0.8,
            gamma: 0.75,
            alpha: 0.3,
            rho: 0.75,
            n_pairs: 2,
            d1: 30.0,
            d2: 20.0,
            d3: 10.0,
            d4: 20.0,
            v: 3.0,
            r_ct: 1.0,
            r_dt: 1.0,
            t_slot: 1.0,
        };
        cfg.validate().expect("baseline config is valid");
        cfg
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn check(ok: bool, field: &'static str, constraint: &'static str) -> Result<(), ConfigError> {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::Invalid { field, constraint })
            }
        }
        check(self.p_c.is_finite() && self.p_c > 0.0, "p_c", "must be a finite power > 0 W")?;
        check(
            self.sigma2.is_finite() && self.sigma2 > 0.0,
            "sigma2",
            "must be a finite power > 0 W",
        )?;
        check(
            self.eta > 0.0 && self.eta <= 1.0,
            "eta",
            "must lie in (0, 1]",
        )?;
        check(
            self.gamma >= 0.0 && self.gamma <= 1.0,
            "gamma",
            "must lie in [0, 1]",
        )?;
        check(
            self.alpha > 0.0 && self.alpha < 1.0,
            "alpha",
            "must lie in (0, 1)",
        )?;
        check(self.rho >= 0.0 && self.rho <= 1.0, "rho", "must lie in [0, 1]")?;
        check(self.n_pairs >= 1, "n_pairs", "must be at least 1")?;
        check(self.d1.is_finite() && self.d1 > 0.0, "d1", "must be a finite distance > 0 m")?;
        check(self.d2.is_finite() && self.d2 > 0.0, "d2", "must be a finite distance > 0 m")?;
        check(self.d3.is_finite() && self.d3 > 0.0, "d3", "must be a finite distance > 0 m")?;
        check(self.d4.is_finite() && self.d4 > 0.0, "d4", "must be a finite distance > 0 m")?;
        check(self.v.is_finite() && self.v >= 2.0, "v", "must be at least 2")?;
        check(self.r_ct.is_finite() && self.r_ct > 0.0, "r_ct", "must be > 0 bits/s/Hz")?;
        check(self.r_dt.is_finite() && self.r_dt > 0.0, "r_dt", "must be > 0 bits/s/Hz")?;
        check(
            self.t_slot.is_finite() && self.t_slot > 0.0,
            "t_slot",
            "must be > 0 s",
        )?;
        Ok(())
    }

    /// Mean link power gain `d_j^{-v}` for link class `j` in 0..4
    /// (0: BS->tx, 1: tx->CU, 2: tx->rx, 3: BS->rx).
    pub fn mean_gain(&self, link: usize) -> f64 {
        self.distance(link).powf(-self.v)
    }

    pub fn distance(&self, link: usize) -> f64 {
        match link {
            0 => self.d1,
            1 => self.d2,
            2 => self.d3,
            3 => self.d4,
            _ => panic!("link index out of range: {link}"),
        }
    }

    /// Transmit SNR scale `P_c / sigma2`.
    pub fn snr_scale(&self) -> f64 {
        self.p_c / self.sigma2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbm_conversion() {
        assert!((dbm_to_watts(10.0) - 0.01).abs() < 1e-18);
        assert!((dbm_to_watts(-90.0) - 1e-12).abs() < 1e-27);
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parses_dbm_and_watts_forms() {
        let json = r#"{
            "p_c": {"dbm": 10.0},
            "sigma2": {"watts": 1e-12},
            "eta": 0.8, "gamma": 0.75, "alpha": 0.3, "rho": 0.75,
            "n_pairs": 2,
            "d1": 30.0, "d2": 20.0, "d3": 10.0, "d4": 20.0,
            "v": 3.0, "r_ct": 1.0, "r_dt": 1.0
        }"#;
        let cfg = SystemConfig::from_json_str(json).unwrap();
        assert!((cfg.p_c - 0.01).abs() < 1e-18);
        assert_eq!(cfg.sigma2, 1e-12);
        assert_eq!(cfg.t_slot, 1.0, "t_slot defaults to 1");
        assert_eq!(cfg.n_pairs, 2);
        assert_eq!(cfg.d3, 10.0);
    }

    #[test]
    fn rejects_out_of_range_alpha() {
        let mut cfg = SystemConfig::baseline();
        cfg.alpha = 1.0;
        match cfg.validate() {
            Err(ConfigError::Invalid { field, .. }) => assert_eq!(field, "alpha"),
            other => panic!("expected alpha validation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_zero_pairs() {
        let mut cfg = SystemConfig::baseline();
        cfg.n_pairs = 0;
        assert!(matches!(
            cfg.validate(),
            Err(ConfigError::Invalid { field: "n_pairs", .. })
        ));
    }

    #[test]
    fn rejects_unknown_keys() {
        let json = r#"{"p_c": {"dbm": 10.0}, "bogus": 1}"#;
        assert!(matches!(
            SystemConfig::from_json_str(json),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn mean_gain_uses_path_loss() {
        let cfg = SystemConfig::baseline();
        assert!((cfg.mean_gain(0) - 30f64.powi(-3)).abs() < 1e-20);
        assert!((cfg.mean_gain(2) - 1e-3).abs() < 1e-18);
    }
}
