//! Link-level simulator and closed-form outage calculator for a two-phase
//! D2D relay-selection protocol with RF energy harvesting and spectrum
//! sharing.
//!
//! A base station reaches its cellular user only through one of `N` D2D
//! pairs. In phase 1 the BS broadcasts; each D2D transmitter splits the
//! received power between an energy harvester and a decoder. In phase 2 a
//! selected transmitter spends the harvested power on a superposition of
//! the relayed cellular signal and its own D2D signal. The crate provides
//!
//! - the stochastic channel model and protocol mechanics
//!   ([`channel`], [`protocol`]),
//! - closed-form outage probabilities with the `K1` Bessel machinery
//!   ([`analytic`], [`bessel`]),
//! - a deterministic parallel Monte Carlo engine ([`montecarlo`]),
//! - CSV sweeps and a theory-vs-simulation validation report ([`cli`]),
//!   fronted by the `d2dsim` binary.

pub mod analytic;
pub mod bessel;
pub mod channel;
pub mod cli;
pub mod config;
pub mod montecarlo;
pub mod protocol;
pub mod rng;

pub use analytic::{alpha_bounds, cellular_outage, d2d_outage, AlphaBounds, CellularVariant};
pub use bessel::bessel_k1;
pub use channel::{draw_channels, harvested_power, ChannelRealization};
pub use config::{ConfigError, SystemConfig};
pub use montecarlo::{estimate_outage, sweep, EstimateResult, OutageCurve, SweepAxis};
pub use protocol::{run_trial, select_and_classify, OperatingCase, SelectionOutcome, TrialResult};
