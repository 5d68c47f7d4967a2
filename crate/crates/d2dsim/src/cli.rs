//! Sweep orchestration, CSV emission and the validation report backing
//! the `d2dsim` binary.
//!
//! The CSV layout is fixed so downstream plotting never has to sniff
//! columns; failed sweep points keep their row with `nan` markers. All
//! numbers are formatted with 9 significant digits, locale-independent,
//! and rows end in CRLF per RFC 4180.

use crate::analytic::{
    alpha_bounds, cellular_outage, cellular_outage_terms, d2d_outage, CellularVariant,
};
use crate::config::SystemConfig;
use crate::montecarlo::{estimate_outage, sweep, OutageCurve, SweepAxis};

pub const CSV_HEADER: &str = "axis,value,p_oc_mc,p_oc_ci,p_oc_literal,p_oc_corrected,p_od_mc,p_od_ci,p_od_analytic,case1,case2,case3,case4,trials,seed";

/// Which analytic cellular columns to fill; the schema never changes,
/// a deselected variant's column reads `nan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VariantSelect {
    Literal,
    Corrected,
    #[default]
    Both,
}

impl VariantSelect {
    fn literal(self) -> bool {
        matches!(self, VariantSelect::Literal | VariantSelect::Both)
    }

    fn corrected(self) -> bool {
        matches!(self, VariantSelect::Corrected | VariantSelect::Both)
    }
}

impl std::str::FromStr for VariantSelect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(VariantSelect::Literal),
            "corrected" => Ok(VariantSelect::Corrected),
            "both" => Ok(VariantSelect::Both),
            other => Err(format!(
                "unknown variant `{other}` (expected literal, corrected or both)"
            )),
        }
    }
}

/// Everything `run` needs once the config file is loaded.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub variant: VariantSelect,
}

/// Nine significant digits, scientific notation; `nan` for markers.
fn fmt_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else {
        "nan".to_string()
    }
}

/// Run the sweep and render the full CSV document.
pub fn run_sweep(base: &SystemConfig, spec: &SweepSpec) -> (OutageCurve, String) {
    let curve = sweep(
        base,
        spec.axis,
        &spec.values,
        spec.trials,
        spec.seed,
        spec.workers,
    );
    let csv = render_csv(&curve, spec.variant);
    (curve, csv)
}

pub fn render_csv(curve: &OutageCurve, variant: VariantSelect) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push_str("\r\n");
    for point in &curve.points {
        let axis = curve.axis.name();
        let row = match &point.data {
            Ok(data) => {
                let est = &data.estimate;
                let lit = if variant.literal() { data.p_oc_literal } else { f64::NAN };
                let cor = if variant.corrected() { data.p_oc_corrected } else { f64::NAN };
                format!(
                    "{axis},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    fmt_f(point.value),
                    fmt_f(est.p_oc_hat),
                    fmt_f(est.ci_halfwidth_oc),
                    fmt_f(lit),
                    fmt_f(cor),
                    fmt_f(est.p_od_hat),
                    fmt_f(est.ci_halfwidth_od),
                    fmt_f(data.p_od_analytic),
                    est.case_histogram[0],
                    est.case_histogram[1],
                    est.case_histogram[2],
                    est.case_histogram[3],
                    est.trials,
                    point.seed,
                )
            }
            Err(_) => format!(
                "{axis},{},nan,nan,nan,nan,nan,nan,nan,0,0,0,0,{},{}",
                fmt_f(point.value),
                curve.trials,
                point.seed,
            ),
        };
        out.push_str(&row);
        out.push_str("\r\n");
    }
    out
}

/// One agreement check between a Monte Carlo estimate and a closed form.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub mc: f64,
    pub analytic: f64,
    pub gap_se: f64,
    pub pass: bool,
    /// Informational checks document the printed formulas and never
    /// affect the exit status.
    pub mandatory: bool,
}

/// Agreement within three binomial standard errors of the closed-form
/// value; the epsilon absorbs exact-match rounding when both sides
/// saturate at 0 or 1.
fn three_se_check(
    name: &'static str,
    mc: f64,
    analytic: f64,
    trials: u64,
    mandatory: bool,
) -> Check {
    let se = (analytic * (1.0 - analytic) / trials as f64).sqrt();
    let gap = (mc - analytic).abs();
    let gap_se = if se > 0.0 { gap / se } else if gap == 0.0 { 0.0 } else { f64::INFINITY };
    Check {
        name,
        mc,
        analytic,
        gap_se,
        pass: gap <= 3.0 * se + 1e-12,
        mandatory,
    }
}

/// Theory-vs-simulation report: alpha bounds, the two cellular variants,
/// the D2D closed form, and the phase-1 decode-failure cross-check.
/// Returns the rendered text plus the overall mandatory verdict.
pub fn validation_report(
    cfg: &SystemConfig,
    trials: u64,
    seed: u64,
    workers: usize,
) -> (String, bool) {
    let est = estimate_outage(cfg, trials, seed, workers);
    let bounds = alpha_bounds(cfg);
    let terms = cellular_outage_terms(cfg);

    let p_oc_lit = cellular_outage(cfg, CellularVariant::Literal);
    let p_oc_cor = cellular_outage(cfg, CellularVariant::Corrected);
    let p_od = d2d_outage(cfg);

    // empirical fraction of trials where no transmitter decoded: that is
    // exactly the case-1 share of the histogram
    let p1_hat = est.case_histogram[0] as f64 / trials as f64;

    let checks = [
        three_se_check("cellular outage (corrected)", est.p_oc_hat, p_oc_cor, trials, true),
        three_se_check("cellular outage (literal)", est.p_oc_hat, p_oc_lit, trials, false),
        three_se_check("d2d outage (printed form)", est.p_od_hat, p_od, trials, false),
        three_se_check("phase-1 nobody-decodes", p1_hat, terms.p1, trials, true),
    ];

    let mut report = String::new();
    let mut ok = true;
    report.push_str(&format!(
        "config: alpha={} rho={} n_pairs={} gamma={} eta={} r_ct={} r_dt={}\n",
        cfg.alpha, cfg.rho, cfg.n_pairs, cfg.gamma, cfg.eta, cfg.r_ct, cfg.r_dt
    ));
    report.push_str(&format!("trials: {trials} seed: {seed} workers: {workers}\n"));
    report.push_str(&format!(
        "alpha bound (cellular, 1-delta): {}{}\n",
        fmt_f(bounds.delta_bound),
        if bounds.delta_bound <= 0.0 { " [infeasible for any alpha]" } else { "" }
    ));
    report.push_str(&format!(
        "alpha bound (d2d case 3, 1-mu): {}{}\n",
        fmt_f(bounds.mu_bound),
        if bounds.mu_bound <= 0.0 { " [infeasible for any alpha]" } else { "" }
    ));
    report.push_str(&format!(
        "monte carlo: p_oc={} +-{} p_od={} +-{} cases={:?}\n",
        fmt_f(est.p_oc_hat),
        fmt_f(est.ci_halfwidth_oc),
        fmt_f(est.p_od_hat),
        fmt_f(est.ci_halfwidth_od),
        est.case_histogram
    ));
    for check in &checks {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        let kind = if check.mandatory { "" } else { " [informational]" };
        report.push_str(&format!(
            "{}: analytic={} mc={} gap={} ({} se) {}{}\n",
            check.name,
            fmt_f(check.analytic),
            fmt_f(check.mc),
            fmt_f((check.mc - check.analytic).abs()),
            fmt_f(check.gap_se),
            verdict,
            kind
        ));
        if check.mandatory && !check.pass {
            ok = false;
        }
    }
    report.push_str(&format!(
        "result: {}\n",
        if ok { "PASS" } else { "FAIL" }
    ));
    (report, ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_fixed_schema_and_crlf() {
        let cfg = SystemConfig::baseline();
        let spec = SweepSpec {
            axis: SweepAxis::Alpha,
            values: vec![0.2, 0.3],
            trials: 500,
            seed: 5,
            workers: 2,
            variant: VariantSelect::Both,
        };
        let (_, csv) = run_sweep(&cfg, &spec);
        let lines: Vec<&str> = csv.split("\r\n").filter(|l| !l.is_empty()).collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_HEADER);
        for line in &lines {
            assert_eq!(line.matches(',').count(), 14, "15 columns in {line}");
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let cfg = SystemConfig::baseline();
        let spec = SweepSpec {
            axis: SweepAxis::NPairs,
            values: vec![1.0, 2.0],
            trials: 300,
            seed: 9,
            workers: 1,
            variant: VariantSelect::Both,
        };
        let (_, a) = run_sweep(&cfg, &spec);
        let mut spec8 = spec.clone();
        spec8.workers = 8;
        let (_, b) = run_sweep(&cfg, &spec8);
        assert_eq!(a, b, "bytes must not depend on worker count");
    }

    #[test]
    fn failed_points_keep_their_rows() {
        let cfg = SystemConfig::baseline();
        let spec = SweepSpec {
            axis: SweepAxis::Alpha,
            values: vec![0.3, 2.0],
            trials: 50,
            seed: 1,
            workers: 1,
            variant: VariantSelect::Both,
        };
        let (curve, csv) = run_sweep(&cfg, &spec);
        assert!(!curve.all_ok());
        let lines: Vec<&str> = csv.split("\r\n").filter(|l| !l.is_empty()).collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].contains(",nan,"));
        assert_eq!(lines[2].matches(',').count(), 14);
    }

    #[test]
    fn variant_selector_blanks_other_column() {
        let cfg = SystemConfig::baseline();
        let spec = SweepSpec {
            axis: SweepAxis::Alpha,
            values: vec![0.3],
            trials: 50,
            seed: 1,
            workers: 1,
            variant: VariantSelect::Corrected,
        };
        let (_, csv) = run_sweep(&cfg, &spec);
        let line = csv.split("\r\n").nth(1).unwrap();
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[4], "nan", "literal column blanked");
        assert_ne!(cols[5], "nan");
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_f(0.5222981721526758), "5.22298172e-1");
        assert_eq!(fmt_f(1.0), "1.00000000e0");
        assert_eq!(fmt_f(f64::NAN), "nan");
    }

    #[test]
    fn report_saturated_alpha_passes() {
        // alpha past the bound: MC and both closed forms all sit at 1
        let mut cfg = SystemConfig::baseline();
        cfg.alpha = 0.6;
        let (report, ok) = validation_report(&cfg, 2_000, 4, 2);
        assert!(ok, "report:\n{report}");
        assert!(report.contains("alpha bound (cellular, 1-delta): 5.00000000e-1"));
    }

    #[test]
    fn report_no_harvest_config_passes() {
        let mut cfg = SystemConfig::baseline();
        cfg.gamma = 0.0;
        let (report, ok) = validation_report(&cfg, 2_000, 4, 2);
        assert!(ok, "gamma=0 must saturate both sides exactly:\n{report}");
    }
}
