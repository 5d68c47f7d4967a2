//! Modified Bessel function of the second kind, order one.
//!
//! Every closed-form outage expression in this crate reaches `K1` through
//! terms of the shape `1 - x*K1(x)`, which is the CDF of a product of two
//! independent exponential variates. The implementation is self-contained:
//! an ascending series below the split point and a Steed-style continued
//! fraction above it. Both are accurate to a few ulps, far inside the 1e-9
//! relative target the validation suite checks against a quadrature oracle.

use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Split point between the ascending series and the continued fraction.
/// The series keeps full accuracy up to here; the continued fraction
/// converges in a few dozen terms beyond it.
const SERIES_SPLIT: f64 = 2.0;

/// Beyond this argument `exp(-x)` drives `K1` below the smallest normal
/// f64; callers get an exact zero instead of a subnormal.
const UNDERFLOW_CUTOFF: f64 = 700.0;

const MAX_CF_ITER: usize = 10_000;

/// `K1(x)` for `x > 0`. Returns NaN for `x <= 0` or non-finite input,
/// and 0.0 once the result underflows (`x > 700`).
pub fn bessel_k1(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x.is_infinite() || x > UNDERFLOW_CUTOFF {
        return 0.0;
    }
    if x <= SERIES_SPLIT {
        k1_series(x)
    } else {
        k1_continued_fraction(x)
    }
}

/// `1 - x*K1(x)`, extended by its limits: 0 at `x <= 0` and 1 for huge or
/// infinite `x`. This is `P[X*Y < q]` for independent exponentials with
/// `x = 2*sqrt(lambda_x*lambda_y*q)`, so the result is clamped to [0, 1].
pub fn one_minus_x_k1(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 0.0;
    }
    if x > UNDERFLOW_CUTOFF {
        return 1.0;
    }
    (1.0 - x * bessel_k1(x)).clamp(0.0, 1.0)
}

/// Ascending series (DLMF 10.31.2 with n = 1):
/// `K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1)+psi(k+2)] q^k / (k!(k+1)!)`
/// with `q = x^2/4`. All terms are well scaled for x <= 2.
fn k1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0; // q^k / (k! (k+1)!)
    let mut i1_sum = 0.0;
    let mut psi_sum = 0.0;
    let mut h_k = 0.0; // harmonic number H_k
    let mut h_k1 = 1.0; // H_{k+1}
    for k in 0..64u32 {
        i1_sum += term;
        psi_sum += term * (h_k + h_k1 - 2.0 * EULER_GAMMA);
        let kf = f64::from(k);
        let next = term * q / ((kf + 1.0) * (kf + 2.0));
        if next < i1_sum * 1e-18 {
            break;
        }
        term = next;
        h_k += 1.0 / (kf + 1.0);
        h_k1 += 1.0 / (kf + 2.0);
    }
    let i1 = 0.5 * x * i1_sum;
    1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * psi_sum
}

/// Steed's continued fraction CF2 (Thompson & Barnett), specialized to
/// integer order: evaluates `K0(x)` and steps up to `K1` via
/// `K1 = K0 * (x + 1/2 - h) / x`. Converges for x >= 2.
fn k1_continued_fraction(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_CF_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-16 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    k0 * (x + 0.5 - h) / x
}
