//! Test-only reference implementations. Nothing here calls into the
//! library's special-function kernels.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use irs_coverage::cli::default_scenario;
use irs_coverage::Scenario;

/// `e^x K_ν(x) = ∫₀^∞ exp(−2x sinh²(t/2)) cosh(νt) dt` by the trapezoidal
/// rule, which converges geometrically for this entire, rapidly decaying
/// integrand.
pub fn bessel_k_scaled(nu: u32, x: f64) -> f64 {
    assert!(x > 0.0);
    let h = (1.0 / 64.0f64).min(0.125 / x.sqrt());
    let t_max = 2.0 * (850.0 / (2.0 * x)).sqrt().asinh() + 1.0;
    let f = |t: f64| {
        let sh = (0.5 * t).sinh();
        (-2.0 * x * sh * sh).exp() * (nu as f64 * t).cosh()
    };
    let steps = (t_max / h).ceil() as usize;
    let mut sum = 0.5 * f(0.0);
    for i in 1..=steps {
        sum += f(i as f64 * h);
    }
    sum * h
}

/// Tanh-sinh quadrature on `[a, b]` with level doubling until successive
/// estimates agree to ~1e-15. Tolerates integrable endpoint singularities;
/// `f` is never evaluated exactly at an endpoint.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    // contribution of the node pair ±t, with the offset from the endpoints
    // computed without cancellation
    let pair = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        let d = half * 2.0 / (1.0 + (2.0 * u).exp());
        if d == 0.0 {
            return 0.0;
        }
        let left = a + d;
        let right = b - d;
        let mut acc = 0.0;
        if left > a {
            acc += f(left);
        }
        if right < b {
            acc += f(right);
        }
        w * acc
    };
    let t_max = 6.5;
    let mut h = 0.5;
    let mut sum = FRAC_PI_2 * f(a + half);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += pair(k as f64 * h);
        k += 1;
    }
    let mut estimate = sum * h * half;
    for level in 0..14 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += pair(k as f64 * h);
            k += 2;
        }
        let next = sum * h * half;
        if level >= 2 && (next - estimate).abs() <= 1e-15 * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// `∫_a^∞ f` via `t = a + w/(1−w)`.
pub fn half_line<F: Fn(f64) -> f64>(f: F, a: f64) -> f64 {
    tanh_sinh(
        |w| {
            let om = 1.0 - w;
            let v = f(a + w / om);
            if v == 0.0 {
                0.0
            } else {
                v / (om * om)
            }
        },
        0.0,
        1.0,
    )
}

/// `(P(k, s), Q(k, s))` from direct quadrature of `t^{k−1} e^{−t}`, with
/// `Γ(k)` taken as the sum of the two pieces.
pub fn incomplete_gamma(k: f64, s: f64) -> (f64, f64) {
    let peak = (k - 1.0).max(0.0);
    let shift = if peak > 0.0 {
        (k - 1.0) * peak.ln() - peak
    } else {
        0.0
    };
    let g = |t: f64| ((k - 1.0) * t.ln() - t - shift).exp();
    // split the lower piece at the peak so each part sees a monotone shape
    let lower = if s <= peak || peak == 0.0 {
        tanh_sinh(g, 0.0, s)
    } else {
        tanh_sinh(g, 0.0, peak) + piecewise(&g, peak, s)
    };
    let upper = if s < peak {
        tanh_sinh(g, s, peak) + half_line(g, peak)
    } else {
        half_line(g, s)
    };
    let total = lower + upper;
    (lower / total, upper / total)
}

fn piecewise<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> f64 {
    let mut acc = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (lo + 8.0).min(b);
        acc += tanh_sinh(g, lo, hi);
        lo = hi;
    }
    acc
}

/// `ln Γ(x)` by Stirling's series after shifting the argument past 40.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut z = x;
    let mut log_prod = 0.0;
    let mut prod = 1.0;
    while z < 40.0 {
        prod *= z;
        if prod > 1e250 {
            log_prod += prod.ln();
            prod = 1.0;
        }
        z += 1.0;
    }
    log_prod += prod.ln();
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
        - 1.0 / (1680.0 * z * z2 * z2 * z2);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - log_prod
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// The command-line default link with `n` elements.
pub fn default_with(n: u64) -> Scenario {
    default_scenario().with_elements(n)
}
