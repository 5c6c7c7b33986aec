//! Special functions needed by the closed-form coverage expressions.
//!
//! Two-regime evaluation throughout: power series below a crossover
//! (x ≤ 2 for the Bessel functions, s < k + 1 for the incomplete Gamma
//! function) and a continued fraction above it. Results whose true value
//! falls below [`UNDERFLOW`] are returned as exactly zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Values below this magnitude are flushed to zero.
pub const UNDERFLOW: f64 = 1e-300;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const BESSEL_CROSSOVER: f64 = 2.0;
const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;

/// Iteration controls shared by the series and continued-fraction kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

impl Accuracy {
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-6) {
            return Err(Error::domain(
                "Accuracy",
                format!("rel_tol {rel_tol} outside (0, 1e-6)"),
            ));
        }
        if max_iter < 100 {
            return Err(Error::domain(
                "Accuracy",
                format!("max_iter {max_iter} below 100"),
            ));
        }
        Ok(Self { rel_tol, max_iter })
    }
}

#[inline]
fn flush(v: f64) -> f64 {
    if v < UNDERFLOW {
        0.0
    } else {
        v
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "ln_gamma",
            format!("x = {x} must be positive"),
        ));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        // reflection; sin(πx) > 0 on (0, 1/2)
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

fn check_gamma_args(func: &'static str, k: f64, s: f64) -> Result<()> {
    if !(k > 0.0) || k.is_infinite() {
        return Err(Error::domain(
            func,
            format!("shape k = {k} must be finite and positive"),
        ));
    }
    if !(s >= 0.0) {
        return Err(Error::domain(
            func,
            format!("argument s = {s} must be non-negative"),
        ));
    }
    Ok(())
}

/// `ln(s^k e^{-s} / Γ(k))`, the common prefactor of both kernels.
fn gamma_prefactor_ln(k: f64, s: f64) -> f64 {
    k * s.ln() - s - ln_gamma_unchecked(k)
}

/// Series for P(k, s); converges quickly for s < k + 1.
fn lower_series(k: f64, s: f64, acc: &Accuracy) -> Result<f64> {
    let mut ap = k;
    let mut term = 1.0 / k;
    let mut sum = term;
    for _ in 0..acc.max_iter {
        ap += 1.0;
        term *= s / ap;
        sum += term;
        if term.abs() < sum.abs() * acc.rel_tol {
            return Ok(sum * gamma_prefactor_ln(k, s).exp());
        }
    }
    Err(Error::NonConvergence {
        func: "reg_gamma (series)",
        max_iter: acc.max_iter,
    })
}

/// Modified Lentz continued fraction for Q(k, s); used for s ≥ k + 1.
fn upper_fraction(k: f64, s: f64, acc: &Accuracy) -> Result<f64> {
    let mut b = s + 1.0 - k;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=acc.max_iter {
        let an = -(i as f64) * (i as f64 - k);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < acc.rel_tol {
            return Ok((gamma_prefactor_ln(k, s).exp() * h).clamp(0.0, 1.0));
        }
    }
    Err(Error::NonConvergence {
        func: "reg_gamma (continued fraction)",
        max_iter: acc.max_iter,
    })
}

/// Regularized upper incomplete Gamma function `Q(k, s) = Γ(k, s) / Γ(k)`.
pub fn reg_gamma_q(k: f64, s: f64) -> Result<f64> {
    reg_gamma_q_with(k, s, &Accuracy::default())
}

pub fn reg_gamma_q_with(k: f64, s: f64, acc: &Accuracy) -> Result<f64> {
    check_gamma_args("reg_gamma_q", k, s)?;
    if s == 0.0 {
        return Ok(1.0);
    }
    if s.is_infinite() {
        return Ok(0.0);
    }
    if s < k + 1.0 {
        let p = lower_series(k, s, acc)?;
        Ok(flush((1.0 - p).clamp(0.0, 1.0)))
    } else {
        Ok(flush(upper_fraction(k, s, acc)?))
    }
}

/// Regularized lower incomplete Gamma function `P(k, s) = γ(k, s) / Γ(k)`.
pub fn reg_gamma_p(k: f64, s: f64) -> Result<f64> {
    reg_gamma_p_with(k, s, &Accuracy::default())
}

pub fn reg_gamma_p_with(k: f64, s: f64, acc: &Accuracy) -> Result<f64> {
    check_gamma_args("reg_gamma_p", k, s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    if s < k + 1.0 {
        Ok(flush(lower_series(k, s, acc)?.clamp(0.0, 1.0)))
    } else {
        let q = upper_fraction(k, s, acc)?;
        Ok((1.0 - q).clamp(0.0, 1.0))
    }
}

fn check_bessel_arg(func: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::domain(func, format!("x = {x} must be positive")));
    }
    Ok(())
}

/// Ascending series for (K0, K1) on 0 < x ≤ 2.
fn bessel_k01_series(x: f64, acc: &Accuracy) -> Result<(f64, f64)> {
    let y = 0.25 * x * x;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;

    // u_j = y^j / (j!)^2, t_j = y^j / (j! (j+1)!), h = H_j
    let mut u = 1.0;
    let mut t = 1.0;
    let mut h = 0.0;
    let mut k0 = -log_term;
    let mut k1_sum = log_term - 0.5;
    let tol = acc.rel_tol.min(f64::EPSILON);
    for j in 1..=acc.max_iter {
        let jf = j as f64;
        u *= y / (jf * jf);
        t *= y / (jf * (jf + 1.0));
        h += 1.0 / jf;
        let d0 = u * (h - log_term);
        let d1 = t * (log_term - h - 0.5 / (jf + 1.0));
        k0 += d0;
        k1_sum += d1;
        if d0.abs() <= tol * k0.abs() && d1.abs() <= tol * k1_sum.abs().max(1.0) {
            return Ok((k0, 1.0 / x + 0.5 * x * k1_sum));
        }
    }
    Err(Error::NonConvergence {
        func: "bessel_k (series)",
        max_iter: acc.max_iter,
    })
}

/// Steed's continued fraction for the exponentially scaled pair
/// (e^x K0, e^x K1) on x > 2.
fn bessel_k01e_fraction(x: f64, acc: &Accuracy) -> Result<(f64, f64)> {
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
    let tol = acc.rel_tol.min(f64::EPSILON);
    let mut converged = false;
    for i in 2..=acc.max_iter {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
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
        if (dels / s).abs() < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            func: "bessel_k (continued fraction)",
            max_iter: acc.max_iter,
        });
    }
    h *= a1;
    let k0e = (PI / (2.0 * x)).sqrt() / s;
    let k1e = k0e * (x + 0.5 - h) / x;
    Ok((k0e, k1e))
}

/// Both `e^x K0(x)` and `e^x K1(x)` for `x > 0`.
pub fn bessel_k01e(x: f64) -> Result<(f64, f64)> {
    check_bessel_arg("bessel_k01e", x)?;
    if x.is_infinite() {
        return Ok((0.0, 0.0));
    }
    let acc = Accuracy::default();
    if x <= BESSEL_CROSSOVER {
        let (k0, k1) = bessel_k01_series(x, &acc)?;
        let ex = x.exp();
        Ok((k0 * ex, k1 * ex))
    } else {
        bessel_k01e_fraction(x, &acc)
    }
}

/// Exponentially scaled `e^x K0(x)`. Never underflows.
pub fn bessel_k0e(x: f64) -> Result<f64> {
    Ok(bessel_k01e(x)?.0)
}

/// Exponentially scaled `e^x K1(x)`. Never underflows.
pub fn bessel_k1e(x: f64) -> Result<f64> {
    Ok(bessel_k01e(x)?.1)
}

/// Both `K0(x)` and `K1(x)` for `x > 0`, flushed to zero below [`UNDERFLOW`].
pub fn bessel_k01(x: f64) -> Result<(f64, f64)> {
    check_bessel_arg("bessel_k01", x)?;
    if x <= BESSEL_CROSSOVER {
        return bessel_k01_series(x, &Accuracy::default());
    }
    let (k0e, k1e) = bessel_k01e(x)?;
    Ok((scale_down(k0e, x), scale_down(k1e, x)))
}

fn scale_down(scaled: f64, x: f64) -> f64 {
    // the scaled values are O(1/√x), so test the log before exponentiating
    let ln_v = scaled.ln() - x;
    if ln_v < UNDERFLOW.ln() {
        0.0
    } else {
        flush(scaled * (-x).exp())
    }
}

/// Modified Bessel function of the second kind, order zero.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check_bessel_arg("bessel_k0", x)?;
    Ok(bessel_k01(x)?.0)
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1(x: f64) -> Result<f64> {
    check_bessel_arg("bessel_k1", x)?;
    Ok(bessel_k01(x)?.1)
}
