//! Distribution of the composite channel gain.
//!
//! A single element contributes `η = αβ`, the product of two independent
//! Rayleigh amplitudes. Its exact law involves `K0`/`K1`; for sums over
//! many elements it is replaced by a moment-matched Gamma law, whose
//! N-fold sum is again Gamma with the same scale.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::mc::EmpiricalCdf;
use crate::specfun::{bessel_k0, bessel_k1, reg_gamma_p};

/// Gamma shape of the moment-matched single-element law, `π²/(16 − π²)`.
pub const MATCHED_SHAPE: f64 = PI * PI / (16.0 - PI * PI);

/// Gamma scale per unit `σ1σ2`, `(16 − π²)/(2π)`.
pub const MATCHED_SCALE_PER_A: f64 = (16.0 - PI * PI) / (2.0 * PI);

/// Fading coefficients of the source→IRS and IRS→destination hops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighPair {
    sigma1: f64,
    sigma2: f64,
}

impl RayleighPair {
    pub fn new(sigma1: f64, sigma2: f64) -> Result<Self> {
        for (name, v) in [("sigma1", sigma1), ("sigma2", sigma2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(
                    "RayleighPair",
                    format!("{name} = {v} must be positive"),
                ));
            }
        }
        Ok(Self { sigma1, sigma2 })
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// `a = σ1 σ2`.
    pub fn a(&self) -> f64 {
        self.sigma1 * self.sigma2
    }

    /// Closed-form mean of the product, `aπ/2`.
    pub fn product_mean(&self) -> f64 {
        self.a() * PI / 2.0
    }

    /// Closed-form second moment of the product, `4a²`.
    pub fn product_second_moment(&self) -> f64 {
        4.0 * self.a() * self.a()
    }
}

/// Shape/scale parameterisation of a Gamma law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    shape: f64,
    scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite() && scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(
                "GammaParams",
                format!("shape {shape} and scale {scale} must be finite and positive"),
            ));
        }
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    /// Raw second moment `k(k+1)θ²`.
    pub fn second_moment(&self) -> f64 {
        self.shape * (self.shape + 1.0) * self.scale * self.scale
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        reg_gamma_p(self.shape, x / self.scale)
    }
}

fn check_non_negative(func: &'static str, v: f64) -> Result<()> {
    if !(v >= 0.0) {
        return Err(Error::domain(
            func,
            format!("argument {v} must be non-negative"),
        ));
    }
    Ok(())
}

/// Density of `η = αβ`: `(η/a²) K0(η/a)`, zero at the origin.
pub fn product_pdf(pair: &RayleighPair, eta: f64) -> Result<f64> {
    check_non_negative("product_pdf", eta)?;
    if eta == 0.0 || eta.is_infinite() {
        return Ok(0.0);
    }
    let a = pair.a();
    Ok(eta / (a * a) * bessel_k0(eta / a)?)
}

/// Distribution function of `η = αβ`: `1 − (η/a) K1(η/a)`.
pub fn product_cdf(pair: &RayleighPair, eta: f64) -> Result<f64> {
    check_non_negative("product_cdf", eta)?;
    if eta == 0.0 {
        return Ok(0.0);
    }
    if eta.is_infinite() {
        return Ok(1.0);
    }
    let x = eta / pair.a();
    Ok((1.0 - x * bessel_k1(x)?).clamp(0.0, 1.0))
}

/// Gamma law with the same first two moments as `η`.
pub fn moment_match(pair: &RayleighPair) -> GammaParams {
    GammaParams {
        shape: MATCHED_SHAPE,
        scale: MATCHED_SCALE_PER_A * pair.a(),
    }
}

/// Law of the sum of `n` independent copies: shape scales, scale does not.
pub fn sum_params(g: &GammaParams, n: u64) -> Result<GammaParams> {
    if n < 1 {
        return Err(Error::domain(
            "sum_params",
            "element count must be at least 1",
        ));
    }
    Ok(GammaParams {
        shape: n as f64 * g.shape,
        scale: g.scale,
    })
}

/// CDF of `A²` where `A ~ Ga(n k, θ)`: `P(nk, √z / θ)`.
pub fn a_squared_cdf(g: &GammaParams, n: u64, z: f64) -> Result<f64> {
    check_non_negative("a_squared_cdf", z)?;
    let summed = sum_params(g, n)?;
    if z.is_infinite() {
        return Ok(1.0);
    }
    reg_gamma_p(summed.shape, z.sqrt() / summed.scale)
}

/// Two-sided Kolmogorov–Smirnov distance between an empirical CDF and a
/// model CDF, evaluated at the sample points with both step sides compared.
pub fn ks_statistic<F>(sample: &EmpiricalCdf, model_cdf: F) -> f64
where
    F: Fn(f64) -> f64,
{
    let n = sample.len() as f64;
    sample
        .points()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = model_cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Rayleigh draw by inverse transform, `σ √(−2 ln U)` with `U ∈ (0, 1]`.
#[inline]
pub fn sample_rayleigh<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    sigma * (-2.0 * u.ln()).sqrt()
}

/// One draw of `αβ` with `α ~ Rayleigh(σ1)`, `β ~ Rayleigh(σ2)`.
#[inline]
pub fn sample_product<R: Rng + ?Sized>(pair: &RayleighPair, rng: &mut R) -> f64 {
    let alpha = sample_rayleigh(pair.sigma1, rng);
    let beta = sample_rayleigh(pair.sigma2, rng);
    alpha * beta
}
