//! Closed-form coverage probability `Pr(γ ≥ γ_th)`.

use std::fmt;

use crate::channel::{average_snr, Scenario};
use crate::dist::{moment_match, sum_params, RayleighPair};
use crate::error::{Error, Result};
use crate::specfun::bessel_k1;

/// A scenario together with a linear SNR threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageQuery {
    pub scenario: Scenario,
    pub gamma_th: f64,
}

impl CoverageQuery {
    pub fn new(scenario: Scenario, gamma_th: f64) -> Result<Self> {
        check_threshold("CoverageQuery", gamma_th)?;
        Ok(Self { scenario, gamma_th })
    }

    /// `d_s d_r √(γ_th / γ̄)`, the threshold expressed on the amplitude axis.
    /// Infinite when `γ̄ = 0`.
    pub fn amplitude_threshold(&self) -> f64 {
        let gbar = average_snr(&self.scenario);
        self.scenario.distance_product() * (self.gamma_th / gbar).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactN1,
    GammaApprox,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactN1 => "exact-n1",
            Method::GammaApprox => "gamma-approx",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub probability: f64,
    pub method: Method,
    /// Argument of the closed form: `x` for the exact form, `s` for the
    /// Gamma form. Zero when the threshold is zero.
    pub s_value: f64,
    /// Gamma shape `N k`, when the method uses one.
    pub shape_value: Option<f64>,
    /// 95% half-width for sampled estimates.
    pub half_width_95: Option<f64>,
    pub diagnostics: Vec<String>,
}

impl CoverageResult {
    fn analytic(method: Method, probability: f64, s_value: f64, shape_value: Option<f64>) -> Self {
        Self {
            probability: probability.clamp(0.0, 1.0),
            method,
            s_value,
            shape_value,
            half_width_95: None,
            diagnostics: Vec::new(),
        }
    }

    fn with_diagnostic(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }
}

const DEGENERATE_NOTE: &str = "average SNR is zero (grazing incidence or empty surface)";

pub(crate) fn check_threshold(func: &'static str, gamma_th: f64) -> Result<()> {
    if !(gamma_th >= 0.0) {
        return Err(Error::domain(
            func,
            format!("threshold {gamma_th} must be non-negative"),
        ));
    }
    Ok(())
}

fn pair_of(s: &Scenario) -> Result<RayleighPair> {
    RayleighPair::new(s.sigma1, s.sigma2)
}

/// Exact single-element coverage `x K1(x)`, `x = d_s d_r √(γ_th/γ̄) / (σ1σ2)`.
pub fn coverage_exact_n1(q: &CoverageQuery) -> Result<CoverageResult> {
    check_threshold("coverage_exact_n1", q.gamma_th)?;
    if q.scenario.n_elements != 1 {
        return Err(Error::Precondition(format!(
            "exact form needs exactly one element, scenario has {}",
            q.scenario.n_elements
        )));
    }
    let pair = pair_of(&q.scenario)?;
    if q.gamma_th == 0.0 {
        return Ok(CoverageResult::analytic(Method::ExactN1, 1.0, 0.0, None));
    }
    if average_snr(&q.scenario) == 0.0 {
        return Ok(
            CoverageResult::analytic(Method::ExactN1, 0.0, f64::INFINITY, None)
                .with_diagnostic(DEGENERATE_NOTE),
        );
    }
    let x = q.amplitude_threshold() / pair.a();
    let p = if x.is_infinite() {
        0.0
    } else {
        x * bessel_k1(x)?
    };
    Ok(CoverageResult::analytic(Method::ExactN1, p, x, None))
}

/// Gamma-approximated coverage `Q(N k, s)`, `s = d_s d_r √(γ_th/γ̄) / θ`.
///
/// `γ̄` follows the scenario's own area `N · l_e²`.
pub fn coverage_general(q: &CoverageQuery) -> Result<CoverageResult> {
    check_threshold("coverage_general", q.gamma_th)?;
    let pair = pair_of(&q.scenario)?;
    let n = q.scenario.n_elements;
    if q.gamma_th == 0.0 {
        return Ok(CoverageResult::analytic(
            Method::GammaApprox,
            1.0,
            0.0,
            None,
        ));
    }
    if n == 0 {
        return Ok(
            CoverageResult::analytic(Method::GammaApprox, 0.0, f64::INFINITY, Some(0.0))
                .with_diagnostic(DEGENERATE_NOTE),
        );
    }
    let summed = sum_params(&moment_match(&pair), n)?;
    let shape = summed.shape();
    if average_snr(&q.scenario) == 0.0 {
        return Ok(
            CoverageResult::analytic(Method::GammaApprox, 0.0, f64::INFINITY, Some(shape))
                .with_diagnostic(DEGENERATE_NOTE),
        );
    }
    let s = q.amplitude_threshold() / summed.scale();
    let p = crate::specfun::reg_gamma_q(shape, s)?;
    Ok(CoverageResult::analytic(
        Method::GammaApprox,
        p,
        s,
        Some(shape),
    ))
}

/// Controls for [`optimal_elements`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Coverage target is `1 − epsilon`.
    pub epsilon: f64,
    /// Largest element count tried before giving up.
    pub cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            cap: 1_000_000,
        }
    }
}

/// Smallest `N ≥ 1` whose Gamma-approximated coverage reaches `1 − ε`,
/// with the surface area growing as `N · l_e²`.
pub fn optimal_elements(scenario: &Scenario, gamma_th: f64, opts: &SearchOptions) -> Result<u64> {
    if !(gamma_th > 0.0) || gamma_th.is_infinite() {
        return Err(Error::domain(
            "optimal_elements",
            format!("threshold {gamma_th} must be finite and positive"),
        ));
    }
    if !(opts.epsilon > 0.0 && opts.epsilon < 1.0) {
        return Err(Error::domain(
            "optimal_elements",
            format!("epsilon {} must lie in (0, 1)", opts.epsilon),
        ));
    }
    let target = 1.0 - opts.epsilon;
    if scenario.incidence_cos() == 0.0 {
        return Err(Error::NoSolution {
            cap: opts.cap,
            target,
        });
    }
    for n in 1..=opts.cap {
        let q = CoverageQuery {
            scenario: scenario.with_elements(n),
            gamma_th,
        };
        if coverage_general(&q)?.probability >= target {
            return Ok(n);
        }
    }
    Err(Error::NoSolution {
        cap: opts.cap,
        target,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn base() -> Scenario {
        Scenario {
            d_s: 100.0,
            d_r: 100.0,
            theta_s: 0.0,
            g_s: 1.0,
            g_r: 1.0,
            p_s: 1.0,
            noise_power: 1e-9,
            element_side: 0.665,
            n_elements: 1,
            wavelength: 1.33,
            sigma1: 1.0,
            sigma2: 1.0,
        }
    }

    fn query(s: Scenario, gamma_th: f64) -> CoverageQuery {
        CoverageQuery::new(s, gamma_th).unwrap()
    }

    /// Threshold for which the exact-form argument equals `x`.
    fn threshold_for_x(s: &Scenario, x: f64) -> f64 {
        let amp = x * s.fading_product() / s.distance_product();
        amp * amp * average_snr(s)
    }

    #[test]
    fn zero_threshold_is_full_coverage() {
        let q = query(base(), 0.0);
        assert_eq!(coverage_exact_n1(&q).unwrap().probability, 1.0);
        assert_eq!(coverage_general(&q).unwrap().probability, 1.0);
        let empty = query(base().with_elements(0), 0.0);
        assert_eq!(coverage_general(&empty).unwrap().probability, 1.0);
    }

    #[test]
    fn exact_form_at_unit_argument() {
        let s = base();
        let q = query(s.clone(), threshold_for_x(&s, 1.0));
        let r = coverage_exact_n1(&q).unwrap();
        assert!((r.s_value - 1.0).abs() < 1e-12);
        assert!((r.probability - 0.601_907_230_197_234_6).abs() < 1e-11);
        assert_eq!(r.method, Method::ExactN1);
    }

    #[test]
    fn exact_form_requires_one_element() {
        let q = query(base().with_elements(2), 1.0);
        assert!(matches!(coverage_exact_n1(&q), Err(Error::Precondition(_))));
    }

    #[test]
    fn huge_thresholds_vanish() {
        let q = query(base(), 1e30);
        assert_eq!(coverage_exact_n1(&q).unwrap().probability, 0.0);
        assert_eq!(coverage_general(&q).unwrap().probability, 0.0);
    }

    #[test]
    fn empty_surface_never_covers() {
        let q = query(base().with_elements(0), 1e-6);
        let r = coverage_general(&q).unwrap();
        assert_eq!(r.probability, 0.0);
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn grazing_incidence_is_degenerate_not_an_error() {
        let s = Scenario {
            theta_s: FRAC_PI_2,
            ..base()
        };
        let r = coverage_exact_n1(&query(s.clone(), 1.0)).unwrap();
        assert_eq!(r.probability, 0.0);
        assert_eq!(r.diagnostics.len(), 1);
        assert_eq!(
            coverage_general(&query(s.clone(), 1.0))
                .unwrap()
                .probability,
            0.0
        );
        assert!(matches!(
            optimal_elements(&s, 1.0, &SearchOptions::default()),
            Err(Error::NoSolution { .. })
        ));
    }

    #[test]
    fn negative_threshold_rejected() {
        assert!(CoverageQuery::new(base(), -1.0).is_err());
        let q = CoverageQuery {
            scenario: base(),
            gamma_th: f64::NAN,
        };
        assert!(coverage_general(&q).is_err());
    }

    #[test]
    fn sigma_rescaling_is_bit_identical() {
        let s = Scenario {
            sigma1: 0.75,
            sigma2: 1.5,
            n_elements: 5,
            ..base()
        };
        let reference = coverage_general(&query(s.clone(), 10.0))
            .unwrap()
            .probability;
        for c in [0.25, 0.5, 2.0, 4.0] {
            let scaled = Scenario {
                sigma1: s.sigma1 * c,
                sigma2: s.sigma2 / c,
                ..s.clone()
            };
            assert_eq!(
                coverage_general(&query(scaled, 10.0)).unwrap().probability,
                reference
            );
        }
    }

    #[test]
    fn optimal_search_first_crossing() {
        let s = base();
        let opts = SearchOptions::default();
        let n = optimal_elements(&s, 10.0, &opts).unwrap();
        assert!(n > 1);
        let p = |n| {
            coverage_general(&query(s.with_elements(n), 10.0))
                .unwrap()
                .probability
        };
        assert!(p(n) >= 1.0 - opts.epsilon);
        assert!(p(n - 1) < 1.0 - opts.epsilon);
        assert_eq!(optimal_elements(&s, 1e-12, &opts).unwrap(), 1);
    }

    #[test]
    fn optimal_search_errors() {
        let s = base();
        let opts = SearchOptions::default();
        assert!(matches!(
            optimal_elements(&s, 0.0, &opts),
            Err(Error::Domain { .. })
        ));
        let tight = SearchOptions {
            epsilon: 1e-3,
            cap: 3,
        };
        let err = optimal_elements(&s, 1e3, &tight).unwrap_err();
        assert!(matches!(err, Error::NoSolution { cap: 3, .. }));
        let bad_eps = SearchOptions {
            epsilon: 1.5,
            cap: 10,
        };
        assert!(optimal_elements(&s, 1.0, &bad_eps).is_err());
    }
}
