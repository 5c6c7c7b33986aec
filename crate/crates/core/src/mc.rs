//! Monte Carlo reference for the coverage expressions.
//!
//! Reflection phases are assumed to cancel the hop phases exactly, so each
//! trial draws `N` amplitude pairs and forms `A = Σ αᵢβᵢ` directly.
//!
//! Trials are cut into fixed-size batches. Batch `i` always uses the
//! ChaCha stream `i` of the configured seed, so the count does not depend
//! on how batches are spread over worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{average_snr, Scenario};
use crate::coverage::{check_threshold, CoverageQuery, CoverageResult, Method};
use crate::dist::{sample_product, RayleighPair};
use crate::error::{Error, Result};
use crate::method::CoverageMethod;

const BATCH: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Thread count hint; results do not depend on it.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 0,
            workers: 1,
        }
    }
}

impl SimConfig {
    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("SimConfig", "trials must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::domain("SimConfig", "workers must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub estimate: f64,
    pub trials: u64,
    pub seed: u64,
    pub half_width_95: f64,
    pub gamma_th: f64,
    pub scenario_echo: Scenario,
}

/// Normal-approximation 95% half-width, `1.96 √(p(1−p)/n)`.
pub fn half_width_95(p: f64, trials: u64) -> f64 {
    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// Run `f(batch_index, batch_len)` over all batches and collect the results
/// in batch order.
fn run_batches<T, F>(cfg: &SimConfig, total: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let batches = total.div_ceil(BATCH);
    let len = |b: u64| BATCH.min(total - b * BATCH);
    if cfg.workers == 1 {
        return Ok((0..batches).map(|b| f(b, len(b))).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..batches).into_par_iter().map(|b| f(b, len(b))).collect()))
}

/// Empirical coverage: fraction of trials with `A² γ̄ / (d_s d_r)² ≥ γ_th`.
pub fn simulate_coverage(q: &CoverageQuery, cfg: &SimConfig) -> Result<SimReport> {
    cfg.check()?;
    check_threshold("simulate_coverage", q.gamma_th)?;
    let s = &q.scenario;
    let pair = RayleighPair::new(s.sigma1, s.sigma2)?;
    let dd = s.distance_product();
    let snr_per_amp2 = average_snr(s) / (dd * dd);
    let n = s.n_elements;
    let gamma_th = q.gamma_th;

    let counts = run_batches(cfg, cfg.trials, |b, len| {
        let mut rng = batch_rng(cfg.seed, b);
        let mut hits = 0u64;
        for _ in 0..len {
            let amp: f64 = (0..n).map(|_| sample_product(&pair, &mut rng)).sum();
            if amp * amp * snr_per_amp2 >= gamma_th {
                hits += 1;
            }
        }
        hits
    })?;
    let hits: u64 = counts.iter().sum();
    let estimate = hits as f64 / cfg.trials as f64;
    Ok(SimReport {
        estimate,
        trials: cfg.trials,
        seed: cfg.seed,
        half_width_95: half_width_95(estimate, cfg.trials),
        gamma_th,
        scenario_echo: s.clone(),
    })
}

/// `count` draws of the single-element product `αβ`, reproducible for a
/// given seed irrespective of `cfg.workers`. `cfg.trials` is ignored.
pub fn sample_products(pair: &RayleighPair, count: u64, cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.check()?;
    let chunks = run_batches(cfg, count, |b, len| {
        let mut rng = batch_rng(cfg.seed, b);
        (0..len)
            .map(|_| sample_product(pair, &mut rng))
            .collect::<Vec<_>>()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Right-continuous step CDF over a sorted, non-empty sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    points: Vec<f64>,
}

impl EmpiricalCdf {
    /// Takes an ascending sample; rejects empty, unsorted or NaN input.
    pub fn from_sorted(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if points.iter().any(|x| x.is_nan()) || points.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain(
                "EmpiricalCdf",
                "sample must be sorted ascending without NaN",
            ));
        }
        Ok(Self { points })
    }

    pub fn from_unsorted(mut points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|x| x.is_nan()) {
            return Err(Error::domain("EmpiricalCdf", "sample contains NaN"));
        }
        points.sort_by(f64::total_cmp);
        Self::from_sorted(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Fraction of the sample `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        let below = self.points.partition_point(|&p| p <= x);
        below as f64 / self.points.len() as f64
    }
}

/// Sampled coverage behind the strategy interface.
#[derive(Debug, Clone)]
pub struct MonteCarlo {
    pub config: SimConfig,
}

impl CoverageMethod for MonteCarlo {
    fn name(&self) -> &'static str {
        Method::MonteCarlo.as_str()
    }

    fn evaluate(&self, query: &CoverageQuery) -> Result<CoverageResult> {
        let report = simulate_coverage(query, &self.config)?;
        Ok(CoverageResult {
            probability: report.estimate,
            method: Method::MonteCarlo,
            s_value: query.amplitude_threshold(),
            shape_value: None,
            half_width_95: Some(report.half_width_95),
            diagnostics: Vec::new(),
        })
    }
}
