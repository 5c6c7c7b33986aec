//! Coverage evaluators behind a common trait, looked up by name.

use std::collections::BTreeMap;

use crate::coverage::{coverage_exact_n1, coverage_general, CoverageQuery, CoverageResult, Method};
use crate::error::{Error, Result};
use crate::mc::{MonteCarlo, SimConfig};

/// One way of computing `Pr(γ ≥ γ_th)` for a query.
pub trait CoverageMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, query: &CoverageQuery) -> Result<CoverageResult>;
}

/// Closed form for a single element.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSingleElement;

impl CoverageMethod for ExactSingleElement {
    fn name(&self) -> &'static str {
        Method::ExactN1.as_str()
    }

    fn evaluate(&self, query: &CoverageQuery) -> Result<CoverageResult> {
        coverage_exact_n1(query)
    }
}

/// Moment-matched Gamma form, any element count.
#[derive(Debug, Clone, Copy, Default)]
pub struct GammaApprox;

impl CoverageMethod for GammaApprox {
    fn name(&self) -> &'static str {
        Method::GammaApprox.as_str()
    }

    fn evaluate(&self, query: &CoverageQuery) -> Result<CoverageResult> {
        coverage_general(query)
    }
}

#[derive(Default)]
pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Box<dyn CoverageMethod>>,
}

impl MethodRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding the three built-in evaluators; the sampled one runs
    /// with `sim`.
    pub fn with_builtin(sim: SimConfig) -> Self {
        let mut reg = Self::new();
        reg.register(Box::new(ExactSingleElement));
        reg.register(Box::new(GammaApprox));
        reg.register(Box::new(MonteCarlo { config: sim }));
        reg
    }

    /// Adds a method, replacing any earlier one with the same name.
    pub fn register(&mut self, method: Box<dyn CoverageMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CoverageMethod> {
        self.methods
            .get(name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.methods.keys().copied()
    }
}
