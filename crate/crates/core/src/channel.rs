//! Deterministic link budget: scenario description, path loss, average SNR
//! and far-field checks. Everything here is in linear units.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

/// Angles within this distance of π/2 are treated as grazing incidence
/// with an exactly zero projected area.
const GRAZING_TOL: f64 = 1e-12;

/// Full description of an IRS-aided link.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Source to IRS distance, m.
    pub d_s: f64,
    /// IRS to destination distance, m.
    pub d_r: f64,
    /// Angle of incidence from the surface normal, rad.
    pub theta_s: f64,
    pub g_s: f64,
    pub g_r: f64,
    /// Transmit power, mW.
    pub p_s: f64,
    /// Noise power, mW.
    pub noise_power: f64,
    /// Side length of one square element, m.
    pub element_side: f64,
    pub n_elements: u64,
    /// Wavelength, m.
    pub wavelength: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl Scenario {
    /// Total reflecting area `uw = N · l_e²`.
    pub fn area(&self) -> f64 {
        self.n_elements as f64 * self.element_side * self.element_side
    }

    /// Cosine of the incidence angle, exactly zero at grazing incidence.
    pub fn incidence_cos(&self) -> f64 {
        if (self.theta_s - FRAC_PI_2).abs() <= GRAZING_TOL {
            0.0
        } else {
            self.theta_s.cos().max(0.0)
        }
    }

    /// Product of the two hop distances, `d_s · d_r`.
    pub fn distance_product(&self) -> f64 {
        self.d_s * self.d_r
    }

    /// Fading amplitude product `a = σ1 σ2`.
    pub fn fading_product(&self) -> f64 {
        self.sigma1 * self.sigma2
    }

    /// Copy with a different element count; total area follows `N · l_e²`.
    pub fn with_elements(&self, n: u64) -> Self {
        Self {
            n_elements: n,
            ..self.clone()
        }
    }

    /// Instantaneous SNR for a composite amplitude `A = Σ αᵢβᵢ`.
    pub fn snr_for_amplitude(&self, amplitude: f64) -> f64 {
        let dd = self.distance_product();
        amplitude * amplitude * average_snr(self) / (dd * dd)
    }
}

/// Far-field path-loss gain `G_s G_r/(4π)² · (uw/(d_s d_r))² · cos θ_s`.
///
/// Carries the cosine to the first power; the coverage layer works from
/// [`average_snr`], which carries `cos²`.
pub fn path_loss(s: &Scenario) -> f64 {
    let ratio = s.area() / s.distance_product();
    s.g_s * s.g_r / (16.0 * PI * PI) * ratio * ratio * s.incidence_cos()
}

/// Average SNR scale `γ̄ = P_s G_s G_r (uw cos θ_s)² / (16π² σ_n²)`.
///
/// The instantaneous SNR is `A² γ̄ / (d_s² d_r²)`; distances are not folded in.
pub fn average_snr(s: &Scenario) -> f64 {
    let eff_area = s.area() * s.incidence_cos();
    s.p_s * s.g_s * s.g_r * eff_area * eff_area / (16.0 * PI * PI * s.noise_power)
}

/// Side length of the square grid holding all elements, `l_e · ⌈√N⌉`.
pub fn surface_side(s: &Scenario) -> f64 {
    let per_side = (s.n_elements as f64).sqrt().ceil();
    s.element_side * per_side
}

/// Minimum far-field distance `2 (max{u, w})² / λ`.
pub fn far_field_min_distance(s: &Scenario) -> f64 {
    let side = surface_side(s);
    2.0 * side * side / s.wavelength
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub field: &'static str,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

/// Check every scenario invariant plus the far-field condition.
///
/// Invariant breaches are errors; far-field breaches and grazing incidence
/// are warnings.
pub fn validate(s: &Scenario) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let positive = [
        ("d_s", s.d_s),
        ("d_r", s.d_r),
        ("p_s", s.p_s),
        ("noise_power", s.noise_power),
        ("element_side", s.element_side),
        ("wavelength", s.wavelength),
        ("sigma1", s.sigma1),
        ("sigma2", s.sigma2),
    ];
    for (field, v) in positive {
        if !(v > 0.0 && v.is_finite()) {
            out.push(Diagnostic::error(
                field,
                format!("must be finite and positive, got {v}"),
            ));
        }
    }
    for (field, v) in [("g_s", s.g_s), ("g_r", s.g_r)] {
        if !(v >= 0.0 && v.is_finite()) {
            out.push(Diagnostic::error(
                field,
                format!("must be finite and non-negative, got {v}"),
            ));
        }
    }
    if !(s.theta_s >= 0.0 && s.theta_s <= FRAC_PI_2 + GRAZING_TOL) {
        out.push(Diagnostic::error(
            "theta_s",
            format!("must lie in [0, π/2], got {}", s.theta_s),
        ));
    } else if s.incidence_cos() == 0.0 {
        out.push(Diagnostic::warning(
            "theta_s",
            "grazing incidence: effective area and SNR are zero",
        ));
    }
    if out.iter().any(Diagnostic::is_error) {
        return out;
    }
    let bound = far_field_min_distance(s);
    for (field, d) in [("d_s", s.d_s), ("d_r", s.d_r)] {
        if d < bound {
            out.push(Diagnostic::warning(
                field,
                format!("{d} m is inside the far-field bound {bound} m"),
            ));
        }
    }
    out
}
