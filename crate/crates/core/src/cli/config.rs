//! Flat `key = value` scenario files.
//!
//! Powers and gains are given in dB (dBm, dBi) and the angle in degrees;
//! they are converted to the library's linear units here and nowhere else.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::channel::{validate, Diagnostic, Scenario};
use crate::error::{Error, Result};

pub const DEFAULT_DISTANCE_M: f64 = 100.0;
pub const DEFAULT_TX_POWER_DBM: f64 = 0.0;
pub const DEFAULT_GAIN_DBI: f64 = 0.0;
pub const DEFAULT_NOISE_DBM: f64 = -90.0;
/// Chosen so that the default link needs 8, 12 and 19 elements for
/// complete coverage at 10, 20 and 30 dB.
pub const DEFAULT_WAVELENGTH_M: f64 = 1.33;
pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_ELEMENTS: u64 = 1;

pub const KEYS: [&str; 12] = [
    "d_s_m",
    "d_r_m",
    "theta_s_deg",
    "g_s_dbi",
    "g_r_dbi",
    "p_s_dbm",
    "noise_dbm",
    "element_side_m",
    "n_elements",
    "wavelength_m",
    "sigma1",
    "sigma2",
];

/// dB (or dBm, dBi) to linear power ratio (or mW).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

/// The scenario built from an empty configuration.
pub fn default_scenario() -> Scenario {
    let wavelength = DEFAULT_WAVELENGTH_M;
    Scenario {
        d_s: DEFAULT_DISTANCE_M,
        d_r: DEFAULT_DISTANCE_M,
        theta_s: deg_to_rad(0.0),
        g_s: db_to_linear(DEFAULT_GAIN_DBI),
        g_r: db_to_linear(DEFAULT_GAIN_DBI),
        p_s: db_to_linear(DEFAULT_TX_POWER_DBM),
        noise_power: db_to_linear(DEFAULT_NOISE_DBM),
        element_side: wavelength / 2.0,
        n_elements: DEFAULT_ELEMENTS,
        wavelength,
        sigma1: DEFAULT_SIGMA,
        sigma2: DEFAULT_SIGMA,
    }
}

/// Read and validate a scenario file. Warnings do not fail; errors do.
pub fn parse_config(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    let scenario = parse_config_str(&text, path)?;
    let errors: Vec<Diagnostic> = validate(&scenario)
        .into_iter()
        .filter(Diagnostic::is_error)
        .collect();
    if errors.is_empty() {
        Ok(scenario)
    } else {
        Err(Error::Validation(errors))
    }
}

/// Parse scenario text without validating it. `origin` only labels errors.
pub fn parse_config_str(text: &str, origin: &Path) -> Result<Scenario> {
    let perr = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut s = default_scenario();
    let mut seen = HashSet::new();
    let mut side_given = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(perr(line_no, format!("unknown key `{key}`")));
        }
        if !seen.insert(key.to_string()) {
            return Err(perr(line_no, format!("duplicate key `{key}`")));
        }
        if key == "n_elements" {
            s.n_elements = value
                .parse()
                .map_err(|_| perr(line_no, format!("`{value}` is not a non-negative integer")))?;
            continue;
        }
        let v: f64 = value
            .parse()
            .map_err(|_| perr(line_no, format!("`{value}` is not a number")))?;
        match key {
            "d_s_m" => s.d_s = v,
            "d_r_m" => s.d_r = v,
            "theta_s_deg" => s.theta_s = deg_to_rad(v),
            "g_s_dbi" => s.g_s = db_to_linear(v),
            "g_r_dbi" => s.g_r = db_to_linear(v),
            "p_s_dbm" => s.p_s = db_to_linear(v),
            "noise_dbm" => s.noise_power = db_to_linear(v),
            "element_side_m" => {
                s.element_side = v;
                side_given = true;
            }
            "wavelength_m" => s.wavelength = v,
            "sigma1" => s.sigma1 = v,
            "sigma2" => s.sigma2 = v,
            _ => unreachable!("key list checked above"),
        }
    }
    if !side_given {
        s.element_side = s.wavelength / 2.0;
    }
    Ok(s)
}

/// Value in config units that maps back to `linear` bit-exactly, when one
/// exists within a few hundred ulps of the direct inverse.
fn encode_exact(linear: f64, inverse: impl Fn(f64) -> f64, forward: impl Fn(f64) -> f64) -> f64 {
    let guess = inverse(linear);
    if !guess.is_finite() || forward(guess) == linear {
        return guess;
    }
    let (mut up, mut down) = (guess, guess);
    for _ in 0..512 {
        up = up.next_up();
        if forward(up) == linear {
            return up;
        }
        down = down.next_down();
        if forward(down) == linear {
            return down;
        }
    }
    guess
}

/// Render a scenario in config syntax, one `key = value` per line.
pub fn scenario_echo(s: &Scenario) -> String {
    let db = |v: f64| encode_exact(v, linear_to_db, db_to_linear);
    let deg = encode_exact(s.theta_s, f64::to_degrees, deg_to_rad);
    let fields: [(&str, String); 12] = [
        ("d_s_m", s.d_s.to_string()),
        ("d_r_m", s.d_r.to_string()),
        ("theta_s_deg", deg.to_string()),
        ("g_s_dbi", db(s.g_s).to_string()),
        ("g_r_dbi", db(s.g_r).to_string()),
        ("p_s_dbm", db(s.p_s).to_string()),
        ("noise_dbm", db(s.noise_power).to_string()),
        ("element_side_m", s.element_side.to_string()),
        ("n_elements", s.n_elements.to_string()),
        ("wavelength_m", s.wavelength.to_string()),
        ("sigma1", s.sigma1.to_string()),
        ("sigma2", s.sigma2.to_string()),
    ];
    let mut out = String::new();
    for (k, v) in fields {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}
