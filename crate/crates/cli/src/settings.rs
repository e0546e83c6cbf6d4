//! Run settings: defaults, then an optional `key = value` file, then the
//! FIBZETA_PRECISION environment variable, then command-line flags.

use std::path::Path;

use fibzeta::EvalOptions;

pub const PRECISION_ENV: &str = "FIBZETA_PRECISION";

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Decimal digits of log(eps).
    pub precision: u32,
    pub opts: EvalOptions,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            precision: 64,
            opts: EvalOptions::default(),
            seed: fibzeta::verify::VerifyConfig::default().seed,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("bad value '{value}' for '{key}'"))
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "precision" => self.precision = parse_value(key, value)?,
            "tol" => self.opts.tol = parse_value(key, value)?,
            "pole_guard_radius" => self.opts.pole_guard_radius = parse_value(key, value)?,
            "max_terms" => self.opts.max_terms = parse_value(key, value)?,
            "direct_lower" => self.opts.regions.direct_lower = parse_value(key, value)?,
            "strip_lower" => self.opts.regions.strip_lower = parse_value(key, value)?,
            "one_exclusion_radius" => {
                self.opts.regions.one_exclusion_radius = parse_value(key, value)?
            }
            "seed" => self.seed = parse_value(key, value)?,
            _ => return Err(format!("unknown setting '{key}'")),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_config_text(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    /// Defaults, then the file, then the environment. Not validated: flags
    /// may still override a bad value, so callers validate last.
    pub fn load(config: Option<&Path>, env_precision: Option<&str>) -> Result<Self, String> {
        let mut s = Self::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            s.apply_config_text(&text)?;
        }
        if let Some(p) = env_precision {
            s.set("precision", p)
                .map_err(|e| format!("{PRECISION_ENV}: {e}"))?;
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), String> {
        let o = &self.opts;
        if !(o.tol > 0.0 && o.tol <= 1e-2) {
            return Err(format!("tol must lie in (0, 1e-2], got {}", o.tol));
        }
        if !(o.pole_guard_radius > 0.0 && o.pole_guard_radius.is_finite()) {
            return Err("pole_guard_radius must be positive".into());
        }
        if !(10..=10_000).contains(&self.precision) {
            return Err(format!(
                "precision must lie in 10..=10000, got {}",
                self.precision
            ));
        }
        if o.regions.strip_lower >= o.regions.direct_lower {
            return Err("strip_lower must be below direct_lower".into());
        }
        Ok(())
    }
}
