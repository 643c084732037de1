//! Flat `key=value` experiment configuration.
//!
//! A file holds one assignment per line; `#` starts a comment. Flag
//! overrides go through the same parser and are applied after the file, so
//! flags win.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Census,
    Expansion,
    Mixing,
    Diameter,
    Cycles,
    Minors,
    Decompose,
    Sprinkle,
    Verify,
    Sweep,
}

impl Kind {
    pub const ALL: [Kind; 10] = [
        Kind::Census,
        Kind::Expansion,
        Kind::Mixing,
        Kind::Diameter,
        Kind::Cycles,
        Kind::Minors,
        Kind::Decompose,
        Kind::Sprinkle,
        Kind::Verify,
        Kind::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Census => "census",
            Kind::Expansion => "expansion",
            Kind::Mixing => "mixing",
            Kind::Diameter => "diameter",
            Kind::Cycles => "cycles",
            Kind::Minors => "minors",
            Kind::Decompose => "decompose",
            Kind::Sprinkle => "sprinkle",
            Kind::Verify => "verify",
            Kind::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown experiment kind '{s}'"))
    }
}

/// Edge probability, either given directly or as `p = (1 + ε)/d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Epsilon(f64),
    P(f64),
}

impl Density {
    pub fn p_for(self, d: u32) -> f64 {
        match self {
            Density::Epsilon(eps) => ((1.0 + eps) / d as f64).min(1.0),
            Density::P(p) => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{origin}: field '{field}': {message}")]
pub struct ConfigError {
    /// `path:line` for file entries, `--flag` for overrides.
    pub origin: String,
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub dims: Vec<u32>,
    pub density: Density,
    pub q2: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Largest component handed to the exponential-time exact routines.
    pub cap_exact: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub workers: usize,
    /// Fill the `wall_ms` column; off by default so output is reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: Kind::Census,
            dims: vec![10],
            density: Density::Epsilon(1.0),
            q2: None,
            trials: 1,
            seed: 0,
            cap_exact: 18,
            tol: 1e-10,
            out: None,
            workers: default_workers(),
            timing: false,
        }
    }
}

/// `QPERC_WORKERS` if set and positive, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("QPERC_WORKERS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Parses `10`, `10,12,14` or `10..=14` (optionally `10..=14:2`).
fn parse_dims(s: &str) -> Result<Vec<u32>, String> {
    let int = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("'{t}': {e}"));
    let dims = if let Some((lo, rest)) = s.split_once("..=") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (int(hi)?, int(step)?),
            None => (int(rest)?, 1),
        };
        if step == 0 {
            return Err("range step must be positive".into());
        }
        (int(lo)?..=hi).step_by(step as usize).collect()
    } else {
        s.split(',').map(int).collect::<Result<Vec<_>, _>>()?
    };
    if dims.is_empty() {
        return Err("empty dimension range".into());
    }
    if let Some(&d) = dims.iter().find(|&&d| !(qperc::hypercube::MIN_DIMENSION..=qperc::hypercube::MAX_DIMENSION).contains(&d)) {
        return Err(format!("dimension {d} outside 2..=30"));
    }
    Ok(dims)
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("'{s}': {e}"))?;
    if !(0.0..=1.0).contains(&x) {
        return Err(format!("{x} is not in [0, 1]"));
    }
    Ok(x)
}

fn parse_num<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    s.trim().parse().map_err(|e| format!("'{}': {e}", s.trim()))
}

impl ExperimentConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "kind" | "experiment" => self.kind = value.parse()?,
            "d" => self.dims = parse_dims(value)?,
            "epsilon" => {
                let eps: f64 = parse_num(value)?;
                if !(eps > -1.0) || !eps.is_finite() {
                    return Err(format!("epsilon {eps} must exceed -1"));
                }
                self.density = Density::Epsilon(eps);
            }
            "p" => self.density = Density::P(parse_probability(value)?),
            "q2" => self.q2 = Some(parse_probability(value)?),
            "trials" => {
                self.trials = parse_num(value)?;
                if self.trials == 0 {
                    return Err("trials must be at least 1".into());
                }
            }
            "seed" => self.seed = parse_num(value)?,
            "cap_exact" => self.cap_exact = parse_num(value)?,
            "tol" => {
                self.tol = parse_num(value)?;
                if !(self.tol > 0.0) {
                    return Err("tolerance must be positive".into());
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "workers" => {
                self.workers = parse_num(value)?;
                if self.workers == 0 {
                    return Err("workers must be at least 1".into());
                }
            }
            "timing" => self.timing = parse_num(value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Reads assignments from config text; `origin` names the source in
    /// diagnostics.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = format!("{origin}:{}", i + 1);
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    origin: at,
                    field: line.to_string(),
                    message: "expected key=value".into(),
                });
            };
            self.set(key, value).map_err(|message| ConfigError {
                origin: at,
                field: key.trim().to_string(),
                message,
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            origin: path.display().to_string(),
            field: String::new(),
            message: e.to_string(),
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Applies flag overrides given as `(key, value)` pairs.
    pub fn apply_flags<'a>(&mut self, flags: impl IntoIterator<Item = (&'a str, String)>) -> Result<(), ConfigError> {
        for (key, value) in flags {
            self.set(key, &value).map_err(|message| ConfigError {
                origin: format!("--{}", key.replace('_', "-")),
                field: key.to_string(),
                message,
            })?;
        }
        Ok(())
    }

    /// Edge probability at dimension `d`.
    pub fn p(&self, d: u32) -> f64 {
        self.density.p_for(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut c = ExperimentConfig::default();
        c.apply_text("kind = census\n# comment\nd=8\np = 0.25 # inline\ntrials=3\n", "cfg")
            .unwrap();
        assert_eq!(c.kind, Kind::Census);
        assert_eq!(c.dims, vec![8]);
        assert_eq!(c.density, Density::P(0.25));
        c.apply_flags([("trials", "5".to_string()), ("epsilon", "0.5".to_string())])
            .unwrap();
        assert_eq!(c.trials, 5);
        assert_eq!(c.p(10), 0.15);
    }

    #[test]
    fn dimension_ranges() {
        assert_eq!(parse_dims("10..=14:2").unwrap(), vec![10, 12, 14]);
        assert_eq!(parse_dims("3..=5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_dims("12, 9").unwrap(), vec![12, 9]);
        assert!(parse_dims("5..=3").is_err());
        assert!(parse_dims("31").is_err());
        assert!(parse_dims("1").is_err());
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let mut c = ExperimentConfig::default();
        let e = c.apply_text("d=10\n\np=1.5\n", "exp.cfg").unwrap_err();
        assert_eq!(e.origin, "exp.cfg:3");
        assert_eq!(e.field, "p");
        let e = c.apply_text("trials=0", "x").unwrap_err();
        assert_eq!(e.field, "trials");
        let e = c.apply_text("nonsense", "x").unwrap_err();
        assert!(e.message.contains("key=value"));
        let e = c.apply_flags([("q2", "-0.1".to_string())]).unwrap_err();
        assert_eq!(e.origin, "--q2");
        let e = c.apply_text("colour=blue", "x").unwrap_err();
        assert!(e.message.contains("unknown key"));
    }

    #[test]
    fn kinds_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
        assert!("bogus".parse::<Kind>().is_err());
    }
}
