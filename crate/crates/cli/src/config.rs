use std::path::{Path, PathBuf};

use henstock_orlicz::IntegratorConfig;

/// Run settings. Precedence: flag, then config file, then default.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tol: f64,
    pub divergence_cap: f64,
    pub cell_cap: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { tol: 1e-8, divergence_cap: 1e12, cell_cap: 1 << 22, seed: 42, output_path: None }
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl Config {
    pub fn load(file: Option<&Path>, flags: &Overrides) -> Result<Config, String> {
        let mut cfg = Config::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            cfg.apply_file(&text)?;
        }
        if let Some(tol) = flags.tol {
            cfg.tol = tol;
        }
        if let Some(seed) = flags.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &flags.out {
            cfg.output_path = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Flat `key = value` lines; `#` starts a comment.
    fn apply_file(&mut self, text: &str) -> Result<(), String> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| format!("config line {}: {key} needs {what}, got `{value}`", n + 1);
            match key {
                "tol" => self.tol = value.parse().map_err(|_| bad("a number"))?,
                "divergence_cap" => self.divergence_cap = value.parse().map_err(|_| bad("a number"))?,
                "cell_cap" => self.cell_cap = value.parse().map_err(|_| bad("an integer"))?,
                "seed" => self.seed = value.parse().map_err(|_| bad("an integer"))?,
                "output_path" | "out" => self.output_path = Some(PathBuf::from(value)),
                _ => return Err(format!("config line {}: unknown key `{key}`", n + 1)),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.divergence_cap > 0.0) {
            return Err(format!("divergence_cap must be positive, got {}", self.divergence_cap));
        }
        if self.cell_cap == 0 {
            return Err("cell_cap must be positive".into());
        }
        Ok(())
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig { divergence_cap: self.divergence_cap, cell_cap: self.cell_cap, ..IntegratorConfig::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = Config::default();
        cfg.apply_file("# comment\ntol = 1e-6\nseed=7\n\ncell_cap = 1000 # inline\n").unwrap();
        assert_eq!((cfg.tol, cfg.seed, cfg.cell_cap), (1e-6, 7, 1000));
        assert!(cfg.apply_file("nope = 1").is_err());
        assert!(cfg.apply_file("tol = x").is_err());
        assert!(cfg.apply_file("tol").is_err());
    }

    #[test]
    fn flags_win() {
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), "tol = 1e-4\nseed = 3\n").unwrap();
        let cfg = Config::load(Some(file.path()), &Overrides { tol: Some(1e-9), ..Overrides::default() }).unwrap();
        assert_eq!((cfg.tol, cfg.seed), (1e-9, 3));
        assert!(Config::load(None, &Overrides { tol: Some(-1.0), ..Overrides::default() }).is_err());
    }
}
