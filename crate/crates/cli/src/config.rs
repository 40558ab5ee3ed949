//! `key = value` configuration file.

use std::path::{Path, PathBuf};

use ousia::ousiogram::DEFAULT_BIN_WIDTH;
use ousia::{Error, FrameworkTag, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub lexicon_path: Option<PathBuf>,
    pub basis_cache_path: Option<PathBuf>,
    pub default_bin_width: f64,
    pub default_framework: FrameworkTag,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            lexicon_path: None,
            basis_cache_path: None,
            default_bin_width: DEFAULT_BIN_WIDTH,
            default_framework: FrameworkTag::Pds,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Config::parse(&text, base)
    }

    /// Blank lines and `#` comments are skipped. Relative paths are taken
    /// relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = Config::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| Error::MalformedRow { line: idx + 1, reason };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim().trim_matches('"'));
            match key {
                "lexicon_path" => cfg.lexicon_path = Some(base.join(value)),
                "basis_cache_path" => cfg.basis_cache_path = Some(base.join(value)),
                "default_bin_width" => {
                    let w = parse_width(value).ok_or_else(|| bad(format!("invalid bin width {value:?}")))?;
                    cfg.default_bin_width = w;
                }
                "default_framework" => {
                    cfg.default_framework = value.parse().map_err(|_| bad(format!("unknown framework {value:?}")))?;
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

/// A positive width written as a decimal or a fraction such as `1/30`.
pub fn parse_width(text: &str) -> Option<f64> {
    let w = match text.split_once('/') {
        Some((n, d)) => n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?,
        None => text.trim().parse().ok()?,
    };
    (w.is_finite() && w > 0.0).then_some(w)
}
