use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Keys accepted in a `--config` TOML file. Command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub stats: Option<PathBuf>,
    pub geo: Option<PathBuf>,
    pub fips_property: Option<String>,
    pub crosswalk: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub resources: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub attributes: BTreeMap<String, PathBuf>,
    pub n: Option<u64>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub zip: Vec<String>,
    #[serde(default)]
    pub blocks: Vec<String>,
    #[serde(default)]
    pub groups: Vec<String>,
    pub group_column: Option<String>,
    pub merge_map: Option<PathBuf>,
    pub boundary: Option<PathBuf>,
    pub agg_m: Option<usize>,
    pub alpha: Option<f64>,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub chart_csv: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut cfg: FileConfig = toml::from_str(&text)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        cfg.rebase(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Relative paths in a config file are relative to the file.
    fn rebase(&mut self, dir: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(v) = p {
                if v.is_relative() {
                    *v = dir.join(&*v);
                }
            }
        };
        for p in [
            &mut self.stats,
            &mut self.geo,
            &mut self.crosswalk,
            &mut self.dataset,
            &mut self.merge_map,
            &mut self.boundary,
            &mut self.out,
            &mut self.summary,
            &mut self.chart_csv,
        ] {
            fix(p);
        }
        for v in self.resources.values_mut().chain(self.attributes.values_mut()) {
            if v.is_relative() {
                *v = dir.join(&*v);
            }
        }
    }
}

/// Splits repeated/comma-separated list flags.
pub fn split_list(values: &[String]) -> Vec<String> {
    values
        .iter()
        .flat_map(|v| v.split(','))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Parses `label=path` pairs.
pub fn parse_pairs(values: &[String], flag: &str) -> Result<BTreeMap<String, PathBuf>, String> {
    let mut out = BTreeMap::new();
    for v in values {
        let (k, p) = v
            .split_once('=')
            .filter(|(k, p)| !k.is_empty() && !p.is_empty())
            .ok_or_else(|| format!("{flag} expects <label>=<path>, got '{v}'"))?;
        if out.insert(k.to_owned(), PathBuf::from(p)).is_some() {
            return Err(format!("{flag}: label '{k}' given twice"));
        }
    }
    Ok(out)
}
