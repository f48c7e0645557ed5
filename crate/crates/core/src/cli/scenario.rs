//! Scenario files: TOML documents naming the metrics, structure, map and
//! Clairaut exponent of one test case.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::clairaut::{ClairautScenario, SamplingConfig, Tolerances};
use crate::expr::{parse, Expr};
use crate::geometry::{ManifoldSpec, SamplingDomain};
use crate::hermitian::AlmostComplexField;
use crate::presets;
use crate::submersion::{SmoothMap, Submersion};

/// Bundled scenarios, addressable by name wherever a path is accepted.
pub const BUNDLED: &[(&str, &str)] = &[
    ("example-i", include_str!("../../scenarios/example-i.toml")),
    ("example-ii", include_str!("../../scenarios/example-ii.toml")),
];

/// Invalid scenario input, located by a dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl InputError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        InputError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub description: Option<String>,
    pub manifold: ManifoldBlock,
    pub target: ManifoldBlock,
    pub phi: PhiBlock,
    pub map: MapBlock,
    #[serde(default)]
    pub clairaut: ClairautBlock,
    #[serde(default)]
    pub sampling: SamplingBlock,
    pub geodesics: Option<GeodesicsBlock>,
    #[serde(default)]
    pub tolerances: TolerancesBlock,
}

/// A metric is either a preset name (`"euclidean"` means flat in any
/// dimension) or a square matrix of expressions.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MetricEntry {
    Preset(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldBlock {
    pub dim: usize,
    pub metric: MetricEntry,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiBlock {
    pub preset: Option<String>,
    pub entries: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapBlock {
    pub preset: Option<String>,
    pub components: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClairautBlock {
    #[serde(default = "zero_string")]
    pub f: String,
}

impl Default for ClairautBlock {
    fn default() -> Self {
        ClairautBlock { f: zero_string() }
    }
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcludeEntry {
    pub distance: String,
    pub radius: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingBlock {
    pub count: Option<usize>,
    pub seed: Option<u64>,
    /// One `[lo, hi]` pair per coordinate.
    #[serde(rename = "box")]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub exclude: Vec<ExcludeEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub p0: Vec<f64>,
    pub v0: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicsBlock {
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default)]
    pub initial: Vec<InitialCondition>,
}

fn default_length() -> f64 {
    2.0
}

fn default_step() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesBlock {
    pub algebraic: Option<f64>,
    pub fd: Option<f64>,
    pub geodesic: Option<f64>,
}

/// A validated scenario together with the geodesic block it came with.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub name: String,
    pub scenario: ClairautScenario,
    pub geodesics: Option<GeodesicsBlock>,
}

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<Self, InputError> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let loc = e
                .span()
                .map(|s| {
                    let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}")
                })
                .unwrap_or_default();
            InputError::new(loc, msg)
        })
    }

    /// Reads a file, or a bundled scenario when `path` names one and no such file exists.
    pub fn load(path: &str) -> Result<(String, Self), InputError> {
        let p = Path::new(path);
        if !p.exists() {
            if let Some((name, text)) = BUNDLED.iter().find(|(n, _)| *n == path) {
                return Ok((name.to_string(), Self::from_toml(text)?));
            }
        }
        let text = std::fs::read_to_string(p).map_err(|e| InputError::new(path, e))?;
        let stem = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.to_string());
        Ok((stem, Self::from_toml(&text)?))
    }

    pub fn build(&self, fallback_name: &str) -> Result<LoadedScenario, InputError> {
        let m = self.manifold.dim;
        let domain = self.domain(m)?;
        let total = manifold(&self.manifold, "manifold")?
            .with_domain(domain)
            .map_err(|e| InputError::new("sampling", e))?;
        let base = manifold(&self.target, "target")?;
        let map = self.smooth_map(m)?;
        if map.target_dim() != base.dim() {
            return Err(InputError::new(
                "map",
                format!(
                    "{} components but the target has dimension {}",
                    map.target_dim(),
                    base.dim()
                ),
            ));
        }
        let submersion =
            Submersion::new(total, base, map).map_err(|e| InputError::new("map", e))?;
        let structure = self.structure(m)?;
        let f = parse(&self.clairaut.f, m).map_err(|e| InputError::new("clairaut.f", e))?;
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            algebraic: self.tolerances.algebraic.unwrap_or(defaults.algebraic),
            fd: self.tolerances.fd.unwrap_or(defaults.fd),
            geodesic: self.tolerances.geodesic.unwrap_or(defaults.geodesic),
        };
        for (k, v) in [
            ("algebraic", tolerances.algebraic),
            ("fd", tolerances.fd),
            ("geodesic", tolerances.geodesic),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(InputError::new(format!("tolerances.{k}"), "must be positive"));
            }
        }
        let sd = SamplingConfig::default();
        let sampling = SamplingConfig {
            count: self.sampling.count.unwrap_or(sd.count),
            seed: self.sampling.seed.unwrap_or(sd.seed),
        };
        if let Some(g) = &self.geodesics {
            if !(g.length > 0.0) || !(g.step > 0.0) {
                return Err(InputError::new("geodesics", "length and step must be positive"));
            }
            for (i, ic) in g.initial.iter().enumerate() {
                if ic.p0.len() != m || ic.v0.len() != m {
                    return Err(InputError::new(
                        format!("geodesics.initial[{i}]"),
                        format!("p0 and v0 need {m} components"),
                    ));
                }
            }
        }
        let scenario = ClairautScenario::new(submersion, structure, f, tolerances, sampling)
            .map_err(|e| InputError::new("", e))?;
        Ok(LoadedScenario {
            name: self.name.clone().unwrap_or_else(|| fallback_name.to_string()),
            scenario,
            geodesics: self.geodesics.clone(),
        })
    }

    fn domain(&self, m: usize) -> Result<SamplingDomain, InputError> {
        let mut domain = match &self.sampling.bounds {
            None => SamplingDomain::unbounded(m),
            Some(b) => {
                if b.len() != m {
                    return Err(InputError::new(
                        "sampling.box",
                        format!("{} intervals for dimension {m}", b.len()),
                    ));
                }
                for (i, [lo, hi]) in b.iter().enumerate() {
                    if !(lo < hi) {
                        return Err(InputError::new(format!("sampling.box[{i}]"), "empty interval"));
                    }
                }
                SamplingDomain::boxed(b.iter().map(|[lo, hi]| (*lo, *hi)).collect())
            }
        };
        for (i, t) in self.sampling.exclude.iter().enumerate() {
            let d = parse(&t.distance, m)
                .map_err(|e| InputError::new(format!("sampling.exclude[{i}].distance"), e))?;
            domain = domain.with_exclusion(d, t.radius);
        }
        Ok(domain)
    }

    fn structure(&self, m: usize) -> Result<AlmostComplexField, InputError> {
        match (&self.phi.preset, &self.phi.entries) {
            (Some(name), None) => {
                let s = presets::structure(name)
                    .ok_or_else(|| InputError::new("phi.preset", format!("unknown preset {name:?}")))?;
                if s.dim() != m {
                    return Err(InputError::new(
                        "phi.preset",
                        format!("{name} acts on dimension {}, manifold has {m}", s.dim()),
                    ));
                }
                Ok(s)
            }
            (None, Some(rows)) => {
                let e = matrix(rows, m, "phi.entries")?;
                AlmostComplexField::new(e).map_err(|e| InputError::new("phi.entries", e))
            }
            _ => Err(InputError::new("phi", "give exactly one of preset or entries")),
        }
    }

    fn smooth_map(&self, m: usize) -> Result<SmoothMap, InputError> {
        match (&self.map.preset, &self.map.components) {
            (Some(name), None) => {
                let f = presets::map(name)
                    .ok_or_else(|| InputError::new("map.preset", format!("unknown preset {name:?}")))?;
                if f.source_dim() != m {
                    return Err(InputError::new(
                        "map.preset",
                        format!("{name} is defined on dimension {}", f.source_dim()),
                    ));
                }
                Ok(f)
            }
            (None, Some(cs)) => {
                let exprs = cs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        parse(c, m).map_err(|e| InputError::new(format!("map.components[{i}]"), e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SmoothMap::new(exprs, m).map_err(|e| InputError::new("map.components", e))
            }
            _ => Err(InputError::new("map", "give exactly one of preset or components")),
        }
    }
}

fn matrix(rows: &[Vec<String>], m: usize, path: &str) -> Result<Vec<Vec<Expr>>, InputError> {
    if rows.len() != m {
        return Err(InputError::new(path, format!("{} rows, expected {m}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != m {
                return Err(InputError::new(
                    format!("{path}[{i}]"),
                    format!("{} entries, expected {m}", row.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, t)| parse(t, m).map_err(|e| InputError::new(format!("{path}[{i}][{j}]"), e)))
                .collect()
        })
        .collect()
}

fn manifold(block: &ManifoldBlock, path: &str) -> Result<ManifoldSpec, InputError> {
    let n = block.dim;
    if n == 0 {
        return Err(InputError::new(format!("{path}.dim"), "must be positive"));
    }
    let metric_path = format!("{path}.metric");
    match &block.metric {
        MetricEntry::Preset(name) if name == "euclidean" => Ok(ManifoldSpec::euclidean(n)),
        MetricEntry::Preset(name) => {
            let spec = presets::metric(name)
                .ok_or_else(|| InputError::new(&metric_path, format!("unknown preset {name:?}")))?;
            if spec.dim() != n {
                return Err(InputError::new(
                    &metric_path,
                    format!("{name} has dimension {}, block says {n}", spec.dim()),
                ));
            }
            Ok(spec)
        }
        MetricEntry::Matrix(rows) => {
            let e = matrix(rows, n, &metric_path)?;
            ManifoldSpec::new(e, SamplingDomain::unbounded(n))
                .map_err(|e| InputError::new(&metric_path, e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_build() {
        for (name, text) in BUNDLED {
            let file = ScenarioFile::from_toml(text).unwrap();
            let s = file.build(name).unwrap();
            assert_eq!(s.scenario.dim(), 4);
            assert_eq!(s.geodesics.unwrap().initial.len(), 5);
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = BUNDLED[0].1.replace("[clairaut]", "[clairaut]\nr = \"1\"");
        let err = ScenarioFile::from_toml(&text).unwrap_err();
        assert!(err.message.contains("unknown field"), "{err}");
        assert!(err.path.starts_with("line "));
    }

    #[test]
    fn bad_expression_reports_field_path() {
        let text = BUNDLED[1].1.replace("f = \"ln(sqrt(x1^2 + x2^2))\"", "f = \"x9\"");
        let err = ScenarioFile::from_toml(&text).unwrap().build("t").unwrap_err();
        assert_eq!(err.path, "clairaut.f");
    }

    #[test]
    fn phi_needs_exactly_one_source() {
        let text = BUNDLED[0]
            .1
            .replace("preset = \"canonical-phi\"", "");
        let err = ScenarioFile::from_toml(&text).unwrap().build("t").unwrap_err();
        assert_eq!(err.path, "phi");
    }
}
