//! Run configuration: the field-spec file plus command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use g2contact::chinea_gonzalez::{TheoremTolerances, DEFAULT_TOL_REL};
use g2contact::fields::{FieldSpecFile, SpecFormat, TrigTermSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_RESOLUTION: usize = 8;
pub const DEFAULT_SUBSAMPLES: usize = 500;
const MIN_RESOLUTION: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Algebra,
    Classify,
    Theorems,
    #[value(name = "three_structure", alias = "three-structure")]
    ThreeStructure,
}

impl Suite {
    /// Execution order.
    pub const ALL: [Suite; 4] = [Suite::Algebra, Suite::Classify, Suite::Theorems, Suite::ThreeStructure];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Classify => "classify",
            Suite::Theorems => "theorems",
            Suite::ThreeStructure => "three_structure",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Class-membership threshold relative to `|nabla omega|`.
    pub classify: f64,
    /// Exact algebraic identities.
    pub identities: f64,
    /// Structure axioms, decomposition residuals, Kuo axioms.
    pub axioms: f64,
    /// Smallest admissible `|eta ^ omega^3|` coefficient.
    pub nondegeneracy: f64,
    pub theorem: TheoremTolerances,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            classify: DEFAULT_TOL_REL,
            identities: 1e-12,
            axioms: 1e-10,
            nondegeneracy: 0.1,
            theorem: TheoremTolerances::default(),
        }
    }
}

/// On-disk configuration: the field-spec format extended by run settings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub resolution: Option<usize>,
    pub subsamples: Option<usize>,
    pub seed: Option<u64>,
    pub suites: Option<Vec<Suite>>,
    pub tolerance: Option<Tolerances>,
    #[serde(default)]
    pub fields: BTreeMap<String, Vec<TrigTermSpec>>,
}

impl ConfigFile {
    pub fn parse(text: &str, format: SpecFormat) -> Result<Self, String> {
        match format {
            SpecFormat::Json => serde_json::from_str(text).map_err(|e| e.to_string()),
            SpecFormat::Toml => toml::from_str(text).map_err(|e| e.to_string()),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, SpecFormat::from_path(path)).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Values given on the command line; each overrides the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub suites: Option<Vec<Suite>>,
    pub seed: Option<u64>,
    pub resolution: Option<usize>,
    pub subsamples: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub fields: FieldSpecFile,
    pub resolution: usize,
    pub subsamples: usize,
    pub seed: u64,
    /// Deduplicated, in execution order.
    pub suites: Vec<Suite>,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, over: Overrides) -> Result<Self, CliError> {
        let resolution = over.resolution.or(file.resolution).unwrap_or(DEFAULT_RESOLUTION);
        if resolution < MIN_RESOLUTION {
            return Err(CliError::Usage(format!("resolution {resolution} is below {MIN_RESOLUTION}")));
        }
        let total = resolution
            .checked_pow(7)
            .ok_or_else(|| CliError::Usage(format!("resolution {resolution} is too large")))?;
        let subsamples = over.subsamples.or(file.subsamples).unwrap_or(DEFAULT_SUBSAMPLES.min(total));
        if subsamples == 0 || subsamples > total {
            return Err(CliError::Usage(format!("subsamples {subsamples} outside 1..={total}")));
        }
        let requested = over.suites.or(file.suites).unwrap_or_else(|| default_suites(&file.fields));
        let suites: Vec<Suite> = Suite::ALL.into_iter().filter(|s| requested.contains(s)).collect();
        if suites.is_empty() {
            return Err(CliError::Usage("no suite selected".into()));
        }
        let mut tolerances = file.tolerance.unwrap_or_default();
        if let Some(t) = over.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("tolerance {t} must be positive")));
            }
            tolerances.classify = t;
            tolerances.theorem.component_rel = t;
        }
        let needs = |s: Suite, name: &str| -> Result<(), CliError> {
            if suites.contains(&s) && !file.fields.contains_key(name) {
                return Err(CliError::Usage(format!("suite {s} needs field \"{name}\"")));
            }
            Ok(())
        };
        needs(Suite::Classify, "xi")?;
        needs(Suite::Theorems, "xi")?;
        needs(Suite::ThreeStructure, "u")?;
        needs(Suite::ThreeStructure, "v")?;
        let fields = FieldSpecFile { resolution: Some(resolution), subsamples: Some(subsamples), fields: file.fields };
        Ok(Self {
            fields,
            resolution,
            subsamples,
            seed: over.seed.or(file.seed).unwrap_or(0),
            suites,
            tolerances,
        })
    }

    pub fn runs(&self, suite: Suite) -> bool {
        self.suites.contains(&suite)
    }
}

/// Every suite whose fields are present.
fn default_suites(fields: &BTreeMap<String, Vec<TrigTermSpec>>) -> Vec<Suite> {
    let mut out = vec![Suite::Algebra];
    if fields.contains_key("xi") {
        out.extend([Suite::Classify, Suite::Theorems]);
    }
    if fields.contains_key("u") && fields.contains_key("v") {
        out.push(Suite::ThreeStructure);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const XI: &str = r#"
        seed = 3
        suites = ["theorems", "algebra"]
        [tolerance]
        classify = 1e-7
        [[fields.xi]]
        coeff = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
        wave = [0, 0, 0, 0, 0, 0, 0]
        phase = "cos"
    "#;

    #[test]
    fn suites_are_ordered_and_defaults_fill_in() {
        let file = ConfigFile::parse(XI, SpecFormat::Toml).unwrap();
        let c = RunConfig::resolve(file, Overrides::default()).unwrap();
        assert_eq!(c.suites, vec![Suite::Algebra, Suite::Theorems]);
        assert_eq!((c.resolution, c.subsamples, c.seed), (DEFAULT_RESOLUTION, DEFAULT_SUBSAMPLES, 3));
        assert_eq!(c.tolerances.classify, 1e-7);
        assert_eq!(c.tolerances.axioms, 1e-10);
    }

    #[test]
    fn overrides_win() {
        let file = ConfigFile::parse(XI, SpecFormat::Toml).unwrap();
        let over = Overrides { seed: Some(9), resolution: Some(5), subsamples: Some(7), tol: Some(1e-6), ..Default::default() };
        let c = RunConfig::resolve(file, over).unwrap();
        assert_eq!((c.resolution, c.subsamples, c.seed), (5, 7, 9));
        assert_eq!(c.tolerances.theorem.component_rel, 1e-6);
    }

    #[test]
    fn invalid_settings_are_usage_errors() {
        let bad = |o: Overrides| {
            let file = ConfigFile::parse(XI, SpecFormat::Toml).unwrap();
            matches!(RunConfig::resolve(file, o), Err(CliError::Usage(_)))
        };
        assert!(bad(Overrides { resolution: Some(3), ..Default::default() }));
        assert!(bad(Overrides { resolution: Some(4), subsamples: Some(4usize.pow(7) + 1), ..Default::default() }));
        assert!(bad(Overrides { suites: Some(vec![Suite::ThreeStructure]), ..Default::default() }));
        assert!(bad(Overrides { suites: Some(vec![]), ..Default::default() }));
        assert!(bad(Overrides { tol: Some(-1.0), ..Default::default() }));
        assert!(ConfigFile::parse("bogus = 1", SpecFormat::Toml).is_err());
    }

    #[test]
    fn algebra_runs_without_fields() {
        let c = RunConfig::resolve(ConfigFile::default(), Overrides { resolution: Some(4), ..Default::default() });
        assert_eq!(c.unwrap().suites, vec![Suite::Algebra]);
    }
}
