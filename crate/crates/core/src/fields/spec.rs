//! On-disk description of trigonometric vector fields.
//!
//! ```toml
//! resolution = 8
//! subsamples = 1000
//!
//! [[fields.xi]]
//! coeff = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
//! wave = [0, 0, 0, 0, 0, 0, 0]
//! phase = "cos"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::trig::{Phase, TrigTerm, TrigVectorField};
use crate::algebra7::{Vector7, DIM};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTermSpec {
    pub coeff: [f64; DIM],
    pub wave: [i32; DIM],
    pub phase: Phase,
}

impl TrigTermSpec {
    pub fn to_term<T: Real>(&self) -> TrigTerm<T> {
        TrigTerm { coeff: Vector7(self.coeff.map(T::lit)), wave: self.wave, phase: self.phase }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecFormat {
    Json,
    Toml,
}

impl SpecFormat {
    /// `.json` is JSON; anything else is read as TOML.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => SpecFormat::Json,
            _ => SpecFormat::Toml,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsamples: Option<usize>,
    #[serde(default)]
    pub fields: BTreeMap<String, Vec<TrigTermSpec>>,
}

impl FieldSpecFile {
    pub fn parse(text: &str, format: SpecFormat) -> Result<Self, String> {
        match format {
            SpecFormat::Json => serde_json::from_str(text).map_err(|e| e.to_string()),
            SpecFormat::Toml => toml::from_str(text).map_err(|e| e.to_string()),
        }
    }

    pub fn field<T: Real>(&self, name: &str) -> Option<TrigVectorField<T>> {
        self.fields.get(name).map(|terms| TrigVectorField::new(terms.iter().map(TrigTermSpec::to_term).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;

    #[test]
    fn toml_and_json_agree() {
        let toml_text = r#"
            resolution = 6
            [[fields.u]]
            coeff = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
            wave = [0, 0, 1, 0, 0, 0, 0]
            phase = "cos"
            [[fields.u]]
            coeff = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
            wave = [0, 0, 1, 0, 0, 0, 0]
            phase = "sin"
        "#;
        let json_text = r#"{"resolution": 6, "fields": {"u": [
            {"coeff": [1,0,0,0,0,0,0], "wave": [0,0,1,0,0,0,0], "phase": "cos"},
            {"coeff": [0,1,0,0,0,0,0], "wave": [0,0,1,0,0,0,0], "phase": "sin"}]}}"#;
        let a = FieldSpecFile::parse(toml_text, SpecFormat::Toml).unwrap();
        let b = FieldSpecFile::parse(json_text, SpecFormat::Json).unwrap();
        assert_eq!(a, b);
        let u = a.field::<f64>("u").unwrap();
        let x = Vector7([0.0, 0.0, 0.4, 0.0, 0.0, 0.0, 0.0]);
        let ux = u.value(&x);
        assert!((ux.0[0] - 0.4f64.cos()).abs() < 1e-15);
        assert!((ux.0[1] - 0.4f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_phase_and_keys() {
        let bad_phase = r#"{"fields": {"u": [{"coeff": [1,0,0,0,0,0,0], "wave": [0,0,0,0,0,0,0], "phase": "tan"}]}}"#;
        assert!(FieldSpecFile::parse(bad_phase, SpecFormat::Json).is_err());
        let bad_key = r#"{"fieldz": {}}"#;
        assert!(FieldSpecFile::parse(bad_key, SpecFormat::Json).is_err());
        let short = r#"{"fields": {"u": [{"coeff": [1,0], "wave": [0,0,0,0,0,0,0], "phase": "cos"}]}}"#;
        assert!(FieldSpecFile::parse(short, SpecFormat::Json).is_err());
    }
}
