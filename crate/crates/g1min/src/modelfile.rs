//! The on-disk JSON model format and the report envelope the CLI emits.
//!
//! A model file carries a degree tag and the coefficient list in the same
//! order as `coefficient_names`; rationals are printed as "num" or
//! "num/den" and round-trip bit-exactly. See schema/modelfile.schema.json.

use crate::models::{GenusOneEquation, ModelError};
use crate::rat::{parse_rat, rat_string};
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "g1min-report/1";

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("coefficient {index} is not a rational: {text:?}")]
    BadCoefficient { index: usize, text: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelFile {
    pub degree: u8,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
}

impl ModelFile {
    pub fn from_equation(phi: &GenusOneEquation) -> Self {
        ModelFile {
            degree: phi.degree(),
            coeffs: phi.coeffs().iter().map(rat_string).collect(),
            prime: None,
        }
    }

    pub fn to_equation(&self) -> Result<GenusOneEquation, ModelFileError> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (index, text) in self.coeffs.iter().enumerate() {
            let x = parse_rat(text).ok_or_else(|| ModelFileError::BadCoefficient {
                index,
                text: text.clone(),
            })?;
            coeffs.push(x);
        }
        Ok(GenusOneEquation::from_coeffs(self.degree, coeffs)?)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, ModelFileError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<(), ModelFileError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }
}

pub fn read_equation(path: &std::path::Path) -> Result<GenusOneEquation, ModelFileError> {
    ModelFile::read(path)?.to_equation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::standard_embedding;
    use crate::rat::{rat, rat_i64};

    #[test]
    fn roundtrip_is_bit_exact() {
        for degree in 1..=4u8 {
            let phi = standard_embedding(degree, &rat(-7, 4), &rat_i64(11));
            let mf = ModelFile::from_equation(&phi);
            let text = mf.to_json();
            let back: ModelFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back, mf);
            assert_eq!(back.to_equation().unwrap(), phi);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn bad_coefficient_is_reported() {
        let mf = ModelFile {
            degree: 1,
            coeffs: vec!["1".into(), "x".into(), "0".into(), "0".into(), "0".into()],
            prime: None,
        };
        let err = mf.to_equation().unwrap_err();
        assert!(matches!(err, ModelFileError::BadCoefficient { index: 1, .. }));
    }
}
