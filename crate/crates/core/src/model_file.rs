//! Model files and built-in model names.
//!
//! A model file is a JSON document
//!
//! ```json
//! { "branches": [ { "c": 0.4, "step": -1 }, { "c": 0.6, "step": 1, "left": 0.4 } ],
//!   "potential_depth": 1 }
//! ```
//!
//! `left` is optional (auto-packed when absent) and `potential_depth`
//! defaults to 1. Unknown fields are rejected. The JSON Schema lives in
//! `schema/model.schema.json`.
//!
//! Built-in names stand for the closed-form families:
//! `rw_<c1>_<c2>`, `asym_<c>_<m1>_<m2>` and `multi_<c>_<g1>_<g2>`, where a
//! contraction may be written as a fraction such as `1/3`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Family;
use crate::symbolic::{BranchModel, BranchSpec, CylinderPotential};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchEntry {
    pub c: f64,
    pub step: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub branches: Vec<BranchEntry>,
    #[serde(default = "one")]
    pub potential_depth: usize,
}

fn one() -> usize {
    1
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("model file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialise")
    }

    pub fn build(&self) -> Result<Model> {
        if self.potential_depth == 0 {
            return Err(Error::Validation("potential_depth must be at least 1".into()));
        }
        let specs: Vec<BranchSpec> = self
            .branches
            .iter()
            .map(|b| BranchSpec {
                contraction: b.c,
                step: b.step,
                left: b.left,
            })
            .collect();
        Ok(Model {
            branches: BranchModel::new(&specs)?,
            depth: self.potential_depth,
        })
    }
}

impl From<&BranchModel> for ModelFile {
    fn from(model: &BranchModel) -> Self {
        Self {
            branches: model
                .branches()
                .iter()
                .map(|b| BranchEntry {
                    c: b.contraction,
                    step: b.step,
                    left: Some(b.left),
                })
                .collect(),
            potential_depth: 1,
        }
    }
}

/// A branch model together with the depth at which its potentials are
/// tabulated.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    branches: BranchModel,
    depth: usize,
}

impl Model {
    pub fn new(branches: BranchModel) -> Self {
        Self { branches, depth: 1 }
    }

    pub fn branches(&self) -> &BranchModel {
        &self.branches
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The geometric potential `φ = log c_i` at the model depth.
    pub fn phi(&self) -> CylinderPotential {
        self.branches
            .geometric_potential()
            .lift(self.depth)
            .expect("lifting never lowers the depth")
    }

    /// The step potential `ψ = m_i` at the model depth.
    pub fn psi(&self) -> CylinderPotential {
        self.branches
            .step_potential()
            .lift(self.depth)
            .expect("lifting never lowers the depth")
    }
}

fn number(token: &str) -> Result<f64> {
    let bad = || Error::Validation(format!("cannot read '{token}' as a number"));
    match token.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            Ok(a / b)
        }
        None => token.parse().map_err(|_| bad()),
    }
}

fn integer<T: std::str::FromStr>(token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::Validation(format!("cannot read '{token}' as an integer")))
}

/// Parses a built-in model name; `None` if `name` is not of that form.
pub fn builtin_family(name: &str) -> Option<Result<Family>> {
    let parts: Vec<&str> = name.split('_').collect();
    let family = match parts.as_slice() {
        ["rw", c1, c2] => (|| Ok(Family::A { c1: number(c1)?, c2: number(c2)? }))(),
        ["asym", c, m1, m2] => (|| {
            Ok(Family::B {
                c: number(c)?,
                m1: integer(m1)?,
                m2: integer(m2)?,
            })
        })(),
        ["multi", c, g1, g2] => (|| {
            Ok(Family::C {
                c: number(c)?,
                g1: integer(g1)?,
                g2: integer(g2)?,
            })
        })(),
        _ => return None,
    };
    Some(family)
}

/// Resolves a built-in name or a path to a model file.
pub fn resolve_model(spec: &str) -> Result<Model> {
    if let Some(family) = builtin_family(spec) {
        return Ok(Model::new(family?.model()?));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Validation(format!(
            "'{spec}' is neither a built-in model name nor an existing file"
        )));
    }
    ModelFile::load(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_packs() {
        let m = ModelFile::parse(r#"{"branches":[{"c":0.4,"step":-1},{"c":0.6,"step":1}]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(m.depth(), 1);
        assert_eq!(m.branches().branches()[1].left, 0.4);
        assert_eq!(m.branches(), &BranchModel::random_walk(0.4, 0.6).unwrap());
    }

    #[test]
    fn depth_lifts_the_potentials() {
        let text = r#"{"branches":[{"c":0.5,"step":-1},{"c":0.5,"step":1}],"potential_depth":3}"#;
        let m = ModelFile::parse(text).unwrap().build().unwrap();
        assert_eq!(m.phi().depth(), 3);
        assert_eq!(m.psi().values().len(), 8);
        assert_eq!(m.psi().value(&[1, 0, 0]), 1.0);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(ModelFile::parse(r#"{"branches":[{"c":0.4,"step":-1,"colour":2}]}"#).is_err());
        assert!(ModelFile::parse(r#"{"branches":[{"c":0.4,"step":0.5}]}"#).is_err());
        let overlap = r#"{"branches":[{"c":0.5,"step":-1,"left":0.0},{"c":0.5,"step":1,"left":0.2}]}"#;
        assert!(matches!(
            ModelFile::parse(overlap).unwrap().build(),
            Err(Error::Overlap { .. })
        ));
    }

    #[test]
    fn round_trips_exactly() {
        let model = BranchModel::random_walk(0.1 + 0.2, 1.0 / 3.0).unwrap();
        let file = ModelFile::from(&model);
        let back = ModelFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.build().unwrap().branches(), &model);
    }

    #[test]
    fn builtin_names() {
        let m = resolve_model("rw_0.3_0.7").unwrap();
        assert_eq!(m.branches().steps(), vec![-1, 1]);
        let m = resolve_model("multi_1/3_1_2").unwrap();
        assert_eq!(m.branches().steps(), vec![-1, 1, 1]);
        let m = resolve_model("asym_0.5_0_1").unwrap();
        assert_eq!(m.branches().steps(), vec![0, 1]);
        assert!(resolve_model("rw_0.7_0.7").is_err());
        assert!(resolve_model("rw_x_0.5").is_err());
        assert!(matches!(resolve_model("no_such_model.json"), Err(Error::Validation(_))));
    }
}
