//! JSON presentation files.
//!
//! ```json
//! {
//!   "field": "Q",
//!   "basis": ["e", "h", "f"],
//!   "brackets": [
//!     {"i": 0, "j": 1, "value": [[0, "-2"]]},
//!     {"i": 0, "j": 2, "value": [[1, "1"]]},
//!     {"i": 1, "j": 2, "value": [[2, "-2"]]}
//!   ]
//! }
//! ```
//!
//! `field` is `"Q"` or `{"Fp": p}`. Over a prime field an optional `pmap`
//! lists `{"i": k, "value": [...]}` for every basis vector, and
//! `pmap_asserted` lists `{"at": [...], "value": [...]}` claims about the
//! p-map at non-basis vectors. Scalars are strings (`"3"`, `"-1/2"`) or
//! JSON integers.

use std::fs;
use std::path::Path;

use liehopf_core::{Field, LieElement, LiePresentation, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Int(i64),
}

pub type Sparse = Vec<(usize, ScalarText)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub value: Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmapEntry {
    pub i: usize,
    pub value: Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertionEntry {
    pub at: Sparse,
    pub value: Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub field: FieldSpec,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmap: Option<Vec<PmapEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pmap_asserted: Vec<AssertionEntry>,
}

fn field_of(spec: &FieldSpec) -> Result<Field, CliError> {
    match spec {
        FieldSpec::Named(s) if s == "Q" => Ok(Field::Rational),
        FieldSpec::Named(s) => Err(CliError::Input(format!(
            "unknown field `{s}` (use \"Q\" or {{\"Fp\": p}})"
        ))),
        FieldSpec::Prime { p } => Ok(Field::prime(*p)?),
    }
}

fn scalars(field: Field, v: &Sparse) -> Result<Vec<(usize, Scalar)>, CliError> {
    v.iter()
        .map(|(k, s)| {
            let c = match s {
                ScalarText::Text(t) => field.parse_scalar(t)?,
                ScalarText::Int(n) => field.from_i64(*n),
            };
            Ok((*k, c))
        })
        .collect()
}

impl PresentationFile {
    pub fn to_presentation(&self) -> Result<LiePresentation, CliError> {
        let field = field_of(&self.field)?;
        let mut b = LiePresentation::builder(field, self.basis.iter().cloned());
        for e in &self.brackets {
            b = b.bracket(e.i, e.j, scalars(field, &e.value)?);
        }
        for e in self.pmap.iter().flatten() {
            b = b.pmap(e.i, scalars(field, &e.value)?);
        }
        for a in &self.pmap_asserted {
            b = b.assert_pmap(scalars(field, &a.at)?, scalars(field, &a.value)?);
        }
        Ok(b.build()?)
    }

    pub fn from_presentation(pres: &LiePresentation) -> Self {
        let sparse =
            |u: &LieElement| -> Sparse { u.support().map(|(k, c)| (k, ScalarText::Text(c.to_string()))).collect() };
        let field = match pres.field() {
            Field::Rational => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { p },
        };
        Self {
            field,
            basis: pres.names().to_vec(),
            brackets: pres
                .table()
                .map(|(&(i, j), v)| BracketEntry { i, j, value: sparse(v) })
                .collect(),
            pmap: pres.pmap().map(|pm| {
                pm.iter()
                    .enumerate()
                    .map(|(i, v)| PmapEntry { i, value: sparse(v) })
                    .collect()
            }),
            pmap_asserted: pres
                .pmap_assertions()
                .iter()
                .map(|a| AssertionEntry {
                    at: sparse(&a.at),
                    value: sparse(&a.value),
                })
                .collect(),
        }
    }
}

pub fn parse_presentation(text: &str) -> Result<LiePresentation, CliError> {
    let file: PresentationFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("presentation file: {e}")))?;
    file.to_presentation()
}

pub fn load_presentation(path: &Path) -> Result<LiePresentation, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_presentation(&text).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_presentation(pres: &LiePresentation) -> String {
    serde_json::to_string_pretty(&PresentationFile::from_presentation(pres)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use liehopf_core::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for pres in [
            fixtures::sl2_q(),
            fixtures::sl2_f5(),
            fixtures::heisenberg_q(),
            fixtures::solvable2_f2_bad_additivity(),
        ] {
            assert_eq!(parse_presentation(&write_presentation(&pres)).unwrap(), pres);
        }
    }

    #[test]
    fn integer_scalars_and_field_object() {
        let p = parse_presentation(r#"{"field": {"Fp": 3}, "basis": ["t"], "pmap": [{"i": 0, "value": [[0, 1]]}]}"#)
            .unwrap();
        assert_eq!(p, fixtures::toral_f3());
    }

    #[test]
    fn rejects_bad_documents() {
        for doc in [
            r#"{"field": "R", "basis": ["a"]}"#,
            r#"{"field": "Q", "basis": ["x"]}"#,
            r#"{"field": "Q", "basis": ["a"], "brakets": []}"#,
            r#"{"field": {"Fp": 4}, "basis": ["a"]}"#,
            r#"{"field": "Q", "basis": ["a", "b"], "brackets": [{"i": 0, "j": 5, "value": []}]}"#,
            r#"{"field": "Q", "basis": ["a"], "brackets": [{"i": 0, "j": 0, "value": [[0, "1/0"]]}]}"#,
            "not json",
        ] {
            assert!(matches!(parse_presentation(doc), Err(CliError::Input(_))), "{doc}");
        }
    }
}
