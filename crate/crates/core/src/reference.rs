//! Published reference values, shipped as `data/reference_tables.json`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemFamily;

const RAW: &str = include_str!("../data/reference_tables.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    ExactSeries,
    Asymptotic,
    Eigenvalues,
    Approximant,
}

/// A reference value; exact series are stored as fraction strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match self {
            Value::Number(v) => *v,
            Value::Text(s) => match s.split_once('/') {
                Some((n, d)) => n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN),
                None => s.parse().unwrap_or(f64::NAN),
            },
        }
    }

    pub fn text(&self) -> String {
        match self {
            Value::Number(v) => v.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excluded {
    pub level: usize,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tolerance {
    Exact,
    Relative {
        /// Applies to every row unless `per_row` is given.
        #[serde(default)]
        all: Option<f64>,
        /// `null` entries are informational.
        #[serde(default)]
        per_row: Option<Vec<Option<f64>>>,
        #[serde(default)]
        excluded: Vec<Excluded>,
    },
}

impl Tolerance {
    /// Relative tolerance of a row, `None` when the row is not gated.
    /// Exact tables return `Some(0.0)`.
    pub fn for_row(&self, level: usize, row: usize) -> Option<f64> {
        match self {
            Tolerance::Exact => Some(0.0),
            Tolerance::Relative { all, per_row, excluded } => {
                if excluded.iter().any(|e| e.level == level && e.row == row) {
                    return None;
                }
                match per_row {
                    Some(v) => v.get(row).copied().flatten(),
                    None => *all,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    /// Roman numeral used on the command line.
    pub id: String,
    pub key: String,
    pub kind: TableKind,
    pub family: ProblemFamily,
    pub rows: Vec<String>,
    /// Level → one value per row.
    pub levels: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub mu: Vec<f64>,
    pub tolerance: Tolerance,
    /// Known defects of the printed values.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ReferenceTable {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn values(&self, level: usize) -> Result<&[Value]> {
        self.levels
            .get(&level.to_string())
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidArgument(format!("table {} has no level {level}", self.id)))
    }

    pub fn numbers(&self, level: usize) -> Result<Vec<f64>> {
        Ok(self.values(level)?.iter().map(Value::as_f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceData {
    pub description: String,
    pub tables: Vec<ReferenceTable>,
}

impl ReferenceData {
    /// The bundled data set.
    pub fn bundled() -> &'static ReferenceData {
        static DATA: OnceLock<ReferenceData> = OnceLock::new();
        DATA.get_or_init(|| serde_json::from_str(RAW).expect("bundled reference data is valid"))
    }

    /// Looks a table up by id (`"IV"`) or key (`"quartic_degree3"`).
    pub fn table(&self, name: &str) -> Result<&ReferenceTable> {
        self.tables
            .iter()
            .find(|t| t.id.eq_ignore_ascii_case(name) || t.key == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown table {name:?}")))
    }

    /// `table(kind, family)`, for tables that are unique per family.
    pub fn find(&self, kind: TableKind, family: ProblemFamily, degree: Option<usize>) -> Option<&ReferenceTable> {
        self.tables.iter().find(|t| t.kind == kind && t.family == family && (degree.is_none() || t.degree == degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_is_complete() {
        let d = ReferenceData::bundled();
        assert_eq!(d.tables.len(), 8);
        for t in &d.tables {
            assert_eq!(t.level_count(), 3, "{}", t.id);
            for n in 0..3 {
                assert_eq!(t.values(n).unwrap().len(), t.rows.len(), "{} level {n}", t.id);
            }
            if t.kind == TableKind::Approximant {
                let deg = t.degree.unwrap();
                assert_eq!(t.rows.len(), t.family.unknown_count(deg));
                assert_eq!(t.mu.len(), 3);
            }
        }
    }

    #[test]
    fn lookup_and_values() {
        let d = ReferenceData::bundled();
        let t = d.table("i").unwrap();
        assert_eq!(t.values(0).unwrap()[1], Value::Text("3/4".into()));
        assert_eq!(t.values(0).unwrap()[2].as_f64(), -1.3125);
        assert_eq!(d.table("quartic_degree3").unwrap().id, "IV");
        assert!(d.table("IX").is_err());
        assert!(d.find(TableKind::Approximant, ProblemFamily::sextic(), Some(6)).is_some());
    }

    #[test]
    fn tolerance_rows() {
        let d = ReferenceData::bundled();
        let t = &d.table("II").unwrap().tolerance;
        assert_eq!(t.for_row(0, 0), Some(5e-7));
        assert_eq!(t.for_row(0, 3), None);
        assert_eq!(t.for_row(2, 4), None);
        assert_eq!(d.table("V").unwrap().tolerance.for_row(1, 1), Some(0.0));
    }
}
