use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One matching condition of the linear system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// The `order`-th Taylor coefficient of `E_app` at `λ = alpha` equals
    /// `E^α_order`.
    FiniteMatch { alpha: f64, order: usize },
    /// The `term_index`-th power of the large-λ expansion, counting powers
    /// in decreasing order, matches the asymptotic series.
    AsymptoticMatch { term_index: usize },
}

impl Constraint {
    pub fn finite(alpha: f64, order: usize) -> Self {
        Constraint::FiniteMatch { alpha, order }
    }

    pub fn asymptotic(term_index: usize) -> Self {
        Constraint::AsymptoticMatch { term_index }
    }

    fn same_as(&self, other: &Constraint) -> bool {
        match (self, other) {
            (Constraint::FiniteMatch { alpha: a, order: k }, Constraint::FiniteMatch { alpha: b, order: l }) => {
                k == l && same_alpha(*a, *b)
            }
            (Constraint::AsymptoticMatch { term_index: i }, Constraint::AsymptoticMatch { term_index: j }) => i == j,
            _ => false,
        }
    }
}

pub(crate) fn same_alpha(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Node syntax: `"0.5"` is the value at 0.5, `"d2@0.5"` its second Taylor
/// coefficient. Asymptotic terms are written `"asy3"`.
impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse constraint {s:?}"));
        let s = s.trim();
        if let Some(i) = s.strip_prefix("asy") {
            return Ok(Constraint::asymptotic(i.parse().map_err(|_| bad())?));
        }
        let (order, alpha) = match s.strip_prefix('d').and_then(|r| r.split_once('@')) {
            Some((k, a)) => (k.parse().map_err(|_| bad())?, a),
            None => (0, s),
        };
        let alpha: f64 = alpha.parse().map_err(|_| bad())?;
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("node {alpha} must be finite and nonnegative")));
        }
        Ok(Constraint::finite(alpha, order))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::FiniteMatch { alpha, order: 0 } => write!(f, "{alpha}"),
            Constraint::FiniteMatch { alpha, order } => write!(f, "d{order}@{alpha}"),
            Constraint::AsymptoticMatch { term_index } => write!(f, "asy{term_index}"),
        }
    }
}

/// A constraint set given by term counts plus explicit extra points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    /// Orders `0..powers` at `λ = 0`.
    pub powers: usize,
    /// Terms `0..asymptotic` of the large-λ expansion.
    pub asymptotic: usize,
    pub nodes: Vec<Constraint>,
    /// 1-based positions among the power terms that are swapped out,
    /// with their replacements.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replacements: Vec<(usize, Constraint)>,
}

impl Recipe {
    pub fn constraints(&self) -> Result<Vec<Constraint>> {
        let mut out: Vec<Constraint> = (0..self.powers).map(|k| Constraint::finite(0.0, k)).collect();
        for &(position, replacement) in &self.replacements {
            if position == 0 || position > self.powers {
                return Err(Error::InvalidArgument(format!(
                    "power term {position} cannot be replaced; only 1..={} exist",
                    self.powers
                )));
            }
            out[position - 1] = replacement;
        }
        out.extend((0..self.asymptotic).map(Constraint::asymptotic));
        out.extend(self.nodes.iter().copied());
        Ok(out)
    }
}

/// Rejects repeated constraints.
pub fn check_distinct(constraints: &[Constraint]) -> Result<()> {
    for (i, c) in constraints.iter().enumerate() {
        if constraints[..i].iter().any(|d| d.same_as(c)) {
            return Err(Error::DuplicateConstraint(c.to_string()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_syntax_round_trips() {
        for s in ["0.5", "d2@0.5", "20", "d1@0.1", "asy4"] {
            let c: Constraint = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert!("d@0.5".parse::<Constraint>().is_err());
        assert!("-1".parse::<Constraint>().is_err());
    }

    #[test]
    fn replacement_swaps_a_power_term() {
        let r = Recipe { powers: 4, asymptotic: 1, nodes: vec![], replacements: vec![(4, Constraint::finite(0.5, 2))] };
        let c = r.constraints().unwrap();
        assert_eq!(c[3], Constraint::finite(0.5, 2));
        assert_eq!(c.len(), 5);
        let bad = Recipe { replacements: vec![(5, Constraint::finite(0.5, 2))], ..r };
        assert!(bad.constraints().is_err());
    }

    #[test]
    fn duplicates_detected() {
        let c = [Constraint::finite(0.5, 0), Constraint::asymptotic(0), Constraint::finite(0.5, 0)];
        assert!(matches!(check_distinct(&c), Err(Error::DuplicateConstraint(_))));
        assert!(check_distinct(&c[..2]).is_ok());
    }

    #[test]
    fn json_tags() {
        let v = serde_json::to_value(Constraint::finite(0.5, 1)).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "finite_match", "alpha": 0.5, "order": 1}));
    }
}
