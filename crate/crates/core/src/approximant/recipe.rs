use crate::error::{Error, Result};
use crate::problem::ProblemFamily;

use super::constraint::{Constraint, Recipe};

fn values(nodes: &[f64]) -> Vec<Constraint> {
    nodes.iter().map(|&a| Constraint::finite(a, 0)).collect()
}

/// Constraint set and μ of the published constructions: quartic degree 3,
/// sextic degrees 5 and 6, levels 0 to 2.
pub fn standard_recipe(family: ProblemFamily, level: usize, degree: usize) -> Result<(Recipe, f64)> {
    let unsupported =
        || Err(Error::InvalidArgument(format!("no standard recipe for {family} level {level} degree {degree}")));
    if level > 2 {
        return unsupported();
    }
    let (recipe, mu) = match (family.a(), family.b(), degree) {
        (2, 4, 3) => {
            (Recipe { powers: 5, asymptotic: 5, nodes: values(&[0.5, 1.0, 2.0, 5.0, 20.0]), replacements: vec![] }, 2.0)
        }
        (2, 6, 5) if level == 0 => {
            // seven values leave one row open; the slope at λ = 5 fills it
            let mut nodes = values(&[0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0]);
            nodes.push(Constraint::finite(5.0, 1));
            (Recipe { powers: 4, asymptotic: 5, nodes, replacements: vec![] }, 0.5)
        }
        (2, 6, 5) => {
            let mut nodes = values(&[1.0, 2.0, 5.0, 10.0, 20.0, 0.1]);
            nodes.extend([Constraint::finite(0.1, 1), Constraint::finite(0.01, 0)]);
            (Recipe { powers: 4, asymptotic: 5, nodes, replacements: vec![] }, 0.95)
        }
        (2, 6, 6) => {
            let mut nodes = values(&[1.0, 2.0, 5.0, 10.0, 20.0, 0.5]);
            nodes.extend([
                Constraint::finite(0.5, 1),
                Constraint::finite(0.2, 0),
                Constraint::finite(0.1, 0),
                Constraint::finite(0.1, 1),
                Constraint::finite(0.01, 0),
            ]);
            let replacements = if level == 0 { vec![] } else { vec![(4, Constraint::finite(0.5, 2))] };
            (Recipe { powers: 4, asymptotic: 5, nodes, replacements }, if level == 1 { 1.0 } else { 0.5 })
        }
        _ => return unsupported(),
    };
    Ok((recipe, mu))
}
