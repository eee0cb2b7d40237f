//! Versioned CSV tables. Each file starts with a `# schema <name> v<N>`
//! line; the column list of a version is frozen.

use std::fmt::Write;

pub struct Schema {
    pub name: &'static str,
    pub version: u32,
    pub columns: &'static [&'static str],
}

pub const HYPERBOLIC: Schema =
    Schema { name: "hyperbolic", version: 1, columns: &["R", "h", "lambda1", "residual", "bound", "pass"] };

pub const RESIDUALS: Schema =
    Schema { name: "residuals", version: 1, columns: &["suite", "name", "max_residual", "cases", "tol", "pass"] };

/// Floats print in shortest round-trip form.
pub enum Cell {
    Float(f64),
    Int(usize),
    Bool(bool),
    Text(String),
}

impl Schema {
    pub fn render(&self, rows: &[Vec<Cell>]) -> String {
        let mut s = format!("# schema {} v{}\n{}\n", self.name, self.version, self.columns.join(","));
        for row in rows {
            assert_eq!(row.len(), self.columns.len(), "row width must match the schema");
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Float(v) => format!("{v:?}"),
                    Cell::Int(v) => v.to_string(),
                    Cell::Bool(v) => v.to_string(),
                    Cell::Text(t) => t.replace(',', ";"),
                })
                .collect();
            writeln!(s, "{}", cells.join(",")).expect("writing to a String");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Changing columns without bumping the version must fail here.
    #[test]
    fn frozen_schemas() {
        let frozen = [(&HYPERBOLIC, 1, "R,h,lambda1,residual,bound,pass"), (&RESIDUALS, 1, "suite,name,max_residual,cases,tol,pass")];
        for (schema, version, header) in frozen {
            assert_eq!(schema.version, version, "{}", schema.name);
            assert_eq!(schema.columns.join(","), header, "{} changed without a version bump", schema.name);
        }
    }

    #[test]
    fn floats_round_trip() {
        let v = 0.1 + 0.2;
        let s = HYPERBOLIC.render(&[vec![
            Cell::Float(v),
            Cell::Float(0.1),
            Cell::Float(1.0 / 3.0),
            Cell::Float(1e-300),
            Cell::Float(0.25),
            Cell::Bool(true),
        ]]);
        let last = s.lines().last().unwrap();
        let parsed: f64 = last.split(',').next().unwrap().parse().unwrap();
        assert_eq!(parsed, v);
    }
}
