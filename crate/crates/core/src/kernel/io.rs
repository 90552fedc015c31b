use std::fmt::Write as _;
use std::path::Path;

use super::VotingKernel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub x: usize,
    pub y: usize,
    pub weight: f64,
}

impl WeightedEdge {
    pub fn unit(x: usize, y: usize) -> Self {
        WeightedEdge { x, y, weight: 1.0 }
    }
}

/// Parses `x y weight` triples, one per line, with 0-based site indices.
///
/// Blank lines and lines starting with `#` are skipped. Returns the site
/// count (largest index plus one) together with the edges.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<WeightedEdge>)> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        if fields.len() != 3 {
            return Err(parse_err(format!("expected `x y weight`, got {line:?}")));
        }
        let x: usize = fields[0]
            .parse()
            .map_err(|e| parse_err(format!("bad site {:?}: {e}", fields[0])))?;
        let y: usize = fields[1]
            .parse()
            .map_err(|e| parse_err(format!("bad site {:?}: {e}", fields[1])))?;
        let weight: f64 = fields[2]
            .parse()
            .map_err(|e| parse_err(format!("bad weight {:?}: {e}", fields[2])))?;
        n = n.max(x + 1).max(y + 1);
        edges.push(WeightedEdge { x, y, weight });
    }
    Ok((n, edges))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<(usize, Vec<WeightedEdge>)> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

impl VotingKernel {
    /// Reads an edge-list file and builds the random-walk kernel on it.
    pub fn from_edge_file(path: impl AsRef<Path>) -> Result<Self> {
        let (n, edges) = read_edge_list(path)?;
        super::from_weighted_graph(n, &edges)
    }

    /// Dense matrix as CSV, one row per line, for debugging.
    pub fn to_csv(&self) -> String {
        let n = self.len();
        let mut out = String::with_capacity(n * n * 8);
        for x in 0..n {
            for y in 0..n {
                if y > 0 {
                    out.push(',');
                }
                write!(out, "{}", self.q(x, y)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triples_and_comments() {
        let text = "# square\n0 1 1\n1 2 1.5\n\n2 3 1\n3 0 2\n";
        let (n, edges) = parse_edge_list(text).unwrap();
        assert_eq!(n, 4);
        assert_eq!(edges.len(), 4);
        assert_eq!(
            edges[1],
            WeightedEdge {
                x: 1,
                y: 2,
                weight: 1.5
            }
        );
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_edge_list("0 1 1\n1 x 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_edge_list("0 1\n").is_err());
    }

    #[test]
    fn csv_export_has_one_row_per_site() {
        let k = super::super::build_complete(3).unwrap();
        let csv = k.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(csv.lines().next().unwrap(), "0,0.5,0.5");
    }
}
