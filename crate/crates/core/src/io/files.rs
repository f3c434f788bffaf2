use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{build_graph, decompose_domain, DomainDecomposition, WeightedGraph};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((k + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_number(line: usize, token: &str, what: &str) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::Parse {
        line: Some(line),
        message: format!("invalid {what} '{token}'"),
    })
}

fn field_count(line: usize, fields: &[&str], expected: usize, layout: &str) -> Result<()> {
    if fields.len() != expected {
        return Err(Error::Parse {
            line: Some(line),
            message: format!("expected `{layout}`, found {} field(s)", fields.len()),
        });
    }
    Ok(())
}

/// Edge list: `vertex_a vertex_b weight` per line.
pub fn parse_edges(text: &str) -> Result<Vec<(String, String, f64)>> {
    data_lines(text)
        .map(|(line, fields)| {
            field_count(line, &fields, 3, "vertex_a vertex_b weight")?;
            let w = parse_number(line, fields[2], "weight")?;
            Ok((fields[0].to_string(), fields[1].to_string(), w))
        })
        .collect()
}

/// Measure file: `vertex mu` per line.
pub fn parse_measures(text: &str) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    for (line, fields) in data_lines(text) {
        field_count(line, &fields, 2, "vertex mu")?;
        let mu = parse_number(line, fields[1], "measure")?;
        if out.insert(fields[0].to_string(), mu).is_some() {
            return Err(Error::Parse {
                line: Some(line),
                message: format!("measure for vertex {} given twice", fields[0]),
            });
        }
    }
    Ok(out)
}

/// Domain file: one vertex label per line.
pub fn parse_domain(text: &str) -> Result<Vec<String>> {
    data_lines(text)
        .map(|(line, fields)| {
            field_count(line, &fields, 1, "vertex")?;
            Ok(fields[0].to_string())
        })
        .collect()
}

pub fn read_graph(graph_path: &Path, measure_path: Option<&Path>) -> Result<WeightedGraph> {
    let edges = parse_edges(&read_text(graph_path)?)?;
    let measures = measure_path
        .map(|p| read_text(p).and_then(|t| parse_measures(&t)))
        .transpose()?;
    build_graph(&edges, measures.as_ref())
}

pub fn read_domain(graph: &WeightedGraph, path: &Path) -> Result<DomainDecomposition> {
    decompose_domain(graph, &parse_domain(&read_text(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_with_comments() {
        let text = "# path\n0 1 1.0\n\n1\t2   2.5\n";
        let e = parse_edges(text).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[1], ("1".to_string(), "2".to_string(), 2.5));
    }

    #[test]
    fn bad_lines_report_line_numbers() {
        match parse_edges("0 1 1\n1 2\n") {
            Err(Error::Parse { line: Some(2), .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_edges("0 1 x\n") {
            Err(Error::Parse { line: Some(1), message }) => assert!(message.contains("weight")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_measures("a 1\na 2\n"),
            Err(Error::Parse { line: Some(2), .. })
        ));
        assert!(matches!(parse_domain("a b\n"), Err(Error::Parse { line: Some(1), .. })));
    }

    #[test]
    fn measures_and_domain() {
        let m = parse_measures("# mu\na 0.5\nb 2\n").unwrap();
        assert_eq!(m["a"], 0.5);
        assert_eq!(parse_domain("1\n2\n# x\n3\n").unwrap(), vec!["1", "2", "3"]);
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_graph(Path::new("/nonexistent/graph.tsv"), None).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/graph.tsv"));
        assert_eq!(err.code(), "E_IO");
    }
}
