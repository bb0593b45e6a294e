//! Edge-list and opinion files.
//!
//! Both files are comma-separated with an optional header line. The edge file
//! holds `src,dst` pairs of integer node labels, the attribute file holds
//! `node,opinion` rows with opinion `pro` or `anti`. Blank lines and lines
//! starting with `#` are skipped.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use polarnet_core::graph::{BuildStats, GraphError};
use polarnet_core::{AnnotatedGraph, Opinion};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {msg}", .path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadStats {
    pub edge_rows: usize,
    pub attribute_rows: usize,
    pub build: BuildStats,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_owned(), source })
}

/// Data rows as `(line number, fields)`. A first row whose leading field is
/// not an integer is taken as a header.
fn rows<'a>(path: &'a Path, text: &'a str) -> impl Iterator<Item = Result<(usize, [&'a str; 2]), IoError>> + 'a {
    let mut first = true;
    text.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let mut fields = line.split(',').map(str::trim);
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Some(Err(IoError::Parse {
                    path: path.to_owned(),
                    line: i + 1,
                    msg: format!("expected 2 comma-separated fields, got `{line}`"),
                }))
            }
        };
        let header = first && a.parse::<i64>().is_err();
        first = false;
        (!header).then_some(Ok((i + 1, [a, b])))
    })
}

fn label(path: &Path, line: usize, field: &str) -> Result<i64, IoError> {
    field.parse().map_err(|_| IoError::Parse {
        path: path.to_owned(),
        line,
        msg: format!("`{field}` is not an integer node label"),
    })
}

pub fn load_edge_list(edges_path: &Path, attrs_path: &Path) -> Result<(AnnotatedGraph, LoadStats), IoError> {
    let text = read(edges_path)?;
    let mut edges = Vec::new();
    for row in rows(edges_path, &text) {
        let (line, [a, b]) = row?;
        edges.push((label(edges_path, line, a)?, label(edges_path, line, b)?));
    }
    let text = read(attrs_path)?;
    let mut annotations = Vec::new();
    for row in rows(attrs_path, &text) {
        let (line, [a, b]) = row?;
        let opinion = Opinion::parse(b).ok_or_else(|| IoError::Parse {
            path: attrs_path.to_owned(),
            line,
            msg: format!("opinion must be `pro` or `anti`, got `{b}`"),
        })?;
        annotations.push((label(attrs_path, line, a)?, opinion));
    }
    let (g, build) = AnnotatedGraph::from_labeled_edges(&edges, &annotations)?;
    Ok((g, LoadStats { edge_rows: edges.len(), attribute_rows: annotations.len(), build }))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, IoError> {
    fs::File::create(path).map(BufWriter::new).map_err(|source| IoError::Io { path: path.to_owned(), source })
}

fn wrap(path: &Path) -> impl Fn(io::Error) -> IoError + '_ {
    move |source| IoError::Io { path: path.to_owned(), source }
}

/// Writes the graph in the format read by [`load_edge_list`], using the
/// original node labels.
pub fn save_graph(g: &AnnotatedGraph, edges_path: &Path, attrs_path: &Path) -> Result<(), IoError> {
    let mut w = create(edges_path)?;
    let e = wrap(edges_path);
    writeln!(w, "src,dst").map_err(&e)?;
    for (a, b) in g.edges() {
        writeln!(w, "{},{}", g.label(a), g.label(b)).map_err(&e)?;
    }
    w.flush().map_err(&e)?;

    let mut w = create(attrs_path)?;
    let e = wrap(attrs_path);
    writeln!(w, "node,opinion").map_err(&e)?;
    for i in 0..g.n() {
        writeln!(w, "{},{}", g.label(i), g.opinion(i)).map_err(&e)?;
    }
    w.flush().map_err(&e)
}
