//! Tab-separated file formats.
//!
//! * graph: optional header `#directed N` or `#undirected N`, then
//!   `src<TAB>dst[<TAB>weight]` with 0-based ids and weight defaulting to 1.
//!   Without a header the graph is undirected with `max id + 1` nodes.
//! * labels: `node<TAB>label[<TAB>weight]`; several lines for one node form a
//!   distribution.
//! * points: one point per line, tab-separated coordinates.
//! * results: `node<TAB>label<TAB>prob`, sorted by node, then probability
//!   descending, then label id.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::graph::{build_graph, Graph, LabelMatrix};
use crate::induce::{Metric, PointSet};
use crate::matrix::Matrix;
use crate::{Error, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn fields(line: &str) -> Vec<&str> {
    line.split('\t').map(str::trim).collect()
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("invalid {what} {s:?}")))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(bool, usize)> = None;
    if let Some(first) = text.lines().next() {
        let first = first.trim();
        let mut parts = first.split_whitespace();
        let directed = match parts.next() {
            Some("#directed") => Some(true),
            Some("#undirected") => Some(false),
            _ => None,
        };
        if let Some(directed) = directed {
            let n = parts
                .next()
                .ok_or_else(|| Error::Parse("header is missing the node count".into()))
                .and_then(|s| parse_num::<usize>(s, "node count"))
                .map_err(|e| e.at_line(1))?;
            header = Some((directed, n));
        }
    }

    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (line, text) in data_lines(text) {
        let f = fields(text);
        let parsed = (|| -> Result<(usize, usize, f64)> {
            if f.len() < 2 || f.len() > 3 {
                return Err(Error::Parse(format!(
                    "expected 2 or 3 fields, found {}",
                    f.len()
                )));
            }
            let src = parse_num(f[0], "node id")?;
            let dst = parse_num(f[1], "node id")?;
            let weight = match f.get(2) {
                Some(w) => parse_num(w, "weight")?,
                None => 1.0,
            };
            if weight < 0.0 {
                return Err(Error::NegativeWeight { src, dst, weight });
            }
            if let Some((_, n)) = header {
                for node in [src, dst] {
                    if node >= n {
                        return Err(Error::NodeIdOutOfRange { node, n });
                    }
                }
            }
            Ok((src, dst, weight))
        })()
        .map_err(|e| e.at_line(line))?;
        edges.push(parsed);
        lines.push(line);
    }

    let (directed, n) = header.unwrap_or_else(|| {
        let n = edges
            .iter()
            .map(|&(s, d, _)| s.max(d) + 1)
            .max()
            .unwrap_or(0);
        (false, n)
    });
    build_graph(&edges, n, directed).map_err(|e| match e {
        Error::DuplicateEdge { src, dst } => {
            let same = |&(s, d, _): &(usize, usize, f64)| {
                (s, d) == (src, dst) || (!directed && (d, s) == (src, dst))
            };
            let line = edges.iter().rposition(same).map_or(0, |k| lines[k]);
            Error::DuplicateEdge { src, dst }.at_line(line)
        }
        other => other,
    })
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    write(path, &format_graph(g))
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = String::new();
    let kind = if g.is_directed() {
        "directed"
    } else {
        "undirected"
    };
    let _ = writeln!(s, "#{kind} {}", g.node_count());
    for e in g.edges() {
        let _ = writeln!(s, "{}\t{}\t{}", e.src, e.dst, e.weight);
    }
    s
}

/// Label names in first-appearance order; ids are positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelVocab {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelVocab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut v = Self::new();
        for n in names {
            v.intern(n.as_ref());
        }
        v
    }

    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Labels for an `n`-node graph, building the vocabulary from the file.
pub fn load_labels(path: &Path, n: usize) -> Result<(LabelMatrix, LabelVocab)> {
    parse_labels(&read(path)?, n, None)
}

/// Labels restricted to a fixed vocabulary; other names are `UnknownLabel`.
pub fn load_labels_with_vocab(path: &Path, n: usize, vocab: &LabelVocab) -> Result<LabelMatrix> {
    parse_labels(&read(path)?, n, Some(vocab)).map(|(y, _)| y)
}

pub fn parse_labels(
    text: &str,
    n: usize,
    fixed: Option<&LabelVocab>,
) -> Result<(LabelMatrix, LabelVocab)> {
    let mut vocab = fixed.cloned().unwrap_or_default();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut first_line: HashMap<usize, usize> = HashMap::new();
    for (line, text) in data_lines(text) {
        let f = fields(text);
        let parsed = (|| -> Result<(usize, usize, f64)> {
            if f.len() < 2 || f.len() > 3 {
                return Err(Error::Parse(format!(
                    "expected 2 or 3 fields, found {}",
                    f.len()
                )));
            }
            let node: usize = parse_num(f[0], "node id")?;
            if node >= n {
                return Err(Error::NodeIdOutOfRange { node, n });
            }
            let label = match fixed {
                Some(v) => v
                    .id(f[1])
                    .ok_or_else(|| Error::UnknownLabel(f[1].to_string()))?,
                None => vocab.intern(f[1]),
            };
            let weight: f64 = match f.get(2) {
                Some(w) => parse_num(w, "weight")?,
                None => 1.0,
            };
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::Parse(format!(
                    "label weight must be non-negative, got {weight}"
                )));
            }
            Ok((node, label, weight))
        })()
        .map_err(|e| e.at_line(line))?;
        first_line.entry(parsed.0).or_insert(line);
        entries.push(parsed);
    }

    let m = vocab.len();
    let mut scores = Matrix::zeros(n, m);
    let mut listed = vec![false; n];
    for &(node, label, w) in &entries {
        scores[(node, label)] += w;
        listed[node] = true;
    }
    for node in (0..n).filter(|&i| listed[i]) {
        if !crate::graph::normalize_row(scores.row_mut(node)) {
            return Err(Error::ZeroMassRow(node).at_line(first_line[&node]));
        }
    }
    Ok((LabelMatrix::new(scores)?, vocab))
}

pub fn write_labels(path: &Path, y: &LabelMatrix, vocab: &LabelVocab) -> Result<()> {
    write(path, &format_labels(y, vocab))
}

/// Seed rows as `node<TAB>label<TAB>weight` lines.
pub fn format_labels(y: &LabelMatrix, vocab: &LabelVocab) -> String {
    let mut s = String::new();
    for &i in y.seeds() {
        for (c, &v) in y.row(i).iter().enumerate() {
            if v > 0.0 {
                let _ = writeln!(s, "{i}\t{}\t{v}", vocab.name(c));
            }
        }
    }
    s
}

pub fn load_points(path: &Path) -> Result<PointSet> {
    parse_points(&read(path)?)
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut points = Vec::new();
    for (line, text) in data_lines(text) {
        let p = fields(text)
            .into_iter()
            .map(|s| parse_num::<f64>(s, "coordinate"))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.at_line(line))?;
        if let Some(first) = points.first().map(Vec::len) {
            if p.len() != first {
                return Err(Error::DimensionMismatch {
                    index: points.len(),
                    expected: first,
                    found: p.len(),
                }
                .at_line(line));
            }
        }
        points.push(p);
    }
    PointSet::new(&points, Metric::Euclidean)
}

pub fn write_result(path: &Path, y: &LabelMatrix, vocab: &LabelVocab) -> Result<()> {
    write(path, &format_result(y, vocab))
}

pub fn format_result(y: &LabelMatrix, vocab: &LabelVocab) -> String {
    let mut s = String::new();
    for i in 0..y.node_count() {
        let row = y.row(i);
        let mut order: Vec<usize> = (0..row.len()).filter(|&c| row[c] > 0.0).collect();
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        for c in order {
            let _ = writeln!(s, "{i}\t{}\t{:.6}", vocab.name(c), row[c]);
        }
    }
    s
}
