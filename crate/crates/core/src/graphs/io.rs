//! Edge-list text format and DOT export.
//!
//! ```text
//! #vertices 18
//! #boundary A: 6 9
//! 0 6 2/1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::WeightedGraph;
use crate::complex::Rational;
use crate::error::{Error, Result};

pub fn write_edge_list<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    writeln!(out, "#vertices {}", g.vertex_count())?;
    for name in g.boundary_names() {
        let set = g.boundary(name)?;
        let list: Vec<String> = set.iter().map(u32::to_string).collect();
        writeln!(out, "#boundary {name}: {}", list.join(" "))?;
    }
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let c = g.conductance(k);
        writeln!(out, "{u} {v} {}/{}", c.numer(), c.denom())?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<WeightedGraph> {
    let mut vertex_count: Option<usize> = None;
    let mut boundary: BTreeMap<String, Vec<u32>> = BTreeMap::new();
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let err = |message: String| Error::Parse { line: lineno, message };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#vertices") {
            let n = rest.trim().parse().map_err(|e| err(format!("vertex count: {e}")))?;
            vertex_count = Some(n);
        } else if let Some(rest) = line.strip_prefix("#boundary") {
            let (name, list) =
                rest.split_once(':').ok_or_else(|| err("missing `:` in boundary line".into()))?;
            let set = list
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| err(format!("boundary vertex `{t}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            boundary.insert(name.trim().to_string(), set);
        } else if line.starts_with('#') {
            continue;
        } else {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected `u v num/den`, got {} fields", fields.len())));
            }
            let u = fields[0].parse::<u32>().map_err(|e| err(format!("vertex: {e}")))?;
            let v = fields[1].parse::<u32>().map_err(|e| err(format!("vertex: {e}")))?;
            let c = fields[2]
                .parse::<Rational>()
                .map_err(|e| err(format!("conductance `{}`: {e}", fields[2])))?;
            edges.push((u, v, c));
        }
    }
    let implied = edges.iter().map(|&(u, v, _)| u.max(v) as usize + 1).max().unwrap_or(0);
    let mut g = WeightedGraph::new(vertex_count.unwrap_or(implied), edges)?;
    for (name, set) in boundary {
        g.set_boundary(&name, set)?;
    }
    Ok(g)
}

/// Graphviz rendering with `A` filled red and `B` filled blue.
pub fn to_dot(g: &WeightedGraph) -> String {
    let mut color = vec![None; g.vertex_count()];
    for (name, fill) in [("A", "red"), ("B", "blue")] {
        if let Ok(set) = g.boundary(name) {
            for &v in set {
                color[v as usize] = Some(fill);
            }
        }
    }
    let mut s = String::from("graph G {\n");
    for (v, c) in color.iter().enumerate() {
        match c {
            Some(fill) => writeln!(s, "  {v} [style=filled, fillcolor={fill}];").unwrap(),
            None => writeln!(s, "  {v};").unwrap(),
        }
    }
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(s, "  {u} -- {v} [label=\"{}\"];", g.conductance(k)).unwrap();
    }
    s.push_str("}\n");
    s
}
