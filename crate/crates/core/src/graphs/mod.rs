//! Weighted graphs with named boundary sets, and the graph families built from
//! the subdivision complexes.

mod families;
mod io;

use std::collections::{BTreeMap, VecDeque};

use num_traits::{ToPrimitive, Zero};

use crate::complex::{Rational, SimplexId};
use crate::error::{Error, Result};

pub use families::{
    build_crossing_graph, build_cut_graph, build_dual, build_hexacarpet, build_short_graph,
    build_skeleton, cut_paths, oriented_triangles, short_partition, CutPath, GraphFamily,
    Orientation, CROSSING_PATTERN, CUT_PATTERN,
};
pub use io::{read_edge_list, to_dot, write_edge_list};

/// Undirected graph with positive rational conductances.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. Adjacency is kept in
/// compressed row form for the solvers.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
    conductances: Vec<Rational>,
    labels: Vec<Option<SimplexId>>,
    boundary: BTreeMap<String, Vec<u32>>,
    offsets: Vec<usize>,
    // (neighbor, edge index)
    adjacency: Vec<(u32, u32)>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize, edges: Vec<(u32, u32, Rational)>) -> Result<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for (u, v, c) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            if c <= Rational::zero() {
                return Err(Error::InvalidGraph(format!("non-positive conductance on ({u}, {v})")));
            }
            list.push(((u.min(v), u.max(v)), c));
        }
        list.sort_unstable_by_key(|(e, _)| *e);
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0].0)));
        }
        let (edges, conductances): (Vec<_>, Vec<_>) = list.into_iter().unzip();
        Ok(Self::from_sorted(vertex_count, edges, conductances))
    }

    fn from_sorted(vertex_count: usize, edges: Vec<(u32, u32)>, conductances: Vec<Rational>) -> Self {
        let mut degree = vec![0usize; vertex_count + 1];
        for &(u, v) in &edges {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0u32, 0u32); 2 * edges.len()];
        for (k, &(u, v)) in edges.iter().enumerate() {
            adjacency[fill[u as usize]] = (v, k as u32);
            fill[u as usize] += 1;
            adjacency[fill[v as usize]] = (u, k as u32);
            fill[v as usize] += 1;
        }
        Self {
            vertex_count,
            edges,
            conductances,
            labels: vec![None; vertex_count],
            boundary: BTreeMap::new(),
            offsets,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> (u32, u32) {
        self.edges[k]
    }

    pub fn conductance(&self, k: usize) -> Rational {
        self.conductances[k]
    }

    pub fn conductances(&self) -> &[Rational] {
        &self.conductances
    }

    pub fn conductance_f64(&self, k: usize) -> f64 {
        self.conductances[k].to_f64().unwrap_or(f64::NAN)
    }

    pub fn conductances_f64(&self) -> Vec<f64> {
        (0..self.edge_count()).map(|k| self.conductance_f64(k)).collect()
    }

    pub fn find_edge(&self, u: u32, v: u32) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// `(neighbor, edge index)` pairs at `v`.
    pub fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        &self.adjacency[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn label(&self, v: u32) -> Option<SimplexId> {
        self.labels[v as usize]
    }

    pub fn set_labels(&mut self, labels: Vec<Option<SimplexId>>) -> Result<()> {
        if labels.len() != self.vertex_count {
            return Err(Error::SizeMismatch { expected: self.vertex_count, got: labels.len() });
        }
        self.labels = labels;
        Ok(())
    }

    /// Stores a named vertex set, sorted and deduplicated.
    pub fn set_boundary(&mut self, name: &str, mut vertices: Vec<u32>) -> Result<()> {
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v as usize >= self.vertex_count) {
            return Err(Error::InvalidGraph(format!("boundary vertex {v} out of range")));
        }
        self.boundary.insert(name.to_string(), vertices);
        Ok(())
    }

    pub fn boundary(&self, name: &str) -> Result<&[u32]> {
        self.boundary
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownBoundary(name.to_string()))
    }

    pub fn boundary_names(&self) -> impl Iterator<Item = &str> {
        self.boundary.keys().map(String::as_str)
    }

    /// The `A` and `B` sets, checked nonempty and disjoint.
    pub fn terminals(&self) -> Result<(&[u32], &[u32])> {
        let a = self.boundary("A")?;
        let b = self.boundary("B")?;
        check_terminals(self.vertex_count, a, b)?;
        Ok((a, b))
    }

    /// Connected component id of every vertex, numbered in order of first vertex.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let mut comp = vec![u32::MAX; self.vertex_count];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..self.vertex_count as u32 {
            if comp[s as usize] != u32::MAX {
                continue;
            }
            comp[s as usize] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in self.neighbors(v) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count as usize)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.components().1 == 1
    }

    /// True if some path joins a vertex of `a` to a vertex of `b`.
    pub fn connects(&self, a: &[u32], b: &[u32]) -> bool {
        let (comp, _) = self.components();
        let mut seen = vec![false; self.vertex_count];
        for &v in a {
            seen[comp[v as usize] as usize] = true;
        }
        b.iter().any(|&v| seen[comp[v as usize] as usize])
    }

    /// Contracts every class of `p` to one vertex; parallel conductances add.
    ///
    /// Boundary sets are mapped through the partition. Fails if `A` and `B`
    /// share a class.
    pub fn quotient(&self, p: &VertexPartition) -> Result<WeightedGraph> {
        if p.len() != self.vertex_count {
            return Err(Error::SizeMismatch { expected: self.vertex_count, got: p.len() });
        }
        let mut merged: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            let (cu, cv) = (p.class_of(u), p.class_of(v));
            if cu == cv {
                continue;
            }
            *merged.entry((cu.min(cv), cu.max(cv))).or_insert_with(Rational::zero) +=
                self.conductances[k];
        }
        let (edges, conductances): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
        let mut q = Self::from_sorted(p.class_count(), edges, conductances);
        for (name, set) in &self.boundary {
            q.set_boundary(name, set.iter().map(|&v| p.class_of(v)).collect())?;
        }
        if let (Ok(a), Ok(b)) = (q.boundary("A"), q.boundary("B")) {
            if let Some(&v) = a.iter().find(|v| b.binary_search(v).is_ok()) {
                return Err(Error::BoundaryOverlap(v as usize));
            }
        }
        let mut labels = vec![None; p.class_count()];
        for v in 0..self.vertex_count as u32 {
            let c = p.class_of(v) as usize;
            if labels[c].is_none() {
                labels[c] = self.labels[v as usize];
            }
        }
        q.labels = labels;
        Ok(q)
    }

    /// Subgraph on the same vertices without the edges matching `drop`.
    ///
    /// Fails with [`Error::Disconnected`] if `A` and `B` are defined and no longer
    /// joined, unless `allow_disconnected` is set.
    pub fn drop_edges<F>(&self, drop: F, allow_disconnected: bool) -> Result<WeightedGraph>
    where
        F: Fn(u32, u32, Rational) -> bool,
    {
        let mut edges = Vec::new();
        let mut conductances = Vec::new();
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if !drop(u, v, self.conductances[k]) {
                edges.push((u, v));
                conductances.push(self.conductances[k]);
            }
        }
        let mut g = Self::from_sorted(self.vertex_count, edges, conductances);
        g.labels = self.labels.clone();
        g.boundary = self.boundary.clone();
        if !allow_disconnected {
            if let (Ok(a), Ok(b)) = (g.boundary("A"), g.boundary("B")) {
                if !g.connects(a, b) {
                    return Err(Error::Disconnected);
                }
            }
        }
        Ok(g)
    }

    /// Relabels vertices by `perm[v]`; used to test ordering independence.
    pub fn permuted(&self, perm: &[u32]) -> Result<WeightedGraph> {
        if perm.len() != self.vertex_count {
            return Err(Error::SizeMismatch { expected: self.vertex_count, got: perm.len() });
        }
        let edges = self
            .edges
            .iter()
            .zip(&self.conductances)
            .map(|(&(u, v), &c)| (perm[u as usize], perm[v as usize], c))
            .collect();
        let mut g = Self::new(self.vertex_count, edges)?;
        for (name, set) in &self.boundary {
            g.set_boundary(name, set.iter().map(|&v| perm[v as usize]).collect())?;
        }
        let mut labels = vec![None; self.vertex_count];
        for (v, &l) in self.labels.iter().enumerate() {
            labels[perm[v] as usize] = l;
        }
        g.labels = labels;
        Ok(g)
    }
}

pub(crate) fn check_terminals(n: usize, a: &[u32], b: &[u32]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let mut mark = vec![false; n];
    for &v in a {
        mark[v as usize] = true;
    }
    if let Some(&v) = b.iter().find(|&&v| mark[v as usize]) {
        return Err(Error::BoundaryOverlap(v as usize));
    }
    Ok(())
}

/// Map from vertices onto classes `0..class_count`, every class non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    representative: Vec<u32>,
    class_count: usize,
}

impl VertexPartition {
    pub fn new(representative: Vec<u32>) -> Result<Self> {
        let class_count = representative.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut used = vec![false; class_count];
        for &c in &representative {
            used[c as usize] = true;
        }
        if let Some(c) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidGraph(format!("partition class {c} is empty")));
        }
        Ok(Self { representative, class_count })
    }

    pub fn identity(n: usize) -> Self {
        Self { representative: (0..n as u32).collect(), class_count: n }
    }

    /// Renumbers arbitrary keys densely in order of first appearance.
    pub fn from_keys<K: Ord + Clone>(keys: &[K]) -> Self {
        let mut ids: BTreeMap<K, u32> = BTreeMap::new();
        let mut representative = Vec::with_capacity(keys.len());
        for k in keys {
            let next = ids.len() as u32;
            representative.push(*ids.entry(k.clone()).or_insert(next));
        }
        Self { representative, class_count: ids.len() }
    }

    pub fn class_of(&self, v: u32) -> u32 {
        self.representative[v as usize]
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }
}
