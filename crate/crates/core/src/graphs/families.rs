use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::{VertexPartition, WeightedGraph};
use crate::complex::{EdgeParent, HexPoint, Level, Point, Rational, SimplexId, SimplicialComplex};
use crate::error::{Error, Result};

/// Conductance of a hexacarpet edge (resistance 1/2).
pub const H_CONDUCTANCE: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphFamily {
    Skeleton,
    Dual,
    Hexacarpet,
    Cut,
    Short,
}

impl GraphFamily {
    pub const ALL: [GraphFamily; 5] = [
        GraphFamily::Skeleton,
        GraphFamily::Dual,
        GraphFamily::Hexacarpet,
        GraphFamily::Cut,
        GraphFamily::Short,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphFamily::Skeleton => "skeleton",
            GraphFamily::Dual => "dual",
            GraphFamily::Hexacarpet => "hexacarpet",
            GraphFamily::Cut => "cut",
            GraphFamily::Short => "short",
        }
    }

    pub fn build(self, c: &SimplicialComplex, n: usize) -> Result<WeightedGraph> {
        match self {
            GraphFamily::Skeleton => build_skeleton(c, n),
            GraphFamily::Dual => build_dual(c, n),
            GraphFamily::Hexacarpet => build_hexacarpet(c, n),
            GraphFamily::Cut => build_cut_graph(c, n),
            GraphFamily::Short => build_short_graph(c, n),
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GraphFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown graph family `{s}`")))
    }
}

fn graph_level(c: &SimplicialComplex, n: usize) -> Result<&Level> {
    if n == 0 {
        return Err(Error::DegenerateLevel);
    }
    c.level(n)
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out
}

fn set_sides(g: &mut WeightedGraph, sides: &[Vec<u32>; 6], a: [usize; 2], b: [usize; 2]) -> Result<()> {
    for (i, s) in sides.iter().enumerate() {
        g.set_boundary(&format!("L{i}"), s.clone())?;
    }
    g.set_boundary("A", union(&sides[a[0]], &sides[a[1]]))?;
    g.set_boundary("B", union(&sides[b[0]], &sides[b[1]]))?;
    Ok(())
}

/// The 1-skeleton `G_n^T`: conductance 1 on interior edges, 1/2 on boundary
/// edges. `A = L2`, `B = L5`.
pub fn build_skeleton(c: &SimplicialComplex, n: usize) -> Result<WeightedGraph> {
    let level = graph_level(c, n)?;
    let half = Rational::new(1, 2);
    let one = Rational::from_integer(1);
    let edges = level
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[u, v])| {
            let interior = level.edge_triangle_count(e as u32) == 2;
            (u, v, if interior { one } else { half })
        })
        .collect();
    let mut g = WeightedGraph::new(level.vertex_count(), edges)?;
    let mut sides: [Vec<u32>; 6] = Default::default();
    for v in 0..level.vertex_count() as u32 {
        for s in level.vertex_sides(v).iter() {
            sides[s as usize].push(v);
        }
    }
    for (i, s) in sides.iter().enumerate() {
        g.set_boundary(&format!("L{i}"), s.clone())?;
    }
    g.set_boundary("A", sides[2].clone())?;
    g.set_boundary("B", sides[5].clone())?;
    g.set_labels((0..level.vertex_count() as u32).map(|v| Some(SimplexId::vertex(n, v))).collect())?;
    Ok(g)
}

/// Triangles incident to each edge.
fn edge_triangles(level: &Level) -> Vec<[Option<u32>; 2]> {
    let mut inc = vec![[None, None]; level.edge_count()];
    for t in 0..level.triangle_count() as u32 {
        for e in level.triangle_sides(t) {
            let slot = &mut inc[e as usize];
            if slot[0].is_none() {
                slot[0] = Some(t);
            } else {
                slot[1] = Some(t);
            }
        }
    }
    inc
}

/// The dual graph `G_n`: triangles adjacent across shared edges, unit
/// conductance. `A`/`B` are the triangles with a side in `L0 ∪ L1` / `L3 ∪ L4`.
pub fn build_dual(c: &SimplicialComplex, n: usize) -> Result<WeightedGraph> {
    let level = graph_level(c, n)?;
    let one = Rational::from_integer(1);
    let mut edges = Vec::new();
    let mut sides: [Vec<u32>; 6] = Default::default();
    for (e, pair) in edge_triangles(level).into_iter().enumerate() {
        match pair {
            [Some(s), Some(t)] => edges.push((s, t, one)),
            [Some(t), None] => {
                if let Some(side) = level.edge_side(e as u32) {
                    sides[side as usize].push(t);
                }
            }
            _ => return Err(Error::Structure(format!("edge {e} has no incident triangle"))),
        }
    }
    let mut g = WeightedGraph::new(level.triangle_count(), edges)?;
    set_sides(&mut g, &sides, [0, 1], [3, 4])?;
    g.set_labels(
        (0..level.triangle_count() as u32).map(|t| Some(SimplexId::triangle(n, t))).collect(),
    )?;
    Ok(g)
}

/// The modified hexacarpet `G_n^H`.
///
/// Vertices `0..6^n` are the triangles, followed by one vertex per edge. Each
/// triangle is joined to its three sides with conductance 2. `A = L0 ∪ L1`,
/// `B = L3 ∪ L4` (edge-vertices on those hexagon sides).
pub fn build_hexacarpet(c: &SimplicialComplex, n: usize) -> Result<WeightedGraph> {
    let level = graph_level(c, n)?;
    let nt = level.triangle_count() as u32;
    let w = Rational::from_integer(H_CONDUCTANCE);
    let mut edges = Vec::with_capacity(3 * nt as usize);
    for t in 0..nt {
        for e in level.triangle_sides(t) {
            edges.push((t, nt + e, w));
        }
    }
    let mut g = WeightedGraph::new(level.triangle_count() + level.edge_count(), edges)?;
    let mut sides: [Vec<u32>; 6] = Default::default();
    for e in 0..level.edge_count() as u32 {
        if let Some(s) = level.edge_side(e) {
            sides[s as usize].push(nt + e);
        }
    }
    set_sides(&mut g, &sides, [0, 1], [3, 4])?;
    let labels = (0..nt)
        .map(|t| Some(SimplexId::triangle(n, t)))
        .chain((0..level.edge_count() as u32).map(|e| Some(SimplexId::edge(n, e))))
        .collect();
    g.set_labels(labels)?;
    Ok(g)
}

/// Ordered corners `(c0, c1, c2)` of a triangle: `[c0, c1]` faces the source
/// side, `[c2, c0]` the sink side and `[c1, c2]` is insulated.
pub type Orientation = [u32; 3];

/// Children of an oriented triangle for the cut graph, as hexagon points of the
/// parent. The six children form two channels from `[c0,c1]` to `[c2,c0]`.
pub const CUT_PATTERN: [[HexPoint; 3]; 6] = [
    [HexPoint::Corner(0), HexPoint::Mid(0), HexPoint::Center],
    [HexPoint::Corner(1), HexPoint::Mid(0), HexPoint::Center],
    [HexPoint::Center, HexPoint::Corner(1), HexPoint::Mid(1)],
    [HexPoint::Center, HexPoint::Mid(1), HexPoint::Corner(2)],
    [HexPoint::Corner(2), HexPoint::Center, HexPoint::Mid(2)],
    [HexPoint::Corner(0), HexPoint::Center, HexPoint::Mid(2)],
];

/// Top-level pattern joining `L0 ∪ L1` to `L3 ∪ L4` through two channels of
/// three cells each.
pub const CROSSING_PATTERN: [[HexPoint; 3]; 6] = [
    [HexPoint::Corner(0), HexPoint::Mid(0), HexPoint::Center],
    [HexPoint::Corner(1), HexPoint::Mid(0), HexPoint::Center],
    [HexPoint::Center, HexPoint::Corner(1), HexPoint::Mid(1)],
    [HexPoint::Mid(1), HexPoint::Center, HexPoint::Corner(2)],
    [HexPoint::Mid(2), HexPoint::Center, HexPoint::Corner(2)],
    [HexPoint::Center, HexPoint::Corner(0), HexPoint::Mid(2)],
];

/// Orientation of every level-`n` triangle (indexed by triangle id), obtained
/// by applying `top` to the base triangle and `rest` at every later step.
pub fn oriented_triangles(
    c: &SimplicialComplex,
    n: usize,
    top: &[[HexPoint; 3]; 6],
    rest: &[[HexPoint; 3]; 6],
) -> Result<Vec<Orientation>> {
    graph_level(c, n)?;
    let mut current: Vec<Orientation> = vec![[0, 1, 2]];
    for k in 0..n {
        let pattern = if k == 0 { top } else { rest };
        let mut next = Vec::with_capacity(current.len() * 6);
        for &corners in &current {
            for child in pattern {
                let mut o = [0u32; 3];
                for (slot, &p) in o.iter_mut().zip(child) {
                    *slot = c.refine_point(k, corners, p)?;
                }
                next.push(o);
            }
        }
        current = next;
    }
    let level = c.level(n)?;
    let mut by_index = vec![[0u32; 3]; level.triangle_count()];
    let mut seen = vec![false; level.triangle_count()];
    for o in current {
        let t = level
            .find_triangle(o[0], o[1], o[2])
            .ok_or_else(|| Error::Structure("oriented child is not a triangle".into()))?;
        if seen[t as usize] {
            return Err(Error::Structure(format!("triangle {t} oriented twice")));
        }
        seen[t as usize] = true;
        by_index[t as usize] = o;
    }
    Ok(by_index)
}

fn insulate(
    c: &SimplicialComplex,
    n: usize,
    top: &[[HexPoint; 3]; 6],
    b_sides: [usize; 2],
) -> Result<WeightedGraph> {
    let level = graph_level(c, n)?;
    let h = build_hexacarpet(c, n)?;
    let nt = level.triangle_count() as u32;
    let orient = oriented_triangles(c, n, top, &CUT_PATTERN)?;
    let mut cut = vec![u32::MAX; level.triangle_count()];
    for (t, o) in orient.iter().enumerate() {
        let e = level
            .find_edge(o[1], o[2])
            .ok_or_else(|| Error::Structure("insulated side is not an edge".into()))?;
        cut[t] = nt + e;
    }
    let mut g = h.drop_edges(|u, v, _| u < nt && cut[u as usize] == v, true)?;
    let b = union(g.boundary(&format!("L{}", b_sides[0]))?, g.boundary(&format!("L{}", b_sides[1]))?);
    g.set_boundary("B", b)?;
    Ok(g)
}

/// The cut graph `Ĝ_n`: the hexacarpet with one side of every triangle
/// insulated so that it falls apart into `2^n` paths from `L0 ∪ L1` to
/// `L4 ∪ L5` (`A` and `B`). Unused vertices stay isolated.
pub fn build_cut_graph(c: &SimplicialComplex, n: usize) -> Result<WeightedGraph> {
    insulate(c, n, &CUT_PATTERN, [4, 5])
}

/// Subgraph of the hexacarpet made of six cut-graph cells of level `n-1`
/// chained from `L0 ∪ L1` to `L3 ∪ L4`; its resistance bounds `R_n` from above.
pub fn build_crossing_graph(c: &SimplicialComplex, n: usize) -> Result<WeightedGraph> {
    insulate(c, n, &CROSSING_PATTERN, [3, 4])
}

/// One path component of a cut graph.
#[derive(Clone, Debug, PartialEq)]
pub struct CutPath {
    /// Vertices from the `A` end to the `B` end.
    pub vertices: Vec<u32>,
    /// Number of triangle-vertices on the path.
    pub length: usize,
    /// Series resistance of the path.
    pub resistance: Rational,
}

/// Decomposes a cut or crossing graph into its `A`–`B` paths, ordered by the
/// distance of the `A` end from `p0`. Fails unless every non-trivial component
/// is a simple path with one end in `A` and the other in `B`.
pub fn cut_paths(c: &SimplicialComplex, n: usize, g: &WeightedGraph) -> Result<Vec<CutPath>> {
    let level = graph_level(c, n)?;
    let (a, b) = g.terminals()?;
    let mut in_a = vec![false; g.vertex_count()];
    let mut in_b = vec![false; g.vertex_count()];
    a.iter().for_each(|&v| in_a[v as usize] = true);
    b.iter().for_each(|&v| in_b[v as usize] = true);

    let mut visited = vec![false; g.vertex_count()];
    let mut paths = Vec::new();
    for start in 0..g.vertex_count() as u32 {
        if visited[start as usize] || g.degree(start) == 0 {
            continue;
        }
        if g.degree(start) > 2 {
            return Err(Error::Structure(format!("vertex {start} has degree {}", g.degree(start))));
        }
        if g.degree(start) != 1 || !in_a[start as usize] {
            continue;
        }
        let mut vertices = vec![start];
        let mut resistance = Rational::zero();
        visited[start as usize] = true;
        let (mut prev, mut cur) = (u32::MAX, start);
        loop {
            let step = g.neighbors(cur).iter().copied().find(|&(w, _)| w != prev);
            let Some((next, e)) = step else { break };
            if visited[next as usize] {
                return Err(Error::Structure(format!("cycle through vertex {next}")));
            }
            if g.degree(next) > 2 {
                return Err(Error::Structure(format!("vertex {next} has degree {}", g.degree(next))));
            }
            visited[next as usize] = true;
            resistance += Rational::from_integer(1) / g.conductance(e as usize);
            vertices.push(next);
            prev = cur;
            cur = next;
        }
        if !in_b[cur as usize] {
            return Err(Error::Structure(format!("path from {start} ends at {cur} outside B")));
        }
        let length = vertices.iter().filter(|&&v| (v as usize) < level.triangle_count()).count();
        paths.push(CutPath { vertices, length, resistance });
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| !visited[v] && g.degree(v as u32) > 0) {
        return Err(Error::Structure(format!("vertex {v} lies on no A-B path")));
    }
    let origin = level.point(0);
    let key = |p: &CutPath| -> Rational {
        let e = p.vertices[0] - level.triangle_count() as u32;
        let [u, v] = level.edge(e);
        Point::dist2(Point::midpoint(level.point(u), level.point(v)), origin)
    };
    paths.sort_by_key(key);
    Ok(paths)
}

/// Classes of the short graph: each edge-vertex is identified with every
/// other edge-vertex lying on the same maximal ancestor edge; triangles stay
/// singletons.
pub fn short_partition(c: &SimplicialComplex, n: usize) -> Result<VertexPartition> {
    let level = graph_level(c, n)?;
    let mut ancestor: Vec<(usize, u32)> = (0..3u32).map(|e| (0, e)).collect();
    for k in 1..=n {
        let l = c.level(k)?;
        ancestor = (0..l.edge_count() as u32)
            .map(|e| match l.edge_parent(e) {
                Some(EdgeParent::Edge(p)) => ancestor[p as usize],
                _ => (k, e),
            })
            .collect();
    }
    let nt = level.triangle_count();
    let keys: Vec<(usize, usize, u32)> = (0..nt)
        .map(|t| (0, 0, t as u32))
        .chain(ancestor.into_iter().map(|(k, e)| (1, k, e)))
        .collect();
    Ok(VertexPartition::from_keys(&keys))
}

/// The short graph `G̃_n`: the hexacarpet with all edge-vertices along each
/// maximal subdivided edge short-circuited together.
pub fn build_short_graph(c: &SimplicialComplex, n: usize) -> Result<WeightedGraph> {
    let h = build_hexacarpet(c, n)?;
    h.quotient(&short_partition(c, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(n: usize) -> SimplicialComplex {
        SimplicialComplex::build(n).unwrap()
    }

    #[test]
    fn skeleton_level_one() {
        let c = complex(1);
        let g = build_skeleton(&c, 1).unwrap();
        assert_eq!(g.edge_count(), 12);
        let spokes = g.conductances().iter().filter(|&&x| x == Rational::from_integer(1)).count();
        assert_eq!(spokes, 6);
        assert_eq!(g.boundary("A").unwrap().len(), 2);
    }

    #[test]
    fn dual_level_one_is_hexagon() {
        let c = complex(1);
        let g = build_dual(&c, 1).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert!((0..6).all(|v| g.degree(v) == 2));
        assert!(g.is_connected());
    }

    #[test]
    fn hexacarpet_level_one() {
        let c = complex(1);
        let g = build_hexacarpet(&c, 1).unwrap();
        assert_eq!(g.vertex_count(), 18);
        assert_eq!(g.edge_count(), 18);
        assert!((0..6).all(|t| g.degree(t) == 3));
        assert_eq!(g.boundary("A").unwrap().len(), 2);
        assert_eq!(g.boundary("B").unwrap().len(), 2);
    }

    #[test]
    fn level_zero_is_rejected() {
        let c = complex(1);
        for f in GraphFamily::ALL {
            assert!(matches!(f.build(&c, 0), Err(Error::DegenerateLevel)));
        }
    }

    #[test]
    fn cut_graph_level_one_paths() {
        let c = complex(1);
        let g = build_cut_graph(&c, 1).unwrap();
        let paths = cut_paths(&c, 1, &g).unwrap();
        let lengths: Vec<_> = paths.iter().map(|p| p.length).collect();
        assert_eq!(lengths, vec![2, 4]);
        assert_eq!(paths[1].resistance, Rational::from_integer(4));
    }

    #[test]
    fn crossing_graph_level_one_paths() {
        let c = complex(1);
        let g = build_crossing_graph(&c, 1).unwrap();
        let lengths: Vec<_> = cut_paths(&c, 1, &g).unwrap().iter().map(|p| p.length).collect();
        assert_eq!(lengths, vec![3, 3]);
    }

    #[test]
    fn short_graph_level_one() {
        let c = complex(1);
        let g = build_short_graph(&c, 1).unwrap();
        // 6 triangles, 3 outer classes, 6 spokes
        assert_eq!(g.vertex_count(), 15);
        assert_eq!(g.boundary("A").unwrap().len(), 1);
        assert_eq!(g.boundary("B").unwrap().len(), 2);
    }

    #[test]
    fn family_names_round_trip() {
        for f in GraphFamily::ALL {
            assert_eq!(f.name().parse::<GraphFamily>().unwrap(), f);
        }
        assert!("carpet".parse::<GraphFamily>().is_err());
    }
}
