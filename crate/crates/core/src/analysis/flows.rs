//! Symmetrized flows on `G_n^H` and the composite flow on `G_{m+n}^H`.

use serde::Serialize;

use crate::complex::{HexSymmetry, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graphs::{build_hexacarpet, WeightedGraph};
use crate::network::{dissipation, flux, max_interior_divergence, Flow};

const FLOW_TOL: f64 = 1e-9;

/// For every edge of `G_dom^H`, the index of its image edge in `G_tgt^H` under
/// the simplicial vertex map `map: T_dom → T_tgt`.
///
/// Hexacarpet edges are ordered by triangle, then by side, so the edge
/// `(t, e)` sits at `3t + j` where `e` is the `j`-th side of `t`.
pub fn hexacarpet_flow_map(
    c: &SimplicialComplex,
    dom: usize,
    tgt: usize,
    map: &[u32],
) -> Result<Vec<u32>> {
    let from = c.level(dom)?;
    let to = c.level(tgt)?;
    let mut out = Vec::with_capacity(3 * from.triangle_count());
    for t in 0..from.triangle_count() as u32 {
        let [a, b, cc] = from.triangle(t);
        let image = to
            .find_triangle(map[a as usize], map[b as usize], map[cc as usize])
            .ok_or(Error::NotSimplicial { level: dom, dim: "triangle", index: t as usize })?;
        let sides = to.triangle_sides(image);
        for e in from.triangle_sides(t) {
            let [u, v] = from.edge(e);
            let e2 = to
                .find_edge(map[u as usize], map[v as usize])
                .ok_or(Error::NotSimplicial { level: dom, dim: "edge", index: e as usize })?;
            let j = sides.iter().position(|&s| s == e2).expect("image edge is a side");
            out.push(3 * image + j as u32);
        }
    }
    Ok(out)
}

/// The minimizing flow `I` and its two symmetrized rearrangements.
#[derive(Clone, Debug)]
pub struct FlowTriple {
    pub n: usize,
    /// Unit flow from `L0 ∪ L1` to `L3 ∪ L4`.
    pub i: Flow,
    /// Unit flow from `L0 ∪ L1` to `L2 ∪ L3`.
    pub h01: Flow,
    /// Unit flow from `L0 ∪ L1` to `L4 ∪ L5`.
    pub h02: Flow,
    /// Dissipation of `I`, `H01`, `H02`.
    pub energies: [f64; 3],
    pub fluxes: [f64; 3],
}

fn sides_union(g: &WeightedGraph, s: [usize; 2]) -> Result<Vec<u32>> {
    let mut v = g.boundary(&format!("L{}", s[0]))?.to_vec();
    v.extend_from_slice(g.boundary(&format!("L{}", s[1]))?);
    Ok(v)
}

/// Builds `H02` (equal to `I` on the cells `F_0, F_1, F_2` and to `I` composed
/// with the vertical reflection on the others) and `H01 = H02 ∘ μ`, where `μ`
/// is the reflection through `p0'`. Both are checked to be unit flows.
pub fn build_symmetrized_flows(c: &SimplicialComplex, n: usize, i: &Flow) -> Result<FlowTriple> {
    let g = build_hexacarpet(c, n)?;
    if i.len() != g.edge_count() {
        return Err(Error::SizeMismatch { expected: g.edge_count(), got: i.len() });
    }
    let cells = c.level1_cell_of_triangles(n)?;
    let vertical = hexacarpet_flow_map(c, n, n, &c.symmetry_map(HexSymmetry::VERTICAL, n)?)?;
    let diagonal = hexacarpet_flow_map(c, n, n, &c.symmetry_map(HexSymmetry::DIAGONAL, n)?)?;
    let h02 = Flow(
        (0..g.edge_count())
            .map(|k| if cells[k / 3] <= 2 { i.0[k] } else { i.0[vertical[k] as usize] })
            .collect(),
    );
    let h01 = Flow((0..g.edge_count()).map(|k| h02.0[diagonal[k] as usize]).collect());

    let a = sides_union(&g, [0, 1])?;
    let fluxes = [
        flux(&g, &a, &sides_union(&g, [3, 4])?, i, FLOW_TOL)?,
        flux(&g, &a, &sides_union(&g, [2, 3])?, &h01, FLOW_TOL)?,
        flux(&g, &a, &sides_union(&g, [4, 5])?, &h02, FLOW_TOL)?,
    ];
    let energies = [
        dissipation(&g, i, i)?,
        dissipation(&g, &h01, &h01)?,
        dissipation(&g, &h02, &h02)?,
    ];
    Ok(FlowTriple { n, i: i.clone(), h01, h02, energies, fluxes })
}

/// Currents of `I^m` on the three hexacarpet edges at one triangle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YCell {
    /// Edge ids `(k0, k1, k2)`: `k0` carries the largest current.
    pub sides: [u32; 3],
    /// Current from the triangle into each side; `a[0]` opposes `a[1]`, `a[2]`.
    pub a: [f64; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct YDecomposition {
    pub m: usize,
    pub cells: Vec<YCell>,
}

impl YDecomposition {
    /// `½ Σ (a0² + a1² + a2²)`, the dissipation of `I^m`.
    pub fn energy(&self) -> f64 {
        0.5 * self.cells.iter().map(|y| y.a.iter().map(|x| x * x).sum::<f64>()).sum::<f64>()
    }

    /// Cells where `a1 a2 < 0` beyond `tol`.
    pub fn sign_violations(&self, tol: f64) -> usize {
        self.cells.iter().filter(|y| y.a[1] * y.a[2] < -tol).count()
    }
}

/// Splits `I^m` into Y-networks. Ties for the largest current go to the side
/// with the smallest edge id.
pub fn y_decomposition(c: &SimplicialComplex, m: usize, i: &Flow) -> Result<YDecomposition> {
    let level = c.level(m)?;
    if i.len() != 3 * level.triangle_count() {
        return Err(Error::SizeMismatch { expected: 3 * level.triangle_count(), got: i.len() });
    }
    let cells = (0..level.triangle_count())
        .map(|x| {
            let sides = level.triangle_sides(x as u32);
            let o = [i.0[3 * x], i.0[3 * x + 1], i.0[3 * x + 2]];
            let mut k0 = 0;
            for j in 1..3 {
                if o[j].abs() > o[k0].abs() {
                    k0 = j;
                }
            }
            let rest: Vec<usize> = (0..3).filter(|&j| j != k0).collect();
            let order = [k0, rest[0], rest[1]];
            YCell { sides: order.map(|j| sides[j]), a: order.map(|j| o[j]) }
        })
        .collect();
    Ok(YDecomposition { m, cells })
}

#[derive(Clone, Debug)]
pub struct ComposedFlow {
    pub m: usize,
    pub n: usize,
    pub flow: Flow,
    pub energy: f64,
    pub flux: f64,
    pub max_interior_divergence: f64,
}

/// Assembles `J` on `G_{m+n}^H`: inside the cell of each level-`m` triangle `x`,
/// `J` is `α H01 + β H02` transported so that the source side of the cell is
/// the side carrying `a0(x)`, with `α = -a1(x)` and `β = -a2(x)`.
pub fn compose_flow(
    c: &SimplicialComplex,
    m: usize,
    n: usize,
    triple: &FlowTriple,
    ydec: &YDecomposition,
) -> Result<ComposedFlow> {
    let lm = c.level(m)?;
    let g = build_hexacarpet(c, m + n)?;
    let mut j = Flow::zeros(g.edge_count());
    for y in &ydec.cells {
        let [k0, k1, k2] = y.sides;
        let shared = |e, f| {
            lm.shared_vertex(e, f).ok_or_else(|| Error::Structure("Y sides do not meet".into()))
        };
        let corners = [shared(k0, k2)?, shared(k0, k1)?, shared(k1, k2)?];
        let map = c.cell_map(m, corners, n)?;
        let edges = hexacarpet_flow_map(c, n, m + n, &map)?;
        let (alpha, beta) = (-y.a[1], -y.a[2]);
        for (k, &target) in edges.iter().enumerate() {
            j.0[target as usize] += alpha * triple.h01.0[k] + beta * triple.h02.0[k];
        }
    }
    let (a, b) = g.terminals()?;
    let (worst_vertex, worst) = max_interior_divergence(&g, a, b, &j)?;
    let total = flux(&g, a, b, &j, FLOW_TOL).map_err(|e| match e {
        Error::NotAFlow { .. } => Error::SeamMismatch { vertex: worst_vertex, divergence: worst },
        other => other,
    })?;
    let energy = dissipation(&g, &j, &j)?;
    Ok(ComposedFlow { m, n, flow: j, energy, flux: total, max_interior_divergence: worst })
}
