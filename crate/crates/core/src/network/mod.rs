//! Discrete calculus on weighted graphs: energies, gradients, divergence,
//! flux, and effective resistance.
//!
//! A [`Flow`] is stored once per edge `(u, v)` with `u < v`; its value is
//! `J(u, v)` and `J(v, u) = -J(u, v)`. Sums over edges visit each unordered
//! edge once, so no factor `1/2` appears.

mod solver;
mod thompson;

use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;

pub use solver::{
    effective_resistance, oracle_resistance, resistance, Resistance, ResistanceResult,
    SolverOptions, ORACLE_VERTEX_CAP,
};
pub use thompson::{cycle_flows, verify_thompson, ThompsonReport};

/// A real function on the vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential(pub Vec<f64>);

/// An antisymmetric function on oriented edges, one value per graph edge.
#[derive(Clone, Debug, PartialEq)]
pub struct Flow(pub Vec<f64>);

impl Potential {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl Flow {
    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `J(u, v)` for an edge given in either orientation.
    pub fn oriented(&self, g: &WeightedGraph, u: u32, v: u32) -> Option<f64> {
        let k = g.find_edge(u, v)?;
        Some(if u < v { self.0[k] } else { -self.0[k] })
    }

    pub fn scaled(&self, s: f64) -> Flow {
        Flow(self.0.iter().map(|x| s * x).collect())
    }

    pub fn add(&self, other: &Flow) -> Result<Flow> {
        check_len(self.len(), other.len())?;
        Ok(Flow(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::SizeMismatch { expected, got })
    }
}

/// `E(f, h) = Σ c(u,v) (f(u) - f(v)) (h(u) - h(v))` over unordered edges.
pub fn energy(g: &WeightedGraph, f: &Potential, h: &Potential) -> Result<f64> {
    check_len(g.vertex_count(), f.len())?;
    check_len(g.vertex_count(), h.len())?;
    let mut sum = 0.0;
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let (u, v) = (u as usize, v as usize);
        sum += g.conductance_f64(k) * (f.0[u] - f.0[v]) * (h.0[u] - h.0[v]);
    }
    Ok(sum)
}

/// `∇f(u, v) = c(u,v) (f(u) - f(v))`.
pub fn gradient(g: &WeightedGraph, f: &Potential) -> Result<Flow> {
    check_len(g.vertex_count(), f.len())?;
    Ok(Flow(
        g.edges()
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| g.conductance_f64(k) * (f.0[u as usize] - f.0[v as usize]))
            .collect(),
    ))
}

/// `div J(p) = -Σ_q J(p, q)`.
pub fn divergence(g: &WeightedGraph, j: &Flow) -> Result<Potential> {
    check_len(g.edge_count(), j.len())?;
    let mut div = vec![0.0; g.vertex_count()];
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        div[u as usize] -= j.0[k];
        div[v as usize] += j.0[k];
    }
    Ok(Potential(div))
}

/// `Δf = div ∇f`.
pub fn laplacian(g: &WeightedGraph, f: &Potential) -> Result<Potential> {
    divergence(g, &gradient(g, f)?)
}

/// Energy of flows, `Σ r(u,v) J(u,v) K(u,v)` with `r = 1/c`.
pub fn dissipation(g: &WeightedGraph, j: &Flow, k: &Flow) -> Result<f64> {
    check_len(g.edge_count(), j.len())?;
    check_len(g.edge_count(), k.len())?;
    let mut sum = 0.0;
    for e in 0..g.edge_count() {
        sum += j.0[e] * k.0[e] / g.conductance_f64(e);
    }
    Ok(sum)
}

/// `⟨f, h⟩ = Σ_p f(p) h(p)`.
pub fn inner(f: &Potential, h: &Potential) -> Result<f64> {
    check_len(f.len(), h.len())?;
    Ok(f.0.iter().zip(&h.0).map(|(a, b)| a * b).sum())
}

/// Largest `|div J|` outside `A ∪ B`, with its vertex.
pub fn max_interior_divergence(
    g: &WeightedGraph,
    a: &[u32],
    b: &[u32],
    j: &Flow,
) -> Result<(usize, f64)> {
    let div = divergence(g, j)?;
    let mut terminal = vec![false; g.vertex_count()];
    a.iter().chain(b).for_each(|&v| terminal[v as usize] = true);
    let mut worst = (0, 0.0);
    for (p, d) in div.0.iter().enumerate() {
        if !terminal[p] && d.abs() > worst.1 {
            worst = (p, d.abs());
        }
    }
    Ok(worst)
}

/// `Σ_{p∈A} div J(p)` for a flow from `A` to `B`.
///
/// Fails with [`Error::NotAFlow`] if the divergence exceeds `tol` anywhere off
/// `A ∪ B`.
pub fn flux(g: &WeightedGraph, a: &[u32], b: &[u32], j: &Flow, tol: f64) -> Result<f64> {
    let div = divergence(g, j)?;
    let mut terminal = vec![false; g.vertex_count()];
    a.iter().chain(b).for_each(|&v| terminal[v as usize] = true);
    let mut count = 0;
    let mut worst = (0, 0.0f64);
    for (p, &d) in div.0.iter().enumerate() {
        if !terminal[p] && d.abs() > tol {
            count += 1;
            if d.abs() > worst.1.abs() {
                worst = (p, d);
            }
        }
    }
    if count > 0 {
        return Err(Error::NotAFlow { count, worst_vertex: worst.0, worst_value: worst.1 });
    }
    Ok(a.iter().map(|&p| div.0[p as usize]).sum())
}

/// `-Σ_{p∈B} div J(p)`; equal to [`flux`] for a flow.
pub fn flux_into(g: &WeightedGraph, b: &[u32], j: &Flow) -> Result<f64> {
    let div = divergence(g, j)?;
    Ok(-b.iter().map(|&p| div.0[p as usize]).sum::<f64>())
}
