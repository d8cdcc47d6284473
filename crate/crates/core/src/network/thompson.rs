//! Numerical check of Thompson's principle against random circulations.

use std::collections::VecDeque;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::{dissipation, divergence, energy, gradient, Flow, ResistanceResult};
use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;

#[derive(Clone, Debug, Serialize)]
pub struct ThompsonReport {
    pub trials: usize,
    /// Trials where `E(I + K) < E(I) - tol`, as `(trial, E(I+K) - E(I))`.
    pub violations: Vec<(usize, f64)>,
    /// Largest `|E(I, K)| / sqrt(E(I) E(K))` seen.
    pub max_cross_term: f64,
    /// `1/E(φ)`, `E(I)`, `1/flux(∇φ)` and `E(I)` over the product of the fluxes of
    /// `I` out of `A` and into `B`.
    pub characterizations: [f64; 4],
    pub characterizations_agree: bool,
}

impl ThompsonReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.characterizations_agree
    }
}

/// Parent `(vertex, edge)` per vertex, depth per vertex, and tree-edge flags.
type Forest = (Vec<Option<(u32, u32)>>, Vec<usize>, Vec<bool>);

/// BFS spanning forest as parent edges; `None` at roots.
fn spanning_forest(g: &WeightedGraph) -> Forest {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; g.edge_count()];
    let mut queue = VecDeque::new();
    for s in 0..n as u32 {
        if seen[s as usize] {
            continue;
        }
        seen[s as usize] = true;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in g.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = Some((v, e));
                    depth[w as usize] = depth[v as usize] + 1;
                    tree_edge[e as usize] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    (parent, depth, tree_edge)
}

/// Adds `amount` of current around the fundamental cycle of the non-tree edge `e`.
fn add_cycle(
    g: &WeightedGraph,
    parent: &[Option<(u32, u32)>],
    depth: &[usize],
    e: usize,
    amount: f64,
    k: &mut Flow,
) {
    let (u, v) = g.edge(e);
    // current u -> v on e, then back from v to u through the tree
    k.0[e] += amount;
    let push = |k: &mut Flow, from: u32, to: u32, edge: u32| {
        k.0[edge as usize] += if from < to { amount } else { -amount };
    };
    let (mut a, mut b) = (v, u);
    // walk a (from v) and b (towards u) up to their common ancestor
    let mut tail = Vec::new();
    while a != b {
        if depth[a as usize] >= depth[b as usize] {
            let (p, edge) = parent[a as usize].expect("non-root");
            push(k, a, p, edge);
            a = p;
        } else {
            let (p, edge) = parent[b as usize].expect("non-root");
            tail.push((p, b, edge));
            b = p;
        }
    }
    for (from, to, edge) in tail {
        push(k, from, to, edge);
    }
}

/// Random divergence-free flows: each is a combination of up to `cycles`
/// fundamental cycles with coefficients in `[-1, 1]`.
pub fn cycle_flows(g: &WeightedGraph, count: usize, cycles: usize, seed: u64) -> Vec<Flow> {
    let (parent, depth, tree_edge) = spanning_forest(g);
    let chords: Vec<usize> = (0..g.edge_count()).filter(|&e| !tree_edge[e]).collect();
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut k = Flow::zeros(g.edge_count());
            if !chords.is_empty() {
                for _ in 0..cycles {
                    let e = chords[rng.gen_range(0..chords.len())];
                    add_cycle(g, &parent, &depth, e, rng.gen_range(-1.0..=1.0), &mut k);
                }
            }
            k
        })
        .collect()
}

/// Checks that `I = result.flow` minimizes dissipation among unit flows by
/// perturbing it with `trials` random circulations, and that the usual
/// expressions for the resistance agree to `tol` (relative).
pub fn verify_thompson(
    g: &WeightedGraph,
    a: &[u32],
    b: &[u32],
    result: &ResistanceResult,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ThompsonReport> {
    let r = result.value().ok_or(Error::Disconnected)?;
    let phi = &result.potential;
    let i = &result.flow;
    let e_i = dissipation(g, i, i)?;
    let mut violations = Vec::new();
    let mut max_cross = 0.0f64;
    for (t, k) in cycle_flows(g, trials, 4, seed).into_iter().enumerate() {
        let div = divergence(g, &k)?;
        debug_assert!(div.0.iter().all(|d| d.abs() < 1e-9));
        let e_k = dissipation(g, &k, &k)?;
        let perturbed = i.add(&k)?;
        let gap = dissipation(g, &perturbed, &perturbed)? - e_i;
        if gap < -tol * e_i {
            violations.push((t, gap));
        }
        if e_k > 0.0 {
            let cross = dissipation(g, i, &k)?.abs() / (e_i * e_k).sqrt();
            max_cross = max_cross.max(cross);
        }
    }
    let over = |set: &[u32], j: &Flow| -> Result<f64> {
        let div = divergence(g, j)?;
        Ok(set.iter().map(|&p| div.0[p as usize]).sum())
    };
    let flux_grad = over(a, &gradient(g, phi)?)?;
    let flux_a = over(a, i)?;
    let flux_b = -over(b, i)?;
    let characterizations =
        [1.0 / energy(g, phi, phi)?, e_i, 1.0 / flux_grad, e_i / (flux_a * flux_b)];
    let characterizations_agree = characterizations.iter().all(|c| (c - r).abs() <= tol * r);
    Ok(ThompsonReport {
        trials,
        violations,
        max_cross_term: max_cross,
        characterizations,
        characterizations_agree,
    })
}
