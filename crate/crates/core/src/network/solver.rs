//! Harmonic potentials and effective resistance.
//!
//! The Dirichlet problem `φ = 0` on `A`, `φ = 1` on `B`, `Δφ = 0` elsewhere is
//! reduced to the interior vertices and solved with Jacobi-preconditioned
//! conjugate gradients. Components that do not meet both `A` and `B` carry no
//! current; their potential is set to the boundary value they see (or 0).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{energy, gradient, Flow, Potential};
use crate::error::{Error, Result};
use crate::graphs::{check_terminals, WeightedGraph};

pub const ORACLE_VERTEX_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Relative residual `‖b - Ax‖ / ‖b‖` at which CG stops.
    pub tol: f64,
    /// Iteration cap; `None` means `50·√(vertex count)`.
    pub max_iter: Option<usize>,
    /// Return [`Resistance::Disconnected`] instead of an error.
    pub allow_disconnected: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: None, allow_disconnected: false }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or_else(|| ((50.0 * (n as f64).sqrt()).ceil() as usize).max(100))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Resistance {
    Finite(f64),
    Disconnected,
}

impl Resistance {
    pub fn value(self) -> Option<f64> {
        match self {
            Resistance::Finite(r) => Some(r),
            Resistance::Disconnected => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResistanceResult {
    pub resistance: Resistance,
    /// Harmonic potential, 0 on `A` and 1 on `B`.
    pub potential: Potential,
    /// Unit flow `R ∇φ` (zero when disconnected).
    pub flow: Flow,
    pub iterations: usize,
    pub residual: f64,
}

impl ResistanceResult {
    pub fn value(&self) -> Option<f64> {
        self.resistance.value()
    }
}

struct Reduction {
    /// Boundary or fixed value per vertex (meaningful where `index` is `None`).
    values: Vec<f64>,
    /// Position of each free vertex in the reduced system.
    index: Vec<Option<usize>>,
    free: Vec<u32>,
    connected: bool,
}

fn reduce(g: &WeightedGraph, a: &[u32], b: &[u32]) -> Result<Reduction> {
    let n = g.vertex_count();
    check_terminals(n, a, b)?;
    let (comp, count) = g.components();
    let mut touches_a = vec![false; count];
    let mut touches_b = vec![false; count];
    let mut fixed = vec![None; n];
    for &v in a {
        touches_a[comp[v as usize] as usize] = true;
        fixed[v as usize] = Some(0.0);
    }
    for &v in b {
        touches_b[comp[v as usize] as usize] = true;
        fixed[v as usize] = Some(1.0);
    }
    let mut values = vec![0.0; n];
    let mut index = vec![None; n];
    let mut free = Vec::new();
    let mut connected = false;
    for v in 0..n {
        let c = comp[v] as usize;
        if let Some(x) = fixed[v] {
            values[v] = x;
        } else if touches_a[c] && touches_b[c] {
            index[v] = Some(free.len());
            free.push(v as u32);
        } else if touches_b[c] {
            values[v] = 1.0;
        }
        connected |= touches_a[c] && touches_b[c];
    }
    Ok(Reduction { values, index, free, connected })
}

/// Compressed rows of the grounded Laplacian on the free vertices.
struct ReducedSystem {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
    rhs: Vec<f64>,
}

impl ReducedSystem {
    fn new(g: &WeightedGraph, red: &Reduction) -> Self {
        let c = g.conductances_f64();
        let m = red.free.len();
        let mut offsets = Vec::with_capacity(m + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut diag = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        offsets.push(0);
        for (i, &v) in red.free.iter().enumerate() {
            for &(w, e) in g.neighbors(v) {
                let cw = c[e as usize];
                diag[i] += cw;
                match red.index[w as usize] {
                    Some(j) => {
                        cols.push(j);
                        vals.push(-cw);
                    }
                    None => rhs[i] += cw * red.values[w as usize],
                }
            }
            offsets.push(cols.len());
        }
        Self { offsets, cols, vals, diag, rhs }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.diag.len() {
            let mut s = self.diag[i] * x[i];
            for k in self.offsets[i]..self.offsets[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            y[i] = s;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned CG; returns `(x, iterations, relative residual)`.
fn pcg(sys: &ReducedSystem, tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize, f64)> {
    let m = sys.rhs.len();
    let mut x = vec![0.0; m];
    let b_norm = dot(&sys.rhs, &sys.rhs).sqrt();
    if m == 0 || b_norm == 0.0 {
        return Ok((x, 0, 0.0));
    }
    let inv: Vec<f64> = sys.diag.iter().map(|d| 1.0 / d).collect();
    let mut r = sys.rhs.clone();
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; m];
    let mut rz = dot(&r, &z);
    let mut residual = 1.0;
    for it in 1..=max_iter {
        sys.apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        residual = dot(&r, &r).sqrt() / b_norm;
        if residual <= tol {
            // confirm against the true residual to guard against drift
            sys.apply(&x, &mut ap);
            let true_res: f64 =
                sys.rhs.iter().zip(&ap).map(|(b, y)| (b - y) * (b - y)).sum::<f64>().sqrt() / b_norm;
            if true_res <= tol {
                return Ok((x, it, true_res));
            }
            for i in 0..m {
                r[i] = sys.rhs[i] - ap[i];
            }
        }
        for i in 0..m {
            z[i] = r[i] * inv[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual })
}

fn assemble(red: &Reduction, x: &[f64]) -> Potential {
    let mut phi = red.values.clone();
    for (i, &v) in red.free.iter().enumerate() {
        phi[v as usize] = x[i];
    }
    Potential(phi)
}

/// Effective resistance between `A` and `B` with its potential and unit flow.
pub fn effective_resistance(
    g: &WeightedGraph,
    a: &[u32],
    b: &[u32],
    opts: &SolverOptions,
) -> Result<ResistanceResult> {
    let red = reduce(g, a, b)?;
    if !red.connected {
        if !opts.allow_disconnected {
            return Err(Error::Disconnected);
        }
        return Ok(ResistanceResult {
            resistance: Resistance::Disconnected,
            potential: Potential(red.values),
            flow: Flow::zeros(g.edge_count()),
            iterations: 0,
            residual: 0.0,
        });
    }
    let sys = ReducedSystem::new(g, &red);
    let (x, iterations, residual) = pcg(&sys, opts.tol, opts.iteration_cap(g.vertex_count()))?;
    let phi = assemble(&red, &x);
    let e = energy(g, &phi, &phi)?;
    let r = 1.0 / e;
    let flow = gradient(g, &phi)?.scaled(r);
    Ok(ResistanceResult { resistance: Resistance::Finite(r), potential: phi, flow, iterations, residual })
}

/// Resistance between the graph's own `A` and `B` sets.
pub fn resistance(g: &WeightedGraph, opts: &SolverOptions) -> Result<ResistanceResult> {
    let (a, b) = g.terminals()?;
    effective_resistance(g, a, b, opts)
}

/// Reference resistance from a dense Cholesky factorization.
pub fn oracle_resistance(g: &WeightedGraph, a: &[u32], b: &[u32]) -> Result<f64> {
    if g.vertex_count() > ORACLE_VERTEX_CAP {
        return Err(Error::OracleTooLarge { vertices: g.vertex_count(), cap: ORACLE_VERTEX_CAP });
    }
    let red = reduce(g, a, b)?;
    if !red.connected {
        return Err(Error::Disconnected);
    }
    let sys = ReducedSystem::new(g, &red);
    let m = red.free.len();
    let mut dense = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        dense[(i, i)] = sys.diag[i];
        for k in sys.offsets[i]..sys.offsets[i + 1] {
            dense[(i, sys.cols[k])] += sys.vals[k];
        }
    }
    let x = if m == 0 {
        DVector::zeros(0)
    } else {
        let chol = dense.cholesky().ok_or(Error::Factorization)?;
        chol.solve(&DVector::from_vec(sys.rhs.clone()))
    };
    let phi = assemble(&red, x.as_slice());
    Ok(1.0 / energy(g, &phi, &phi)?)
}
