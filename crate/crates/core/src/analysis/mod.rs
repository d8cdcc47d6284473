//! Resistance identities, flow and potential constructions, bounds, and
//! scaling estimates for the hexacarpet and skeleton families.

mod bounds;
mod duality;
mod flows;
mod potentials;
mod scaling;

use rayon::prelude::*;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graphs::{build_hexacarpet, build_skeleton};
use crate::network::{resistance, ResistanceResult, SolverOptions};

pub use bounds::{
    cut_bound, short_bound, verify_multiplicative, CutReport, MultiplicativeReport, ShortLevel, ShortReport,
};
pub use duality::{verify_duality, DualityReport};
pub use flows::{
    build_symmetrized_flows, compose_flow, hexacarpet_flow_map, y_decomposition, ComposedFlow,
    FlowTriple, YCell, YDecomposition,
};
pub use potentials::{potential_decomposition, PotentialDecomposition};
pub use scaling::{estimate_rho, fit_ratio, spectral_dimension, LevelRow, ScalingReport, Verdict};

/// Solve on the hexacarpet `G_n^H` between `A^H` and `B^H`.
pub fn hexacarpet_resistance(
    c: &SimplicialComplex,
    n: usize,
    opts: &SolverOptions,
) -> Result<ResistanceResult> {
    resistance(&build_hexacarpet(c, n)?, opts)
}

/// Solve on the skeleton `G_n^T` between `A^T` and `B^T`.
pub fn skeleton_resistance(
    c: &SimplicialComplex,
    n: usize,
    opts: &SolverOptions,
) -> Result<ResistanceResult> {
    resistance(&build_skeleton(c, n)?, opts)
}

fn finite(r: &ResistanceResult) -> Result<f64> {
    r.value().ok_or(Error::Disconnected)
}

/// `R_n` and `R_n^T` for `n = 1..=n_max`, solved level by level in parallel.
#[derive(Clone, Debug, PartialEq)]
pub struct ResistanceTable {
    pub hexacarpet: Vec<f64>,
    pub skeleton: Vec<f64>,
}

impl ResistanceTable {
    pub fn compute(c: &SimplicialComplex, n_max: usize, opts: &SolverOptions) -> Result<Self> {
        let jobs: Vec<(usize, bool)> =
            (1..=n_max).flat_map(|n| [(n, true), (n, false)]).collect();
        let values: Vec<f64> = jobs
            .par_iter()
            .map(|&(n, hex)| {
                let r = if hex {
                    hexacarpet_resistance(c, n, opts)?
                } else {
                    skeleton_resistance(c, n, opts)?
                };
                finite(&r)
            })
            .collect::<Result<_>>()?;
        let hexacarpet = values.iter().step_by(2).copied().collect();
        let skeleton = values.iter().skip(1).step_by(2).copied().collect();
        Ok(Self { hexacarpet, skeleton })
    }

    pub fn max_level(&self) -> usize {
        self.hexacarpet.len()
    }

    /// `R_n` (1-based level).
    pub fn r(&self, n: usize) -> f64 {
        self.hexacarpet[n - 1]
    }

    /// `R_n^T` (1-based level).
    pub fn r_t(&self, n: usize) -> f64 {
        self.skeleton[n - 1]
    }
}
