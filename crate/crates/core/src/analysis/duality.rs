use serde::Serialize;

use super::{finite, hexacarpet_resistance, skeleton_resistance};
use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::network::SolverOptions;

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub n: usize,
    pub r: f64,
    pub r_t: f64,
    pub product: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Solves the hexacarpet and the skeleton at level `n` independently and
/// checks `|R_n R_n^T - 1| <= tol`.
pub fn verify_duality(
    c: &SimplicialComplex,
    n: usize,
    opts: &SolverOptions,
    tol: f64,
) -> Result<DualityReport> {
    let r = finite(&hexacarpet_resistance(c, n, opts)?)?;
    let r_t = finite(&skeleton_resistance(c, n, opts)?)?;
    let product = r * r_t;
    Ok(DualityReport { n, r, r_t, product, tol, passed: (product - 1.0).abs() <= tol })
}
