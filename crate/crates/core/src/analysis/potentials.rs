//! Restrictions of the skeleton's harmonic potential to the level-1 cells.

use serde::Serialize;

use super::finite;
use crate::complex::{HexSymmetry, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graphs::{build_skeleton, WeightedGraph};
use crate::network::{effective_resistance, energy, Potential, SolverOptions};

#[derive(Clone, Debug, Serialize)]
pub struct PotentialDecomposition {
    pub n: usize,
    /// `φ ∘ F_2`: the cell containing `A^T`.
    #[serde(skip)]
    pub u: Potential,
    /// `φ ∘ F_3`.
    #[serde(skip)]
    pub v: Potential,
    /// `φ ∘ F_1`.
    #[serde(skip)]
    pub w: Potential,
    pub energy_u: f64,
    pub energy_v: f64,
    pub energy_w: f64,
    /// `E(u, v - w)` on `G_{n-1}^T`.
    pub cross: f64,
    pub r_t: f64,
    /// `|1/R_n^T - 2E(u) - 4E(v)|`.
    pub identity_gap: f64,
    /// `max |w - v∘σ|`.
    pub flip_gap: f64,
    /// `F_2 ∘ σ = τ ∘ F_2` as vertex maps, so `u∘σ = u`.
    pub u_symmetric: bool,
    /// `σ` permutes the edges of `G_{n-1}^T` preserving conductances.
    pub flip_is_isometry: bool,
}

fn compose(f: &Potential, map: &[u32]) -> Potential {
    Potential(map.iter().map(|&x| f.0[x as usize]).collect())
}

fn is_isometry(g: &WeightedGraph, perm: &[u32]) -> bool {
    g.edges().iter().enumerate().all(|(k, &(a, b))| {
        g.find_edge(perm[a as usize], perm[b as usize])
            .is_some_and(|k2| g.conductance(k2) == g.conductance(k))
    })
}

/// Splits the harmonic potential `φ` of `G_n^T` (0 on `A^T = L2`, 1 on
/// `B^T = L5`) into `u`, `v`, `w` on `G_{n-1}^T` and checks the orthogonality
/// `E(u, v - w) = 0` and the energy identity `1/R_n^T = 2E(u) + 4E(v)`.
pub fn potential_decomposition(
    c: &SimplicialComplex,
    n: usize,
    opts: &SolverOptions,
) -> Result<PotentialDecomposition> {
    if n < 2 {
        return Err(Error::DegenerateLevel);
    }
    let g = build_skeleton(c, n)?;
    let coarse = build_skeleton(c, n - 1)?;
    let res = effective_resistance(&g, g.boundary("A")?, g.boundary("B")?, opts)?;
    let r_t = finite(&res)?;
    let phi = &res.potential;

    let u = compose(phi, &c.contraction_map(2, n - 1)?);
    let v = compose(phi, &c.contraction_map(3, n - 1)?);
    let w = compose(phi, &c.contraction_map(1, n - 1)?);

    let sigma = c.symmetry_map(HexSymmetry::FLIP, n - 1)?;
    let flip_gap = compose(&v, &sigma)
        .0
        .iter()
        .zip(&w.0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let tau = c.symmetry_map(HexSymmetry::ANTI_DIAGONAL, n)?;
    let f2 = c.contraction_map(2, n - 1)?;
    let u_symmetric = (0..sigma.len()).all(|x| f2[sigma[x] as usize] == tau[f2[x] as usize]);

    let diff = Potential(v.0.iter().zip(&w.0).map(|(a, b)| a - b).collect());
    let energy_u = energy(&coarse, &u, &u)?;
    let energy_v = energy(&coarse, &v, &v)?;
    let energy_w = energy(&coarse, &w, &w)?;
    let cross = energy(&coarse, &u, &diff)?;
    let identity_gap = (1.0 / r_t - 2.0 * energy_u - 4.0 * energy_v).abs();
    Ok(PotentialDecomposition {
        n,
        u,
        v,
        w,
        energy_u,
        energy_v,
        energy_w,
        cross,
        r_t,
        identity_gap,
        flip_gap,
        u_symmetric,
        flip_is_isometry: is_isometry(&coarse, &sigma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_two_decomposition() {
        let c = SimplicialComplex::build(2).unwrap();
        let d = potential_decomposition(&c, 2, &SolverOptions::with_tol(1e-13)).unwrap();
        assert!(d.u_symmetric);
        assert!(d.flip_is_isometry);
        assert!(d.flip_gap < 1e-10);
        assert!(d.cross.abs() < 1e-10);
        assert!(d.identity_gap < 1e-10);
        assert!((d.energy_v - d.energy_w).abs() < 1e-10);
    }

    #[test]
    fn level_one_is_rejected() {
        let c = SimplicialComplex::build(1).unwrap();
        assert!(potential_decomposition(&c, 1, &SolverOptions::default()).is_err());
    }
}
