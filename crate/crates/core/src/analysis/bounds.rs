//! Multiplicative inequalities and the cut / short-circuit bounds.

use serde::Serialize;

use super::{finite, ResistanceTable, Verdict};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graphs::{build_crossing_graph, build_cut_graph, build_short_graph, cut_paths, CutPath};
use crate::network::{resistance, SolverOptions};

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativeReport {
    pub m: usize,
    pub n: usize,
    pub r_m: f64,
    pub r_n: f64,
    pub r_mn: f64,
    pub r_t_m: f64,
    pub r_t_n: f64,
    pub r_t_mn: f64,
    pub verdicts: Vec<Verdict>,
}

impl MultiplicativeReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Checks, with additive slack:
/// `R_{m+n} <= 4/3 R_m R_n`, `R_{m+n} >= R_m R_n / 2`,
/// `R^T_{m+n} >= 3/4 R^T_m R^T_n`, `R^T_{m+n} <= 2 R^T_m R^T_n` and
/// `R^T_{m+n} >= R^T_m R^T_n / 2`.
pub fn verify_multiplicative(
    table: &ResistanceTable,
    m: usize,
    n: usize,
    slack: f64,
) -> Result<MultiplicativeReport> {
    if m == 0 || n == 0 {
        return Err(Error::DegenerateLevel);
    }
    if m + n > table.max_level() {
        return Err(Error::MissingLevel { level: m + n, built: table.max_level() });
    }
    let (r_m, r_n, r_mn) = (table.r(m), table.r(n), table.r(m + n));
    let (t_m, t_n, t_mn) = (table.r_t(m), table.r_t(n), table.r_t(m + n));
    let verdicts = vec![
        Verdict::at_least("R_{m+n} <= 4/3 R_m R_n", 4.0 / 3.0 * r_m * r_n - r_mn, slack),
        Verdict::at_least("R_{m+n} >= R_m R_n / 2", r_mn - r_m * r_n / 2.0, slack),
        Verdict::at_least("R^T_{m+n} >= 3/4 R^T_m R^T_n", t_mn - 0.75 * t_m * t_n, slack),
        Verdict::at_least("R^T_{m+n} <= 2 R^T_m R^T_n", 2.0 * t_m * t_n - t_mn, slack),
        Verdict::at_least("R^T_{m+n} >= R^T_m R^T_n / 2", t_mn - t_m * t_n / 2.0, slack),
    ];
    Ok(MultiplicativeReport {
        m,
        n,
        r_m,
        r_n,
        r_mn,
        r_t_m: t_m,
        r_t_n: t_n,
        r_t_mn: t_mn,
        verdicts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CutReport {
    pub n: usize,
    /// Triangles per path, ordered by the distance of the path's `A` end from `p0`.
    pub lengths: Vec<usize>,
    pub path_count: usize,
    pub total_length: usize,
    /// `(Σ 1/l_j)^{-1}`.
    pub r_hat: f64,
    /// Solver resistance of the cut graph.
    pub r_hat_solver: f64,
    /// `Σ l_j / (path count)²`, the Jensen upper bound for `r_hat`.
    pub jensen_bound: f64,
    /// Resistance of the six-cell crossing subgraph between `A^H` and `B^H`.
    pub r_glue: f64,
    pub r_n: f64,
    pub r_prev: Option<f64>,
    pub verdicts: Vec<Verdict>,
}

impl CutReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

fn parallel_paths(paths: &[CutPath]) -> f64 {
    1.0 / paths.iter().map(|p| 1.0 / p.length as f64).sum::<f64>()
}

/// Cut-graph bound at level `n`, given `R_n` and optionally `R_{n-1}`.
///
/// Fails with [`Error::Structure`] if `Ĝ_n` is not `2^n` disjoint paths.
pub fn cut_bound(
    c: &SimplicialComplex,
    n: usize,
    r_n: f64,
    r_prev: Option<f64>,
    opts: &SolverOptions,
) -> Result<CutReport> {
    let g = build_cut_graph(c, n)?;
    let paths = cut_paths(c, n, &g)?;
    if paths.len() != 1 << n {
        return Err(Error::Structure(format!("{} cut paths at level {n}, expected {}", paths.len(), 1 << n)));
    }
    let lengths: Vec<usize> = paths.iter().map(|p| p.length).collect();
    let total_length: usize = lengths.iter().sum();
    let r_hat = parallel_paths(&paths);
    let loose = SolverOptions { allow_disconnected: true, ..*opts };
    let r_hat_solver = finite(&resistance(&g, &loose)?)?;
    let jensen_bound = total_length as f64 / (paths.len() * paths.len()) as f64;
    let glue = build_crossing_graph(c, n)?;
    let r_glue = parallel_paths(&cut_paths(c, n, &glue)?);

    let power = 1.5f64.powi(n as i32);
    let mut verdicts = vec![
        Verdict::at_least("total length = 6^n", 0.0 - ((total_length as f64) - 6f64.powi(n as i32)).abs(), 0.0),
        Verdict::at_least("formula matches solver", 1e-9 - (r_hat - r_hat_solver).abs() / r_hat, 0.0),
        Verdict::at_least("R_hat <= Jensen bound", jensen_bound - r_hat, 1e-12),
        Verdict::at_least("R_hat <= (3/2)^n", power - r_hat, 1e-12),
        Verdict::at_least("R_n <= R_glue", r_glue - r_n, 1e-8),
        Verdict::at_least("R_glue <= (3/2)^n", power - r_glue, 1e-12),
        Verdict::at_least("R_n <= (3/2)^n", power - r_n, 1e-8),
    ];
    if let Some(prev) = r_prev {
        verdicts.push(Verdict::at_least("R_n <= 3/2 R_{n-1}", 1.5 * prev - r_n, 1e-8));
    }
    Ok(CutReport {
        n,
        lengths,
        path_count: paths.len(),
        total_length,
        r_hat,
        r_hat_solver,
        jensen_bound,
        r_glue,
        r_n,
        r_prev,
        verdicts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortLevel {
    pub n: usize,
    pub r_tilde: f64,
    pub r_n: f64,
    /// `R̃_n / R̃_{n-1}`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortReport {
    pub levels: Vec<ShortLevel>,
    /// `min_n R̃_n (4/5)^n`.
    pub constant: f64,
    pub verdicts: Vec<Verdict>,
}

impl ShortReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// `R̃_n` for every level of `table`, the ratio check against `5/4` (for
/// ratios `R̃_{n+1}/R̃_n` with `n >= 2`, within `ratio_tol`) and `R̃_n <= R_n`.
pub fn short_bound(
    c: &SimplicialComplex,
    table: &ResistanceTable,
    opts: &SolverOptions,
    ratio_tol: f64,
) -> Result<ShortReport> {
    use rayon::prelude::*;
    let r_tilde: Vec<f64> = (1..=table.max_level())
        .into_par_iter()
        .map(|n| finite(&resistance(&build_short_graph(c, n)?, opts)?))
        .collect::<Result<_>>()?;
    let mut levels = Vec::new();
    let mut verdicts = Vec::new();
    for (k, &rt) in r_tilde.iter().enumerate() {
        let n = k + 1;
        let ratio = (k > 0).then(|| rt / r_tilde[k - 1]);
        if let Some(q) = ratio {
            if n >= 3 {
                verdicts.push(Verdict::at_least(
                    &format!("R~_{n}/R~_{} = 5/4", n - 1),
                    ratio_tol - (q - 1.25).abs(),
                    0.0,
                ));
            }
        }
        verdicts.push(Verdict::at_least(&format!("R~_{n} <= R_{n}"), table.r(n) - rt, 1e-8));
        levels.push(ShortLevel { n, r_tilde: rt, r_n: table.r(n), ratio });
    }
    let constant = levels
        .iter()
        .map(|l| l.r_tilde * 0.8f64.powi(l.n as i32))
        .fold(f64::INFINITY, f64::min);
    Ok(ShortReport { levels, constant, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_level_one() {
        let c = SimplicialComplex::build(1).unwrap();
        let rep = cut_bound(&c, 1, 1.5, None, &SolverOptions::default()).unwrap();
        assert_eq!(rep.lengths, vec![2, 4]);
        assert!((rep.r_hat - 4.0 / 3.0).abs() < 1e-15);
        assert!((rep.r_glue - 1.5).abs() < 1e-15);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn short_level_one_and_two() {
        let c = SimplicialComplex::build(2).unwrap();
        let table = ResistanceTable::compute(&c, 2, &SolverOptions::default()).unwrap();
        let rep = short_bound(&c, &table, &SolverOptions::default(), 1e-3).unwrap();
        assert!((rep.levels[0].r_tilde - 15.0 / 16.0).abs() < 1e-10);
        assert!((rep.levels[1].ratio.unwrap() - 1.25).abs() < 1e-9);
        assert!(rep.passed());
    }
}
