//! Level sweeps and the resistance scaling exponents.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{finite, ResistanceTable};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graphs::{build_cut_graph, build_short_graph, cut_paths};
use crate::network::{resistance, SolverOptions};

/// One inequality check; `margin >= -slack` passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub margin: f64,
    pub passed: bool,
}

impl Verdict {
    pub fn at_least(name: &str, margin: f64, slack: f64) -> Self {
        Self { name: name.to_string(), margin, passed: margin >= -slack }
    }
}

/// `d_S = 2 log 6 / log(6ρ)`.
pub fn spectral_dimension(rho: f64) -> f64 {
    2.0 * 6f64.ln() / (6.0 * rho).ln()
}

/// `exp` of the least-squares slope of `log R` against `n`.
pub fn fit_ratio(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(n, r) in points {
        let dx = n as f64 - mx;
        sxy += dx * (r.ln() - my);
        sxx += dx * dx;
    }
    Some((sxy / sxx).exp())
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRow {
    pub n: usize,
    pub r: f64,
    pub r_t: f64,
    pub product: f64,
    pub r_hat: Option<f64>,
    pub r_tilde: Option<f64>,
    /// `R_n / R_{n-1}`.
    pub ratio: Option<f64>,
    /// Fit over levels `2..=n`.
    pub fit_rho: Option<f64>,
    pub d_s: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<LevelRow>,
    pub rho_ratio: f64,
    pub rho_fit: f64,
    pub rho_t_ratio: f64,
    pub rho_t_fit: f64,
    pub d_s: f64,
    /// Same formula applied to `ρ^T`; its relation to the skeleton's walk
    /// dimension is not settled.
    pub d_s_t: f64,
    /// Set when `R_{n+1}/R_n` is not monotone in `n >= 2`.
    pub non_monotone_ratios: bool,
    pub verdicts: Vec<Verdict>,
}

impl ScalingReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// CSV with 17 significant digits; missing values are empty fields.
    pub fn to_csv(&self) -> String {
        let f = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let mut s = String::from("n,R_n,R_n_T,product,R_hat,R_tilde,ratio,fit_rho,d_S\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                f(Some(r.r)),
                f(Some(r.r_t)),
                f(Some(r.product)),
                f(r.r_hat),
                f(r.r_tilde),
                f(r.ratio),
                f(r.fit_rho),
                f(r.d_s),
            )
            .unwrap();
        }
        s
    }
}

/// Sweeps levels `1..=n_max` and estimates `ρ` and `ρ^T` by the last ratio and
/// by a log-linear fit over `n >= 2`.
pub fn estimate_rho(
    c: &SimplicialComplex,
    n_max: usize,
    opts: &SolverOptions,
) -> Result<ScalingReport> {
    if n_max < 3 {
        return Err(Error::Structure(format!("scaling sweep needs at least 3 levels, got {n_max}")));
    }
    let table = ResistanceTable::compute(c, n_max, opts)?;
    let extras: Vec<(f64, f64)> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let cut = build_cut_graph(c, n)?;
            let paths = cut_paths(c, n, &cut)?;
            let r_hat = 1.0 / paths.iter().map(|p| 1.0 / p.length as f64).sum::<f64>();
            let r_tilde = finite(&resistance(&build_short_graph(c, n)?, opts)?)?;
            Ok((r_hat, r_tilde))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = table.r(n);
        let fit: Vec<(usize, f64)> = (2..=n).map(|k| (k, table.r(k))).collect();
        let fit_rho = fit_ratio(&fit);
        rows.push(LevelRow {
            n,
            r,
            r_t: table.r_t(n),
            product: r * table.r_t(n),
            r_hat: Some(extras[n - 1].0),
            r_tilde: Some(extras[n - 1].1),
            ratio: (n > 1).then(|| r / table.r(n - 1)),
            fit_rho,
            d_s: fit_rho.map(spectral_dimension),
        });
    }
    let rho_ratio = table.r(n_max) / table.r(n_max - 1);
    let rho_t_ratio = table.r_t(n_max) / table.r_t(n_max - 1);
    let rho_fit = fit_ratio(&(2..=n_max).map(|k| (k, table.r(k))).collect::<Vec<_>>())
        .expect("at least two fit points");
    let rho_t_fit = fit_ratio(&(2..=n_max).map(|k| (k, table.r_t(k))).collect::<Vec<_>>())
        .expect("at least two fit points");
    let ratios: Vec<f64> = rows.iter().skip(1).filter_map(|r| r.ratio).collect();
    let increasing = ratios.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = ratios.windows(2).all(|w| w[1] <= w[0]);

    let mut verdicts = vec![
        Verdict::at_least("5/4 - 0.01 <= rho", rho_fit - 1.24, 0.0),
        Verdict::at_least("rho <= 3/2 + 0.01", 1.51 - rho_fit, 0.0),
        Verdict::at_least("2/3 - 0.01 <= rho_T", rho_t_fit - (2.0 / 3.0 - 0.01), 0.0),
        Verdict::at_least("rho_T <= 4/5 + 0.01", 0.81 - rho_t_fit, 0.0),
        Verdict::at_least("|rho rho_T - 1| <= 1e-6", 1e-6 - (rho_fit * rho_t_fit - 1.0).abs(), 0.0),
    ];
    for row in &rows {
        verdicts.push(Verdict::at_least(
            &format!("|R_{0} R^T_{0} - 1| <= 1e-8", row.n),
            1e-8 - (row.product - 1.0).abs(),
            0.0,
        ));
    }
    Ok(ScalingReport {
        rows,
        rho_ratio,
        rho_fit,
        rho_t_ratio,
        rho_t_fit,
        d_s: spectral_dimension(rho_fit),
        d_s_t: spectral_dimension(rho_t_fit),
        non_monotone_ratios: !(increasing || decreasing),
        verdicts,
    })
}
