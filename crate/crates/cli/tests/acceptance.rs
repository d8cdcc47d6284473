//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use hexacarpet::analysis::{
    build_symmetrized_flows, compose_flow, cut_bound, estimate_rho, hexacarpet_resistance,
    potential_decomposition, short_bound, spectral_dimension, verify_multiplicative,
    y_decomposition, ResistanceTable, ScalingReport,
};
use hexacarpet::complex::Rational;
use hexacarpet::graphs::{build_cut_graph, cut_paths};
use hexacarpet::network::{
    dissipation, divergence, effective_resistance, energy, gradient, inner, laplacian,
    oracle_resistance, resistance, verify_thompson, ORACLE_VERTEX_CAP,
};
use hexacarpet::{
    Flow, GraphFamily, Potential, Result, SimplicialComplex, SolverOptions, VertexPartition,
    WeightedGraph,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

const TOP: usize = 6;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

fn solver() -> SolverOptions {
    SolverOptions::with_tol(1e-11)
}

fn tight() -> SolverOptions {
    SolverOptions::with_tol(1e-13)
}

fn table_of(rep: &ScalingReport, n_max: usize) -> ResistanceTable {
    ResistanceTable {
        hexacarpet: rep.rows.iter().take(n_max).map(|r| r.r).collect(),
        skeleton: rep.rows.iter().take(n_max).map(|r| r.r_t).collect(),
    }
}

fn duality(rep: &ScalingReport) -> Result<Outcome> {
    let worst = rep.rows.iter().map(|r| (r.product - 1.0).abs()).fold(0.0, f64::max);
    Ok(Outcome::new(worst <= 1e-8, format!("max |R_n R^T_n - 1| = {worst:.3e} over n = 1..{TOP}")))
}

fn rho(rep: &ScalingReport) -> Result<Outcome> {
    let bracket = (1.29..=1.32).contains(&rep.rho_fit);
    let hard = rep.verdicts.iter().filter(|v| v.name.contains("rho")).all(|v| v.passed);
    let product = (rep.rho_fit * rep.rho_t_fit - 1.0).abs();
    Ok(Outcome::new(
        bracket && hard && product <= 1e-6,
        format!(
            "rho fit = {:.6}, last ratio = {:.6}, rho_T fit = {:.6}, |rho rho_T - 1| = {product:.2e}",
            rep.rho_fit, rep.rho_ratio, rep.rho_t_fit
        ),
    ))
}

fn spectral() -> Result<Outcome> {
    let (a, b, c) = (spectral_dimension(1.306), spectral_dimension(1.5), spectral_dimension(1.25));
    let ok = (a - 1.7406).abs() <= 5e-4 && (b - 1.631).abs() <= 1e-3 && (c - 1.778).abs() <= 1e-3;
    Ok(Outcome::new(ok, format!("d_S(1.306) = {a:.5}, d_S(3/2) = {b:.4}, d_S(5/4) = {c:.4}")))
}

fn submultiplicative(table: &ResistanceTable) -> Result<Outcome> {
    let mut checked = 0;
    let mut failed = Vec::new();
    let mut tightest = f64::INFINITY;
    for m in 1..TOP {
        for n in 1..=TOP - m {
            let rep = verify_multiplicative(table, m, n, 1e-8)?;
            for v in &rep.verdicts[..2] {
                checked += 1;
                tightest = tightest.min(v.margin);
                if !v.passed {
                    failed.push(format!("({m},{n}) {}", v.name));
                }
            }
        }
    }
    Ok(Outcome::new(
        failed.is_empty(),
        format!("{checked} inequalities, smallest margin {tightest:.4e}{}", failures(&failed)),
    ))
}

fn composed_flow(c: &SimplicialComplex) -> Result<Outcome> {
    let i2 = hexacarpet_resistance(c, 2, &tight())?;
    let r2 = i2.value().unwrap_or(f64::NAN);
    let triple = build_symmetrized_flows(c, 2, &i2.flow)?;
    let ydec = y_decomposition(c, 2, &i2.flow)?;
    let j = compose_flow(c, 2, 2, &triple, &ydec)?;
    let bound = 4.0 / 3.0 * r2 * r2;
    let ok = j.max_interior_divergence <= 1e-9 && (j.flux - 1.0).abs() <= 1e-9 && j.energy <= bound + 1e-8;
    Ok(Outcome::new(
        ok,
        format!(
            "flux = {:.12}, max interior |div| = {:.2e}, E(J) = {:.8} <= {bound:.8}",
            j.flux, j.max_interior_divergence, j.energy
        ),
    ))
}

fn potentials(c: &SimplicialComplex) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=4 {
        let d = potential_decomposition(c, n, &tight())?;
        ok &= d.cross.abs() <= 1e-8 * d.energy_u && d.identity_gap <= 1e-8;
        parts.push(format!("n={n}: E(u,v-w)/E(u) = {:.1e}, gap = {:.1e}", d.cross.abs() / d.energy_u, d.identity_gap));
    }
    Ok(Outcome::new(ok, parts.join("; ")))
}

fn cut(c: &SimplicialComplex, table: &ResistanceTable) -> Result<Outcome> {
    let first: Vec<usize> = cut_paths(c, 1, &build_cut_graph(c, 1)?)?.iter().map(|p| p.length).collect();
    let mut failed = Vec::new();
    if first != [2, 4] {
        failed.push(format!("l_1 = {first:?}"));
    }
    let wanted = ["total length = 6^n", "formula matches solver", "R_hat <= (3/2)^n", "R_n <= (3/2)^n"];
    let reports: Vec<_> = (1..=TOP)
        .into_par_iter()
        .map(|n| cut_bound(c, n, table.r(n), (n > 1).then(|| table.r(n - 1)), &tight()))
        .collect::<Result<_>>()?;
    for rep in &reports {
        for v in rep.verdicts.iter().filter(|v| wanted.contains(&v.name.as_str())) {
            if !v.passed {
                failed.push(format!("n={} {}", rep.n, v.name));
            }
        }
    }
    let last = reports.last().expect("levels");
    Ok(Outcome::new(
        failed.is_empty(),
        format!(
            "l_1 = {first:?}; n={}: {} paths, total {}, R_hat = {:.6} <= {:.6}{}",
            last.n,
            last.path_count,
            last.total_length,
            last.r_hat,
            1.5f64.powi(last.n as i32),
            failures(&failed)
        ),
    ))
}

fn short(c: &SimplicialComplex, rep: &ScalingReport) -> Result<Outcome> {
    let table = table_of(rep, 5);
    let s = short_bound(c, &table, &solver(), 1e-3)?;
    let ratios: Vec<String> =
        s.levels.iter().skip(2).filter_map(|l| l.ratio.map(|q| format!("{q:.6}"))).collect();
    let failed: Vec<String> = s.verdicts.iter().filter(|v| !v.passed).map(|v| v.name.clone()).collect();
    Ok(Outcome::new(
        failed.is_empty(),
        format!("R~_(n+1)/R~_n for n = 2..4: [{}]{}", ratios.join(", "), failures(&failed)),
    ))
}

fn failures(failed: &[String]) -> String {
    if failed.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", failed.join(", "))
    }
}

fn random_graph(rng: &mut StdRng) -> WeightedGraph {
    let n = rng.gen_range(6..=200);
    let mut edges = BTreeMap::new();
    for v in 1..n as u32 {
        edges.insert((rng.gen_range(0..v), v), rng.gen_range(1..=12));
    }
    for _ in 0..rng.gen_range(0..=2 * n) {
        let (u, v) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
        if u != v {
            edges.entry((u.min(v), u.max(v))).or_insert(rng.gen_range(1..=12));
        }
    }
    let list = edges.into_iter().map(|((u, v), c)| (u, v, Rational::new(c, 4))).collect();
    let mut g = WeightedGraph::new(n, list).expect("valid graph");
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let (ka, kb) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    g.set_boundary("A", order[..ka].to_vec()).expect("A");
    g.set_boundary("B", order[ka..ka + kb].to_vec()).expect("B");
    g
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
}

/// Per graph: adjointness and energy chain on random data, Thompson's
/// principle, and the iterative solver against the dense factorization.
fn calculus_checks(g: &WeightedGraph, seed: u64) -> Result<Vec<&'static str>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let f = Potential((0..g.vertex_count()).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let h = Potential((0..g.vertex_count()).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let j = Flow((0..g.edge_count()).map(|_| rng.gen_range(-1.0..1.0)).collect());
    if !close(dissipation(g, &gradient(g, &f)?, &j)?, -inner(&f, &divergence(g, &j)?)?, 1e-10) {
        bad.push("adjointness");
    }
    let e = energy(g, &f, &h)?;
    let chain = dissipation(g, &gradient(g, &f)?, &gradient(g, &h)?)?;
    if !close(e, chain, 1e-10) || !close(e, -inner(&f, &laplacian(g, &h)?)?, 1e-10) {
        bad.push("energy chain");
    }
    let (a, b) = g.terminals()?;
    let opts = SolverOptions { allow_disconnected: true, ..tight() };
    let res = effective_resistance(g, a, b, &opts)?;
    if let Some(r) = res.value() {
        if !verify_thompson(g, a, b, &res, 100, seed, 1e-8)?.passed() {
            bad.push("thompson");
        }
        if g.vertex_count() <= ORACLE_VERTEX_CAP && (r - oracle_resistance(g, a, b)?).abs() > 1e-9 * r {
            bad.push("oracle");
        }
    }
    Ok(bad)
}

fn monotonicity_checks(g: &WeightedGraph, seed: u64) -> Result<Vec<&'static str>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let opts = SolverOptions { allow_disconnected: true, ..tight() };
    let r = resistance(g, &tight())?.value().unwrap_or(f64::INFINITY);
    let mut bad = Vec::new();

    let dropped: Vec<(u32, u32)> =
        g.edges().iter().copied().filter(|_| rng.gen_bool(0.2)).collect();
    let sub = g.drop_edges(|u, v, _| dropped.binary_search(&(u, v)).is_ok(), true)?;
    if let Some(rs) = resistance(&sub, &opts)?.value() {
        if rs < r * (1.0 - 1e-10) {
            bad.push("subgraph");
        }
    }

    let (a, b) = g.terminals()?;
    let inner: Vec<u32> =
        (0..g.vertex_count() as u32).filter(|v| !a.contains(v) && !b.contains(v)).collect();
    let mut keys: Vec<u32> = (0..g.vertex_count() as u32).collect();
    for _ in 0..3 {
        let (x, y) = (inner[rng.gen_range(0..inner.len())], inner[rng.gen_range(0..inner.len())]);
        let (kx, ky) = (keys[x as usize], keys[y as usize]);
        keys.iter_mut().filter(|k| **k == ky).for_each(|k| *k = kx);
    }
    let q = g.quotient(&VertexPartition::from_keys(&keys))?;
    if resistance(&q, &tight())?.value().unwrap_or(f64::INFINITY) > r * (1.0 + 1e-10) {
        bad.push("quotient");
    }

    let k = rng.gen_range(0..g.edge_count());
    let raised: Vec<_> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (u, v, if i == k { g.conductance(i) * 3 } else { g.conductance(i) }))
        .collect();
    let mut stronger = WeightedGraph::new(g.vertex_count(), raised)?;
    stronger.set_boundary("A", a.to_vec())?;
    stronger.set_boundary("B", b.to_vec())?;
    if resistance(&stronger, &tight())?.value().unwrap_or(f64::INFINITY) > r * (1.0 + 1e-10) {
        bad.push("rayleigh");
    }
    Ok(bad)
}

fn calculus(c: &SimplicialComplex) -> Result<Outcome> {
    let mut corpus = Vec::new();
    for family in GraphFamily::ALL {
        for n in 1..=4 {
            let g = family.build(c, n)?;
            if g.vertex_count() <= ORACLE_VERTEX_CAP {
                corpus.push((format!("{family} {n}"), g));
            }
        }
    }
    let family_graphs = corpus.len();
    let mut rng = StdRng::seed_from_u64(0x6865_7861);
    let random: Vec<WeightedGraph> = (0..50).map(|_| random_graph(&mut rng)).collect();
    for (k, g) in random.iter().enumerate() {
        corpus.push((format!("random {k}"), g.clone()));
    }

    let mut failed: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .map(|(k, (name, g))| {
            Ok(calculus_checks(g, k as u64)?.into_iter().map(|b| format!("{name}: {b}")).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let mono: Vec<Vec<&str>> = random
        .par_iter()
        .enumerate()
        .map(|(k, g)| monotonicity_checks(g, 1000 + k as u64))
        .collect::<Result<_>>()?;
    for (k, bad) in mono.into_iter().enumerate() {
        failed.extend(bad.into_iter().map(|b| format!("random {k}: {b}")));
    }
    Ok(Outcome::new(
        failed.is_empty(),
        format!(
            "{} graphs ({family_graphs} family, 50 random), 100 Thompson trials each, {} violations{}",
            corpus.len(),
            failed.len(),
            failures(&failed)
        ),
    ))
}

fn determinism() -> Result<Outcome> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hexacarpet"))
            .args(["rho", "--max-level", "5"])
            .env_remove("HEXACARPET_CAP")
            .output()
            .expect("binary runs")
    };
    let (x, y) = (run(), run());
    let ok = x.status.success() && y.status.success() && !x.stdout.is_empty() && x.stdout == y.stdout;
    Ok(Outcome::new(ok, format!("{} bytes, exit codes {:?} and {:?}", x.stdout.len(), x.status.code(), y.status.code())))
}

fn report(id: usize, name: &str, outcome: Result<Outcome>) -> bool {
    let (passed, detail) = match outcome {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!("{} criterion {id:>2} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    passed
}

fn main() -> ExitCode {
    let start = Instant::now();
    let c = SimplicialComplex::build(TOP).expect("complex");
    let sweep = estimate_rho(&c, TOP, &solver());
    let table = sweep.as_ref().ok().map(|r| table_of(r, TOP));
    let missing = || hexacarpet::Error::Structure("level sweep failed".into());

    let mut all = true;
    all &= report(1, "duality", sweep.as_ref().map_err(|_| missing()).and_then(duality));
    all &= report(2, "rho estimate", sweep.as_ref().map_err(|_| missing()).and_then(rho));
    all &= report(3, "spectral dimension", spectral());
    all &= report(4, "multiplicative bounds", table.as_ref().ok_or_else(missing).and_then(submultiplicative));
    all &= report(5, "composed flow", composed_flow(&c));
    all &= report(6, "potential decomposition", potentials(&c));
    all &= report(7, "cut bound", table.as_ref().ok_or_else(missing).and_then(|t| cut(&c, t)));
    all &= report(8, "short bound", sweep.as_ref().map_err(|_| missing()).and_then(|s| short(&c, s)));
    all &= report(9, "calculus suite", calculus(&c));
    all &= report(10, "determinism", determinism());
    println!("acceptance finished in {:.1?}", start.elapsed());
    if let Err(e) = &sweep {
        println!("level sweep error: {e}");
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
