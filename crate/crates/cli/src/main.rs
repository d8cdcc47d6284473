use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use hexacarpet::analysis::{
    cut_bound, estimate_rho, short_bound, verify_duality, verify_multiplicative, ResistanceTable,
    Verdict,
};
use hexacarpet::complex::DEFAULT_LEVEL_CAP;
use hexacarpet::graphs::{to_dot, write_edge_list};
use hexacarpet::network::{effective_resistance, verify_thompson, Resistance};
use hexacarpet::{Error, GraphFamily, SimplicialComplex, SolverOptions};

const CAP_ENV: &str = "HEXACARPET_CAP";
const IDENTITY_TOL: f64 = 1e-8;
const THOMPSON_TRIALS: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "hexacarpet", version, about = "Resistance scaling on barycentric subdivision graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative residual tolerance for the CG solver.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// CG iteration cap (default 50·√vertices).
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Worker threads for level sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report a disconnected A-B pair instead of failing.
    #[arg(long, global = true)]
    allow_disconnected: bool,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Build a level and export one graph family.
    Build {
        #[arg(long, value_enum, default_value_t = Family::Hexacarpet)]
        family: Family,
        #[arg(long)]
        level: usize,
    },
    /// Effective resistance between A and B for one graph.
    Resistance {
        #[arg(long, value_enum, default_value_t = Family::Hexacarpet)]
        family: Family,
        #[arg(long)]
        level: usize,
    },
    /// Level sweep with scaling estimates.
    Rho {
        #[arg(long, default_value_t = 6)]
        max_level: usize,
    },
    /// Cut-graph and short-graph bounds.
    Bounds {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, default_value_t = 5)]
        max_level: usize,
    },
    /// Multiplicative inequalities between levels m, n and m+n.
    Submult {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// R_n · R_n^T for every level up to --max-level.
    Duality {
        #[arg(long, default_value_t = 6)]
        max_level: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    Skeleton,
    Dual,
    Hexacarpet,
    Cut,
    Short,
}

impl From<Family> for GraphFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Skeleton => GraphFamily::Skeleton,
            Family::Dual => GraphFamily::Dual,
            Family::Hexacarpet => GraphFamily::Hexacarpet,
            Family::Cut => GraphFamily::Cut,
            Family::Short => GraphFamily::Short,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Which {
    Cut,
    Short,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
    Dot,
    Edgelist,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Lib(e) => match e {
                Error::Capacity { .. } => 3,
                Error::NoConvergence { .. } | Error::Disconnected | Error::Factorization => 4,
                Error::Structure(_) | Error::SeamMismatch { .. } | Error::NotAFlow { .. } => 1,
                _ => 2,
            },
        }
    }
}

struct Run {
    cli: Cli,
    cap: usize,
    started: Instant,
}

impl Run {
    fn opts(&self) -> SolverOptions {
        SolverOptions {
            tol: self.cli.tol,
            max_iter: self.cli.max_iter,
            allow_disconnected: self.cli.allow_disconnected,
        }
    }

    fn complex(&self, level: usize) -> Result<SimplicialComplex, Failure> {
        Ok(SimplicialComplex::build_with_cap(level, self.cap)?)
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
        let f = self.cli.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::Config(format!("format {f:?} is not available for this command")))
        }
    }

    fn manifest(&self) -> serde_json::Value {
        json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": &self.cli.command,
            "config": {
                "tol": self.cli.tol,
                "max_iter": self.cli.max_iter,
                "threads": rayon::current_num_threads(),
                "allow_disconnected": self.cli.allow_disconnected,
                "seed": self.cli.seed,
                "level_cap": self.cap,
            },
            "elapsed_ms": self.started.elapsed().as_millis() as u64,
        })
    }

    fn json<T: Serialize>(&self, report: &T) -> Result<String, Failure> {
        let value = json!({ "manifest": self.manifest(), "report": report });
        let mut s = serde_json::to_string_pretty(&value).map_err(Error::from)?;
        s.push('\n');
        Ok(s)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.cli.out {
            Some(path) => {
                let mut f = BufWriter::new(File::create(path)?);
                f.write_all(text.as_bytes())?;
                f.flush()?;
            }
            None => io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn verdict_csv(rows: &[(String, &Verdict)]) -> String {
    let mut s = String::from("section,check,margin,passed\n");
    for (section, v) in rows {
        writeln!(s, "{section},{},{:.16e},{}", v.name, v.margin, v.passed).unwrap();
    }
    s
}

fn check_level(level: usize, cap: usize) -> Result<(), Failure> {
    if level > cap {
        return Err(Failure::Lib(Error::Capacity { level, cap }));
    }
    Ok(())
}

fn cmd_build(run: &Run, family: Family, level: usize) -> Result<bool, Failure> {
    check_level(level, run.cap)?;
    let c = run.complex(level)?;
    let g = GraphFamily::from(family).build(&c, level)?;
    let mut table = String::from("level  vertices  edges  triangles\n");
    for n in 0..=level {
        let (v, e, t) = c.level(n)?.counts();
        writeln!(table, "{n:>5}  {v:>8}  {e:>5}  {t:>9}").unwrap();
    }
    writeln!(table, "{family:?} graph: {} vertices, {} edges", g.vertex_count(), g.edge_count()).unwrap();
    if run.cli.out.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    let text = match run.format(Format::Edgelist, &[Format::Edgelist, Format::Dot, Format::Json])? {
        Format::Edgelist => {
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf)?;
            String::from_utf8(buf).expect("edge list is ASCII")
        }
        Format::Dot => to_dot(&g),
        _ => run.json(&c.to_json_value(level)?)?,
    };
    run.emit(&text)?;
    Ok(true)
}

#[derive(Serialize)]
struct ResistanceReport {
    family: Family,
    level: usize,
    resistance: Option<f64>,
    disconnected: bool,
    iterations: usize,
    residual: f64,
    thompson_passed: Option<bool>,
}

fn cmd_resistance(run: &Run, family: Family, level: usize) -> Result<bool, Failure> {
    check_level(level, run.cap)?;
    let c = run.complex(level)?;
    let g = GraphFamily::from(family).build(&c, level)?;
    let (a, b) = g.terminals()?;
    let opts = run.opts();
    let res = effective_resistance(&g, a, b, &opts)?;
    let thompson = match (run.cli.seed, res.resistance) {
        (Some(seed), Resistance::Finite(_)) => {
            Some(verify_thompson(&g, a, b, &res, THOMPSON_TRIALS, seed, 1e-8)?.passed())
        }
        _ => None,
    };
    let report = ResistanceReport {
        family,
        level,
        resistance: res.value(),
        disconnected: res.resistance == Resistance::Disconnected,
        iterations: res.iterations,
        residual: res.residual,
        thompson_passed: thompson,
    };
    let text = match run.format(Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Csv => {
            let r = report.resistance.map(|r| format!("{r:.16e}")).unwrap_or_else(|| "disconnected".into());
            let mut s = String::from("family,n,R,iterations,residual\n");
            writeln!(s, "{},{level},{r},{},{:.3e}", GraphFamily::from(family), res.iterations, res.residual)
                .unwrap();
            s
        }
        _ => run.json(&report)?,
    };
    run.emit(&text)?;
    Ok(thompson.unwrap_or(true))
}

fn cmd_rho(run: &Run, max_level: usize) -> Result<bool, Failure> {
    check_level(max_level, run.cap)?;
    let c = run.complex(max_level)?;
    let report = estimate_rho(&c, max_level, &run.opts())?;
    let text = match run.format(Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Csv => report.to_csv(),
        _ => run.json(&report)?,
    };
    run.emit(&text)?;
    Ok(report.passed())
}

fn cmd_bounds(run: &Run, which: Which, max_level: usize) -> Result<bool, Failure> {
    check_level(max_level, run.cap)?;
    let c = run.complex(max_level)?;
    let opts = run.opts();
    let table = ResistanceTable::compute(&c, max_level, &opts)?;
    let cut = if which != Which::Short {
        (1..=max_level)
            .into_par_iter()
            .map(|n| cut_bound(&c, n, table.r(n), (n > 1).then(|| table.r(n - 1)), &opts))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let short = if which != Which::Cut { Some(short_bound(&c, &table, &opts, 1e-3)?) } else { None };
    let passed = cut.iter().all(|r| r.passed()) && short.as_ref().is_none_or(|s| s.passed());
    let text = match run.format(Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Csv => {
            let mut rows = Vec::new();
            for r in &cut {
                rows.extend(r.verdicts.iter().map(|v| (format!("cut n={}", r.n), v)));
            }
            if let Some(s) = &short {
                rows.extend(s.verdicts.iter().map(|v| ("short".to_string(), v)));
            }
            verdict_csv(&rows)
        }
        _ => run.json(&json!({ "cut": cut, "short": short }))?,
    };
    run.emit(&text)?;
    Ok(passed)
}

fn cmd_submult(run: &Run, m: usize, n: usize) -> Result<bool, Failure> {
    check_level(m + n, run.cap)?;
    let c = run.complex(m + n)?;
    let table = ResistanceTable::compute(&c, m + n, &run.opts())?;
    let report = verify_multiplicative(&table, m, n, IDENTITY_TOL)?;
    let text = match run.format(Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Csv => {
            let section = format!("m={m} n={n}");
            verdict_csv(&report.verdicts.iter().map(|v| (section.clone(), v)).collect::<Vec<_>>())
        }
        _ => run.json(&report)?,
    };
    run.emit(&text)?;
    Ok(report.passed())
}

fn cmd_duality(run: &Run, max_level: usize) -> Result<bool, Failure> {
    check_level(max_level, run.cap)?;
    let c = run.complex(max_level)?;
    let opts = run.opts();
    let reports = (1..=max_level)
        .into_par_iter()
        .map(|n| verify_duality(&c, n, &opts, IDENTITY_TOL))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match run.format(Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Csv => {
            let mut s = String::from("n,R_n,R_n_T,product,passed\n");
            for r in &reports {
                writeln!(s, "{},{:.16e},{:.16e},{:.16e},{}", r.n, r.r, r.r_t, r.product, r.passed).unwrap();
            }
            s
        }
        _ => run.json(&reports)?,
    };
    run.emit(&text)?;
    Ok(reports.iter().all(|r| r.passed))
}

fn level_cap() -> Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Config(format!("{CAP_ENV}={v} is not a level"))),
        Err(_) => Ok(DEFAULT_LEVEL_CAP),
    }
}

fn dispatch(cli: Cli) -> Result<bool, Failure> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::Config(format!("--tol must be positive, got {}", cli.tol)));
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let run = Run { cap: level_cap()?, cli, started: Instant::now() };
    match run.cli.command {
        Command::Build { family, level } => cmd_build(&run, family, level),
        Command::Resistance { family, level } => cmd_resistance(&run, family, level),
        Command::Rho { max_level } => cmd_rho(&run, max_level),
        Command::Bounds { which, max_level } => cmd_bounds(&run, which, max_level),
        Command::Submult { m, n } => cmd_submult(&run, m, n),
        Command::Duality { max_level } => cmd_duality(&run, max_level),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("hexacarpet: one or more checks failed");
            ExitCode::from(1)
        }
        Err(f) => {
            match &f {
                Failure::Config(msg) => eprintln!("hexacarpet: {msg}"),
                Failure::Lib(e) => eprintln!("hexacarpet: {e}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
