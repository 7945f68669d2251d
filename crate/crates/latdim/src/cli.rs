//! Argument parsing and I/O plumbing around the library. Exit codes: 0 on
//! success, 2 on usage errors (clap), 1 on contract, range, resource, or
//! format errors from the modules.
//!
//! Output conventions: generated and transformed sets go to `-o` or stdout
//! in the JSONL format with the parsed command echoed into the provenance
//! header; tables are CSV with `.` decimals, no digit grouping, LF line
//! endings; each estimating subcommand ends with a one-line JSON summary.
//! Randomized subcommands take their seed from the experiment config and
//! fall back to the fixed default 0x6c617464696d ("latdim"), never to
//! entropy.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use latdim::covering::{
    covering_dimension_estimate, greedy_cover_nd, optimal_cover_1d, CoverSolution, DEFAULT_TAU,
};
use latdim::dimension::{
    counting_profile, extract_regular_subset, fit_dimension, mass_profile, measure_sup, top_half,
    ScaleGrid,
};
use latdim::generators::GeneratorSpec;
use latdim::io as setio;
use latdim::montecarlo::{run_delta_experiment, run_projection_experiment, ExperimentConfig};
use latdim::projection::{
    additive_energy, project_detailed, sumset, ProjectionMatrix, DEFAULT_SUMSET_CAP,
};
use latdim::{Cube, LatticeSet};

/// Discrete fractal dimensions of integer lattice sets.
#[derive(Parser)]
#[command(name = "latdim", version, about, max_term_width = 100)]
pub struct Cli {
    /// Worker threads for parallel subcommands (0 = auto). The env var
    /// LATDIM_THREADS is the fallback when this flag is absent. Results
    /// never depend on the thread count.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice set from a named family.
    #[command(subcommand)]
    Gen(GenFamily),
    /// Counting or mass profile of a set, with a fitted dimension.
    Dim(DimArgs),
    /// One covering solve at a fixed exponent and ratio cap.
    Cover(CoverArgs),
    /// Covering dimension estimate over an exponent grid.
    Covdim(CovdimArgs),
    /// Floored oblique projection of a set.
    Project(ProjectArgs),
    /// Floored dilation sumset of one-dimensional sets.
    Sumset(SumsetArgs),
    /// Image size and additive energy of a projection.
    Energy(EnergyArgs),
    /// Extract a regular subset whose cube supremum is pinned near 2^d.
    Regular(RegularArgs),
    /// Monte Carlo experiments over random projection matrices.
    #[command(subcommand)]
    Mc(McCommand),
}

impl Cli {
    pub fn run(self) -> Result<()> {
        let threads = resolve_threads(self.threads)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("building the thread pool")?;
        pool.install(|| match self.command {
            Command::Gen(family) => run_gen(family),
            Command::Dim(args) => run_dim(args),
            Command::Cover(args) => run_cover(args),
            Command::Covdim(args) => run_covdim(args),
            Command::Project(args) => run_project(args),
            Command::Sumset(args) => run_sumset(args),
            Command::Energy(args) => run_energy(args),
            Command::Regular(args) => run_regular(args),
            Command::Mc(cmd) => run_mc(cmd),
        })
    }
}

fn resolve_threads(flag: usize) -> Result<usize> {
    if flag > 0 {
        return Ok(flag);
    }
    match std::env::var("LATDIM_THREADS") {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map_err(|_| anyhow!("LATDIM_THREADS must be a nonnegative integer, got {text:?}")),
        Err(_) => Ok(0),
    }
}

// ---- gen ----

#[derive(Subcommand)]
enum GenFamily {
    /// Integer parts of a rational polynomial on an integer range.
    Poly {
        /// Coefficients, lowest order first, as rationals like 0,0,1/2.
        #[arg(long, value_name = "C0,C1,..")]
        coeffs: String,
        /// First argument (inclusive).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n_lo: i64,
        /// Last argument (exclusive).
        #[arg(long)]
        n_hi: i64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// floor(n^beta) for n in [1, n_hi) and rational beta > 0.
    Power {
        #[arg(long, value_name = "P/Q")]
        beta: String,
        #[arg(long)]
        n_hi: i64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// floor(r^n) for rational r > 1, up to a value limit.
    Geometric {
        #[arg(long, value_name = "P/Q")]
        ratio: String,
        /// Largest value to keep.
        #[arg(long)]
        limit: i64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Primes below a limit.
    Primes {
        #[arg(long)]
        limit: u64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Base-b integers of a fixed digit count whose digit strings a 0/1
    /// transition matrix accepts.
    Cantor {
        #[arg(long)]
        base: u32,
        /// Allowed digits, fully connected (default: all digits).
        #[arg(long, value_name = "D0,D1,..")]
        digits: Option<String>,
        /// Explicit matrix rows as 0/1 strings, one per digit, like 11,10.
        /// Overrides --digits and --forbid.
        #[arg(long, value_name = "ROW,..")]
        rows: Option<String>,
        /// Forbidden digit transitions as FROM:TO pairs.
        #[arg(long, value_name = "F:T,..")]
        forbid: Option<String>,
        /// Allowed least significant digits (default: all allowed digits).
        #[arg(long, value_name = "D0,D1,..")]
        start: Option<String>,
        /// Digit count.
        #[arg(long)]
        depth: u32,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Finite IP sums: level i contributes 0..k_i copies of generator d_i.
    Ip {
        /// Per-level multiplicity bounds.
        #[arg(long, value_name = "K1,K2,..")]
        ks: String,
        /// Per-level generators.
        #[arg(long, value_name = "D1,D2,..")]
        ds: String,
        /// Number of leading levels to use.
        #[arg(long)]
        depth: usize,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

fn run_gen(family: GenFamily) -> Result<()> {
    let (spec, output) = match family {
        GenFamily::Poly { coeffs, n_lo, n_hi, output } => (
            GeneratorSpec::Polynomial { coeffs: split_strings(&coeffs), n_lo, n_hi },
            output,
        ),
        GenFamily::Power { beta, n_hi, output } => (GeneratorSpec::Power { beta, n_hi }, output),
        GenFamily::Geometric { ratio, limit, output } => {
            (GeneratorSpec::Geometric { ratio, limit }, output)
        }
        GenFamily::Primes { limit, output } => (GeneratorSpec::Primes { limit }, output),
        GenFamily::Cantor { base, digits, rows, forbid, start, depth, output } => {
            let rows = rows.map(|text| parse_rows(&text)).transpose()?;
            let digits = digits.map(|text| parse_list::<u32>(&text)).transpose()?;
            let forbid = match forbid {
                Some(text) => parse_pairs(&text)?,
                None => Vec::new(),
            };
            let start = start.map(|text| parse_list::<u32>(&text)).transpose()?;
            (GeneratorSpec::Cantor { base, rows, digits, forbid, start, depth }, output)
        }
        GenFamily::Ip { ks, ds, depth, output } => (
            GeneratorSpec::Ip { ks: parse_list(&ks)?, ds: parse_list(&ds)?, depth },
            output,
        ),
    };
    let set = spec.build()?;
    write_set(output.as_deref(), &set)
}

// ---- dim ----

#[derive(Clone, Copy, ValueEnum)]
enum DimKind {
    /// Extremal counts over all cubes of each side.
    Counting,
    /// Counts in centered cubes, scale = half side.
    Mass,
}

#[derive(clap::Args)]
struct DimArgs {
    kind: DimKind,
    set: PathBuf,
    /// Scale grid, pow2:LO..HI (inclusive exponents) or a comma list of
    /// sides. Default: powers of two up to the enclosing side.
    #[arg(long)]
    scales: Option<String>,
    /// Fit over the largest K scales (default: the largest half).
    #[arg(long, value_name = "K")]
    window: Option<usize>,
    /// Also report the measure proxy sup count/side^alpha at this exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Write the JSON summary here instead of appending it to stdout.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

fn run_dim(args: DimArgs) -> Result<()> {
    let set = setio::read_path(&args.set)?;
    let grid = parse_scales(args.scales.as_deref(), &set)?;
    let profile = match args.kind {
        DimKind::Counting => counting_profile(&set, &grid)?,
        DimKind::Mass => mass_profile(&set, &grid)?,
    };
    let window = match args.window {
        Some(k) => {
            if k < 2 || k > grid.len() {
                bail!("window must be between 2 and {} scales, got {k}", grid.len());
            }
            grid.len() - k..grid.len()
        }
        None => top_half(grid.len()),
    };
    let fit = fit_dimension(&profile, window.clone())?;
    let mut csv = String::from("side,count,exponent\n");
    for (entry, exp) in profile.entries.iter().zip(&fit.per_scale) {
        match exp {
            Some(e) => csv.push_str(&format!("{},{},{e}\n", entry.side, entry.count)),
            None => csv.push_str(&format!("{},{},\n", entry.side, entry.count)),
        }
    }
    print!("{csv}");
    let mut summary = json!({
        "subcommand": "dim",
        "kind": profile.kind,
        "input": args.set.display().to_string(),
        "scales": grid.sides(),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "window": [window.start, window.end],
        "exact": profile.exact,
        "sup_at_slope": measure_sup(&profile, fit.slope),
    });
    if let Some(alpha) = args.alpha {
        summary["alpha"] = alpha.into();
        summary["sup_at_alpha"] = measure_sup(&profile, alpha).into();
    }
    emit_summary(args.json.as_deref(), &summary)
}

// ---- cover ----

#[derive(clap::Args)]
struct CoverArgs {
    set: PathBuf,
    /// Cost exponent.
    #[arg(long)]
    alpha: f64,
    /// Cover cube sides are capped at ratio times the host side.
    #[arg(long)]
    ratio: f64,
    /// Host cube as base coordinates then side, like -4,0,16.
    /// Default: the smallest cube enclosing the set.
    #[arg(long, value_name = "B1,..,BD,SIDE", allow_hyphen_values = true)]
    cube: Option<String>,
    /// Write cover cubes here (default: stdout, before the summary).
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

fn run_cover(args: CoverArgs) -> Result<()> {
    let set = setio::read_path(&args.set)?;
    let host = match &args.cube {
        Some(text) => parse_cube(text, set.dim())?,
        None => enclosing_cube(&set)?,
    };
    let exact = set.dim() == 1;
    let solution: CoverSolution = if exact {
        optimal_cover_1d(&set, &host, args.alpha, args.ratio)?
    } else {
        greedy_cover_nd(&set, &host, args.alpha, args.ratio)?
    };
    let mut lines = String::new();
    for cube in &solution.cubes {
        lines.push_str(&serde_json::to_string(cube)?);
        lines.push('\n');
    }
    match &args.output {
        Some(path) => fs::write(path, lines)?,
        None => print!("{lines}"),
    }
    let summary = json!({
        "subcommand": "cover",
        "input": args.set.display().to_string(),
        "host": host,
        "alpha": solution.alpha,
        "ratio": solution.ratio_cap,
        "cubes": solution.cubes.len(),
        "cost": solution.cost,
        "exact": exact,
    });
    emit_summary(None, &summary)
}

// ---- covdim ----

#[derive(clap::Args)]
struct CovdimArgs {
    set: PathBuf,
    /// Exponent grid, LO:HI:STEP or a comma list.
    #[arg(long, default_value = "0:1:0.05")]
    alphas: String,
    /// Strictly decreasing ratio caps to probe.
    #[arg(long, default_value = "0.25,0.0625,0.015625")]
    ratios: String,
    /// Cost threshold for a decisive accept.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,
    /// Scale grid for the witness cubes (default: dyadic for the set).
    #[arg(long)]
    scales: Option<String>,
    /// Write the JSON summary here instead of appending it to stdout.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

fn run_covdim(args: CovdimArgs) -> Result<()> {
    let set = setio::read_path(&args.set)?;
    let grid = parse_scales(args.scales.as_deref(), &set)?;
    let alphas = parse_grid_or_list(&args.alphas)?;
    let ratios = parse_list::<f64>(&args.ratios)?;
    let report = covering_dimension_estimate(&set, &grid, &ratios, &alphas, args.tau)?;
    let mut csv = String::from("alpha,side,ratio,cost\n");
    for row in &report.rows {
        csv.push_str(&format!("{},{},{},{}\n", row.alpha, row.side, row.ratio, row.cost));
    }
    print!("{csv}");
    let summary = json!({
        "subcommand": "covdim",
        "input": args.set.display().to_string(),
        "estimate": report.estimate,
        "bracketed": report.bracketed,
        "tau": report.tau,
    });
    emit_summary(args.json.as_deref(), &summary)
}

// ---- project / sumset / energy ----

#[derive(clap::Args)]
struct ProjectArgs {
    set: PathBuf,
    /// Row-major free entries of the projection, k(d-k) numbers.
    #[arg(long, allow_hyphen_values = true, value_name = "M11,M12,..")]
    matrix: String,
    /// Range dimension k.
    #[arg(long, default_value_t = 1, value_name = "K")]
    range_dim: usize,
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

fn run_project(args: ProjectArgs) -> Result<()> {
    let set = setio::read_path(&args.set)?;
    let entries = parse_list::<f64>(&args.matrix)?;
    let m = ProjectionMatrix::new(args.range_dim, set.dim(), entries)?;
    let (image, diag) = project_detailed(&set, &m)?;
    if diag.boundary_ties > 0 {
        eprintln!(
            "warning: {} coordinate evaluations within 2^-40 of an integer; \
             their floors are deterministic but analytically fragile",
            diag.boundary_ties
        );
    }
    let echo = json!({
        "subcommand": "project",
        "input": args.set.display().to_string(),
        "k": m.k(),
        "matrix": m.entries(),
        "boundary_ties": diag.boundary_ties,
    });
    write_set(args.output.as_deref(), &image.with_provenance(echo.to_string()))
}

#[derive(clap::Args)]
struct SumsetArgs {
    /// One-dimensional input sets, one per coefficient.
    #[arg(required = true)]
    sets: Vec<PathBuf>,
    /// Dilation coefficients, one per input set.
    #[arg(long, allow_hyphen_values = true, value_name = "L1,L2,..")]
    lambdas: String,
    /// Cap on the number of enumerated combinations.
    #[arg(long, default_value_t = DEFAULT_SUMSET_CAP)]
    cap: u64,
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

fn run_sumset(args: SumsetArgs) -> Result<()> {
    let sets = args
        .sets
        .iter()
        .map(|p| setio::read_path(p))
        .collect::<latdim::Result<Vec<_>>>()?;
    let lambdas = parse_list::<f64>(&args.lambdas)?;
    let result = sumset(&sets, &lambdas, args.cap)?;
    let echo = json!({
        "subcommand": "sumset",
        "inputs": args.sets.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "lambdas": lambdas,
    });
    write_set(args.output.as_deref(), &result.with_provenance(echo.to_string()))
}

#[derive(clap::Args)]
struct EnergyArgs {
    set: PathBuf,
    /// Row-major free entries of the projection, k(d-k) numbers.
    #[arg(long, allow_hyphen_values = true, value_name = "M11,M12,..")]
    matrix: String,
    /// Range dimension k.
    #[arg(long, default_value_t = 1, value_name = "K")]
    range_dim: usize,
    /// Emit one JSON object instead of plain text.
    #[arg(long)]
    json: bool,
}

fn run_energy(args: EnergyArgs) -> Result<()> {
    let set = setio::read_path(&args.set)?;
    let entries = parse_list::<f64>(&args.matrix)?;
    let m = ProjectionMatrix::new(args.range_dim, set.dim(), entries)?;
    let report = additive_energy(&set, &m)?;
    let energy = u64::try_from(report.energy)
        .map_err(|_| anyhow!("energy exceeds 64 bits; use the library API for the exact value"))?;
    if args.json {
        let summary = json!({
            "subcommand": "energy",
            "input": args.set.display().to_string(),
            "matrix": m.entries(),
            "image_size": report.image_size,
            "energy": energy,
            "rep_counts": report.rep_counts,
        });
        println!("{summary}");
    } else {
        println!("image_size {}", report.image_size);
        println!("energy {energy}");
    }
    Ok(())
}

// ---- regular ----

#[derive(clap::Args)]
struct RegularArgs {
    set: PathBuf,
    /// Exponent; |E|/side^alpha must be at least 6^d.
    #[arg(long)]
    alpha: f64,
    /// Host cube as base coordinates then side (default: enclosing cube).
    #[arg(long, value_name = "B1,..,BD,SIDE", allow_hyphen_values = true)]
    cube: Option<String>,
    /// Write the subset here (default: stdout, before the summary).
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

fn run_regular(args: RegularArgs) -> Result<()> {
    let set = setio::read_path(&args.set)?;
    let host = match &args.cube {
        Some(text) => parse_cube(text, set.dim())?,
        None => enclosing_cube(&set)?,
    };
    let regular = extract_regular_subset(&set, &host, args.alpha)?;
    let echo = json!({
        "subcommand": "regular",
        "input": args.set.display().to_string(),
        "alpha": args.alpha,
        "host": host,
    });
    write_set(
        args.output.as_deref(),
        &regular.subset.clone().with_provenance(echo.to_string()),
    )?;
    let summary = json!({
        "subcommand": "regular",
        "input": args.set.display().to_string(),
        "alpha": args.alpha,
        "points": regular.subset.len(),
        "cube": regular.cube,
        "sup_value": regular.sup_value,
        "sub_side": regular.sub_side,
    });
    emit_summary(None, &summary)
}

// ---- mc ----

#[derive(Subcommand)]
enum McCommand {
    /// Fit the dimension of the image under sampled projections.
    Marstrand(MarstrandArgs),
    /// Fraction of sampled projections with a small image, per delta.
    Delta(DeltaArgs),
}

#[derive(clap::Args)]
struct MarstrandArgs {
    /// Experiment config, one JSON file (schema in the guide).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Expected image dimension. Default: min(k, fitted mass slope of the
    /// source set over its dyadic grid).
    #[arg(long, allow_hyphen_values = true)]
    target: Option<f64>,
    /// Report JSON path (default: stdout).
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Also write one CSV row per sample.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Also write a python script that plots the CSV (needs --csv).
    #[arg(long, value_name = "PATH", requires = "csv")]
    plot_script: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DeltaArgs {
    /// Experiment config, one JSON file; its source is the probed set.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Dimension exponent of the source set. Must differ from k.
    #[arg(long)]
    alpha: f64,
    /// Strictly increasing image-size thresholds.
    #[arg(long, value_name = "D1,D2,..")]
    deltas: String,
    /// Report JSON path (default: stdout).
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Also write one CSV row per delta.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Also write a python script that plots the CSV (needs --csv).
    #[arg(long, value_name = "PATH", requires = "csv")]
    plot_script: Option<PathBuf>,
}

fn run_mc(cmd: McCommand) -> Result<()> {
    match cmd {
        McCommand::Marstrand(args) => {
            let cfg = read_config(&args.config)?;
            let target = match args.target {
                Some(t) => t,
                None => derive_target(&cfg)
                    .context("deriving a target from the source set; pass --target instead")?,
            };
            let report = run_projection_experiment(&cfg, target)?;
            write_bytes(args.output.as_deref(), &report.to_json_bytes()?)?;
            if let Some(csv_path) = &args.csv {
                let mut csv =
                    String::from("sample,image_size,counting_slope,mass_slope,degenerate\n");
                for (i, s) in report.per_sample.iter().enumerate() {
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        i,
                        s.image_size,
                        s.counting_slope,
                        s.mass_slope,
                        u8::from(s.degenerate)
                    ));
                }
                fs::write(csv_path, csv)?;
                if let Some(script) = &args.plot_script {
                    fs::write(script, marstrand_plot(csv_path, target))?;
                }
            }
            Ok(())
        }
        McCommand::Delta(args) => {
            let cfg = read_config(&args.config)?;
            let deltas = parse_list::<f64>(&args.deltas)?;
            let set = cfg.source.materialize()?;
            let report = run_delta_experiment(&set, args.alpha, &deltas, &cfg)?;
            write_bytes(args.output.as_deref(), &report.to_json_bytes()?)?;
            if let Some(csv_path) = &args.csv {
                let mut csv = String::from("delta,threshold,fraction\n");
                for ((d, t), f) in report
                    .deltas
                    .iter()
                    .zip(&report.thresholds)
                    .zip(&report.fractions)
                {
                    csv.push_str(&format!("{d},{t},{f}\n"));
                }
                fs::write(csv_path, csv)?;
                if let Some(script) = &args.plot_script {
                    fs::write(script, delta_plot(csv_path))?;
                }
            }
            Ok(())
        }
    }
}

fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))
}

/// Marstrand target when the caller gives none: the source set's own mass
/// dimension estimate, capped at k. Uses the dyadic grid and top-half
/// window regardless of the config's per-sample scales.
fn derive_target(cfg: &ExperimentConfig) -> Result<f64> {
    let set = cfg.source.materialize()?;
    let grid = ScaleGrid::dyadic_for_set(&set)?;
    let profile = mass_profile(&set, &grid)?;
    let fit = fit_dimension(&profile, top_half(grid.len()))?;
    Ok(fit.slope.min(cfg.k as f64))
}

fn marstrand_plot(csv_path: &Path, target: f64) -> String {
    format!(
        r#"#!/usr/bin/env python3
"""Histogram of per-sample slope fits from a projection experiment."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {path:?}
mass = []
with open(path, newline="") as f:
    for row in csv.DictReader(f):
        mass.append(float(row["mass_slope"]))
plt.hist(mass, bins=30)
plt.axvline({target}, linestyle="--", label="target")
plt.xlabel("mass slope of the projected set")
plt.ylabel("samples")
plt.legend()
plt.title(f"{{len(mass)}} sampled projections")
out = path.rsplit(".", 1)[0] + ".png"
plt.savefig(out, dpi=150)
print(out)
"#,
        path = csv_path.display().to_string(),
        target = target,
    )
}

fn delta_plot(csv_path: &Path) -> String {
    format!(
        r#"#!/usr/bin/env python3
"""Small-image fraction against delta, with the linear reference."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {path:?}
deltas, fractions = [], []
with open(path, newline="") as f:
    for row in csv.DictReader(f):
        deltas.append(float(row["delta"]))
        fractions.append(float(row["fraction"]))
plt.plot(deltas, fractions, marker="o", label="empirical fraction")
plt.plot(deltas, [5 * d for d in deltas], linestyle="--", label="5 delta")
plt.xlabel("delta")
plt.ylabel("fraction of small images")
plt.legend()
out = path.rsplit(".", 1)[0] + ".png"
plt.savefig(out, dpi=150)
print(out)
"#,
        path = csv_path.display().to_string(),
    )
}

// ---- shared helpers ----

fn write_set(output: Option<&Path>, set: &LatticeSet) -> Result<()> {
    match output {
        Some(path) => setio::write_jsonl_path(path, set)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let stdout = std::io::stdout();
            setio::write_jsonl(stdout.lock(), set)?;
        }
    }
    Ok(())
}

fn write_bytes(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn emit_summary(path: Option<&Path>, summary: &serde_json::Value) -> Result<()> {
    match path {
        Some(path) => {
            let mut bytes = serde_json::to_vec_pretty(summary)?;
            bytes.push(b'\n');
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        }
        None => println!("{summary}"),
    }
    Ok(())
}

fn parse_scales(text: Option<&str>, set: &LatticeSet) -> Result<ScaleGrid> {
    match text {
        Some(text) => Ok(ScaleGrid::parse(text)?),
        None => Ok(ScaleGrid::dyadic_for_set(set)?),
    }
}

fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<T>().map_err(|e| anyhow!("bad list entry {t:?}: {e}"))
        })
        .collect()
}

fn split_strings(text: &str) -> Vec<String> {
    text.split(',').map(|t| t.trim().to_string()).collect()
}

/// LO:HI:STEP (inclusive of HI up to rounding) or a plain comma list.
fn parse_grid_or_list(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return parse_list::<f64>(text);
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| anyhow!("bad grid start: {e}"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| anyhow!("bad grid end: {e}"))?;
    let step: f64 = parts[2].trim().parse().map_err(|e| anyhow!("bad grid step: {e}"))?;
    if !(step > 0.0 && step.is_finite() && hi >= lo) {
        bail!("grid needs a positive step and end >= start, got {text:?}");
    }
    let mut values = Vec::new();
    for k in 0.. {
        let v = lo + k as f64 * step;
        if v > hi + 1e-9 {
            break;
        }
        values.push(v);
    }
    Ok(values)
}

fn parse_pairs(text: &str) -> Result<Vec<(u32, u32)>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| anyhow!("expected FROM:TO, got {t:?}"))?;
            Ok((
                a.trim().parse().map_err(|e| anyhow!("bad digit {a:?}: {e}"))?,
                b.trim().parse().map_err(|e| anyhow!("bad digit {b:?}: {e}"))?,
            ))
        })
        .collect()
}

fn parse_rows(text: &str) -> Result<Vec<Vec<u8>>> {
    text.split(',')
        .map(|row| {
            let row = row.trim();
            row.chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(anyhow!("matrix rows take only 0 and 1, got {other:?}")),
                })
                .collect()
        })
        .collect()
}

fn parse_cube(text: &str, dim: usize) -> Result<Cube> {
    let mut values = parse_list::<i64>(text)?;
    if values.len() != dim + 1 {
        bail!(
            "cube needs {} numbers for a {dim}-d set (base then side), got {}",
            dim + 1,
            values.len()
        );
    }
    let side = values.pop().expect("non-empty");
    Ok(Cube::new(values, side)?)
}

fn enclosing_cube(set: &LatticeSet) -> Result<Cube> {
    let bounds = set
        .bounds()
        .ok_or_else(|| anyhow!("an empty set has no enclosing cube; pass --cube"))?;
    let side = set.enclosing_side().expect("bounded set");
    Ok(Cube::new(bounds.iter().map(|&(lo, _)| lo).collect(), side)?)
}
