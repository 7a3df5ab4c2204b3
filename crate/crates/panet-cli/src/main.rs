//! `panet`: sweeps and reports for the two-stage parametric-amplifier ring.
//!
//! Five subcommands cover the pipeline: `build` writes a covariance matrix,
//! `ppt` scans every bipartition for entanglement, `entropy` certifies the
//! minimum entanglement entropy over subsystems, `moments` extracts
//! photon-number statistics, and `reduce` undoes a window's internal
//! squeezers to expose its decoupled core.
//!
//! Sweeps fan out over a worker pool, but rows are always assembled in
//! `(s1, s2, partition)` order after the parallel section, so two runs of
//! the same command produce byte-identical files regardless of `--threads`.

mod grid;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use panet::entropy::{
    e2n, gaussian_entropy, reduce_consecutive, reduced_cm, EnumerationMode, EntropyReport, Subset,
};
use panet::moments::{number_difference_variance, MomentsResult};
use panet::network::{build_network, NetworkSpec};
use panet::ppt::{classify_partitions, enumerate_bipartitions, gme_verdict, ppt_nu, PptResult};
use panet::SEPARABILITY_TOL;
use rayon::prelude::*;
use report::{float15, json_escape, Manifest};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Analysis(#[from] panet::Error),
    #[error("{0}")]
    Usage(String),
    #[error("config {0}: {1}")]
    Config(String, serde_json::Error),
    #[error("cannot read {0}: {1}")]
    Read(String, std::io::Error),
    #[error("cannot write {0}: {1}")]
    Write(String, std::io::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Parser)]
#[command(
    name = "panet",
    version,
    about = "Gaussian analysis of a two-stage parametric-amplifier ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the network covariance matrix and write it as JSON.
    Build(CommonArgs),
    /// Smallest PPT symplectic eigenvalue for every bipartition.
    Ppt(PptArgs),
    /// Entanglement entropies and the certified minimum over subsystems.
    Entropy(EntropyArgs),
    /// Photon-number difference variances from the covariance matrix.
    Moments(CommonArgs),
    /// Undo a window's internal squeezers and report the decoupled core.
    Reduce(ReduceArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Ring size 2N (even, at least 4).
    #[arg(long)]
    modes: Option<usize>,

    /// Stage-1 squeezing degree.
    #[arg(long)]
    s1: Option<f64>,

    /// Stage-2 squeezing degree.
    #[arg(long)]
    s2: Option<f64>,

    /// Sweep s1 = s2 over START:STOP:STEP (endpoints included).
    #[arg(long, value_name = "RANGE", value_parser = grid::parse_range, conflicts_with = "grid")]
    diag: Option<grid::Range>,

    /// Sweep (s1, s2) over the cartesian square of START:STOP:STEP.
    #[arg(long, value_name = "RANGE", value_parser = grid::parse_range)]
    grid: Option<grid::Range>,

    /// Output path; stdout when omitted. A `<PATH>.manifest.json` sidecar
    /// records the run's conventions.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// csv for sweep surfaces, json for single-point reports.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Worker threads for sweeps; 0 uses all available cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// JSON file with {"modes": .., "s1": .., "s2": .., "theta": ..};
    /// explicit flags override its fields.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PptArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Exit nonzero unless every bipartition at every point is entangled.
    #[arg(long)]
    verdict: bool,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Candidate subsystems for the minimization.
    #[arg(long, value_enum, default_value = "consecutive")]
    subsets: SubsetsArg,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Ring-consecutive window, comma-separated mode indices (e.g. 1,2,3,4).
    #[arg(long, required = true, value_delimiter = ',', value_name = "MODES")]
    window: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SubsetsArg {
    /// Every subset of up to half the modes (guarded at 12 modes).
    All,
    /// Ring-consecutive windows of length at most 4.
    Consecutive,
}

#[derive(Debug, Clone, Copy)]
enum Sweep {
    Point(f64, f64),
    Diag(grid::Range),
    Grid(grid::Range),
}

impl Sweep {
    fn points(&self) -> Vec<(f64, f64)> {
        match self {
            Sweep::Point(s1, s2) => vec![(*s1, *s2)],
            Sweep::Diag(range) => range.points().into_iter().map(|s| (s, s)).collect(),
            Sweep::Grid(range) => {
                let axis = range.points();
                axis.iter()
                    .flat_map(|&s1| axis.iter().map(move |&s2| (s1, s2)))
                    .collect()
            }
        }
    }

    fn is_point(&self) -> bool {
        matches!(self, Sweep::Point(..))
    }

    fn manifest_json(&self) -> String {
        match self {
            Sweep::Point(s1, s2) => format!(
                "{{\"kind\": \"point\", \"s1\": {}, \"s2\": {}}}",
                float15(*s1),
                float15(*s2)
            ),
            Sweep::Diag(r) => format!(
                "{{\"kind\": \"diag\", \"start\": {}, \"stop\": {}, \"step\": {}}}",
                float15(r.start),
                float15(r.stop),
                float15(r.step)
            ),
            Sweep::Grid(r) => format!(
                "{{\"kind\": \"grid\", \"start\": {}, \"stop\": {}, \"step\": {}}}",
                float15(r.start),
                float15(r.stop),
                float15(r.step)
            ),
        }
    }
}

fn resolve_spec(args: &CommonArgs) -> Result<(NetworkSpec, Sweep), CliError> {
    let config: Option<NetworkSpec> = match &args.config {
        Some(path) => {
            let name = path.display().to_string();
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Read(name.clone(), e))?;
            let spec: NetworkSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Config(name, e))?;
            spec.validate()?;
            Some(spec)
        }
        None => None,
    };
    let modes = args
        .modes
        .or(config.map(|c| c.n_modes))
        .ok_or_else(|| CliError::Usage("--modes is required (directly or via --config)".into()))?;
    let s1 = args.s1.or(config.map(|c| c.s1)).unwrap_or(0.0);
    let s2 = args.s2.or(config.map(|c| c.s2)).unwrap_or(0.0);
    let theta = config.map_or(std::f64::consts::PI, |c| c.theta);
    let spec = NetworkSpec::new(modes, s1, s2)?.with_theta(theta);
    spec.validate()?;
    let sweep = match (args.diag, args.grid) {
        (Some(range), None) => Sweep::Diag(range),
        (None, Some(range)) => Sweep::Grid(range),
        (None, None) => Sweep::Point(s1, s2),
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--diag and --grid are exclusive".into()))
        }
    };
    Ok((spec, sweep))
}

fn resolve_format(
    command: &str,
    requested: Option<Format>,
    sweeping: bool,
) -> Result<Format, CliError> {
    match requested {
        Some(Format::Json) if sweeping => Err(CliError::Usage(format!(
            "{command}: a JSON report covers a single point; sweeps emit CSV"
        ))),
        Some(format) => Ok(format),
        None => Ok(if sweeping { Format::Csv } else { Format::Json }),
    }
}

fn single_point_only(command: &str, args: &CommonArgs) -> Result<(), CliError> {
    if args.diag.is_some() || args.grid.is_some() {
        return Err(CliError::Usage(format!(
            "{command} runs at a single point; drop --diag/--grid"
        )));
    }
    if args.format == Some(Format::Csv) {
        return Err(CliError::Usage(format!(
            "{command} emits a JSON report; --format csv is not available"
        )));
    }
    Ok(())
}

fn worker_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

fn emit(out: Option<&Path>, body: &str, manifest: &Manifest) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let name = path.display().to_string();
            std::fs::write(path, body).map_err(|e| CliError::Write(name, e))?;
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".manifest.json");
            let sidecar = PathBuf::from(sidecar);
            std::fs::write(&sidecar, manifest.render())
                .map_err(|e| CliError::Write(sidecar.display().to_string(), e))?;
        }
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Write("(stdout)".into(), e))?;
        }
    }
    Ok(())
}

fn run_build(args: &CommonArgs) -> Result<i32, CliError> {
    single_point_only("build", args)?;
    let (spec, sweep) = resolve_spec(args)?;
    let cm = build_network(spec)?;
    let manifest = Manifest {
        command: "build",
        spec: &spec,
        spec_with_squeezing: true,
        sweep_json: sweep.manifest_json(),
        summary_json: Some(format!(
            "{{\"pure\": {}}}",
            cm.is_pure(panet::TOL_PHYSICAL)
        )),
    };
    emit(args.out.as_deref(), &report::cm_json(&cm), &manifest)?;
    Ok(0)
}

fn run_ppt(args: &PptArgs) -> Result<i32, CliError> {
    let (spec, sweep) = resolve_spec(&args.common)?;
    let format = resolve_format("ppt", args.common.format, !sweep.is_point())?;
    let points = sweep.points();
    let partitions = enumerate_bipartitions(spec.n_modes)?;
    let pool = worker_pool(args.common.threads)?;
    let per_point: Vec<Vec<PptResult>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(s1, s2)| {
                let cm = build_network(NetworkSpec { s1, s2, ..spec })?;
                partitions.iter().map(|p| ppt_nu(&cm, p)).collect()
            })
            .collect::<panet::Result<_>>()
    })?;
    let classes = classify_partitions(spec, &points, &partitions)?;
    let class_of: Vec<usize> = partitions
        .iter()
        .map(|p| {
            classes
                .iter()
                .position(|c| c.contains(p))
                .expect("every partition was classified")
        })
        .collect();
    let gme_everywhere = per_point
        .iter()
        .all(|results| results.iter().all(|r| r.inseparable));

    let body = match format {
        Format::Csv => {
            let mut out = String::from("s1,s2,partition_label,shape,class_id,nu,inseparable\n");
            for ((s1, s2), results) in points.iter().zip(&per_point) {
                for (idx, r) in results.iter().enumerate() {
                    let (small, large) = r.bipartition.shape();
                    let _ = writeln!(
                        out,
                        "{},{},{},{}x{},{},{},{}",
                        float15(*s1),
                        float15(*s2),
                        r.bipartition.label(),
                        small,
                        large,
                        class_of[idx],
                        float15(r.nu),
                        r.inseparable
                    );
                }
            }
            out
        }
        Format::Json => {
            let cm = build_network(spec)?;
            let verdict = gme_verdict(&cm, SEPARABILITY_TOL)?;
            let mut out = String::from("{\n");
            let _ = writeln!(out, "  \"modes\": {},", verdict.n_modes);
            let _ = writeln!(out, "  \"spec\": {},", report::spec_json(&spec, true));
            let _ = writeln!(out, "  \"tol\": {},", float15(verdict.tol));
            let _ = writeln!(out, "  \"gme\": {},", verdict.gme);
            let _ = writeln!(out, "  \"min_nu\": {},", float15(verdict.min_nu));
            let _ = writeln!(out, "  \"max_nu\": {},", float15(verdict.max_nu));
            let _ = writeln!(
                out,
                "  \"witness\": \"{}\",",
                json_escape(verdict.witness.label())
            );
            out.push_str("  \"results\": [\n");
            for (idx, r) in verdict.results.iter().enumerate() {
                let (small, large) = r.bipartition.shape();
                let comma = if idx + 1 < verdict.results.len() { "," } else { "" };
                let _ = writeln!(
                    out,
                    "    {{\"partition\": \"{}\", \"shape\": \"{}x{}\", \"class_id\": {}, \"nu\": {}, \"inseparable\": {}}}{comma}",
                    json_escape(r.bipartition.label()),
                    small,
                    large,
                    class_of[idx],
                    float15(r.nu),
                    r.inseparable
                );
            }
            out.push_str("  ]\n}\n");
            out
        }
    };

    let summary = format!(
        "{{\"points\": {}, \"partitions\": {}, \"classes\": {}, \"gme_at_every_point\": {}}}",
        points.len(),
        partitions.len(),
        classes.len(),
        gme_everywhere
    );
    let manifest = Manifest {
        command: "ppt",
        spec: &spec,
        spec_with_squeezing: sweep.is_point(),
        sweep_json: sweep.manifest_json(),
        summary_json: Some(summary),
    };
    emit(args.common.out.as_deref(), &body, &manifest)?;

    if args.verdict && !gme_everywhere {
        let failure = points
            .iter()
            .zip(&per_point)
            .find_map(|(pt, results)| {
                results.iter().find(|r| !r.inseparable).map(|r| (pt, r))
            })
            .expect("a failing point exists");
        eprintln!(
            "panet: separability not excluded at (s1, s2) = ({}, {}) across {} (nu = {})",
            float15(failure.0 .0),
            float15(failure.0 .1),
            failure.1.bipartition.label(),
            float15(failure.1.nu)
        );
        return Ok(2);
    }
    Ok(0)
}

fn enumeration_mode(arg: SubsetsArg) -> EnumerationMode {
    match arg {
        SubsetsArg::All => EnumerationMode::AllSubsets,
        SubsetsArg::Consecutive => EnumerationMode::ConsecutiveOnly,
    }
}

fn mode_name(mode: EnumerationMode) -> &'static str {
    match mode {
        EnumerationMode::AllSubsets => "all_subsets",
        EnumerationMode::ConsecutiveOnly => "consecutive_only",
    }
}

fn run_entropy(args: &EntropyArgs) -> Result<i32, CliError> {
    let (spec, sweep) = resolve_spec(&args.common)?;
    let format = resolve_format("entropy", args.common.format, !sweep.is_point())?;
    let mode = enumeration_mode(args.subsets);
    let points = sweep.points();
    let pool = worker_pool(args.common.threads)?;
    let reports: Vec<EntropyReport> = pool.install(|| {
        points
            .par_iter()
            .map(|&(s1, s2)| e2n(NetworkSpec { s1, s2, ..spec }, mode))
            .collect::<panet::Result<_>>()
    })?;

    let body = match format {
        Format::Csv => {
            let mut out = String::from("s1,s2,subset,size,entropy_bits\n");
            if sweep.is_point() {
                let report = &reports[0];
                for entry in &report.entries {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        float15(report.spec.s1),
                        float15(report.spec.s2),
                        entry.subset.label(),
                        entry.subset.len(),
                        float15(entry.entropy_bits)
                    );
                }
            } else {
                for report in &reports {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        float15(report.spec.s1),
                        float15(report.spec.s2),
                        report.argmin.label(),
                        report.argmin.len(),
                        float15(report.e2n_bits)
                    );
                }
            }
            out
        }
        Format::Json => {
            let report = &reports[0];
            let mut out = String::from("{\n");
            let _ = writeln!(out, "  \"spec\": {},", report::spec_json(&spec, true));
            let _ = writeln!(out, "  \"mode\": \"{}\",", mode_name(mode));
            let _ = writeln!(out, "  \"e2n_bits\": {},", float15(report.e2n_bits));
            let _ = writeln!(
                out,
                "  \"argmin_subset\": \"{}\",",
                json_escape(&report.argmin.label())
            );
            out.push_str("  \"entries\": [\n");
            for (idx, entry) in report.entries.iter().enumerate() {
                let comma = if idx + 1 < report.entries.len() { "," } else { "" };
                let _ = writeln!(
                    out,
                    "    {{\"subset\": \"{}\", \"size\": {}, \"entropy_bits\": {}}}{comma}",
                    json_escape(&entry.subset.label()),
                    entry.subset.len(),
                    float15(entry.entropy_bits)
                );
            }
            out.push_str("  ]\n}\n");
            out
        }
    };

    let mut summary = format!("{{\"mode\": \"{}\", \"e2n\": [", mode_name(mode));
    for (idx, report) in reports.iter().enumerate() {
        let comma = if idx + 1 < reports.len() { ", " } else { "" };
        let _ = write!(
            summary,
            "{{\"s1\": {}, \"s2\": {}, \"e2n_bits\": {}, \"argmin_subset\": \"{}\"}}{comma}",
            float15(report.spec.s1),
            float15(report.spec.s2),
            float15(report.e2n_bits),
            json_escape(&report.argmin.label())
        );
    }
    summary.push_str("]}");
    let manifest = Manifest {
        command: "entropy",
        spec: &spec,
        spec_with_squeezing: sweep.is_point(),
        sweep_json: sweep.manifest_json(),
        summary_json: Some(summary),
    };
    emit(args.common.out.as_deref(), &body, &manifest)?;
    Ok(0)
}

fn run_moments(args: &CommonArgs) -> Result<i32, CliError> {
    let (spec, sweep) = resolve_spec(args)?;
    let format = resolve_format("moments", args.format, !sweep.is_point())?;
    let points = sweep.points();
    let pairs: Vec<(usize, usize)> = (0..spec.n_modes)
        .flat_map(|i| ((i + 1)..spec.n_modes).map(move |j| (i, j)))
        .collect();
    let pool = worker_pool(args.threads)?;
    let per_point: Vec<Vec<MomentsResult>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(s1, s2)| {
                let cm = build_network(NetworkSpec { s1, s2, ..spec })?;
                pairs
                    .iter()
                    .map(|&(i, j)| number_difference_variance(&cm, i, j))
                    .collect()
            })
            .collect::<panet::Result<_>>()
    })?;

    let body = match format {
        Format::Csv => {
            let mut out = String::from("s1,s2,mode_i,mode_j,v_diff,nbar_i,nbar_j\n");
            for ((s1, s2), results) in points.iter().zip(&per_point) {
                for r in results {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        float15(*s1),
                        float15(*s2),
                        r.mode_i,
                        r.mode_j,
                        float15(r.v_diff),
                        float15(r.nbar_i),
                        float15(r.nbar_j)
                    );
                }
            }
            out
        }
        Format::Json => {
            let mut out = String::from("{\n");
            let _ = writeln!(out, "  \"spec\": {},", report::spec_json(&spec, true));
            out.push_str("  \"pairs\": [\n");
            let results = &per_point[0];
            for (idx, r) in results.iter().enumerate() {
                let comma = if idx + 1 < results.len() { "," } else { "" };
                let _ = writeln!(
                    out,
                    "    {{\"mode_i\": {}, \"mode_j\": {}, \"v_diff\": {}, \"nbar_i\": {}, \"nbar_j\": {}}}{comma}",
                    r.mode_i,
                    r.mode_j,
                    float15(r.v_diff),
                    float15(r.nbar_i),
                    float15(r.nbar_j)
                );
            }
            out.push_str("  ]\n}\n");
            out
        }
    };

    let summary = format!(
        "{{\"points\": {}, \"pairs_per_point\": {}}}",
        points.len(),
        pairs.len()
    );
    let manifest = Manifest {
        command: "moments",
        spec: &spec,
        spec_with_squeezing: sweep.is_point(),
        sweep_json: sweep.manifest_json(),
        summary_json: Some(summary),
    };
    emit(args.out.as_deref(), &body, &manifest)?;
    Ok(0)
}

fn run_reduce(args: &ReduceArgs) -> Result<i32, CliError> {
    single_point_only("reduce", &args.common)?;
    let (spec, sweep) = resolve_spec(&args.common)?;
    let window = Subset::new(&args.window, spec.n_modes)?;
    let cm = build_network(spec)?;
    let kept = reduced_cm(&cm, &window)?;
    let entropy_before = gaussian_entropy(&kept)?;
    let reduced = reduce_consecutive(&cm, &window, spec)?;
    let entropy_after = gaussian_entropy(&reduced)?;

    let locals = window.len();
    let mut isolated = Vec::new();
    let mut vacuum = Vec::new();
    for k in 0..locals {
        let decoupled = (0..locals).filter(|&l| l != k).all(|l| {
            reduced
                .block(k, l)
                .map(|b| b.abs().max() < 1e-10)
                .unwrap_or(false)
        });
        if decoupled {
            isolated.push(k);
            let own = reduced.block(k, k).expect("diagonal block exists");
            let off_vacuum = (own[(0, 0)] - 1.0)
                .abs()
                .max((own[(1, 1)] - 1.0).abs())
                .max(own[(0, 1)].abs())
                .max(own[(1, 0)].abs());
            if off_vacuum < 1e-10 {
                vacuum.push(k);
            }
        }
    }
    let list = |v: &[usize]| {
        let items: Vec<String> = v.iter().map(|m| m.to_string()).collect();
        format!("[{}]", items.join(", "))
    };

    let mut body = String::from("{\n");
    let _ = writeln!(body, "  \"spec\": {},", report::spec_json(&spec, true));
    let _ = writeln!(body, "  \"window\": \"{}\",", json_escape(&window.label()));
    let _ = writeln!(body, "  \"entropy_before_bits\": {},", float15(entropy_before));
    let _ = writeln!(body, "  \"entropy_after_bits\": {},", float15(entropy_after));
    let _ = writeln!(body, "  \"isolated_local_modes\": {},", list(&isolated));
    let _ = writeln!(body, "  \"vacuum_local_modes\": {},", list(&vacuum));
    let reduced_json = report::cm_json(&reduced);
    let indented = reduced_json
        .trim_end()
        .lines()
        .enumerate()
        .map(|(i, line)| {
            if i == 0 {
                line.to_string()
            } else {
                format!("  {line}")
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let _ = writeln!(body, "  \"reduced\": {indented}");
    body.push_str("}\n");

    let summary = format!(
        "{{\"window\": \"{}\", \"entropy_before_bits\": {}, \"entropy_after_bits\": {}, \"isolated_local_modes\": {}, \"vacuum_local_modes\": {}}}",
        json_escape(&window.label()),
        float15(entropy_before),
        float15(entropy_after),
        list(&isolated),
        list(&vacuum)
    );
    let manifest = Manifest {
        command: "reduce",
        spec: &spec,
        spec_with_squeezing: true,
        sweep_json: sweep.manifest_json(),
        summary_json: Some(summary),
    };
    emit(args.common.out.as_deref(), &body, &manifest)?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Build(args) => run_build(args),
        Command::Ppt(args) => run_ppt(args),
        Command::Entropy(args) => run_entropy(args),
        Command::Moments(args) => run_moments(args),
        Command::Reduce(args) => run_reduce(args),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => process::exit(code),
        Err(err) => {
            eprintln!("panet: {err}");
            process::exit(1);
        }
    }
}
