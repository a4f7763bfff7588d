use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kdescan::Steepness;

mod commands;
mod config;
mod error;
mod input;
mod manifest;

use commands::{Matrix, Mode, SeedList};
use error::CliError;

/// Density-weighted DBSCAN and ST-DBSCAN pipelines.
///
/// Every parameter can also be given in a flat `key = value` file passed with
/// --config, keyed by the long flag name (`min-pts = 7`). Flags win over the
/// file. Each run writes `<output>.manifest`, which can be passed back with
/// --config to reproduce the output.
#[derive(Parser)]
#[command(name = "kdescan", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the four-cluster varying-density benchmark.
    Simulate(SimulateArgs),
    /// Cluster a point table with vanilla or density-weighted (ST-)DBSCAN.
    Cluster(ClusterArgs),
    /// Score predicted labels against ground truth.
    Eval(EvalArgs),
    /// Compare DBSCAN, weighted DBSCAN and k-means over many seeds.
    Table1(Table1Args),
    /// Export the sorted k-nearest-neighbour distance profile.
    Knn(KnnArgs),
    /// Export the fitted kernel density on a regular grid.
    Kdegrid(KdegridArgs),
    /// Build a practice table from prescription and location CSVs.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` parameter file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Output CSV with columns id,x,y,truth.
    #[arg(long)]
    output: Option<String>,
    /// Optional second CSV with columns id,truth.
    #[arg(long)]
    truth_output: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Points per Gaussian component (each cluster has a wide and a tight one).
    #[arg(long)]
    per_component: Option<usize>,
    #[arg(long)]
    sigma_wide: Option<f64>,
    #[arg(long)]
    sigma_tight: Option<f64>,
    /// Side of the square whose corners are the cluster centers.
    #[arg(long)]
    side: Option<f64>,
}

#[derive(Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    common: Common,
    /// Planar (x,y) or geographic (latitude,longitude) CSV; extra numeric columns form the series.
    #[arg(long)]
    input: Option<String>,
    /// Labels CSV with columns id,cluster,role.
    #[arg(long)]
    output: Option<String>,
    /// `weighted` (default) or `vanilla`.
    #[arg(long)]
    mode: Option<Mode>,
    /// Spatial radius (km for geographic input).
    #[arg(long)]
    eps1: Option<f64>,
    /// Temporal (DTW) radius; enables spatio-temporal clustering.
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    min_pts: Option<usize>,
    /// `auto` (1/std of densities), `auto*C` (C/std) or a positive number.
    #[arg(long)]
    steepness: Option<Steepness>,
    /// Z-normalize each series before DTW.
    #[arg(long)]
    normalize_series: bool,
    /// Also write a GeoJSON FeatureCollection (geographic input only).
    #[arg(long)]
    geojson: Option<String>,
    /// Also write the density field on a grid.
    #[arg(long)]
    density_grid: Option<String>,
    #[arg(long)]
    grid_size: Option<usize>,
    /// Also write the k-distance profile of the clustered matrix.
    #[arg(long)]
    knn_output: Option<String>,
    #[arg(long)]
    knn_k: Option<usize>,
}

#[derive(Args)]
pub struct EvalArgs {
    #[command(flatten)]
    common: Common,
    /// Predicted labels CSV with columns id,cluster.
    #[arg(long)]
    pred: Option<String>,
    /// Ground-truth CSV with columns id,truth.
    #[arg(long)]
    truth: Option<String>,
    /// Report CSV.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
pub struct Table1Args {
    #[command(flatten)]
    common: Common,
    /// Seeds as ranges and lists, e.g. `1-20` or `1,4,9-12`.
    #[arg(long)]
    seeds: Option<SeedList>,
    /// Comparison CSV with columns seed,method,outliers,correct,incorrect,ari.
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    min_pts: Option<usize>,
    #[arg(long)]
    steepness: Option<Steepness>,
    /// Number of k-means clusters.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    kmeans_restarts: Option<usize>,
    #[arg(long)]
    kmeans_max_iters: Option<usize>,
    #[arg(long)]
    per_component: Option<usize>,
    #[arg(long)]
    sigma_wide: Option<f64>,
    #[arg(long)]
    sigma_tight: Option<f64>,
    #[arg(long)]
    side: Option<f64>,
}

#[derive(Args)]
pub struct KnnArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    input: Option<String>,
    /// CSV with columns rank,distance, largest first.
    #[arg(long)]
    output: Option<String>,
    /// Neighbour rank; use min-pts - 1 for a DBSCAN radius.
    #[arg(long)]
    k: Option<usize>,
    /// `spatial` (default), `weighted` or `temporal`.
    #[arg(long)]
    matrix: Option<Matrix>,
    #[arg(long)]
    steepness: Option<Steepness>,
    #[arg(long)]
    normalize_series: bool,
    /// Also report the radius leaving this fraction of points with fewer than k neighbours.
    #[arg(long)]
    noise_fraction: Option<f64>,
}

#[derive(Args)]
pub struct KdegridArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    input: Option<String>,
    /// CSV with columns x,y,density (lon,lat,density for geographic input).
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    grid_size: Option<usize>,
    /// Margin around the data, in bandwidths.
    #[arg(long)]
    padding: Option<f64>,
}

#[derive(Args)]
pub struct IngestArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    prescriptions: Option<String>,
    /// Practice location CSV.
    #[arg(long)]
    lookup: Option<String>,
    /// Case-insensitive substring of the drug description.
    #[arg(long)]
    drug: Option<String>,
    /// First month, YYYYMM.
    #[arg(long)]
    from: Option<String>,
    /// Last month, YYYYMM.
    #[arg(long)]
    to: Option<String>,
    /// Practice table CSV.
    #[arg(long)]
    output: Option<String>,
    /// Optional CSV of dropped practices with columns practice,reason.
    #[arg(long)]
    dropped_output: Option<String>,
    #[arg(long)]
    practice_column: Option<String>,
    #[arg(long)]
    month_column: Option<String>,
    #[arg(long)]
    drug_column: Option<String>,
    #[arg(long)]
    items_column: Option<String>,
    #[arg(long)]
    lookup_practice_column: Option<String>,
    #[arg(long)]
    postcode_column: Option<String>,
    #[arg(long)]
    latitude_column: Option<String>,
    #[arg(long)]
    longitude_column: Option<String>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Cluster(a) => commands::cluster::run(a),
        Command::Eval(a) => commands::eval::run(a),
        Command::Table1(a) => commands::table1::run(a),
        Command::Knn(a) => commands::knn::run(a),
        Command::Kdegrid(a) => commands::kdegrid::run(a),
        Command::Ingest(a) => commands::ingest::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or(&msg).trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.kind());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
