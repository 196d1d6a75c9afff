use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stereo_bench::bench::{run_benchmark, RunConfig};
use stereo_bench::eval::{bad_pixel_rate, joint_valid_count, pearson_correlation};
use stereo_bench::ingest::load_pfm;
use stereo_bench::matching::DisparityMap;

#[derive(Parser)]
#[command(name = "stereo-bench", about = "Stereo matching benchmark harness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark over a dataset directory.
    Run(RunArgs),
    /// Score one disparity PFM against a ground-truth PFM.
    Score(ScoreArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value config file (dotted keys, e.g. bp.iterations=30).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset root containing one subdirectory per scene.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Comma-separated subset of BM,BMDP,BP,GF,HOG,DWAC.
    #[arg(long)]
    methods: Option<String>,
    /// Comma-separated subset of SAD,MSE,NCC.
    #[arg(long)]
    costfns: Option<String>,
    /// Resize factor in (0, 1].
    #[arg(long)]
    scale: Option<f64>,
    /// Output directory for disparity maps and reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the full method x costfn cross product.
    #[arg(long)]
    all: bool,
    /// Worker threads (0 = auto).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Estimated disparity map (PFM).
    #[arg(long = "left-disp")]
    left_disp: PathBuf,
    /// Ground-truth disparity map (PFM).
    #[arg(long)]
    gt: PathBuf,
}

fn build_config(args: &RunArgs) -> stereo_bench::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    if let Some(dataset) = &args.dataset {
        cfg.dataset_root = dataset.clone();
    }
    if let Some(methods) = &args.methods {
        cfg.set("methods", methods)?;
    }
    if let Some(costfns) = &args.costfns {
        cfg.set("costfns", costfns)?;
    }
    if let Some(scale) = args.scale {
        cfg.scale = scale;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if args.all {
        cfg.all = true;
    }
    if let Some(threads) = args.threads {
        cfg.threads = threads;
    }
    Ok(cfg)
}

fn cmd_run(args: &RunArgs) -> stereo_bench::Result<ExitCode> {
    let cfg = build_config(args)?;
    let report = run_benchmark(&cfg)?;

    for s in &report.skipped_dirs {
        eprintln!("skip: scene dir `{}`: {}", s.dir, s.reason);
    }
    for line in &report.skipped_combos {
        eprintln!("{line}");
    }
    for (scene, err) in &report.failures {
        eprintln!("error: scene `{scene}`: {err}");
    }

    println!(
        "{} results over {} scene(s); reports: {} and {}",
        report.results.len(),
        report.results.iter().map(|r| &r.scene_id).collect::<std::collections::BTreeSet<_>>().len(),
        report.csv_path.display(),
        report.summary_path.display()
    );
    print!("{}", report.summary_text);

    Ok(if report.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_score(args: &ScoreArgs) -> stereo_bench::Result<ExitCode> {
    let est = load_pfm(&args.left_disp)?;
    let gt = load_pfm(&args.gt)?;
    let dm = DisparityMap {
        width: est.width,
        height: est.height,
        values: est.disparities,
        valid: est.valid,
    };
    let correlation = pearson_correlation(&dm, &gt)?;
    let bad2 = bad_pixel_rate(&dm, &gt, 2.0)?;
    let bad5 = bad_pixel_rate(&dm, &gt, 5.0)?;
    let valid = joint_valid_count(&dm, &gt)?;
    println!("correlation={correlation:.6}");
    println!("bad2={bad2:.6}");
    println!("bad5={bad5:.6}");
    println!("valid_pixels={valid}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Score(args) => cmd_score(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
