use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gridrough::pipeline::{self, Error, RunConfig, RULES_TEXT};
use gridrough::{palette, ppm, synth, table_io};
use gridrough_core::{ClusteringParams, Gamma};

#[derive(Parser)]
#[command(name = "gridrough", version, about = "Grid-density rough clustering and rough-set rule classification of RGB rasters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ClusterOpts {
    /// Maximum HSI distance from the seed pixel for a pixel to count as similar
    #[arg(long, default_value_t = 0.1)]
    theta: f64,
    /// Cell-claiming threshold in [0, 1], or "auto"
    #[arg(long, default_value = "auto", value_parser = parse_gamma)]
    gamma: Gamma,
    /// Multiplier on the seed cell's ratio when --gamma is auto
    #[arg(long, default_value_t = 0.9)]
    theta_fraction: f64,
    /// Grid cells per image side
    #[arg(long, default_value_t = 32)]
    grid_n: usize,
    /// Skip boundary refinement
    #[arg(long)]
    no_refine: bool,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct BinsOpt {
    /// Equal-width bins per H, S and I channel
    #[arg(long, default_value_t = 8)]
    bins: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster an image and write the cluster map and reports
    Cluster {
        image: PathBuf,
        #[command(flatten)]
        opts: ClusterOpts,
    },
    /// Induce rules from the cluster map and a labels file
    Induce {
        image: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[command(flatten)]
        opts: ClusterOpts,
        #[command(flatten)]
        bins: BinsOpt,
    },
    /// Classify an image with a rule file
    Classify {
        image: PathBuf,
        /// Rule file (text or JSON); defaults to rules.txt in the output directory
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Ground-truth label map to score against
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        opts: ClusterOpts,
    },
    /// Cluster, induce and classify in one go
    Pipeline {
        image: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        opts: ClusterOpts,
        #[command(flatten)]
        bins: BinsOpt,
    },
    /// Approximations and rules for a delimited decision table
    Table { file: PathBuf },
    /// Write a synthetic scene and its ground truth
    Synth {
        /// One of: halves, stripes, ring, disks, l-shape, u-shape, spiral, two-shade
        scene: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_gamma(s: &str) -> Result<Gamma, String> {
    if s == "auto" {
        return Ok(Gamma::Auto);
    }
    s.parse::<f64>()
        .map(Gamma::Fixed)
        .map_err(|_| format!("expected \"auto\" or a number, got {s:?}"))
}

fn config(image: PathBuf, opts: ClusterOpts, bins: Option<BinsOpt>) -> RunConfig {
    RunConfig {
        input: image,
        out_dir: opts.out,
        params: ClusteringParams {
            theta_band: opts.theta,
            gamma: opts.gamma,
            theta_fraction: opts.theta_fraction,
            grid_n: opts.grid_n,
        },
        bins: bins.map_or(8, |b| b.bins),
        refine: !opts.no_refine,
    }
}

fn run(cli: Cli, log: &mut dyn Write) -> Result<(), Error> {
    match cli.command {
        Command::Cluster { image, opts } => {
            pipeline::cmd_cluster(&config(image, opts, None), log)?;
        }
        Command::Induce { image, labels, opts, bins } => {
            pipeline::cmd_induce(&config(image, opts, Some(bins)), &labels, log)?;
        }
        Command::Classify { image, rules, truth, opts } => {
            let cfg = config(image.clone(), opts, None);
            let rules = rules.unwrap_or_else(|| cfg.out(RULES_TEXT));
            pipeline::cmd_classify(&cfg, &rules, &image, truth.as_deref(), log)?;
        }
        Command::Pipeline { image, labels, truth, opts, bins } => {
            pipeline::cmd_pipeline(&config(image, opts, Some(bins)), &labels, truth.as_deref(), log)?;
        }
        Command::Table { file } => {
            let text = fs::read_to_string(&file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let table = table_io::parse_table(&text).map_err(|e| Error::Data(format!("{}: {e}", file.display())))?;
            let out = table_io::table_report(&table).map_err(|e| Error::Data(e.to_string()))?;
            let _ = log.write_all(out.as_bytes());
        }
        Command::Synth { scene, out } => {
            let s = synth::named(&scene).ok_or_else(|| {
                Error::Param(format!("unknown scene {scene:?}; choose one of {}", synth::NAMES.join(", ")))
            })?;
            fs::create_dir_all(&out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            let image_path = out.join(format!("{scene}.ppm"));
            let truth_path = out.join(format!("{scene}-truth.ppm"));
            ppm::save_ppm(&s.render(), &image_path).map_err(|e| Error::Io(format!("{}: {e}", image_path.display())))?;
            palette::save_label_map(&s.truth(), &truth_path)
                .map_err(|e| Error::Io(format!("{}: {e}", truth_path.display())))?;
            let _ = writeln!(log, "wrote {} and {}", image_path.display(), truth_path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gridrough: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
