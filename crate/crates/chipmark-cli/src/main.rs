//! `chipmark` — watermark design analysis and simulation campaigns.
//!
//! Analysis commands (`degradation`, `pfa`, `pmd-curve`, `min-r`) read
//! the `[watermark]` and `[radio]` sections of a config file; run
//! commands (`authentic-run`, `spoof-run`) also read `[campaign]`.
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chipmark::harness::{
    self, authentic_campaign, load_analysis_config, load_campaign_config, parse_hex_seed,
    spoof_campaign, CampaignResult,
};
use chipmark::security::{min_r_search, pfa, pmd_curve};
use chipmark::watermark::{degradation_db, derive_mask, generate_base_code, Seed};
use chipmark::{Error, Result};

/// Environment variable bounding the rayon worker count.
const WORKERS_ENV: &str = "CHIPMARK_WORKERS";

#[derive(Parser)]
#[command(
    name = "chipmark",
    version,
    about = "Combinatorial ranging-code watermarks: design analysis and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the TOML configuration file.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Print a base ranging code as one line of space-separated chips.
    GenCode {
        /// Code family: 1..=32 for 1023-chip Gold codes, 0 for a
        /// maximal-length sequence at any n = 2^k - 1.
        #[arg(long, default_value_t = 1)]
        family: u32,
        /// Chips per code.
        #[arg(long, default_value_t = 1023)]
        n: usize,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print derived watermark masks, one `epoch,idx1,...` line per epoch.
    GenMask {
        #[command(flatten)]
        config: ConfigArg,
        /// First epoch to derive.
        #[arg(long, default_value_t = 0)]
        epoch_start: u64,
        /// Number of consecutive epochs.
        #[arg(long, default_value_t = 1)]
        epochs: u64,
        /// Master seed as hex, overriding the config file.
        #[arg(long)]
        seed: Option<String>,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the correlation loss of the design, in dB.
    Degradation {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Print the probability of false alarm.
    Pfa {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
    },
    /// Write the exact missed-detection curve over every strategy.
    PmdCurve {
        #[command(flatten)]
        config: ConfigArg,
        /// Output CSV path (`s,pmd,log2_pmd`).
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        /// Override the design's inverted-chip count.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Print the smallest r meeting the security target.
    MinR {
        #[command(flatten)]
        config: ConfigArg,
        /// Security level: both probabilities must beat 2^-bits.
        #[arg(long, default_value_t = 32)]
        target_bits: u32,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
    },
    /// Simulate an authentic pass and write its decision exports.
    AuthenticRun {
        #[command(flatten)]
        config: ConfigArg,
        /// Output directory for the CSV exports.
        #[arg(long)]
        out: PathBuf,
        /// Master seed as hex, overriding the config file.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Run the spoof-injection experiment and write its exports.
    SpoofRun {
        #[command(flatten)]
        config: ConfigArg,
        /// Output directory for the CSV exports.
        #[arg(long)]
        out: PathBuf,
        /// Master seed as hex, overriding the config file.
        #[arg(long)]
        seed: Option<String>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        }),
    }
}

fn write_campaign_exports(dir: &PathBuf, result: &CampaignResult) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    harness::io::write_decisions_csv(&dir.join("decisions.csv"), result)?;
    harness::io::write_ellipses_csv(&dir.join("ellipses.csv"), result)?;
    harness::io::write_predictions_csv(&dir.join("predictions.csv"), result)?;
    harness::io::write_decision_log(&dir.join("decision_log.csv"), &result.decisions)?;
    Ok(())
}

fn campaign_config(config: &ConfigArg, seed: Option<&String>) -> Result<harness::CampaignConfig> {
    let mut campaign = load_campaign_config(&config.config)?;
    if let Some(hex) = seed {
        campaign.master_seed = parse_hex_seed(hex)?;
    }
    Ok(campaign)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenCode { family, n, out } => {
            let code = generate_base_code(family, n)?;
            emit(out.as_ref(), &(code.export_line() + "\n"))
        }
        Command::GenMask {
            config,
            epoch_start,
            epochs,
            seed,
            out,
        } => {
            let analysis = load_analysis_config(&config.config)?;
            // seed from the flag, else from the file's campaign section
            let master = match seed {
                Some(hex) => parse_hex_seed(&hex)?,
                None => load_campaign_config(&config.config)?.master_seed,
            };
            let tree = chipmark::SeedTree::new(&master);
            let mask_seed = Seed::new(tree.stream("mask-key", &[]).as_bytes().to_vec(), 0)
                .expect("stream ids satisfy the key length requirement");
            let mut text = String::new();
            for epoch in epoch_start..epoch_start + epochs {
                let mask = derive_mask(&mask_seed.at_epoch(epoch), &analysis.params);
                text.push_str(&mask.export_line(epoch));
                text.push('\n');
            }
            emit(out.as_ref(), &text)
        }
        Command::Degradation { config } => {
            let analysis = load_analysis_config(&config.config)?;
            let db = degradation_db(
                analysis.params.chips_per_code(),
                analysis.params.inverted_chips(),
            )?;
            println!("{db:.4}");
            Ok(())
        }
        Command::Pfa { config, threshold } => {
            let analysis = load_analysis_config(&config.config)?;
            let value = pfa(&analysis.params, &analysis.radio, threshold);
            println!("{value:.3e}");
            Ok(())
        }
        Command::PmdCurve {
            config,
            out,
            threshold,
            r,
        } => {
            let analysis = load_analysis_config(&config.config)?;
            let params = match r {
                None => analysis.params,
                Some(r) => analysis.params.with_inverted_chips(r)?,
            };
            let curve = pmd_curve(&params, &analysis.radio, threshold)?;
            harness::io::write_pmd_csv(&out, &curve)?;
            let (worst_s, worst_pmd) = curve.max();
            println!(
                "wrote {} strategies to {}; worst pmd {worst_pmd:.3e} at s={worst_s}",
                curve.s_values().len(),
                out.display()
            );
            Ok(())
        }
        Command::MinR {
            config,
            target_bits,
            threshold,
        } => {
            let analysis = load_analysis_config(&config.config)?;
            let target = 2f64.powi(-(target_bits as i32));
            match min_r_search(
                analysis.params.chips_per_code(),
                analysis.params.codes_per_decision(),
                &analysis.radio,
                target,
                threshold,
            )? {
                Some(r) => println!("{r}"),
                None => println!("infeasible"),
            }
            Ok(())
        }
        Command::AuthenticRun { config, out, seed } => {
            let campaign = campaign_config(&config, seed.as_ref())?;
            let result = authentic_campaign(&campaign)?;
            write_campaign_exports(&out, &result)?;
            println!(
                "wrote {} authentic decisions to {}",
                result.decisions.len(),
                out.display()
            );
            Ok(())
        }
        Command::SpoofRun { config, out, seed } => {
            let campaign = campaign_config(&config, seed.as_ref())?;
            let result = spoof_campaign(&campaign)?;
            write_campaign_exports(&out, &result)?;
            println!(
                "wrote {} decisions across {} labels to {}",
                result.decisions.len(),
                campaign.strategies.len() + 1,
                out.display()
            );
            Ok(())
        }
    }
}

fn init_workers() {
    if let Ok(value) = std::env::var(WORKERS_ENV) {
        match value.parse::<usize>() {
            Ok(workers) if workers > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build_global();
            }
            _ => {
                eprintln!("warning: ignoring {WORKERS_ENV}={value:?}, expected a positive integer")
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_workers();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) => ExitCode::from(2),
                Error::Numerical(_) => ExitCode::from(3),
                Error::Io { .. } => ExitCode::FAILURE,
            }
        }
    }
}
