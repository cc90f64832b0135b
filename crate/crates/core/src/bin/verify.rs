//! Command-line entry point: run the identity suite and emit a report.
//!
//! Exit status: 0 when every record passes, 1 on any failed record,
//! 2 on configuration or I/O errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use moufang_gle::harness::{run_suite, LoopSelect, PartialConfig, ReportFormat, SuiteConfig};

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum LoopArg {
    Abelian,
    Quaternion,
    Octonion,
    All,
}

impl From<LoopArg> for LoopSelect {
    fn from(v: LoopArg) -> Self {
        match v {
            LoopArg::Abelian => LoopSelect::Abelian,
            LoopArg::Quaternion => LoopSelect::Quaternion,
            LoopArg::Octonion => LoopSelect::Octonion,
            LoopArg::All => LoopSelect::All,
        }
    }
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(v: FormatArg) -> Self {
        match v {
            FormatArg::Text => ReportFormat::Text,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

/// Certify the Moufang loop identities numerically at seeded sample points.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// Loop instance to verify.
    #[arg(long = "loop", value_enum)]
    loop_id: Option<LoopArg>,

    /// Dimension of the abelian instance.
    #[arg(long)]
    dim: Option<usize>,

    /// Sample points per check and instance.
    #[arg(long)]
    samples: Option<usize>,

    /// Sampling radius in the chart, at most 0.5.
    #[arg(long)]
    radius: Option<f64>,

    /// Seed for the deterministic sample streams.
    #[arg(long)]
    seed: Option<u64>,

    /// Residual tolerance for the identity checks.
    #[arg(long)]
    tol: Option<f64>,

    /// Comma-separated check selectors (ids or prefixes, e.g.
    /// "mc,lemma1,thm.11a"); an empty string selects nothing.
    #[arg(long)]
    checks: Option<String>,

    /// Report format.
    #[arg(long = "report", value_enum)]
    report: Option<FormatArg>,

    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// TOML config file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_config(cli: &Cli) -> Result<SuiteConfig, String> {
    let mut cfg = SuiteConfig::default();
    if let Some(path) = &cli.config {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let partial: PartialConfig =
            toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?;
        cfg.apply(partial);
    }
    cfg.apply(PartialConfig {
        loop_id: cli.loop_id.map(Into::into),
        abelian_dim: cli.dim,
        samples: cli.samples,
        radius: cli.radius,
        seed: cli.seed,
        tolerance: cli.tol,
        checks: cli.checks.as_ref().map(|s| {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(String::from)
                .collect()
        }),
        report_format: cli.report.map(Into::into),
    });
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };

    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let body = match cfg.report_format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, &body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{body}");
    }

    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
