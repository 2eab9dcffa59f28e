use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use torus_search_bench::config::{Algo, ExperimentSpec, Window};
use torus_search_bench::criteria::{acceptance_spec, invariant_suite, sweep_suite, Outcome};
use torus_search_bench::record::{read_csv_file, write_csv_file};
use torus_search_bench::report::{scaling_report, write_summary, ScalingSummary};
use torus_search_bench::run_experiment;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "torus-search", version, about = "Quantum-walk search on the torus: sweeps, reports and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a sweep and write one CSV row per window point plus a peak row.
    Run(RunArgs),
    /// Summarize a CSV into scaling fits and bands.
    Analyze {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        /// Where to write the JSON summary; printed to stdout when absent.
        #[arg(long, value_name = "JSON")]
        report: Option<PathBuf>,
    },
    /// Run the dense-oracle and invariant checks.
    Verify {
        /// Also run the scaling sweep and its criteria.
        #[arg(long)]
        full: bool,
    },
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// JSON file with an experiment spec; flags below override it.
    #[arg(long, value_name = "JSON")]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    algo: Option<Vec<Algo>>,
    #[arg(long, value_delimiter = ',')]
    sides: Option<Vec<usize>>,
    #[arg(long = "c-delta", value_delimiter = ',')]
    c_delta: Option<Vec<f64>>,
    /// `lo,hi[,points]` as multiples of the predicted peak step.
    #[arg(long)]
    window: Option<Window>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,
    /// Also write the scaling summary here.
    #[arg(long, value_name = "JSON")]
    summary: Option<PathBuf>,
}

impl RunArgs {
    fn spec(&self) -> anyhow::Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::from_json_file(path)?,
            None => ExperimentSpec::default(),
        };
        if let Some(v) = &self.algo {
            spec.algos = v.clone();
        }
        if let Some(v) = &self.sides {
            spec.sides = v.clone();
        }
        if let Some(v) = &self.c_delta {
            spec.c_delta = v.clone();
        }
        if let Some(w) = self.window {
            spec.window = w;
        }
        if let Some(s) = self.stride {
            spec.stride = Some(s);
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(w) = self.workers {
            spec.workers = Some(w);
        }
        if let Some(o) = &self.out {
            spec.out = o.clone();
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn print_summary(summary: &ScalingSummary) {
    if let Some(c) = &summary.controlled {
        eprintln!(
            "controlled (c_delta {}): cost/sqrt(N ln N) band {:.3}, min peak probability {:.3}",
            c.c_delta.unwrap_or(f64::NAN),
            c.cost_band,
            c.min_probability
        );
    }
    if let Some(q) = &summary.akr_qaa {
        eprintln!("akr+qaa: cost/(sqrt(N) ln N) band {:.3}", q.cost_band);
    }
    if let Some(o) = &summary.akr_overlap {
        eprintln!("akr: peak overlap^2 ln N band {:.3}", o.band);
    }
    for r in &summary.cost_ratio {
        eprintln!("side {}: akr+qaa / controlled cost {:.3}", r.side, r.ratio);
    }
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let spec = args.spec()?;
    let records = run_experiment(&spec)?;
    write_csv_file(&spec.out, &records)?;
    eprintln!("wrote {} rows to {}", records.len(), spec.out.display());
    if let Some(path) = &args.summary {
        let summary = scaling_report(&records)?;
        write_summary(path, &summary)?;
        print_summary(&summary);
    }
    Ok(())
}

fn analyze(input: PathBuf, report: Option<PathBuf>) -> anyhow::Result<()> {
    let records = read_csv_file(&input)?;
    let summary = scaling_report(&records).with_context(|| format!("summarizing {}", input.display()))?;
    match report {
        Some(path) => {
            write_summary(&path, &summary)?;
            print_summary(&summary);
        }
        None => println!("{}", serde_json::to_string_pretty(&summary)?),
    }
    Ok(())
}

fn verify(full: bool) -> anyhow::Result<bool> {
    let mut outcomes: Vec<Outcome> = invariant_suite();
    if full {
        let records = run_experiment(&acceptance_spec())?;
        outcomes.extend(sweep_suite(&scaling_report(&records)?));
    }
    for o in &outcomes {
        println!("{o}");
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args).map(|_| true),
        Command::Analyze { input, report } => analyze(input, report).map(|_| true),
        Command::Verify { full } => verify(full),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
