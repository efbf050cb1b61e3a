use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_tolerance, ConfigPatch, ExperimentConfig, PdeSign};
use crate::error::{LabError, LabResult};
use crate::experiments::{execute_all, Experiment};
use crate::output::RunOutput;
use crate::report::report;

#[derive(Debug, Parser)]
#[command(name = "isoflow", version, about = "Run isospectral flow experiments and check them against tolerance gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one flow and monitor every conserved quantity.
    Flow(RunArgs),
    /// Integral count, spectral curve evenness, Casimirs and independence.
    Invariants(RunArgs),
    /// Poisson brackets of the integrals and commutation of their flows.
    Commute(RunArgs),
    /// Solve a flow by loop factorization and compare with integration.
    Factorize(RunArgs),
    /// Checks on the finite-dimensional group realization.
    Findim(RunArgs),
    /// Pseudospectral integration of the reduced PDE.
    Pde(RunArgs),
    /// Symmetrizer identities and ranks.
    Lemma41(RunArgs),
    /// Every experiment, concurrently.
    All(RunArgs),
    /// Merge the JSON summaries in a directory into report.json.
    Report {
        /// Results directory.
        dir: PathBuf,
    },
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Flow index k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Flow index l (even).
    #[arg(long)]
    pub l: Option<usize>,
    /// Final time.
    #[arg(long = "t")]
    pub t_final: Option<f64>,
    /// RK4 step.
    #[arg(long)]
    pub h: Option<f64>,
    /// Seed for the random initial data.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Factorization sample count.
    #[arg(long = "M", alias = "samples")]
    pub samples: Option<usize>,
    /// Initial minus-factor coefficient count.
    #[arg(long = "J", alias = "coeffs")]
    pub coeffs: Option<usize>,
    /// Fourier modes for the PDE.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Sign of the cubic self-interaction in the PDE.
    #[arg(long, value_parser = parse_sign)]
    pub sign: Option<PdeSign>,
    /// Tolerance override, `gate=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,
    /// Output directory (default: $ISOFLOW_OUT, else ./isoflow-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file whose fields override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_sign(s: &str) -> Result<PdeSign, String> {
    match s {
        "restricted" => Ok(PdeSign::Restricted),
        "flipped" => Ok(PdeSign::Flipped),
        _ => Err(format!("expected restricted or flipped, got {s:?}")),
    }
}

impl RunArgs {
    fn patch(&self) -> ConfigPatch {
        ConfigPatch {
            n: self.n,
            k: self.k,
            l: self.l,
            t_final: self.t_final,
            h: self.h,
            seed: self.seed,
            samples: self.samples,
            coeffs: self.coeffs,
            modes: self.modes,
            pde_sign: self.sign,
            tolerances: self.tolerances.iter().cloned().collect(),
            out_dir: self.out.clone(),
        }
    }

    pub fn resolve(&self) -> LabResult<ExperimentConfig> {
        let file = self.config.as_deref().map(ConfigPatch::from_file).transpose()?;
        ExperimentConfig::resolve(self.patch(), file)
    }
}

fn print_run(w: &mut impl Write, out: &RunOutput, paths: &[PathBuf]) {
    let s = &out.summary;
    for g in &s.gates {
        let status = if g.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(w, "{status} {}/{}: {:.3e} (tol {:.1e})", s.experiment, g.name, g.value, g.tol);
    }
    for p in paths {
        let _ = writeln!(w, "wrote {}", p.display());
    }
}

fn code(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fail(e: &LabError) -> ExitCode {
    eprintln!("isoflow: {e}");
    ExitCode::from(e.exit_code())
}

/// Runs a parsed command: 0 if every gate passes, 1 on a failing gate or a
/// numerical error, 2 on a configuration or file error.
pub fn run(cli: Cli) -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let (experiment, args) = match cli.command {
        Command::Report { dir } => {
            return match report(&dir) {
                Ok(r) => {
                    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&r).expect("report serializes"));
                    code(r.pass)
                }
                Err(e) => fail(&e),
            };
        }
        Command::All(args) => {
            let cfg = match args.resolve() {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            let mut worst = ExitCode::SUCCESS;
            let mut all_pass = true;
            for (e, result) in execute_all(&cfg) {
                match result {
                    Ok((out, paths)) => {
                        print_run(&mut stdout, &out, &paths);
                        all_pass &= out.summary.pass;
                    }
                    Err(err) => {
                        eprintln!("isoflow: {}: {err}", e.name());
                        if err.exit_code() == 2 {
                            worst = ExitCode::from(2);
                        }
                        all_pass = false;
                    }
                }
            }
            return if worst == ExitCode::SUCCESS { code(all_pass) } else { worst };
        }
        Command::Flow(a) => (Experiment::Flow, a),
        Command::Invariants(a) => (Experiment::Invariants, a),
        Command::Commute(a) => (Experiment::Commute, a),
        Command::Factorize(a) => (Experiment::Factorize, a),
        Command::Findim(a) => (Experiment::Findim, a),
        Command::Pde(a) => (Experiment::Pde, a),
        Command::Lemma41(a) => (Experiment::Lemma41, a),
    };
    let result = args.resolve().and_then(|cfg| experiment.execute(&cfg));
    match result {
        Ok((out, paths)) => {
            print_run(&mut stdout, &out, &paths);
            code(out.summary.pass)
        }
        Err(e) => fail(&e),
    }
}
