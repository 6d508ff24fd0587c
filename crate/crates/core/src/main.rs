use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nument::cli::{self, Backend, Command, Format, Overrides, Spacing, SweepConfig};

#[derive(Parser)]
#[command(name = "nument", version, about = "Number entanglement of charge-conserving states")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// ΔS_m and log-negativity of the thermal XXZ chain against temperature.
    XxzSweep(Common),
    /// Two-mode boson sectors N = 1, 2, 3 against β.
    BosonSectors(Common),
    /// Free-fermion ΔS₂ against temperature with CFT and high-T references.
    FfSweep(Common),
    /// Ground-state number entropy against L_A.
    FfSizeScan(Common),
    /// Fits the 1/T² tail of ΔS₂ (and ΔS_m with the exact backend).
    HighTFit(Common),
    /// Lattice ΔS₂ against the CFT prediction.
    CftCompare(Common),
    /// Monotonicity of ΔS_m under symmetric channels.
    LoccDemo(Common),
    /// Witness, negativity and sector table of a named state.
    StateDemo {
        /// phi4, phi2, qd1 or fermion4
        tag: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "L")]
    l: Option<usize>,
    /// Subsystem length; a comma list for ff-size-scan.
    #[arg(long = "LA", value_delimiter = ',')]
    la: Option<Vec<usize>>,
    #[arg(long = "J", allow_hyphen_values = true)]
    j: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eta: Option<Vec<f64>>,
    #[arg(long = "t", allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long = "V", allow_hyphen_values = true)]
    v: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long)]
    beta_min: Option<f64>,
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// log or linear
    #[arg(long)]
    spacing: Option<String>,
    /// exact, gaussian or analytic
    #[arg(long)]
    backend: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Report entropies in bits.
    #[arg(long)]
    bits: bool,
    #[arg(long)]
    trials: Option<usize>,
    /// Writes a gnuplot script for the CSV written to --out.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> nument::Result<Overrides> {
        let flags = Overrides {
            l: self.l,
            la: self.la.clone(),
            j: self.j,
            eta: self.eta.clone(),
            t: self.t,
            v: self.v,
            mu: self.mu,
            beta_min: self.beta_min,
            beta_max: self.beta_max,
            points: self.points,
            spacing: self.spacing.as_deref().map(str::parse::<Spacing>).transpose()?,
            backend: self.backend.as_deref().map(str::parse::<Backend>).transpose()?,
            format: self.format.as_deref().map(str::parse::<Format>).transpose()?,
            out: self.out.clone(),
            seed: self.seed,
            threads: self.threads,
            bits: self.bits.then_some(true),
            trials: self.trials,
            gnuplot: self.gnuplot.clone(),
        };
        match &self.config {
            Some(path) => Ok(flags.over(Overrides::from_config_file(path)?)),
            None => Ok(flags),
        }
    }
}

fn execute(sub: Sub) -> nument::Result<()> {
    let (command, common, tag) = match sub {
        Sub::XxzSweep(c) => (Command::XxzSweep, c, None),
        Sub::BosonSectors(c) => (Command::BosonSectors, c, None),
        Sub::FfSweep(c) => (Command::FfSweep, c, None),
        Sub::FfSizeScan(c) => (Command::FfSizeScan, c, None),
        Sub::HighTFit(c) => (Command::HighTFit, c, None),
        Sub::CftCompare(c) => (Command::CftCompare, c, None),
        Sub::LoccDemo(c) => (Command::LoccDemo, c, None),
        Sub::StateDemo { tag, common } => (Command::StateDemo, common, Some(tag)),
    };
    let mut cfg = SweepConfig::resolve(command, common.overrides()?)?;
    cfg.tag = tag;
    let out = cli::run(&cfg)?;
    for note in &out.notes {
        eprintln!("warning: {note}");
    }
    cli::emit(&cfg, &out)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
fn run_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(args) {
        Ok(p) => p,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(parsed.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().clamp(1, 255) as u8
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run_with(std::env::args_os()))
}
