use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tdhf::config::{self, ConfigLayer, Polarization};
use tdhf::formats::Units;
use tdhf::{cmd_compress, cmd_run, cmd_scf, cmd_verify, CliError};
use tdhf_core::circuit::SwapConvention;
use tdhf_core::tdhf::{FieldEvaluation, MeasurementMode};

#[derive(Parser)]
#[command(name = "tdhf", version, about = "Hybrid quantum-classical real-time TDHF")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state Hartree-Fock: energy, orbital energies and MO coefficients.
    Scf(RunArgs),
    /// Field-driven dynamics, written as a trajectory CSV.
    Run {
        #[command(flatten)]
        args: RunArgs,
        /// Also write the final register amplitudes.
        #[arg(long, value_name = "PATH")]
        dump_state: Option<PathBuf>,
    },
    /// Rewrite a circuit file into its compressed canonical form.
    Compress {
        input: PathBuf,
        /// Output circuit file; stdout if omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Seeded self-checks of the circuit identities.
    Verify {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Geometry file: optional `angstrom|bohr` line, then `<symbol> <x> <y> <z>`.
    #[arg(long, value_name = "PATH")]
    geom: Option<PathBuf>,
    #[arg(long, value_parser = parse_units)]
    units: Option<Units>,
    /// sto-3g or 6-31g.
    #[arg(long)]
    basis: Option<String>,
    /// Integral file used instead of a geometry and basis.
    #[arg(long, value_name = "PATH")]
    fcidump: Option<PathBuf>,
    /// Electron count; defaults to the neutral molecule or the file header.
    #[arg(long)]
    n_elec: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, value_name = "x|y|z", value_parser = parse_pol)]
    pol: Option<Polarization>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tfinal: Option<f64>,
    #[arg(long, value_name = "zonly|rdm", value_parser = config::parse_mode)]
    mode: Option<MeasurementMode>,
    #[arg(long)]
    no_compress: bool,
    #[arg(long, value_name = "start|midpoint", value_parser = config::parse_field_evaluation)]
    field_eval: Option<FieldEvaluation>,
    #[arg(long, value_name = "fermionic|iswap", value_parser = config::parse_convention)]
    swap: Option<SwapConvention>,
    /// Finite-shot occupations (z-only mode); 0 for exact expectations.
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also run the classical reference propagator and compare.
    #[arg(long)]
    reference: bool,
    /// Exit with code 4 when the reference comparison fails.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Also write a downsampled CSV for plotting.
    #[arg(long)]
    emit_plot_data: bool,
}

fn parse_units(s: &str) -> Result<Units, String> {
    s.parse().map_err(|e: tdhf::formats::FormatError| e.to_string())
}

fn parse_pol(s: &str) -> Result<Polarization, String> {
    s.parse()
}

impl RunArgs {
    fn resolve(self) -> Result<tdhf::RunConfig, CliError> {
        let flags = ConfigLayer {
            geometry: self.geom,
            units: self.units,
            basis: self.basis,
            fcidump: self.fcidump,
            n_elec: self.n_elec,
            e_max: self.emax,
            omega: self.omega,
            polarization: self.pol,
            dt: self.dt,
            t_final: self.tfinal,
            mode: self.mode,
            compress: self.no_compress.then_some(false),
            field_evaluation: self.field_eval,
            convention: self.swap,
            shots: self.shots,
            seed: self.seed,
            output: self.out,
            reference: self.reference.then_some(true),
            strict: self.strict.then_some(true),
            tolerance: self.tolerance,
            emit_plot_data: self.emit_plot_data.then_some(true),
        };
        let file = match &self.config {
            Some(path) => ConfigLayer::load(path)?,
            None => ConfigLayer::default(),
        };
        Ok(flags.over(file).resolve()?)
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Scf(args) => cmd_scf(&args.resolve()?, out).map(drop),
        Command::Run { args, dump_state } => cmd_run(&args.resolve()?, dump_state.as_deref(), out).map(drop),
        Command::Compress { input, out: path } => cmd_compress(&input, path.as_deref(), out),
        Command::Verify { samples, seed } => cmd_verify(samples, seed, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
