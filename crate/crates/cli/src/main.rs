//! `crlh-lwa`: design and analysis of the reconfigurable CRLH leaky-wave antenna.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "crlh-lwa", version, about = "CRLH leaky-wave antenna design and analysis")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Key-value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Bundled profile, used when no --config is given.
    #[arg(long, global = true, env = "CRLH_PROFILE", default_value = "paper-default")]
    pub profile: String,

    /// Output format for tabular data: csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Directory for output files; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Active finger count (2, 3 or 4).
    #[arg(long, global = true)]
    pub fingers: Option<u32>,

    /// Sweep start [GHz].
    #[arg(long, global = true)]
    pub freq_start: Option<f64>,

    /// Sweep stop [GHz].
    #[arg(long, global = true)]
    pub freq_stop: Option<f64>,

    /// Number of sweep samples.
    #[arg(long, global = true)]
    pub points: Option<usize>,

    /// How the IDC capacitance enters C_L: half or full.
    #[arg(long, global = true)]
    pub series_combination: Option<String>,

    /// Sheet resistivity of the conductor [Ω/sq].
    #[arg(long, global = true)]
    pub sheet_resistance: Option<f64>,

    /// Line impedance for the IDC inductance and shunt capacitance [Ω].
    #[arg(long, global = true)]
    pub z0: Option<f64>,

    /// Bloch impedance at the transition [Ω].
    #[arg(long, global = true)]
    pub bloch_impedance: Option<f64>,

    /// Carry IDC resistance and shunt capacitance into the unit cell.
    #[arg(long, global = true)]
    pub include_parasitics: bool,

    /// Minimum leakage per cell for patterns [Np]; 0.05 when given without a value.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "0.05")]
    pub leakage: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract the lumped model of one IDC.
    Idc,
    /// Unit-cell operations.
    Cell {
        #[command(subcommand)]
        action: CellAction,
    },
    /// Bloch dispersion sweep.
    Dispersion,
    /// Beam angle versus frequency over the fast-wave band.
    ScanAngles,
    /// Array-factor radiation patterns.
    Pattern {
        /// Frequencies [GHz], comma separated; defaults to the broadside target.
        #[arg(long, value_delimiter = ',')]
        freqs: Vec<f64>,

        /// Order rows by polar-plot angle.
        #[arg(long)]
        polar_data: bool,
    },
    /// Run every configured switch state.
    Sweep,
    /// Run the full pipeline and report the self-checks.
    Reproduce {
        /// Machine-readable results.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CellAction {
    /// Balanced calibration for the selected finger count.
    Calibrate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
