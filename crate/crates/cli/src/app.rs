// SPDX-License-Identifier: Apache-2.0

//! Command-line parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use accessplan_core::catalog::Codec;
use accessplan_core::microreg::ArrivalProcess;
use accessplan_core::units::EnergyUnit;
use accessplan_core::Model;
use clap::{Parser, Subcommand};

use crate::report::{self, MicroRegArgs};
use crate::{render, CliError, Format, EXIT_INFEASIBLE, EXIT_USAGE};

/// What one invocation writes and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Parses `args` (program name first) and runs the command.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = u8::try_from(e.exit_code()).unwrap_or(EXIT_USAGE);
            return if e.use_stderr() {
                Invocation {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Invocation {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    let mut stderr = String::new();
    match run(cli, &mut stderr) {
        Ok((stdout, code)) => Invocation {
            stdout,
            stderr,
            code,
        },
        Err(e) => Invocation {
            stdout: String::new(),
            stderr: stderr + &format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 42;

/// Access network planning: reach, video feasibility, energy per Gb,
/// stream aggregation and excess-consumption pricing.
#[derive(Debug, Parser)]
#[command(name = "accessplan", version)]
struct Cli {
    /// JSON config merged over the built-in data.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output format: md, csv or json. Tables default to md, simulations to json.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Energy unit: J, Wh, kcal or BTU.
    #[arg(long, global = true, default_value = "J")]
    units: EnergyUnit,
    /// Seed for random arrivals.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List technologies, encodings and scenarios.
    Catalog,
    /// Maximum reach per technology and split plan.
    Reach {
        #[arg(long)]
        tech: Option<String>,
        /// Split levels such as `8,16`; repeatable.
        #[arg(long)]
        split: Vec<String>,
    },
    /// Reproduce a reference table: 1, 3, 4, 5 or 6.
    Table {
        #[arg(value_parser = ["1", "3", "4", "5", "6"])]
        id: String,
    },
    /// Feasibility and energy of one configuration. Exits 1 when infeasible.
    Whatif {
        #[arg(long)]
        tech: String,
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value = "AVC")]
        codec: Codec,
        /// Enable non-functional technologies.
        #[arg(long)]
        nonfunc: bool,
    },
    /// Simulate stream aggregation with a synchronization interval.
    MicroregSim {
        #[arg(long, default_value_t = 5000)]
        viewers: usize,
        /// Arrival window, s.
        #[arg(long, default_value_t = 1800.0)]
        window: f64,
        /// Synchronization interval, s.
        #[arg(long, default_value_t = 5.0)]
        interval: f64,
        /// Mbps per stream.
        #[arg(long, default_value_t = 5.0)]
        bitrate: f64,
        /// Reference capacity for the savings figure, Mbps.
        #[arg(long, default_value_t = 2549.76)]
        capacity: f64,
        #[arg(long, default_value = "uniform")]
        process: ArrivalProcess,
    },
    /// Excess-consumption tariff and fee optimization.
    Pricing {
        /// Actual consumption relative to the baseline.
        #[arg(long)]
        ea: f64,
        /// Tariff slope K.
        #[arg(long)]
        k: f64,
        /// Base electricity price per kWh.
        #[arg(long)]
        c: f64,
        /// Fee paid to the holder, as a share of the service price.
        #[arg(long, default_value_t = 0.0, conflicts_with = "optimize")]
        fee: f64,
        /// Search the fee maximizing the holder's revenue.
        #[arg(long)]
        optimize: bool,
        /// Grid step of the fee search.
        #[arg(long, default_value_t = 0.001, requires = "optimize")]
        grid: f64,
    },
}

fn run(cli: Cli, stderr: &mut String) -> Result<(String, u8), CliError> {
    let model = Model::load(cli.config.as_deref())?;
    let table_fmt = cli.format.unwrap_or(Format::Markdown);
    let record_fmt = cli.format.unwrap_or(Format::Json);
    let out = match cli.command {
        Command::Catalog => render(&report::catalog_report(&model), table_fmt)?,
        Command::Reach { tech, split } => {
            let plans = split
                .iter()
                .map(|p| parse_plan(p))
                .collect::<Result<Vec<_>, _>>()?;
            render(
                &report::reach_report(&model, tech.as_deref(), &plans)?,
                table_fmt,
            )?
        }
        Command::Table { id } => match id.as_str() {
            "1" => render(&report::table1(&model), table_fmt)?,
            "3" => render(&report::table3(&model)?, table_fmt)?,
            "4" => render(&report::table4(&model)?, table_fmt)?,
            "5" => render(&report::table5(&model), table_fmt)?,
            _ => render(&report::table6(&model, cli.units)?, table_fmt)?,
        },
        Command::Whatif {
            tech,
            scenario,
            codec,
            nonfunc,
        } => {
            let r = report::whatif(&model, &tech, &scenario, codec, nonfunc, cli.units)?;
            let code = if r.feasible { 0 } else { EXIT_INFEASIBLE };
            return Ok((render(&r, table_fmt)?, code));
        }
        Command::MicroregSim {
            viewers,
            window,
            interval,
            bitrate,
            capacity,
            process,
        } => {
            let r = report::microreg(MicroRegArgs {
                viewers,
                window,
                interval,
                bitrate,
                capacity,
                seed: cli.seed,
                process,
            })?;
            stderr.push_str(&r.summary());
            stderr.push('\n');
            render(&r, record_fmt)?
        }
        Command::Pricing {
            ea,
            k,
            c,
            fee,
            optimize,
            grid,
        } => render(
            &report::pricing(ea, k, c, fee, optimize.then_some(grid))?,
            record_fmt,
        )?,
    };
    Ok((out, 0))
}

fn parse_plan(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|l| l.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            CliError::Usage(format!(
                "bad split plan `{text}` (expected levels such as 8,16)"
            ))
        })
}
