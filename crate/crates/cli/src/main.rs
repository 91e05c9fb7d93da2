use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use envelope_cli::config::{Format, RunConfig};
use envelope_cli::run::{self, Overrides};
use envelope_cli::CliResult;

#[derive(Parser)]
#[command(name = "envelope", version, about = "Envelope-theory spectra for K-body hyperradius forces")]
struct Cli {
    /// Run configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (overrides the configuration).
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Oracle truncation band.
    #[arg(long, global = true)]
    qstar_max: Option<u32>,
    /// Oracle quadrature points per dimension.
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Envelope solve of the configured state.
    Solve,
    /// Reproduce a benchmark table (lin1..lin5, coul1..coul3, gauss1..gauss3) or `all`.
    Table { id: String },
    /// Predicted phi from the dominantly-orbital-state stiffness.
    PhiDos,
    /// Phi reproducing a target energy.
    CalibratePhi,
    /// Variational oscillator-basis benchmark for the configured state.
    Oracle,
}

fn load(cli: &Cli) -> CliResult<RunConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| envelope_cli::CliError::Config("this command needs --config <path>".into()))?;
    RunConfig::parse(&std::fs::read_to_string(path)?)
}

fn execute(cli: &Cli) -> CliResult<String> {
    let ov = Overrides { qstar_max: cli.qstar_max, quad_order: cli.quad_order };
    if let Cmd::Table { id } = &cli.cmd {
        let fmt = cli.format.unwrap_or(Format::Table);
        let reports = run::tables(&run::table_ids(id)?, &ov)?;
        let mut out = String::new();
        for (i, r) in reports.iter().enumerate() {
            let sheet = run::table_sheet(r);
            match fmt {
                Format::Csv => out.push_str(&sheet.to_csv(i == 0)?),
                Format::Table => {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&sheet.to_text(4));
                }
            }
        }
        if fmt == Format::Table {
            for l in run::hierarchy_lines(&reports) {
                out.push_str(&format!("\n{l}"));
            }
            if reports.len() > 1 {
                out.push('\n');
            }
        }
        return Ok(out);
    }
    let cfg = load(cli)?;
    let sheet = match cli.cmd {
        Cmd::Solve => run::solve(&cfg, &ov)?,
        Cmd::PhiDos => run::phi_dos(&cfg)?,
        Cmd::CalibratePhi => run::calibrate(&cfg, &ov)?,
        Cmd::Oracle => run::oracle(&cfg, &ov)?,
        Cmd::Table { .. } => unreachable!(),
    };
    sheet.render(cli.format.unwrap_or(cfg.format), cfg.precision)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
