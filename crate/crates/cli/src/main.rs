mod args;
mod config;
mod energy;
mod error;
mod output;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hbnspin_core::spincore::IsotopeChoice;

use args::{Cli, Command, ExportArgs};
use config::RunConfig;
use error::CliError;
use output::{create_file, Context};

fn export_dataset(
    ctx: &mut Context,
    args: &ExportArgs,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = match &args.defect {
        Some(label) => ctx
            .dataset()?
            .get(label)?
            .spin_system(&IsotopeChoice::natural_majority())?
            .to_json(),
        None => {
            let text = ctx.dataset_text()?;
            // validate before exporting
            ctx.dataset()?;
            text
        }
    };
    match &args.out {
        Some(path) => {
            let mut f = create_file(path)?;
            writeln!(f, "{}", text.trim_end()).map_err(|e| CliError::io(path, e))?;
        }
        None => writeln!(out, "{}", text.trim_end())
            .map_err(|e| CliError::io("<stdout>".as_ref(), e))?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut ctx = Context::new(cli.format, cli.data_dir);
    // buffer stdout so failed commands print nothing
    let mut buf: Vec<u8> = Vec::new();
    match &cli.command {
        Command::Odmr(a) => run::odmr(&mut ctx, &RunConfig::resolve(a)?, &mut buf)?,
        Command::CompareMethods(a) => {
            run::compare_methods(&mut ctx, &RunConfig::resolve(a)?, &mut buf)?
        }
        Command::Isotopes(a) => run::isotopes(&mut ctx, &RunConfig::resolve(a)?, &mut buf)?,
        Command::Ctl(a) => energy::ctl(&ctx, a, &mut buf)?,
        Command::Binding(a) => energy::binding(&ctx, a, &mut buf)?,
        Command::ExportDataset(a) => export_dataset(&mut ctx, a, &mut buf)?,
    }
    std::io::stdout()
        .write_all(&buf)
        .map_err(|e| CliError::io("<stdout>".as_ref(), e))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
