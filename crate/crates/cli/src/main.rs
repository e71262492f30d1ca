use std::process::ExitCode;

use ntorrent_scenario::{emit_report, parse_config, run_scenario, ConfigError, ScenarioError};

fn run() -> Result<i32, ScenarioError> {
    let cfg = parse_config(std::env::args_os())?;
    let run = run_scenario(&cfg)?;
    if cfg.report_out.is_none() {
        print!("{}", emit_report(&run.report, None)?);
    }
    if let Some(failure) = &run.report.failure {
        eprintln!("ntorrent-simple: {failure}");
    }
    Ok(run.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = match run() {
        Ok(code) => code,
        Err(err) => {
            match &err {
                ScenarioError::Config(ConfigError::Args(e)) => {
                    let _ = e.print();
                }
                other => eprintln!("ntorrent-simple: {other}"),
            }
            err.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
