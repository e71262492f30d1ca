//! The `ntorrent-simple` scenario: configuration, topology files, running
//! the simulation and writing its report and trace.

pub mod config;
pub mod report;
pub mod topology_file;

use std::fs;
use std::path::{Path, PathBuf};

use ntorrent_core::sim::{
    write_csv, RunOutcome, SimError, SimOptions, Simulation, Topology, TraceRecord,
};
use thiserror::Error;

pub use config::{parse_config, Cli, ConfigError, ScenarioConfig, TopologySource};
pub use report::{Outcome, RunReport};
pub use topology_file::parse_topology;

pub const EXIT_COMPLETED: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(ConfigError::Args(e)) if !e.use_stderr() => EXIT_COMPLETED,
            ScenarioError::Config(_) => EXIT_CONFIG,
            ScenarioError::Io { .. } => EXIT_IO,
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> ScenarioError + '_ {
    move |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl From<SimError> for ScenarioError {
    fn from(e: SimError) -> Self {
        let config = match e {
            SimError::Route(e) => ConfigError::Route(e),
            SimError::Generate(e) => ConfigError::Params(e),
            other => ConfigError::Invalid {
                flag: "--topology",
                reason: other.to_string(),
            },
        };
        ScenarioError::Config(config)
    }
}

#[derive(Debug)]
pub struct ScenarioRun {
    pub outcome: RunOutcome,
    pub report: RunReport,
    pub trace: Vec<TraceRecord>,
}

impl ScenarioRun {
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            RunOutcome::Completed => EXIT_COMPLETED,
            _ => EXIT_INCOMPLETE,
        }
    }

    pub fn trace_csv(&self) -> String {
        let mut buf = Vec::new();
        write_csv(&self.trace, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("trace is UTF-8")
    }
}

pub fn load_topology(cfg: &ScenarioConfig) -> Result<Topology, ScenarioError> {
    match &cfg.topology {
        TopologySource::TwoNode => Ok(Topology::two_node(
            cfg.data_rate_bps,
            cfg.latency_ms / 1000.0,
        )
        .map_err(ConfigError::from)?),
        TopologySource::File(path) => {
            let text = fs::read_to_string(path).map_err(io_error(path))?;
            Ok(parse_topology(&text)?)
        }
    }
}

/// Builds and runs the scenario without touching the output paths.
pub fn simulate(cfg: &ScenarioConfig) -> Result<ScenarioRun, ScenarioError> {
    let topology = load_topology(cfg)?;
    let options = SimOptions {
        seed: cfg.seed,
        pit_lifetime: cfg.pit_lifetime_s,
        print_payloads: cfg.print_payloads,
        corrupt_data_transmission: cfg.corrupt_nth_data,
    };
    let mut sim = Simulation::with_routes(&topology, &cfg.params, options)?;
    let outcome = sim.run(cfg.max_sim_time_s);
    log::info!("run finished at t={:.9}: {outcome:?}", sim.now());
    let report = RunReport::from_simulation(&sim, cfg, &outcome);
    Ok(ScenarioRun {
        outcome,
        report,
        trace: sim.trace().to_vec(),
    })
}

/// Runs the scenario and writes the trace and report files that `cfg` names.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioRun, ScenarioError> {
    let run = simulate(cfg)?;
    if let Some(path) = &cfg.trace_out {
        fs::write(path, run.trace_csv()).map_err(io_error(path))?;
    }
    if let Some(path) = &cfg.report_out {
        emit_report(&run.report, Some(path))?;
    }
    Ok(run)
}

/// Serializes the report, writing it to `path` when given.
pub fn emit_report(report: &RunReport, path: Option<&Path>) -> Result<String, ScenarioError> {
    let json = report.to_json();
    if let Some(path) = path {
        fs::write(path, &json).map_err(io_error(path))?;
    }
    Ok(json)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_completes() {
        let run = simulate(&ScenarioConfig::default()).unwrap();
        assert_eq!(run.outcome, RunOutcome::Completed);
        assert_eq!(run.exit_code(), 0);
        let c = run.report.consumer.as_ref().unwrap();
        assert_eq!((c.segments, c.manifests, c.packets), (2, 4, 8));
        assert!(c.pending.is_empty());
        assert!(run.report.completion_time_s.unwrap() > 0.0);
        let consumer_node = run.report.nodes.iter().find(|n| n.id == c.node).unwrap();
        assert_eq!(consumer_node.counters.interests_out, 14);
        assert_eq!(consumer_node.cs_size, 14);
    }

    #[test]
    fn report_keys_keep_their_order() {
        let json = simulate(&ScenarioConfig::default())
            .unwrap()
            .report
            .to_json();
        let keys = [
            "\"outcome\"",
            "\"completion_time_s\"",
            "\"seed\"",
            "\"params\"",
            "\"nodes\"",
            "\"consumer\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(json.contains("\"outcome\": \"completed\""));
        assert!(!json.contains("\"failure\""));
    }

    #[test]
    fn report_round_trips() {
        let report = simulate(&ScenarioConfig::default()).unwrap().report;
        let back: RunReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn nonces_do_not_change_timing() {
        let a = simulate(&ScenarioConfig {
            seed: 1,
            ..ScenarioConfig::default()
        })
        .unwrap();
        let b = simulate(&ScenarioConfig {
            seed: 99,
            ..ScenarioConfig::default()
        })
        .unwrap();
        assert_eq!(a.report.completion_time_s, b.report.completion_time_s);
        assert_eq!(a.report.nodes, b.report.nodes);
    }

    #[test]
    fn timeout_and_corruption_exit_three() {
        let timed_out = simulate(&ScenarioConfig {
            max_sim_time_s: 0.05,
            ..ScenarioConfig::default()
        })
        .unwrap();
        assert_eq!(timed_out.report.outcome, Outcome::TimedOut);
        assert_eq!(timed_out.exit_code(), EXIT_INCOMPLETE);
        assert!(!timed_out.report.consumer.unwrap().pending.is_empty());

        let corrupt = simulate(&ScenarioConfig {
            corrupt_nth_data: Some(5),
            ..ScenarioConfig::default()
        })
        .unwrap();
        assert_eq!(corrupt.report.outcome, Outcome::DigestMismatch);
        assert_eq!(corrupt.exit_code(), EXIT_INCOMPLETE);
        assert!(corrupt.report.failure.is_some());
    }

    #[test]
    fn missing_topology_file_is_an_io_error() {
        let cfg = ScenarioConfig {
            topology: TopologySource::File("/nonexistent/topology.txt".into()),
            ..ScenarioConfig::default()
        };
        assert_eq!(simulate(&cfg).unwrap_err().exit_code(), EXIT_IO);
    }
}
