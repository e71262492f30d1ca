//! Command-line flags and the scenario configuration they produce.

use std::path::PathBuf;

use clap::Parser;
use ntorrent_core::generator::{GenerateError, TorrentParams};
use ntorrent_core::ndn::DEFAULT_PIT_LIFETIME;
use ntorrent_core::sim::{RouteError, TopologyError};
use thiserror::Error;

pub const DEFAULT_DATA_RATE_BPS: f64 = 1_000_000.0;
pub const DEFAULT_LATENCY_MS: f64 = 10.0;
pub const DEFAULT_MAX_SIM_TIME_S: f64 = 60.0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Args(#[from] clap::Error),
    #[error("{flag}: {reason}")]
    Invalid { flag: &'static str, reason: String },
    #[error("topology file line {line}: {reason}")]
    TopologySyntax { line: usize, reason: String },
    #[error("topology: {0}")]
    Topology(#[from] TopologyError),
    #[error("topology: {0}")]
    Route(#[from] RouteError),
    #[error(transparent)]
    Params(#[from] GenerateError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySource {
    TwoNode,
    File(PathBuf),
}

impl std::fmt::Display for TopologySource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TopologySource::TwoNode => f.write_str("two-node"),
            TopologySource::File(path) => write!(f, "{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: TorrentParams,
    /// Rate and latency of the built-in two-node link. Topology files carry their own.
    pub data_rate_bps: f64,
    pub latency_ms: f64,
    pub topology: TopologySource,
    pub seed: u64,
    pub max_sim_time_s: f64,
    pub pit_lifetime_s: f64,
    pub trace_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
    pub print_payloads: bool,
    pub corrupt_nth_data: Option<u64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            params: TorrentParams::default(),
            data_rate_bps: DEFAULT_DATA_RATE_BPS,
            latency_ms: DEFAULT_LATENCY_MS,
            topology: TopologySource::TwoNode,
            seed: 0,
            max_sim_time_s: DEFAULT_MAX_SIM_TIME_S,
            pit_lifetime_s: DEFAULT_PIT_LIFETIME,
            trace_out: None,
            report_out: None,
            print_payloads: false,
            corrupt_nth_data: None,
        }
    }
}

fn positive_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a non-negative finite number".into())
    }
}

/// Simulates one nTorrent transfer between a producer and a consumer.
///
/// With no flags the built-in two-node scenario runs with the defaults shown
/// below. The JSON report goes to stdout unless --report-out is given.
#[derive(Debug, Parser)]
#[command(name = "ntorrent-simple", version)]
pub struct Cli {
    /// Number of pretend files in the torrent
    #[arg(long, default_value = "2", value_parser = positive_count, value_name = "N")]
    pub num_files: usize,
    /// Size of each file in bytes
    #[arg(long, default_value = "1024", value_parser = positive_count, value_name = "BYTES")]
    pub file_size: usize,
    /// Payload bytes per data packet
    #[arg(long, default_value = "256", value_parser = positive_count, value_name = "BYTES")]
    pub packet_size: usize,
    /// Manifest names catalogued per torrent-file segment
    #[arg(long, default_value = "3", value_parser = positive_count, value_name = "N")]
    pub names_per_segment: usize,
    /// Packet names catalogued per file manifest
    #[arg(long, default_value = "3", value_parser = positive_count, value_name = "N")]
    pub names_per_manifest: usize,
    /// Torrent name, the second name component
    #[arg(long, default_value = "demo", value_name = "NAME")]
    pub torrent_name: String,
    /// Link data rate of the two-node topology, bits per second
    #[arg(long, default_value = "1000000", value_parser = positive_seconds, value_name = "BPS")]
    pub data_rate_bps: f64,
    /// Link latency of the two-node topology, milliseconds
    #[arg(long, default_value = "10", value_parser = non_negative, value_name = "MS")]
    pub latency_ms: f64,
    /// "two-node" or a topology file (node/link/producer/consumer lines)
    #[arg(long, default_value = "two-node", value_name = "two-node|PATH")]
    pub topology: String,
    /// Seed for Interest nonces
    #[arg(long, default_value = "0")]
    pub seed: u64,
    /// Simulated-time limit in seconds
    #[arg(long, default_value = "60", value_parser = positive_seconds, value_name = "SECONDS")]
    pub max_sim_time: f64,
    /// PIT entry lifetime in seconds
    #[arg(long, default_value = "4", value_parser = positive_seconds, value_name = "SECONDS")]
    pub pit_lifetime: f64,
    /// Write the CSV event trace here
    #[arg(long, value_name = "PATH")]
    pub trace_out: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub report_out: Option<PathBuf>,
    /// Echo each received data payload on stderr
    #[arg(long)]
    pub print_payloads: bool,
    /// Flip the last byte of the n-th Data packet put on a link (0-based)
    #[arg(long, hide = true, value_name = "N")]
    pub corrupt_nth_data: Option<u64>,
}

impl Cli {
    pub fn into_config(self) -> Result<ScenarioConfig, ConfigError> {
        let params = TorrentParams {
            torrent_name: self.torrent_name,
            num_files: self.num_files,
            file_size: self.file_size,
            packet_size: self.packet_size,
            names_per_manifest: self.names_per_manifest,
            names_per_segment: self.names_per_segment,
        };
        params.validate().map_err(|e| ConfigError::Invalid {
            flag: "--torrent-name",
            reason: e.to_string(),
        })?;
        let topology = match self.topology.as_str() {
            "two-node" => TopologySource::TwoNode,
            "" => {
                return Err(ConfigError::Invalid {
                    flag: "--topology",
                    reason: "empty path".into(),
                })
            }
            path => TopologySource::File(PathBuf::from(path)),
        };
        Ok(ScenarioConfig {
            params,
            data_rate_bps: self.data_rate_bps,
            latency_ms: self.latency_ms,
            topology,
            seed: self.seed,
            max_sim_time_s: self.max_sim_time,
            pit_lifetime_s: self.pit_lifetime,
            trace_out: self.trace_out,
            report_out: self.report_out,
            print_payloads: self.print_payloads,
            corrupt_nth_data: self.corrupt_nth_data,
        })
    }
}

/// Parses a full argv, program name first.
pub fn parse_config<I, T>(argv: I) -> Result<ScenarioConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)?.into_config()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<ScenarioConfig, ConfigError> {
        parse_config(std::iter::once("ntorrent-simple").chain(args.iter().copied()))
    }

    #[test]
    fn no_flags_gives_defaults() {
        assert_eq!(parse(&[]).unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn flags_override_defaults() {
        let cfg = parse(&[
            "--names-per-segment",
            "5",
            "--seed",
            "7",
            "--topology",
            "t.txt",
        ])
        .unwrap();
        assert_eq!(cfg.params.names_per_segment, 5);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.topology, TopologySource::File("t.txt".into()));
    }

    #[test]
    fn zero_packet_size_names_the_flag() {
        let err = parse(&["--packet-size", "0"]).unwrap_err().to_string();
        assert!(err.contains("--packet-size"), "{err}");
    }

    #[test]
    fn bad_values_are_rejected() {
        for args in [
            &["--data-rate-bps", "0"][..],
            &["--latency-ms", "-1"],
            &["--max-sim-time", "nan"],
            &["--seed", "-3"],
            &["--bogus"],
            &["--torrent-name", ""],
            &["--topology", ""],
        ] {
            assert!(parse(args).is_err(), "{args:?}");
        }
    }

    #[test]
    fn zero_latency_is_allowed() {
        assert_eq!(parse(&["--latency-ms", "0"]).unwrap().latency_ms, 0.0);
    }
}
