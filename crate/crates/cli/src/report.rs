//! The JSON run report.

use ntorrent_core::apps::Phase;
use ntorrent_core::ndn::FaceCounters;
use ntorrent_core::sim::{NodeId, Role, RunOutcome, Simulation};
use ntorrent_core::SimSeconds;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Completed,
    Idle,
    TimedOut,
    DigestMismatch,
    Aborted,
}

impl Outcome {
    pub fn from_run(outcome: &RunOutcome) -> Outcome {
        match outcome {
            RunOutcome::Completed => Outcome::Completed,
            RunOutcome::Idle => Outcome::Idle,
            RunOutcome::TimedOut => Outcome::TimedOut,
            RunOutcome::Aborted(f) if f.is_digest_mismatch() => Outcome::DigestMismatch,
            RunOutcome::Aborted(_) => Outcome::Aborted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub torrent_name: String,
    pub num_files: usize,
    pub file_size: usize,
    pub packet_size: usize,
    pub names_per_segment: usize,
    pub names_per_manifest: usize,
    pub data_rate_bps: f64,
    pub latency_ms: f64,
    pub topology: String,
    pub max_sim_time_s: f64,
    pub pit_lifetime_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub id: NodeId,
    pub role: Role,
    /// Totals over the node's link faces.
    pub counters: FaceCounters,
    pub cs_size: usize,
    pub pit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseEntry {
    pub phase: Phase,
    pub enter_time_s: SimSeconds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumerReport {
    pub node: NodeId,
    pub phases: Vec<PhaseEntry>,
    pub segments: usize,
    pub manifests: usize,
    pub packets: usize,
    /// Names still awaited when the run stopped.
    pub pending: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub outcome: Outcome,
    pub completion_time_s: Option<SimSeconds>,
    pub seed: u64,
    pub params: ReportParams,
    pub nodes: Vec<NodeReport>,
    /// The lowest-numbered consumer.
    pub consumer: Option<ConsumerReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl RunReport {
    pub fn from_simulation(
        sim: &Simulation,
        cfg: &ScenarioConfig,
        outcome: &RunOutcome,
    ) -> RunReport {
        let p = &cfg.params;
        let params = ReportParams {
            torrent_name: p.torrent_name.clone(),
            num_files: p.num_files,
            file_size: p.file_size,
            packet_size: p.packet_size,
            names_per_segment: p.names_per_segment,
            names_per_manifest: p.names_per_manifest,
            data_rate_bps: cfg.data_rate_bps,
            latency_ms: cfg.latency_ms,
            topology: cfg.topology.to_string(),
            max_sim_time_s: cfg.max_sim_time_s,
            pit_lifetime_s: cfg.pit_lifetime_s,
        };
        let nodes = sim
            .node_ids()
            .filter_map(|id| sim.snapshot(id))
            .map(|s| NodeReport {
                id: s.id,
                role: s.role,
                counters: s.counters,
                cs_size: s.cs.len(),
                pit_size: s.pit.len(),
            })
            .collect();
        let consumer = sim.consumer_ids().first().and_then(|&id| {
            let c = sim.consumer(id)?;
            Some(ConsumerReport {
                node: id,
                phases: sim
                    .phase_history(id)?
                    .iter()
                    .map(|p| PhaseEntry {
                        phase: p.phase,
                        enter_time_s: p.enter_time_s,
                    })
                    .collect(),
                segments: c.received_segments().len(),
                manifests: c.received_manifests().len(),
                packets: c.received_packets().len(),
                pending: c.pending().iter().map(|n| n.to_string()).collect(),
            })
        });
        let failure = match outcome {
            RunOutcome::Aborted(f) => Some(f.to_string()),
            _ => None,
        };
        RunReport {
            outcome: Outcome::from_run(outcome),
            completion_time_s: match outcome {
                RunOutcome::Completed => sim.completion_time(),
                _ => None,
            },
            seed: cfg.seed,
            params,
            nodes,
            consumer,
            failure,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
