//! Line-oriented topology files.
//!
//! ```text
//! # producer - router - consumer
//! node 0
//! node 1
//! node 2
//! link 0 1 1000000 10
//! link 1 2 1000000 10
//! producer 0
//! consumer 2
//! ```

use ntorrent_core::sim::{LinkSpec, NodeId, Role, Topology};

use crate::config::ConfigError;

fn syntax(line: usize, reason: impl Into<String>) -> ConfigError {
    ConfigError::TopologySyntax {
        line,
        reason: reason.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, what: &str, text: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    text.parse()
        .map_err(|e| syntax(line, format!("bad {what} {text:?}: {e}")))
}

/// Parses and validates a topology. The result has at least one producer
/// and one consumer.
pub fn parse_topology(text: &str) -> Result<Topology, ConfigError> {
    let mut t = Topology::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or_default();
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some((keyword, args)) = words.split_first() else {
            continue;
        };
        let arity = match *keyword {
            "node" | "producer" | "consumer" => 1,
            "link" => 4,
            other => return Err(syntax(line, format!("unknown keyword {other:?}"))),
        };
        if args.len() != arity {
            return Err(syntax(
                line,
                format!("{keyword} takes {arity} argument(s), got {}", args.len()),
            ));
        }
        let node = |i: usize| field::<u32>(line, "node id", args[i]).map(NodeId);
        match *keyword {
            "node" => t.add_node(node(0)?)?,
            "producer" => t.set_role(node(0)?, Role::Producer)?,
            "consumer" => t.set_role(node(0)?, Role::Consumer)?,
            _ => {
                let latency_ms: f64 = field(line, "latency", args[3])?;
                t.add_link(LinkSpec {
                    a: node(0)?,
                    b: node(1)?,
                    data_rate_bps: field(line, "data rate", args[2])?,
                    latency_s: latency_ms / 1000.0,
                })?
            }
        }
    }
    t.validate_runnable()?;
    Ok(t)
}
