use crate::ndn::FaceId;
use crate::SimSeconds;

use super::topology::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AToB,
    BToA,
}

impl Direction {
    fn index(self) -> usize {
        match self {
            Direction::AToB => 0,
            Direction::BToA => 1,
        }
    }
}

/// A full-duplex point-to-point link with one FIFO transmitter per direction.
#[derive(Debug, Clone)]
pub struct Link {
    pub a: (NodeId, FaceId),
    pub b: (NodeId, FaceId),
    pub data_rate_bps: f64,
    pub latency_s: SimSeconds,
    busy_until: [SimSeconds; 2],
}

impl Link {
    pub fn new(
        a: (NodeId, FaceId),
        b: (NodeId, FaceId),
        data_rate_bps: f64,
        latency_s: SimSeconds,
    ) -> Self {
        assert!(data_rate_bps > 0.0, "link data rate must be positive");
        assert!(latency_s >= 0.0, "link latency must be non-negative");
        Link {
            a,
            b,
            data_rate_bps,
            latency_s,
            busy_until: [0.0; 2],
        }
    }

    pub fn busy_until(&self, dir: Direction) -> SimSeconds {
        self.busy_until[dir.index()]
    }

    pub fn transmission_time(&self, bytes: usize) -> SimSeconds {
        (bytes as f64 * 8.0) / self.data_rate_bps
    }

    /// Queues `bytes` in direction `dir` at `now`; returns when serialization
    /// starts and when the last bit arrives at the far end.
    pub fn delay(
        &mut self,
        bytes: usize,
        dir: Direction,
        now: SimSeconds,
    ) -> (SimSeconds, SimSeconds) {
        let start = now.max(self.busy_until[dir.index()]);
        let done = start + self.transmission_time(bytes);
        self.busy_until[dir.index()] = done;
        (start, done + self.latency_s)
    }

    /// The endpoint a packet sent in `dir` arrives at.
    pub fn far_end(&self, dir: Direction) -> (NodeId, FaceId) {
        match dir {
            Direction::AToB => self.b,
            Direction::BToA => self.a,
        }
    }
}

pub fn link_delay(
    link: &mut Link,
    bytes: usize,
    dir: Direction,
    now: SimSeconds,
) -> (SimSeconds, SimSeconds) {
    link.delay(bytes, dir, now)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(rate: f64, latency: f64) -> Link {
        Link::new(
            (NodeId(0), FaceId(1)),
            (NodeId(1), FaceId(1)),
            rate,
            latency,
        )
    }

    #[test]
    fn idle_link_serializes_then_propagates() {
        let mut l = link(1e6, 0.010);
        let (start, arrival) = link_delay(&mut l, 1250, Direction::AToB, 0.0);
        assert_eq!(start, 0.0);
        assert!((arrival - 0.020).abs() < 1e-12);
    }

    #[test]
    fn back_to_back_packets_queue_fifo() {
        let mut l = link(1e6, 0.010);
        l.delay(1250, Direction::AToB, 0.0);
        let (start, arrival) = l.delay(1250, Direction::AToB, 0.0);
        assert!((start - 0.010).abs() < 1e-12);
        assert!((arrival - 0.030).abs() < 1e-12);
    }

    #[test]
    fn directions_do_not_share_a_transmitter() {
        let mut l = link(1e6, 0.010);
        l.delay(1250, Direction::AToB, 0.0);
        let (start, _) = l.delay(1250, Direction::BToA, 0.0);
        assert_eq!(start, 0.0);
        assert!(l.busy_until(Direction::AToB) > 0.0);
    }

    #[test]
    fn zero_latency_is_serialization_only() {
        let mut l = link(8e3, 0.0);
        let (_, arrival) = l.delay(100, Direction::BToA, 1.0);
        assert!((arrival - 1.1).abs() < 1e-12);
    }

    #[test]
    fn idle_gap_resets_start_to_now() {
        let mut l = link(1e6, 0.0);
        l.delay(1250, Direction::AToB, 0.0);
        let (start, _) = l.delay(1250, Direction::AToB, 5.0);
        assert_eq!(start, 5.0);
    }
}
