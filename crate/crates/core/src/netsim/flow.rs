use super::SimTime;
use crate::graph::NodeId;
use crate::{Error, Result};

/// Flow ids at or above this value belong to attacker flows.
pub const ANOMALY_FLOW_BASE: u32 = 1_000_000;

/// Constant-bit-rate flow active on `[start, stop)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub id: u32,
    pub source: NodeId,
    pub destination: NodeId,
    /// bits per second
    pub rate: f64,
    /// bytes
    pub packet_size: u32,
    pub start: SimTime,
    pub stop: SimTime,
}

impl Flow {
    /// Inter-packet gap `packet_size * 8 / rate`, at least one nanosecond.
    pub fn gap(&self) -> SimTime {
        let gap = SimTime::from_secs(f64::from(self.packet_size) * 8.0 / self.rate);
        gap.max(SimTime(1))
    }

    pub fn is_anomalous(&self) -> bool {
        self.id >= ANOMALY_FLOW_BASE
    }

    pub fn validate(&self, node_count: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::Config(alloc::format!("flow {}: {why}", self.id)));
        if self.source.index() >= node_count || self.destination.index() >= node_count {
            return bad("endpoint outside the topology");
        }
        if self.source == self.destination {
            return bad("source equals destination");
        }
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return bad("rate must be positive");
        }
        if self.packet_size == 0 {
            return bad("packet size must be positive");
        }
        if self.start >= self.stop {
            return bad("start must precede stop");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flow(rate: f64) -> Flow {
        Flow {
            id: ANOMALY_FLOW_BASE,
            source: NodeId(0),
            destination: NodeId(1),
            rate,
            packet_size: 512,
            start: SimTime::ZERO,
            stop: SimTime::MAX,
        }
    }

    #[test]
    fn cbr_gaps() {
        // 512 B * 8 = 4096 bits at 10 Mbit/s
        assert_eq!(flow(10e6).gap(), SimTime(409_600));
        assert_eq!(flow(50e6).gap().0 * 5, flow(10e6).gap().0);
        assert!(flow(10e6).is_anomalous());
    }

    #[test]
    fn validation() {
        assert!(flow(1.0).validate(2).is_ok());
        assert!(flow(0.0).validate(2).is_err());
        assert!(flow(1.0).validate(1).is_err());
        let mut f = flow(1.0);
        f.destination = f.source;
        assert!(f.validate(2).is_err());
    }
}
