use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::SimTime;
use crate::graph::NodeId;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceEvent {
    Send,
    Receive,
    Drop,
    Forward,
}

impl TraceEvent {
    pub fn name(self) -> &'static str {
        match self {
            TraceEvent::Send => "send",
            TraceEvent::Receive => "receive",
            TraceEvent::Drop => "drop",
            TraceEvent::Forward => "forward",
        }
    }

    /// A node saw the packet arrive, either as its destination or as a relay.
    pub fn is_arrival(self) -> bool {
        matches!(self, TraceEvent::Receive | TraceEvent::Forward)
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TraceEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "send" => Ok(TraceEvent::Send),
            "receive" => Ok(TraceEvent::Receive),
            "drop" => Ok(TraceEvent::Drop),
            "forward" => Ok(TraceEvent::Forward),
            _ => Err(Error::Config(alloc::format!("unknown trace event `{s}`"))),
        }
    }
}

/// One packet event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceRecord {
    pub event: TraceEvent,
    pub time: SimTime,
    pub node: NodeId,
    pub packet_id: u64,
    /// bytes
    pub size: u32,
    pub flow_id: u32,
    /// Time of the packet's first send.
    pub origin_time: SimTime,
}

/// Receives simulator output as it happens.
pub trait Observer {
    fn record(&mut self, record: &TraceRecord);

    fn infected(&mut self, _node: NodeId, _time: SimTime) {}

    /// `true` if the observer ignores the `send` and `drop` records of packets
    /// that are dropped at their own source queue. The simulator then skips
    /// generating those packets one by one while a source is saturated, which
    /// is what keeps flooding attacks cheap to simulate.
    fn ignores_source_drops(&self) -> bool {
        false
    }
}

impl Observer for () {
    fn record(&mut self, _: &TraceRecord) {}

    fn ignores_source_drops(&self) -> bool {
        true
    }
}

impl Observer for Vec<TraceRecord> {
    fn record(&mut self, record: &TraceRecord) {
        self.push(*record);
    }
}

impl<O: Observer + ?Sized> Observer for &mut O {
    fn record(&mut self, record: &TraceRecord) {
        (**self).record(record);
    }

    fn infected(&mut self, node: NodeId, time: SimTime) {
        (**self).infected(node, time);
    }

    fn ignores_source_drops(&self) -> bool {
        (**self).ignores_source_drops()
    }
}

impl<A: Observer, B: Observer> Observer for (A, B) {
    fn record(&mut self, record: &TraceRecord) {
        self.0.record(record);
        self.1.record(record);
    }

    fn infected(&mut self, node: NodeId, time: SimTime) {
        self.0.infected(node, time);
        self.1.infected(node, time);
    }

    fn ignores_source_drops(&self) -> bool {
        self.0.ignores_source_drops() && self.1.ignores_source_drops()
    }
}

/// Collects `(node, infection time)` in infection order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InfectionLog(pub Vec<(NodeId, SimTime)>);

impl Observer for InfectionLog {
    fn record(&mut self, _: &TraceRecord) {}

    fn ignores_source_drops(&self) -> bool {
        true
    }

    fn infected(&mut self, node: NodeId, time: SimTime) {
        self.0.push((node, time));
    }
}
