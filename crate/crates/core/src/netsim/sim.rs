//! The event loop.
//!
//! Each node owns one FIFO transmitter. A packet occupies its node's queue
//! from arrival until its transmission completes; a packet arriving to a full
//! queue is dropped. After `size * 8 / link_rate` of transmission and a fixed
//! propagation delay it reaches the next hop on its minimum-hop route.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{Flow, NodeStats, Observer, RoutingTable, SimTime, TraceEvent, TraceRecord};
use crate::graph::NodeId;
use crate::threat::Adversary;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    /// bits per second
    pub link_rate: f64,
    pub prop_delay: SimTime,
    /// packets, including the one being transmitted
    pub queue_cap: usize,
}

impl LinkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.link_rate > 0.0 && self.link_rate.is_finite()) {
            return Err(Error::config("link rate must be positive"));
        }
        if self.queue_cap == 0 {
            return Err(Error::config("queue capacity must be positive"));
        }
        Ok(())
    }

    pub fn transmission_time(&self, size: u32) -> SimTime {
        SimTime::from_secs(f64::from(size) * 8.0 / self.link_rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Packet {
    id: u64,
    flow: u32,
    flow_idx: u32,
    destination: NodeId,
    size: u32,
    origin: SimTime,
    contaminated: bool,
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Generate { flow: u32 },
    Attack,
}

#[derive(Debug, Clone)]
struct Scheduled {
    time: SimTime,
    seq: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}

impl Eq for Scheduled {}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        // earliest first, then lowest sequence number
        other.time.cmp(&self.time).then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Events scheduled a fixed delay after the current time come due in the order
// they were scheduled, so each such delay gets a FIFO instead of the heap:
// one for propagation, one per distinct transmission time.

/// A packet on its way to the next hop.
#[derive(Debug, Clone)]
struct InTransit {
    time: SimTime,
    seq: u64,
    node: NodeId,
    packet: Packet,
}

/// Transmissions of packets of one size.
#[derive(Debug, Clone)]
struct TxLane {
    size: u32,
    duration: SimTime,
    done: VecDeque<(SimTime, u64, NodeId)>,
}

enum Source {
    Heap,
    Wire,
    Tx(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlowCounters {
    pub sent: u64,
    pub delivered: u64,
    pub dropped: u64,
}

#[derive(Debug, Clone)]
struct FlowState {
    flow: Flow,
    gap: SimTime,
    counters: FlowCounters,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Totals {
    pub sent: u64,
    pub delivered: u64,
    pub dropped: u64,
    pub forwarded: u64,
    pub events: u64,
}

/// A single simulation timeline. Cloning forks it.
#[derive(Debug, Clone)]
pub struct Simulator {
    routing: RoutingTable,
    params: LinkParams,
    now: SimTime,
    /// End of the current `run_until` call.
    horizon: SimTime,
    seq: u64,
    next_packet: u64,
    heap: BinaryHeap<Scheduled>,
    wire: VecDeque<InTransit>,
    tx_lanes: Vec<TxLane>,
    queues: Vec<VecDeque<Packet>>,
    /// When each node's current transmission completes.
    busy_until: Vec<SimTime>,
    max_occupancy: usize,
    flows: Vec<FlowState>,
    stats: Vec<NodeStats>,
    totals: Totals,
    adversary: Option<Adversary>,
}

impl Simulator {
    pub fn new(routing: RoutingTable, params: LinkParams) -> Result<Self> {
        params.validate()?;
        let n = routing.node_count();
        Ok(Self {
            routing,
            params,
            now: SimTime::ZERO,
            horizon: SimTime::ZERO,
            seq: 0,
            next_packet: 0,
            heap: BinaryHeap::new(),
            wire: VecDeque::new(),
            tx_lanes: Vec::new(),
            queues: vec![VecDeque::new(); n],
            busy_until: vec![SimTime::ZERO; n],
            max_occupancy: 0,
            flows: Vec::new(),
            stats: vec![NodeStats::default(); n],
            totals: Totals::default(),
            adversary: None,
        })
    }

    pub fn node_count(&self) -> usize {
        self.queues.len()
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn stats(&self) -> &[NodeStats] {
        &self.stats
    }

    pub fn totals(&self) -> &Totals {
        &self.totals
    }

    pub fn flows(&self) -> impl Iterator<Item = (&Flow, &FlowCounters)> {
        self.flows.iter().map(|f| (&f.flow, &f.counters))
    }

    pub fn adversary(&self) -> Option<&Adversary> {
        self.adversary.as_ref()
    }

    /// Largest queue occupancy seen so far.
    pub fn max_occupancy(&self) -> usize {
        self.max_occupancy
    }

    fn next_seq(&mut self) -> u64 {
        let seq = self.seq;
        self.seq += 1;
        seq
    }

    fn schedule(&mut self, time: SimTime, event: Event) {
        let seq = self.next_seq();
        self.heap.push(Scheduled { time, seq, event });
    }

    pub fn add_flow(&mut self, flow: Flow) -> Result<()> {
        flow.validate(self.node_count())?;
        if flow.start < self.now {
            return Err(Error::Config(alloc::format!("flow {} starts in the past", flow.id)));
        }
        let idx = self.flows.len();
        let start = flow.start;
        let gap = flow.gap();
        self.flows.push(FlowState { flow, gap, counters: FlowCounters::default() });
        self.schedule(start, Event::Generate { flow: idx as u32 });
        Ok(())
    }

    /// Installs the adversary; it strikes at its configured injection time.
    pub fn set_adversary(&mut self, adversary: Adversary) -> Result<()> {
        if adversary.states().len() != self.node_count() {
            return Err(Error::config("adversary sized for a different topology"));
        }
        if self.adversary.is_some() {
            return Err(Error::config("adversary already installed"));
        }
        if adversary.config.injection_time < self.now {
            return Err(Error::config("injection time already passed"));
        }
        let at = adversary.config.injection_time;
        self.adversary = Some(adversary);
        self.schedule(at, Event::Attack);
        Ok(())
    }

    /// Processes every event strictly before `end`, then parks the clock at `end`.
    pub fn run_until(&mut self, end: SimTime, observer: &mut impl Observer) -> Result<()> {
        self.horizon = end;
        while let Some((time, source)) = self.next_event() {
            if time >= end {
                break;
            }
            self.now = time;
            self.totals.events += 1;
            match source {
                Source::Heap => {
                    let event = self.heap.pop().unwrap().event;
                    self.dispatch(event, observer)?;
                }
                Source::Wire => {
                    let t = self.wire.pop_front().unwrap();
                    self.arrive(t.node, t.packet, observer)?;
                }
                Source::Tx(lane) => {
                    let (_, _, node) = self.tx_lanes[lane].done.pop_front().unwrap();
                    self.finish_transmission(node);
                }
            }
        }
        self.now = self.now.max(end);
        Ok(())
    }

    fn next_event(&self) -> Option<(SimTime, Source)> {
        let mut best = self.heap.peek().map(|s| ((s.time, s.seq), Source::Heap));
        let mut consider = |key: (SimTime, u64), source: Source| {
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, source));
            }
        };
        if let Some(t) = self.wire.front() {
            consider((t.time, t.seq), Source::Wire);
        }
        for (i, lane) in self.tx_lanes.iter().enumerate() {
            if let Some(&(time, seq, _)) = lane.done.front() {
                consider((time, seq), Source::Tx(i));
            }
        }
        best.map(|((time, _), source)| (time, source))
    }

    fn start_transmission(&mut self, node: NodeId, size: u32) {
        let lane = match self.tx_lanes.iter().position(|l| l.size == size) {
            Some(i) => i,
            None => {
                let duration = self.params.transmission_time(size);
                self.tx_lanes.push(TxLane { size, duration, done: VecDeque::new() });
                self.tx_lanes.len() - 1
            }
        };
        let done = self.now + self.tx_lanes[lane].duration;
        let seq = self.next_seq();
        self.busy_until[node.index()] = done;
        self.tx_lanes[lane].done.push_back((done, seq, node));
    }

    fn dispatch(&mut self, event: Event, observer: &mut impl Observer) -> Result<()> {
        match event {
            Event::Generate { flow } => self.generate(flow as usize, observer),
            Event::Attack => self.launch_attack(observer)?,
        }
        Ok(())
    }

    fn generate(&mut self, idx: usize, observer: &mut impl Observer) {
        let now = self.now;
        let source = self.flows[idx].flow.source;
        if self.queues[source.index()].len() >= self.params.queue_cap && observer.ignores_source_drops() {
            self.skip_saturated(idx);
            return;
        }
        let state = &mut self.flows[idx];
        let flow = &state.flow;
        let packet = Packet {
            id: self.next_packet,
            flow: flow.id,
            flow_idx: idx as u32,
            destination: flow.destination,
            size: flow.packet_size,
            origin: now,
            contaminated: false,
        };
        let next = now.saturating_add(state.gap);
        let more = next < flow.stop;
        state.counters.sent += 1;
        self.next_packet += 1;
        self.totals.sent += 1;
        if more {
            self.schedule(next, Event::Generate { flow: idx as u32 });
        }
        self.emit(observer, TraceEvent::Send, source, &packet);
        self.enqueue(source, packet, observer);
    }

    /// The source queue stays full until its transmission in progress ends, so
    /// every packet this flow generates before then is dropped on arrival.
    /// Account for all of them at once and resume at the first generation
    /// time at or after the queue frees up.
    fn skip_saturated(&mut self, idx: usize) {
        let now = self.now;
        let state = &mut self.flows[idx];
        let gap = state.gap.as_nanos();
        let until = self.busy_until[state.flow.source.index()].min(state.flow.stop).min(self.horizon).max(now);
        let count = (until - now).as_nanos().div_ceil(gap).max(1);
        state.counters.sent += count;
        state.counters.dropped += count;
        self.totals.sent += count;
        self.totals.dropped += count;
        self.next_packet += count;
        let next = SimTime(now.as_nanos().saturating_add(count.saturating_mul(gap)));
        if next < state.flow.stop {
            self.schedule(next, Event::Generate { flow: idx as u32 });
        }
    }

    fn enqueue(&mut self, node: NodeId, packet: Packet, observer: &mut impl Observer) {
        let queue = &mut self.queues[node.index()];
        if queue.len() >= self.params.queue_cap {
            self.totals.dropped += 1;
            self.flows[packet.flow_idx as usize].counters.dropped += 1;
            self.emit(observer, TraceEvent::Drop, node, &packet);
            return;
        }
        queue.push_back(packet);
        let len = queue.len();
        self.max_occupancy = self.max_occupancy.max(len);
        if len == 1 {
            self.start_transmission(node, packet.size);
        }
    }

    fn finish_transmission(&mut self, node: NodeId) {
        let queue = &mut self.queues[node.index()];
        let mut packet = queue.pop_front().expect("transmitter finished with an empty queue");
        let following = queue.front().map(|p| p.size);
        if let Some(adv) = &self.adversary {
            packet.contaminated |= adv.is_infected(node);
        }
        let hop = self.routing.next_hop(node, packet.destination).expect("packet queued at its destination");
        let time = self.now + self.params.prop_delay;
        let seq = self.next_seq();
        self.wire.push_back(InTransit { time, seq, node: hop, packet });
        if let Some(size) = following {
            self.start_transmission(node, size);
        }
    }

    fn arrive(&mut self, node: NodeId, packet: Packet, observer: &mut impl Observer) -> Result<()> {
        let now = self.now;
        self.stats[node.index()].observe(packet.size, now - packet.origin);
        let delivered = node == packet.destination;
        if delivered {
            self.totals.delivered += 1;
            self.flows[packet.flow_idx as usize].counters.delivered += 1;
            self.emit(observer, TraceEvent::Receive, node, &packet);
        } else {
            self.totals.forwarded += 1;
            self.emit(observer, TraceEvent::Forward, node, &packet);
        }
        if let Some(adv) = &mut self.adversary {
            if let Some(flow) = adv.on_arrival(node, packet.contaminated, now) {
                observer.infected(node, now);
                self.add_flow(flow)?;
            }
        }
        if !delivered {
            self.enqueue(node, packet, observer);
        }
        Ok(())
    }

    fn launch_attack(&mut self, observer: &mut impl Observer) -> Result<()> {
        let adv = self.adversary.as_mut().expect("attack scheduled without adversary");
        let (seeds, flows) = adv.launch()?;
        for v in seeds {
            observer.infected(v, self.now);
        }
        for f in flows {
            self.add_flow(f)?;
        }
        Ok(())
    }

    #[inline]
    fn emit(&self, observer: &mut impl Observer, event: TraceEvent, node: NodeId, p: &Packet) {
        observer.record(&TraceRecord {
            event,
            time: self.now,
            node,
            packet_id: p.id,
            size: p.size,
            flow_id: p.flow,
            origin_time: p.origin,
        });
    }

    /// Packets queued or on the wire, per flow id.
    pub fn in_flight(&self) -> Vec<(u32, u64)> {
        let mut counts: alloc::collections::BTreeMap<u32, u64> = Default::default();
        for p in self.queues.iter().flatten() {
            *counts.entry(p.flow).or_default() += 1;
        }
        for t in &self.wire {
            *counts.entry(t.packet.flow).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// Current occupancy of every egress queue.
    pub fn queue_lengths(&self) -> Vec<usize> {
        self.queues.iter().map(VecDeque::len).collect()
    }
}

/// Runs a fresh simulation of `flows` (and the adversary, if any) up to `end`.
pub fn run_simulation(
    routing: RoutingTable,
    params: LinkParams,
    flows: impl IntoIterator<Item = Flow>,
    adversary: Option<Adversary>,
    end: SimTime,
    observer: &mut impl Observer,
) -> Result<Simulator> {
    let mut sim = Simulator::new(routing, params)?;
    for f in flows {
        sim.add_flow(f)?;
    }
    if let Some(adv) = adversary {
        sim.set_adversary(adv)?;
    }
    sim.run_until(end, observer)?;
    Ok(sim)
}
