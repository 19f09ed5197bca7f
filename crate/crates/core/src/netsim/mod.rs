//! Deterministic discrete-event simulation of a static multi-hop mesh.

mod flow;
mod observe;
mod routing;
mod sim;
mod time;
mod topology;
mod trace;

pub use flow::{Flow, ANOMALY_FLOW_BASE};
pub use observe::{average_arrival_time, observed_comm_graph, LinkCounter, NodeStats, IDLE_LINK_WEIGHT};
pub use routing::{build_routing, RoutingTable};
pub use sim::{run_simulation, FlowCounters, LinkParams, Simulator, Totals};
pub use time::SimTime;
pub use topology::{generate_topology, Topology, MAX_PLACEMENT_ATTEMPTS};
pub use trace::{InfectionLog, Observer, TraceEvent, TraceRecord};
