//! Import of the whitespace-separated legacy wireless trace subset:
//!
//! ```text
//! r 0.512000 _5_ AGT --- 12 cbr 512
//! ```
//!
//! Fields are event (`s`, `r`, `d`, `f`), time in seconds, node `_<id>_`,
//! layer (`AGT`, `RTR`, `MAC`), reason `---`, packet id, packet type and size
//! in bytes. Anything else is skipped and counted. The format has no flow
//! column, so imported records carry flow id 0.

use std::collections::HashMap;
use std::path::Path;

use sentinel_core::netsim::{SimTime, TraceEvent, TraceRecord};
use sentinel_core::NodeId;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LegacyImport {
    pub records: Vec<TraceRecord>,
    pub lines: usize,
    pub skipped: usize,
    /// Records whose packet was never sent; their origin is their own time.
    pub unsent: usize,
}

/// One conforming line, with `origin_time` still unset.
pub fn parse_legacy_line(line: &str) -> Option<TraceRecord> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let [event, time, node, layer, reason, packet_id, kind, size] = fields.as_slice() else {
        return None;
    };
    let event = match *event {
        "s" => TraceEvent::Send,
        "r" => TraceEvent::Receive,
        "d" => TraceEvent::Drop,
        "f" => TraceEvent::Forward,
        _ => return None,
    };
    if !matches!(*layer, "AGT" | "RTR" | "MAC") || *reason != "---" || kind.is_empty() {
        return None;
    }
    let id = node.strip_prefix('_')?.strip_suffix('_')?;
    if !id.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let time = SimTime::parse_decimal(time)?;
    Some(TraceRecord {
        event,
        time,
        node: NodeId(id.parse().ok()?),
        packet_id: packet_id.parse().ok()?,
        size: size.parse().ok()?,
        flow_id: 0,
        origin_time: time,
    })
}

/// Parses a whole trace. Fails when more than half of the lines are skipped.
pub fn parse_legacy(text: &str, path: &Path) -> Result<LegacyImport> {
    let mut records = Vec::new();
    let mut lines = 0;
    for line in text.lines() {
        lines += 1;
        records.extend(parse_legacy_line(line));
    }
    let skipped = lines - records.len();
    if skipped * 2 > lines {
        return Err(CliError::Format {
            path: path.to_owned(),
            message: format!("{skipped} of {lines} lines are not legacy trace records"),
        });
    }
    let mut sent: HashMap<u64, SimTime> = HashMap::new();
    for r in records.iter().filter(|r| r.event == TraceEvent::Send) {
        sent.entry(r.packet_id).and_modify(|t| *t = (*t).min(r.time)).or_insert(r.time);
    }
    let mut unsent = 0;
    for r in &mut records {
        match sent.get(&r.packet_id) {
            Some(&t) => r.origin_time = t,
            None => unsent += 1,
        }
    }
    Ok(LegacyImport { records, lines, skipped, unsent })
}

pub fn import_legacy_trace(path: &Path) -> Result<LegacyImport> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_legacy(&text, path)
}
