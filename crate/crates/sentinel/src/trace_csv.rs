//! Native trace CSV: `event,time,node,packet_id,size,flow_id,origin_time`,
//! times in seconds with six decimals.

use std::io::Write;
use std::path::Path;

use sentinel_core::netsim::{SimTime, TraceRecord};
use sentinel_core::NodeId;

use crate::error::{CliError, Result};

pub const TRACE_HEADER: &str = "event,time,node,packet_id,size,flow_id,origin_time";

pub fn write_trace(out: &mut impl Write, records: &[TraceRecord]) -> std::io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.event, r.time, r.node, r.packet_id, r.size, r.flow_id, r.origin_time
        )?;
    }
    Ok(())
}

pub fn write_trace_file(path: &Path, records: &[TraceRecord]) -> Result<()> {
    let mut buf = Vec::new();
    write_trace(&mut buf, records).map_err(|e| CliError::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| CliError::io(path, e))
}

fn parse_record(line: &str) -> std::result::Result<TraceRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    let [event, time, node, packet_id, size, flow_id, origin] = fields.as_slice() else {
        return Err(format!("expected 7 fields, got {}", fields.len()));
    };
    let time_of = |s: &str| SimTime::parse_decimal(s).ok_or_else(|| format!("bad time `{s}`"));
    let int = |s: &str| s.parse::<u64>().map_err(|_| format!("bad integer `{s}`"));
    let narrow = |s: &str| u32::try_from(int(s)?).map_err(|_| format!("`{s}` out of range"));
    Ok(TraceRecord {
        event: event.parse().map_err(|e: sentinel_core::Error| e.to_string())?,
        time: time_of(time)?,
        node: NodeId(narrow(node)?),
        packet_id: int(packet_id)?,
        size: narrow(size)?,
        flow_id: narrow(flow_id)?,
        origin_time: time_of(origin)?,
    })
}

pub fn parse_trace(text: &str, path: &Path) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRACE_HEADER => {}
        _ => return Err(CliError::Format { path: path.to_owned(), message: format!("expected header `{TRACE_HEADER}`") }),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_record(l.trim()).map_err(|message| CliError::Parse { path: path.to_owned(), line: i + 1, message })
        })
        .collect()
}
