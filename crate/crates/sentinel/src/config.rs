//! Flat `key = value` experiment configuration.
//!
//! Keys are the field names of [`SimConfig`]. Blank lines and lines starting
//! with `#` are ignored, lists are comma-separated, and a key may appear at
//! most once. Keys left out keep their defaults.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use sentinel_core::experiment::{IcChoice, SimConfig};

use crate::error::{CliError, Result};

fn value<T: FromStr>(key: &str, raw: &str) -> std::result::Result<T, String> {
    raw.parse().map_err(|_| format!("`{raw}` is not a valid value for {key}"))
}

fn list(key: &str, raw: &str) -> std::result::Result<Vec<f64>, String> {
    raw.split(',').map(|item| value(key, item.trim())).collect()
}

fn set(config: &mut SimConfig, key: &str, raw: &str) -> std::result::Result<(), String> {
    match key {
        "n" => config.n = value(key, raw)?,
        "side" => config.side = value(key, raw)?,
        "radio_range" => config.radio_range = value(key, raw)?,
        "sim_time" => config.sim_time = value(key, raw)?,
        "replications" => config.replications = value(key, raw)?,
        "flow_count" => config.flow_count = value(key, raw)?,
        "baseline_rate" => config.baseline_rate = value(key, raw)?,
        "packet_size" => config.packet_size = value(key, raw)?,
        "queue_cap" => config.queue_cap = value(key, raw)?,
        "link_rate" => config.link_rate = value(key, raw)?,
        "prop_delay" => config.prop_delay = value(key, raw)?,
        "t_train" => config.t_train = value(key, raw)?,
        "delta" => config.delta = value(key, raw)?,
        "k" => config.k = value(key, raw)?,
        "floor_factor" => config.floor_factor = value(key, raw)?,
        "floor_bytes" => config.floor_bytes = value(key, raw)?,
        "central_fractions" => config.central_fractions = list(key, raw)?,
        "anomaly_rates" => config.anomaly_rates = list(key, raw)?,
        "attack_packet_size" => config.attack_packet_size = value(key, raw)?,
        "t_seeds" => config.t_seeds = value(key, raw)?,
        "injection_time" => config.injection_time = value(key, raw)?,
        "rng_seed" => config.rng_seed = value(key, raw)?,
        "max_hops" => config.max_hops = value(key, raw)?,
        "ic_method" => config.ic_method = raw.parse::<IcChoice>().map_err(|e| e.to_string())?,
        _ => return Err(format!("unknown key `{key}`")),
    }
    Ok(())
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut config = SimConfig::default();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |msg: String| CliError::Config(format!("line {}: {msg}", i + 1));
        let (key, raw) = line.split_once('=').ok_or_else(|| fail("expected `key = value`".into()))?;
        let (key, raw) = (key.trim(), raw.trim());
        if !seen.insert(key.to_owned()) {
            return Err(fail(format!("duplicate key `{key}`")));
        }
        set(&mut config, key, raw).map_err(fail)?;
    }
    config.validate()?;
    Ok(config)
}

pub fn read_config(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// Every key with its effective value. Parsing the echo gives back `config`.
pub fn echo_config(config: &SimConfig) -> String {
    let c = config;
    let mut out = String::new();
    let pairs: [(&str, String); 24] = [
        ("n", c.n.to_string()),
        ("side", c.side.to_string()),
        ("radio_range", c.radio_range.to_string()),
        ("sim_time", c.sim_time.to_string()),
        ("replications", c.replications.to_string()),
        ("flow_count", c.flow_count.to_string()),
        ("baseline_rate", c.baseline_rate.to_string()),
        ("packet_size", c.packet_size.to_string()),
        ("queue_cap", c.queue_cap.to_string()),
        ("link_rate", c.link_rate.to_string()),
        ("prop_delay", c.prop_delay.to_string()),
        ("t_train", c.t_train.to_string()),
        ("delta", c.delta.to_string()),
        ("k", c.k.to_string()),
        ("floor_factor", c.floor_factor.to_string()),
        ("floor_bytes", c.floor_bytes.to_string()),
        ("central_fractions", join(&c.central_fractions)),
        ("anomaly_rates", join(&c.anomaly_rates)),
        ("attack_packet_size", c.attack_packet_size.to_string()),
        ("t_seeds", c.t_seeds.to_string()),
        ("injection_time", c.injection_time.to_string()),
        ("rng_seed", c.rng_seed.to_string()),
        ("max_hops", c.max_hops.to_string()),
        ("ic_method", c.ic_method.name().to_owned()),
    ];
    for (key, v) in pairs {
        let _ = writeln!(out, "{key} = {v}");
    }
    out
}
