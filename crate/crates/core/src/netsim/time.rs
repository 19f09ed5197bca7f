use core::fmt;
use core::ops::{Add, Sub};

/// Simulation timestamp in integer nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SimTime(pub u64);

const NANOS_PER_SEC: u64 = 1_000_000_000;

impl SimTime {
    pub const ZERO: SimTime = SimTime(0);
    pub const MAX: SimTime = SimTime(u64::MAX);

    /// Rounds to the nearest nanosecond; negative or NaN input maps to zero.
    pub fn from_secs(secs: f64) -> Self {
        if secs.is_nan() || secs <= 0.0 {
            return SimTime::ZERO;
        }
        let ns = libm::round(secs * NANOS_PER_SEC as f64);
        if ns >= u64::MAX as f64 {
            SimTime::MAX
        } else {
            SimTime(ns as u64)
        }
    }

    pub fn as_secs(self) -> f64 {
        self.0 as f64 / NANOS_PER_SEC as f64
    }

    pub fn as_nanos(self) -> u64 {
        self.0
    }

    pub fn saturating_add(self, rhs: SimTime) -> SimTime {
        SimTime(self.0.saturating_add(rhs.0))
    }

    /// Parses a non-negative decimal such as `0.512000` without going through
    /// binary floating point. Digits past nanosecond precision are truncated.
    pub fn parse_decimal(s: &str) -> Option<SimTime> {
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let mut nanos = 0u64;
        for (k, b) in frac.bytes().take(9).enumerate() {
            nanos += u64::from(b - b'0') * 10u64.pow(8 - k as u32);
        }
        whole.checked_mul(NANOS_PER_SEC)?.checked_add(nanos).map(SimTime)
    }
}

impl Add for SimTime {
    type Output = SimTime;

    fn add(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 + rhs.0)
    }
}

impl Sub for SimTime {
    type Output = SimTime;

    fn sub(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 - rhs.0)
    }
}

/// Seconds with six decimals, rounded to the microsecond.
impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let micros = self.0 / 1000 + u64::from(self.0 % 1000 >= 500);
        write!(f, "{}.{:06}", micros / 1_000_000, micros % 1_000_000)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing() {
        assert_eq!(SimTime::parse_decimal("0.512000"), Some(SimTime(512_000_000)));
        assert_eq!(SimTime::parse_decimal("12"), Some(SimTime(12 * NANOS_PER_SEC)));
        assert_eq!(SimTime::parse_decimal(".5"), Some(SimTime(500_000_000)));
        assert_eq!(SimTime::parse_decimal("1.0000000019"), Some(SimTime(1_000_000_001)));
        assert_eq!(SimTime::parse_decimal("-1"), None);
        assert_eq!(SimTime::parse_decimal("1e3"), None);
        assert_eq!(SimTime::parse_decimal("."), None);
    }

    #[test]
    fn display_rounds_to_micros() {
        assert_eq!(SimTime(512_000_000).to_string(), "0.512000");
        assert_eq!(SimTime(1_999_999_600).to_string(), "2.000000");
        assert_eq!(SimTime(16_384_000 + 5_000).to_string(), "0.016389");
    }

    #[test]
    fn from_secs_rounds() {
        assert_eq!(SimTime::from_secs(0.3), SimTime(300_000_000));
        assert_eq!(SimTime::from_secs(-2.0), SimTime::ZERO);
    }
}
