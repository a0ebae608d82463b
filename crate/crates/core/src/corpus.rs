//! Bundled feeders. Each file documents its provenance in its header.

use crate::feeder::{parse_feeder, Feeder};

/// Nine-node illustrative feeder with heterogeneous line costs.
pub const NINE_BUS: &str = include_str!("../feeders/nine_bus.toml");
/// IEEE 37-node feeder, uniform costs, no zero-injection nodes.
pub const IEEE37: &str = include_str!("../feeders/ieee37.toml");
/// IEEE 37-node feeder with its no-load buses marked zero-injection.
pub const IEEE37_ZERO_INJECTION: &str = include_str!("../feeders/ieee37_zero_injection.toml");
/// IEEE 123-node feeder, uniform costs, no zero-injection nodes.
pub const IEEE123: &str = include_str!("../feeders/ieee123.toml");
/// IEEE 123-node feeder with its no-load buses marked zero-injection.
pub const IEEE123_ZERO_INJECTION: &str = include_str!("../feeders/ieee123_zero_injection.toml");

/// `(name, document)` for every bundled feeder.
pub const ALL: &[(&str, &str)] = &[
    ("nine_bus", NINE_BUS),
    ("ieee37", IEEE37),
    ("ieee37_zero_injection", IEEE37_ZERO_INJECTION),
    ("ieee123", IEEE123),
    ("ieee123_zero_injection", IEEE123_ZERO_INJECTION),
];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, doc)| *doc)
}

fn load(doc: &str) -> Feeder {
    parse_feeder(doc).expect("bundled feeders are valid")
}

pub fn nine_bus() -> Feeder {
    load(NINE_BUS)
}

pub fn ieee37() -> Feeder {
    load(IEEE37)
}

pub fn ieee37_zero_injection() -> Feeder {
    load(IEEE37_ZERO_INJECTION)
}

pub fn ieee123() -> Feeder {
    load(IEEE123)
}

pub fn ieee123_zero_injection() -> Feeder {
    load(IEEE123_ZERO_INJECTION)
}
