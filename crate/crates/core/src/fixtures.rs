//! Bundled benchmark scenarios.
//!
//! `P1`..`P3` are the completion-time tables used for the published
//! comparison. `P1_TABLE3` is the first instance as tabulated in the worked
//! example, where T2 on R2 takes 3 instead of 2. The `*_WORKLOAD` scenarios
//! carry the raw instruction/data volumes and resource speeds.

use crate::scenario::{parse_scenario, Scenario};

pub const P1: &str = include_str!("../scenarios/p1.json");
pub const P1_TABLE3: &str = include_str!("../scenarios/p1-table3.json");
pub const P2: &str = include_str!("../scenarios/p2.json");
pub const P3: &str = include_str!("../scenarios/p3.json");

pub const P1_WORKLOAD: &str = include_str!("../scenarios/p1-workload.json");
pub const P2_WORKLOAD: &str = include_str!("../scenarios/p2-workload.json");
pub const P3_WORKLOAD: &str = include_str!("../scenarios/p3-workload.json");

/// Matrix benchmarks in report order.
pub const BENCHMARKS: [(&str, &str); 3] = [("p1", P1), ("p2", P2), ("p3", P3)];

pub fn load(text: &str) -> Scenario {
    parse_scenario(text).expect("bundled scenario is valid")
}
