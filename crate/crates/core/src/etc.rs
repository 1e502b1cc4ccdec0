//! Execution and completion times.
//!
//! `ET(i, j) = MI_i / MIPS_j + Mb_i / Mbps_j` and `CT(i, j) = ET(i, j) + RT_j`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EtcMatrix, ReadyTimes, ResourceId, ResourceSpec, TaskId, TaskSpec};
use crate::time::{format_exact, Duration, Rational};

/// How derived execution times are rounded to whole time units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundingMode {
    #[default]
    Exact,
    Ceil,
    /// Half away from zero.
    Nearest,
    Floor,
}

impl RoundingMode {
    pub const ALL: [RoundingMode; 4] = [
        RoundingMode::Exact,
        RoundingMode::Ceil,
        RoundingMode::Nearest,
        RoundingMode::Floor,
    ];

    pub fn apply(self, value: Rational) -> Rational {
        match self {
            RoundingMode::Exact => value,
            RoundingMode::Ceil => value.ceil(),
            RoundingMode::Nearest => value.round(),
            RoundingMode::Floor => value.floor(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RoundingMode::Exact => "exact",
            RoundingMode::Ceil => "ceil",
            RoundingMode::Nearest => "nearest",
            RoundingMode::Floor => "floor",
        }
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RoundingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RoundingMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::parse("rounding", format!("unknown rounding mode {s:?}")))
    }
}

/// Execution time of one task on one resource before rounding.
pub fn execution_time(task: &TaskSpec, resource: &ResourceSpec) -> Result<Rational> {
    check_resource(resource)?;
    if task.instruction_volume.is_negative() || task.data_volume.is_negative() {
        return Err(Error::NegativeValue {
            location: format!("task {}", task.label()),
            value: format!(
                "{} MI / {} Mb",
                format_exact(&task.instruction_volume),
                format_exact(&task.data_volume)
            ),
        });
    }
    Ok(task.instruction_volume / resource.processing_speed + task.data_volume / resource.bandwidth)
}

fn check_resource(resource: &ResourceSpec) -> Result<()> {
    let invalid = |reason: &str| Error::InvalidResource {
        resource: resource.label(),
        reason: reason.to_string(),
    };
    if !resource.processing_speed.is_positive() {
        return Err(invalid("processing speed must be positive"));
    }
    if !resource.bandwidth.is_positive() {
        return Err(invalid("bandwidth must be positive"));
    }
    Ok(())
}

/// Builds the ETC matrix from workload and resource specifications.
pub fn derive_etc(tasks: &[TaskSpec], resources: &[ResourceSpec], mode: RoundingMode) -> Result<EtcMatrix> {
    if tasks.is_empty() {
        return Err(Error::InvalidMatrix("no tasks".into()));
    }
    if resources.is_empty() {
        return Err(Error::InvalidMatrix("no resources".into()));
    }
    resources.iter().try_for_each(check_resource)?;
    let rows = tasks
        .iter()
        .map(|t| {
            resources
                .iter()
                .map(|r| Duration::new(mode.apply(execution_time(t, r)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    EtcMatrix::from_rows(rows)
}

/// `ET(task, resource) + RT(resource)`.
pub fn completion_time(etc: &EtcMatrix, ready: &ReadyTimes, task: TaskId, resource: ResourceId) -> Result<Duration> {
    let et = etc.try_get(task, resource)?;
    let rt = ready.try_get(resource)?;
    et.checked_add(&rt).ok_or(Error::Overflow)
}

/// Completion time of every task on every resource given the current ready times.
pub fn completion_matrix(etc: &EtcMatrix, ready: &ReadyTimes) -> Result<Vec<Vec<Duration>>> {
    if ready.len() != etc.resources() {
        return Err(Error::InvalidMatrix(format!(
            "{} ready times for {} resources",
            ready.len(),
            etc.resources()
        )));
    }
    etc.task_ids()
        .map(|i| etc.resource_ids().map(|j| completion_time(etc, ready, i, j)).collect())
        .collect()
}

/// Distance between a rounded and an exact value, for checking rounding bounds.
pub fn rounding_error(mode: RoundingMode, value: Rational) -> Rational {
    let diff = mode.apply(value) - value;
    if diff < Rational::zero() {
        -diff
    } else {
        diff
    }
}
