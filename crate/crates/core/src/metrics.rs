//! Schedule quality measures.

use num_traits::Zero;

use crate::model::{ResourceId, Schedule, TaskId};
use crate::time::{ratio_or_zero, Duration, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleMetrics {
    pub makespan: Duration,
    /// Busy time per resource.
    pub loads: Vec<Duration>,
    /// `(max load - min load) / max load`, zero for an empty schedule.
    pub imbalance: Rational,
    /// Start time of each task, indexed by task id.
    pub waiting: Vec<Duration>,
    /// `load / makespan` per resource.
    pub utilization: Vec<Rational>,
}

/// Computes metrics for a schedule over `resources` resources.
///
/// The resource count is explicit because idle resources do not show up in
/// the assignment list.
pub fn compute_metrics(schedule: &Schedule, resources: usize) -> ScheduleMetrics {
    let resources = resources.max(schedule.assignments.iter().map(|a| a.resource.0 + 1).max().unwrap_or(0));
    let loads: Vec<Duration> = (0..resources)
        .map(|j| {
            schedule
                .on_resource(ResourceId(j))
                .map(|a| Duration::new(a.duration()).unwrap_or(Duration::ZERO))
                .sum()
        })
        .collect();

    let max = loads.iter().copied().max().unwrap_or(Duration::ZERO);
    let min = loads.iter().copied().min().unwrap_or(Duration::ZERO);
    let imbalance = ratio_or_zero(max.value() - min.value(), max.value());

    let tasks = schedule.assignments.iter().map(|a| a.task.0 + 1).max().unwrap_or(0);
    let mut waiting = vec![Duration::ZERO; tasks];
    for a in &schedule.assignments {
        waiting[a.task.0] = a.start;
    }

    let utilization = loads.iter().map(|l| ratio_or_zero(l.value(), max.value())).collect();

    ScheduleMetrics {
        makespan: max,
        loads,
        imbalance,
        waiting,
        utilization,
    }
}

impl ScheduleMetrics {
    pub fn waiting_of(&self, task: TaskId) -> Duration {
        self.waiting.get(task.0).copied().unwrap_or(Duration::ZERO)
    }

    pub fn is_balanced(&self) -> bool {
        self.imbalance.is_zero()
    }
}
