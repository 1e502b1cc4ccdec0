//! Domain types shared by every policy, plus schedule construction and
//! feasibility checking.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::{Duration, Rational};

/// Dense task index `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TaskId(pub usize);

/// Dense resource index `0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResourceId(pub usize);

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0 + 1)
    }
}

impl fmt::Display for ResourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0 + 1)
    }
}

/// Work description of one task: instruction volume in MI, data volume in Mb.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSpec {
    pub id: TaskId,
    pub name: Option<String>,
    pub instruction_volume: Rational,
    pub data_volume: Rational,
}

/// Capability of one resource: processing speed in MIPS, bandwidth in Mbps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceSpec {
    pub id: ResourceId,
    pub name: Option<String>,
    pub processing_speed: Rational,
    pub bandwidth: Rational,
}

impl TaskSpec {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.id.to_string())
    }
}

impl ResourceSpec {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.id.to_string())
    }
}

/// Expected execution time of every task on every resource, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtcMatrix {
    tasks: usize,
    resources: usize,
    et: Vec<Duration>,
}

impl EtcMatrix {
    pub fn from_rows(rows: Vec<Vec<Duration>>) -> Result<Self> {
        let tasks = rows.len();
        if tasks == 0 {
            return Err(Error::InvalidMatrix("no tasks".into()));
        }
        let resources = rows[0].len();
        if resources == 0 {
            return Err(Error::InvalidMatrix("no resources".into()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != resources) {
            return Err(Error::InvalidMatrix(format!(
                "row {i} has {} entries, expected {resources}",
                row.len()
            )));
        }
        Ok(EtcMatrix {
            tasks,
            resources,
            et: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer tables.
    pub fn from_integers<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        EtcMatrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Duration::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn tasks(&self) -> usize {
        self.tasks
    }

    pub fn resources(&self) -> usize {
        self.resources
    }

    /// Panics on out-of-range indices; see [`EtcMatrix::try_get`].
    pub fn get(&self, task: TaskId, resource: ResourceId) -> Duration {
        assert!(
            task.0 < self.tasks && resource.0 < self.resources,
            "ETC index out of range"
        );
        self.et[task.0 * self.resources + resource.0]
    }

    pub fn try_get(&self, task: TaskId, resource: ResourceId) -> Result<Duration> {
        self.check_task(task)?;
        self.check_resource(resource)?;
        Ok(self.et[task.0 * self.resources + resource.0])
    }

    pub fn row(&self, task: TaskId) -> &[Duration] {
        &self.et[task.0 * self.resources..(task.0 + 1) * self.resources]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Duration]> {
        self.et.chunks(self.resources)
    }

    pub fn column(&self, resource: ResourceId) -> impl Iterator<Item = Duration> + '_ {
        self.rows().map(move |row| row[resource.0])
    }

    pub fn entries(&self) -> &[Duration] {
        &self.et
    }

    pub fn task_ids(&self) -> impl Iterator<Item = TaskId> {
        (0..self.tasks).map(TaskId)
    }

    pub fn resource_ids(&self) -> impl Iterator<Item = ResourceId> {
        (0..self.resources).map(ResourceId)
    }

    pub(crate) fn check_task(&self, task: TaskId) -> Result<()> {
        if task.0 < self.tasks {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                kind: "task",
                index: task.0,
                len: self.tasks,
            })
        }
    }

    pub(crate) fn check_resource(&self, resource: ResourceId) -> Result<()> {
        if resource.0 < self.resources {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                kind: "resource",
                index: resource.0,
                len: self.resources,
            })
        }
    }

    /// Same matrix with rows reordered so that new row `k` is old row `perm[k]`.
    pub fn permute_tasks(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.tasks {
            return Err(Error::InvalidMatrix("permutation length mismatch".into()));
        }
        let mut seen = vec![false; self.tasks];
        for &p in perm {
            if p >= self.tasks || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidMatrix("not a permutation".into()));
            }
        }
        EtcMatrix::from_rows(perm.iter().map(|&p| self.row(TaskId(p)).to_vec()).collect())
    }
}

/// Accumulated committed load of each resource during a mapping loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadyTimes {
    rt: Vec<Duration>,
}

impl ReadyTimes {
    /// All resources free.
    pub fn new(resources: usize) -> Self {
        ReadyTimes {
            rt: vec![Duration::ZERO; resources],
        }
    }

    pub fn from_values(rt: Vec<Duration>) -> Self {
        ReadyTimes { rt }
    }

    pub fn len(&self) -> usize {
        self.rt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rt.is_empty()
    }

    pub fn get(&self, resource: ResourceId) -> Duration {
        self.rt[resource.0]
    }

    pub fn try_get(&self, resource: ResourceId) -> Result<Duration> {
        self.rt.get(resource.0).copied().ok_or(Error::IndexOutOfRange {
            kind: "resource",
            index: resource.0,
            len: self.rt.len(),
        })
    }

    pub fn is_idle(&self, resource: ResourceId) -> bool {
        self.rt[resource.0].is_zero()
    }

    pub fn any_idle(&self) -> bool {
        self.rt.iter().any(Duration::is_zero)
    }

    pub fn add(&mut self, resource: ResourceId, amount: Duration) {
        self.rt[resource.0] = self.rt[resource.0] + amount;
    }

    pub fn as_slice(&self) -> &[Duration] {
        &self.rt
    }
}

/// One Gantt bar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub task: TaskId,
    pub resource: ResourceId,
    pub start: Duration,
    pub finish: Duration,
}

impl Assignment {
    pub fn duration(&self) -> Rational {
        self.finish.value() - self.start.value()
    }
}

/// Task mapping in the order the policy produced it, plus the cached makespan.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
    pub makespan: Duration,
}

impl Schedule {
    /// Caches the maximum finish as the makespan.
    pub fn new(assignments: Vec<Assignment>) -> Self {
        let makespan = assignments.iter().map(|a| a.finish).max().unwrap_or(Duration::ZERO);
        Schedule { assignments, makespan }
    }

    pub fn order(&self) -> Vec<(TaskId, ResourceId)> {
        self.assignments.iter().map(|a| (a.task, a.resource)).collect()
    }

    /// Assignments on one resource in execution order.
    pub fn on_resource(&self, resource: ResourceId) -> impl Iterator<Item = &Assignment> {
        self.assignments.iter().filter(move |a| a.resource == resource)
    }

    pub fn resource_of(&self, task: TaskId) -> Option<ResourceId> {
        self.assignments.iter().find(|a| a.task == task).map(|a| a.resource)
    }
}

/// Materializes a task-to-resource order into back-to-back Gantt bars.
///
/// Tasks on the same resource run in list order starting at time zero.
pub fn build_schedule(order: &[(TaskId, ResourceId)], etc: &EtcMatrix) -> Result<Schedule> {
    let mut seen = vec![false; etc.tasks()];
    for &(task, resource) in order {
        etc.check_task(task)?;
        etc.check_resource(resource)?;
        if std::mem::replace(&mut seen[task.0], true) {
            return Err(Error::MalformedOrder(format!("task {task} appears more than once")));
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::MalformedOrder(format!(
            "task {} is not assigned",
            TaskId(missing)
        )));
    }

    let mut ready = ReadyTimes::new(etc.resources());
    let assignments = order
        .iter()
        .map(|&(task, resource)| {
            let start = ready.get(resource);
            ready.add(resource, etc.get(task, resource));
            Assignment {
                task,
                resource,
                start,
                finish: ready.get(resource),
            }
        })
        .collect();
    Ok(Schedule::new(assignments))
}

/// A single violated schedule invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    UnknownTask {
        task: TaskId,
    },
    UnknownResource {
        task: TaskId,
        resource: ResourceId,
    },
    DuplicateTask {
        task: TaskId,
    },
    MissingTask {
        task: TaskId,
    },
    WrongDuration {
        task: TaskId,
        expected: Rational,
        actual: Rational,
    },
    Gap {
        resource: ResourceId,
        task: TaskId,
        expected_start: Duration,
        actual_start: Duration,
    },
    Overlap {
        resource: ResourceId,
        task: TaskId,
        expected_start: Duration,
        actual_start: Duration,
    },
    WrongMakespan {
        expected: Duration,
        actual: Duration,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::time::format_exact;
        match self {
            Diagnostic::UnknownTask { task } => write!(f, "unknown task {task}"),
            Diagnostic::UnknownResource { task, resource } => {
                write!(f, "task {task} mapped to unknown resource {resource}")
            }
            Diagnostic::DuplicateTask { task } => write!(f, "task {task} assigned more than once"),
            Diagnostic::MissingTask { task } => write!(f, "task {task} not assigned"),
            Diagnostic::WrongDuration { task, expected, actual } => write!(
                f,
                "task {task} runs for {} but its execution time is {}",
                format_exact(actual),
                format_exact(expected)
            ),
            Diagnostic::Gap {
                resource,
                task,
                expected_start,
                actual_start,
            } => write!(
                f,
                "idle gap on {resource} before {task}: starts at {actual_start}, resource free at {expected_start}"
            ),
            Diagnostic::Overlap {
                resource,
                task,
                expected_start,
                actual_start,
            } => write!(
                f,
                "overlap on {resource} at {task}: starts at {actual_start}, resource busy until {expected_start}"
            ),
            Diagnostic::WrongMakespan { expected, actual } => {
                write!(f, "makespan is {actual} but last finish is {expected}")
            }
        }
    }
}

/// Checks every schedule invariant against `etc`; an empty result means feasible.
pub fn validate_schedule(schedule: &Schedule, etc: &EtcMatrix) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut seen = vec![false; etc.tasks()];
    let mut per_resource: Vec<Vec<&Assignment>> = vec![Vec::new(); etc.resources()];

    for a in &schedule.assignments {
        if a.task.0 >= etc.tasks() {
            diags.push(Diagnostic::UnknownTask { task: a.task });
            continue;
        }
        if std::mem::replace(&mut seen[a.task.0], true) {
            diags.push(Diagnostic::DuplicateTask { task: a.task });
        }
        if a.resource.0 >= etc.resources() {
            diags.push(Diagnostic::UnknownResource {
                task: a.task,
                resource: a.resource,
            });
            continue;
        }
        let expected = etc.get(a.task, a.resource).value();
        if a.duration() != expected {
            diags.push(Diagnostic::WrongDuration {
                task: a.task,
                expected,
                actual: a.duration(),
            });
        }
        per_resource[a.resource.0].push(a);
    }
    for (i, _) in seen.iter().enumerate().filter(|(_, s)| !**s) {
        diags.push(Diagnostic::MissingTask { task: TaskId(i) });
    }

    for (j, bars) in per_resource.iter_mut().enumerate() {
        bars.sort_by_key(|a| (a.start, a.finish));
        let mut cursor = Duration::ZERO;
        for a in bars.iter() {
            if a.start > cursor {
                diags.push(Diagnostic::Gap {
                    resource: ResourceId(j),
                    task: a.task,
                    expected_start: cursor,
                    actual_start: a.start,
                });
            } else if a.start < cursor {
                diags.push(Diagnostic::Overlap {
                    resource: ResourceId(j),
                    task: a.task,
                    expected_start: cursor,
                    actual_start: a.start,
                });
            }
            cursor = cursor.max(a.finish);
        }
    }
    let last_finish = schedule
        .assignments
        .iter()
        .map(|a| a.finish)
        .max()
        .unwrap_or(Duration::ZERO);
    if schedule.makespan != last_finish {
        diags.push(Diagnostic::WrongMakespan {
            expected: last_finish,
            actual: schedule.makespan,
        });
    }
    diags
}
