//! Batch mapping heuristics.
//!
//! Every policy runs the same static mapping loop: all tasks are released at
//! time zero, a resource counts as busy once its ready time is positive, and
//! each assignment appends the task to the end of the chosen resource's queue.
//! Ties are broken by lowest task index, then lowest resource index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, EtcMatrix, ReadyTimes, ResourceId, Schedule, TaskId};
use crate::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyId {
    MinMin,
    MaxMin,
    ImprovedMaxMin,
    Ramm,
}

/// How a policy reacts when the chosen task's best resource is already busy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivertVariant {
    /// Re-select a task for an idle resource. Reproduces the published traces.
    #[default]
    PaperConsistent,
    /// Move the selected task itself to the cheapest idle resource.
    Strict,
}

impl PolicyId {
    pub const ALL: [PolicyId; 4] = [
        PolicyId::MinMin,
        PolicyId::MaxMin,
        PolicyId::ImprovedMaxMin,
        PolicyId::Ramm,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            PolicyId::MinMin => "min-min",
            PolicyId::MaxMin => "max-min",
            PolicyId::ImprovedMaxMin => "improved-max-min",
            PolicyId::Ramm => "ramm",
        }
    }

    /// Column heading used in reports.
    pub fn title(self) -> &'static str {
        match self {
            PolicyId::MinMin => "Min-Min",
            PolicyId::MaxMin => "Max-Min",
            PolicyId::ImprovedMaxMin => "Improved Max-Min",
            PolicyId::Ramm => "RAMM",
        }
    }

    /// Whether the divert variant changes this policy's behavior.
    pub fn uses_variant(self) -> bool {
        matches!(self, PolicyId::ImprovedMaxMin | PolicyId::Ramm)
    }

    pub fn schedule(self, etc: &EtcMatrix, variant: DivertVariant) -> Schedule {
        match self {
            PolicyId::MinMin => min_min(etc),
            PolicyId::MaxMin => max_min(etc),
            PolicyId::ImprovedMaxMin => improved_max_min(etc, variant),
            PolicyId::Ramm => ramm(etc, variant),
        }
    }
}

impl fmt::Display for PolicyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        PolicyId::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| Error::parse("policy", format!("unknown policy {s:?}")))
    }
}

impl DivertVariant {
    pub fn name(self) -> &'static str {
        match self {
            DivertVariant::PaperConsistent => "paper-consistent",
            DivertVariant::Strict => "strict",
        }
    }
}

impl fmt::Display for DivertVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DivertVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "paper-consistent" => Ok(DivertVariant::PaperConsistent),
            "strict" => Ok(DivertVariant::Strict),
            _ => Err(Error::parse("variant", format!("unknown variant {s:?}"))),
        }
    }
}

/// Mapping-loop state shared by all policies.
struct Mapper<'a> {
    etc: &'a EtcMatrix,
    ready: ReadyTimes,
    /// Unmapped tasks in ascending index order.
    remaining: Vec<TaskId>,
    assignments: Vec<Assignment>,
}

impl<'a> Mapper<'a> {
    fn new(etc: &'a EtcMatrix) -> Self {
        Mapper {
            etc,
            ready: ReadyTimes::new(etc.resources()),
            remaining: etc.task_ids().collect(),
            assignments: Vec::with_capacity(etc.tasks()),
        }
    }

    fn done(&self) -> bool {
        self.remaining.is_empty()
    }

    fn et(&self, task: TaskId, resource: ResourceId) -> Duration {
        self.etc.get(task, resource)
    }

    fn ct(&self, task: TaskId, resource: ResourceId) -> Duration {
        self.et(task, resource) + self.ready.get(resource)
    }

    fn idle_resources(&self) -> impl Iterator<Item = ResourceId> + '_ {
        self.etc.resource_ids().filter(|&j| self.ready.is_idle(j))
    }

    /// Resource with the smallest completion time for `task` among `candidates`.
    fn min_ct_among(&self, task: TaskId, candidates: impl Iterator<Item = ResourceId>) -> Option<ResourceId> {
        argmin_by_key(candidates, |&j| self.ct(task, j))
    }

    fn min_ct_resource(&self, task: TaskId) -> ResourceId {
        self.min_ct_among(task, self.etc.resource_ids())
            .expect("at least one resource")
    }

    fn min_et_resource(&self, task: TaskId) -> ResourceId {
        argmin_by_key(self.etc.resource_ids(), |&j| self.et(task, j)).expect("at least one resource")
    }

    fn min_et(&self, task: TaskId) -> Duration {
        *self.etc.row(task).iter().min().expect("at least one resource")
    }

    fn max_et(&self, task: TaskId) -> Duration {
        *self.etc.row(task).iter().max().expect("at least one resource")
    }

    /// Needs an idle resource, the best resource for `task` to be busy.
    fn should_divert(&self, best: ResourceId) -> bool {
        !self.ready.is_idle(best) && self.ready.any_idle()
    }

    fn assign(&mut self, task: TaskId, resource: ResourceId) {
        let pos = self
            .remaining
            .iter()
            .position(|&t| t == task)
            .expect("task is still unmapped");
        self.remaining.remove(pos);
        let start = self.ready.get(resource);
        self.ready.add(resource, self.et(task, resource));
        self.assignments.push(Assignment {
            task,
            resource,
            start,
            finish: self.ready.get(resource),
        });
    }

    fn finish(self) -> Schedule {
        Schedule::new(self.assignments)
    }
}

/// First element with the smallest key.
fn argmin_by_key<T, K: Ord>(items: impl Iterator<Item = T>, key: impl Fn(&T) -> K) -> Option<T> {
    let mut best: Option<(K, T)> = None;
    for item in items {
        let k = key(&item);
        if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
            best = Some((k, item));
        }
    }
    best.map(|(_, t)| t)
}

/// First element with the largest key.
fn argmax_by_key<T, K: Ord>(items: impl Iterator<Item = T>, key: impl Fn(&T) -> K) -> Option<T> {
    let mut best: Option<(K, T)> = None;
    for item in items {
        let k = key(&item);
        if best.as_ref().is_none_or(|(bk, _)| k > *bk) {
            best = Some((k, item));
        }
    }
    best.map(|(_, t)| t)
}

/// Repeatedly maps the (task, resource) pair with the smallest completion time.
pub fn min_min(etc: &EtcMatrix) -> Schedule {
    let mut map = Mapper::new(etc);
    while !map.done() {
        let pairs = map
            .remaining
            .iter()
            .flat_map(|&i| etc.resource_ids().map(move |j| (i, j)));
        let (task, resource) = argmin_by_key(pairs, |&(i, j)| map.ct(i, j)).expect("tasks remain");
        map.assign(task, resource);
    }
    map.finish()
}

/// Repeatedly maps the task with the largest completion time on its fastest
/// resource to that fastest (minimum execution time) resource.
pub fn max_min(etc: &EtcMatrix) -> Schedule {
    let mut map = Mapper::new(etc);
    while !map.done() {
        let task =
            argmax_by_key(map.remaining.iter().copied(), |&i| map.ct(i, map.min_et_resource(i))).expect("tasks remain");
        let resource = map.min_et_resource(task);
        map.assign(task, resource);
    }
    map.finish()
}

/// Maps the task with the largest execution time to its minimum completion
/// time resource, diverting work to idle resources per `variant`.
pub fn improved_max_min(etc: &EtcMatrix, variant: DivertVariant) -> Schedule {
    let mut map = Mapper::new(etc);
    while !map.done() {
        let task = argmax_by_key(map.remaining.iter().copied(), |&i| map.max_et(i)).expect("tasks remain");
        let best = map.min_ct_resource(task);
        let (task, resource) = match variant {
            DivertVariant::PaperConsistent if map.should_divert(best) => {
                let idle = map
                    .min_ct_among(task, map.idle_resources())
                    .expect("idle resource exists");
                let longest = argmax_by_key(map.remaining.iter().copied(), |&i| map.et(i, idle)).expect("tasks remain");
                (longest, idle)
            }
            _ => (task, best),
        };
        map.assign(task, resource);
    }
    map.finish()
}

/// Resource Aware Min-Min.
///
/// Selects the task with the smallest execution time and sends it to its
/// minimum completion time resource. When that resource is busy while another
/// one sits idle, work is diverted to the idle resource instead:
///
/// * [`DivertVariant::PaperConsistent`] picks the (idle resource, task) pair
///   with the smallest completion time, ties by resource then task index;
/// * [`DivertVariant::Strict`] moves the selected task to its cheapest idle
///   resource.
///
/// Once every resource is busy the selected task goes to its minimum
/// completion time resource.
pub fn ramm(etc: &EtcMatrix, variant: DivertVariant) -> Schedule {
    let mut map = Mapper::new(etc);
    while !map.done() {
        let task = argmin_by_key(map.remaining.iter().copied(), |&i| map.min_et(i)).expect("tasks remain");
        let best = map.min_ct_resource(task);
        let (task, resource) = if map.should_divert(best) {
            match variant {
                DivertVariant::PaperConsistent => {
                    let pairs = map
                        .idle_resources()
                        .flat_map(|j| map.remaining.iter().map(move |&i| (i, j)));
                    argmin_by_key(pairs, |&(i, j)| map.ct(i, j)).expect("idle resource exists")
                }
                DivertVariant::Strict => {
                    let idle = map
                        .min_ct_among(task, map.idle_resources())
                        .expect("idle resource exists");
                    (task, idle)
                }
            }
        } else {
            (task, best)
        };
        map.assign(task, resource);
    }
    map.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_schedule, validate_schedule};

    fn etc(rows: &[[u64; 2]]) -> EtcMatrix {
        EtcMatrix::from_integers(rows).unwrap()
    }

    fn p1() -> EtcMatrix {
        etc(&[[2, 6], [1, 2], [3, 8], [3, 40]])
    }

    fn p2() -> EtcMatrix {
        etc(&[[3, 10], [2, 13], [5, 21], [1, 12]])
    }

    fn p3() -> EtcMatrix {
        etc(&[[1, 7], [1, 14], [1, 14], [1, 4]])
    }

    fn order(s: &Schedule) -> Vec<(usize, usize)> {
        s.assignments.iter().map(|a| (a.task.0, a.resource.0)).collect()
    }

    fn makespan(s: &Schedule) -> u64 {
        assert!(s.makespan.is_integer());
        s.makespan.value().to_integer() as u64
    }

    #[test]
    fn min_min_benchmarks() {
        let s = min_min(&p1());
        assert_eq!(makespan(&s), 9);
        assert!(s.assignments.iter().all(|a| a.resource == ResourceId(0)));
        assert_eq!(makespan(&min_min(&p2())), 11);
        assert_eq!(makespan(&min_min(&p3())), 4);
        assert_eq!(makespan(&min_min(&EtcMatrix::from_integers(&[[5]]).unwrap())), 5);
    }

    #[test]
    fn max_min_benchmarks() {
        let s = max_min(&p1());
        assert_eq!(makespan(&s), 9);
        assert!(s.assignments.iter().all(|a| a.resource == ResourceId(0)));
        // T3 and T4 tie on completion time 3; the lower index goes first
        assert_eq!(order(&s), vec![(2, 0), (3, 0), (0, 0), (1, 0)]);
        assert_eq!(makespan(&max_min(&p2())), 11);
        assert_eq!(makespan(&max_min(&p3())), 4);
    }

    #[test]
    fn improved_max_min_benchmarks() {
        let s = improved_max_min(&p1(), DivertVariant::PaperConsistent);
        assert_eq!(order(&s), vec![(3, 0), (2, 1), (0, 0), (1, 0)]);
        assert_eq!(makespan(&s), 8);
        assert_eq!(makespan(&improved_max_min(&p2(), DivertVariant::PaperConsistent)), 13);
        assert_eq!(makespan(&improved_max_min(&p3(), DivertVariant::PaperConsistent)), 14);
    }

    #[test]
    fn improved_max_min_strict_on_p1() {
        // T4 -> R1 (CT 3); T3: CT R1 6 < 8 -> R1; T1: CT R1 8 > 6 -> R2; T2: CT R1 7 < 8 -> R1
        let s = improved_max_min(&p1(), DivertVariant::Strict);
        assert_eq!(order(&s), vec![(3, 0), (2, 0), (0, 1), (1, 0)]);
        assert_eq!(makespan(&s), 7);
        assert!(validate_schedule(&s, &p1()).is_empty());
    }

    #[test]
    fn ramm_benchmarks() {
        let s = ramm(&p1(), DivertVariant::PaperConsistent);
        assert_eq!(order(&s), vec![(1, 0), (0, 1), (2, 0), (3, 0)]);
        assert_eq!(makespan(&s), 7);

        let s = ramm(&p2(), DivertVariant::PaperConsistent);
        assert_eq!(order(&s), vec![(3, 0), (0, 1), (1, 0), (2, 0)]);
        assert_eq!(makespan(&s), 10);

        let s = ramm(&p3(), DivertVariant::PaperConsistent);
        assert_eq!(order(&s), vec![(0, 0), (3, 1), (1, 0), (2, 0)]);
        assert_eq!(makespan(&s), 4);
    }

    #[test]
    fn ramm_strict_moves_the_selected_task() {
        // P2: T4 -> R1, then T2 (min ET 2) finds R1 busy and moves to idle R2
        let s = ramm(&p2(), DivertVariant::Strict);
        assert_eq!(order(&s), vec![(3, 0), (1, 1), (0, 0), (2, 0)]);
        assert_eq!(makespan(&s), 13);
        // on P1 both readings coincide
        assert_eq!(
            ramm(&p1(), DivertVariant::Strict),
            ramm(&p1(), DivertVariant::PaperConsistent)
        );
    }

    #[test]
    fn single_resource_sums_column() {
        let e = EtcMatrix::from_integers(&[[4], [1], [7]]).unwrap();
        for p in PolicyId::ALL {
            for v in [DivertVariant::PaperConsistent, DivertVariant::Strict] {
                assert_eq!(makespan(&p.schedule(&e, v)), 12, "{p} {v}");
            }
        }
    }

    #[test]
    fn policies_agree_with_build_schedule() {
        for e in [p1(), p2(), p3()] {
            for p in PolicyId::ALL {
                let s = p.schedule(&e, DivertVariant::PaperConsistent);
                assert_eq!(build_schedule(&s.order(), &e).unwrap(), s);
                assert!(validate_schedule(&s, &e).is_empty());
            }
        }
    }

    #[test]
    fn zero_time_tasks_keep_resource_idle() {
        let e = etc(&[[0, 5], [3, 3], [0, 0]]);
        for p in PolicyId::ALL {
            let s = p.schedule(&e, DivertVariant::PaperConsistent);
            assert!(validate_schedule(&s, &e).is_empty(), "{p}");
        }
    }

    #[test]
    fn names_round_trip() {
        for p in PolicyId::ALL {
            assert_eq!(p.name().parse::<PolicyId>().unwrap(), p);
        }
        assert_eq!(
            "improved_max_min".parse::<PolicyId>().unwrap(),
            PolicyId::ImprovedMaxMin
        );
        assert_eq!(
            "paper_consistent".parse::<DivertVariant>().unwrap(),
            DivertVariant::PaperConsistent
        );
        assert!("lpt".parse::<PolicyId>().is_err());
    }
}
