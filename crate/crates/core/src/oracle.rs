//! Exhaustive optimal makespan for small instances.
//!
//! With every task released at time zero and no idle time, execution order on
//! a resource does not change its finish time, so enumerating the `m^n`
//! task-to-resource mappings is enough.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::model::{build_schedule, EtcMatrix, ResourceId, Schedule, TaskId};
use crate::time::{common_denominator, Duration, Rational};

pub const DEFAULT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimal_makespan: Duration,
    /// Resource of each task in the lexicographically least optimal mapping.
    pub witness: Vec<ResourceId>,
    /// Number of mappings enumerated; always `m^n`.
    pub explored: u64,
}

impl OracleResult {
    /// Gantt form of the witness, tasks in index order on each resource.
    pub fn witness_schedule(&self, etc: &EtcMatrix) -> Result<Schedule> {
        let order: Vec<_> = self.witness.iter().enumerate().map(|(i, &r)| (TaskId(i), r)).collect();
        build_schedule(&order, etc)
    }
}

/// Number of mappings `m^n`, or `None` when it does not fit in a `u64`.
pub fn mapping_count(etc: &EtcMatrix) -> Option<u64> {
    let n = u32::try_from(etc.tasks()).ok()?;
    (etc.resources() as u64).checked_pow(n)
}

pub fn optimal_makespan(etc: &EtcMatrix, limit: u64) -> Result<OracleResult> {
    let explored = match mapping_count(etc) {
        Some(count) if count <= limit => count,
        count => {
            return Err(Error::InstanceTooLarge {
                mappings: count
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| format!("{}^{}", etc.resources(), etc.tasks())),
                limit,
            })
        }
    };

    let values: Vec<Rational> = etc.entries().iter().map(Duration::value).collect();
    // Scale to a common denominator so the hot loop runs on plain integers.
    let scaled = common_denominator(values.iter()).and_then(|denom| {
        let ints = values
            .iter()
            .map(|v| v.numer().checked_mul(denom / v.denom()))
            .collect::<Option<Vec<i128>>>()?;
        // Loads must not overflow either.
        ints.iter().try_fold(0i128, |acc, &v| acc.checked_add(v))?;
        Some((denom, ints))
    });

    let (best, witness) = match scaled {
        Some((denom, ints)) => {
            let (best, witness) = enumerate(&ints, etc.tasks(), etc.resources(), 0i128);
            (Rational::new(best, denom), witness)
        }
        None => enumerate(&values, etc.tasks(), etc.resources(), Rational::from_integer(0)),
    };

    Ok(OracleResult {
        optimal_makespan: Duration::new(best)?,
        witness: witness.into_iter().map(ResourceId).collect(),
        explored,
    })
}

/// Odometer walk over all mappings in lexicographic order (task 0 most
/// significant), keeping the first strict improvement.
fn enumerate<T>(et: &[T], tasks: usize, resources: usize, zero: T) -> (T, Vec<usize>)
where
    T: Copy + Ord + Add<Output = T> + Sub<Output = T>,
{
    let at = |i: usize, j: usize| et[i * resources + j];
    let mut digits = vec![0usize; tasks];
    let mut loads = vec![zero; resources];
    for i in 0..tasks {
        loads[0] = loads[0] + at(i, 0);
    }
    let peak = |loads: &[T]| loads.iter().copied().max().unwrap_or(zero);

    let mut best = peak(&loads);
    let mut witness = digits.clone();
    loop {
        let mut pos = tasks;
        loop {
            if pos == 0 {
                return (best, witness);
            }
            pos -= 1;
            let d = digits[pos];
            if d + 1 < resources {
                loads[d] = loads[d] - at(pos, d);
                loads[d + 1] = loads[d + 1] + at(pos, d + 1);
                digits[pos] = d + 1;
                break;
            }
            loads[d] = loads[d] - at(pos, d);
            loads[0] = loads[0] + at(pos, 0);
            digits[pos] = 0;
        }
        let span = peak(&loads);
        if span < best {
            best = span;
            witness.clone_from(&digits);
        }
    }
}
