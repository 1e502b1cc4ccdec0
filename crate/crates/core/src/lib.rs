//! Batch task scheduling on heterogeneous resources.
//!
//! Implements Resource Aware Min-Min (RAMM) together with the Min-Min,
//! Max-Min and Improved Max-Min baselines. Every policy maps a static batch
//! of independent tasks, all released at time zero, onto resources described
//! by an expected-time-to-compute (ETC) matrix and returns a gap-free
//! [`Schedule`]. Time is exact rational arithmetic throughout, so tie
//! behavior is reproducible bit for bit.
//!
//! ```
//! use ramm::{ramm, DivertVariant, EtcMatrix, Duration};
//!
//! let etc = EtcMatrix::from_integers(&[[2, 6], [1, 2], [3, 8], [3, 40]]).unwrap();
//! let schedule = ramm(&etc, DivertVariant::PaperConsistent);
//! assert_eq!(schedule.makespan, Duration::from_integer(7));
//! ```
//!
//! An exhaustive [`oracle`] gives the optimal makespan of small instances for
//! cross-checking, and [`scenario`] / [`report`] / [`gantt`] handle the file
//! formats used by the `ramm` command-line tool.

pub mod cli;
pub mod error;
pub mod etc;
pub mod fixtures;
pub mod gantt;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod report;
pub mod scenario;
pub mod time;

pub use error::{Error, Result};
pub use etc::{completion_matrix, completion_time, derive_etc, RoundingMode};
pub use gantt::{render_gantt, GanttStyle};
pub use metrics::{compute_metrics, ScheduleMetrics};
pub use model::{
    build_schedule, validate_schedule, Assignment, Diagnostic, EtcMatrix, ReadyTimes, ResourceId, ResourceSpec,
    Schedule, TaskId, TaskSpec,
};
pub use oracle::{optimal_makespan, OracleResult};
pub use policy::{improved_max_min, max_min, min_min, ramm, DivertVariant, PolicyId};
pub use report::{emit_report, emit_reports, ComparisonReport, ReportFormat};
pub use scenario::{generate_workload, parse_scenario, Labels, Scenario, ScenarioInput, WorkloadRanges};
pub use time::{Duration, Rational};
