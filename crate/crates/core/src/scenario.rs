//! Scenario files and seeded workload generation.
//!
//! A scenario is one JSON document with a `name` and exactly one of
//!
//! ```json
//! "workload": {"tasks": [{"id": "T1", "mi": 256, "mb": 88}],
//!              "resources": [{"id": "R1", "mips": 150, "mbps": 300}],
//!              "rounding": "exact"}
//! "etc":      {"tasks": ["T1"], "resources": ["R1"], "rows": [[2]]}
//! ```
//!
//! Numbers are read exactly: integers, decimals and `"p/q"` strings all become
//! rationals without passing through floating point.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::etc::{derive_etc, RoundingMode};
use crate::model::{EtcMatrix, ResourceId, ResourceSpec, TaskId, TaskSpec};
use crate::time::{format_exact, rational_from_json, rational_to_json, Duration, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub input: ScenarioInput,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioInput {
    Workload {
        tasks: Vec<TaskSpec>,
        resources: Vec<ResourceSpec>,
        rounding: RoundingMode,
    },
    Matrix {
        tasks: Vec<String>,
        resources: Vec<String>,
        etc: EtcMatrix,
    },
}

/// Display names for rows and columns of an ETC matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub tasks: Vec<String>,
    pub resources: Vec<String>,
}

impl Labels {
    /// `T1..Tn`, `R1..Rm`.
    pub fn default_for(tasks: usize, resources: usize) -> Self {
        Labels {
            tasks: (0..tasks).map(|i| TaskId(i).to_string()).collect(),
            resources: (0..resources).map(|j| ResourceId(j).to_string()).collect(),
        }
    }

    pub fn task(&self, task: TaskId) -> String {
        self.tasks.get(task.0).cloned().unwrap_or_else(|| task.to_string())
    }

    pub fn resource(&self, resource: ResourceId) -> String {
        self.resources
            .get(resource.0)
            .cloned()
            .unwrap_or_else(|| resource.to_string())
    }
}

impl Scenario {
    /// ETC matrix using the scenario's own rounding mode.
    pub fn etc(&self) -> Result<EtcMatrix> {
        self.etc_with(None)
    }

    /// ETC matrix, with `rounding` overriding a workload scenario's mode.
    /// Matrix scenarios are returned as written.
    pub fn etc_with(&self, rounding: Option<RoundingMode>) -> Result<EtcMatrix> {
        match &self.input {
            ScenarioInput::Workload {
                tasks,
                resources,
                rounding: own,
            } => derive_etc(tasks, resources, rounding.unwrap_or(*own)),
            ScenarioInput::Matrix { etc, .. } => Ok(etc.clone()),
        }
    }

    pub fn labels(&self) -> Labels {
        match &self.input {
            ScenarioInput::Workload { tasks, resources, .. } => Labels {
                tasks: tasks.iter().map(TaskSpec::label).collect(),
                resources: resources.iter().map(ResourceSpec::label).collect(),
            },
            ScenarioInput::Matrix { tasks, resources, .. } => Labels {
                tasks: tasks.clone(),
                resources: resources.clone(),
            },
        }
    }

    /// Matrix-form copy of this scenario.
    pub fn to_matrix_form(&self, rounding: Option<RoundingMode>) -> Result<Scenario> {
        let labels = self.labels();
        Ok(Scenario {
            name: self.name.clone(),
            input: ScenarioInput::Matrix {
                tasks: labels.tasks,
                resources: labels.resources,
                etc: self.etc_with(rounding)?,
            },
        })
    }

    /// Pretty-printed scenario document; [`parse_scenario`] reads it back unchanged.
    pub fn to_json(&self) -> String {
        let doc = match &self.input {
            ScenarioInput::Workload {
                tasks,
                resources,
                rounding,
            } => ScenarioDoc {
                name: &self.name,
                workload: Some(WorkloadDoc {
                    tasks: tasks
                        .iter()
                        .map(|t| TaskDoc {
                            id: t.label(),
                            mi: rational_to_json(&t.instruction_volume),
                            mb: rational_to_json(&t.data_volume),
                        })
                        .collect(),
                    resources: resources
                        .iter()
                        .map(|r| ResourceDoc {
                            id: r.label(),
                            mips: rational_to_json(&r.processing_speed),
                            mbps: rational_to_json(&r.bandwidth),
                        })
                        .collect(),
                    rounding: *rounding,
                }),
                etc: None,
            },
            ScenarioInput::Matrix { tasks, resources, etc } => ScenarioDoc {
                name: &self.name,
                workload: None,
                etc: Some(MatrixDoc {
                    tasks: tasks.clone(),
                    resources: resources.clone(),
                    rows: etc.rows().map(<[Duration]>::to_vec).collect(),
                }),
            },
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("scenario serializes");
        out.push('\n');
        out
    }
}

#[derive(Serialize)]
struct ScenarioDoc<'a> {
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    workload: Option<WorkloadDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    etc: Option<MatrixDoc>,
}

#[derive(Serialize)]
struct WorkloadDoc {
    tasks: Vec<TaskDoc>,
    resources: Vec<ResourceDoc>,
    rounding: RoundingMode,
}

#[derive(Serialize)]
struct TaskDoc {
    id: String,
    mi: Value,
    mb: Value,
}

#[derive(Serialize)]
struct ResourceDoc {
    id: String,
    mips: Value,
    mbps: Value,
}

#[derive(Serialize)]
struct MatrixDoc {
    tasks: Vec<String>,
    resources: Vec<String>,
    rows: Vec<Vec<Duration>>,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let root = as_object(&doc, "$")?;
    check_keys(root, "$", &["name", "workload", "etc"])?;

    let name = match root.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::parse("$.name", "expected a string")),
        None => return Err(Error::parse("$.name", "missing field")),
    };
    let input = match (root.get("workload"), root.get("etc")) {
        (Some(w), None) => parse_workload(w)?,
        (None, Some(m)) => parse_matrix(m)?,
        (Some(_), Some(_)) => return Err(Error::parse("$", "exactly one of \"workload\" or \"etc\" is allowed")),
        (None, None) => return Err(Error::parse("$", "missing \"workload\" or \"etc\"")),
    };
    Ok(Scenario { name, input })
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::parse(format!("{path}.{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(format!("{path}.{key}"), "missing field"))
}

fn non_negative(v: &Value, path: &str) -> Result<Rational> {
    let r = rational_from_json(v).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(path, message),
        other => other,
    })?;
    if r < Rational::from_integer(0) {
        return Err(Error::NegativeValue {
            location: path.to_string(),
            value: format_exact(&r),
        });
    }
    Ok(r)
}

fn positive(v: &Value, path: &str) -> Result<Rational> {
    let r = non_negative(v, path)?;
    if r == Rational::from_integer(0) {
        return Err(Error::parse(path, "must be positive"));
    }
    Ok(r)
}

fn label(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::parse(path, "expected a string or number id")),
    }
}

fn unique_labels(labels: &[String], path: &str) -> Result<()> {
    let mut seen = HashSet::new();
    match labels.iter().enumerate().find(|(_, l)| !seen.insert(l.as_str())) {
        Some((i, l)) => Err(Error::parse(format!("{path}[{i}]"), format!("duplicate id {l:?}"))),
        None => Ok(()),
    }
}

fn parse_workload(v: &Value) -> Result<ScenarioInput> {
    let path = "$.workload";
    let obj = as_object(v, path)?;
    check_keys(obj, path, &["tasks", "resources", "rounding"])?;

    let task_path = format!("{path}.tasks");
    let raw_tasks = as_array(field(obj, path, "tasks")?, &task_path)?;
    if raw_tasks.is_empty() {
        return Err(Error::parse(task_path, "at least one task is required"));
    }
    let tasks = raw_tasks
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{task_path}[{i}]");
            let o = as_object(t, &p)?;
            check_keys(o, &p, &["id", "mi", "mb"])?;
            Ok(TaskSpec {
                id: TaskId(i),
                name: o.get("id").map(|v| label(v, &format!("{p}.id"))).transpose()?,
                instruction_volume: non_negative(field(o, &p, "mi")?, &format!("{p}.mi"))?,
                data_volume: non_negative(field(o, &p, "mb")?, &format!("{p}.mb"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let res_path = format!("{path}.resources");
    let raw_resources = as_array(field(obj, path, "resources")?, &res_path)?;
    if raw_resources.is_empty() {
        return Err(Error::parse(res_path, "at least one resource is required"));
    }
    let resources = raw_resources
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let p = format!("{res_path}[{j}]");
            let o = as_object(r, &p)?;
            check_keys(o, &p, &["id", "mips", "mbps"])?;
            Ok(ResourceSpec {
                id: ResourceId(j),
                name: o.get("id").map(|v| label(v, &format!("{p}.id"))).transpose()?,
                processing_speed: positive(field(o, &p, "mips")?, &format!("{p}.mips"))?,
                bandwidth: positive(field(o, &p, "mbps")?, &format!("{p}.mbps"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    unique_labels(&tasks.iter().map(TaskSpec::label).collect::<Vec<_>>(), &task_path)?;
    unique_labels(
        &resources.iter().map(ResourceSpec::label).collect::<Vec<_>>(),
        &res_path,
    )?;

    let rounding = match obj.get("rounding") {
        None => RoundingMode::default(),
        Some(Value::String(s)) => s
            .parse()
            .map_err(|_| Error::parse(format!("{path}.rounding"), format!("unknown rounding mode {s:?}")))?,
        Some(_) => return Err(Error::parse(format!("{path}.rounding"), "expected a string")),
    };
    Ok(ScenarioInput::Workload {
        tasks,
        resources,
        rounding,
    })
}

fn parse_matrix(v: &Value) -> Result<ScenarioInput> {
    let path = "$.etc";
    let obj = as_object(v, path)?;
    check_keys(obj, path, &["tasks", "resources", "rows"])?;

    let rows_path = format!("{path}.rows");
    let raw_rows = as_array(field(obj, path, "rows")?, &rows_path)?;
    if raw_rows.is_empty() {
        return Err(Error::parse(rows_path, "at least one row is required"));
    }
    let rows = raw_rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("{rows_path}[{i}]");
            as_array(row, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| non_negative(x, &format!("{p}[{j}]")).and_then(Duration::new))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let width = rows[0].len();
    if width == 0 {
        return Err(Error::parse(
            format!("{rows_path}[0]"),
            "at least one resource is required",
        ));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::parse(
            format!("{rows_path}[{i}]"),
            format!("dimension mismatch: {} entries, expected {width}", rows[i].len()),
        ));
    }

    let labels = |key: &str, count: usize, default: fn(usize) -> String| -> Result<Vec<String>> {
        let p = format!("{path}.{key}");
        let Some(raw) = obj.get(key) else {
            return Ok((0..count).map(default).collect());
        };
        let list = as_array(raw, &p)?
            .iter()
            .enumerate()
            .map(|(k, x)| label(x, &format!("{p}[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        if list.len() != count {
            return Err(Error::parse(
                p,
                format!("dimension mismatch: {} labels for {count} entries", list.len()),
            ));
        }
        unique_labels(&list, &format!("{path}.{key}"))?;
        Ok(list)
    };
    let tasks = labels("tasks", rows.len(), |i| TaskId(i).to_string())?;
    let resources = labels("resources", width, |j| ResourceId(j).to_string())?;

    Ok(ScenarioInput::Matrix {
        tasks,
        resources,
        etc: EtcMatrix::from_rows(rows)?,
    })
}

/// Inclusive integer ranges sampled by [`generate_workload`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkloadRanges {
    pub mi: (u64, u64),
    pub mb: (u64, u64),
    pub mips: (u64, u64),
    pub mbps: (u64, u64),
}

impl Default for WorkloadRanges {
    fn default() -> Self {
        WorkloadRanges {
            mi: (10, 1000),
            mb: (10, 600),
            mips: (50, 300),
            mbps: (5, 300),
        }
    }
}

impl WorkloadRanges {
    fn validate(&self) -> Result<()> {
        for (field, (lo, hi)) in [
            ("mi", self.mi),
            ("mb", self.mb),
            ("mips", self.mips),
            ("mbps", self.mbps),
        ] {
            if lo > hi {
                return Err(Error::EmptyRange {
                    field: field.into(),
                    lo,
                    hi,
                });
            }
        }
        for (field, (lo, _)) in [("mips", self.mips), ("mbps", self.mbps)] {
            if lo == 0 {
                return Err(Error::InvalidRange {
                    field: field.into(),
                    reason: "lower bound must be positive".into(),
                });
            }
        }
        Ok(())
    }
}

/// Deterministic pseudo-random workload scenario; equal seeds give equal scenarios.
pub fn generate_workload(seed: u64, tasks: usize, resources: usize, ranges: WorkloadRanges) -> Result<Scenario> {
    if tasks == 0 || resources == 0 {
        return Err(Error::InvalidRange {
            field: if tasks == 0 { "tasks" } else { "resources" }.into(),
            reason: "count must be at least 1".into(),
        });
    }
    ranges.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |(lo, hi): (u64, u64)| Rational::from_integer(rng.gen_range(lo..=hi) as i128);

    let task_specs = (0..tasks)
        .map(|i| TaskSpec {
            id: TaskId(i),
            name: Some(TaskId(i).to_string()),
            instruction_volume: draw(ranges.mi),
            data_volume: draw(ranges.mb),
        })
        .collect();
    let resource_specs = (0..resources)
        .map(|j| ResourceSpec {
            id: ResourceId(j),
            name: Some(ResourceId(j).to_string()),
            processing_speed: draw(ranges.mips),
            bandwidth: draw(ranges.mbps),
        })
        .collect();
    Ok(Scenario {
        name: format!("gen-{seed}-{tasks}x{resources}"),
        input: ScenarioInput::Workload {
            tasks: task_specs,
            resources: resource_specs,
            rounding: RoundingMode::Exact,
        },
    })
}
