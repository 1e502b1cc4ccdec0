//! Cross-policy comparison reports in text, CSV and JSON.

use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, ScheduleMetrics};
use crate::model::{EtcMatrix, Schedule};
use crate::oracle::optimal_makespan;
use crate::policy::{DivertVariant, PolicyId};
use crate::scenario::Labels;
use crate::time::{format_approx, rational_to_json_approx, Duration, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::parse("format", format!("unknown report format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyReport {
    pub policy: PolicyId,
    /// `None` for policies the divert variant does not affect.
    pub variant: Option<DivertVariant>,
    pub schedule: Schedule,
    pub metrics: ScheduleMetrics,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub optimal_makespan: Duration,
    pub explored: u64,
    pub schedule: Schedule,
    pub metrics: ScheduleMetrics,
}

/// Every requested policy evaluated on one ETC matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub scenario: String,
    pub labels: Labels,
    pub results: Vec<PolicyReport>,
    pub oracle: Option<OracleReport>,
}

impl ComparisonReport {
    /// Runs `policies` on `etc`; `oracle_limit` adds the exhaustive optimum.
    pub fn evaluate(
        scenario: impl Into<String>,
        labels: Labels,
        etc: &EtcMatrix,
        policies: &[PolicyId],
        variant: DivertVariant,
        oracle_limit: Option<u64>,
    ) -> Result<Self> {
        let resources = etc.resources();
        let results = policies
            .iter()
            .map(|&policy| {
                let schedule = policy.schedule(etc, variant);
                let metrics = compute_metrics(&schedule, resources);
                PolicyReport {
                    policy,
                    variant: policy.uses_variant().then_some(variant),
                    schedule,
                    metrics,
                }
            })
            .collect();
        let oracle = oracle_limit
            .map(|limit| -> Result<OracleReport> {
                let found = optimal_makespan(etc, limit)?;
                let schedule = found.witness_schedule(etc)?;
                let metrics = compute_metrics(&schedule, resources);
                Ok(OracleReport {
                    optimal_makespan: found.optimal_makespan,
                    explored: found.explored,
                    schedule,
                    metrics,
                })
            })
            .transpose()?;
        Ok(ComparisonReport {
            scenario: scenario.into(),
            labels,
            results,
            oracle,
        })
    }

    pub fn makespan_of(&self, policy: PolicyId) -> Option<Duration> {
        self.results
            .iter()
            .find(|r| r.policy == policy)
            .map(|r| r.metrics.makespan)
    }
}

pub fn emit_report(report: &ComparisonReport, format: ReportFormat) -> String {
    emit_reports(std::slice::from_ref(report), format)
}

pub fn emit_reports(reports: &[ComparisonReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => text(reports),
        ReportFormat::Csv => csv(reports),
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(&json_value(reports)).expect("report serializes");
            out.push('\n');
            out
        }
    }
}

fn num(d: &Duration) -> String {
    d.to_display_string()
}

fn ratio(r: &Rational) -> String {
    format_approx(r, 6)
}

fn assignment_list(schedule: &Schedule, labels: &Labels) -> String {
    schedule
        .assignments
        .iter()
        .map(|a| {
            format!(
                "{}:{}:{}:{}",
                labels.task(a.task),
                labels.resource(a.resource),
                num(&a.start),
                num(&a.finish)
            )
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn load_list(metrics: &ScheduleMetrics) -> String {
    metrics.loads.iter().map(num).collect::<Vec<_>>().join(";")
}

fn variant_name(v: Option<DivertVariant>) -> &'static str {
    v.map_or("-", DivertVariant::name)
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let mut s = padded.join("  ").trim_end().to_string();
        s.push('\n');
        s
    };
    let mut out = line(header);
    for row in rows {
        out.push_str(&line(row));
    }
    out
}

fn text(reports: &[ComparisonReport]) -> String {
    let mut policies: Vec<PolicyId> = Vec::new();
    for r in reports.iter().flat_map(|r| &r.results) {
        if !policies.contains(&r.policy) {
            policies.push(r.policy);
        }
    }
    let with_oracle = reports.iter().any(|r| r.oracle.is_some());

    let mut header = vec!["scenario".to_string()];
    header.extend(policies.iter().map(|p| p.title().to_string()));
    if with_oracle {
        header.push("Optimal".to_string());
    }
    let grid: Vec<Vec<String>> = reports
        .iter()
        .filter(|r| !r.results.is_empty() || r.oracle.is_some())
        .map(|r| {
            let mut row = vec![r.scenario.clone()];
            row.extend(
                policies
                    .iter()
                    .map(|&p| r.makespan_of(p).map_or("-".to_string(), |m| num(&m))),
            );
            if with_oracle {
                row.push(r.oracle.as_ref().map_or("-".to_string(), |o| num(&o.optimal_makespan)));
            }
            row
        })
        .collect();

    let detail_header: Vec<String> = ["scenario", "policy", "variant", "makespan", "imbalance", "loads"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut details = Vec::new();
    for r in reports {
        for p in &r.results {
            details.push(vec![
                r.scenario.clone(),
                p.policy.title().to_string(),
                variant_name(p.variant).to_string(),
                num(&p.metrics.makespan),
                ratio(&p.metrics.imbalance),
                p.metrics.loads.iter().map(num).collect::<Vec<_>>().join(" "),
            ]);
        }
        if let Some(o) = &r.oracle {
            details.push(vec![
                r.scenario.clone(),
                "Optimal".to_string(),
                "-".to_string(),
                num(&o.optimal_makespan),
                ratio(&o.metrics.imbalance),
                o.metrics.loads.iter().map(num).collect::<Vec<_>>().join(" "),
            ]);
        }
    }

    let mut out = String::from("Makespan\n");
    out.push_str(&table(&header, &grid));
    out.push_str("\nDetails\n");
    out.push_str(&table(&detail_header, &details));
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(reports: &[ComparisonReport]) -> String {
    let mut out = String::from("scenario,policy,variant,makespan,imbalance,loads,assignments\n");
    let mut push = |fields: [String; 7]| {
        let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    };
    for r in reports {
        for p in &r.results {
            push([
                r.scenario.clone(),
                p.policy.name().to_string(),
                variant_name(p.variant).to_string(),
                num(&p.metrics.makespan),
                ratio(&p.metrics.imbalance),
                load_list(&p.metrics),
                assignment_list(&p.schedule, &r.labels),
            ]);
        }
        if let Some(o) = &r.oracle {
            push([
                r.scenario.clone(),
                "oracle".to_string(),
                "-".to_string(),
                num(&o.optimal_makespan),
                ratio(&o.metrics.imbalance),
                load_list(&o.metrics),
                assignment_list(&o.schedule, &r.labels),
            ]);
        }
    }
    out
}

fn duration_json(d: &Duration) -> Value {
    rational_to_json_approx(&d.value())
}

fn schedule_json(schedule: &Schedule, labels: &Labels) -> Value {
    Value::Array(
        schedule
            .assignments
            .iter()
            .map(|a| {
                json!({
                    "task": labels.task(a.task),
                    "resource": labels.resource(a.resource),
                    "start": duration_json(&a.start),
                    "finish": duration_json(&a.finish),
                })
            })
            .collect(),
    )
}

fn metrics_json(m: &ScheduleMetrics, labels: &Labels) -> Value {
    json!({
        "makespan": duration_json(&m.makespan),
        "imbalance": rational_to_json_approx(&m.imbalance),
        "loads": m.loads.iter().map(duration_json).collect::<Vec<_>>(),
        "utilization": m.utilization.iter().map(rational_to_json_approx).collect::<Vec<_>>(),
        "waiting": m.waiting.iter().enumerate()
            .map(|(i, w)| json!({"task": labels.task(crate::model::TaskId(i)), "start": duration_json(w)}))
            .collect::<Vec<_>>(),
    })
}

fn json_value(reports: &[ComparisonReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                let policies: Vec<Value> = r
                    .results
                    .iter()
                    .map(|p| {
                        json!({
                            "policy": p.policy.name(),
                            "variant": p.variant.map(DivertVariant::name),
                            "metrics": metrics_json(&p.metrics, &r.labels),
                            "assignments": schedule_json(&p.schedule, &r.labels),
                        })
                    })
                    .collect();
                let oracle = r.oracle.as_ref().map(|o| {
                    json!({
                        "optimal_makespan": duration_json(&o.optimal_makespan),
                        "explored": o.explored,
                        "metrics": metrics_json(&o.metrics, &r.labels),
                        "assignments": schedule_json(&o.schedule, &r.labels),
                    })
                });
                json!({
                    "scenario": r.scenario,
                    "tasks": r.labels.tasks,
                    "resources": r.labels.resources,
                    "policies": policies,
                    "oracle": oracle,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn report(text: &str, oracle: bool) -> ComparisonReport {
        let s = fixtures::load(text);
        ComparisonReport::evaluate(
            s.name.clone(),
            s.labels(),
            &s.etc().unwrap(),
            &PolicyId::ALL,
            DivertVariant::PaperConsistent,
            oracle.then_some(crate::oracle::DEFAULT_LIMIT),
        )
        .unwrap()
    }

    fn grid_row(text: &str, scenario: &str) -> Vec<String> {
        text.lines()
            .skip(2)
            .find(|l| l.starts_with(scenario))
            .unwrap()
            .split_whitespace()
            .skip(1)
            .map(str::to_string)
            .collect()
    }

    #[test]
    fn text_rows_follow_policy_order() {
        let out = emit_reports(
            &[
                report(fixtures::P1, false),
                report(fixtures::P2, false),
                report(fixtures::P3, false),
            ],
            ReportFormat::Text,
        );
        assert!(out
            .lines()
            .nth(1)
            .unwrap()
            .contains("Min-Min  Max-Min  Improved Max-Min  RAMM"));
        assert_eq!(grid_row(&out, "P1"), ["9", "9", "8", "7"]);
        assert_eq!(grid_row(&out, "P2"), ["11", "11", "13", "10"]);
        assert_eq!(grid_row(&out, "P3"), ["4", "4", "14", "4"]);
    }

    #[test]
    fn oracle_column() {
        let out = emit_report(&report(fixtures::P1, true), ReportFormat::Text);
        assert!(out.lines().nth(1).unwrap().ends_with("Optimal"));
        assert_eq!(grid_row(&out, "P1"), ["9", "9", "8", "7", "7"]);
    }

    #[test]
    fn empty_policy_set_is_header_only() {
        let s = fixtures::load(fixtures::P1);
        let r = ComparisonReport::evaluate("P1", s.labels(), &s.etc().unwrap(), &[], DivertVariant::default(), None)
            .unwrap();
        assert_eq!(
            emit_report(&r, ReportFormat::Text),
            "Makespan\nscenario\n\nDetails\nscenario  policy  variant  makespan  imbalance  loads\n"
        );
        assert_eq!(
            emit_report(&r, ReportFormat::Csv),
            "scenario,policy,variant,makespan,imbalance,loads,assignments\n"
        );
    }

    #[test]
    fn csv_rows() {
        let out = emit_report(&report(fixtures::P1, true), ReportFormat::Csv);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(
            lines[4],
            "P1,ramm,paper-consistent,7,0.142857,7;6,T2:R1:0:1;T1:R2:0:6;T3:R1:1:4;T4:R1:4:7"
        );
        assert!(lines[1].starts_with("P1,min-min,-,9,1,9;0,"));
        assert!(lines[5].starts_with("P1,oracle,-,7,"));
    }

    #[test]
    fn csv_quotes_awkward_labels() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn json_values_match_metrics() {
        let r = report(fixtures::P2, false);
        let v: Value = serde_json::from_str(&emit_report(&r, ReportFormat::Json)).unwrap();
        let ramm = &v[0]["policies"][3];
        assert_eq!(ramm["policy"], "ramm");
        assert_eq!(ramm["metrics"]["makespan"].to_string(), "10");
        assert_eq!(ramm["assignments"].as_array().unwrap().len(), 4);
        assert!(v[0]["oracle"].is_null());
        assert!(v[0]["policies"][0]["variant"].is_null());
    }
}
