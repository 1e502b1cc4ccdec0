//! Text and SVG Gantt charts.

use std::fmt::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{ResourceId, Schedule};
use crate::scenario::Labels;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GanttStyle {
    #[default]
    Ascii,
    Svg,
}

impl FromStr for GanttStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(GanttStyle::Ascii),
            "svg" => Ok(GanttStyle::Svg),
            _ => Err(Error::parse("gantt style", format!("unknown style {s:?}"))),
        }
    }
}

pub fn render_gantt(schedule: &Schedule, labels: &Labels, style: GanttStyle) -> String {
    match style {
        GanttStyle::Ascii => render_ascii(schedule, labels),
        GanttStyle::Svg => render_svg(schedule, labels),
    }
}

fn resource_count(schedule: &Schedule, labels: &Labels) -> usize {
    let used = schedule.assignments.iter().map(|a| a.resource.0 + 1).max().unwrap_or(0);
    labels.resources.len().max(used)
}

/// One line per resource: `R1 | T2[0-1] T3[1-4] T4[4-7]`.
fn render_ascii(schedule: &Schedule, labels: &Labels) -> String {
    let rows = resource_count(schedule, labels);
    let names: Vec<String> = (0..rows).map(|j| labels.resource(ResourceId(j))).collect();
    let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (j, name) in names.iter().enumerate() {
        let mut line = format!("{name:<width$} |");
        for a in schedule.on_resource(ResourceId(j)) {
            let _ = write!(
                line,
                " {}[{}-{}]",
                labels.task(a.task),
                a.start.to_display_string(),
                a.finish.to_display_string()
            );
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

const LABEL_WIDTH: f64 = 80.0;
const CHART_WIDTH: f64 = 640.0;
const ROW_HEIGHT: f64 = 32.0;
const MARGIN: f64 = 10.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One rectangle per assignment, x scaled so the makespan spans the chart.
fn render_svg(schedule: &Schedule, labels: &Labels) -> String {
    let rows = resource_count(schedule, labels);
    let span = schedule.makespan.to_f64();
    let scale = if span > 0.0 { CHART_WIDTH / span } else { 0.0 };
    let width = LABEL_WIDTH + CHART_WIDTH + 2.0 * MARGIN;
    let height = rows as f64 * ROW_HEIGHT + 2.0 * MARGIN + 20.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="monospace" font-size="12">"#
    );
    for j in 0..rows {
        let y = MARGIN + j as f64 * ROW_HEIGHT;
        let _ = writeln!(
            out,
            r#"  <text x="{MARGIN:.0}" y="{:.2}" dominant-baseline="middle">{}</text>"#,
            y + ROW_HEIGHT / 2.0,
            escape(&labels.resource(ResourceId(j)))
        );
        for a in schedule.on_resource(ResourceId(j)) {
            let x = MARGIN + LABEL_WIDTH + a.start.to_f64() * scale;
            let w = (a.finish.to_f64() - a.start.to_f64()) * scale;
            let task = escape(&labels.task(a.task));
            let _ = writeln!(
                out,
                r##"  <rect x="{x:.2}" y="{:.2}" width="{w:.2}" height="{:.2}" fill="#9ecae1" stroke="#08519c"><title>{task} [{}, {})</title></rect>"##,
                y + 4.0,
                ROW_HEIGHT - 8.0,
                a.start.to_display_string(),
                a.finish.to_display_string()
            );
            let _ = writeln!(
                out,
                r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle" dominant-baseline="middle">{task}</text>"#,
                x + w / 2.0,
                y + ROW_HEIGHT / 2.0
            );
        }
    }
    let axis_y = MARGIN + rows as f64 * ROW_HEIGHT + 14.0;
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{axis_y:.2}">0</text>"#,
        MARGIN + LABEL_WIDTH
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{axis_y:.2}" text-anchor="end">{}</text>"#,
        MARGIN + LABEL_WIDTH + CHART_WIDTH,
        schedule.makespan.to_display_string()
    );
    out.push_str("</svg>\n");
    out
}
