//! Gantt rows plus CSV and SVG renderings.
//!
//! A row's wait block is drawn right after its processing block: successors
//! may only start once both have elapsed.

use std::fmt::Write as _;

use crate::instance::ProjectInstance;
use crate::scalar::Scalar;
use crate::schedule::{check_feasibility, ScheduleError, ScheduleSolution};

#[derive(Debug, Clone, PartialEq)]
pub struct GanttRow<T> {
    pub activity: usize,
    pub start: T,
    pub duration: u32,
    pub wait: T,
    /// `(resource, skill)` pairs, zero-based.
    pub assignments: Vec<(usize, usize)>,
}

impl<T: Scalar> GanttRow<T> {
    pub fn finish(&self) -> T {
        self.start + T::from_count(self.duration as usize)
    }

    /// End of the wait block, the earliest time successors may start.
    pub fn release(&self) -> T {
        self.finish() + self.wait
    }
}

/// One row per executable activity of a feasible solution, sorted by start
/// time and then activity id.
pub fn to_gantt<T: Scalar>(
    instance: &ProjectInstance<T>,
    solution: &ScheduleSolution<T>,
) -> Result<Vec<GanttRow<T>>, ScheduleError> {
    let violations = check_feasibility(instance, solution)?;
    if !violations.is_empty() {
        return Err(ScheduleError::Infeasible(violations));
    }
    let mut rows: Vec<GanttRow<T>> = instance
        .executable()
        .map(|i| GanttRow {
            activity: i,
            start: solution.starts[i],
            duration: instance.duration(i),
            wait: solution.activity_waits[i],
            assignments: solution.assigned_to(i),
        })
        .collect();
    rows.sort_by(|a, b| a.start.partial_cmp(&b.start).expect("finite starts").then(a.activity.cmp(&b.activity)));
    Ok(rows)
}

fn resource_label(assignments: &[(usize, usize)]) -> String {
    assignments.iter().map(|(k, l)| format!("R{}/S{}", k + 1, l + 1)).collect::<Vec<_>>().join(";")
}

/// `activity,start,wait,duration,resources` with one-based ids.
pub fn gantt_csv<T: Scalar>(rows: &[GanttRow<T>]) -> String {
    let mut out = String::from("activity,start,wait,duration,resources\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.activity + 1,
            row.start.to_real(),
            row.wait.to_real(),
            row.duration,
            resource_label(&row.assignments)
        );
    }
    out
}

const ROW_HEIGHT: f64 = 26.0;
const LABEL_WIDTH: f64 = 60.0;
const CHART_WIDTH: f64 = 800.0;
const PROCESS_FILL: &str = "#4a7ebb";
const WAIT_FILL: &str = "#f2d16b";

/// Standalone SVG document with one lane per row.
pub fn gantt_svg<T: Scalar>(rows: &[GanttRow<T>], title: &str) -> String {
    let horizon = rows.iter().map(|r| r.release().to_real()).fold(0.0f64, f64::max).max(1.0);
    let scale = CHART_WIDTH / horizon;
    let top = 40.0;
    let height = top + ROW_HEIGHT * rows.len() as f64 + 40.0;
    let width = LABEL_WIDTH + CHART_WIDTH + 20.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<text x="{LABEL_WIDTH}" y="20" font-size="14">{}</text>"#, escape(title));

    let step = tick_step(horizon);
    let mut t = 0.0;
    while t <= horizon + 1e-9 {
        let x = LABEL_WIDTH + t * scale;
        let bottom = top + ROW_HEIGHT * rows.len() as f64;
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{top:.2}" x2="{x:.2}" y2="{bottom:.2}" stroke="#dddddd"/>"##);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#, bottom + 14.0);
        t += step;
    }

    for (idx, row) in rows.iter().enumerate() {
        let y = top + ROW_HEIGHT * idx as f64;
        let start = row.start.to_real();
        let duration = f64::from(row.duration);
        let wait = row.wait.to_real();
        let _ = writeln!(svg, r#"<text x="4" y="{:.2}">A{}</text>"#, y + 16.0, row.activity + 1);
        let _ = writeln!(
            svg,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{PROCESS_FILL}" stroke="#223355"/>"##,
            LABEL_WIDTH + start * scale,
            y + 3.0,
            duration * scale,
            ROW_HEIGHT - 6.0
        );
        if wait > 0.0 {
            let _ = writeln!(
                svg,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{WAIT_FILL}" stroke="#8a6d00"/>"##,
                LABEL_WIDTH + (start + duration) * scale,
                y + 3.0,
                wait * scale,
                ROW_HEIGHT - 6.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" fill="white">{}</text>"#,
            LABEL_WIDTH + start * scale + 3.0,
            y + 16.0,
            escape(&resource_label(&row.assignments))
        );
    }

    let legend_y = height - 12.0;
    let _ = writeln!(
        svg,
        r#"<rect x="{LABEL_WIDTH}" y="{:.2}" width="12" height="10" fill="{PROCESS_FILL}"/><text x="{:.2}" y="{legend_y:.2}">processing</text>"#,
        legend_y - 9.0,
        LABEL_WIDTH + 16.0
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{:.2}" y="{:.2}" width="12" height="10" fill="{WAIT_FILL}"/><text x="{:.2}" y="{legend_y:.2}">queue wait</text>"#,
        LABEL_WIDTH + 100.0,
        legend_y - 9.0,
        LABEL_WIDTH + 116.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn tick_step(horizon: f64) -> f64 {
    [1.0, 2.0, 5.0, 10.0, 20.0, 25.0, 50.0, 100.0, 250.0, 500.0, 1000.0]
        .into_iter()
        .find(|s| horizon / s <= 20.0)
        .unwrap_or(horizon / 10.0)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
