//! Deterministic SVG scatter plots of comparison rows: three log-log
//! panels covering every pair of objectives. Pareto members are filled
//! red circles, dominated points blue triangles; every marker carries
//! its algorithm name.

use crate::report::CsvRow;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlotError {
    #[error("nothing to plot")]
    NoRows,
    #[error("algorithm `{algorithm}`: {objective} = {value} cannot go on a log axis")]
    NonPositive { algorithm: String, objective: &'static str, value: f64 },
}

const PLOT_SIDE: f64 = 320.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 48.0;
const PANEL_W: f64 = MARGIN_LEFT + PLOT_SIDE + MARGIN_RIGHT;
const PANEL_H: f64 = MARGIN_TOP + PLOT_SIDE + MARGIN_BOTTOM;

struct Axis {
    low: i32,
    high: i32,
}

impl Axis {
    /// Whole-decade bounds around the data, at least one decade wide.
    fn around(values: impl Iterator<Item = f64>) -> Axis {
        let mut low = i32::MAX;
        let mut high = i32::MIN;
        for value in values {
            let log = value.log10();
            low = low.min(log.floor() as i32);
            high = high.max(log.ceil() as i32);
        }
        if low >= high {
            high = low + 1;
        }
        Axis { low, high }
    }

    fn place(&self, value: f64) -> f64 {
        (value.log10() - f64::from(self.low)) / f64::from(self.high - self.low) * PLOT_SIDE
    }

    /// Label every tick when they fit, else a uniform stride.
    fn label_stride(&self) -> i32 {
        ((self.high - self.low) / 7).max(1)
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Render the three-panel scatter. Output bytes depend only on the
/// input rows.
pub fn render_scatter_svg(rows: &[CsvRow]) -> Result<String, PlotError> {
    if rows.is_empty() {
        return Err(PlotError::NoRows);
    }
    for row in rows {
        for (objective, value) in
            [("depth", row.depth), ("runtime", row.runtime), ("qubits", row.qubits)]
        {
            if !(value.is_finite() && value > 0.0) {
                return Err(PlotError::NonPositive {
                    algorithm: row.algorithm.clone(),
                    objective,
                    value,
                });
            }
        }
    }

    type Objective = fn(&CsvRow) -> f64;
    let panels: [(&str, Objective, &str, Objective); 3] = [
        ("depth", |r| r.depth, "runtime", |r| r.runtime),
        ("depth", |r| r.depth, "qubits", |r| r.qubits),
        ("runtime", |r| r.runtime, "qubits", |r| r.qubits),
    ];

    let width = PANEL_W * 3.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{PANEL_H:.0}\" \
         viewBox=\"0 0 {width:.0} {PANEL_H:.0}\" font-family=\"Helvetica,Arial,sans-serif\">"
    );
    svg.push_str(concat!(
        "<style>\n",
        ".marker-pareto{fill:#d62728;}\n",
        ".marker-dominated{fill:#1f77b4;}\n",
        ".frame{fill:none;stroke:#444;stroke-width:1;}\n",
        ".grid{stroke:#dddddd;stroke-width:1;}\n",
        ".tick{font-size:9px;fill:#444;}\n",
        ".axis-name{font-size:11px;fill:#222;}\n",
        ".title{font-size:12px;fill:#111;}\n",
        ".label{font-size:9px;fill:#222;}\n",
        "</style>\n",
        "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n",
    ));

    for (index, (x_name, x_of, y_name, y_of)) in panels.into_iter().enumerate() {
        let origin = PANEL_W * index as f64;
        let _ = writeln!(svg, "<g transform=\"translate({origin:.2},0)\">");
        let x_axis = Axis::around(rows.iter().map(x_of));
        let y_axis = Axis::around(rows.iter().map(y_of));
        let _ = writeln!(
            svg,
            "<text class=\"title\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{} vs {}</text>",
            MARGIN_LEFT + PLOT_SIDE / 2.0,
            MARGIN_TOP - 16.0,
            escape(x_name),
            escape(y_name),
        );

        // Decade grid with labels every `stride` ticks.
        let x_stride = x_axis.label_stride();
        for exponent in x_axis.low..=x_axis.high {
            let x = MARGIN_LEFT + x_axis.place(10f64.powi(exponent));
            let _ = writeln!(
                svg,
                "<line class=\"grid\" x1=\"{x:.2}\" y1=\"{MARGIN_TOP:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>",
                MARGIN_TOP + PLOT_SIDE
            );
            if (exponent - x_axis.low) % x_stride == 0 {
                let _ = writeln!(
                    svg,
                    "<text class=\"tick\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">1e{exponent}</text>",
                    MARGIN_TOP + PLOT_SIDE + 14.0
                );
            }
        }
        let y_stride = y_axis.label_stride();
        for exponent in y_axis.low..=y_axis.high {
            let y = MARGIN_TOP + PLOT_SIDE - y_axis.place(10f64.powi(exponent));
            let _ = writeln!(
                svg,
                "<line class=\"grid\" x1=\"{MARGIN_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\"/>",
                MARGIN_LEFT + PLOT_SIDE
            );
            if (exponent - y_axis.low) % y_stride == 0 {
                let _ = writeln!(
                    svg,
                    "<text class=\"tick\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">1e{exponent}</text>",
                    MARGIN_LEFT - 6.0,
                    y + 3.0
                );
            }
        }
        let _ = writeln!(
            svg,
            "<rect class=\"frame\" x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{PLOT_SIDE:.2}\" height=\"{PLOT_SIDE:.2}\"/>"
        );
        let _ = writeln!(
            svg,
            "<text class=\"axis-name\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            MARGIN_LEFT + PLOT_SIDE / 2.0,
            MARGIN_TOP + PLOT_SIDE + 34.0,
            escape(x_name),
        );
        let _ = writeln!(
            svg,
            "<text class=\"axis-name\" x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
            MARGIN_TOP + PLOT_SIDE / 2.0,
            MARGIN_TOP + PLOT_SIDE / 2.0,
            escape(y_name),
        );

        // Markers, then labels on top of everything.
        for row in rows {
            let x = MARGIN_LEFT + x_axis.place(x_of(row));
            let y = MARGIN_TOP + PLOT_SIDE - y_axis.place(y_of(row));
            if row.pareto {
                let _ = writeln!(
                    svg,
                    "<circle class=\"marker marker-pareto\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\"/>"
                );
            } else {
                let _ = writeln!(
                    svg,
                    "<path class=\"marker marker-dominated\" d=\"M {x:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} Z\"/>",
                    y - 4.8,
                    x + 4.2,
                    y + 2.6,
                    x - 4.2,
                    y + 2.6,
                );
            }
        }
        for row in rows {
            let x = MARGIN_LEFT + x_axis.place(x_of(row));
            let y = MARGIN_TOP + PLOT_SIDE - y_axis.place(y_of(row));
            let _ = writeln!(
                svg,
                "<text class=\"label\" x=\"{:.2}\" y=\"{:.2}\">{}</text>",
                x + 6.0,
                y + 3.0,
                escape(&row.algorithm),
            );
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
