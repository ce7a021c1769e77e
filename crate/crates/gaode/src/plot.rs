//! Dependency-free SVG emission: line plots (optionally log-scaled) and
//! grid heatmaps. CSV twins of every plot are always written, so these only
//! need to be readable, not configurable.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// One labeled polyline.
#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy)]
struct Axis {
    min: f64,
    max: f64,
    log: bool,
}

impl Axis {
    fn from_values(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            if log && v <= 0.0 {
                continue;
            }
            min = min.min(v);
            max = max.max(v);
        }
        if !min.is_finite() || !max.is_finite() {
            min = if log { 1.0 } else { 0.0 };
            max = if log { 10.0 } else { 1.0 };
        }
        if min == max {
            if log {
                max *= 10.0;
            } else {
                max += 1.0;
            }
        }
        Axis { min, max, log }
    }

    fn fraction(&self, v: f64) -> f64 {
        if self.log {
            (v.ln() - self.min.ln()) / (self.max.ln() - self.min.ln())
        } else {
            (v - self.min) / (self.max - self.min)
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().floor() as i32;
            let hi = self.max.log10().ceil() as i32;
            let step = (((hi - lo) as usize / 8) + 1) as i32;
            (lo..=hi)
                .step_by(step as usize)
                .map(|e| 10f64.powi(e))
                .filter(|&v| v >= self.min * 0.999 && v <= self.max * 1.001)
                .collect()
        } else {
            (0..=5)
                .map(|k| self.min + (self.max - self.min) * k as f64 / 5.0)
                .collect()
        }
    }
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.0e}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render labeled series into one plot. Points that cannot be shown on a
/// log axis (nonpositive values) are dropped from that series.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    x_log: bool,
    y_log: bool,
) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let x_axis = Axis::from_values(xs, x_log);
    let y_axis = Axis::from_values(ys, y_log);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |v: f64| MARGIN_LEFT + x_axis.fraction(v).clamp(0.0, 1.0) * plot_w;
    let py = |v: f64| MARGIN_TOP + (1.0 - y_axis.fraction(v).clamp(0.0, 1.0)) * plot_h;

    let mut svg = svg_header(title);
    draw_axes(&mut svg, &x_axis, &y_axis, x_label, y_label, px, py);

    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .copied()
            .filter(|&(x, y)| (!x_log || x > 0.0) && (!y_log || y > 0.0))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let path: String = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{path}"/>"#
        )
        .unwrap();
        for &(x, y) in &pts {
            writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.4" fill="{color}"/>"#,
                px(x),
                py(y)
            )
            .unwrap();
        }
        // Legend entry.
        let ly = MARGIN_TOP + 14.0 * idx as f64 + 4.0;
        writeln!(
            svg,
            r#"<rect x="{:.1}" y="{:.1}" width="10" height="3" fill="{color}"/>"#,
            WIDTH - MARGIN_RIGHT - 120.0,
            ly
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
            WIDTH - MARGIN_RIGHT - 105.0,
            ly + 4.0,
            escape(&s.label)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

/// Render a bin-count grid: CR bins on the x-axis, F bins on the y-axis
/// (lowest bin at the bottom), darker cells for higher counts.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, counts: &[Vec<u64>]) -> String {
    let bins_y = counts.len();
    let bins_x = counts.first().map_or(0, Vec::len);
    let max = counts.iter().flatten().copied().max().unwrap_or(0).max(1);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let cell_w = plot_w / bins_x as f64;
    let cell_h = plot_h / bins_y as f64;

    let mut svg = svg_header(title);
    for (fy, row) in counts.iter().enumerate() {
        for (cx, &count) in row.iter().enumerate() {
            let shade = 255.0 - 255.0 * (count as f64 / max as f64);
            let x = MARGIN_LEFT + cx as f64 * cell_w;
            let y = MARGIN_TOP + plot_h - (fy + 1) as f64 * cell_h;
            writeln!(
                svg,
                r##"<rect x="{x:.2}" y="{y:.2}" width="{cell_w:.2}" height="{cell_h:.2}" fill="rgb({s},{s},{s})" stroke="#ccc" stroke-width="0.3"/>"##,
                s = shade.round() as u8
            )
            .unwrap();
        }
    }
    // Edge labels 0 and 1 on both axes plus names.
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="11">0</text>"#,
        MARGIN_LEFT - 4.0,
        MARGIN_TOP + plot_h + 14.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="11">1</text>"#,
        MARGIN_LEFT + plot_w - 4.0,
        MARGIN_TOP + plot_h + 14.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">0</text>"#,
        MARGIN_LEFT - 8.0,
        MARGIN_TOP + plot_h
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">1</text>"#,
        MARGIN_LEFT - 8.0,
        MARGIN_TOP + 10.0
    )
    .unwrap();
    axis_labels(&mut svg, x_label, y_label);
    svg.push_str("</svg>\n");
    svg
}

fn svg_header(title: &str) -> String {
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{:.1}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    svg
}

fn draw_axes(
    svg: &mut String,
    x_axis: &Axis,
    y_axis: &Axis,
    x_label: &str,
    y_label: &str,
    px: impl Fn(f64) -> f64,
    py: impl Fn(f64) -> f64,
) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = MARGIN_TOP;
    let y1 = HEIGHT - MARGIN_BOTTOM;
    writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    )
    .unwrap();
    for t in x_axis.ticks() {
        let x = px(t);
        writeln!(svg, r#"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y1 + 4.0).unwrap();
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            y1 + 16.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    for t in y_axis.ticks() {
        let y = py(t);
        writeln!(svg, r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 4.0).unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            y + 3.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    axis_labels(svg, x_label, y_label);
}

fn axis_labels(svg: &mut String, x_label: &str, y_label: &str) {
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="16" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        MARGIN_TOP + (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM) / 2.0,
        MARGIN_TOP + (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM) / 2.0,
        escape(y_label)
    )
    .unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_well_formed() {
        let series = vec![
            Series {
                label: "a".into(),
                points: vec![(1.0, 10.0), (10.0, 100.0), (100.0, 1000.0)],
            },
            Series {
                label: "b".into(),
                points: vec![(1.0, 5.0), (100.0, 50.0)],
            },
        ];
        let svg = line_plot("title", "x", "y", &series, true, true);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">a</text>"));
    }

    #[test]
    fn log_axis_drops_nonpositive_points() {
        let series = vec![Series {
            label: "a".into(),
            points: vec![(0.0, 1.0), (10.0, 2.0)],
        }];
        let svg = line_plot("t", "x", "y", &series, true, false);
        // The polyline survives with the remaining point.
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn heatmap_renders_every_cell() {
        let counts = vec![vec![0u64, 5], vec![3, 10]];
        let svg = heatmap("h", "CR", "F", &counts);
        assert_eq!(svg.matches("<rect").count(), 5); // 4 cells + background
        assert!(svg.contains("rgb(0,0,0)")); // the max cell is black
    }

    #[test]
    fn deterministic_output() {
        let series = vec![Series {
            label: "s".into(),
            points: vec![(1.0, 2.0), (3.0, 4.0)],
        }];
        let a = line_plot("t", "x", "y", &series, false, false);
        let b = line_plot("t", "x", "y", &series, false, false);
        assert_eq!(a, b);
    }
}
