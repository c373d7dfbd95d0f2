//! Standalone SVG charts.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-300 {
        let pad = lo.abs().max(1.0) * 0.5;
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

/// Line chart; `log_x` plots against `log10 x`.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>], log_x: bool) -> String {
    let tx = |x: f64| if log_x { x.log10() } else { x };
    let (x0, x1) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| tx(p.0))));
    let (y0, y1) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let px = |x: f64| MARGIN + (tx(x) - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = header(title);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let x_axis = if log_x { format!("log10 {x_label}") } else { x_label.to_string() };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(&x_axis)
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    for (v, anchor, x, y) in
        [(x0, "start", MARGIN, HEIGHT - MARGIN + 16.0), (x1, "end", WIDTH - MARGIN, HEIGHT - MARGIN + 16.0)]
    {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{v:.3e}</text>"#
        );
    }
    for (v, y) in [(y0, HEIGHT - MARGIN), (y1, MARGIN)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{v:.3e}</text>"#,
            MARGIN - 4.0
        );
    }
    for (i, ser) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let path: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite() && (!log_x || p.0 > 0.0))
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5"{dash} points="{}"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{colour}">{}</text>"#,
            MARGIN + 8.0,
            MARGIN + 16.0 + 14.0 * i as f64,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Heat strip of `values[j][i]` over columns `xs[i]` and rows `ys[j]`;
/// negative cells are red, non-negative cells blue.
pub fn heat_strip(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64], values: &[Vec<f64>]) -> String {
    let mut s = header(title);
    let cols = xs.len().max(1) as f64;
    let rows = ys.len().max(1) as f64;
    let cw = (WIDTH - 2.0 * MARGIN) / cols;
    let ch = (HEIGHT - 2.0 * MARGIN) / rows;
    let scale = values.iter().flatten().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for (j, row) in values.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            let colour = if !v.is_finite() {
                "rgb(128,128,128)".to_string()
            } else {
                let a = (255.0 * (1.0 - (v.abs() / scale).sqrt())).round() as u8;
                if v < 0.0 {
                    format!("rgb(255,{a},{a})")
                } else {
                    format!("rgb({a},{a},255)")
                }
            };
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{colour}"/>"#,
                MARGIN + cw * i as f64,
                HEIGHT - MARGIN - ch * (j + 1) as f64,
                cw,
                ch
            );
        }
    }
    let label = |v: Option<&f64>| v.map_or(String::new(), |v| format!("{v:.3e}"));
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="10">{}</text>"#,
        HEIGHT - MARGIN + 14.0,
        label(xs.first())
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 14.0,
        label(xs.last())
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{} (rows: {} {} to {}; max |slack| {:.3e})</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(x_label),
        escape(y_label),
        label(ys.first()),
        label(ys.last()),
        scale
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_well_formed_and_deterministic() {
        let ser = [
            Series { label: "N", points: vec![(1e-3, 0.1), (1e-2, 0.2), (1e-1, f64::NAN)], dashed: false },
            Series { label: "a<b", points: vec![(1e-3, 0.0), (1e-1, 0.3)], dashed: true },
        ];
        let a = line_chart("t vs N", "t", "N", &ser, true);
        assert_eq!(a, line_chart("t vs N", "t", "N", &ser, true));
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<polyline").count(), 2);
        assert!(a.contains("a&lt;b"));
        assert!(!a.contains("NaN"));
    }

    #[test]
    fn heat_strip_has_one_cell_per_value() {
        let v = vec![vec![1.0, -1.0], vec![0.5, f64::NAN]];
        let s = heat_strip("slack", "d", "t", &[0.0, 1.0], &[0.1, 0.2], &v);
        assert_eq!(s.matches("<rect x=").count(), 4);
        assert!(s.contains("rgb(255,0,0)"));
    }

    #[test]
    fn flat_series_do_not_divide_by_zero() {
        let ser = [Series { label: "zero", points: vec![(0.0, 0.0), (1.0, 0.0)], dashed: false }];
        assert!(!line_chart("z", "x", "y", &ser, false).contains("NaN"));
    }
}
