//! Self-contained SVG line charts of error series (log10 vertical axis).

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const COLOURS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// One polyline per series over the shared `x` values. Non-finite or
/// nonpositive points break the line.
pub fn line_chart(title: &str, x: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let logs: Vec<Vec<Option<f64>>> = series
        .iter()
        .map(|(_, ys)| {
            ys.iter()
                .map(|y| (y.is_finite() && *y > 0.0).then(|| y.log10()))
                .collect()
        })
        .collect();
    let finite_x: Vec<f64> = x.iter().copied().filter(|v| v.is_finite()).collect();
    let (x0, x1) = span(&finite_x);
    let all_y: Vec<f64> = logs.iter().flatten().flatten().copied().collect();
    let (y0, y1) = span(&all_y);

    let px = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        "<path d=\"M{m:.1},{t:.1} L{m:.1},{b:.1} L{r:.1},{b:.1}\" fill=\"none\" stroke=\"black\"/>",
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for (label, xpos, ypos, anchor) in [
        (format!("{x0:.3}"), MARGIN, HEIGHT - MARGIN + 16.0, "middle"),
        (
            format!("{x1:.3}"),
            WIDTH - MARGIN,
            HEIGHT - MARGIN + 16.0,
            "middle",
        ),
        (format!("1e{y0:.2}"), MARGIN - 4.0, HEIGHT - MARGIN, "end"),
        (format!("1e{y1:.2}"), MARGIN - 4.0, MARGIN + 4.0, "end"),
    ] {
        let _ = writeln!(
            out,
            "<text x=\"{xpos:.1}\" y=\"{ypos:.1}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"{anchor}\">{label}</text>"
        );
    }

    for (idx, ((name, _), ys)) in series.iter().zip(&logs).enumerate() {
        let colour = COLOURS[idx % COLOURS.len()];
        let mut d = String::new();
        let mut pen_down = false;
        for (xv, yv) in x.iter().zip(ys) {
            match yv {
                Some(y) if xv.is_finite() => {
                    let cmd = if pen_down { 'L' } else { 'M' };
                    let _ = write!(d, "{cmd}{:.2},{:.2} ", px(*xv), py(*y));
                    pen_down = true;
                }
                _ => pen_down = false,
            }
        }
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"/>",
            d.trim_end()
        );
        let ly = MARGIN + 14.0 * idx as f64;
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{ly:.1}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{colour}\">{}</text>",
            WIDTH - MARGIN - 120.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn span(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}
