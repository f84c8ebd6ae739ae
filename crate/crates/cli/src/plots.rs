//! SVG charts built from string templates.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open(width: f64, height: f64, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        width / 2.0,
        escape(title)
    )
}

fn placeholder(title: &str, note: &str) -> String {
    let mut s = open(W, H, title);
    let _ = writeln!(
        s,
        "<text class=\"empty\" x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        H / 2.0,
        escape(note)
    );
    s.push_str("</svg>\n");
    s
}

fn fmt(x: f64) -> String {
    format!("{:.2}", x)
}

/// Line plot of `(k, wcss)`; the selected k gets a filled marker.
pub fn elbow(points: &[(usize, f64)], selected_k: Option<usize>) -> String {
    if points.is_empty() {
        return placeholder("Elbow curve", "no clustering run");
    }
    let kmin = points[0].0 as f64;
    let kmax = points[points.len() - 1].0 as f64;
    let ymax = points.iter().map(|p| p.1).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let x = |k: usize| {
        if kmax > kmin {
            MARGIN + (k as f64 - kmin) / (kmax - kmin) * (W - 2.0 * MARGIN)
        } else {
            W / 2.0
        }
    };
    let y = |v: f64| H - MARGIN - v / ymax * (H - 2.0 * MARGIN);

    let mut s = open(W, H, "Elbow curve");
    let _ = writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">k</text>",
        W / 2.0,
        H - 20.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">WCSS</text>",
        H / 2.0,
        H / 2.0
    );
    let vertices: Vec<String> = points
        .iter()
        .map(|&(k, v)| format!("{},{}", fmt(x(k)), fmt(y(v))))
        .collect();
    let _ = writeln!(
        s,
        "<polyline class=\"curve\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>",
        vertices.join(" ")
    );
    for &(k, v) in points {
        let fill = if Some(k) == selected_k { "crimson" } else { "white" };
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{fill}\" stroke=\"steelblue\"/>\n<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{k}</text>",
            fmt(x(k)),
            fmt(y(v)),
            fmt(x(k)),
            H - MARGIN + 16.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Horizontal bars, one per pattern, labelled with the exact support.
pub fn support_bars(rows: &[(String, usize)]) -> String {
    if rows.is_empty() {
        return placeholder("Pattern support", "no patterns");
    }
    let bar_h = 18.0;
    let label_w = 200.0;
    let height = MARGIN + rows.len() as f64 * (bar_h + 6.0) + 20.0;
    let max = rows.iter().map(|r| r.1).max().unwrap_or(1).max(1) as f64;
    let span = W - label_w - 80.0;
    let mut s = open(W, height, "Pattern support");
    for (i, (pattern, support)) in rows.iter().enumerate() {
        let top = MARGIN + i as f64 * (bar_h + 6.0);
        let len = *support as f64 / max * span;
        let _ = writeln!(
            s,
            "<g class=\"bar\"><text class=\"label\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\
             <rect x=\"{label_w}\" y=\"{}\" width=\"{}\" height=\"{bar_h}\" fill=\"steelblue\"/>\
             <text class=\"value\" x=\"{}\" y=\"{}\">{support}</text></g>",
            label_w - 8.0,
            fmt(top + 13.0),
            escape(pattern),
            fmt(top),
            fmt(len),
            fmt(label_w + len + 6.0),
            fmt(top + 13.0)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Five-number summary with linearly interpolated quartiles.
pub fn five_numbers(values: &[f64]) -> Option<[f64; 5]> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = p * (v.len() - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    };
    Some([v[0], q(0.25), q(0.5), q(0.75), v[v.len() - 1]])
}

/// Grouped box summaries: for each dimension, one box per cluster.
pub fn box_summaries(dimensions: &[(String, Vec<Vec<f64>>)], scale: (f64, f64)) -> String {
    if dimensions.iter().all(|(_, groups)| groups.iter().all(Vec::is_empty)) {
        return placeholder("Scores by cluster", "no scores");
    }
    const COLORS: [&str; 6] = [
        "steelblue",
        "darkorange",
        "seagreen",
        "crimson",
        "slateblue",
        "goldenrod",
    ];
    let (lo, hi) = scale;
    let y = |v: f64| H - MARGIN - (v - lo) / (hi - lo) * (H - 2.0 * MARGIN);
    let slot = (W - 2.0 * MARGIN) / dimensions.len() as f64;
    let mut s = open(W, H, "Scores by cluster");
    let _ = writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    for tick in (lo as i64)..=(hi as i64) {
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{tick}</text>",
            MARGIN - 8.0,
            fmt(y(tick as f64) + 4.0)
        );
    }
    for (d, (name, groups)) in dimensions.iter().enumerate() {
        let left = MARGIN + d as f64 * slot;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            fmt(left + slot / 2.0),
            H - MARGIN + 16.0,
            escape(name)
        );
        let width = slot / (groups.len() as f64 + 1.0);
        for (g, values) in groups.iter().enumerate() {
            let Some([min, q1, med, q3, max]) = five_numbers(values) else {
                continue;
            };
            let cx = left + width * (g as f64 + 1.0);
            let half = width * 0.35;
            let color = COLORS[g % COLORS.len()];
            let _ = writeln!(
                s,
                "<g class=\"box\" data-cluster=\"{}\"><line x1=\"{cx}\" y1=\"{}\" x2=\"{cx}\" y2=\"{}\" stroke=\"{color}\"/>\
                 <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{color}\"/>\
                 <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/></g>",
                g + 1,
                fmt(y(max)),
                fmt(y(min)),
                fmt(cx - half),
                fmt(y(q3)),
                fmt(2.0 * half),
                fmt(y(q1) - y(q3)),
                fmt(cx - half),
                fmt(y(med)),
                fmt(cx + half),
                fmt(y(med)),
                cx = fmt(cx),
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elbow_has_one_vertex_per_point() {
        let pts: Vec<(usize, f64)> = (1..=5).map(|k| (k, 100.0 / k as f64)).collect();
        let svg = elbow(&pts, Some(2));
        let line = svg.lines().find(|l| l.contains("polyline")).unwrap();
        let attr = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(attr.split_whitespace().count(), 5);
    }

    #[test]
    fn empty_inputs_get_placeholders() {
        assert!(support_bars(&[]).contains("no patterns"));
        assert!(elbow(&[], None).contains("no clustering run"));
    }

    #[test]
    fn quartiles() {
        assert_eq!(
            five_numbers(&[4.0, 1.0, 3.0, 2.0]).unwrap(),
            [1.0, 1.75, 2.5, 3.25, 4.0]
        );
        assert!(five_numbers(&[]).is_none());
    }
}
