//! The BER chart.

use std::fmt::Write as _;

use mocc_core::analysis::BerPoint;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Log-y BER versus `T_b` chart with one polyline per scheme. Points with
/// zero BER have no logarithm and are left out of their series.
pub fn ber_svg(points: &[BerPoint]) -> String {
    let mut schemes: Vec<&str> = Vec::new();
    for p in points {
        if !schemes.contains(&p.scheme.as_str()) {
            schemes.push(&p.scheme);
        }
    }
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x_lo = x_lo.min(p.tb_seconds);
        x_hi = x_hi.max(p.tb_seconds);
    }
    if !(x_hi > x_lo) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let positive = points.iter().map(|p| p.ber).filter(|&b| b > 0.0);
    let min_ber = positive.clone().fold(f64::INFINITY, f64::min);
    let max_ber = positive.fold(f64::NEG_INFINITY, f64::max);
    let (y_lo, y_hi) = if min_ber.is_finite() {
        (min_ber.log10().floor(), max_ber.log10().ceil().max(min_ber.log10().floor() + 1.0))
    } else {
        (-6.0, 0.0)
    };
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |b: f64| MARGIN + (y_hi - b.log10()) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    let mut decade = y_lo;
    while decade <= y_hi {
        let y = sy(10f64.powf(decade));
        writeln!(s, r##"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, MARGIN + plot_w)
            .unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">1e{decade}</text>"#, MARGIN - 6.0, y + 4.0)
            .unwrap();
        decade += 1.0;
    }
    let mut ticks: Vec<f64> = points.iter().map(|p| p.tb_seconds).collect();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    for t in ticks {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{t}</text>"#,
            sx(t),
            MARGIN + plot_h + 16.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">T_b (s)</text>"#,
        MARGIN + plot_w / 2.0,
        HEIGHT - 16.0
    )
    .unwrap();
    writeln!(s, r#"<text x="16" y="{:.2}" font-size="12" transform="rotate(-90 16 {:.2})" text-anchor="middle">BER</text>"#, MARGIN + plot_h / 2.0, MARGIN + plot_h / 2.0).unwrap();
    for (i, scheme) in schemes.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = points
            .iter()
            .filter(|p| p.scheme == *scheme && p.ber > 0.0)
            .map(|p| format!("{:.2},{:.2}", sx(p.tb_seconds), sy(p.ber)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" data-scheme="{}" points="{}"/>"#,
            escape(scheme),
            coords.join(" ")
        )
        .unwrap();
        let ly = MARGIN + 14.0 + 16.0 * i as f64;
        let lx = MARGIN + plot_w - 130.0;
        writeln!(s, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0)
            .unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#, lx + 26.0, ly + 4.0, escape(scheme)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}
