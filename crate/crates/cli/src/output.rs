use std::fmt::Write as _;

use eagm_core::MultivaluePoint;
use serde::Serialize;

pub const CSV_HEADER: &str =
    "series,sigma_mask,delta_mask,gamma_mask,signb,generation,re,im,ill_conditioned,duplicate_of";

/// One output row; the JSON form mirrors the CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub series: String,
    pub sigma_mask: u64,
    pub delta_mask: u64,
    pub gamma_mask: u64,
    pub signb: i8,
    pub generation: u32,
    pub re: f64,
    pub im: f64,
    pub ill_conditioned: bool,
    pub duplicate_of: Option<usize>,
}

impl From<&MultivaluePoint> for Record {
    fn from(p: &MultivaluePoint) -> Self {
        Self {
            series: p.series(),
            sigma_mask: p.schedule.sigma_mask,
            delta_mask: p.schedule.delta_mask,
            gamma_mask: p.schedule.gamma_mask,
            signb: p.signb.as_i8(),
            generation: p.generation,
            re: p.value.re,
            im: p.value.im,
            ill_conditioned: p.ill_conditioned,
            duplicate_of: p.duplicate_of,
        }
    }
}

/// 17 significant digits, so every value round-trips.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(records: &[Record]) -> String {
    let mut out = String::with_capacity(96 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let dup = r.duplicate_of.map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.series,
            r.sigma_mask,
            r.delta_mask,
            r.gamma_mask,
            r.signb,
            r.generation,
            float(r.re),
            float(r.im),
            r.ill_conditioned,
            dup
        );
    }
    out
}

pub fn to_json(records: &[Record]) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(records)?;
    s.push('\n');
    Ok(s)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

/// Standalone SVG scatter of the finite points in the complex plane, each
/// labelled with its generation. Ill-conditioned points are drawn hollow.
pub fn to_svg(records: &[Record], title: &str) -> String {
    let finite: Vec<&Record> = records
        .iter()
        .filter(|r| r.re.is_finite() && r.im.is_finite())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for r in &finite {
        x0 = x0.min(r.re);
        x1 = x1.max(r.re);
        y0 = y0.min(r.im);
        y1 = y1.max(r.im);
    }
    if finite.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    // equal scale on both axes so lattices keep their shape
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = ((WIDTH - 2.0 * MARGIN) / span).min((HEIGHT - 2.0 * MARGIN) / span);
    let cx = (x0 + x1) / 2.0;
    let cy = (y0 + y1) / 2.0;
    let px = |x: f64| WIDTH / 2.0 + (x - cx) * scale;
    let py = |y: f64| HEIGHT / 2.0 - (y - cy) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    );
    if y0 <= 0.0 && y1 >= 0.0 {
        let y = py(0.0);
        let _ = writeln!(out, r##"<line x1="0" y1="{y:.2}" x2="{WIDTH}" y2="{y:.2}" stroke="#bbb"/>"##);
    }
    if x0 <= 0.0 && x1 >= 0.0 {
        let x = px(0.0);
        let _ = writeln!(out, r##"<line x1="{x:.2}" y1="0" x2="{x:.2}" y2="{HEIGHT}" stroke="#bbb"/>"##);
    }
    for r in &finite {
        let color = COLORS[usize::from(r.signb < 0)];
        let (x, y) = (px(r.re), py(r.im));
        let fill = if r.ill_conditioned { "none" } else { color };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{fill}" stroke="{color}"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="9">{}</text>"#,
            x + 4.0,
            y - 4.0,
            r.generation
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
