//! Self-contained SVG heatmap of a verdict grid.

use std::fmt::Write as _;

use smhd::symmetrization::nsc_special_points;

use crate::sweep::{Code, GridPoint, SweepSpec, VerdictFn};

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

fn color(c: Code) -> &'static str {
    match c {
        Code::Stable => "#4c9a5b",
        Code::Unstable => "#c8453c",
        Code::Exceptional => "#e8b52f",
        Code::Inconclusive => "#9a9a9a",
        Code::Undefined => "#ffffff",
    }
}

const LEGEND: [(Code, &str); 5] = [
    (Code::Stable, "stable / admissible"),
    (Code::Unstable, "unstable / inadmissible"),
    (Code::Exceptional, "exceptional point"),
    (Code::Inconclusive, "inconclusive"),
    (Code::Undefined, "undefined"),
];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }

    fn inside(&self, x: f64, y: f64) -> bool {
        x >= self.x.0 && x <= self.x.1 && y >= self.y.0 && y <= self.y.1
    }
}

/// Exceptional curves `|[v2]| = f_i(B2+)` when the axes are `jump_v2` and
/// `b2_plus` (in either order).
fn nsc_curves(spec: &SweepSpec, f: &Frame) -> Vec<Vec<(f64, f64)>> {
    if spec.verdict != VerdictFn::CvsNsc {
        return Vec::new();
    }
    let swap = match (spec.x.param.as_str(), spec.y.param.as_str()) {
        ("jump_v2", "b2_plus") => false,
        ("b2_plus", "jump_v2") => true,
        _ => return Vec::new(),
    };
    let gh = spec.fixed_value("g") * spec.fixed_value("h");
    let (b_lo, b_hi) = if swap { f.x } else { f.y };
    let n = 400;
    let mut out = Vec::new();
    for i in 0..6 {
        for sign in [1.0, -1.0] {
            let mut run = Vec::new();
            for k in 0..=n {
                let b = b_lo + (b_hi - b_lo) * k as f64 / n as f64;
                let j = sign * nsc_special_points(b, gh)[i];
                let (x, y) = if swap { (b, j) } else { (j, b) };
                if f.inside(x, y) {
                    run.push((f.px(x), f.py(y)));
                } else if run.len() > 1 {
                    out.push(std::mem::take(&mut run));
                } else {
                    run.clear();
                }
            }
            if run.len() > 1 {
                out.push(run);
            }
        }
    }
    out
}

pub fn render(spec: &SweepSpec, points: &[GridPoint]) -> String {
    let f = Frame { x: (spec.x.min, spec.x.max), y: (spec.y.min, spec.y.max) };
    let (nx, ny) = (spec.x.samples, spec.y.samples);
    let cw = (W - LEFT - RIGHT) / nx as f64;
    let ch = (H - TOP - BOTTOM) / ny as f64;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<desc>verdict={:?} grid={nx}x{ny}</desc>"#, spec.verdict);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" style="fill:#ffffff"/>"#);
    for (k, p) in points.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        let x = LEFT + i as f64 * cw;
        let y = H - BOTTOM - (j + 1) as f64 * ch;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" style="fill:{};stroke:none"><title>{}</title></rect>"#,
            cw + 0.05,
            ch + 0.05,
            color(p.code),
            p.verdict
        );
    }
    for run in nsc_curves(spec, &f) {
        let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ =
            writeln!(s, r#"<polyline points="{}" style="fill:none;stroke:#1d2b53;stroke-width:1.2"/>"#, pts.join(" "));
    }
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(
        s,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" style="fill:none;stroke:#000000;stroke-width:1"/>"#,
        x1 - x0,
        y1 - y0
    );
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, body: &str| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" style="font-family:sans-serif;font-size:12px;text-anchor:{anchor}">{body}</text>"#
        );
    };
    text(&mut s, x0, y1 + 16.0, "middle", &format!("{}", spec.x.min));
    text(&mut s, x1, y1 + 16.0, "middle", &format!("{}", spec.x.max));
    text(&mut s, 0.5 * (x0 + x1), y1 + 40.0, "middle", &spec.x.param);
    text(&mut s, x0 - 6.0, y1, "end", &format!("{}", spec.y.min));
    text(&mut s, x0 - 6.0, y0 + 10.0, "end", &format!("{}", spec.y.max));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" style="font-family:sans-serif;font-size:12px;text-anchor:middle">{}</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1),
        spec.y.param
    );
    for (k, (code, label)) in LEGEND.iter().enumerate() {
        let y = y0 + 20.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{y:.1}" width="12" height="12" style="fill:{};stroke:#000000;stroke-width:0.5"/>"#,
            x1 + 12.0,
            color(*code)
        );
        text(&mut s, x1 + 30.0, y + 10.0, "start", label);
    }
    s.push_str("</svg>\n");
    s
}
