//! CSV, SVG and report emission. Everything here is a pure function of its
//! inputs so repeated runs produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::phaseplane::field;
use crate::profile::{rhs, ProfileTrajectory, ViscosityPair};
use crate::shock::{PhasePoint, UpstreamConstants};

pub const CSV_HEADER: &str = "x,y,v,u2,p,eps,n,S";

pub fn trajectory_csv(traj: &ProfileTrajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &traj.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.x, p.pt.y, p.pt.v, p.u2, p.p, p.eps, p.n, p.s
        );
    }
    out
}

/// Human-readable lines followed by a `key=value` block.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<String>,
    pub block: Vec<(String, String)>,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn key(&mut self, k: &str, v: impl ToString) {
        self.block.push((k.to_string(), v.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str("\n[summary]\n");
        for (k, v) in &self.block {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 60.0;
const LOCUS_GRID: usize = 160;
const ARROW_GRID: usize = 12;
const COLOURS: &[&str] = &["#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e"];

/// Plot window in phase-plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub y_min: f64,
    pub y_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Window {
    /// Smallest window holding `pts`, padded by `pad` of each extent.
    pub fn enclosing(pts: impl IntoIterator<Item = PhasePoint>, pad: f64) -> Self {
        let mut w = Window {
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
            v_min: f64::INFINITY,
            v_max: f64::NEG_INFINITY,
        };
        for p in pts {
            w.y_min = w.y_min.min(p.y);
            w.y_max = w.y_max.max(p.y);
            w.v_min = w.v_min.min(p.v);
            w.v_max = w.v_max.max(p.v);
        }
        let dy = (w.y_max - w.y_min).max(1e-9);
        let dv = (w.v_max - w.v_min).max(1e-3 * dy);
        Window {
            y_min: (w.y_min - pad * dy).max(0.5 * w.y_min),
            y_max: w.y_max + pad * dy,
            v_min: w.v_min - pad * dv,
            v_max: w.v_max + pad * dv,
        }
    }

    fn px(&self, p: PhasePoint) -> (f64, f64) {
        let sx = (WIDTH - 2.0 * MARGIN) / (self.y_max - self.y_min);
        let sy = (HEIGHT - 2.0 * MARGIN) / (self.v_max - self.v_min);
        (
            MARGIN + (p.y - self.y_min) * sx,
            HEIGHT - MARGIN - (p.v - self.v_min) * sy,
        )
    }

    fn node(&self, i: usize, k: usize, n: usize) -> PhasePoint {
        PhasePoint::new(
            self.y_min + (self.y_max - self.y_min) * i as f64 / n as f64,
            self.v_min + (self.v_max - self.v_min) * k as f64 / n as f64,
        )
    }
}

// Edge identifiers: (orientation, i, k) with 0 = along y from node (i, k).
type EdgeId = (u8, usize, usize);

/// Zero contour of a gridded function as chained polylines.
fn contour(values: &[Vec<f64>], w: &Window, n: usize) -> Vec<Vec<PhasePoint>> {
    let mut crossing: BTreeMap<EdgeId, PhasePoint> = BTreeMap::new();
    let mut adjacency: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    let cut = |e: EdgeId| -> Option<PhasePoint> {
        let (a, b, pa, pb) = match e {
            (0, i, k) => (
                values[i][k],
                values[i + 1][k],
                w.node(i, k, n),
                w.node(i + 1, k, n),
            ),
            (_, i, k) => (
                values[i][k],
                values[i][k + 1],
                w.node(i, k, n),
                w.node(i, k + 1, n),
            ),
        };
        if a.is_nan() || b.is_nan() || (a < 0.0) == (b < 0.0) {
            return None;
        }
        let t = a / (a - b);
        Some(PhasePoint::new(
            pa.y + t * (pb.y - pa.y),
            pa.v + t * (pb.v - pa.v),
        ))
    };
    for i in 0..n {
        for k in 0..n {
            let corners = [
                values[i][k],
                values[i + 1][k],
                values[i + 1][k + 1],
                values[i][k + 1],
            ];
            if corners.iter().any(|x| x.is_nan()) {
                continue;
            }
            let edges: [EdgeId; 4] = [(0, i, k), (1, i + 1, k), (0, i, k + 1), (1, i, k)];
            let hits: Vec<EdgeId> = edges
                .iter()
                .copied()
                .filter_map(|e| {
                    cut(e).map(|p| {
                        crossing.insert(e, p);
                        e
                    })
                })
                .collect();
            let pairs: Vec<(EdgeId, EdgeId)> = match hits.len() {
                2 => vec![(hits[0], hits[1])],
                4 => {
                    // Saddle cell: resolve by the sign at the centre.
                    let centre: f64 = corners.iter().sum::<f64>() / 4.0;
                    if (centre < 0.0) == (corners[0] < 0.0) {
                        vec![(hits[0], hits[1]), (hits[2], hits[3])]
                    } else {
                        vec![(hits[0], hits[3]), (hits[1], hits[2])]
                    }
                }
                _ => Vec::new(),
            };
            for (a, b) in pairs {
                adjacency.entry(a).or_default().push(b);
                adjacency.entry(b).or_default().push(a);
            }
        }
    }
    let mut used: BTreeMap<(EdgeId, EdgeId), bool> = BTreeMap::new();
    let key = |a: EdgeId, b: EdgeId| if a < b { (a, b) } else { (b, a) };
    let mut lines = Vec::new();
    // Open chains start at degree-one edges; closed loops are picked up after.
    let starts: Vec<EdgeId> = adjacency
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .chain(adjacency.keys().copied())
        .collect();
    for s in starts {
        let mut cur = s;
        let mut line = vec![crossing[&cur]];
        loop {
            let next = adjacency[&cur]
                .iter()
                .copied()
                .find(|nb| !used.contains_key(&key(cur, *nb)));
            let Some(nb) = next else { break };
            used.insert(key(cur, nb), true);
            line.push(crossing[&nb]);
            cur = nb;
        }
        if line.len() > 1 {
            lines.push(line);
        }
    }
    lines
}

// Pixel position half way along a curve, by arclength on screen.
fn halfway(w: &Window, pts: &[PhasePoint]) -> Option<(f64, f64)> {
    let px: Vec<(f64, f64)> = pts.iter().map(|p| w.px(*p)).collect();
    let seg = |k: usize| (px[k + 1].0 - px[k].0).hypot(px[k + 1].1 - px[k].1);
    let total: f64 = (0..px.len().saturating_sub(1)).map(seg).sum();
    let mut run = 0.0;
    for k in 0..px.len().saturating_sub(1) {
        run += seg(k);
        if run >= total / 2.0 {
            return Some(px[k + 1]);
        }
    }
    px.first().copied()
}

/// A phase portrait: loci `V1` (solid) and `V2` (dashed), flow arrows of the
/// viscous system on a 12 x 12 grid, the rest points and any trajectories.
pub fn phase_portrait_svg(
    c: &UpstreamConstants,
    visc: &ViscosityPair,
    from: PhasePoint,
    to: PhasePoint,
    trajectories: &[(String, Vec<PhasePoint>)],
    title: &str,
) -> String {
    let w = Window::enclosing(
        [from, to]
            .into_iter()
            .chain(trajectories.iter().flat_map(|(_, t)| t.iter().copied())),
        0.25,
    );
    let n = LOCUS_GRID;
    let mut f1 = vec![vec![f64::NAN; n + 1]; n + 1];
    let mut f2 = vec![vec![f64::NAN; n + 1]; n + 1];
    for i in 0..=n {
        for k in 0..=n {
            if let Ok(f) = field(c, w.node(i, k, n)) {
                f1[i][k] = f[0];
                f2[i][k] = f[1];
            }
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let (x1, y1) = (WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r##"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="#888"/>"##,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">y = u^1</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">v</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (text, x, y, anchor) in [
        (format!("{:.5}", w.y_min), x0, y0 + 18.0, "start"),
        (format!("{:.5}", w.y_max), x1, y0 + 18.0, "end"),
    ] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{text}</text>"#);
    }
    for (text, y) in [
        (format!("{:.5}", w.v_min), y0),
        (format!("{:.5}", w.v_max), y1 + 10.0),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end">{text}</text>"#,
            x0 - 4.0
        );
    }

    // Flow arrows, drawn in pixel space so they keep their shape.
    let _ = writeln!(s, r##"<g fill="#999" stroke="none">"##);
    let sx = (WIDTH - 2.0 * MARGIN) / (w.y_max - w.y_min);
    let sv = (HEIGHT - 2.0 * MARGIN) / (w.v_max - w.v_min);
    for i in 0..ARROW_GRID {
        for k in 0..ARROW_GRID {
            let p = PhasePoint::new(
                w.y_min + (w.y_max - w.y_min) * (i as f64 + 0.5) / ARROW_GRID as f64,
                w.v_min + (w.v_max - w.v_min) * (k as f64 + 0.5) / ARROW_GRID as f64,
            );
            let Ok(r) = rhs(c, visc, p) else { continue };
            let (dx, dy) = (r[0] * sx, -r[1] * sv);
            let len = dx.hypot(dy);
            if !(len > 0.0) || !len.is_finite() {
                continue;
            }
            let (ux, uy) = (dx / len, dy / len);
            let (cx, cy) = w.px(p);
            let tip = (cx + 7.0 * ux, cy + 7.0 * uy);
            let l = (cx - 5.0 * ux - 3.5 * uy, cy - 5.0 * uy + 3.5 * ux);
            let rr = (cx - 5.0 * ux + 3.5 * uy, cy - 5.0 * uy - 3.5 * ux);
            let _ = writeln!(
                s,
                r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
                tip.0, tip.1, l.0, l.1, rr.0, rr.1
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let pixels = |pts: &[PhasePoint]| -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = w.px(*p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(
        s,
        r#"<clipPath id="frame"><rect x="{x0}" y="{y1}" width="{}" height="{}"/></clipPath>"#,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(s, r#"<g clip-path="url(#frame)" fill="none">"#);
    for line in contour(&f1, &w, n) {
        let _ = writeln!(
            s,
            r#"<polyline class="V1" points="{}" stroke="black" stroke-width="1.5"/>"#,
            pixels(&line)
        );
    }
    for line in contour(&f2, &w, n) {
        let _ = writeln!(
            s,
            r#"<polyline class="V2" points="{}" stroke="black" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
            pixels(&line)
        );
    }
    for (k, (_, t)) in trajectories.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<polyline class="VP" points="{}" stroke="{}" stroke-width="2"/>"#,
            pixels(t),
            COLOURS[k % COLOURS.len()]
        );
    }
    let _ = writeln!(s, "</g>");

    for (label, p) in [("0", from), ("1", to)] {
        let (x, y) = w.px(p);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/><text x="{:.2}" y="{:.2}" font-weight="bold">"{label}"</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    for (k, (label, t)) in trajectories.iter().enumerate() {
        if let Some(mid) = halfway(&w, t) {
            let (x, y) = mid;
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" fill="{}">{label}</text>"#,
                x + 6.0,
                y + 14.0,
                COLOURS[k % COLOURS.len()]
            );
        }
    }

    // Legend.
    // Legend goes in the corner farthest from the rest points.
    let legend_h = 46.0 + 16.0 * trajectories.len() as f64;
    let marks = [w.px(from), w.px(to)];
    let (lx, ly) = [
        (x1 - 150.0, y1 + 10.0),
        (x0 + 10.0, y1 + 10.0),
        (x1 - 150.0, y0 - 10.0 - legend_h),
        (x0 + 10.0, y0 - 10.0 - legend_h),
    ]
    .into_iter()
    .max_by(|a, b| {
        let clearance = |c: &(f64, f64)| {
            marks
                .iter()
                .map(|m| (c.0 + 70.0 - m.0).hypot(c.1 + legend_h / 2.0 - m.1))
                .fold(f64::INFINITY, f64::min)
        };
        clearance(a).total_cmp(&clearance(b))
    })
    .unwrap();
    let _ = writeln!(
        s,
        r##"<rect x="{lx}" y="{ly}" width="140" height="{legend_h}" fill="white" stroke="#ccc"/>"##
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/><text x="{}" y="{}">V1</text>"#,
        lx + 8.0,
        ly + 14.0,
        lx + 38.0,
        ly + 14.0,
        lx + 46.0,
        ly + 18.0
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5" stroke-dasharray="6 4"/><text x="{}" y="{}">V2</text>"#,
        lx + 8.0,
        ly + 30.0,
        lx + 38.0,
        ly + 30.0,
        lx + 46.0,
        ly + 34.0
    );
    for (k, (label, _)) in trajectories.iter().enumerate() {
        let yy = ly + 46.0 + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{yy}" x2="{}" y2="{yy}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{label}</text>"#,
            lx + 8.0,
            lx + 38.0,
            COLOURS[k % COLOURS.len()],
            lx + 46.0,
            yy + 4.0
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_of_a_line() {
        let w = Window {
            y_min: 0.0,
            y_max: 1.0,
            v_min: 0.0,
            v_max: 1.0,
        };
        let n = 10;
        let values: Vec<Vec<f64>> = (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|k| w.node(i, k, n).y - w.node(i, k, n).v - 0.05)
                    .collect()
            })
            .collect();
        let lines = contour(&values, &w, n);
        assert_eq!(lines.len(), 1);
        for p in &lines[0] {
            assert!((p.y - p.v - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn report_block_is_trailing() {
        let mut r = Report::default();
        r.line("hello");
        r.key("verdict", "admissible");
        let text = r.render();
        assert!(text.ends_with("[summary]\nverdict=admissible\n"));
    }
}
