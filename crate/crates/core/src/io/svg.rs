//! Layered SVG: frame, optional input scene, critical curves colored by
//! translation vector, and junction cells shaded by significance.

use std::fmt::Write;

use crate::placement::CurvePiece;
use crate::{Point, Rect};

use super::{fmt_num, ResultFile, Scene};

fn pts(ps: &[Point]) -> String {
    ps.iter().map(|p| format!("{},{}", fmt_num(p.x), fmt_num(p.y))).collect::<Vec<_>>().join(" ")
}

fn piece_points(p: &CurvePiece) -> Vec<Point> {
    match p {
        CurvePiece::Segment { a, b } => vec![*a, *b],
        CurvePiece::Arc(_) => {
            let n = ((p.length() / 0.01).ceil() as usize).clamp(8, 256);
            (0..=n).map(|i| p.at(i as f64 / n as f64)).collect()
        }
    }
}

fn view_box(result: &ResultFile, scene: Option<&Scene>) -> Rect {
    let mut b = Rect::empty();
    if let Some(p) = &result.placement {
        b = b.union(&p.region);
    }
    if let Some(j) = &result.junctions {
        b = b.union(&j.bbox);
    }
    if b.is_empty() {
        if let Some(s) = scene {
            for g in &s.segments {
                b.include(g.p);
                b.include(g.q);
            }
            for t in &s.trajectories {
                t.vertices.iter().for_each(|&v| b.include(v));
            }
            for l in &s.lines {
                b.include(l.p);
                b.include(l.q);
            }
        }
    }
    if b.is_empty() {
        b = Rect::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
    }
    let pad = 0.05 * b.width().max(b.height()).max(1e-9);
    b.expand(pad)
}

pub fn render(result: &ResultFile, scene: Option<&Scene>) -> String {
    let vb = view_box(result, scene);
    let w = vb.width().max(vb.height()) / 500.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"##,
        fmt_num(vb.min.x),
        fmt_num(-vb.max.y),
        fmt_num(vb.width()),
        fmt_num(vb.height()),
        (800.0 * vb.height() / vb.width()).round()
    );
    // flip so y points up
    let _ = writeln!(s, r##"<g transform="scale(1,-1)" fill="none" stroke-linecap="round">"##);

    let _ = writeln!(s, r##"<g id="frame" stroke="#999" stroke-width="{}">"##, fmt_num(w));
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}"/>"##,
        fmt_num(vb.min.x),
        fmt_num(vb.min.y),
        fmt_num(vb.width()),
        fmt_num(vb.height())
    );
    let _ = writeln!(s, "</g>");

    if let Some(j) = &result.junctions {
        let max = j.significance.iter().flatten().copied().fold(0.0, f64::max);
        let _ = writeln!(s, r##"<g id="junctions" stroke="none" fill="#000">"##);
        if max > 0.0 {
            for (r, row) in j.significance.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    if v <= 0.0 {
                        continue;
                    }
                    let p = j.bbox.min + Point::new(c as f64 * j.spacing, r as f64 * j.spacing);
                    let h = 0.5 * j.spacing;
                    let _ = writeln!(
                        s,
                        r##"<rect x="{}" y="{}" width="{}" height="{}" fill-opacity="{}"/>"##,
                        fmt_num(p.x - h),
                        fmt_num(p.y - h),
                        fmt_num(j.spacing),
                        fmt_num(j.spacing),
                        fmt_num(v / max)
                    );
                }
            }
        }
        for t in &j.top_k {
            let _ = writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#d00" stroke-width="{}"/>"##,
                fmt_num(t.point.x),
                fmt_num(t.point.y),
                fmt_num(2.0 * j.spacing),
                fmt_num(w)
            );
        }
        let _ = writeln!(s, "</g>");
    }

    if let Some(sc) = scene {
        let _ = writeln!(s, r##"<g id="scene" stroke="#222" stroke-width="{}">"##, fmt_num(1.5 * w));
        for l in &sc.lines {
            if let Ok(line) = l.line() {
                if let Some((t0, t1)) = vb.clip_line(line.anchor(), line.direction()) {
                    let (a, b) = (line.anchor() + line.direction() * t0, line.anchor() + line.direction() * t1);
                    let _ = writeln!(s, r##"<polyline points="{}"/>"##, pts(&[a, b]));
                }
            }
        }
        for g in &sc.segments {
            let _ = writeln!(s, r##"<polyline points="{}"/>"##, pts(&[g.p, g.q]));
        }
        for t in &sc.trajectories {
            let _ = writeln!(s, r##"<polyline stroke="#46a" points="{}"/>"##, pts(&t.vertices));
        }
        let _ = writeln!(s, "</g>");
    }

    if let Some(p) = &result.placement {
        let m = p.curves.iter().map(|c| c.vector.index + 1).max().unwrap_or(1);
        let _ = writeln!(s, r##"<g id="curves" stroke-width="{}">"##, fmt_num(w));
        for c in &p.curves {
            let hue = 360.0 * c.vector.index as f64 / m as f64;
            let mut all: Vec<Point> = Vec::new();
            for pc in &c.pieces {
                let mut v = piece_points(pc);
                if all.last().is_some_and(|l| v.first() == Some(l)) {
                    v.remove(0);
                }
                all.extend(v);
            }
            let _ = writeln!(s, r##"<polyline stroke="hsl({},80%,40%)" points="{}"/>"##, fmt_num(hue), pts(&all));
        }
        for g in &p.line_translates {
            let _ = writeln!(s, r##"<polyline stroke="#888" stroke-dasharray="{}" points="{}"/>"##, fmt_num(4.0 * w), pts(&[g.p, g.q]));
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{JunctionResult, ResultFile};
    use crate::junctions::{grid_scan, top_k};
    use crate::Polyline;

    #[test]
    fn empty_result_has_frame_only() {
        let svg = render(&ResultFile::new(None, None), None);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r##"id="frame""##));
        assert!(!svg.contains("<polyline"));
    }

    #[test]
    fn heat_cells_are_max_normalized() {
        let t = vec![
            Polyline::new("a", vec![Point::new(-3.0, 0.0), Point::new(3.0, 0.0)]).unwrap(),
            Polyline::new("b", vec![Point::new(0.0, -3.0), Point::new(0.0, 3.0)]).unwrap(),
        ];
        let g = grid_scan(&t, 0.1, Rect::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0)), 0.1).unwrap();
        let top = top_k(&g, 1).unwrap();
        let r = ResultFile::new(None, Some(JunctionResult::new(0.1, &g, &top)));
        let svg = render(&r, None);
        let op: Vec<f64> = svg
            .split("fill-opacity=\"")
            .skip(1)
            .map(|x| x.split('"').next().unwrap().parse().unwrap())
            .collect();
        assert!(!op.is_empty());
        assert!(op.iter().all(|&o| o > 0.0 && o <= 1.0));
        assert!(op.contains(&1.0));
    }
}
