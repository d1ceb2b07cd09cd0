//! Plain-text scenes.
//!
//! ```text
//! # comment
//! L x1 y1 x2 y2      line through two points
//! S x1 y1 x2 y2      segment
//! T id               trajectory, followed by indented "x y" rows
//!   x y
//! ```

use std::fmt::Write;

use crate::arrangement::Primitives;
use crate::{Error, Line, Point, Polyline, Result, Segment};

use super::fmt_num;

/// A line is kept with the two points that defined it so it is written back
/// the same way.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneLine {
    pub p: Point,
    pub q: Point,
}

impl SceneLine {
    pub fn line(&self) -> Result<Line> {
        Ok(Line::through(self.p, self.q)?)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene {
    pub lines: Vec<SceneLine>,
    pub segments: Vec<Segment>,
    pub trajectories: Vec<Polyline>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers(fields: &[&str], want: usize, line: usize) -> Result<Vec<f64>> {
    if fields.len() != want {
        return Err(err(line, format!("expected {want} numbers, found {}", fields.len())));
    }
    fields
        .iter()
        .map(|f| match f.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(err(line, format!("bad number `{f}`"))),
        })
        .collect()
}

impl Scene {
    pub fn parse(text: &str) -> Result<Scene> {
        let mut scene = Scene::default();
        // open trajectory: header line number, id, vertices
        let mut open: Option<(usize, String, Vec<Point>)> = None;
        let finish = |open: Option<(usize, String, Vec<Point>)>, scene: &mut Scene| -> Result<()> {
            if let Some((at, id, v)) = open {
                let p = Polyline::new(id, v).map_err(|e| err(at, e.to_string()))?;
                scene.trajectories.push(p);
            }
            Ok(())
        };
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let indented = body.starts_with(|c: char| c.is_whitespace());
            let fields: Vec<&str> = body.split_whitespace().collect();
            if indented {
                let Some((_, _, v)) = open.as_mut() else {
                    return Err(err(n, "indented row outside a trajectory"));
                };
                let xy = numbers(&fields, 2, n)?;
                v.push(Point::new(xy[0], xy[1]));
                continue;
            }
            finish(open.take(), &mut scene)?;
            match fields[0] {
                "L" => {
                    let c = numbers(&fields[1..], 4, n)?;
                    let l = SceneLine { p: Point::new(c[0], c[1]), q: Point::new(c[2], c[3]) };
                    l.line().map_err(|e| err(n, e.to_string()))?;
                    scene.lines.push(l);
                }
                "S" => {
                    let c = numbers(&fields[1..], 4, n)?;
                    let (p, q) = (Point::new(c[0], c[1]), Point::new(c[2], c[3]));
                    if p == q {
                        return Err(err(n, "segment endpoints coincide"));
                    }
                    scene.segments.push(Segment { p, q });
                }
                "T" => {
                    if fields.len() != 2 {
                        return Err(err(n, "expected `T <id>`"));
                    }
                    open = Some((n, fields[1].to_string(), Vec::new()));
                }
                other => return Err(err(n, format!("unknown record `{other}`"))),
            }
        }
        finish(open, &mut scene)?;
        Ok(scene)
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "L {} {} {} {}", fmt_num(l.p.x), fmt_num(l.p.y), fmt_num(l.q.x), fmt_num(l.q.y));
        }
        for g in &self.segments {
            let _ = writeln!(s, "S {} {} {} {}", fmt_num(g.p.x), fmt_num(g.p.y), fmt_num(g.q.x), fmt_num(g.q.y));
        }
        for t in &self.trajectories {
            let _ = writeln!(s, "T {}", t.id);
            for v in &t.vertices {
                let _ = writeln!(s, "  {} {}", fmt_num(v.x), fmt_num(v.y));
            }
        }
        s
    }

    pub fn from_lines(lines: &[Line]) -> Scene {
        let lines = lines
            .iter()
            .map(|l| {
                let a = l.anchor();
                SceneLine { p: a, q: a + l.direction() }
            })
            .collect();
        Scene { lines, ..Scene::default() }
    }

    /// Lines or segments for the placement pipeline. Mixing both is rejected.
    pub fn primitives(&self) -> Result<Primitives> {
        match (self.lines.is_empty(), self.segments.is_empty()) {
            (false, false) => Err(Error::Unsupported("scene mixes lines and segments".into())),
            (true, false) => Ok(Primitives::Segments(self.segments.clone())),
            _ => Ok(Primitives::Lines(self.lines.iter().map(SceneLine::line).collect::<Result<_>>()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "# demo\nL 0 0 1 1\nS -1 0.5 2 0.25  # trailing\n\nT road-1\n  0 0\n  1 0\n\t2 1.5\nT b\n  3 3\n  4 4\n";

    #[test]
    fn parse_and_round_trip() {
        let s = Scene::parse(TEXT).unwrap();
        assert_eq!(s.lines.len(), 1);
        assert_eq!(s.segments.len(), 1);
        assert_eq!(s.trajectories.len(), 2);
        assert_eq!(s.trajectories[0].id, "road-1");
        assert_eq!(s.trajectories[0].vertices.len(), 3);
        let again = Scene::parse(&s.emit()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.emit(), s.emit());
    }

    #[test]
    fn errors_carry_line_numbers() {
        for (bad, at) in [
            ("L 0 0 1\n", 1),
            ("\nS 0 0 0 0\n", 2),
            ("  1 2\n", 1),
            ("Q 1\n", 1),
            ("T a\n  0 0\n", 1),
            ("L 0 0 x 1\n", 1),
            ("L 0 0 0 0\n", 1),
        ] {
            match Scene::parse(bad) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, at, "{bad:?}"),
                other => panic!("{bad:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn primitives() {
        let s = Scene::parse(TEXT).unwrap();
        assert!(s.primitives().is_err());
        let l = Scene::parse("L 0 0 1 0\n").unwrap();
        assert!(matches!(l.primitives().unwrap(), Primitives::Lines(v) if v.len() == 1));
        assert!(matches!(Scene::default().primitives().unwrap(), Primitives::Lines(v) if v.is_empty()));
    }
}
