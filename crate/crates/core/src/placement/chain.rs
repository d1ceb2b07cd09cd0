//! Joining loose curve pieces into connected chains.

use super::CurvePiece;
use crate::Point;

/// Link pieces whose endpoints coincide within `tol` into chains. Vertices
/// where more than two pieces meet end a chain.
pub(crate) fn chain_pieces(pieces: &[CurvePiece], tol: f64) -> Vec<Vec<CurvePiece>> {
    let mut verts: Vec<Point> = Vec::new();
    let vid = |p: Point, verts: &mut Vec<Point>| -> usize {
        if let Some(i) = verts.iter().position(|q| q.dist(p) <= tol) {
            return i;
        }
        verts.push(p);
        verts.len() - 1
    };
    let ends: Vec<(usize, usize)> = pieces.iter().map(|p| (vid(p.start(), &mut verts), vid(p.end(), &mut verts))).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for (i, &(a, b)) in ends.iter().enumerate() {
        incident[a].push(i);
        if b != a {
            incident[b].push(i);
        }
    }
    let mut used = vec![false; pieces.len()];
    let mut chains = Vec::new();

    let walk = |start_piece: usize, from: usize, used: &mut Vec<bool>| -> Vec<CurvePiece> {
        let mut chain = Vec::new();
        let (mut cur, mut at) = (start_piece, from);
        loop {
            used[cur] = true;
            let (a, b) = ends[cur];
            let (piece, next_v) = if a == at { (pieces[cur], b) } else { (pieces[cur].reversed(), a) };
            chain.push(piece);
            if incident[next_v].len() != 2 {
                break;
            }
            match incident[next_v].iter().copied().find(|&j| !used[j]) {
                Some(j) => {
                    cur = j;
                    at = next_v;
                }
                None => break,
            }
        }
        chain
    };

    // open chains start at vertices of degree other than two
    for v in 0..verts.len() {
        if incident[v].len() == 2 {
            continue;
        }
        for k in 0..incident[v].len() {
            let p = incident[v][k];
            if !used[p] {
                chains.push(walk(p, v, &mut used));
            }
        }
    }
    // the rest are closed loops
    for p in 0..pieces.len() {
        if !used[p] {
            chains.push(walk(p, ends[p].0, &mut used));
        }
    }
    chains
}

/// Fuse consecutive collinear segments.
pub(crate) fn merge_collinear(chain: Vec<CurvePiece>) -> Vec<CurvePiece> {
    let mut out: Vec<CurvePiece> = Vec::with_capacity(chain.len());
    for p in chain {
        if let (Some(CurvePiece::Segment { a, b }), CurvePiece::Segment { a: c, b: d }) = (out.last().copied(), p) {
            let (u, v) = (b - a, d - c);
            if u.cross(v).abs() <= 1e-10 * u.norm() * v.norm() && u.dot(v) > 0.0 {
                *out.last_mut().unwrap() = CurvePiece::Segment { a, b: d };
                continue;
            }
        }
        out.push(p);
    }
    // a closed chain may also fuse across its seam
    if out.len() > 2 {
        if let (CurvePiece::Segment { a, b }, CurvePiece::Segment { a: c, b: d }) = (out[out.len() - 1], out[0]) {
            let (u, v) = (b - a, d - c);
            if b.dist(c) == 0.0 && u.cross(v).abs() <= 1e-10 * u.norm() * v.norm() && u.dot(v) > 0.0 {
                out[0] = CurvePiece::Segment { a, b: d };
                out.pop();
            }
        }
    }
    out
}

/// Turning direction inside a piece: +1 left, −1 right, 0 straight.
fn inner_turn(p: &CurvePiece) -> f64 {
    match p {
        CurvePiece::Segment { .. } => 0.0,
        CurvePiece::Arc(e) => (e.t1 - e.t0).signum(),
    }
}

fn joint_turn(a: &CurvePiece, b: &CurvePiece) -> f64 {
    let (u, v) = (a.tangent(1.0), b.tangent(0.0));
    let c = u.cross(v);
    if c.abs() <= 1e-9 * u.norm() * v.norm() {
        0.0
    } else {
        c.signum()
    }
}

/// Whether every turn along the chain goes the same way.
pub(crate) fn is_convex_chain(chain: &[CurvePiece]) -> bool {
    split_convex(chain.to_vec()).len() <= 1
}

/// Split a chain wherever its turning direction flips.
pub(crate) fn split_convex(chain: Vec<CurvePiece>) -> Vec<Vec<CurvePiece>> {
    let mut out: Vec<Vec<CurvePiece>> = Vec::new();
    let mut cur: Vec<CurvePiece> = Vec::new();
    let mut sign = 0.0;
    for p in chain {
        let mut s_joint = 0.0;
        if let Some(prev) = cur.last() {
            s_joint = joint_turn(prev, &p);
        }
        let s_in = inner_turn(&p);
        let conflict = (s_joint != 0.0 && sign != 0.0 && s_joint != sign)
            || (s_in != 0.0 && (sign != 0.0 && s_in != sign || s_joint != 0.0 && s_in != s_joint));
        if conflict && !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
            sign = 0.0;
        } else if s_joint != 0.0 {
            sign = s_joint;
        }
        if s_in != 0.0 {
            sign = s_in;
        }
        cur.push(p);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> CurvePiece {
        CurvePiece::Segment { a: Point::new(a.0, a.1), b: Point::new(b.0, b.1) }
    }

    #[test]
    fn chains_reversed_pieces() {
        let ps = vec![seg((1.0, 0.0), (2.0, 1.0)), seg((0.0, 0.0), (1.0, 0.0)), seg((5.0, 5.0), (6.0, 5.0))];
        let ch = chain_pieces(&ps, 1e-9);
        assert_eq!(ch.len(), 2);
        assert_eq!(ch[0].len() + ch[1].len(), 3);
        let long = ch.iter().find(|c| c.len() == 2).unwrap();
        assert_eq!(long[0].end(), long[1].start());
    }

    #[test]
    fn closed_loop() {
        let ps = vec![seg((0.0, 0.0), (1.0, 0.0)), seg((1.0, 0.0), (0.0, 1.0)), seg((0.0, 1.0), (0.0, 0.0))];
        let ch = chain_pieces(&ps, 1e-9);
        assert_eq!(ch.len(), 1);
        assert_eq!(ch[0].len(), 3);
        assert!(is_convex_chain(&ch[0]));
    }

    #[test]
    fn merges_and_splits() {
        let m = merge_collinear(vec![seg((0.0, 0.0), (1.0, 0.0)), seg((1.0, 0.0), (2.0, 0.0)), seg((2.0, 0.0), (2.0, 1.0))]);
        assert_eq!(m.len(), 2);
        // zigzag: left then right
        let z = vec![seg((0.0, 0.0), (1.0, 0.0)), seg((1.0, 0.0), (1.0, 1.0)), seg((1.0, 1.0), (2.0, 1.0))];
        assert!(!is_convex_chain(&z));
        assert_eq!(split_convex(z).len(), 2);
    }
}
