use critplace::arrangement::Primitives;
use critplace::geom::ToleranceConfig;
use critplace::oracle::{dense_scan, is_epsilon_placement, verify};
use critplace::perimeter::ShapeKind;
use critplace::placement::{arrangement_for, build_placement_arrangement, Epsilon};
use critplace::{Line, Point};

fn lines() -> Vec<Line> {
    vec![
        Line::through(Point::new(0.0, 0.0), Point::new(1.0, 0.3)).unwrap(),
        Line::through(Point::new(0.2, -1.0), Point::new(-0.3, 1.5)).unwrap(),
        Line::through(Point::new(-1.0, 0.7), Point::new(1.4, 0.1)).unwrap(),
        Line::vertical(0.9),
    ]
}

fn check_samples_are_placements(shape: ShapeKind, eps: f64) {
    let prims = Primitives::Lines(lines());
    let (arr, frame) = arrangement_for(&prims, eps, ToleranceConfig::default()).unwrap();
    let pa = build_placement_arrangement(&arr, frame, Epsilon::new(shape, eps).unwrap(), shape, false).unwrap();
    assert!(!pa.curves.is_empty());
    let mut checked = 0;
    for c in &pa.curves {
        // endpoints may sit at a contact where the piece structure changes
        let interior = c.pieces.iter().flat_map(|pc| {
            let n = ((pc.length() / 0.05).ceil() as usize).max(1);
            (0..n).map(move |i| pc.at((i as f64 + 0.5) / n as f64))
        });
        for p in interior {
            if !frame.region.contains(p) {
                continue;
            }
            let (ok, _) = is_epsilon_placement(p, &prims, shape, eps, 1e-6);
            assert!(ok, "{shape:?} sample {p:?} of cell {} vector {:?} is not a placement", c.cell, c.vector);
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn square_curve_samples_are_placements() {
    check_samples_are_placements(ShapeKind::Square, 0.5);
    check_samples_are_placements(ShapeKind::Square, 0.3);
}

#[test]
fn circle_curve_samples_are_placements() {
    check_samples_are_placements(ShapeKind::Circle, 0.5);
}

fn scan_agrees(shape: ShapeKind, eps: f64) {
    let prims = Primitives::Lines(lines());
    let (arr, frame) = arrangement_for(&prims, eps, ToleranceConfig::default()).unwrap();
    let pa = build_placement_arrangement(&arr, frame, Epsilon::new(shape, eps).unwrap(), shape, false).unwrap();
    let res = eps / 20.0;
    let scan = dense_scan(&prims, shape, eps, frame.region, res);
    let report = verify(&pa.curves, &scan, res, 2.0 * res, frame.region);
    assert!(
        report.is_empty(),
        "missed {} (e.g. {:?}), unsupported {} (e.g. {:?})",
        report.missed_scan_points.len(),
        report.missed_scan_points.first(),
        report.unsupported_curve_samples.len(),
        report.unsupported_curve_samples.first()
    );
}

#[test]
fn square_scan_agrees_with_curves() {
    scan_agrees(ShapeKind::Square, 0.5);
}

#[test]
fn circle_scan_agrees_with_curves() {
    scan_agrees(ShapeKind::Circle, 0.5);
}
