//! Versioned JSON result documents with every float rounded to 12
//! significant digits, so equal inputs give byte-identical files.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::junctions::{JunctionKind, SignificanceGrid, TopK};
use crate::perimeter::ShapeKind;
use crate::placement::{CriticalCurve, DegenerateRegion, OverlayCounts, PlacementArrangement};
use crate::{Error, Point, Rect, Result, Segment};

use super::round_sig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<PlacementResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub junctions: Option<JunctionResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementResult {
    pub shape: ShapeKind,
    pub eps: f64,
    pub include_line_translates: bool,
    /// Curves are complete inside `region`; `clip` bounds the computation.
    pub region: Rect,
    pub clip: Rect,
    pub counts: OverlayCounts,
    pub curves: Vec<CriticalCurve>,
    pub line_translates: Vec<Segment>,
    pub degenerate: Vec<DegenerateRegion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopEntry {
    pub row: usize,
    pub col: usize,
    pub point: Point,
    pub significance: f64,
    pub kind: JunctionKind,
    pub clusters: usize,
    pub group_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JunctionResult {
    pub eps: f64,
    pub spacing: f64,
    pub bbox: Rect,
    pub rows: usize,
    pub cols: usize,
    /// One row per grid row, bottom to top.
    pub significance: Vec<Vec<f64>>,
    pub top_k: Vec<TopEntry>,
    pub fewer_than_k: bool,
}

impl PlacementResult {
    pub fn new(pa: &PlacementArrangement, include_line_translates: bool) -> Self {
        PlacementResult {
            shape: pa.shape,
            eps: pa.eps,
            include_line_translates,
            region: pa.frame.region,
            clip: pa.frame.clip,
            counts: pa.counts.clone(),
            curves: pa.curves.clone(),
            line_translates: pa.line_translates.clone(),
            degenerate: pa.degenerate.clone(),
        }
    }
}

impl JunctionResult {
    pub fn new(eps: f64, grid: &SignificanceGrid, top: &TopK) -> Self {
        let sig = grid.significance();
        JunctionResult {
            eps,
            spacing: grid.spacing,
            bbox: grid.bbox,
            rows: grid.rows,
            cols: grid.cols,
            significance: sig.chunks(grid.cols.max(1)).map(<[f64]>::to_vec).collect(),
            top_k: top
                .junctions
                .iter()
                .map(|j| TopEntry {
                    row: j.row,
                    col: j.col,
                    point: j.point,
                    significance: j.assessment.significance,
                    kind: j.assessment.kind,
                    clusters: j.assessment.clusters.len(),
                    group_size: j.group_size,
                })
                .collect(),
            fewer_than_k: top.fewer_than_k,
        }
    }
}

fn round_value(v: &mut Value) -> Result<()> {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            *v = serde_json::Number::from_f64(round_sig(x))
                .map(Value::Number)
                .ok_or_else(|| Error::InvalidParameter("non-finite number in result".into()))?;
        }
        // serde_json writes NaN and infinities as null
        Value::Null => return Err(Error::InvalidParameter("non-finite number in result".into())),
        Value::Array(a) => a.iter_mut().try_for_each(round_value)?,
        Value::Object(o) => o.values_mut().try_for_each(round_value)?,
        _ => {}
    }
    Ok(())
}

impl ResultFile {
    pub fn new(placement: Option<PlacementResult>, junctions: Option<JunctionResult>) -> Self {
        ResultFile { schema_version: SCHEMA_VERSION, placement, junctions }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        round_value(&mut v)?;
        let mut s = serde_json::to_string_pretty(&v)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: ResultFile = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Unsupported(format!("schema version {} (expected {SCHEMA_VERSION})", r.schema_version)));
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Primitives;
    use crate::geom::ToleranceConfig;
    use crate::placement::{arrangement_for, build_placement_arrangement, Epsilon};
    use crate::Line;

    fn sample() -> ResultFile {
        let prims = Primitives::Lines(vec![
            Line::through(Point::new(0.0, 0.0), Point::new(1.0, 0.3)).unwrap(),
            Line::vertical(0.4),
            Line::through(Point::new(-1.0, 0.7), Point::new(1.4, 0.1)).unwrap(),
        ]);
        let (arr, frame) = arrangement_for(&prims, 0.5, ToleranceConfig::default()).unwrap();
        let pa = build_placement_arrangement(&arr, frame, Epsilon::new(ShapeKind::Circle, 0.5).unwrap(), ShapeKind::Circle, false)
            .unwrap();
        ResultFile::new(Some(PlacementResult::new(&pa, false)), None)
    }

    #[test]
    fn json_round_trip_is_stable() {
        let r = sample();
        let text = r.to_json().unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"type\": \"arc\""));
        let back = ResultFile::from_json(&text).unwrap();
        assert_eq!(back.placement.as_ref().unwrap().curves.len(), r.placement.as_ref().unwrap().curves.len());
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(sample().to_json().unwrap(), text);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(ResultFile::from_json("{\"schema_version\": 99}").is_err());
        assert!(ResultFile::from_json("not json").is_err());
        let mut r = sample();
        r.placement.as_mut().unwrap().eps = f64::NAN;
        assert!(r.to_json().is_err());
    }
}
