//! Exact primitives: points, closed axis-parallel boxes, spanned boxes and
//! the coordinatewise strict dominance order.
//!
//! Boxes are closed, so touching boxes intersect. All comparisons are exact.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::coord::Coord;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point must have at least one coordinate")]
    EmptyPoint,
    #[error("box corner order violated on axis {axis}: lo {lo} > hi {hi}")]
    CornerOrder { axis: usize, lo: Coord, hi: Coord },
}

/// A point in `ℝ^d` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<Coord>,
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<Coord>::deserialize(deserializer)?;
        Point::new(coords).map_err(D::Error::custom)
    }
}

impl Point {
    pub fn new(coords: Vec<Coord>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyPoint);
        }
        Ok(Point { coords })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| Coord::from_int(c)).collect()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, axis: usize) -> &Coord {
        &self.coords[axis]
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Coord> {
        self.coords
    }

    /// Drops the last coordinate (projection along the last axis).
    pub fn project_down(&self) -> Result<Point, GeometryError> {
        Point::new(self.coords[..self.coords.len() - 1].to_vec())
    }
}

/// Result of comparing two points in the dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// Strictly smaller in every coordinate.
    Less,
    /// Strictly greater in every coordinate.
    Greater,
    Equal,
    Incomparable,
}

/// `x ≺ y` iff `x_i < y_i` for every axis `i`.
pub fn dominance(x: &Point, y: &Point) -> Result<Dominance, GeometryError> {
    check_dims(x.dim(), y.dim())?;
    let mut all_lt = true;
    let mut all_gt = true;
    let mut all_eq = true;
    for i in 0..x.dim() {
        match x.coord(i).cmp(y.coord(i)) {
            std::cmp::Ordering::Less => {
                all_gt = false;
                all_eq = false;
            }
            std::cmp::Ordering::Greater => {
                all_lt = false;
                all_eq = false;
            }
            std::cmp::Ordering::Equal => {
                all_lt = false;
                all_gt = false;
            }
        }
    }
    Ok(if all_eq {
        Dominance::Equal
    } else if all_lt {
        Dominance::Less
    } else if all_gt {
        Dominance::Greater
    } else {
        Dominance::Incomparable
    })
}

/// True iff `x ≺ y` strictly.
pub fn strictly_below(x: &Point, y: &Point) -> bool {
    debug_assert_eq!(x.dim(), y.dim());
    (0..x.dim()).all(|i| x.coord(i) < y.coord(i))
}

/// A closed axis-parallel box given by its two corners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxisBox {
    lo: Point,
    hi: Point,
}

impl<'de> Deserialize<'de> for AxisBox {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Corners {
            lo: Point,
            hi: Point,
        }
        let c = Corners::deserialize(deserializer)?;
        AxisBox::new(c.lo, c.hi).map_err(D::Error::custom)
    }
}

impl AxisBox {
    pub fn new(lo: Point, hi: Point) -> Result<Self, GeometryError> {
        check_dims(lo.dim(), hi.dim())?;
        for axis in 0..lo.dim() {
            if lo.coord(axis) > hi.coord(axis) {
                return Err(GeometryError::CornerOrder {
                    axis,
                    lo: lo.coord(axis).clone(),
                    hi: hi.coord(axis).clone(),
                });
            }
        }
        Ok(AxisBox { lo, hi })
    }

    /// Axis-aligned box from integer corner coordinates, `[lo_i, hi_i]` per axis.
    pub fn from_ints(lo: &[i64], hi: &[i64]) -> Self {
        AxisBox::new(Point::from_ints(lo), Point::from_ints(hi)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn contains_point(&self, p: &Point) -> Result<bool, GeometryError> {
        check_dims(self.dim(), p.dim())?;
        Ok((0..self.dim())
            .all(|i| self.lo.coord(i) <= p.coord(i) && p.coord(i) <= self.hi.coord(i)))
    }

    /// Strict containment of `inner`'s corner pair: every face of `inner`
    /// lies in the open interior of `self`'s coordinate range.
    pub fn strictly_contains_box(&self, inner: &AxisBox) -> bool {
        debug_assert_eq!(self.dim(), inner.dim());
        (0..self.dim())
            .all(|i| self.lo.coord(i) < inner.lo.coord(i) && inner.hi.coord(i) < self.hi.coord(i))
    }

    /// Non-strict containment: `inner ⊆ self` as point sets.
    pub fn contains_box(&self, inner: &AxisBox) -> bool {
        debug_assert_eq!(self.dim(), inner.dim());
        (0..self.dim())
            .all(|i| self.lo.coord(i) <= inner.lo.coord(i) && inner.hi.coord(i) <= self.hi.coord(i))
    }
}

fn check_dims(a: usize, b: usize) -> Result<(), GeometryError> {
    if a != b {
        Err(GeometryError::DimensionMismatch(a, b))
    } else {
        Ok(())
    }
}

/// The box spanned by two points: `lo_i = min(x_i, y_i)`, `hi_i = max(x_i, y_i)`.
pub fn spanned_box(x: &Point, y: &Point) -> Result<AxisBox, GeometryError> {
    check_dims(x.dim(), y.dim())?;
    let mut lo = Vec::with_capacity(x.dim());
    let mut hi = Vec::with_capacity(x.dim());
    for i in 0..x.dim() {
        if x.coord(i) <= y.coord(i) {
            lo.push(x.coord(i).clone());
            hi.push(y.coord(i).clone());
        } else {
            lo.push(y.coord(i).clone());
            hi.push(x.coord(i).clone());
        }
    }
    Ok(AxisBox {
        lo: Point::new(lo)?,
        hi: Point::new(hi)?,
    })
}

/// Closed-interval overlap in every coordinate.
pub fn boxes_intersect(a: &AxisBox, b: &AxisBox) -> Result<bool, GeometryError> {
    check_dims(a.dim(), b.dim())?;
    Ok((0..a.dim()).all(|i| a.lo.coord(i) <= b.hi.coord(i) && b.lo.coord(i) <= a.hi.coord(i)))
}

/// A point common to all boxes, if one exists.
///
/// Axis-parallel boxes are products of intervals, so the intersection is the
/// product of per-axis intersections: nonempty iff `max lo_i ≤ min hi_i` on
/// every axis. The returned witness is the coordinatewise max of the lows.
pub fn common_point(boxes: &[&AxisBox]) -> Result<Option<Point>, GeometryError> {
    let first = match boxes.first() {
        Some(b) => b,
        None => return Ok(None),
    };
    let d = first.dim();
    for b in boxes {
        check_dims(d, b.dim())?;
    }
    let mut witness = Vec::with_capacity(d);
    for axis in 0..d {
        let mut lo = first.lo.coord(axis).clone();
        let mut hi = first.hi.coord(axis).clone();
        for b in &boxes[1..] {
            if *b.lo.coord(axis) > lo {
                lo = b.lo.coord(axis).clone();
            }
            if *b.hi.coord(axis) < hi {
                hi = b.hi.coord(axis).clone();
            }
        }
        if lo > hi {
            return Ok(None);
        }
        witness.push(lo);
    }
    Ok(Some(Point::new(witness)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(cs: &[i64]) -> Point {
        Point::from_ints(cs)
    }

    #[test]
    fn spanned_box_componentwise() {
        let b = spanned_box(&pt(&[0, 0]), &pt(&[2, 3])).unwrap();
        assert_eq!(b, AxisBox::from_ints(&[0, 0], &[2, 3]));

        let degenerate = spanned_box(&pt(&[1, 1]), &pt(&[1, 1])).unwrap();
        assert_eq!(degenerate, AxisBox::from_ints(&[1, 1], &[1, 1]));

        let b3 = spanned_box(&pt(&[5, 0, 2]), &pt(&[1, 4, 2])).unwrap();
        assert_eq!(b3, AxisBox::from_ints(&[1, 0, 2], &[5, 4, 2]));
    }

    #[test]
    fn spanned_box_dimension_mismatch() {
        assert_eq!(
            spanned_box(&pt(&[0]), &pt(&[0, 1])).unwrap_err(),
            GeometryError::DimensionMismatch(1, 2)
        );
    }

    #[test]
    fn closed_boxes_touching_intersect() {
        let a = AxisBox::from_ints(&[0, 0], &[1, 1]);
        let b = AxisBox::from_ints(&[1, 1], &[2, 2]);
        assert!(boxes_intersect(&a, &b).unwrap());

        let c = AxisBox::from_ints(&[2, 2], &[3, 3]);
        assert!(!boxes_intersect(&a, &c).unwrap());

        let wide = AxisBox::from_ints(&[0, 0], &[4, 1]);
        let tall = AxisBox::new(
            Point::new(vec![Coord::from_int(1), Coord::ratio(1, 2)]).unwrap(),
            Point::from_ints(&[2, 3]),
        )
        .unwrap();
        assert!(boxes_intersect(&wide, &tall).unwrap());
    }

    #[test]
    fn dominance_cases() {
        assert_eq!(
            dominance(&pt(&[0, 0]), &pt(&[1, 1])).unwrap(),
            Dominance::Less
        );
        assert_eq!(
            dominance(&pt(&[0, 2]), &pt(&[1, 1])).unwrap(),
            Dominance::Incomparable
        );
        assert_eq!(dominance(&pt(&[3]), &pt(&[3])).unwrap(), Dominance::Equal);
        assert_eq!(
            dominance(&pt(&[2, 2]), &pt(&[1, 1])).unwrap(),
            Dominance::Greater
        );
        // Ties in one coordinate break strictness.
        assert_eq!(
            dominance(&pt(&[0, 1]), &pt(&[0, 2])).unwrap(),
            Dominance::Incomparable
        );
    }

    #[test]
    fn less_iff_spans_corners() {
        let x = pt(&[0, 0]);
        let y = pt(&[1, 2]);
        let b = spanned_box(&x, &y).unwrap();
        assert_eq!(dominance(&x, &y).unwrap(), Dominance::Less);
        assert_eq!(b.lo(), &x);
        assert_eq!(b.hi(), &y);
    }

    #[test]
    fn common_point_of_boxes() {
        let a = AxisBox::from_ints(&[0, 0], &[2, 2]);
        let b = AxisBox::from_ints(&[1, 1], &[3, 3]);
        let w = common_point(&[&a, &b]).unwrap().unwrap();
        assert_eq!(w, pt(&[1, 1]));
        assert!(a.contains_point(&w).unwrap());
        assert!(b.contains_point(&w).unwrap());

        let c = AxisBox::from_ints(&[5, 5], &[6, 6]);
        assert!(common_point(&[&a, &b, &c]).unwrap().is_none());
    }

    #[test]
    fn box_corner_order_enforced() {
        assert!(AxisBox::new(pt(&[1]), pt(&[0])).is_err());
    }

    #[test]
    fn deserialization_validates_invariants() {
        assert!(serde_json::from_str::<AxisBox>(r#"{"lo":["1"],"hi":["0"]}"#).is_err());
        assert!(serde_json::from_str::<AxisBox>(r#"{"lo":["0"],"hi":["1","2"]}"#).is_err());
        assert!(serde_json::from_str::<Point>("[]").is_err());
        let ok: AxisBox = serde_json::from_str(r#"{"lo":["0","1/2"],"hi":["1","1"]}"#).unwrap();
        assert_eq!(ok.lo().coord(1), &Coord::ratio(1, 2));
    }
}
