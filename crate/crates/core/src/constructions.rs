//! Explicit generators: the 3D box lifting of planar incidence
//! configurations, a skew-lines family in `ℝ³` built over an extremal
//! point-line incidence grid, and a dyadic K_{2,2}-free incidence generator.

use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::forbidden::{find_ktt, KttWitness};
use crate::geometry::{AxisBox, Point};
use crate::graph::{incidence_graph, BoxFamily, Graph, IncidenceConfig};

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("points {0} and {1} coincide; their lifted boxes could not be disjoint")]
    DuplicatePoint(usize, usize),
    #[error("dyadic generator produced a K_{{2,2}}: {0:?}")]
    GeneratorBroken(KttWitness),
}

/// `n` pairwise disjoint closed intervals in `[0, 1)`: the j-th is
/// `[j/n, j/n + 1/(2n)]`, leaving gaps of width `1/(2n)`.
pub fn z_slabs(n: usize) -> Vec<(Coord, Coord)> {
    assert!(n >= 1);
    let n_i = n as i64;
    (0..n_i)
        .map(|j| {
            let lo = Coord::ratio(j, n_i);
            let hi = Coord::ratio(2 * j + 1, 2 * n_i);
            (lo, hi)
        })
        .collect()
}

/// Lifts a planar incidence configuration to boxes in `ℝ³` whose
/// intersection graph equals the incidence graph on the same vertex order
/// (points first, then rectangles).
///
/// Point `i` becomes a small square around it times `[0,1]`; rectangle `j`
/// becomes the rectangle times the j-th z-slab. The square half-side is
/// half the smallest of: the L∞ distance from any point to any rectangle
/// not containing it, and half the L∞ distance between any two points. That
/// makes square/rectangle overlaps mirror incidences exactly and keeps the
/// point boxes pairwise disjoint; the slabs keep rectangle boxes pairwise
/// disjoint.
pub fn lift_incidence_to_boxes3d(config: &IncidenceConfig) -> Result<BoxFamily, ConstructionError> {
    let np = config.points.len();
    let nr = config.rects.len();
    for i in 0..np {
        for j in i + 1..np {
            if config.points[i] == config.points[j] {
                return Err(ConstructionError::DuplicatePoint(i, j));
            }
        }
    }

    let mut tightest: Option<Coord> = None;
    let mut shrink = |v: Coord| {
        if tightest.as_ref().is_none_or(|t| v < *t) {
            tightest = Some(v);
        }
    };
    for (i, p) in config.points.iter().enumerate() {
        for q in config.points.iter().skip(i + 1) {
            shrink(linf_point_distance(p, q).half());
        }
        for r in &config.rects {
            if !r.contains_point(p).expect("2d config") {
                shrink(linf_point_rect_distance(p, r));
            }
        }
    }
    let half_side = tightest
        .map(|t| t.half())
        .unwrap_or_else(|| Coord::ratio(1, 2));

    let mut boxes = Vec::with_capacity(np + nr);
    let zero = Coord::zero();
    let one = Coord::one();
    for p in &config.points {
        let lo = Point::new(vec![
            p.coord(0) - &half_side,
            p.coord(1) - &half_side,
            zero.clone(),
        ])
        .expect("3d");
        let hi = Point::new(vec![
            p.coord(0) + &half_side,
            p.coord(1) + &half_side,
            one.clone(),
        ])
        .expect("3d");
        boxes.push(AxisBox::new(lo, hi).expect("ordered corners"));
    }
    if nr > 0 {
        let slabs = z_slabs(nr);
        for (r, (zlo, zhi)) in config.rects.iter().zip(slabs) {
            let lo = Point::new(vec![r.lo().coord(0).clone(), r.lo().coord(1).clone(), zlo])
                .expect("3d");
            let hi = Point::new(vec![r.hi().coord(0).clone(), r.hi().coord(1).clone(), zhi])
                .expect("3d");
            boxes.push(AxisBox::new(lo, hi).expect("ordered corners"));
        }
    }
    Ok(BoxFamily::new(3, boxes).expect("uniform dimension"))
}

fn linf_point_distance(p: &Point, q: &Point) -> Coord {
    (0..p.dim())
        .map(|a| (p.coord(a) - q.coord(a)).abs())
        .max()
        .expect("d >= 1")
}

/// L∞ distance from a point to a closed rectangle (positive iff outside).
fn linf_point_rect_distance(p: &Point, r: &AxisBox) -> Coord {
    (0..p.dim())
        .map(|a| {
            let c = p.coord(a);
            if c < r.lo().coord(a) {
                r.lo().coord(a) - c
            } else if c > r.hi().coord(a) {
                c - r.hi().coord(a)
            } else {
                Coord::zero()
            }
        })
        .max()
        .expect("d >= 1")
}

/// A line in `ℝ³` through `point` with direction `dir`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line3 {
    pub point: Point,
    pub dir: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineConfig3D {
    pub lines: Vec<Line3>,
}

/// Exact intersection point of two lines in `ℝ³`, if any. Parallel,
/// coincident-infinite or skew pairs return `None` (a coincident pair never
/// occurs in the generated families and is rejected as non-transversal).
pub fn lines3d_intersection(a: &Line3, b: &Line3) -> Option<Point> {
    // Solve a.point + s * a.dir = b.point + t * b.dir over the rationals.
    let d = 3;
    let diff: Vec<Coord> = (0..d)
        .map(|i| b.point.coord(i) - a.point.coord(i))
        .collect();
    // Find two axes with an invertible 2x2 system.
    for i in 0..d {
        for j in i + 1..d {
            let det = &(a.dir.coord(i) * &-b.dir.coord(j)) - &(a.dir.coord(j) * &-b.dir.coord(i));
            if det.is_zero() {
                continue;
            }
            let s = &(&(&diff[i] * &-b.dir.coord(j)) - &(&diff[j] * &-b.dir.coord(i))) / &det;
            let t = &(&(a.dir.coord(i) * &diff[j]) - &(a.dir.coord(j) * &diff[i])) / &det;
            // Verify the remaining axis.
            let ok = (0..d).all(|k| {
                a.point.coord(k) + &(&s * a.dir.coord(k))
                    == b.point.coord(k) + &(&t * b.dir.coord(k))
            });
            if !ok {
                return None;
            }
            let coords = (0..d)
                .map(|k| a.point.coord(k) + &(&s * a.dir.coord(k)))
                .collect();
            return Some(Point::new(coords).expect("3d"));
        }
    }
    None
}

/// The classical extremal incidence grid lifted to skew lines in `ℝ³`.
///
/// Plane configuration: points `{1..k} x {1..2k^2}`, lines `y = m x + b` for
/// `m in {1..k}`, `b in {1..k^2}`; every line meets exactly `k` grid points,
/// giving `k^4` incidences on `3 k^3` objects. Each grid point lifts to a
/// vertical line, each plane line to a horizontal line at its own height, so
/// intersections in space are exactly the plane incidences and the graph is
/// K_{2,2}-free. Vertex order: points (x-major) then lines (m-major).
pub fn lines3d_generator(k: usize) -> (LineConfig3D, Graph) {
    assert!(k >= 1);
    let k_i = k as i64;
    let rows = 2 * k_i * k_i;
    let n_points = (k_i * rows) as usize;
    let n_lines = (k_i * k_i * k_i) as usize;

    let mut lines = Vec::with_capacity(n_points + n_lines);
    for x in 1..=k_i {
        for y in 1..=rows {
            lines.push(Line3 {
                point: Point::from_ints(&[x, y, 0]),
                dir: Point::from_ints(&[0, 0, 1]),
            });
        }
    }
    let mut g = Graph::new(n_points + n_lines);
    let point_index = |x: i64, y: i64| ((x - 1) * rows + (y - 1)) as usize;
    let mut line_idx = n_points;
    for m in 1..=k_i {
        for b in 1..=k_i * k_i {
            let height = (line_idx - n_points + 1) as i64;
            lines.push(Line3 {
                point: Point::from_ints(&[0, b, height]),
                dir: Point::from_ints(&[1, m, 0]),
            });
            for x in 1..=k_i {
                let y = m * x + b;
                debug_assert!(y >= 1 && y <= rows);
                g.add_edge(point_index(x, y), line_idx);
            }
            line_idx += 1;
        }
    }
    (LineConfig3D { lines }, g)
}

/// Dyadic K_{2,2}-free incidence generator.
///
/// Points are the bit-reversal permutation of `{0..2^m}`, placed at odd
/// coordinates `(2i+1, 2 rev_m(i)+1)`; rectangles are all dyadic blocks of
/// area `2^(m+1)` (side lengths `2^l x 2^(m+1-l)` for `l = 1..m`, doubled).
/// Every rectangle contains exactly two points, and two points share a
/// rectangle only when their indices differ in exactly one bit, in which
/// case the rectangle is unique — so no two rectangles share two points and
/// the incidence graph is K_{2,2}-free, with `m 2^m` edges on
/// `(m+2) 2^(m-1)` vertices. The freeness is re-verified exactly on every
/// call; a failure is a generator bug, not an input property.
pub fn dyadic_k22free_generator(m: usize) -> Result<IncidenceConfig, ConstructionError> {
    assert!(m >= 1, "scale parameter must be positive");
    assert!(m <= 24, "2^m points will not fit in memory");
    let size = 1usize << m;
    let rev = |i: usize| -> usize { (i as u32).reverse_bits() as usize >> (32 - m) };

    let points: Vec<Point> = (0..size)
        .map(|i| Point::from_ints(&[(2 * i + 1) as i64, (2 * rev(i) + 1) as i64]))
        .collect();

    let mut rects = Vec::new();
    for lx in 1..=m {
        let ly = m + 1 - lx;
        if ly > m {
            continue;
        }
        let wx = 1usize << lx;
        let wy = 1usize << ly;
        for bx in 0..size / wx {
            for by in 0..size / wy {
                rects.push(AxisBox::from_ints(
                    &[(2 * bx * wx) as i64, (2 * by * wy) as i64],
                    &[(2 * (bx + 1) * wx) as i64, (2 * (by + 1) * wy) as i64],
                ));
            }
        }
    }

    let config = IncidenceConfig::new(points, rects).expect("2d by construction");
    let graph = incidence_graph(&config);
    if let Some(w) = find_ktt(&graph, 2) {
        return Err(ConstructionError::GeneratorBroken(w));
    }
    Ok(config)
}
