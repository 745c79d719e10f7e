//! Seeded instance generators for tests and experiment sweeps. Everything
//! here is deterministic given the RNG state; coordinates come out as exact
//! integers so the downstream predicates stay cheap.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coord::Coord;
use crate::geometry::{AxisBox, Point};
use crate::graph::{BoxFamily, Graph, IncidenceConfig};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` boxes in `[0, range]^d` with integer corners.
pub fn random_box_family(rng: &mut ChaCha8Rng, n: usize, d: usize, range: i64) -> BoxFamily {
    let boxes = (0..n)
        .map(|_| {
            let mut lo = Vec::with_capacity(d);
            let mut hi = Vec::with_capacity(d);
            for _ in 0..d {
                let a = rng.random_range(0..=range);
                let b = rng.random_range(0..=range);
                lo.push(a.min(b));
                hi.push(a.max(b));
            }
            AxisBox::from_ints(&lo, &hi)
        })
        .collect();
    BoxFamily::new(d, boxes).expect("uniform dimension")
}

/// `n` boxes with side lengths at most `max_side`; small sides keep the
/// intersection graph sparse enough that K_{t,t}-free families occur.
pub fn random_thin_box_family(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    range: i64,
    max_side: i64,
) -> BoxFamily {
    let boxes = (0..n)
        .map(|_| {
            let mut lo = Vec::with_capacity(d);
            let mut hi = Vec::with_capacity(d);
            for _ in 0..d {
                let a = rng.random_range(0..=range);
                lo.push(a);
                hi.push(a + rng.random_range(0..=max_side));
            }
            AxisBox::from_ints(&lo, &hi)
        })
        .collect();
    BoxFamily::new(d, boxes).expect("uniform dimension")
}

/// `n` points with pairwise distinct integer coordinates on every axis
/// (general position), drawn from `0..4n` per axis.
pub fn random_points_distinct(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Point> {
    let per_axis: Vec<Vec<i64>> = (0..d)
        .map(|_| {
            let mut pool: Vec<i64> = (0..4 * n.max(1) as i64).collect();
            pool.shuffle(rng);
            pool.truncate(n);
            pool
        })
        .collect();
    (0..n)
        .map(|i| {
            let coords: Vec<i64> = (0..d).map(|axis| per_axis[axis][i]).collect();
            Point::from_ints(&coords)
        })
        .collect()
}

/// `n` points from a small integer grid, so coordinate ties are common.
pub fn random_points_with_ties(rng: &mut ChaCha8Rng, n: usize, d: usize, range: i64) -> Vec<Point> {
    (0..n)
        .map(|_| {
            let coords: Vec<i64> = (0..d).map(|_| rng.random_range(0..=range)).collect();
            Point::from_ints(&coords)
        })
        .collect()
}

/// A random K_{2,2}-free graph built by inserting shuffled candidate edges
/// and skipping any insertion that would complete a K_{2,2}. A new edge
/// `uv` closes a K_{2,2} exactly when some neighbor `a` of `v` and `b` of
/// `u` are adjacent with `{u,a}` and `{v,b}` disjoint.
pub fn random_k22free_graph(rng: &mut ChaCha8Rng, n: usize, attempts: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    let mut g = Graph::new(n);
    for &(u, v) in pairs.iter().take(attempts.min(pairs.len())) {
        if !creates_k22(&g, u, v) {
            g.add_edge(u, v);
        }
    }
    g
}

fn creates_k22(g: &Graph, u: usize, v: usize) -> bool {
    // After adding uv, a K_{2,2} using it has sides {u, a} and {v, b} with
    // edges ub, av, ab already present.
    for a in g.neighbors(v) {
        if a == u {
            continue;
        }
        for b in g.neighbors(u) {
            if b == v || b == a {
                continue;
            }
            if g.has_edge(a, b) {
                return true;
            }
        }
    }
    false
}

/// Random nesting-free incidence configuration: points on odd coordinates
/// with all x and all y distinct, rectangles on even coordinates, any
/// strictly nested rectangle dropped. No point ever touches a rectangle
/// boundary (parity), so the configuration is ready for the 4-dimensional
/// realizer.
pub fn random_nesting_free_config(
    rng: &mut ChaCha8Rng,
    n_points: usize,
    n_rects: usize,
) -> IncidenceConfig {
    let span = 4 * (n_points + n_rects).max(1) as i64;
    let points = distinct_odd_points(rng, n_points, span);
    let mut rects: Vec<AxisBox> = Vec::new();
    let mut budget = 100 * n_rects.max(1);
    'outer: while rects.len() < n_rects {
        if budget == 0 {
            // Rejection stalled; place the rest far to the right where no
            // containment is possible.
            let k = rects.len() as i64;
            rects.push(AxisBox::from_ints(
                &[2 * span + 4 * k + 2, 0],
                &[2 * span + 4 * k + 4, 2],
            ));
            continue;
        }
        budget -= 1;
        let r = random_even_rect(rng, span);
        for existing in &rects {
            if existing.strictly_contains_box(&r) || r.strictly_contains_box(existing) {
                continue 'outer;
            }
        }
        rects.push(r);
    }
    IncidenceConfig::new(points, rects).expect("2d by construction")
}

/// Random configuration guaranteed to contain strictly nested rectangles,
/// each nested rectangle holding at most one point, ready for nesting
/// elimination.
pub fn random_nested_config(
    rng: &mut ChaCha8Rng,
    n_points: usize,
    n_rects: usize,
    n_nested: usize,
) -> IncidenceConfig {
    let base = random_nesting_free_config(rng, n_points, n_rects.max(1));
    let points = base.points;
    let mut rects = base.rects;
    let n_outer = rects.len();
    for _ in 0..n_nested {
        let host = rng.random_range(0..n_outer);
        let outer = rects[host].clone();
        // A point strictly inside the host, if any, anchors the inner rect.
        let anchor = points.iter().position(|p| {
            (0..2).all(|a| outer.lo().coord(a) < p.coord(a) && p.coord(a) < outer.hi().coord(a))
        });
        let quarter = Coord::ratio(1, 4);
        let inner = match anchor {
            Some(i) => {
                let p = &points[i];
                AxisBox::new(
                    Point::new(vec![p.coord(0) - &quarter, p.coord(1) - &quarter]).unwrap(),
                    Point::new(vec![p.coord(0) + &quarter, p.coord(1) + &quarter]).unwrap(),
                )
                .unwrap()
            }
            None => {
                // Tiny empty rectangle near the host's low corner.
                let eighth = Coord::ratio(1, 8);
                let lo0 = outer.lo().coord(0) + &eighth;
                let lo1 = outer.lo().coord(1) + &eighth;
                AxisBox::new(
                    Point::new(vec![lo0.clone(), lo1.clone()]).unwrap(),
                    Point::new(vec![&lo0 + &eighth, &lo1 + &eighth]).unwrap(),
                )
                .unwrap()
            }
        };
        if outer.strictly_contains_box(&inner) {
            rects.push(inner);
        }
    }
    IncidenceConfig::new(points, rects).expect("2d by construction")
}

fn distinct_odd_points(rng: &mut ChaCha8Rng, n: usize, span: i64) -> Vec<Point> {
    let mut xs: Vec<i64> = (0..span).map(|v| 2 * v + 1).collect();
    let mut ys = xs.clone();
    xs.shuffle(rng);
    ys.shuffle(rng);
    (0..n).map(|i| Point::from_ints(&[xs[i], ys[i]])).collect()
}

fn random_even_rect(rng: &mut ChaCha8Rng, span: i64) -> AxisBox {
    let mut corner = |max: i64| {
        let a = 2 * rng.random_range(0..=max);
        let b = 2 * rng.random_range(0..=max);
        (a.min(b), a.max(b).max(a.min(b) + 2))
    };
    let (x0, x1) = corner(span);
    let (y0, y1) = corner(span);
    AxisBox::from_ints(&[x0, y0], &[x1, y1])
}

/// A random instance of the divide-and-conquer precondition: points in
/// general position plus a graph with no t-matching whose spanned boxes
/// share a point, grown by rejecting offending candidate edges.
///
/// The membership test works on per-axis ranks, so instance construction is
/// pure integer arithmetic.
pub fn random_matching_free_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    t: usize,
    attempts: usize,
) -> (Vec<Point>, Graph) {
    assert!(t >= 2, "t = 1 admits no edges at all");
    let per_axis: Vec<Vec<i64>> = (0..d)
        .map(|_| {
            let mut pool: Vec<i64> = (0..4 * n.max(1) as i64).collect();
            pool.shuffle(rng);
            pool.truncate(n);
            pool
        })
        .collect();
    let coords: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..d).map(|axis| per_axis[axis][i]).collect())
        .collect();
    let points: Vec<Point> = coords.iter().map(|c| Point::from_ints(c)).collect();
    let mut g = Graph::new(n);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // Compatibility rows over accepted edges (disjoint + boxes intersect).
    let mut compat: Vec<Vec<u64>> = Vec::new();
    if n < 2 {
        return (points, g);
    }
    for _ in 0..attempts {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || g.has_edge(u, v) {
            continue;
        }
        let cand = (u.min(v), u.max(v));
        let words = (edges.len() + 1).div_ceil(64);
        let mut row = vec![0u64; words];
        let mut rejected = false;
        for (i, &e) in edges.iter().enumerate() {
            if edges_compatible(&coords, cand, e) {
                if t == 2 {
                    rejected = true;
                    break;
                }
                row[i / 64] |= 1 << (i % 64);
            }
        }
        if !rejected && t >= 3 {
            // Adding the edge makes a t-matching iff its compatibility
            // neighborhood contains a (t-1)-clique; only t <= 3 is used
            // here, so a single compatible pair is the test.
            'pairs: for i in 0..edges.len() {
                if row[i / 64] >> (i % 64) & 1 == 0 {
                    continue;
                }
                for j in i + 1..edges.len() {
                    if row[j / 64] >> (j % 64) & 1 == 1
                        && compat[i].get(j / 64).copied().unwrap_or(0) >> (j % 64) & 1 == 1
                    {
                        rejected = true;
                        break 'pairs;
                    }
                }
            }
        }
        if rejected {
            continue;
        }
        let idx = edges.len();
        for (i, r) in compat.iter_mut().enumerate() {
            if row[i / 64] >> (i % 64) & 1 == 1 {
                if r.len() < words {
                    r.resize(words, 0);
                }
                r[idx / 64] |= 1 << (idx % 64);
            }
        }
        compat.push(row);
        edges.push(cand);
        g.add_edge(cand.0, cand.1);
    }
    (points, g)
}

fn edges_compatible(coords: &[Vec<i64>], e1: (usize, usize), e2: (usize, usize)) -> bool {
    let (a, b) = e1;
    let (c, d) = e2;
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let dims = coords[0].len();
    (0..dims).all(|axis| {
        let (lo1, hi1) = minmax(coords[a][axis], coords[b][axis]);
        let (lo2, hi2) = minmax(coords[c][axis], coords[d][axis]);
        lo1 <= hi2 && lo2 <= hi1
    })
}

fn minmax(a: i64, b: i64) -> (i64, i64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forbidden::{find_ktt, matching_common_box};

    #[test]
    fn k22free_generator_is_free() {
        let mut rng = rng_from_seed(1);
        for _ in 0..20 {
            let g = random_k22free_graph(&mut rng, 25, 120);
            assert!(find_ktt(&g, 2).is_none());
        }
    }

    #[test]
    fn distinct_points_are_in_general_position() {
        let mut rng = rng_from_seed(2);
        let pts = random_points_distinct(&mut rng, 30, 3);
        for axis in 0..3 {
            for i in 0..30 {
                for j in i + 1..30 {
                    assert_ne!(pts[i].coord(axis), pts[j].coord(axis));
                }
            }
        }
    }

    #[test]
    fn matching_free_instances_verify() {
        let mut rng = rng_from_seed(3);
        for t in [2usize, 3] {
            for _ in 0..10 {
                let (pts, g) = random_matching_free_instance(&mut rng, 14, 2, t, 60);
                assert!(
                    matching_common_box(&pts, &g, t).is_none(),
                    "t={t} instance must satisfy its own precondition"
                );
            }
        }
    }

    #[test]
    fn nesting_free_configs_have_no_nesting() {
        let mut rng = rng_from_seed(4);
        let c = random_nesting_free_config(&mut rng, 10, 12);
        for (i, a) in c.rects.iter().enumerate() {
            for (j, b) in c.rects.iter().enumerate() {
                if i != j {
                    assert!(!a.strictly_contains_box(b));
                }
            }
        }
    }

    #[test]
    fn nested_configs_contain_nesting() {
        let mut rng = rng_from_seed(5);
        let c = random_nested_config(&mut rng, 8, 6, 3);
        let has_nesting = c.rects.iter().enumerate().any(|(i, a)| {
            c.rects
                .iter()
                .enumerate()
                .any(|(j, b)| i != j && a.strictly_contains_box(b))
        });
        assert!(has_nesting);
    }
}
