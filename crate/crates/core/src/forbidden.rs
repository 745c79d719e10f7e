//! Exact detection of K_{t,t} subgraphs and of t-matchings whose spanned
//! boxes share a common point.
//!
//! K_{t,t} is detected as a subgraph with two disjoint t-sets of vertices and
//! all cross pairs adjacent; the sides need not respect any bipartition and
//! need not be independent.

use serde::{Deserialize, Serialize};

use crate::geometry::{common_point, spanned_box, AxisBox, Point};
use crate::graph::Graph;
use crate::poset::dominance_comparability_graph;

#[derive(Debug, thiserror::Error)]
pub enum ForbiddenError {
    #[error("graph has {graph} vertices but {points} points were given")]
    VertexPointMismatch { graph: usize, points: usize },
    #[error("graph is not the dominance comparability graph of the given points")]
    NotComparabilityGraph,
    #[error(
        "logic violation: a {t}-matching with a common box point exists but no K_{{{t},{t}}} was found"
    )]
    LogicViolation { t: usize },
}

/// Two disjoint vertex sets with every cross pair adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KttWitness {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl KttWitness {
    pub fn verify(&self, g: &Graph) -> bool {
        if self.left.len() != self.right.len() || self.left.is_empty() {
            return false;
        }
        if self.left.iter().any(|v| self.right.contains(v)) {
            return false;
        }
        self.left
            .iter()
            .all(|&u| self.right.iter().all(|&v| g.has_edge(u, v)))
    }
}

/// Pairwise vertex-disjoint edges whose spanned boxes share `common`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingWitness {
    pub pairs: Vec<(usize, usize)>,
    pub common: Point,
}

impl MatchingWitness {
    pub fn verify(&self, points: &[Point], g: &Graph) -> bool {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.pairs {
            if !g.has_edge(u, v) || !seen.insert(u) || !seen.insert(v) {
                return false;
            }
            let b = match spanned_box(&points[u], &points[v]) {
                Ok(b) => b,
                Err(_) => return false,
            };
            match b.contains_point(&self.common) {
                Ok(true) => {}
                _ => return false,
            }
        }
        !self.pairs.is_empty()
    }
}

/// Finds a K_{t,t} subgraph with disjoint sides, if one exists.
///
/// Left sides are enumerated as t-subsets of the vertices ordered by
/// descending degree (index as tie-break); the running bitset intersection
/// of their neighborhoods prunes branches below t candidates. The first
/// witness in this enumeration order is returned.
pub fn find_ktt(g: &Graph, t: usize) -> Option<KttWitness> {
    assert!(t >= 1, "t must be positive");
    let n = g.n();
    let mut candidates: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= t).collect();
    if candidates.len() < 2 * t {
        return None;
    }
    candidates.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let words = n.div_ceil(64);
    // scratch[k] holds the AND of the rows of the first k+1 chosen vertices.
    let mut scratch = vec![vec![0u64; words]; t];
    let mut chosen: Vec<usize> = Vec::with_capacity(t);
    dfs_ktt(g, t, &candidates, 0, &mut chosen, &mut scratch)
}

fn dfs_ktt(
    g: &Graph,
    t: usize,
    candidates: &[usize],
    from: usize,
    chosen: &mut Vec<usize>,
    scratch: &mut [Vec<u64>],
) -> Option<KttWitness> {
    if chosen.len() == t {
        let common = &scratch[t - 1];
        let mut right = Vec::with_capacity(t);
        for v in crate::graph::BitIter::new(common) {
            if !chosen.contains(&v) {
                right.push(v);
                if right.len() == t {
                    let mut left = chosen.clone();
                    left.sort_unstable();
                    return Some(KttWitness { left, right });
                }
            }
        }
        return None;
    }
    let level = chosen.len();
    let remaining = t - chosen.len();
    for (pos, &v) in candidates.iter().enumerate().skip(from) {
        if candidates.len() - pos < remaining {
            break;
        }
        let row = g.row(v);
        let mut live = 0usize;
        if level == 0 {
            let dst = &mut scratch[0];
            for (w, r) in dst.iter_mut().zip(row) {
                *w = *r;
                live += w.count_ones() as usize;
            }
        } else {
            let (prev, rest) = scratch.split_at_mut(level);
            let src = &prev[level - 1];
            let dst = &mut rest[0];
            for ((w, p), r) in dst.iter_mut().zip(src).zip(row) {
                *w = p & r;
                live += w.count_ones() as usize;
            }
        }
        // Even before excluding the left side itself, fewer than t common
        // neighbors can never host the right side.
        if live < t {
            continue;
        }
        chosen.push(v);
        if let Some(w) = dfs_ktt(g, t, candidates, pos + 1, chosen, scratch) {
            return Some(w);
        }
        chosen.pop();
    }
    None
}

/// Finds `t` pairwise vertex-disjoint edges of `g` whose spanned boxes share
/// a point. Decided exactly: a set of axis-parallel boxes has a common point
/// iff on every axis the max of the lows is at most the min of the highs,
/// and pairwise intersection already implies a common point (Helly property
/// of interval products), so the search looks for a t-clique in the edge
/// compatibility relation (vertex-disjoint + boxes intersect).
pub fn matching_common_box(points: &[Point], g: &Graph, t: usize) -> Option<MatchingWitness> {
    assert!(t >= 1, "t must be positive");
    assert_eq!(
        g.n(),
        points.len(),
        "graph vertices must correspond to points"
    );
    let edges = g.edges();
    let m = edges.len();
    if m < t {
        return None;
    }
    let boxes: Vec<AxisBox> = edges
        .iter()
        .map(|&(u, v)| spanned_box(&points[u], &points[v]).expect("uniform dimension"))
        .collect();

    if t == 1 {
        let b = &boxes[0];
        return Some(MatchingWitness {
            pairs: vec![edges[0]],
            common: b.lo().clone(),
        });
    }

    let compatible = |i: usize, j: usize| -> bool {
        let (a, b) = edges[i];
        let (c, d) = edges[j];
        a != c
            && a != d
            && b != c
            && b != d
            && crate::geometry::boxes_intersect(&boxes[i], &boxes[j]).expect("uniform dimension")
    };

    if t == 2 {
        for i in 0..m {
            for j in i + 1..m {
                if compatible(i, j) {
                    return Some(build_matching_witness(&edges, &boxes, &[i, j]));
                }
            }
        }
        return None;
    }

    // t >= 3: explicit compatibility bitmatrix, then lexicographic t-clique DFS.
    let words = m.div_ceil(64);
    let mut rows = vec![0u64; m * words];
    for i in 0..m {
        for j in i + 1..m {
            if compatible(i, j) {
                rows[i * words + j / 64] |= 1 << (j % 64);
                rows[j * words + i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut clique = Vec::with_capacity(t);
    let mut cand = vec![vec![0u64; words]; t];
    fn dfs(
        m: usize,
        t: usize,
        words: usize,
        rows: &[u64],
        from: usize,
        clique: &mut Vec<usize>,
        cand: &mut [Vec<u64>],
    ) -> Option<Vec<usize>> {
        if clique.len() == t {
            return Some(clique.clone());
        }
        let level = clique.len();
        for i in from..m {
            if level > 0 && cand[level - 1][i / 64] >> (i % 64) & 1 == 0 {
                continue;
            }
            let row = &rows[i * words..(i + 1) * words];
            if level == 0 {
                cand[0].copy_from_slice(row);
            } else {
                let (prev, rest) = cand.split_at_mut(level);
                for ((w, p), r) in rest[0].iter_mut().zip(&prev[level - 1]).zip(row) {
                    *w = p & r;
                }
            }
            clique.push(i);
            if let Some(res) = dfs(m, t, words, rows, i + 1, clique, cand) {
                return Some(res);
            }
            clique.pop();
        }
        None
    }
    dfs(m, t, words, &rows, 0, &mut clique, &mut cand)
        .map(|idx| build_matching_witness(&edges, &boxes, &idx))
}

fn build_matching_witness(
    edges: &[(usize, usize)],
    boxes: &[AxisBox],
    idx: &[usize],
) -> MatchingWitness {
    let chosen: Vec<&AxisBox> = idx.iter().map(|&i| &boxes[i]).collect();
    let common = common_point(&chosen)
        .expect("uniform dimension")
        .expect("pairwise intersecting boxes must share a point");
    MatchingWitness {
        pairs: idx.iter().map(|&i| edges[i]).collect(),
        common,
    }
}

/// Outcome of checking the implication "matching with common box ⇒ K_{t,t}"
/// on a dominance comparability graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub matching: Option<MatchingWitness>,
    pub ktt: Option<KttWitness>,
    /// All per-axis coordinates pairwise distinct. The implication is a
    /// theorem only in this case: with ties, two closed spanned boxes can
    /// touch while the tied cross pairs stay incomparable.
    pub general_position: bool,
}

/// Runs both searches on the dominance comparability graph of `points` and
/// checks that a matching witness forces a K_{t,t} witness. Errors if `g`
/// is not that comparability graph, or if the implication fails on a
/// general-position point set (which would indicate a broken search, not a
/// property of the input). On tied inputs a missing K_{t,t} is reported,
/// not an error.
pub fn ktt_implies_matching_check(
    points: &[Point],
    g: &Graph,
    t: usize,
) -> Result<ImplicationReport, ForbiddenError> {
    if g.n() != points.len() {
        return Err(ForbiddenError::VertexPointMismatch {
            graph: g.n(),
            points: points.len(),
        });
    }
    let expected = dominance_comparability_graph(points);
    if &expected != g {
        return Err(ForbiddenError::NotComparabilityGraph);
    }
    let general_position = in_general_position(points);
    let matching = matching_common_box(points, g, t);
    let ktt = find_ktt(g, t);
    if general_position && matching.is_some() && ktt.is_none() {
        return Err(ForbiddenError::LogicViolation { t });
    }
    Ok(ImplicationReport {
        matching,
        ktt,
        general_position,
    })
}

/// No two points share a coordinate value on any axis.
pub fn in_general_position(points: &[Point]) -> bool {
    let d = match points.first() {
        Some(p) => p.dim(),
        None => return true,
    };
    for axis in 0..d {
        let mut values: Vec<_> = points.iter().map(|p| p.coord(axis)).collect();
        values.sort();
        if values.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::Coord;
    use crate::geometry::{dominance, Dominance};

    #[test]
    fn c4_contains_k22() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let w = find_ktt(&c4, 2).expect("C4 is K_{2,2}");
        assert!(w.verify(&c4));
    }

    #[test]
    fn star_has_no_k22() {
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        assert!(find_ktt(&star, 2).is_none());
    }

    #[test]
    fn k11_is_an_edge() {
        let g = Graph::from_edges(3, &[(1, 2)]);
        let w = find_ktt(&g, 1).unwrap();
        assert!(w.verify(&g));
        assert!(find_ktt(&Graph::new(3), 1).is_none());
    }

    #[test]
    fn interleaved_sides_are_found() {
        // K_{2,2} with sides {0,2} and {1,3} plus extra edges inside a side:
        // detection must not assume independent sides.
        let g = Graph::from_edges(4, &[(0, 1), (0, 3), (2, 1), (2, 3), (0, 2)]);
        let w = find_ktt(&g, 2).expect("dense 4-cycle contains K_{2,2}");
        assert!(w.verify(&g));
    }

    #[test]
    fn matching_single_edge() {
        let points = vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1])];
        let g = Graph::from_edges(2, &[(0, 1)]);
        let w = matching_common_box(&points, &g, 1).unwrap();
        assert!(w.verify(&points, &g));
    }

    #[test]
    fn disjoint_boxes_no_pair() {
        // Edges spanning [0,1]^2 and [2,3]^2.
        let points = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 1]),
            Point::from_ints(&[2, 2]),
            Point::from_ints(&[3, 3]),
        ];
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(matching_common_box(&points, &g, 2).is_none());
        assert!(matching_common_box(&points, &g, 1).is_some());
    }

    #[test]
    fn hand_checked_implication_instance() {
        // (0,0)-(3,3) and (1,1/2)-(2,5/2): spanned boxes share (3/2,3/2);
        // all four dominations hold, so {p0,p2} x {p1,p3} is a K_{2,2}.
        let points = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[3, 3]),
            Point::new(vec![Coord::from_int(1), Coord::ratio(1, 2)]).unwrap(),
            Point::new(vec![Coord::from_int(2), Coord::ratio(5, 2)]).unwrap(),
        ];
        for (a, b) in [(0usize, 1usize), (0, 3), (2, 1), (2, 3)] {
            assert_eq!(
                dominance(&points[a], &points[b]).unwrap(),
                Dominance::Less,
                "{a} must dominate below {b}"
            );
        }
        let g = dominance_comparability_graph(&points);
        let report = ktt_implies_matching_check(&points, &g, 2).unwrap();
        let m = report.matching.expect("the two boxes share (3/2, 3/2)");
        assert!(m.verify(&points, &g));
        let k = report.ktt.expect("K_{2,2} must accompany the matching");
        assert!(k.verify(&g));
    }

    #[test]
    fn antichain_has_neither_witness() {
        let points = vec![
            Point::from_ints(&[0, 3]),
            Point::from_ints(&[1, 2]),
            Point::from_ints(&[2, 1]),
            Point::from_ints(&[3, 0]),
        ];
        let g = dominance_comparability_graph(&points);
        assert_eq!(g.edge_count(), 0);
        let report = ktt_implies_matching_check(&points, &g, 2).unwrap();
        assert!(report.matching.is_none());
        assert!(report.ktt.is_none());
    }

    #[test]
    fn ties_can_break_the_implication() {
        // Boxes [5,6]x[0,5] and [0,5]x[5,6] share the corner (5,5), yet the
        // coordinate ties leave every cross pair incomparable: a matching
        // with a common point and no K_{2,2}. This is exactly why the
        // implication is only claimed in general position.
        let points = vec![
            Point::from_ints(&[5, 0]),
            Point::from_ints(&[6, 5]),
            Point::from_ints(&[0, 5]),
            Point::from_ints(&[5, 6]),
        ];
        assert!(!in_general_position(&points));
        let g = dominance_comparability_graph(&points);
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);
        let report = ktt_implies_matching_check(&points, &g, 2).unwrap();
        assert!(report.matching.is_some());
        assert!(report.ktt.is_none());
        assert!(!report.general_position);
    }

    #[test]
    fn mismatched_graph_is_rejected() {
        let points = vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1])];
        let wrong = Graph::new(2);
        assert!(matches!(
            ktt_implies_matching_check(&points, &wrong, 2),
            Err(ForbiddenError::NotComparabilityGraph)
        ));
    }
}
