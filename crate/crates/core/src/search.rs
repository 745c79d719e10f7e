//! Slow, independent re-implementations of the forbidden/separation checks,
//! plus small-scale extremal search for K_{t,t}-free box families. The
//! brute-force paths deliberately share no search code with the fast paths;
//! they exist to disagree loudly when the fast paths are wrong.

use std::io::Write;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::forbidden::{find_ktt, KttWitness, MatchingWitness};
use crate::geometry::{AxisBox, Point};
use crate::graph::{intersection_graph_with, BoxFamily, BuilderMode, Graph};
use crate::separation::SepCert;

/// Exhaustive K_{t,t} search: every ordered pair of disjoint t-subsets,
/// adjacency checked pair by pair.
pub fn bruteforce_ktt(g: &Graph, t: usize) -> Option<KttWitness> {
    assert!(t >= 1);
    let n = g.n();
    let mut left = Vec::with_capacity(t);
    subsets(n, t, 0, &mut left, &mut |left| {
        let mut right = Vec::with_capacity(t);
        let free: Vec<usize> = (0..n).filter(|v| !left.contains(v)).collect();
        subsets_of(&free, t, 0, &mut right, &mut |right| {
            let complete = left
                .iter()
                .all(|&u| right.iter().all(|&v| g.has_edge(u, v)));
            if complete {
                Some(KttWitness {
                    left: left.to_vec(),
                    right: right.to_vec(),
                })
            } else {
                None
            }
        })
    })
}

fn subsets<T>(
    n: usize,
    t: usize,
    from: usize,
    acc: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if acc.len() == t {
        return visit(acc);
    }
    for v in from..n {
        if n - v < t - acc.len() {
            break;
        }
        acc.push(v);
        if let Some(out) = subsets(n, t, v + 1, acc, visit) {
            return Some(out);
        }
        acc.pop();
    }
    None
}

fn subsets_of<T>(
    pool: &[usize],
    t: usize,
    from: usize,
    acc: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if acc.len() == t {
        return visit(acc);
    }
    for i in from..pool.len() {
        if pool.len() - i < t - acc.len() {
            break;
        }
        acc.push(pool[i]);
        if let Some(out) = subsets_of(pool, t, i + 1, acc, visit) {
            return Some(out);
        }
        acc.pop();
    }
    None
}

/// Exhaustive t-matching search working directly on coordinates: every
/// t-subset of the edge list, disjointness by hand, common intersection by
/// per-axis max-of-lows vs min-of-highs.
pub fn bruteforce_matching_box(points: &[Point], g: &Graph, t: usize) -> Option<MatchingWitness> {
    assert!(t >= 1);
    assert_eq!(points.len(), g.n());
    let edges = g.edges();
    let d = points.first().map(|p| p.dim()).unwrap_or(0);
    let idx: Vec<usize> = (0..edges.len()).collect();
    let mut acc = Vec::with_capacity(t);
    subsets_of(&idx, t, 0, &mut acc, &mut |chosen| {
        let mut used = Vec::new();
        for &e in chosen {
            let (u, v) = edges[e];
            if used.contains(&u) || used.contains(&v) {
                return None;
            }
            used.push(u);
            used.push(v);
        }
        let mut witness = Vec::with_capacity(d);
        for axis in 0..d {
            let mut lo: Option<Coord> = None;
            let mut hi: Option<Coord> = None;
            for &e in chosen {
                let (u, v) = edges[e];
                let (a, b) = if points[u].coord(axis) <= points[v].coord(axis) {
                    (points[u].coord(axis), points[v].coord(axis))
                } else {
                    (points[v].coord(axis), points[u].coord(axis))
                };
                if lo.as_ref().is_none_or(|l| a > l) {
                    lo = Some(a.clone());
                }
                if hi.as_ref().is_none_or(|h| b < h) {
                    hi = Some(b.clone());
                }
            }
            let (lo, hi) = (lo.unwrap(), hi.unwrap());
            if lo > hi {
                return None;
            }
            witness.push(lo);
        }
        Some(MatchingWitness {
            pairs: chosen.iter().map(|&e| edges[e]).collect(),
            common: Point::new(witness).expect("d >= 1"),
        })
    })
}

/// Exhaustive separation-certificate check: all pairs of disjoint edges,
/// interval arithmetic written out per axis.
pub fn bruteforce_sepcert_check(
    g: &Graph,
    cert: &SepCert,
) -> Option<((usize, usize), (usize, usize))> {
    let edges = g.edges();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in edges.iter().skip(i + 1) {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let mut overlap_all = true;
            for axis in 0..cert.dim {
                let (lo1, hi1) = ordered(cert.map[a].coord(axis), cert.map[b].coord(axis));
                let (lo2, hi2) = ordered(cert.map[c].coord(axis), cert.map[d].coord(axis));
                if hi1 < lo2 || hi2 < lo1 {
                    overlap_all = false;
                    break;
                }
            }
            if overlap_all {
                return Some(((a, b), (c, d)));
            }
        }
    }
    None
}

fn ordered<'a>(x: &'a Coord, y: &'a Coord) -> (&'a Coord, &'a Coord) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Outcome of an extremal search run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    pub gridsize: usize,
    pub max_edges: usize,
    pub witness: BoxFamily,
    /// True only when the full canonical search space was enumerated.
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

impl ExtremalRecord {
    /// Appends the record as one JSON line to a results ledger.
    pub fn append_to_ledger(&self, path: &std::path::Path) -> std::io::Result<()> {
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        let line = serde_json::to_string(self).expect("record serializes");
        writeln!(file, "{line}")?;
        Ok(())
    }
}

/// Maximum edge count over K_{t,t}-free intersection graphs of `n` boxes
/// with corners on `{0..gridsize-1}^d`.
///
/// Exhaustive mode enumerates families as nondecreasing tuples of interval
/// codes (box intersection graphs depend only on coordinate order, so the
/// grid is a complete set of order types when `gridsize >= 2n`); practical
/// only for tiny parameters. Otherwise seeded hill climbing with restarts.
pub fn max_edges_ktt_free_boxes(
    n: usize,
    d: usize,
    t: usize,
    gridsize: usize,
    exhaustive: bool,
    seed: u64,
) -> ExtremalRecord {
    assert!(n >= 1 && d >= 1 && t >= 1 && gridsize >= 1);
    let intervals: Vec<(i64, i64)> = {
        let mut v = Vec::new();
        for lo in 0..gridsize as i64 {
            for hi in lo..gridsize as i64 {
                v.push((lo, hi));
            }
        }
        v
    };
    if exhaustive {
        let boxes_catalog: Vec<Vec<(i64, i64)>> = cartesian(&intervals, d);
        let mut best: Option<(usize, Vec<usize>)> = None;
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        exhaustive_dfs(&boxes_catalog, n, t, 0, &mut chosen, &mut best);
        let (max_edges, codes) = best.expect("the all-disjoint family is always feasible");
        let witness = family_from_codes(&boxes_catalog, &codes, d);
        ExtremalRecord {
            n,
            d,
            t,
            gridsize,
            max_edges,
            witness,
            exhaustive: true,
            seed: None,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best_edges = 0usize;
        let mut best_family: Option<BoxFamily> = None;
        for _ in 0..20 {
            let mut codes: Vec<usize> = (0..n)
                .map(|_| rng.random_range(0..intervals.len().pow(d as u32)))
                .collect();
            let mut current = family_edges_if_free(&intervals, &codes, d, t);
            for _ in 0..400 * n {
                let slot = rng.random_range(0..n);
                let old = codes[slot];
                codes[slot] = rng.random_range(0..intervals.len().pow(d as u32));
                let next = family_edges_if_free(&intervals, &codes, d, t);
                match (next, current) {
                    (Some(e2), Some(e1)) if e2 >= e1 => current = Some(e2),
                    (Some(_), None) => current = next,
                    _ => codes[slot] = old,
                }
            }
            if let Some(e) = current {
                if best_family.is_none() || e > best_edges {
                    best_edges = e;
                    best_family = Some(decode_family(&intervals, &codes, d));
                }
            }
        }
        let witness = best_family.unwrap_or_else(|| {
            // Fallback: n disjoint degenerate boxes at distinct corners.
            decode_family(&intervals, &vec![0; n], d)
        });
        ExtremalRecord {
            n,
            d,
            t,
            gridsize,
            max_edges: best_edges,
            witness,
            exhaustive: false,
            seed: Some(seed),
        }
    }
}

fn cartesian(intervals: &[(i64, i64)], d: usize) -> Vec<Vec<(i64, i64)>> {
    let mut out: Vec<Vec<(i64, i64)>> = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * intervals.len());
        for prefix in &out {
            for &iv in intervals {
                let mut p = prefix.clone();
                p.push(iv);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn family_from_codes(catalog: &[Vec<(i64, i64)>], codes: &[usize], d: usize) -> BoxFamily {
    let boxes = codes
        .iter()
        .map(|&c| {
            let iv = &catalog[c];
            let lo: Vec<i64> = iv.iter().map(|&(l, _)| l).collect();
            let hi: Vec<i64> = iv.iter().map(|&(_, h)| h).collect();
            AxisBox::from_ints(&lo, &hi)
        })
        .collect();
    BoxFamily::new(d, boxes).expect("uniform dimension")
}

fn decode_family(intervals: &[(i64, i64)], codes: &[usize], d: usize) -> BoxFamily {
    let boxes = codes
        .iter()
        .map(|&code| {
            let mut c = code;
            let mut lo = Vec::with_capacity(d);
            let mut hi = Vec::with_capacity(d);
            for _ in 0..d {
                let (l, h) = intervals[c % intervals.len()];
                lo.push(l);
                hi.push(h);
                c /= intervals.len();
            }
            AxisBox::from_ints(&lo, &hi)
        })
        .collect();
    BoxFamily::new(d, boxes).expect("uniform dimension")
}

fn family_edges_if_free(
    intervals: &[(i64, i64)],
    codes: &[usize],
    d: usize,
    t: usize,
) -> Option<usize> {
    let fam = decode_family(intervals, codes, d);
    let g = intersection_graph_with(&fam, BuilderMode::BruteForce);
    if find_ktt(&g, t).is_some() {
        None
    } else {
        Some(g.edge_count())
    }
}

fn exhaustive_dfs(
    catalog: &[Vec<(i64, i64)>],
    n: usize,
    t: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    best: &mut Option<(usize, Vec<usize>)>,
) {
    let placed = chosen.len();
    if placed == n {
        let fam = family_from_codes(catalog, chosen, catalog[0].len());
        let g = intersection_graph_with(&fam, BuilderMode::BruteForce);
        if find_ktt(&g, t).is_none() {
            let e = g.edge_count();
            if best.as_ref().is_none_or(|(b, _)| e > *b) {
                *best = Some((e, chosen.clone()));
            }
        }
        return;
    }
    // Nothing can beat the complete graph; stop once it is reached.
    if let Some((b, _)) = best {
        if *b == n * (n - 1) / 2 {
            return;
        }
    }
    for code in from..catalog.len() {
        chosen.push(code);
        // Prune: a K_{t,t} in a prefix stays in every extension.
        let fam = family_from_codes(catalog, chosen, catalog[0].len());
        let g = intersection_graph_with(&fam, BuilderMode::BruteForce);
        if find_ktt(&g, t).is_none() {
            exhaustive_dfs(catalog, n, t, code, chosen, best);
        }
        chosen.pop();
    }
}
