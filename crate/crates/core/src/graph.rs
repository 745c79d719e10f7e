//! Undirected simple graphs with word-packed bitset adjacency, plus the
//! builders that turn box families and point/rectangle configurations into
//! intersection and incidence graphs.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coord::{rank_map, Coord};
use crate::geometry::{boxes_intersect, AxisBox, GeometryError, Point};

/// Undirected simple graph; adjacency stored as `n` bitset rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            bits: vec![0u64; n * words],
            labels: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        assert_ne!(u, v, "self-loops are not allowed");
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v || u >= self.n || v >= self.n {
            return false;
        }
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|v| self.degree(v)).sum();
        total / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(v))
    }

    /// Edges in sorted `(i, j)` order with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on `verts` (new vertex `i` = `verts[i]`).
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut g = Graph::new(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

pub(crate) struct BitIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        BitIter {
            words,
            word_idx: 0,
            current: if words.is_empty() { 0 } else { words[0] },
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = GraphJson::deserialize(deserializer)?;
        let mut g = Graph::new(json.n);
        for (u, v) in json.edges {
            if u == v || u >= json.n || v >= json.n {
                return Err(D::Error::custom(format!("invalid edge ({u}, {v})")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }
}

/// A family of `d`-dimensional boxes, the input of `intersection_graph`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxFamily {
    pub dim: usize,
    pub boxes: Vec<AxisBox>,
}

impl<'de> Deserialize<'de> for BoxFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            boxes: Vec<AxisBox>,
        }
        let raw = Raw::deserialize(deserializer)?;
        BoxFamily::new(raw.dim, raw.boxes).map_err(D::Error::custom)
    }
}

impl BoxFamily {
    pub fn new(dim: usize, boxes: Vec<AxisBox>) -> Result<Self, GeometryError> {
        for b in &boxes {
            if b.dim() != dim {
                return Err(GeometryError::DimensionMismatch(dim, b.dim()));
            }
        }
        Ok(BoxFamily { dim, boxes })
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }
}

/// Points and rectangles in the plane; the input of `incidence_graph`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncidenceConfig {
    pub points: Vec<Point>,
    pub rects: Vec<AxisBox>,
}

impl<'de> Deserialize<'de> for IncidenceConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            points: Vec<Point>,
            rects: Vec<AxisBox>,
        }
        let raw = Raw::deserialize(deserializer)?;
        IncidenceConfig::new(raw.points, raw.rects).map_err(D::Error::custom)
    }
}

impl IncidenceConfig {
    pub fn new(points: Vec<Point>, rects: Vec<AxisBox>) -> Result<Self, GeometryError> {
        for p in &points {
            if p.dim() != 2 {
                return Err(GeometryError::DimensionMismatch(2, p.dim()));
            }
        }
        for r in &rects {
            if r.dim() != 2 {
                return Err(GeometryError::DimensionMismatch(2, r.dim()));
            }
        }
        Ok(IncidenceConfig { points, rects })
    }
}

/// Which intersection-graph builder to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuilderMode {
    /// Pairwise exact comparisons; the slow trustworthy reference path.
    BruteForce,
    /// Rank-compressed sweep over the first axis with an active list.
    #[default]
    Sweep,
}

/// Intersection graph of a box family: edge `ij` iff the closed boxes
/// intersect. Vertex order = input order in both modes.
pub fn intersection_graph(family: &BoxFamily) -> Graph {
    intersection_graph_with(family, BuilderMode::default())
}

pub fn intersection_graph_with(family: &BoxFamily, mode: BuilderMode) -> Graph {
    match mode {
        BuilderMode::BruteForce => intersection_brute(family),
        BuilderMode::Sweep => intersection_sweep(family),
    }
}

fn intersection_brute(family: &BoxFamily) -> Graph {
    let n = family.len();
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if boxes_intersect(&family.boxes[i], &family.boxes[j]).expect("family dims checked") {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Integer-rank image of one box, `2d` values: `lo_0..lo_{d-1}, hi_0..`.
struct RankedBox {
    lo: Vec<u32>,
    hi: Vec<u32>,
}

fn rank_boxes(family: &BoxFamily) -> Vec<RankedBox> {
    let d = family.dim;
    let mut per_axis: Vec<Vec<Coord>> = vec![Vec::with_capacity(2 * family.len()); d];
    for b in &family.boxes {
        for axis in 0..d {
            per_axis[axis].push(b.lo().coord(axis).clone());
            per_axis[axis].push(b.hi().coord(axis).clone());
        }
    }
    let maps: Vec<_> = per_axis.iter().map(|pool| rank_map(pool)).collect();
    family
        .boxes
        .iter()
        .map(|b| RankedBox {
            lo: (0..d).map(|a| maps[a].rank(b.lo().coord(a))).collect(),
            hi: (0..d).map(|a| maps[a].rank(b.hi().coord(a))).collect(),
        })
        .collect()
}

fn intersection_sweep(family: &BoxFamily) -> Graph {
    let n = family.len();
    let mut g = Graph::new(n);
    if n == 0 || family.dim == 0 {
        return g;
    }
    let ranked = rank_boxes(family);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| ranked[i].lo[0]);

    // Active boxes whose first-axis interval can still reach the sweep line.
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let cur = &ranked[i];
        active.retain(|&j| ranked[j].hi[0] >= cur.lo[0]);
        for &j in &active {
            let other = &ranked[j];
            let overlap =
                (1..family.dim).all(|a| cur.lo[a] <= other.hi[a] && other.lo[a] <= cur.hi[a]);
            if overlap {
                g.add_edge(i, j);
            }
        }
        active.push(i);
    }
    g
}

/// Bipartite incidence graph: vertices are points `0..p` then rects
/// `p..p+r`; point `i` adjacent to rect `j` iff the closed rect contains it.
pub fn incidence_graph(config: &IncidenceConfig) -> Graph {
    let np = config.points.len();
    let nr = config.rects.len();
    let mut pools: [Vec<Coord>; 2] = [Vec::new(), Vec::new()];
    for p in &config.points {
        for axis in 0..2 {
            pools[axis].push(p.coord(axis).clone());
        }
    }
    for r in &config.rects {
        for axis in 0..2 {
            pools[axis].push(r.lo().coord(axis).clone());
            pools[axis].push(r.hi().coord(axis).clone());
        }
    }
    let maps = [rank_map(&pools[0]), rank_map(&pools[1])];
    let pts: Vec<[u32; 2]> = config
        .points
        .iter()
        .map(|p| [maps[0].rank(p.coord(0)), maps[1].rank(p.coord(1))])
        .collect();
    let rects: Vec<[u32; 4]> = config
        .rects
        .iter()
        .map(|r| {
            [
                maps[0].rank(r.lo().coord(0)),
                maps[0].rank(r.hi().coord(0)),
                maps[1].rank(r.lo().coord(1)),
                maps[1].rank(r.hi().coord(1)),
            ]
        })
        .collect();

    let mut g = Graph::new(np + nr);
    for (i, p) in pts.iter().enumerate() {
        for (j, r) in rects.iter().enumerate() {
            if r[0] <= p[0] && p[0] <= r[1] && r[2] <= p[1] && p[1] <= r[3] {
                g.add_edge(i, np + j);
            }
        }
    }
    g
}

/// Min-degree elimination degeneracy with its witness order.
///
/// The order lists vertices in the sequence they were removed; at removal
/// time no vertex had residual degree above the reported value.
pub fn degeneracy(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut k = 0usize;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        k = k.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    (k, order)
}

/// Deterministic greedy max-cut split: vertices move to the other side while
/// their cross-degree is below their same-side degree. At the fixpoint every
/// vertex has cross-degree ≥ half its degree, so the cut has ≥ e(G)/2 edges.
pub fn bipartition_split(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let mut in_b = vec![false; n];
    loop {
        let mut moved = false;
        for v in 0..n {
            let mut cross = 0usize;
            let mut same = 0usize;
            for u in g.neighbors(v) {
                if in_b[u] != in_b[v] {
                    cross += 1;
                } else {
                    same += 1;
                }
            }
            if cross < same {
                in_b[v] = !in_b[v];
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let cut = g
        .edges()
        .iter()
        .filter(|&&(u, v)| in_b[u] != in_b[v])
        .count();
    assert!(
        2 * cut >= g.edge_count(),
        "greedy split fixpoint must cut at least half the edges"
    );
    let a: Vec<usize> = (0..n).filter(|&v| !in_b[v]).collect();
    let b: Vec<usize> = (0..n).filter(|&v| in_b[v]).collect();
    (a, b)
}

/// Number of edges crossing the `(a, b)` split.
pub fn cross_edges(g: &Graph, a: &[usize], b: &[usize]) -> usize {
    debug_assert_eq!(a.len() + b.len(), g.n());
    let mut side = vec![false; g.n()];
    for &v in b {
        side[v] = true;
    }
    g.edges()
        .iter()
        .filter(|&&(u, v)| side[u] != side[v])
        .count()
}
