//! The bipartite poset P(G), the half-edge reduction, the 4-dimensional
//! point/rectangle realizer, realizer verification, and a brute-force poset
//! dimension oracle.

use std::collections::{BTreeMap, HashSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coord::Coord;
use crate::geometry::{dominance, AxisBox, Dominance, Point};
use crate::graph::{bipartition_split, cross_edges, incidence_graph, Graph, IncidenceConfig};

#[derive(Debug, thiserror::Error)]
pub enum PosetError {
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("rectangle {outer} strictly contains rectangle {inner}")]
    NestingPresent { outer: usize, inner: usize },
    #[error("point {point} lies on the boundary of rectangle {rect}")]
    BoundaryContact { point: usize, rect: usize },
    #[error(
        "nested rectangle {inner} (inside {outer}) contains points {p0} and {p1}, a K_{{2,2}}"
    )]
    K22Present {
        inner: usize,
        outer: usize,
        p0: usize,
        p1: usize,
    },
    #[error("cannot build a replacement slab: {0}")]
    CoordinateCollision(String),
    #[error("certificate is missing element {0:?}")]
    MissingElement(String),
    #[error("certificate dimension {cert} does not match image dimension {image}")]
    CertDimension { cert: usize, image: usize },
    #[error("cover relation ({0:?}, {1:?}) creates a cycle")]
    CyclicCovers(String, String),
    #[error("unknown element {0:?} in cover relation")]
    UnknownElement(String),
    #[error("poset has {0} elements; the brute-force dimension search handles at most 16")]
    TooLarge(usize),
    #[error("poset has more than {0} linear extensions; brute-force dimension is infeasible")]
    TooManyExtensions(usize),
}

/// A finite strict partial order with labelled elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    words: usize,
    /// Row `a` holds the bitset of `b` with `a < b`.
    less_bits: Vec<u64>,
}

impl Poset {
    fn empty(labels: Vec<String>) -> Result<Self, PosetError> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(PosetError::DuplicateElement(l.clone()));
            }
        }
        let n = labels.len();
        let words = n.div_ceil(64);
        Ok(Poset {
            labels,
            words,
            less_bits: vec![0u64; n * words],
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less_bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn set_less(&mut self, a: usize, b: usize) {
        self.less_bits[a * self.words + b / 64] |= 1 << (b % 64);
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    /// Strict dominance order of a point set; element labels are the indices.
    pub fn from_dominance(points: &[Point]) -> Self {
        let labels = (0..points.len()).map(|i| i.to_string()).collect();
        let mut p = Poset::empty(labels).expect("indices are distinct");
        for i in 0..points.len() {
            for j in 0..points.len() {
                if i != j
                    && dominance(&points[i], &points[j]).expect("uniform dimension")
                        == Dominance::Less
                {
                    p.set_less(i, j);
                }
            }
        }
        p
    }

    /// Height-2 incidence order: rectangle `r{j}` below point `p{i}` iff the
    /// closed rectangle contains the point.
    pub fn from_incidences(config: &IncidenceConfig) -> Self {
        let np = config.points.len();
        let mut labels: Vec<String> = (0..np).map(|i| format!("p{i}")).collect();
        labels.extend((0..config.rects.len()).map(|j| format!("r{j}")));
        let mut p = Poset::empty(labels).expect("labels are distinct");
        let g = incidence_graph(config);
        for (u, v) in g.edges() {
            // u is the point, v = np + j the rectangle.
            p.set_less(v, u);
        }
        p
    }

    /// Builds the order as the transitive closure of the cover relations.
    pub fn from_covers(
        labels: Vec<String>,
        covers: &[(String, String)],
    ) -> Result<Self, PosetError> {
        let mut p = Poset::empty(labels)?;
        for (lo, hi) in covers {
            let a = p
                .index_of(lo)
                .ok_or_else(|| PosetError::UnknownElement(lo.clone()))?;
            let b = p
                .index_of(hi)
                .ok_or_else(|| PosetError::UnknownElement(hi.clone()))?;
            if a == b {
                return Err(PosetError::CyclicCovers(lo.clone(), hi.clone()));
            }
            p.set_less(a, b);
        }
        // Transitive closure by word-level row unions.
        let n = p.n();
        let words = p.words;
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in 0..n {
                    if p.less(a, b) {
                        for w in 0..words {
                            let add = p.less_bits[b * words + w] & !p.less_bits[a * words + w];
                            if add != 0 {
                                p.less_bits[a * words + w] |= add;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && p.less(a, b) && p.less(b, a) {
                    return Err(PosetError::CyclicCovers(
                        p.labels[a].clone(),
                        p.labels[b].clone(),
                    ));
                }
            }
        }
        Ok(p)
    }

    /// Cover relations (the transitive reduction), sorted by label pair.
    pub fn covers(&self) -> Vec<(String, String)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less(a, b) {
                    let has_middle = (0..n).any(|c| self.less(a, c) && self.less(c, b));
                    if !has_middle {
                        out.push((self.labels[a].clone(), self.labels[b].clone()));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Undirected graph of comparable pairs, labelled like the poset.
    pub fn comparability_graph(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if self.comparable(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g.with_labels(self.labels.clone())
    }

    /// Ordered incomparable pairs `(a, b)`, `a != b`.
    fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && !self.comparable(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

impl Serialize for Poset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PosetJson {
            elements: self.labels.clone(),
            covers: self.covers(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = PosetJson::deserialize(deserializer)?;
        Poset::from_covers(json.elements, &json.covers).map_err(D::Error::custom)
    }
}

/// The height-2 poset on `V(G) x {0,1}` with `(u,0) < (v,1)` iff `u = v` or
/// `uv` is an edge. Down-sets of the top elements are stored as bitmasks
/// over the bottoms.
#[derive(Debug, Clone)]
pub struct BipartitePoset {
    base: Graph,
    words: usize,
    /// `down[v]` = bottoms below top `(v,1)`: row of `v` plus the bit `v`.
    down: Vec<u64>,
}

/// Builds P(G).
pub fn build_pg(g: &Graph) -> BipartitePoset {
    let n = g.n();
    let words = n.div_ceil(64);
    let mut down = vec![0u64; n * words];
    for v in 0..n {
        let row = g.row(v);
        let dst = &mut down[v * words..(v + 1) * words];
        dst.copy_from_slice(row);
        dst[v / 64] |= 1 << (v % 64);
    }
    BipartitePoset {
        base: g.clone(),
        words,
        down,
    }
}

impl BipartitePoset {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n_base(&self) -> usize {
        self.base.n()
    }

    /// `(u,0) < (v,1)`?
    pub fn below(&self, u: usize, v: usize) -> bool {
        self.down[v * self.words + u / 64] >> (u % 64) & 1 == 1
    }

    /// Number of comparable ordered pairs: `|V| + 2 e(G)`.
    pub fn comparability_count(&self) -> usize {
        self.base.n() + 2 * self.base.edge_count()
    }

    /// Comparability graph on `2n` vertices; bottoms `0..n` labelled `"{u}:0"`,
    /// tops `n..2n` labelled `"{v}:1"`.
    pub fn comparability_graph(&self) -> Graph {
        let n = self.base.n();
        let mut g = Graph::new(2 * n);
        for v in 0..n {
            for u in 0..n {
                if self.below(u, v) {
                    g.add_edge(u, n + v);
                }
            }
        }
        let mut labels: Vec<String> = (0..n).map(|u| format!("{u}:0")).collect();
        labels.extend((0..n).map(|v| format!("{v}:1")));
        g.with_labels(labels)
    }

    pub fn to_poset(&self) -> Poset {
        let n = self.base.n();
        let mut labels: Vec<String> = (0..n).map(|u| format!("{u}:0")).collect();
        labels.extend((0..n).map(|v| format!("{v}:1")));
        let mut p = Poset::empty(labels).expect("labels are distinct");
        for v in 0..n {
            for u in 0..n {
                if self.below(u, v) {
                    p.set_less(u, n + v);
                }
            }
        }
        p
    }
}

/// The K_{t,t}-free half of P(G): the subgraph induced on A-bottoms and
/// B-tops for a split (A, B) cutting at least half the edges.
#[derive(Debug, Clone)]
pub struct HalfPoset {
    /// Induced comparability graph; vertices are `bottoms` then `tops`.
    pub graph: Graph,
    pub edge_count: usize,
    /// Base vertices whose bottom copy was kept.
    pub bottoms: Vec<usize>,
    /// Base vertices whose top copy was kept.
    pub tops: Vec<usize>,
}

/// Splits `g` greedily and returns the induced half of P(g). The result has
/// at least `e(g)/2` edges; when `g` is K_{t,t}-free so is the result, since
/// any K_{t,t} in it maps to one in `g` with sides in A and B.
pub fn induced_half(g: &Graph) -> HalfPoset {
    let (a, b) = bipartition_split(g);
    let cut = cross_edges(g, &a, &b);
    let na = a.len();
    let mut out = Graph::new(na + b.len());
    for (i, &u) in a.iter().enumerate() {
        for (j, &v) in b.iter().enumerate() {
            // (u,0) < (v,1) iff u = v (impossible here) or uv is an edge.
            if g.has_edge(u, v) {
                out.add_edge(i, na + j);
            }
        }
    }
    let mut labels: Vec<String> = a.iter().map(|u| format!("{u}:0")).collect();
    labels.extend(b.iter().map(|v| format!("{v}:1")));
    let out = out.with_labels(labels);
    let edge_count = out.edge_count();
    assert_eq!(edge_count, cut);
    assert!(2 * edge_count >= g.edge_count());
    HalfPoset {
        graph: out,
        edge_count,
        bottoms: a,
        tops: b,
    }
}

/// The underlying height-2 order of a bipartite graph: every edge oriented
/// from `bottom` to `top`. Panics if an edge lies within one side.
pub fn bipartite_underlying_poset(g: &Graph, bottom: &[usize], top: &[usize]) -> Poset {
    assert_eq!(bottom.len() + top.len(), g.n());
    let mut side = vec![None; g.n()];
    for &v in bottom {
        side[v] = Some(false);
    }
    for &v in top {
        side[v] = Some(true);
    }
    let labels = (0..g.n()).map(|v| v.to_string()).collect();
    let mut p = Poset::empty(labels).expect("indices are distinct");
    for (u, v) in g.edges() {
        match (side[u], side[v]) {
            (Some(false), Some(true)) => p.set_less(u, v),
            (Some(true), Some(false)) => p.set_less(v, u),
            _ => panic!("edge ({u},{v}) does not cross the given bipartition"),
        }
    }
    p
}

/// A claimed dominance realizer: each element maps to a point in `ℝ^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCert {
    pub dim: usize,
    pub map: BTreeMap<String, Point>,
}

/// Undirected comparability graph of the strict dominance order on `points`.
pub fn dominance_comparability_graph(points: &[Point]) -> Graph {
    let n = points.len();
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            match dominance(&points[i], &points[j]).expect("uniform dimension") {
                Dominance::Less | Dominance::Greater => g.add_edge(i, j),
                _ => {}
            }
        }
    }
    g
}

/// The 4-dimensional realizer of a point/rectangle incidence order:
/// `(x, y) ↦ (x, -x, y, -y)` for points and `[a,b]x[c,d] ↦ (a, -b, c, -d)`
/// for rectangles. Containment then coincides with strict dominance of the
/// rectangle image by the point image, distinct points map to incomparable
/// images, and with no rectangle strictly nested in another the rectangle
/// images are pairwise incomparable too.
///
/// Preconditions enforced: no duplicate points or rectangles, no strict
/// nesting, and no point on a rectangle boundary (a boundary incidence would
/// be a closed containment that strict dominance cannot express).
pub fn phi_embedding(config: &IncidenceConfig) -> Result<EmbeddingCert, PosetError> {
    let mut seen_pts = HashSet::new();
    for (i, p) in config.points.iter().enumerate() {
        if !seen_pts.insert(p.coords().to_vec()) {
            return Err(PosetError::DuplicateElement(format!("p{i}")));
        }
    }
    let mut seen_rects = HashSet::new();
    for (j, r) in config.rects.iter().enumerate() {
        let key = (r.lo().coords().to_vec(), r.hi().coords().to_vec());
        if !seen_rects.insert(key) {
            return Err(PosetError::DuplicateElement(format!("r{j}")));
        }
    }
    for (j, outer) in config.rects.iter().enumerate() {
        for (k, inner) in config.rects.iter().enumerate() {
            if j != k && outer.strictly_contains_box(inner) {
                return Err(PosetError::NestingPresent { outer: j, inner: k });
            }
        }
    }
    for (i, p) in config.points.iter().enumerate() {
        for (j, r) in config.rects.iter().enumerate() {
            let closed = r.contains_point(p).expect("2d config");
            let open = (0..2).all(|axis| {
                r.lo().coord(axis) < p.coord(axis) && p.coord(axis) < r.hi().coord(axis)
            });
            if closed && !open {
                return Err(PosetError::BoundaryContact { point: i, rect: j });
            }
        }
    }

    let mut map = BTreeMap::new();
    for (i, p) in config.points.iter().enumerate() {
        map.insert(format!("p{i}"), phi_point(p));
    }
    for (j, r) in config.rects.iter().enumerate() {
        map.insert(format!("r{j}"), phi_rect(r));
    }
    Ok(EmbeddingCert { dim: 4, map })
}

pub fn phi_point(p: &Point) -> Point {
    let x = p.coord(0).clone();
    let y = p.coord(1).clone();
    Point::new(vec![x.clone(), -x, y.clone(), -y]).expect("nonempty")
}

pub fn phi_rect(r: &AxisBox) -> Point {
    Point::new(vec![
        r.lo().coord(0).clone(),
        -r.hi().coord(0),
        r.lo().coord(1).clone(),
        -r.hi().coord(1),
    ])
    .expect("nonempty")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealizerVerdict {
    Valid,
    Violation {
        x: String,
        y: String,
        kind: RealizerViolation,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealizerViolation {
    /// `x < y` in the poset but the image of `x` does not strictly dominate below.
    RelationNotDominated,
    /// Strict dominance in the embedding without the poset relation.
    DominanceWithoutRelation,
    /// Two distinct elements share an image; an embedding must be injective.
    EqualImages,
}

/// Checks that `cert` realizes `poset` exactly: `x < y` iff the image of `x`
/// is strictly below the image of `y` in every coordinate.
pub fn check_realizer(poset: &Poset, cert: &EmbeddingCert) -> Result<RealizerVerdict, PosetError> {
    let n = poset.n();
    let mut images = Vec::with_capacity(n);
    for label in poset.labels() {
        let p = cert
            .map
            .get(label)
            .ok_or_else(|| PosetError::MissingElement(label.clone()))?;
        if p.dim() != cert.dim {
            return Err(PosetError::CertDimension {
                cert: cert.dim,
                image: p.dim(),
            });
        }
        images.push(p);
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let dom = dominance(images[a], images[b]).expect("dims checked");
            if a < b && dom == Dominance::Equal {
                return Ok(RealizerVerdict::Violation {
                    x: poset.labels()[a].clone(),
                    y: poset.labels()[b].clone(),
                    kind: RealizerViolation::EqualImages,
                });
            }
            let dominated = dom == Dominance::Less;
            let related = poset.less(a, b);
            if related && !dominated {
                return Ok(RealizerVerdict::Violation {
                    x: poset.labels()[a].clone(),
                    y: poset.labels()[b].clone(),
                    kind: RealizerViolation::RelationNotDominated,
                });
            }
            if dominated && !related {
                return Ok(RealizerVerdict::Violation {
                    x: poset.labels()[a].clone(),
                    y: poset.labels()[b].clone(),
                    kind: RealizerViolation::DominanceWithoutRelation,
                });
            }
        }
    }
    Ok(RealizerVerdict::Valid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Exact(usize),
    GreaterThan(usize),
}

const EXTENSION_CAP: usize = 2_000_000;

/// Smallest `d <= dmax` such that the order is the intersection of `d`
/// linear extensions; exact but exponential, intended for tiny posets.
pub fn poset_dimension_bruteforce(poset: &Poset, dmax: usize) -> Result<Dimension, PosetError> {
    assert!(dmax >= 1);
    let n = poset.n();
    if n > 16 {
        return Err(PosetError::TooLarge(n));
    }
    if n <= 1 {
        return Ok(Dimension::Exact(1));
    }
    let inc = poset.incomparable_pairs();
    if inc.is_empty() {
        return Ok(Dimension::Exact(1));
    }
    let masks = extension_masks(poset, &inc)?;
    let inc_words = inc.len().div_ceil(64);
    let full = full_mask(inc.len());

    // d = 2: the two extensions of a 2-realizer reverse complementary halves
    // of the incomparable pairs, so exact complements must both be present.
    if dmax >= 2 {
        let set: HashSet<&Vec<u64>> = masks.iter().collect();
        for m in &masks {
            let comp: Vec<u64> = m.iter().zip(&full).map(|(w, f)| !w & f).collect();
            if set.contains(&comp) {
                return Ok(Dimension::Exact(2));
            }
        }
    }
    if dmax < 3 {
        return Ok(Dimension::GreaterThan(dmax));
    }

    // d >= 3: set cover over the distinct reversal masks. Dominated masks
    // can never help a minimum cover, so keep only the maximal ones, and
    // branch on the candidates covering the first uncovered pair.
    let maximal = maximal_masks(masks);
    let mut by_bit: Vec<Vec<usize>> = vec![Vec::new(); inc.len()];
    for (i, m) in maximal.iter().enumerate() {
        for bit in crate::graph::BitIter::new(m) {
            by_bit[bit].push(i);
        }
    }
    for d in 3..=dmax {
        if cover_dfs(&maximal, &by_bit, &full, inc_words, d) {
            return Ok(Dimension::Exact(d));
        }
    }
    Ok(Dimension::GreaterThan(dmax))
}

fn maximal_masks(masks: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut sorted = masks;
    sorted.sort_by_key(|m| std::cmp::Reverse(popcount(m)));
    let mut keep: Vec<Vec<u64>> = Vec::new();
    'outer: for m in sorted {
        for k in &keep {
            if m.iter().zip(k).all(|(a, b)| a & !b == 0) {
                continue 'outer; // m is a subset of a kept mask
            }
        }
        keep.push(m);
    }
    keep
}

fn full_mask(bits: usize) -> Vec<u64> {
    let words = bits.div_ceil(64);
    let mut m = vec![!0u64; words];
    let spill = bits % 64;
    if spill != 0 {
        m[words - 1] = (1u64 << spill) - 1;
    }
    m
}

fn popcount(m: &[u64]) -> usize {
    m.iter().map(|w| w.count_ones() as usize).sum()
}

fn cover_dfs(
    masks: &[Vec<u64>],
    by_bit: &[Vec<usize>],
    uncovered: &[u64],
    words: usize,
    depth: usize,
) -> bool {
    let first = crate::graph::BitIter::new(uncovered).next();
    let bit = match first {
        None => return true,
        Some(b) => b,
    };
    if depth == 0 {
        return false;
    }
    for &i in &by_bit[bit] {
        let mut next = vec![0u64; words];
        for ((w, u), m) in next.iter_mut().zip(uncovered).zip(&masks[i]) {
            *w = u & !m;
        }
        if cover_dfs(masks, by_bit, &next, words, depth - 1) {
            return true;
        }
    }
    false
}

/// Enumerates all linear extensions, reduced to their reversal masks over
/// the ordered incomparable pairs, deduplicated.
fn extension_masks(poset: &Poset, inc: &[(usize, usize)]) -> Result<Vec<Vec<u64>>, PosetError> {
    let n = poset.n();
    let mut preds = vec![0u64; n];
    for a in 0..n {
        for b in 0..n {
            if poset.less(a, b) {
                preds[b] |= 1 << a;
            }
        }
    }
    let inc_words = inc.len().div_ceil(64);
    let mut masks: HashSet<Vec<u64>> = HashSet::new();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut count = 0usize;
    extension_dfs(
        n,
        &preds,
        (1u64 << n) - 1,
        &mut order,
        inc,
        inc_words,
        &mut masks,
        &mut count,
    )?;
    Ok(masks.into_iter().collect())
}

#[allow(clippy::too_many_arguments)]
fn extension_dfs(
    n: usize,
    preds: &[u64],
    remaining: u64,
    order: &mut Vec<usize>,
    inc: &[(usize, usize)],
    inc_words: usize,
    masks: &mut HashSet<Vec<u64>>,
    count: &mut usize,
) -> Result<(), PosetError> {
    if remaining == 0 {
        *count += 1;
        if *count > EXTENSION_CAP {
            return Err(PosetError::TooManyExtensions(EXTENSION_CAP));
        }
        let mut pos = vec![0usize; n];
        for (idx, &v) in order.iter().enumerate() {
            pos[v] = idx;
        }
        let mut mask = vec![0u64; inc_words];
        for (bit, &(a, b)) in inc.iter().enumerate() {
            // This extension "reverses" (a,b) when it places b before a.
            if pos[b] < pos[a] {
                mask[bit / 64] |= 1 << (bit % 64);
            }
        }
        masks.insert(mask);
        return Ok(());
    }
    let mut rest = remaining;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if preds[v] & remaining != 0 {
            continue; // v is not minimal among the remaining elements
        }
        order.push(v);
        extension_dfs(
            n,
            preds,
            remaining & !(1 << v),
            order,
            inc,
            inc_words,
            masks,
            count,
        )?;
        order.pop();
    }
    Ok(())
}

/// Rewrites rectangles that are strictly nested inside another rectangle as
/// long thin slabs, preserving the incidence graph exactly. A nested
/// rectangle contains at most one point (two would form a K_{2,2} with the
/// outer rectangle); its slab runs beyond the global coordinate range in one
/// axis and is thinner than every relevant coordinate gap in the other.
pub fn eliminate_nesting(config: &IncidenceConfig) -> Result<IncidenceConfig, PosetError> {
    let nested: Vec<usize> = (0..config.rects.len())
        .filter(|&j| {
            config
                .rects
                .iter()
                .enumerate()
                .any(|(k, outer)| k != j && outer.strictly_contains_box(&config.rects[j]))
        })
        .collect();
    if nested.is_empty() {
        return Ok(config.clone());
    }

    // Global frame over all original coordinates.
    let mut xs: Vec<Coord> = Vec::new();
    let mut ys: Vec<Coord> = Vec::new();
    for p in &config.points {
        xs.push(p.coord(0).clone());
        ys.push(p.coord(1).clone());
    }
    for r in &config.rects {
        xs.push(r.lo().coord(0).clone());
        xs.push(r.hi().coord(0).clone());
        ys.push(r.lo().coord(1).clone());
        ys.push(r.hi().coord(1).clone());
    }
    let xmin = xs.iter().min().unwrap().clone();
    let xmax = xs.iter().max().unwrap().clone();
    let ymin = ys.iter().min().unwrap().clone();
    let ymax = ys.iter().max().unwrap().clone();

    let total = nested.len();
    let mut rects = config.rects.clone();
    for (stagger, &j) in nested.iter().enumerate() {
        let outer = (0..config.rects.len())
            .find(|&k| k != j && config.rects[k].strictly_contains_box(&config.rects[j]))
            .expect("nested rectangles have an outer witness");
        let inside: Vec<usize> = config
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| config.rects[j].contains_point(p).expect("2d config"))
            .map(|(i, _)| i)
            .collect();
        if inside.len() >= 2 {
            return Err(PosetError::K22Present {
                inner: j,
                outer,
                p0: inside[0],
                p1: inside[1],
            });
        }

        // Width factor strictly decreasing with the stagger index, so slabs
        // sharing a centre line never coincide or nest.
        let shrink = Coord::ratio((total + 1 - stagger) as i64, (total + 1) as i64);
        let reach = Coord::from_int((stagger + 1) as i64);

        let slab = match inside.first() {
            Some(&i) => {
                let p = &config.points[i];
                point_slab(p, config, &xmin, &xmax, &ymin, &ymax, &reach, &shrink).ok_or_else(
                    || {
                        PosetError::CoordinateCollision(format!(
                            "point {i} shares both coordinate lines with other elements"
                        ))
                    },
                )?
            }
            None => {
                // Empty rectangle: a thin slab at a fresh horizontal level
                // above the configuration meets no point and no rectangle.
                let level = &ymax + &(&Coord::from_int(1) + &reach);
                let h = Coord::ratio(1, 4) * shrink;
                make_rect(&xmin - &reach, &xmax + &reach, &level - &h, &level + &h)
            }
        };
        rects[j] = slab;
    }

    let result = IncidenceConfig::new(config.points.clone(), rects).expect("2d slabs");
    // The gap-based construction above covers configurations whose relevant
    // coordinate lines are distinct; verify both contracts and refuse the
    // output otherwise rather than returning a broken configuration.
    if incidence_graph(&result) != incidence_graph(config) {
        return Err(PosetError::CoordinateCollision(
            "replacement slabs changed the incidence graph".into(),
        ));
    }
    for (a, outer) in result.rects.iter().enumerate() {
        for (b, inner) in result.rects.iter().enumerate() {
            if a != b && outer.strictly_contains_box(inner) {
                return Err(PosetError::NestingPresent { outer: a, inner: b });
            }
        }
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn point_slab(
    p: &Point,
    config: &IncidenceConfig,
    xmin: &Coord,
    xmax: &Coord,
    ymin: &Coord,
    ymax: &Coord,
    reach: &Coord,
    shrink: &Coord,
) -> Option<AxisBox> {
    // Horizontal slab through p: viable iff no other point shares p's
    // y-level (it would gain the incidence) and no rectangle is degenerate
    // on that level (the slab would strictly contain it).
    let cy = p.coord(1);
    let y_clear = config.points.iter().all(|q| q == p || q.coord(1) != cy)
        && config
            .rects
            .iter()
            .all(|r| !(r.lo().coord(1) == cy && r.hi().coord(1) == cy));
    if y_clear {
        if let Some(h) = half_min_gap_to(cy, config, 1) {
            let h = &h * shrink;
            return Some(make_rect(xmin - reach, xmax + reach, cy - &h, cy + &h));
        }
    }
    // Vertical fallback.
    let cx = p.coord(0);
    let x_clear = config.points.iter().all(|q| q == p || q.coord(0) != cx)
        && config
            .rects
            .iter()
            .all(|r| !(r.lo().coord(0) == cx && r.hi().coord(0) == cx));
    if x_clear {
        if let Some(h) = half_min_gap_to(cx, config, 0) {
            let h = &h * shrink;
            return Some(make_rect(cx - &h, cx + &h, ymin - reach, ymax + reach));
        }
    }
    None
}

/// Half of the minimum nonzero distance from `center` to any coordinate
/// value of the configuration on `axis`; `None` if every value equals it.
fn half_min_gap_to(center: &Coord, config: &IncidenceConfig, axis: usize) -> Option<Coord> {
    let mut best: Option<Coord> = None;
    let mut consider = |v: &Coord| {
        let gap = (v - center).abs();
        if !gap.is_zero() && best.as_ref().is_none_or(|b| gap < *b) {
            best = Some(gap);
        }
    };
    for p in &config.points {
        consider(p.coord(axis));
    }
    for r in &config.rects {
        consider(r.lo().coord(axis));
        consider(r.hi().coord(axis));
    }
    best.map(|b| b.half())
}

fn make_rect(x0: Coord, x1: Coord, y0: Coord, y1: Coord) -> AxisBox {
    AxisBox::new(
        Point::new(vec![x0, y0]).expect("nonempty"),
        Point::new(vec![x1, y1]).expect("nonempty"),
    )
    .expect("slab corners ordered")
}
