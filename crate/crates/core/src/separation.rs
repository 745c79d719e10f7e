//! Separation-dimension certificates: an embedding of the vertices into
//! `ℝ^d` is valid when every two vertex-disjoint edges span disjoint closed
//! axis-parallel boxes (touching counts as a violation).

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::forbidden::{find_ktt, KttWitness};
use crate::geometry::{boxes_intersect, spanned_box, AxisBox, Point};
use crate::graph::Graph;
use crate::poset::dominance_comparability_graph;

#[derive(Debug, thiserror::Error)]
pub enum SeparationError {
    #[error("certificate covers {cert} vertices but the graph has {graph}")]
    MissingVertices { cert: usize, graph: usize },
    #[error("certificate point for vertex {vertex} has dimension {got}, expected {want}")]
    WrongDimension {
        vertex: usize,
        got: usize,
        want: usize,
    },
    #[error("dominance comparability graph contains K_{{2,2}}: {0:?}")]
    K22Present(KttWitness),
}

/// A claimed separation embedding: vertex `i` maps to `map[i]`.
///
/// The JSON form mirrors the realizer certificate: a `map` object keyed by
/// vertex index, covering `0..n` contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct SepCert {
    pub dim: usize,
    pub map: Vec<Point>,
}

impl SepCert {
    pub fn new(dim: usize, map: Vec<Point>) -> Self {
        SepCert { dim, map }
    }
}

#[derive(Serialize, Deserialize)]
struct SepCertJson {
    dim: usize,
    map: BTreeMap<String, Point>,
}

impl Serialize for SepCert {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SepCertJson {
            dim: self.dim,
            map: self
                .map
                .iter()
                .enumerate()
                .map(|(i, p)| (i.to_string(), p.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SepCert {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = SepCertJson::deserialize(deserializer)?;
        let n = json.map.len();
        let mut map: Vec<Option<Point>> = vec![None; n];
        for (key, point) in json.map {
            let idx: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("vertex key {key:?} is not an index")))?;
            if idx >= n {
                return Err(D::Error::custom(format!(
                    "vertex keys must cover 0..{n}, found {idx}"
                )));
            }
            map[idx] = Some(point);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| D::Error::custom(format!("missing vertex {i}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SepCert { dim: json.dim, map })
    }
}

/// Two vertex-disjoint edges whose spanned boxes meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepViolation {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertVerdict {
    Valid,
    Violation(SepViolation),
}

/// Verifies a separation certificate by scanning every pair of
/// vertex-disjoint edges. Exact; `O(m^2)` box-disjointness tests.
pub fn check_certificate(g: &Graph, cert: &SepCert) -> Result<CertVerdict, SeparationError> {
    if cert.map.len() != g.n() {
        return Err(SeparationError::MissingVertices {
            cert: cert.map.len(),
            graph: g.n(),
        });
    }
    for (v, p) in cert.map.iter().enumerate() {
        if p.dim() != cert.dim {
            return Err(SeparationError::WrongDimension {
                vertex: v,
                got: p.dim(),
                want: cert.dim,
            });
        }
    }
    let edges = g.edges();
    let boxes: Vec<AxisBox> = edges
        .iter()
        .map(|&(u, v)| spanned_box(&cert.map[u], &cert.map[v]).expect("dims checked"))
        .collect();
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        for j in i + 1..edges.len() {
            let (c, d) = edges[j];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if boxes_intersect(&boxes[i], &boxes[j]).expect("dims checked") {
                return Ok(CertVerdict::Violation(SepViolation {
                    first: edges[i],
                    second: edges[j],
                }));
            }
        }
    }
    Ok(CertVerdict::Valid)
}

/// How `sepdim_upper_search` explores the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Enumerate every assignment of distinct per-axis grid values.
    /// Complete over coordinate order types when `gridsize >= n`.
    Exhaustive,
    /// Seeded hill climbing with restarts.
    Randomized { restarts: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub cert: Option<SepCert>,
    /// True only when the full order-type space was enumerated, in which
    /// case an absent certificate is a lower-bound proof for this grid.
    pub exhaustive: bool,
}

/// Searches for a valid separation certificate on the integer grid
/// `{0..gridsize-1}^d`. Coordinates are assigned injectively per axis, which
/// loses no generality: any valid embedding stays valid after breaking ties
/// and rank-compressing each axis.
pub fn sepdim_upper_search(
    g: &Graph,
    d: usize,
    gridsize: usize,
    mode: SearchMode,
) -> SearchOutcome {
    assert!(d >= 1);
    let n = g.n();
    match mode {
        SearchMode::Exhaustive => {
            let cert = exhaustive_search(g, d, gridsize);
            SearchOutcome {
                exhaustive: gridsize >= n,
                cert,
            }
        }
        SearchMode::Randomized { restarts, seed } => {
            let cert = randomized_search(g, d, gridsize, restarts, seed);
            SearchOutcome {
                cert,
                exhaustive: false,
            }
        }
    }
}

fn grid_point(coords: &[usize]) -> Point {
    Point::new(
        coords
            .iter()
            .map(|&c| crate::coord::Coord::from_int(c as i64))
            .collect(),
    )
    .expect("d >= 1")
}

fn assignment_cert(d: usize, assign: &[Vec<usize>]) -> SepCert {
    let n = assign[0].len();
    let map = (0..n)
        .map(|v| grid_point(&(0..d).map(|axis| assign[axis][v]).collect::<Vec<_>>()))
        .collect();
    SepCert::new(d, map)
}

fn exhaustive_search(g: &Graph, d: usize, gridsize: usize) -> Option<SepCert> {
    let n = g.n();
    if gridsize < n {
        // Injective per-axis assignment impossible; nothing to enumerate
        // beyond what larger grids cover.
        return None;
    }
    let edges = g.edges();
    // assign[axis][vertex] = grid value.
    let mut assign: Vec<Vec<usize>> = vec![vec![0; n]; d];
    let mut used: Vec<Vec<bool>> = vec![vec![false; gridsize]; d];
    fn place(
        g: &Graph,
        edges: &[(usize, usize)],
        d: usize,
        gridsize: usize,
        v: usize,
        axis: usize,
        assign: &mut Vec<Vec<usize>>,
        used: &mut Vec<Vec<bool>>,
    ) -> bool {
        let n = g.n();
        if v == n {
            return violation_free(edges, assign, v);
        }
        if axis == d {
            // Prune on the fully-assigned prefix before recursing deeper.
            if !violation_free(edges, assign, v + 1) {
                return false;
            }
            return place(g, edges, d, gridsize, v + 1, 0, assign, used);
        }
        for value in 0..gridsize {
            if used[axis][value] {
                continue;
            }
            used[axis][value] = true;
            assign[axis][v] = value;
            if place(g, edges, d, gridsize, v, axis + 1, assign, used) {
                return true;
            }
            used[axis][value] = false;
        }
        false
    }
    if place(g, &edges, d, gridsize, 0, 0, &mut assign, &mut used) {
        let cert = assignment_cert(d, &assign);
        debug_assert!(matches!(
            check_certificate(g, &cert),
            Ok(CertVerdict::Valid)
        ));
        Some(cert)
    } else {
        None
    }
}

/// Counts no violations among edges fully assigned below `bound` vertices.
fn violation_free(edges: &[(usize, usize)], assign: &[Vec<usize>], bound: usize) -> bool {
    let ready: Vec<&(usize, usize)> = edges
        .iter()
        .filter(|(a, b)| *a < bound && *b < bound)
        .collect();
    for (i, &&(a, b)) in ready.iter().enumerate() {
        for &&(c, dv) in ready.iter().skip(i + 1) {
            if a == c || a == dv || b == c || b == dv {
                continue;
            }
            let disjoint_somewhere = assign.iter().any(|vals| {
                let (lo1, hi1) = minmax(vals[a], vals[b]);
                let (lo2, hi2) = minmax(vals[c], vals[dv]);
                hi1 < lo2 || hi2 < lo1
            });
            if !disjoint_somewhere {
                return false;
            }
        }
    }
    true
}

fn minmax(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn randomized_search(
    g: &Graph,
    d: usize,
    gridsize: usize,
    restarts: usize,
    seed: u64,
) -> Option<SepCert> {
    let n = g.n();
    if gridsize < n {
        return None;
    }
    let edges = g.edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts.max(1) {
        let mut assign: Vec<Vec<usize>> = (0..d)
            .map(|_| {
                let mut vals: Vec<usize> = (0..gridsize).collect();
                // Fisher-Yates prefix shuffle: pick n distinct values.
                for i in 0..n {
                    let j = rng.random_range(i..gridsize);
                    vals.swap(i, j);
                }
                vals.truncate(n);
                vals
            })
            .collect();
        let mut violations = count_violations(&edges, &assign);
        let budget = 200 * n.max(1) * d;
        for _ in 0..budget {
            if violations == 0 {
                break;
            }
            let axis = rng.random_range(0..d);
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            assign[axis].swap(u, v);
            let next = count_violations(&edges, &assign);
            if next <= violations {
                violations = next;
            } else {
                assign[axis].swap(u, v);
            }
        }
        if violations == 0 {
            let cert = assignment_cert(d, &assign);
            if matches!(check_certificate(g, &cert), Ok(CertVerdict::Valid)) {
                return Some(cert);
            }
        }
    }
    None
}

fn count_violations(edges: &[(usize, usize)], assign: &[Vec<usize>]) -> usize {
    let mut count = 0;
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, dv) in edges.iter().skip(i + 1) {
            if a == c || a == dv || b == c || b == dv {
                continue;
            }
            let separated = assign.iter().any(|vals| {
                let (lo1, hi1) = minmax(vals[a], vals[b]);
                let (lo2, hi2) = minmax(vals[c], vals[dv]);
                hi1 < lo2 || hi2 < lo1
            });
            if !separated {
                count += 1;
            }
        }
    }
    count
}

/// For a point set whose dominance comparability graph is K_{2,2}-free, the
/// points themselves are a valid separation certificate: two comparable
/// pairs whose spanned boxes met would yield a 2-matching with a common
/// point and hence a K_{2,2}. Returns the graph and the identity embedding.
pub fn poset_points_certificate(points: &[Point]) -> Result<(Graph, SepCert), SeparationError> {
    let g = dominance_comparability_graph(points);
    if let Some(w) = find_ktt(&g, 2) {
        return Err(SeparationError::K22Present(w));
    }
    let dim = points.first().map(|p| p.dim()).unwrap_or(1);
    let cert = SepCert::new(dim, points.to_vec());
    let verdict = check_certificate(&g, &cert)?;
    assert_eq!(
        verdict,
        CertVerdict::Valid,
        "identity embedding of a K_{{2,2}}-free dominance order must separate"
    );
    Ok((g, cert))
}
