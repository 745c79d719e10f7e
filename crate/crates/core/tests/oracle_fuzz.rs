//! Fast/slow equivalence fuzzing: the independent brute-force oracles must
//! agree with the production search paths on every seed, and the structural
//! oracles (interval clique number, membership recounts) must agree with
//! the optimized builders.

use boxdim::constructions::dyadic_k22free_generator;
use boxdim::coord::Coord;
use boxdim::forbidden::{find_ktt, ktt_implies_matching_check, matching_common_box};
use boxdim::geometry::Point;
use boxdim::graph::{degeneracy, incidence_graph, intersection_graph, BoxFamily, Graph};
use boxdim::poset::dominance_comparability_graph;
use boxdim::random::{
    random_box_family, random_points_distinct, random_points_with_ties, rng_from_seed,
};
use boxdim::search::{bruteforce_ktt, bruteforce_matching_box, bruteforce_sepcert_check};
use boxdim::separation::{check_certificate, CertVerdict, SepCert};
use rand::Rng;

fn random_graph(rng: &mut rand_chacha::ChaCha8Rng, n: usize, density_pct: u32) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_range(0..100) < density_pct {
                g.add_edge(u, v);
            }
        }
    }
    g
}

#[test]
fn ktt_fast_equals_bruteforce() {
    let mut rng = rng_from_seed(11);
    for case in 0..300 {
        let t = rng.random_range(2..=3);
        let n = if t == 2 {
            rng.random_range(4..=30)
        } else {
            rng.random_range(6..=14)
        };
        let density = rng.random_range(10..70);
        let g = random_graph(&mut rng, n, density);
        let fast = find_ktt(&g, t);
        let slow = bruteforce_ktt(&g, t);
        assert_eq!(
            fast.is_some(),
            slow.is_some(),
            "case {case}: disagreement at n={n} t={t}: fast={fast:?} slow={slow:?}"
        );
        if let Some(w) = fast {
            assert!(w.verify(&g), "case {case}: fast witness invalid");
        }
        if let Some(w) = slow {
            assert!(w.verify(&g), "case {case}: slow witness invalid");
        }
    }
}

#[test]
fn thirty_vertex_graph_matches_exhaustive() {
    let mut rng = rng_from_seed(12);
    let g = random_graph(&mut rng, 30, 30);
    for t in [2usize, 3] {
        assert_eq!(find_ktt(&g, t).is_some(), bruteforce_ktt(&g, t).is_some());
    }
}

#[test]
fn matching_fast_equals_bruteforce() {
    let mut rng = rng_from_seed(13);
    for case in 0..300 {
        let n = rng.random_range(4..=10);
        let d = rng.random_range(1..=3);
        let t = rng.random_range(2..=3);
        let points = if case % 2 == 0 {
            random_points_distinct(&mut rng, n, d)
        } else {
            random_points_with_ties(&mut rng, n, d, 6)
        };
        let density = rng.random_range(30..100);
        let g = random_graph(&mut rng, n, density);
        let fast = matching_common_box(&points, &g, t);
        let slow = bruteforce_matching_box(&points, &g, t);
        assert_eq!(
            fast.is_some(),
            slow.is_some(),
            "case {case}: n={n} d={d} t={t}"
        );
        if let Some(w) = fast {
            assert!(w.verify(&points, &g));
        }
        if let Some(w) = slow {
            assert!(w.verify(&points, &g));
        }
    }
}

#[test]
fn ten_random_points_complete_graph_pairwise_oracle() {
    let mut rng = rng_from_seed(14);
    for _ in 0..50 {
        let points = random_points_distinct(&mut rng, 10, 2);
        let mut g = Graph::new(10);
        for u in 0..10 {
            for v in u + 1..10 {
                g.add_edge(u, v);
            }
        }
        assert_eq!(
            matching_common_box(&points, &g, 2).is_some(),
            bruteforce_matching_box(&points, &g, 2).is_some()
        );
    }
}

#[test]
fn sepcert_fast_equals_bruteforce() {
    let mut rng = rng_from_seed(15);
    for case in 0..300 {
        let n = rng.random_range(4..=14);
        let d = rng.random_range(1..=3);
        let density = rng.random_range(20..80);
        let g = random_graph(&mut rng, n, density);
        let map: Vec<Point> = (0..n)
            .map(|_| {
                let coords: Vec<i64> = (0..d).map(|_| rng.random_range(0..12)).collect();
                Point::from_ints(&coords)
            })
            .collect();
        let cert = SepCert::new(d, map);
        let fast = check_certificate(&g, &cert).unwrap();
        let slow = bruteforce_sepcert_check(&g, &cert);
        match (&fast, &slow) {
            (CertVerdict::Valid, None) => {}
            (CertVerdict::Violation(_), Some(_)) => {}
            other => panic!("case {case}: disagreement {other:?}"),
        }
    }
}

#[test]
fn implication_holds_on_500_general_position_seeds() {
    let mut rng = rng_from_seed(16);
    for case in 0..500 {
        let n = rng.random_range(4..=12);
        let d = rng.random_range(2..=3);
        let t = rng.random_range(2..=3);
        let points = random_points_distinct(&mut rng, n, d);
        let g = dominance_comparability_graph(&points);
        let report = ktt_implies_matching_check(&points, &g, t)
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(report.general_position);
        if report.matching.is_some() {
            assert!(report.ktt.is_some(), "case {case}");
        }
    }
}

/// Interval graphs are chordal: degeneracy equals clique number minus one,
/// and the clique number of an interval family is the maximum overlap
/// count, computable by an endpoint sweep.
#[test]
fn degeneracy_matches_interval_clique_oracle() {
    let mut rng = rng_from_seed(17);
    for case in 0..200 {
        let n = rng.random_range(2..=40);
        let range = rng.random_range(6..40);
        let fam = random_box_family(&mut rng, n, 1, range);
        let g = intersection_graph(&fam);
        let omega = interval_clique_number(&fam);
        let (k, _) = degeneracy(&g);
        assert_eq!(k, omega - 1, "case {case}: n={n}");
    }
}

fn interval_clique_number(fam: &BoxFamily) -> usize {
    // Closed intervals: process starts before ends at equal coordinates.
    let mut events: Vec<(Coord, i32)> = Vec::new();
    for b in &fam.boxes {
        events.push((b.lo().coord(0).clone(), 0));
        events.push((b.hi().coord(0).clone(), 1));
    }
    events.sort();
    let mut load = 0i64;
    let mut best = 0i64;
    for (_, kind) in events {
        if kind == 0 {
            load += 1;
            best = best.max(load);
        } else {
            load -= 1;
        }
    }
    best as usize
}

/// Independent recount of the dyadic generator's incidences at 64 points:
/// straight per-pair closed containment on raw coordinates, no rank
/// compression.
#[test]
fn dyadic_incidences_match_membership_recount() {
    let config = dyadic_k22free_generator(6).unwrap();
    assert_eq!(config.points.len(), 64);
    let g = incidence_graph(&config);
    let mut recount = 0usize;
    for (i, p) in config.points.iter().enumerate() {
        for (j, r) in config.rects.iter().enumerate() {
            let inside = r.lo().coord(0) <= p.coord(0)
                && p.coord(0) <= r.hi().coord(0)
                && r.lo().coord(1) <= p.coord(1)
                && p.coord(1) <= r.hi().coord(1);
            if inside {
                recount += 1;
                assert!(g.has_edge(i, config.points.len() + j));
            }
        }
    }
    assert_eq!(recount, g.edge_count());
}
