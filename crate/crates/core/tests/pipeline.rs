//! Structural pipeline tests: the split recursion against the matching
//! oracle at every node, perturbation invariance, the certification
//! pipeline over random K_{t,t}-free families, and the identity-embedding
//! bridge for K_{2,2}-free dominance orders.

use boxdim::bounds::{certify_edge_bound, perturb_general_position, split_decompose};
use boxdim::forbidden::{find_ktt, in_general_position, matching_common_box};
use boxdim::geometry::{boxes_intersect, spanned_box, Point};
use boxdim::graph::{intersection_graph, Graph};
use boxdim::random::{
    random_matching_free_instance, random_points_with_ties, random_thin_box_family, rng_from_seed,
};
use boxdim::separation::{check_certificate, poset_points_certificate, CertVerdict, SepCert};
use rand::Rng;

#[test]
fn split_tree_nodes_stay_matching_free() {
    let mut rng = rng_from_seed(21);
    for t in [2usize, 3] {
        for _ in 0..30 {
            let n = rng.random_range(6..=16);
            let d = rng.random_range(2..=3);
            let (points, g) = random_matching_free_instance(&mut rng, n, d, t, 3 * n);
            let tree = split_decompose(&points, &g);
            assert!(tree.edge_conservation_holds());
            assert!(tree.balanced());
            assert!(tree.projection_fidelity_holds());
            tree.verify_no_matching(t)
                .expect("projection preserves the no-matching property at every node");
        }
    }
}

#[test]
fn perturbation_preserves_tie_free_answers() {
    let mut rng = rng_from_seed(22);
    for _ in 0..100 {
        let n = rng.random_range(4..=12);
        let d = rng.random_range(1..=3);
        // Wide range makes ties unlikely; skip instances that have them.
        let points = random_points_with_ties(&mut rng, n, d, 1000);
        if !in_general_position(&points) {
            continue;
        }
        let density = rng.random_range(20..90);
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_range(0..100) < density {
                    g.add_edge(u, v);
                }
            }
        }
        let perturbed = perturb_general_position(&points);
        for t in [2usize, 3] {
            assert_eq!(
                matching_common_box(&points, &g, t).is_some(),
                matching_common_box(&perturbed, &g, t).is_some(),
                "perturbation must not change order-type predicates"
            );
        }
    }
}

#[test]
fn perturbation_resolves_ties_without_reordering() {
    let mut rng = rng_from_seed(23);
    for _ in 0..100 {
        let n = rng.random_range(2..=14);
        let d = rng.random_range(1..=3);
        let points = random_points_with_ties(&mut rng, n, d, 4);
        let out = perturb_general_position(&points);
        assert!(in_general_position(&out));
        for axis in 0..d {
            for i in 0..n {
                for j in 0..n {
                    if points[i].coord(axis) < points[j].coord(axis) {
                        assert!(out[i].coord(axis) < out[j].coord(axis));
                    }
                    if i < j && points[i].coord(axis) == points[j].coord(axis) {
                        assert!(out[i].coord(axis) < out[j].coord(axis));
                    }
                }
            }
        }
    }
}

#[test]
fn certify_holds_on_200_filtered_random_families() {
    let mut rng = rng_from_seed(24);
    let mut certified = 0usize;
    for _ in 0..200 {
        let n = rng.random_range(4..=64);
        // Thin boxes over a wide range keep the graph sparse enough that
        // K_{2,2}-free families actually occur.
        let range = 8 * n as i64;
        let side = 2 * (n as f64).sqrt() as i64 + 1;
        let fam = random_thin_box_family(&mut rng, n, 2, range, side);
        let g = intersection_graph(&fam);
        if find_ktt(&g, 2).is_some() {
            continue;
        }
        let report = certify_edge_bound(&fam, 2).expect("family was filtered K_{2,2}-free");
        assert!(report.holds);
        assert!(2 * report.half_edges >= report.measured_edges);
        certified += 1;
    }
    assert!(certified >= 50, "only {certified} families were K_2,2-free");
}

#[test]
fn identity_embedding_bridge_for_free_dominance_orders() {
    let mut rng = rng_from_seed(25);
    let mut bridged = 0usize;
    for _ in 0..300 {
        let n = rng.random_range(4..=12);
        let d = rng.random_range(2..=3);
        let points = boxdim::random::random_points_distinct(&mut rng, n, d);
        match poset_points_certificate(&points) {
            Ok((g, cert)) => {
                bridged += 1;
                assert_eq!(cert.dim, d);
                assert_eq!(check_certificate(&g, &cert).unwrap(), CertVerdict::Valid);
            }
            Err(_) => continue, // dominance order contained K_{2,2}
        }
    }
    assert!(bridged >= 50, "only {bridged} K_2,2-free orders seen");
}

#[test]
fn certificate_check_is_axis_permutation_invariant() {
    let mut rng = rng_from_seed(26);
    for _ in 0..50 {
        let n = rng.random_range(4..=10);
        let d = 3;
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_range(0..100) < 50 {
                    g.add_edge(u, v);
                }
            }
        }
        let map: Vec<Point> = (0..n)
            .map(|_| {
                let c: Vec<i64> = (0..d).map(|_| rng.random_range(0..10)).collect();
                Point::from_ints(&c)
            })
            .collect();
        let cert = SepCert::new(d, map.clone());
        let verdict = check_certificate(&g, &cert).unwrap();
        // Relabel coordinates: rotate the axes.
        let rotated: Vec<Point> = map
            .iter()
            .map(|p| {
                let mut c: Vec<_> = p.coords().to_vec();
                c.rotate_left(1);
                Point::new(c).unwrap()
            })
            .collect();
        let verdict_rot = check_certificate(&g, &SepCert::new(d, rotated)).unwrap();
        assert_eq!(
            matches!(verdict, CertVerdict::Valid),
            matches!(verdict_rot, CertVerdict::Valid)
        );
    }
}

#[test]
fn spanned_box_predicates_agree_on_ten_thousand_pairs() {
    let mut rng = rng_from_seed(27);
    for _ in 0..10_000 {
        let d = rng.random_range(1..=4);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let a: Vec<i64> = (0..d).map(|_| rng.random_range(-20..20)).collect();
            let b: Vec<i64> = (0..d).map(|_| rng.random_range(-20..20)).collect();
            spanned_box(&Point::from_ints(&a), &Point::from_ints(&b)).unwrap()
        };
        let x = mk(&mut rng);
        let y = mk(&mut rng);
        let xy = boxes_intersect(&x, &y).unwrap();
        assert_eq!(xy, boxes_intersect(&y, &x).unwrap());
        let manual = (0..d)
            .all(|i| !(x.hi().coord(i) < y.lo().coord(i) || y.hi().coord(i) < x.lo().coord(i)));
        assert_eq!(xy, manual);
    }
}
