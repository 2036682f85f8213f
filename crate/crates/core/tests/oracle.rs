use annulus_lerw::annular::{grove_ratio, FnTable, GreenTable, ResponseTable, Table};
use annulus_lerw::combinat::{Partition, PartialPairing};
use annulus_lerw::exactnum::{det_generic, int, rat, ExactValue, RatFuncZ, Rational, Ring};
use annulus_lerw::latticegreen::Lattice;
use annulus_lerw::oracle::*;
use annulus_lerw::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn path_graph(c: Rational, zip: i64) -> FiniteGraph {
    let mut g = FiniteGraph::new();
    let a = g.add_vertex("a");
    let b = g.add_vertex("b");
    g.add_edge(a, b, c, zip);
    g.nodes = vec![a, b];
    g.boundary = Some(b);
    g
}

fn four_cycle() -> FiniteGraph {
    let mut g = FiniteGraph::new();
    for i in 0..4 {
        g.add_vertex(format!("{i}"));
    }
    let inf = g.add_vertex("inf");
    g.add_edge(0, 1, rat(1, 1), 0);
    g.add_edge(1, 2, rat(2, 1), 0);
    g.add_edge(2, 3, rat(1, 2), 0);
    g.add_edge(3, 0, rat(3, 1), 1);
    g.add_edge(2, inf, rat(1, 1), 0);
    g.nodes = vec![0, 2, inf];
    g.boundary = Some(inf);
    g
}

#[test]
fn single_edge_green() {
    let g = path_graph(rat(1, 1), 0);
    let gm = exact_green(&g).unwrap();
    assert_eq!(gm.get(0, 0), RatFuncZ::one());
    assert_eq!(gm.get(0, 1), RatFuncZ::zero());
    let t = z_partition(&g, &Partition::parse(2, "1,2").unwrap()).unwrap();
    assert_eq!(t, LaurentZ::one());
}

#[test]
fn green_inverts_laplacian() {
    let g = four_cycle();
    let gm = exact_green(&g).unwrap();
    let lap = g.laplacian();
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = RatFuncZ::zero();
            for k in 0..4 {
                acc = acc.add(&lap[i][k].to_ratfunc().mul(&gm.get(k, j)));
            }
            assert_eq!(acc, if i == j { RatFuncZ::one() } else { RatFuncZ::zero() });
        }
    }
    // G_ij(z) = G_ji(1/z)
    for i in 0..4 {
        for j in 0..4 {
            let a = gm.get(i, j);
            let b = gm.get(j, i);
            for x in [rat(2, 1), rat(-3, 5), rat(7, 4)] {
                assert_eq!(a.eval(&x), b.eval(&x.recip()));
            }
        }
    }
}

#[test]
fn green_at_one_matches_symbolic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let g = random_annular_graph(&mut rng, 4, 10);
        let gm = exact_green(&g).unwrap();
        let (v, d) = green_at_one(&g).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let (a, b) = value_and_deriv(&gm.get(i, j)).unwrap();
                assert_eq!((a, b), (v[i][j].clone(), d[i][j].clone()));
            }
        }
    }
}

#[test]
fn crsf_sum_is_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut graphs = vec![four_cycle()];
    for _ in 0..6 {
        graphs.push(random_annular_graph(&mut rng, 2, 9));
    }
    for g in graphs {
        let b = g.boundary.unwrap();
        let ids: Vec<usize> = (0..g.len()).filter(|&v| v != b).collect();
        let lap = g.laplacian();
        let sub: Vec<Vec<LaurentZ>> = ids.iter().map(|&i| ids.iter().map(|&j| lap[i][j].clone()).collect()).collect();
        let det = det_generic(&sub);
        let table = enumerate_groves(&g, &[b]).unwrap();
        let total = table.values().fold(LaurentZ::zero(), |a, w| a.add(w));
        assert_eq!(det, total);
    }
}

#[test]
fn response_theorems_small() {
    let r = check_response_theorems(&path_graph(rat(3, 2), 1)).unwrap();
    assert_eq!(r.entries, 2);
    check_response_theorems(&four_cycle()).unwrap();
    let (g, _) = wired_grid(Lattice::Square, 1);
    let mut g = g;
    // nodes: three boundary-adjacent box vertices and the wired vertex
    g.nodes = vec![g.index("1,0").unwrap(), g.index("0,1").unwrap(), g.index("-1,0").unwrap(), 0];
    let r = check_response_theorems(&g).unwrap();
    assert!(r.principal_minors > 0 && r.mixed_minors > 0 && r.green_blocks == 1);
}

#[test]
fn response_theorems_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..12 {
        let n = [2, 4, 6][k % 3];
        let g = random_annular_graph(&mut rng, n, 11);
        check_response_theorems(&g).unwrap_or_else(|e| panic!("{e} on {:?}", g));
    }
}

fn table_from(v: Vec<Vec<Rational>>, d: Vec<Vec<Rational>>) -> FnTable<ExactValue> {
    FnTable {
        value: Box::new(move |i, j| ExactValue::from_rational(v[i][j].clone())),
        deriv: Box::new(move |i, j| ExactValue::from_rational(d[i][j].clone())),
    }
}

fn random_pairing<R: Rng>(rng: &mut R, n: usize, all_listed: bool) -> PartialPairing {
    let mut nodes: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        nodes.swap(i, rng.gen_range(0..=i));
    }
    let k = rng.gen_range(1..=n / 2);
    let mut parts: Vec<Vec<usize>> = (0..k).map(|i| vec![nodes[2 * i], nodes[2 * i + 1]]).collect();
    for &x in &nodes[2 * k..] {
        if all_listed || rng.gen_bool(0.5) {
            parts.push(vec![x]);
        }
    }
    Partition::new(n, parts).unwrap().to_partial_pairing().unwrap()
}

#[test]
fn grove_ratio_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for k in 0..30 {
        let n = [2, 4, 6][k % 3];
        let g = random_annular_graph(&mut rng, n, 10);
        let (lv, ld) = response_first_order(&g).unwrap();
        let (gv, gd) = green_first_order(&g).unwrap();
        let lt = table_from(lv, ld);
        let gt = table_from(gv, gd);
        let singles = Partition::new(n, (1..=n).map(|i| vec![i]).collect()).unwrap();
        let one_part = Partition::new(n, vec![(1..=n).collect()]).unwrap();
        let z_single = z_partition(&g, &singles).unwrap().eval_one();
        let z_tree = z_partition(&g, &one_part).unwrap().eval_one();
        for _ in 0..4 {
            let sigma = random_pairing(&mut rng, n, true);
            let z = z_partition(&g, &Partition::new(n, partition_parts(&sigma)).unwrap()).unwrap().eval_one();
            match grove_ratio(&sigma, &Table::Response(ResponseTable { data: &lt })) {
                Ok(r) => assert_eq!(r.as_rational().unwrap(), &z / &z_single, "response {sigma}"),
                Err(Error::NotAnnular(_)) => assert_eq!(z, int(0), "{sigma}"),
                Err(e) => panic!("{e}"),
            }
            let sigma = random_pairing(&mut rng, n, false);
            if !sigma.pairs.iter().any(|p| p.0 == n || p.1 == n) {
                continue;
            }
            let z = z_partition(&g, &Partition::new(n, partition_parts(&sigma)).unwrap()).unwrap().eval_one();
            match grove_ratio(&sigma, &Table::Green(GreenTable { n, data: &gt })) {
                Ok(r) => assert_eq!(r.as_rational().unwrap(), &z / &z_tree, "green {sigma}"),
                Err(Error::NotAnnular(_)) => assert_eq!(z, int(0), "{sigma}"),
                Err(e) => panic!("{e}"),
            }
            checked += 1;
        }
    }
    assert!(checked > 20);
}

fn partition_parts(p: &PartialPairing) -> Vec<Vec<usize>> {
    p.pairs.iter().map(|&(a, b)| vec![a, b]).chain(p.singletons.iter().map(|&s| vec![s])).collect()
}

#[test]
fn wilson_is_deterministic_and_conserves_flow() {
    let a = wilson_sample(Lattice::Square, 20, 7, 3000);
    let b = wilson_sample(Lattice::Square, 20, 7, 3000);
    assert_eq!(a, b);
    assert_eq!(a.vertex((0, 0)), 1.0);
    for lat in Lattice::ALL {
        let t = wilson_sample(lat, 16, 1, 2000);
        for (&p, &n) in &t.vertices {
            let inflow: u64 = t.edges.iter().filter(|(e, _)| e.1 == p).map(|(_, c)| c).sum();
            let outflow: u64 = t.edges.iter().filter(|(e, _)| e.0 == p).map(|(_, c)| c).sum::<u64>()
                + t.exits.get(&p).copied().unwrap_or(0);
            let delta = if p == (0, 0) { t.samples } else { 0 };
            assert_eq!(inflow + delta, n, "{lat} {p:?}");
            assert_eq!(outflow, n, "{lat} {p:?}");
        }
    }
    assert!(wilson_sample(Lattice::Square, 16, 1, 0).vertices.is_empty());
    // chunks are seeded by index, so the thread pool does not matter
    let seq = wilson_sample_with(Lattice::Triangular, 24, 3, 9000, false);
    assert_eq!(seq, wilson_sample_with(Lattice::Triangular, 24, 3, 9000, true));
}

#[test]
fn forest_weight_matches_grove_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..40 {
        let n = rng.gen_range(2..=4);
        let mut g = random_annular_graph(&mut rng, n, 9);
        for e in g.edges.iter_mut() {
            e.zip = 0;
        }
        let k = rng.gen_range(1..=n);
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for i in 1..=n {
            if parts.len() < k && (rng.gen_bool(0.5) || parts.is_empty()) {
                parts.push(vec![i]);
            } else {
                let j = rng.gen_range(0..parts.len());
                parts[j].push(i);
            }
        }
        let sigma = Partition::new(n, parts.clone()).unwrap();
        let want = z_partition(&g, &sigma).unwrap().eval_one();
        let blocks: Vec<Vec<usize>> = parts.iter().map(|p| p.iter().map(|&i| g.nodes[i - 1]).collect()).collect();
        assert_eq!(forest_weight(&g, &blocks).unwrap(), want, "{:?}", parts);
    }
}
