mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ising_decomp::chancellor::complete_with_ancillas;
use ising_decomp::decomposer::coupled_ancillas;
use ising_decomp::{
    bfs_select, build_csr, encode, extract_subproblem, ising_energy, run, solve_anneal, solve_exhaustive,
    AnnealSchedule, FrontierOrder, IsingModel, SolveConfig, SpinState, Subproblem, Subsolver,
};

#[test]
fn vendored_certificates_satisfy_their_instances() {
    let dir = common::data_dir();
    let mut checked = 0;
    for sub in ["satlib", "generated", "tiny"] {
        for entry in std::fs::read_dir(dir.join(sub)).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            let f = common::load(&path);
            match common::certificate(&name, f.num_vars()) {
                Some(x) => {
                    assert!(f.evaluate(&x).unwrap().0, "{name}");
                    let s = complete_with_ancillas(&encode(&f), &x).unwrap();
                    assert_eq!(ising_energy(&encode(&f), &s).unwrap(), 0.0, "{name}");
                    checked += 1;
                }
                None => assert!(name.starts_with("unsat"), "{name} has no certificate"),
            }
        }
    }
    assert!(checked >= 8);
}

#[test]
fn tiny_unsat_fixtures_are_unsatisfiable() {
    for (name, f) in common::tiny_instances() {
        assert_eq!(common::brute_force_sat(&f).is_none(), name.starts_with("unsat"), "{name}");
    }
}

fn union_find_connected(members: &[usize], edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let pos = |v: usize| members.iter().position(|&m| m == v);
    for (a, b) in edges {
        if let (Some(i), Some(j)) = (pos(a), pos(b)) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
    }
    let root = find(&mut parent, 0);
    (0..members.len()).all(|i| find(&mut parent, i) == root)
}

#[test]
fn uf20_selections_fit_and_are_connected() {
    let (_, f) = common::uf20_instances().remove(0);
    let n = f.num_vars();
    let g = build_csr(&encode(&f));
    // variables sharing a clause, taken from the formula rather than the graph
    let clause_edges: Vec<(usize, usize)> = f
        .clauses()
        .iter()
        .flat_map(|c| {
            let v: Vec<usize> = c.iter().map(|l| l.index()).collect();
            [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])]
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for order in [FrontierOrder::Ascending, FrontierOrder::Shuffled] {
        for start in 0..n {
            let sel = bfs_select(&g, n, start, 50, order, &mut rng).unwrap();
            assert_eq!(sel[0], start);
            assert!(sel.iter().all(|&v| v < n));
            let ancillas: BTreeSet<usize> = sel.iter().flat_map(|&v| coupled_ancillas(&g, n, v)).collect();
            assert!(sel.len() + ancillas.len() <= 50);
            assert!(union_find_connected(&sel, clause_edges.iter().copied()));
        }
    }
}

#[test]
fn single_clause_subproblem_reaches_zero() {
    let f = ising_decomp::CnfFormula::from_signed(3, &[[1, -2, 3]]).unwrap();
    let m = encode(&f);
    let g = build_csr(&m);
    let s = SpinState::new(vec![-1, 1, -1, 1]).unwrap();
    let sub = extract_subproblem(&m, &g, 3, &[0, 1, 2], &s, 50).unwrap();
    assert_eq!(sub.len(), 4);
    assert_eq!(sub.num_ancillas(), 1);
    let (_, e) = solve_exhaustive(&sub).unwrap();
    let (_, full) = solve_exhaustive(&Subproblem::from_model(&m)).unwrap();
    assert_eq!(e + sub.offset(), 0.0);
    assert_eq!(e + sub.offset(), full + m.constant());
}

fn random_sub(k: usize, rng: &mut ChaCha8Rng) -> Subproblem {
    let mut m = IsingModel::new(k);
    for i in 0..k {
        m.add_field(i, rng.gen_range(-1.0..1.0)).unwrap();
        for j in i + 1..k {
            if rng.gen_bool(0.3) {
                m.add_coupling(i, j, rng.gen_range(-1.0..1.0)).unwrap();
            }
        }
    }
    Subproblem::from_model(&m)
}

#[test]
fn annealer_matches_exhaustive_on_20_spin_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let schedule = AnnealSchedule::default();
    let mut hits = 0;
    for _ in 0..10 {
        let sub = random_sub(20, &mut rng);
        let (_, exact) = solve_exhaustive(&sub).unwrap();
        let best = (0..10u64)
            .map(|seed| {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let init = SpinState::random(20, &mut r);
                solve_anneal(&sub, &schedule, &init, &mut r).unwrap().1
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best >= exact - 1e-9);
        if best <= exact + 1e-9 {
            hits += 1;
        }
    }
    println!("annealer reached the exhaustive minimum on {hits}/10 instances");
    assert!(hits >= 9, "{hits}/10");
}

#[test]
fn uf50_run_stays_within_capacity() {
    let (_, f) = common::uf50_instances().remove(0);
    let cfg = SolveConfig {
        max_iters: 40,
        seed: 2,
        ..SolveConfig::default()
    };
    let r = run(&f, &cfg).unwrap();
    assert_eq!(r.energy_trace.len(), r.iterations_used);
    assert!(r.per_iteration.iter().all(|it| it.subproblem_size <= 50 && it.start_var < 50));
}

#[test]
fn exhaustive_runs_report_verified_assignments() {
    for (name, f) in common::tiny_instances() {
        if name.starts_with("unsat") {
            continue;
        }
        let cfg = SolveConfig {
            capacity: 22,
            max_iters: 200,
            subsolver: Subsolver::Exhaustive,
            ..SolveConfig::default()
        };
        let r = run(&f, &cfg).unwrap();
        if r.satisfied {
            assert!(f.evaluate(r.assignment.as_ref().unwrap()).unwrap().0, "{name}");
        }
    }
}
