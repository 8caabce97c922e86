use dtqw::walker::{coin_apply, shift_apply, EvolveOptions};
use dtqw::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix64 {
    if d == 1 {
        return CMatrix::diagonal(&[Complex64::from_polar(1.0, rng.gen_range(-3.0..3.0))]);
    }
    let basis = hermitian_basis::<f64>(d).unwrap();
    let alpha = (0..basis.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
    lie_coin(&LieParams::new(alpha).unwrap(), &basis).unwrap()
}

fn random_state(g: &RegularGraph, rng: &mut ChaCha8Rng) -> WalkState64 {
    let n = g.joint_dimension();
    let raw: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    WalkState::from_amplitudes(g.degree(), g.num_vertices(), raw.into_iter().map(|z| z / norm).collect()).unwrap()
}

fn hypercube3() -> RegularGraph {
    let mut edges = Vec::new();
    for v in 0..8usize {
        for b in 0..3 {
            let u = v ^ (1 << b);
            if v < u {
                edges.push((v + 1, u + 1));
            }
        }
    }
    RegularGraph::from_edges(8, &edges).unwrap()
}

fn small_graphs() -> Vec<RegularGraph> {
    let mut gs: Vec<RegularGraph> = (3..=9).map(|n| build_cycle(n).unwrap()).collect();
    gs.extend((2..=6).map(|n| build_complete(n).unwrap()));
    gs.push(build_petersen());
    gs.push(hypercube3());
    gs.push(build_random_regular(12, 3, 4).unwrap());
    gs.push(build_random_regular(16, 4, 9).unwrap());
    gs
}

/// Dense one-step operator, one column per basis vector.
fn dense_step(rm: &RotationMap, coin: &CMatrix64, d: usize, n: usize) -> CMatrix64 {
    let dim = d * n;
    let mut u = CMatrix::zeros(dim, dim);
    for j in 1..=d {
        for v in 1..=n {
            let e = WalkState64::basis(d, n, j, v).unwrap();
            let out = shift_apply(rm, &coin_apply(coin, &e).unwrap()).unwrap();
            let col = (j - 1) * n + (v - 1);
            for (r, z) in out.amplitudes().iter().enumerate() {
                u[(r, col)] = *z;
            }
        }
    }
    u
}

#[test]
fn dense_step_operator_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for g in small_graphs() {
        let (d, n) = (g.degree(), g.num_vertices());
        assert!(d * n <= 64);
        let rm = compute_rotation_map(&g).unwrap();
        let u = dense_step(&rm, &random_unitary(d, &mut rng), d, n);
        let gram = &u.adjoint() * &u;
        assert!(gram.max_abs_diff(&CMatrix::identity(d * n)) < 1e-10, "{n} vertices, degree {d}");
    }
}

#[test]
fn step_is_coin_then_shift() {
    // U |j, v> = sum_i c[i][j] |i, neighbor_of(v, i)>
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = build_petersen();
    let rm = compute_rotation_map(&g).unwrap();
    let c = random_unitary(3, &mut rng);
    let sched = CoinSchedule::single(c.clone(), vec![], 1).unwrap();
    for j in 1..=3 {
        for v in 1..=10 {
            let out = evolve(&rm, &sched, &WalkState::basis(3, 10, j, v).unwrap()).unwrap();
            for i in 1..=3 {
                let w = rm.neighbor_of(v, i).unwrap();
                for u in 1..=10 {
                    let want = if u == w { c[(i - 1, j - 1)] } else { Complex64::new(0.0, 0.0) };
                    assert!((out.amplitude(i, u) - want).norm() < 1e-15);
                }
            }
        }
    }
}

#[test]
fn norm_is_kept_for_a_hundred_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in [build_petersen(), build_fullerene_c60(), build_random_regular(30, 4, 1).unwrap()] {
        let rm = compute_rotation_map(&g).unwrap();
        let coins = (0..100).map(|_| random_unitary(g.degree(), &mut rng)).collect();
        let sched = CoinSchedule::per_step(coins, vec![]).unwrap();
        let s = evolve(&rm, &sched, &random_state(&g, &mut rng)).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-10);
        let p = measure_positions(&s);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(p.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn renormalize_option_keeps_unit_norm() {
    let g = build_cycle(11).unwrap();
    let rm = compute_rotation_map(&g).unwrap();
    let sched = CoinSchedule::single(fourier_matrix::<f64>(2).unwrap(), vec![], 500).unwrap();
    let s0 = initial_state(&g, &PositionInit::Vertex(1), &CoinInit::Fourier).unwrap();
    let s = walker::evolve_with(&rm, &sched, &s0, EvolveOptions { renormalize: true }).unwrap();
    assert!((s.norm() - 1.0).abs() < 1e-14);
}

#[test]
fn bipartite_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut graphs: Vec<RegularGraph> = [4, 6, 10, 16].iter().map(|&n| build_cycle(n).unwrap()).collect();
    graphs.push(hypercube3());
    for g in graphs {
        let side = g.bipartition().expect("bipartite");
        let rm = compute_rotation_map(&g).unwrap();
        let d = g.degree();
        for start in [1, 2] {
            let s0 = initial_state(&g, &PositionInit::Vertex(start), &CoinInit::Fourier).unwrap();
            for t in 1..=9 {
                let coins = (0..t).map(|_| random_unitary(d, &mut rng)).collect();
                let p = measure_positions(&evolve(&rm, &CoinSchedule::per_step(coins, vec![]).unwrap(), &s0).unwrap());
                let same_side: f64 = (0..g.num_vertices()).filter(|&v| side[v] == side[start - 1]).map(|v| p[v]).sum();
                let expected = if t % 2 == 1 { 0.0 } else { 1.0 };
                assert!((same_side - expected).abs() < 1e-12, "t = {t}: {same_side}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_is_linear(seed in any::<u64>(), angle in 0.0f64..6.3, phase in 0.0f64..6.3, t in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = build_petersen();
        let rm = compute_rotation_map(&g).unwrap();
        let coins = (0..t).map(|_| random_unitary(3, &mut rng)).collect();
        let sched = CoinSchedule::per_step(coins, vec![]).unwrap();
        let j = rng.gen_range(1..=3);
        let v = rng.gen_range(1..=10);
        let (j2, v2) = if (j, v) == (1, 1) { (2, 7) } else { (1, 1) };
        let s1 = WalkState::basis(3, 10, j, v).unwrap();
        let s2 = WalkState::basis(3, 10, j2, v2).unwrap();
        let a = Complex64::new(angle.cos(), 0.0);
        let b = Complex64::from_polar(angle.sin(), phase);
        let mix: Vec<Complex64> = s1.amplitudes().iter().zip(s2.amplitudes()).map(|(x, y)| a * x + b * y).collect();
        let lhs = evolve(&rm, &sched, &WalkState::from_amplitudes(3, 10, mix).unwrap()).unwrap();
        let e1 = evolve(&rm, &sched, &s1).unwrap();
        let e2 = evolve(&rm, &sched, &s2).unwrap();
        for ((l, x), y) in lhs.amplitudes().iter().zip(e1.amplitudes()).zip(e2.amplitudes()) {
            prop_assert!((l - (a * x + b * y)).norm() < 1e-10);
        }
    }

    #[test]
    fn global_phase_leaves_marginals(seed in any::<u64>(), shift in -10.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = build_fullerene_c60();
        let rm = compute_rotation_map(&g).unwrap();
        let theta: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.2..3.2)).collect();
        let moved: Vec<f64> = theta.iter().map(|x| x + shift).collect();
        let s0 = initial_state(&g, &PositionInit::Vertex(1), &CoinInit::Fourier).unwrap();
        let run = |th: Vec<f64>| {
            let c = torus_coin(&TorusParams::new(th, Periodicity::TwoPi).unwrap());
            measure_positions(&evolve(&rm, &CoinSchedule::single(c, vec![], 13).unwrap(), &s0).unwrap())
        };
        for (x, y) in run(theta).iter().zip(run(moved)) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}
