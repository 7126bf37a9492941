use hyperglass::ensembles::PUniformHypergraph;
use hyperglass::objectives::{hamiltonian, psi, qcut_value, Kernel, SpinConfig, WeightTensor};
use proptest::prelude::*;

fn arb_kernel() -> impl Strategy<Value = Kernel> {
    (2usize..=4, 2usize..=4, prop::collection::vec(-5i32..5, 256)).prop_map(|(p, q, vals)| {
        Kernel::from_fn(p, q, |a| {
            let idx = a.iter().fold(0usize, |acc, &x| acc * 4 + x as usize);
            vals[idx % vals.len()] as f64 / 3.0
        })
        .unwrap()
    })
}

proptest! {
    #[test]
    fn kernel_values_ignore_argument_order(k in arb_kernel(), args in prop::collection::vec(0u8..4, 4), perm_seed in any::<u64>()) {
        let args: Vec<u8> = args.iter().take(k.p()).map(|&a| a % k.q() as u8).collect();
        let mut shuffled = args.clone();
        // Fisher-Yates driven by the seed
        let mut s = perm_seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(k.eval(&args).to_bits(), k.eval(&shuffled).to_bits());
    }

    #[test]
    fn balanced_pair_identity(half in 2usize..=10, seed in any::<u64>()) {
        let n = 2 * half;
        let mut spins: Vec<i8> = (0..n).map(|i| if i < half { 1 } else { -1 }).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            spins.swap(i, (s >> 33) as usize % (i + 1));
        }
        let count = spins.iter().flat_map(|a| spins.iter().map(move |b| (a != b) as usize)).sum::<usize>();
        prop_assert_eq!(count, n * n / 2);
    }

    #[test]
    fn psi_relabel_invariance_for_cut(q in 2usize..=5, raw in prop::collection::vec(0.0f64..1.0, 5), rot in 0usize..5) {
        let k = Kernel::cut(3, q).unwrap();
        let total: f64 = raw[..q].iter().sum::<f64>() + 1e-9;
        let mut m: Vec<f64> = raw[..q].iter().map(|x| (x + 1e-9 / q as f64) / total).collect();
        let fix = 1.0 - m.iter().sum::<f64>();
        m[0] += fix;
        let mut perm = m.clone();
        perm.rotate_left(rot % q);
        let a = psi(&k, &m).unwrap();
        let b = psi(&k, &perm).unwrap();
        prop_assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn adjacency_hamiltonian_is_p_times_edge_sum(seed in any::<u64>(), p in 2usize..=3) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 8;
        let g = hyperglass::ensembles::gen_er_hypergraph(n, p, 3.0, &mut rng).unwrap();
        let k = Kernel::cut(p, 3).unwrap();
        let s = SpinConfig::new((0..n).map(|_| rng.random_range(0..3u8)).collect(), 3).unwrap();
        let w = WeightTensor::adjacency(&g).unwrap();
        let edge_sum: f64 = g.edge_list().map(|e| {
            let a: Vec<u8> = e.iter().map(|&v| s.labels()[v as usize]).collect();
            k.eval(&a)
        }).sum();
        prop_assert_eq!(hamiltonian(&w, &k, &s).unwrap(), p as f64 * edge_sum);
    }
}

#[test]
fn two_cut_equals_half_hamiltonian_on_triangle() {
    let mut g = PUniformHypergraph::new(3, 2, false).unwrap();
    for e in [[0, 1], [1, 2], [0, 2]] {
        g.add_edge(&e).unwrap();
    }
    let s = SpinConfig::new(vec![0, 1, 1], 2).unwrap();
    let w = WeightTensor::adjacency(&g).unwrap();
    let h = hamiltonian(&w, &Kernel::cut(2, 2).unwrap(), &s).unwrap();
    assert_eq!(qcut_value(&g, 2, &s).unwrap() as f64, h / 2.0);
}
