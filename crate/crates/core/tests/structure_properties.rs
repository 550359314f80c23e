use proptest::prelude::*;
use regret_core::audit::gen::{gen_joint_triangle, gen_sd_pair};
use regret_core::dominance::{
    basis_decompose, basis_hadamard, basis_reconstruct, check_triangle_order,
    cumulative_lemma_check, g_matrix, hadamard_norm, stochastic_dominance, theta_matrix,
    DominanceRelation,
};
use regret_core::{align, canonicalize, Kernel, Lottery, RegretKernel, UtilityCurve};

fn lottery() -> impl Strategy<Value = Lottery> {
    (1usize..=6)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0i32..8, n),
                prop::collection::vec(0.0f64..1.0, n),
            )
        })
        .prop_filter("some mass", |(_, ws)| ws.iter().sum::<f64>() > 0.01)
        .prop_map(|(xs, ws)| {
            let total: f64 = ws.iter().sum();
            Lottery::new(
                xs.iter().map(|&x| x as f64).collect(),
                ws.iter().map(|w| w / total).collect(),
            )
            .unwrap()
        })
}

fn marginal_on(l: &Lottery, x: f64) -> f64 {
    l.iter().filter(|&(o, _)| o == x).map(|(_, p)| p).sum()
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(l in lottery()) {
        let c = canonicalize(&l);
        prop_assert!(c.is_canonical());
        prop_assert_eq!(canonicalize(&c), c.clone());
        for &x in c.outcomes() {
            prop_assert!((marginal_on(&l, x) - marginal_on(&c, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn alignment_keeps_each_distribution(a in lottery(), b in lottery()) {
        let (aa, bb) = align(&a, &b);
        prop_assert_eq!(aa.outcomes(), bb.outcomes());
        prop_assert!(aa.outcomes().windows(2).all(|w| w[0] < w[1]));
        for &x in aa.outcomes() {
            prop_assert!((marginal_on(&a, x) - marginal_on(&aa, x)).abs() < 1e-12);
            prop_assert!((marginal_on(&b, x) - marginal_on(&bb, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn dominance_is_mirrored(a in lottery(), b in lottery()) {
        let ab = stochastic_dominance(&a, &b).relation;
        let ba = stochastic_dominance(&b, &a).relation;
        let expected = match ab {
            DominanceRelation::FirstDominates => DominanceRelation::SecondDominates,
            DominanceRelation::SecondDominates => DominanceRelation::FirstDominates,
            other => other,
        };
        prop_assert_eq!(ba, expected);
    }

    #[test]
    fn dominance_pairs_satisfy_the_partial_sum_lemma(seed in any::<u64>(), n in 2usize..=6, t in 1usize..=5, beta in 0.5f64..3.0) {
        let (p, q) = gen_sd_pair(seed, n, t);
        let k = RegretKernel::sinh(beta).unwrap();
        let top = *p.outcomes().last().unwrap();
        let g: Vec<f64> = p.outcomes().iter().map(|&x| k.g(x - top)).collect();
        prop_assert!(cumulative_lemma_check(p.probs(), q.probs(), &g).unwrap().holds);
    }

    #[test]
    fn basis_decomposition_reconstructs_theta(seed in any::<u64>(), n in 2usize..=4) {
        let s = gen_joint_triangle(seed, n).unwrap();
        let t = theta_matrix(&s.joint).unwrap();
        let back = basis_reconstruct(&basis_decompose(&t));
        for i in 0..n {
            for j in 0..n {
                prop_assert!((back[(i, j)] - t.get(i, j)).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn triangle_order_forces_symmetry(seed in any::<u64>(), n in 2usize..=4) {
        let s = gen_joint_triangle(seed, n).unwrap();
        let t = theta_matrix(&s.joint).unwrap();
        prop_assert!(check_triangle_order(&t));
        for i in 0..n {
            for j in 0..n {
                prop_assert!((t.get(i, j) - t.get(j, i)).abs() <= 1e-11);
            }
        }
    }

    #[test]
    fn hadamard_norm_splits_over_the_basis(seed in any::<u64>(), n in 2usize..=4) {
        let s = gen_joint_triangle(seed, n).unwrap();
        let t = theta_matrix(&s.joint).unwrap();
        let g = g_matrix(&RegretKernel::sinh(1.0).unwrap(), &UtilityCurve::linear(), s.joint.grid_x()).unwrap();
        let c = basis_decompose(&t);
        let mut split = 0.0;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                split += c[(i, j)] * basis_hadamard(&g, i, j);
            }
        }
        let norm = hadamard_norm(t.theta(), &g).unwrap();
        prop_assert!((norm - split).abs() <= 1e-12 * g.max_abs().max(1.0));
    }
}
