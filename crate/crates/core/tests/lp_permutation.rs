//! Relabelling the unknowns or reordering the equalities of a system must
//! not change its verdict or its optimal violation.

use avcauth::lp::{solve_feasibility, FeasibilitySystem};
use avcauth::prob::stream_rng;
use avcauth::Dmc;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

struct Instance {
    rows: usize,
    cols: usize,
    /// `(coefficients over the block, target)`.
    equalities: Vec<(Vec<f64>, f64)>,
}

fn random_instance(seed: u64, planted: bool) -> Instance {
    let mut rng = stream_rng(seed, 0);
    let rows = rng.gen_range(1..=3);
    let cols = rng.gen_range(2..=4);
    let truth: Vec<f64> = (0..rows)
        .flat_map(|_| {
            let raw: Vec<f64> = (0..cols).map(|_| rng.gen_range(0.0..1.0)).collect();
            let t: f64 = raw.iter().sum();
            raw.into_iter().map(move |v| v / t)
        })
        .collect();
    let k = rng.gen_range(1..=4);
    let equalities = (0..k)
        .map(|_| {
            let coef: Vec<f64> = (0..rows * cols)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        rng.gen_range(-1.0..1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            let exact: f64 = coef.iter().zip(&truth).map(|(a, b)| a * b).sum();
            let target = if planted {
                exact
            } else {
                exact + rng.gen_range(-0.5..0.5)
            };
            (coef, target)
        })
        .collect();
    Instance { rows, cols, equalities }
}

/// Builds the system with rows and columns of the block relabelled by the
/// given permutations, equalities added in `order`.
fn build(inst: &Instance, row_perm: &[usize], col_perm: &[usize], order: &[usize]) -> FeasibilitySystem {
    let mut sys = FeasibilitySystem::new();
    let b = sys.add_block("P", inst.rows, inst.cols).unwrap();
    for &e in order {
        let (coef, target) = &inst.equalities[e];
        let terms: Vec<(usize, f64)> = (0..inst.rows * inst.cols)
            .map(|v| {
                let (r, c) = (v / inst.cols, v % inst.cols);
                (sys.var(b, row_perm[r], col_perm[c]), coef[v])
            })
            .collect();
        sys.add_equality(terms, *target).unwrap();
    }
    sys
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdict_is_invariant(seed in any::<u64>(), planted in any::<bool>(), shuffle in any::<u64>()) {
        let inst = random_instance(seed, planted);
        let id_r: Vec<usize> = (0..inst.rows).collect();
        let id_c: Vec<usize> = (0..inst.cols).collect();
        let id_e: Vec<usize> = (0..inst.equalities.len()).collect();
        let base = solve_feasibility(&build(&inst, &id_r, &id_c, &id_e), 1e-7).unwrap();

        let mut rng = stream_rng(shuffle, 1);
        let (mut pr, mut pc, mut pe) = (id_r.clone(), id_c.clone(), id_e.clone());
        pr.shuffle(&mut rng);
        pc.shuffle(&mut rng);
        pe.shuffle(&mut rng);
        let moved = solve_feasibility(&build(&inst, &pr, &pc, &pe), 1e-7).unwrap();

        if planted {
            prop_assert!(base.feasible && moved.feasible);
        }
        // a clear verdict on one side is never contradicted on the other
        if !base.borderline && !moved.borderline {
            prop_assert_eq!(base.feasible, moved.feasible);
        }
        prop_assert!((base.max_residual - moved.max_residual).abs() < 1e-6);

        // map the relabelled witness back and check it on the original system
        let back: Vec<Vec<f64>> = (0..inst.rows)
            .map(|r| (0..inst.cols).map(|c| moved.blocks[0].get(pr[r], pc[c])).collect())
            .collect();
        let back = Dmc::new(back).unwrap();
        let orig = build(&inst, &id_r, &id_c, &id_e);
        let r = orig.max_residual(&[back]).unwrap();
        prop_assert!((r - moved.max_residual).abs() < 1e-9);
    }
}
