//! Exact lower bounds on the error caused by the impersonation attacks.

use avcauth::authsim::{
    distance_radius, exact_error, random_constant_composition_codebook, AdversaryStrategy, DecoderConfig,
};
use avcauth::channels::{mbac_avc, replacement_avc};
use avcauth::overwrite::{is_degraded, is_i_overwritable, is_overwritable, StateKernel};
use avcauth::prob::stream_rng;
use avcauth::{Avc, Dist, Dmc};

fn replacement_witness(avc: &Avc, z_size: usize) -> StateKernel {
    let v = is_overwritable(avc, 1e-9).unwrap();
    StateKernel::ignoring_observation(v.witness().unwrap().as_dmc(), z_size)
}

#[test]
fn replacement_impersonation_bound() {
    let avc = replacement_avc::<f64>();
    let u = Dmc::bsc(0.2).unwrap();
    let witness = replacement_witness(&avc, 2);
    let half = Dist::bernoulli(0.5).unwrap();
    let mut checked = 0;
    for (k, (n, m)) in [(2, 2), (4, 4), (4, 8), (6, 8), (8, 4), (8, 8)].into_iter().enumerate() {
        for seed in 0..5 {
            let mut rng = stream_rng(100 + seed, k as u64);
            let cb = random_constant_composition_codebook(n, m, &half, &mut rng).unwrap();
            let dec = DecoderConfig::distance(0.5);
            let clean = exact_error(&avc, &u, &cb, &dec, &AdversaryStrategy::Absent).unwrap();
            let attack = exact_error(
                &avc,
                &u,
                &cb,
                &dec,
                &AdversaryStrategy::Impersonation {
                    witness: witness.clone(),
                },
            )
            .unwrap();
            let mf = m as f64;
            let bound = (mf - 1.0) / mf * (1.0 - clean.average);
            assert!(
                attack.average - bound >= -1e-12,
                "n={n} M={m}: {} < {bound}",
                attack.average
            );
            if clean.average == 0.0 {
                assert!((attack.average - (mf - 1.0) / mf).abs() < 1e-12);
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 30);
}

#[test]
fn degraded_observer_bound() {
    let (p, q) = (0.25, 0.1);
    let avc = mbac_avc(p).unwrap();
    let u = Dmc::bsc(q).unwrap();
    let post = is_degraded(&avc.clean_channel(), &u, 1e-9).unwrap();
    assert!(post.holds());
    let post = post.witness().unwrap().as_dmc().clone();
    let witness = is_i_overwritable(&avc, 1e-9)
        .unwrap()
        .witness()
        .unwrap()
        .as_state_kernel()
        .unwrap()
        .clone();
    let half = Dist::bernoulli(0.5).unwrap();
    let n = 8;
    let dec = DecoderConfig::distance(distance_radius(n, p, (0.5 - p) / 3.0));
    for seed in 0..10 {
        let cb = random_constant_composition_codebook(n, 4, &half, &mut stream_rng(seed, 8)).unwrap();
        let clean = exact_error(&avc, &u, &cb, &dec, &AdversaryStrategy::Absent).unwrap();
        let attack = exact_error(
            &avc,
            &u,
            &cb,
            &dec,
            &AdversaryStrategy::DegradationImpersonation {
                post: post.clone(),
                witness: witness.clone(),
            },
        )
        .unwrap();
        let bound = (1.0 - clean.average).powi(2) - 0.25;
        assert!(
            attack.average >= bound - 1e-12,
            "seed {seed}: {} < {bound}",
            attack.average
        );
    }
}
