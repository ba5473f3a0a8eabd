//! The factorized exact evaluator against plain enumeration of every input,
//! observation, state and output sequence, and the Monte Carlo estimator
//! against both.

use avcauth::authsim::{
    exact_error, monte_carlo_error, random_constant_composition_codebook, AdversaryStrategy, Codebook, DecoderConfig,
};
use avcauth::channels::{mbac_avc, replacement_avc};
use avcauth::overwrite::StateKernel;
use avcauth::prob::stream_rng;
use avcauth::{Avc, Dist, Dmc};
use rand::Rng;

/// All sequences of length `n` over `0..q`, first position most significant.
fn sequences(q: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..q as u8).map(move |a| {
                    let mut t = s.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

fn prod(k: &Dmc, from: &[u8], to: &[u8]) -> f64 {
    from.iter()
        .zip(to)
        .map(|(&a, &b)| k.get(a as usize, b as usize))
        .product()
}

fn brute_force_impersonation(avc: &Avc, u: &Dmc, cb: &Codebook, dec: &DecoderConfig, w: &StateKernel) -> Vec<f64> {
    let n = cb.n();
    let v = cb.encoder_channel();
    let xs = sequences(avc.x_size(), n);
    let zs = sequences(u.out_size(), n);
    let ss = sequences(avc.s_size(), n);
    let ys = sequences(avc.y_size(), n);
    let decoded: Vec<Option<usize>> = ys.iter().map(|y| dec.decode(cb, y)).collect();
    let m = cb.len();
    (0..m)
        .map(|i| {
            let mut e = 0.0;
            for x in &xs {
                let px = prod(v, cb.word(i), x);
                if px == 0.0 {
                    continue;
                }
                for s in &ss {
                    let silent = s.iter().all(|&a| a as usize == avc.s0());
                    // P(s | x) = sum_z U(z|x) (1/M) sum_j sum_x' V(x'|t_j) prod P(s|x',z)
                    let mut ps = 0.0;
                    for z in &zs {
                        let pz = prod(u, x, z);
                        if pz == 0.0 {
                            continue;
                        }
                        for j in 0..m {
                            for xp in &xs {
                                let pxp = prod(v, cb.word(j), xp);
                                if pxp == 0.0 {
                                    continue;
                                }
                                let pw: f64 = (0..n)
                                    .map(|k| w.get(xp[k] as usize, z[k] as usize, s[k] as usize))
                                    .product();
                                ps += pz * pxp * pw / m as f64;
                            }
                        }
                    }
                    if ps == 0.0 {
                        continue;
                    }
                    for (y, out) in ys.iter().zip(&decoded) {
                        let py: f64 = (0..n)
                            .map(|k| avc.w(x[k] as usize, s[k] as usize, y[k] as usize))
                            .product();
                        let bad = if silent {
                            *out != Some(i)
                        } else {
                            out.is_some() && *out != Some(i)
                        };
                        if bad {
                            e += px * ps * py;
                        }
                    }
                }
            }
            e
        })
        .collect()
}

fn random_kernel<R: Rng>(x: usize, z: usize, s: usize, rng: &mut R) -> StateKernel {
    let rows = (0..x * z)
        .map(|_| {
            let raw: Vec<f64> = (0..s).map(|_| rng.gen_range(0.0..1.0)).collect();
            let t: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / t).collect()
        })
        .collect();
    StateKernel::new(x, z, Dmc::new(rows).unwrap()).unwrap()
}

#[test]
fn factorized_impersonation_matches_enumeration() {
    let half = Dist::bernoulli(0.5).unwrap();
    for n in 1..=6 {
        for (c, avc) in [mbac_avc(0.2).unwrap(), replacement_avc()].into_iter().enumerate() {
            let mut rng = stream_rng(n as u64, c as u64);
            let u = Dmc::bsc(0.15).unwrap();
            let m = if n == 1 { 2 } else { 3 };
            let cb = if n % 2 == 0 {
                random_constant_composition_codebook(n, m, &half, &mut rng).unwrap()
            } else {
                let words = (0..m)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..2u8)).collect())
                    .collect();
                Codebook::new(words).unwrap()
            };
            let w = random_kernel(2, 2, avc.s_size(), &mut rng);
            let dec = DecoderConfig::distance(n as f64 * 0.3 + 0.5);
            let exact = exact_error(
                &avc,
                &u,
                &cb,
                &dec,
                &AdversaryStrategy::Impersonation { witness: w.clone() },
            )
            .unwrap();
            let brute = brute_force_impersonation(&avc, &u, &cb, &dec, &w);
            for (a, b) in exact.per_message.iter().zip(&brute) {
                assert!((a - b).abs() < 1e-10, "n={n} channel {c}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn factorized_impersonation_with_stochastic_encoder() {
    for n in 1..=3 {
        let mut rng = stream_rng(40 + n as u64, 0);
        let avc = mbac_avc(0.1).unwrap();
        let u = Dmc::bsc(0.3).unwrap();
        let words = (0..3)
            .map(|_| (0..n).map(|_| rng.gen_range(0..2u8)).collect())
            .collect();
        let cb = Codebook::new(words)
            .unwrap()
            .with_randomizer(Dmc::z_channel(0.2).unwrap())
            .unwrap();
        let w = random_kernel(2, 2, 2, &mut rng);
        let dec = DecoderConfig::distance(1.0);
        let exact = exact_error(
            &avc,
            &u,
            &cb,
            &dec,
            &AdversaryStrategy::Impersonation { witness: w.clone() },
        )
        .unwrap();
        let brute = brute_force_impersonation(&avc, &u, &cb, &dec, &w);
        for (a, b) in exact.per_message.iter().zip(&brute) {
            assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn monte_carlo_tracks_exact() {
    let half = Dist::bernoulli(0.5).unwrap();
    let avc = mbac_avc(0.1).unwrap();
    let u = Dmc::bsc(0.2).unwrap();
    let cb = random_constant_composition_codebook(6, 4, &half, &mut stream_rng(77, 0)).unwrap();
    let dec = DecoderConfig::distance(2.0);
    let w = random_kernel(2, 2, 2, &mut stream_rng(77, 1));
    for strategy in [
        AdversaryStrategy::Absent,
        AdversaryStrategy::ConstantState(vec![1, 0, 0, 1, 0, 0]),
        AdversaryStrategy::Impersonation { witness: w },
    ] {
        let exact = exact_error(&avc, &u, &cb, &dec, &strategy).unwrap();
        let mc = monte_carlo_error(&avc, &u, &cb, &dec, &strategy, 10_000, 3).unwrap();
        let halves = mc.ci_half_width.as_ref().unwrap();
        for k in 0..cb.len() {
            let gap = (exact.per_message[k] - mc.per_message[k]).abs();
            assert!(
                gap <= 3.0 * halves[k] + 1e-12,
                "{}: message {k} off by {gap}",
                strategy.name()
            );
        }
    }
}
