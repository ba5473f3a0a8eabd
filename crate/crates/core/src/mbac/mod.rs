//! The binary flip channel, its coding schemes and experiment presets.
//!
//! The state `s` is xored onto the input before a BSC(`p`); the adversary
//! sees the input through a BSC(`q`). Builders for the two other example
//! channels are re-exported here so that presets have one entry point.

mod bounds;
mod capacity;
mod experiment;
mod scheme;

use crate::error::Result;
use crate::prob::Avc;

pub use bounds::{
    binary_divergence_nats, chernoff_bound_check, chernoff_grid, chernoff_minimizer, divergence_grid,
    divergence_linearization_check,
};
pub use capacity::{bac_capacity, bac_mutual_information, z_then_bsc_crossover};
pub use experiment::{
    attack_strategy, build_instance, input_witness, run_experiment, AttackKind, EncoderKind, ExperimentConfig,
    ExperimentRecord, ExperimentRow, Instance, Scenario, CSV_HEADER,
};
pub use scheme::{
    build_thm5_scheme, build_thm5_scheme_with, messages_for_rate, realisable_bias, MbacParams, DEFAULT_TYPICALITY_EPS,
    MAX_MESSAGES,
};

/// `W(y | x, s) = BSC(p)(y | x + s)` with `s0 = 0`.
pub fn build_mbac_avc(p: f64) -> Result<Avc> {
    too_noisy(p, 0.5)?;
    crate::channels::mbac_avc(p)
}

pub fn build_flip_erasure_avc(p: f64) -> Result<Avc> {
    too_noisy(p, 0.5)?;
    crate::channels::flip_erasure_avc(p)
}

pub fn build_erasure_state_avc(p: f64) -> Result<Avc> {
    crate::channels::erasure_state_avc(p)
}

fn too_noisy(p: f64, max: f64) -> Result<()> {
    if (0.0..=max).contains(&p) {
        Ok(())
    } else {
        Err(crate::Error::DomainError(format!("p = {p} must lie in [0, {max}]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overwrite::{is_i_overwritable, is_symmetrizable, is_u_overwritable};
    use crate::prob::Dmc;

    #[test]
    fn tensor_entries() {
        let w = build_mbac_avc(0.25).unwrap();
        assert_eq!(w.w(1, 1, 0), 0.75);
        let id = build_mbac_avc(0.0).unwrap();
        assert_eq!(id.fix_state(0).unwrap(), Dmc::identity(2));
        for x in 0..2 {
            for s in 0..2 {
                for y in 0..2 {
                    assert_eq!(w.w(x, s, y), w.w(x ^ 1, s ^ 1, y));
                }
            }
        }
        assert!(build_mbac_avc(0.6).is_err());
    }

    #[test]
    fn feasibility_map() {
        for p in [0.05, 0.25, 0.45] {
            let avc = build_mbac_avc(p).unwrap();
            assert!(is_symmetrizable(&avc, 1e-9).unwrap().holds());
            assert!(is_i_overwritable(&avc, 1e-9).unwrap().holds());
            for q in [0.01, 0.2, 0.45] {
                let u = Dmc::bsc(q).unwrap();
                assert!(!is_u_overwritable(&avc, &u, 1e-9).unwrap().holds(), "{p} {q}");
            }
        }
    }

    #[test]
    fn erasure_state_family() {
        for p in [0.0, 0.5, 0.99] {
            assert!(!is_i_overwritable(&build_erasure_state_avc(p).unwrap(), 1e-9)
                .unwrap()
                .holds());
        }
        assert!(is_i_overwritable(&build_erasure_state_avc(1.0).unwrap(), 1e-9)
            .unwrap()
            .holds());
    }
}
