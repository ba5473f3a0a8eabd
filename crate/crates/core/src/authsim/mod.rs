//! Authentication codes over an AVC and the attacks against them.

mod adversary;
mod bits;
mod codebook;
mod decoder;
mod exact;
mod expurgate;
mod montecarlo;
mod report;

pub use adversary::{adversary_act, AdversaryStrategy, AttackContext, ForgeRule, Grants, SideInfo};
pub use bits::PackedWord;
pub use codebook::{count_at_distance, count_confusable, encode, random_constant_composition_codebook, Codebook};
pub use decoder::{
    decode_distance, decode_erasure_consistency, decode_typicality, default_delta, distance_radius, DecoderConfig,
};
pub use exact::{clean_word_errors, exact_error, exact_error_with_budget, DEFAULT_BUDGET};
pub use expurgate::{conditional_entropy_of_words, expurgate_codebook, Expurgation};
pub use montecarlo::{monte_carlo_error, simulate_once};
pub use report::{wilson_half_width, ErrorReport, Estimator};
