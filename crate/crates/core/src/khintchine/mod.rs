//! Sign-average moments and the constants relating them to split norms:
//! exhaustive and Monte Carlo moments over sign flips of a coefficient
//! matrix, ratio and converse checks against the entry-split norm,
//! coefficient contraction constants, and support-set sign constants on
//! structured (anti-diagonal) index sets.

mod hankel;
mod ratio;
mod sigma;
mod signs;

pub use hankel::{hankel_index_set, mian_chowla, sidon_growth, GrowthRow};
pub use ratio::{
    coefficient_contraction_check, converse_inequality_check, dyadic_contraction_constant,
    khintchine_ratio, scalar_witness_sequence, tuple_sign_moment, ContractionReport,
    ConverseReport, RatioReport, ScalarWitness,
};
pub use sigma::{sigma_constant, CoeffMode, IndexSet, SigmaReport, EXHAUSTIVE_SET_CAP};
pub use signs::{
    sign_moment, sign_sup_norm, MomentReport, SignMode, EXHAUSTIVE_SUPPORT_CAP,
};
