//! Entrywise (Schur) multipliers: application, norm estimation between
//! Schatten classes, boundedness certificates out of S_2 in sequence and
//! split form with constructive conversions, ratio symbols from positive
//! weights, and the weighted anticommutator calculus with a single
//! density search.

mod certify;
mod multiplier;
mod ratio_symbol;
mod toperator;

pub use certify::{
    certify_sequence, certify_split, multiplier_bound_from_split, sequence_exponent,
    sequence_from_split, split_from_sequence, validate_certificate, Certificate, ConversionReport,
};
pub use multiplier::{apply_multiplier, multiplier_norm};
pub use ratio_symbol::{ratio_symbol_norm, spectral_ratio_symbol, RatioVariant, SymbolReport};
pub use toperator::{density_bound, single_density_search, weighted_anticommutator};
