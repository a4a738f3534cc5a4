//! Decomposition norms: infima over two-part splits of matrices and
//! matrix tuples, computed by smoothing continuation with multi-start.
//! Every solver returns the witness it found; reported values are exact
//! objectives of those witnesses, hence honest upper bounds.

mod entry_split;
mod family;
pub(crate) mod optimize;
mod square_split;
mod sup_split;

pub use entry_split::{entry_split_norm, split_objective, MatrixSplit};
pub use family::{
    elementary_tuple, family_square_norms, pin_entries, pinned_entry_q_norm,
    row_ones_diagonal_family,
};
pub use optimize::SolverConfig;
pub use square_split::{
    decomposition_norm, diagonal_decomposition_norm, hermitian_decomposition_norm,
    HermitianWitness, TupleSplit,
};
pub use sup_split::{ell_r_ell_inf_split, sup_split_objective, SupSplit};
