//! Dicke and W states and their bipartite combinatorics.

mod decomposition;
mod states;

pub use decomposition::{
    binomial, decompose_source, decompose_target, max_success_probability, verify_decomposition,
    BipartitionParams, DecompositionTerm, DickeDecomposition, SuccessBound,
};
pub use states::{dicke, dicke_state, flip_all, w_state, wbar_state, wlike_state, DickeSpec};
