//! Labeled free complexes over `k[x_1..x_n]`: Koszul and Taylor complexes,
//! the linear-quotient resolution and its mapping-cone construction,
//! verification and Betti numbers.

mod betti;
mod builders;
mod complex;
mod verify;

pub use betti::{
    betti_from_sets, betti_koszul, betti_of_complex, betti_oracle, betti_taylor, lq_ranks, BettiTable,
    TAYLOR_ORACLE_BOUND,
};
pub use builders::{
    alpha, comparison_map, comparison_map_into, iterated_cone_resolution, koszul_complex,
    koszul_on_variables, lcm_of, lq_resolution, sign_of, taylor_complex,
};
pub use complex::{
    chain_add_scaled, chain_neg, mapping_cone, BasisLabel, Chain, ComplexMap, FreeComplex, Module,
    SparseMatrix,
};
pub use verify::{verify_complex, verify_resolution_of, StrandFailure, VerifyReport};
