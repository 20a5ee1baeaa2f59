//! DG-algebra structures on free complexes: exterior and Taylor products,
//! the star product on mapping cones, Koszul-type checks, `φ̃`, and the
//! almost-complete-intersection construction.

mod aci;
mod algebra;
mod ktype;
mod star;

pub use aci::{
    aci_resolution, koszul_sequence_check, linkage_map, AciInput, AciResolution, SequenceReport,
    SequenceStep, StepReport,
};
pub use algebra::{
    check_label_isomorphism, dg_check, koszul_dg, shuffle_sign_odd, taylor_dg, Basis, DgAlgebra,
    DgReport, IsoReport,
};
pub use ktype::{
    koszul_type_check, pairing_matrix, tilde_phi, CompositeReport, KoszulTypeReport, PairingCheck,
    RankMethod, TildePhi, EVALUATION_POINTS,
};
pub use star::{
    check_star_hypotheses, nagata_star, star_label_map, taylor_star_parts, taylor_via_star,
    TaylorStar, TaylorStarParts,
};
