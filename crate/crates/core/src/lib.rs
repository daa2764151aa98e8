//! Exact invariants of isolated hypersurface singularity germs.
//!
//! Given a polynomial germ with an isolated critical point at the origin,
//! this crate computes its Milnor algebra, the Grothendieck residue pairing
//! through the Bezoutian dual basis, the quasi-homogeneous spectrum with its
//! Hodge bigrading and conjugation, the weight filtration of the nilpotent
//! multiplication-by-f operator with primitive pieces and level forms, and
//! two independent signature computations, all over exact rationals.

pub mod error;
pub mod groebner;
pub mod hodge;
pub mod matrix;
pub mod milnor;
pub mod morse;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod report;
pub mod residue;
pub mod signature;
pub mod weight;

pub use error::{Error, Result};
pub use groebner::{buchberger, normal_form, quotient_basis, variable_nilpotency_check, GroebnerBasis, Ideal};
pub use hodge::{
    conjugation_map, hodge_bigrading, opposite_filtration_check, spectrum, weil_signs, Conjugation,
    HodgeGrading, SpectrumTable, WeilSigns,
};
pub use matrix::{
    hermitian_signature, jordan_partition_nilpotent, symmetric_signature, JordanPartition,
    RatMatrix,
};
pub use milnor::{detect_qh_weights, jacobian_ideal, milnor_algebra, MilnorAlgebra, QhWeights};
pub use morse::{morse_oracle, morse_oracle_pairs};
pub use parse::parse_polynomial;
pub use poly::{hessian_determinant, varset, weighted_degree, Monomial, MonomialOrder, Polynomial, VarSet};
pub use residue::{bezoutian, gram_matrix, hessian_residue_check, residue_pair, Bezoutian, ResidueForm};
pub use rat::{rat, rat_from_str, rat_int, rat_to_string, Rat};
pub use weight::{
    bilinear_relation_check, level_forms, nilpotent_weight_filtration, partition_matches_primitives,
    primitive_parts, BilinearReport, Finding, HodgeContext, LevelForm, PrimitiveDecomposition,
    WeightFiltration,
};
pub use report::{analyze, analyze_with, AnalyzeOptions, Expectations, GermSpec, Report};
pub use signature::{calibration_sign, hodge_number_table, signature_direct, signature_formula, HodgeNumberTable};
