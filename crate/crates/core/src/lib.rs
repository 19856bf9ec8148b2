//! Exact algebra and combinatorics for symmetric splices of knot
//! complements: classification of the gluing matrices admitting the two
//! symmetry types, generator-word factorization with the induced framed-link
//! presentations and their blow-up moves, handle-cobordism numerics with
//! lens-space correction terms, and an exact engine over `F2[U]` (and
//! `F2[U,V]`) for complexes with a homotopy involution — reduction to normal
//! form, d-invariants, homotopy solving, and decision-complete local-map
//! search.
//!
//! Everything is computed over exact integers and rationals; there are no
//! floating-point tolerances anywhere.

pub mod complex;
pub mod cone;
pub mod error;
pub mod f2;
pub mod gluing;
pub mod iota;
pub mod kirby;
pub mod knotlike;
pub mod reduce;
pub mod surgery;
pub mod textio;
pub mod umap;
pub mod upoly;

pub use complex::{grading_frac, grading_int, GradedComplex, Grading};
pub use cone::{reduce_cone, surgery_cone, ConeReduction, SurgeryCone};
pub use error::{Error, ParseError};
pub use gluing::{
    change_sign_identity, classify_type1, classify_type2, evaluate_word, factorize,
    is_splice_homology_sphere, family_word_report, BasisMode, FactorizationReport,
    GeneratorWord, GluingMatrix, Letter, Relation, Sign, Type2Verdict,
};
pub use iota::{
    find_local_map, is_local_map, is_locally_trivial, verify_iota, IotaComplex, IotaReport,
    DEFAULT_SEARCH_BUDGET,
};
pub use kirby::{
    blow_down, blow_up_clasp, h1_order, lens_d, normalize_step, presentation_from_word,
    type1_cobordism, type1_filling, type2_cobordism, CobordismData, Component,
    SurgeryPresentation,
};
pub use knotlike::{KnotGenerator, KnotLikeComplex};
pub use reduce::{d_invariant, reduce, NormalForm, Reduction, Step};
pub use surgery::{a_n_complex, b_complex, v_map};
pub use umap::{homotopy_solve, UMap};
pub use upoly::{Mat, UPoly, UVPoly};
