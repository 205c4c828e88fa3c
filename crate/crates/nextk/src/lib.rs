//! Decision procedures for lattice-theoretic questions about normal modal
//! logics: whether `K + f` is a splitting or a union-splitting of the
//! lattice of normal modal logics, whether it is consistent, whether its
//! axiomatization problem is decidable, and whether `f` is a decidable
//! formula. Everything is computed on finite Kripke frames acting as duals
//! of finite modal algebras, with replayable witnesses for every verdict.

pub mod algebra;
pub mod decider;
pub mod formula;
pub mod frame;
pub mod jankov;
pub mod prover;

pub use algebra::{embeds_into_si_image, AlgebraError, DualAlgebra, Valuation};
pub use decider::{
    axiomatization_problem, equivalence_report, is_consistent, is_decidable_formula,
    is_splitting, is_union_splitting, is_union_splitting_from, neg_witness_replays,
    AxiomatizationProblem, Cursor, EquivalenceReport, UnionSplittingResult,
};
pub use formula::{Formula, ParseError, Substitution};
pub use frame::{
    enumerate_frames, exists_surjective_p_morphism, find_surjective_p_morphism, frame_classes,
    Frame, FrameError, FrameFilter, PMorphism, MAX_POINTS,
};
pub use jankov::{
    frame_validates_logic, jankov_formula, jankov_logic_equal, jankov_member, refutes_jankov,
    JankovAxiom, JankovAxiomSet, JankovError,
};
pub use prover::{
    find_jankov_countermodel, is_k_theorem, member_of_jankov_logic, membership_semi, Budget,
    Effort, Outcome, ProofCertificate, Verdict, Witness,
};
