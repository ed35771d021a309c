//! Workbench for the dual-context modal lambda-calculi over K, K4, GL,
//! T, and S4: syntax, parsing, type checking, reduction, equational
//! reasoning, Hilbert proofs, and finite set-theoretic semantics.

pub mod equality;
pub mod gen;
pub mod hilbert;
pub mod parser;
pub mod reduce;
pub mod semantics;
pub mod syntax;
pub mod typecheck;

pub use equality::{eq_terms, EqError, EqVerdict};
pub use hilbert::{
    check_hilbert, deduction_theorem, is_axiom_instance, translate, Formula, HilbertError,
    HilbertProof, LogicId, SchemaId, Translation,
};
pub use parser::{
    parse_eq_judgment, parse_formula, parse_judgment, parse_judgments, parse_proof_script,
    parse_term, parse_type, print_proof_script, print_term, print_type, EqJudgment, ParseError,
    ProofScript, SourceJudgment,
};
pub use reduce::{
    normalize, normalize_with, step, step_cc, subformula_check, Normalized, ReduceError, Relation,
    Strategy,
};
pub use semantics::{
    box_bullet, box_sharp, box_star, check_soundness, interp_ctx, interp_term, interp_type,
    verify_model, Denotation, FiniteModel, FunctorSpec, ModelReport, SemanticsError, SetObj,
};
pub use syntax::{
    alpha_eq, bfv, complement_ctx, complement_term, complement_var, fv, subst, ufv, Context,
    DualContext, ProjIndex, Term, TypeExpr, VarName,
};
pub use typecheck::{
    check_derivation, infer, well_defined, RuleName, SystemId, TypeError, TypingDerivation,
};
