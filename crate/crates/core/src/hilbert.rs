//! Hilbert systems for the logics CK, CK4, CT, CS4, CGL: formulas with
//! disjunction and falsity, axiom-schema matching, proof checking, the
//! deduction theorem, and the provability translation from dual-context
//! derivations.

use std::fmt;

use crate::syntax::{DualContext, Term, TypeExpr};
use crate::typecheck::{check_derivation, RuleName, SystemId, TypingDerivation};

/// Propositional modal formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Falsity,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(s: impl Into<String>) -> Formula {
        Formula::Atom(s.into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }
}

/// Reads a type as a formula: products become conjunctions.
pub fn type_to_formula(t: &TypeExpr) -> Formula {
    match t {
        TypeExpr::Atom(s) => Formula::Atom(s.clone()),
        TypeExpr::Prod(a, b) => Formula::and(type_to_formula(a), type_to_formula(b)),
        TypeExpr::Arrow(a, b) => Formula::implies(type_to_formula(a), type_to_formula(b)),
        TypeExpr::Box(a) => Formula::boxed(type_to_formula(a)),
    }
}

/// The five Hilbert-style logics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicId {
    CK,
    CK4,
    CT,
    CS4,
    CGL,
}

impl LogicId {
    pub const ALL: [LogicId; 5] = [LogicId::CK, LogicId::CK4, LogicId::CT, LogicId::CS4, LogicId::CGL];

    pub fn name(self) -> &'static str {
        match self {
            LogicId::CK => "ck",
            LogicId::CK4 => "ck4",
            LogicId::CT => "ct",
            LogicId::CS4 => "cs4",
            LogicId::CGL => "cgl",
        }
    }

    pub fn from_name(s: &str) -> Option<LogicId> {
        match s.to_ascii_lowercase().as_str() {
            "ck" => Some(LogicId::CK),
            "ck4" => Some(LogicId::CK4),
            "ct" => Some(LogicId::CT),
            "cs4" => Some(LogicId::CS4),
            "cgl" => Some(LogicId::CGL),
            _ => None,
        }
    }

    /// The logic matching a dual-context system.
    pub fn for_system(sys: SystemId) -> LogicId {
        match sys {
            SystemId::K => LogicId::CK,
            SystemId::K4 => LogicId::CK4,
            SystemId::T => LogicId::CT,
            SystemId::S4 => LogicId::CS4,
            SystemId::GL => LogicId::CGL,
        }
    }

    /// Axiom schemata of the logic, in matching order: the intuitionistic
    /// basis first, then the modal axioms.
    pub fn schemas(self) -> Vec<SchemaId> {
        let mut out = vec![
            SchemaId::CombK,
            SchemaId::CombS,
            SchemaId::Pair,
            SchemaId::Fst,
            SchemaId::Snd,
            SchemaId::Inl,
            SchemaId::Inr,
            SchemaId::Case,
            SchemaId::ExFalso,
            SchemaId::K,
        ];
        match self {
            LogicId::CK => {}
            LogicId::CK4 => out.push(SchemaId::Four),
            LogicId::CT => out.push(SchemaId::T),
            LogicId::CS4 => {
                out.push(SchemaId::Four);
                out.push(SchemaId::T);
            }
            LogicId::CGL => out.push(SchemaId::GL),
        }
        out
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Axiom schema identifiers. Lowercase names are the intuitionistic
/// basis; uppercase names are the modal axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemaId {
    /// A -> (B -> A)
    CombK,
    /// (A -> (B -> C)) -> ((A -> B) -> (A -> C))
    CombS,
    /// A -> (B -> A & B)
    Pair,
    /// A & B -> A
    Fst,
    /// A & B -> B
    Snd,
    /// A -> A | B
    Inl,
    /// B -> A | B
    Inr,
    /// (A -> C) -> ((B -> C) -> (A | B -> C))
    Case,
    /// bot -> A
    ExFalso,
    /// [](A -> B) -> ([]A -> []B)
    K,
    /// []A -> [][]A
    Four,
    /// []A -> A
    T,
    /// []([]A -> A) -> []A
    GL,
}

impl SchemaId {
    pub fn name(self) -> &'static str {
        match self {
            SchemaId::CombK => "k",
            SchemaId::CombS => "s",
            SchemaId::Pair => "pair",
            SchemaId::Fst => "fst",
            SchemaId::Snd => "snd",
            SchemaId::Inl => "inl",
            SchemaId::Inr => "inr",
            SchemaId::Case => "case",
            SchemaId::ExFalso => "exfalso",
            SchemaId::K => "K",
            SchemaId::Four => "4",
            SchemaId::T => "T",
            SchemaId::GL => "GL",
        }
    }

    pub fn from_name(s: &str) -> Option<SchemaId> {
        match s {
            "k" => Some(SchemaId::CombK),
            "s" => Some(SchemaId::CombS),
            "pair" => Some(SchemaId::Pair),
            "fst" => Some(SchemaId::Fst),
            "snd" => Some(SchemaId::Snd),
            "inl" => Some(SchemaId::Inl),
            "inr" => Some(SchemaId::Inr),
            "case" => Some(SchemaId::Case),
            "exfalso" => Some(SchemaId::ExFalso),
            "K" => Some(SchemaId::K),
            "4" => Some(SchemaId::Four),
            "T" => Some(SchemaId::T),
            "GL" => Some(SchemaId::GL),
            _ => None,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            SchemaId::Four | SchemaId::T | SchemaId::GL | SchemaId::ExFalso => 1,
            SchemaId::CombS | SchemaId::Case => 3,
            _ => 2,
        }
    }

    /// Instantiates the schema at the given formulas.
    pub fn instantiate(self, args: &[Formula]) -> Formula {
        use Formula as F;
        let a = || args[0].clone();
        let b = || args.get(1).cloned().unwrap_or(F::Falsity);
        let c = || args.get(2).cloned().unwrap_or(F::Falsity);
        match self {
            SchemaId::CombK => F::implies(a(), F::implies(b(), a())),
            SchemaId::CombS => F::implies(
                F::implies(a(), F::implies(b(), c())),
                F::implies(F::implies(a(), b()), F::implies(a(), c())),
            ),
            SchemaId::Pair => F::implies(a(), F::implies(b(), F::and(a(), b()))),
            SchemaId::Fst => F::implies(F::and(a(), b()), a()),
            SchemaId::Snd => F::implies(F::and(a(), b()), b()),
            SchemaId::Inl => F::implies(a(), F::or(a(), b())),
            SchemaId::Inr => F::implies(b(), F::or(a(), b())),
            SchemaId::Case => F::implies(
                F::implies(a(), c()),
                F::implies(F::implies(b(), c()), F::implies(F::or(a(), b()), c())),
            ),
            SchemaId::ExFalso => F::implies(F::Falsity, a()),
            SchemaId::K => F::implies(
                F::boxed(F::implies(a(), b())),
                F::implies(F::boxed(a()), F::boxed(b())),
            ),
            SchemaId::Four => F::implies(F::boxed(a()), F::boxed(F::boxed(a()))),
            SchemaId::T => F::implies(F::boxed(a()), a()),
            SchemaId::GL => F::implies(F::boxed(F::implies(F::boxed(a()), a())), F::boxed(a())),
        }
    }

    fn match_instance(self, f: &Formula) -> Option<Vec<Formula>> {
        use Formula as F;
        let mut binds: [Option<Formula>; 3] = [None, None, None];
        fn meta(binds: &mut [Option<Formula>; 3], i: usize, f: &Formula) -> bool {
            match &binds[i] {
                Some(g) => g == f,
                None => {
                    binds[i] = Some(f.clone());
                    true
                }
            }
        }
        let ok = match self {
            SchemaId::CombK => match f {
                F::Implies(a, rest) => match rest.as_ref() {
                    F::Implies(b, a2) => {
                        meta(&mut binds, 0, a) && meta(&mut binds, 1, b) && meta(&mut binds, 0, a2)
                    }
                    _ => false,
                },
                _ => false,
            },
            SchemaId::CombS => match f {
                F::Implies(l, r) => match (l.as_ref(), r.as_ref()) {
                    (F::Implies(a, bc), F::Implies(ab, ac)) => match (bc.as_ref(), ab.as_ref(), ac.as_ref()) {
                        (F::Implies(b, c), F::Implies(a2, b2), F::Implies(a3, c2)) => {
                            meta(&mut binds, 0, a)
                                && meta(&mut binds, 1, b)
                                && meta(&mut binds, 2, c)
                                && meta(&mut binds, 0, a2)
                                && meta(&mut binds, 1, b2)
                                && meta(&mut binds, 0, a3)
                                && meta(&mut binds, 2, c2)
                        }
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
            SchemaId::Pair => match f {
                F::Implies(a, rest) => match rest.as_ref() {
                    F::Implies(b, ab) => match ab.as_ref() {
                        F::And(a2, b2) => {
                            meta(&mut binds, 0, a)
                                && meta(&mut binds, 1, b)
                                && meta(&mut binds, 0, a2)
                                && meta(&mut binds, 1, b2)
                        }
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
            SchemaId::Fst => match f {
                F::Implies(l, a2) => match l.as_ref() {
                    F::And(a, b) => {
                        meta(&mut binds, 0, a) && meta(&mut binds, 1, b) && meta(&mut binds, 0, a2)
                    }
                    _ => false,
                },
                _ => false,
            },
            SchemaId::Snd => match f {
                F::Implies(l, b2) => match l.as_ref() {
                    F::And(a, b) => {
                        meta(&mut binds, 0, a) && meta(&mut binds, 1, b) && meta(&mut binds, 1, b2)
                    }
                    _ => false,
                },
                _ => false,
            },
            SchemaId::Inl => match f {
                F::Implies(a, r) => match r.as_ref() {
                    F::Or(a2, b) => {
                        meta(&mut binds, 0, a) && meta(&mut binds, 0, a2) && meta(&mut binds, 1, b)
                    }
                    _ => false,
                },
                _ => false,
            },
            SchemaId::Inr => match f {
                F::Implies(b, r) => match r.as_ref() {
                    F::Or(a, b2) => {
                        meta(&mut binds, 1, b) && meta(&mut binds, 0, a) && meta(&mut binds, 1, b2)
                    }
                    _ => false,
                },
                _ => false,
            },
            SchemaId::Case => match f {
                F::Implies(ac, rest) => match (ac.as_ref(), rest.as_ref()) {
                    (F::Implies(a, c), F::Implies(bc, fin)) => match (bc.as_ref(), fin.as_ref()) {
                        (F::Implies(b, c2), F::Implies(ab, c3)) => match ab.as_ref() {
                            F::Or(a2, b2) => {
                                meta(&mut binds, 0, a)
                                    && meta(&mut binds, 2, c)
                                    && meta(&mut binds, 1, b)
                                    && meta(&mut binds, 2, c2)
                                    && meta(&mut binds, 0, a2)
                                    && meta(&mut binds, 1, b2)
                                    && meta(&mut binds, 2, c3)
                            }
                            _ => false,
                        },
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
            SchemaId::ExFalso => match f {
                F::Implies(l, a) => matches!(l.as_ref(), F::Falsity) && meta(&mut binds, 0, a),
                _ => false,
            },
            SchemaId::K => match f {
                F::Implies(l, r) => match (l.as_ref(), r.as_ref()) {
                    (F::Box(ab), F::Implies(ba, bb)) => {
                        match (ab.as_ref(), ba.as_ref(), bb.as_ref()) {
                            (F::Implies(a, b), F::Box(a2), F::Box(b2)) => {
                                meta(&mut binds, 0, a)
                                    && meta(&mut binds, 1, b)
                                    && meta(&mut binds, 0, a2)
                                    && meta(&mut binds, 1, b2)
                            }
                            _ => false,
                        }
                    }
                    _ => false,
                },
                _ => false,
            },
            SchemaId::Four => match f {
                F::Implies(l, r) => match (l.as_ref(), r.as_ref()) {
                    (F::Box(a), F::Box(ba)) => match ba.as_ref() {
                        F::Box(a2) => meta(&mut binds, 0, a) && meta(&mut binds, 0, a2),
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
            SchemaId::T => match f {
                F::Implies(l, a2) => match l.as_ref() {
                    F::Box(a) => meta(&mut binds, 0, a) && meta(&mut binds, 0, a2),
                    _ => false,
                },
                _ => false,
            },
            SchemaId::GL => match f {
                F::Implies(l, r) => match (l.as_ref(), r.as_ref()) {
                    (F::Box(inner), F::Box(a3)) => match inner.as_ref() {
                        F::Implies(ba, a2) => match ba.as_ref() {
                            F::Box(a) => {
                                meta(&mut binds, 0, a)
                                    && meta(&mut binds, 0, a2)
                                    && meta(&mut binds, 0, a3)
                            }
                            _ => false,
                        },
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
        };
        if !ok {
            return None;
        }
        Some(binds.into_iter().take(self.arity()).map(|b| b.unwrap()).collect())
    }
}

/// Matches a formula against every axiom schema of the logic; returns
/// the first schema it instantiates.
pub fn is_axiom_instance(logic: LogicId, f: &Formula) -> Option<SchemaId> {
    logic.schemas().into_iter().find(|s| s.match_instance(f).is_some())
}

/// Hilbert proof trees, checked relative to an assumption list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HilbertProof {
    Assn(usize),
    Ax(SchemaId, Vec<Formula>),
    Mp(Box<HilbertProof>, Box<HilbertProof>),
    Nec(Box<HilbertProof>),
}

impl HilbertProof {
    pub fn mp(major: HilbertProof, minor: HilbertProof) -> HilbertProof {
        HilbertProof::Mp(Box::new(major), Box::new(minor))
    }

    pub fn nec(sub: HilbertProof) -> HilbertProof {
        HilbertProof::Nec(Box::new(sub))
    }

    pub fn node_count(&self) -> usize {
        match self {
            HilbertProof::Assn(_) | HilbertProof::Ax(_, _) => 1,
            HilbertProof::Mp(a, b) => 1 + a.node_count() + b.node_count(),
            HilbertProof::Nec(a) => 1 + a.node_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbertError {
    #[error("proof node {path:?}: assumption index {index} out of range (context has {len})")]
    BadAssumptionIndex { index: usize, len: usize, path: Vec<usize> },
    #[error("proof node {path:?}: schema {schema} is not an axiom of {logic}")]
    SchemaNotInLogic { schema: &'static str, logic: LogicId, path: Vec<usize> },
    #[error("proof node {path:?}: schema {schema} needs {expected} formulas, got {got}")]
    BadArity { schema: &'static str, expected: usize, got: usize, path: Vec<usize> },
    #[error("proof node {path:?}: major premise of MP is not an implication")]
    MajorNotImplication { path: Vec<usize> },
    #[error("proof node {path:?}: MP minor premise mismatch")]
    MinorMismatch { path: Vec<usize> },
    #[error("proof proves a different formula than the goal")]
    GoalMismatch,
}

/// Computes the formula a proof tree derives under the given assumptions,
/// enforcing the closed-subproof side condition of necessitation.
pub fn conclusion_of(
    logic: LogicId,
    assumptions: &[Formula],
    proof: &HilbertProof,
) -> Result<Formula, HilbertError> {
    fn go(
        logic: LogicId,
        asm: &[Formula],
        p: &HilbertProof,
        path: &mut Vec<usize>,
    ) -> Result<Formula, HilbertError> {
        match p {
            HilbertProof::Assn(i) => asm.get(*i).cloned().ok_or(HilbertError::BadAssumptionIndex {
                index: *i,
                len: asm.len(),
                path: path.clone(),
            }),
            HilbertProof::Ax(schema, args) => {
                if !logic.schemas().contains(schema) {
                    return Err(HilbertError::SchemaNotInLogic {
                        schema: schema.name(),
                        logic,
                        path: path.clone(),
                    });
                }
                if args.len() != schema.arity() {
                    return Err(HilbertError::BadArity {
                        schema: schema.name(),
                        expected: schema.arity(),
                        got: args.len(),
                        path: path.clone(),
                    });
                }
                Ok(schema.instantiate(args))
            }
            HilbertProof::Mp(major, minor) => {
                path.push(0);
                let cmaj = go(logic, asm, major, path)?;
                path.pop();
                path.push(1);
                let cmin = go(logic, asm, minor, path)?;
                path.pop();
                match cmaj {
                    Formula::Implies(x, y) => {
                        if *x == cmin {
                            Ok(*y)
                        } else {
                            Err(HilbertError::MinorMismatch { path: path.clone() })
                        }
                    }
                    _ => Err(HilbertError::MajorNotImplication { path: path.clone() }),
                }
            }
            HilbertProof::Nec(sub) => {
                // The premise of necessitation must hold with no assumptions.
                path.push(0);
                let c = go(logic, &[], sub, path)?;
                path.pop();
                Ok(Formula::boxed(c))
            }
        }
    }
    go(logic, assumptions, proof, &mut Vec::new())
}

/// True iff `proof` is a correct derivation of `assumptions ⊢ goal`.
pub fn check_hilbert(
    logic: LogicId,
    assumptions: &[Formula],
    goal: &Formula,
    proof: &HilbertProof,
) -> Result<(), HilbertError> {
    let c = conclusion_of(logic, assumptions, proof)?;
    if &c == goal {
        Ok(())
    } else {
        Err(HilbertError::GoalMismatch)
    }
}

// ---- proof builders ----

/// Closed proof of `a -> a` from the s/k basis.
pub(crate) fn imp_identity(a: &Formula) -> HilbertProof {
    let aa = Formula::implies(a.clone(), a.clone());
    HilbertProof::mp(
        HilbertProof::mp(
            HilbertProof::Ax(SchemaId::CombS, vec![a.clone(), aa, a.clone()]),
            HilbertProof::Ax(
                SchemaId::CombK,
                vec![a.clone(), Formula::implies(a.clone(), a.clone())],
            ),
        ),
        HilbertProof::Ax(SchemaId::CombK, vec![a.clone(), a.clone()]),
    )
}

/// From a proof of `c`, a proof of `a -> c` (vacuous discharge).
fn weaken(p: HilbertProof, c: &Formula, a: &Formula) -> HilbertProof {
    HilbertProof::mp(
        HilbertProof::Ax(SchemaId::CombK, vec![c.clone(), a.clone()]),
        p,
    )
}

/// Chains proofs of `x -> y` and `y -> z` into a proof of `x -> z`.
fn syll(
    p_xy: HilbertProof,
    q_yz: HilbertProof,
    x: &Formula,
    y: &Formula,
    z: &Formula,
) -> HilbertProof {
    let yz = Formula::implies(y.clone(), z.clone());
    HilbertProof::mp(
        HilbertProof::mp(
            HilbertProof::Ax(SchemaId::CombS, vec![x.clone(), y.clone(), z.clone()]),
            HilbertProof::mp(HilbertProof::Ax(SchemaId::CombK, vec![yz, x.clone()]), q_yz),
        ),
        p_xy,
    )
}

/// Transforms a proof of `C` under `asm` into a proof of `asm[idx] -> C`
/// under `asm` with position `idx` removed. Returns the new proof along
/// with the original conclusion `C`.
fn discharge(
    logic: LogicId,
    asm: &[Formula],
    idx: usize,
    p: &HilbertProof,
) -> Result<(HilbertProof, Formula), HilbertError> {
    let a = asm[idx].clone();
    match p {
        HilbertProof::Assn(j) => {
            if *j == idx {
                Ok((imp_identity(&a), a))
            } else {
                let c = asm
                    .get(*j)
                    .cloned()
                    .ok_or(HilbertError::BadAssumptionIndex { index: *j, len: asm.len(), path: vec![] })?;
                let j2 = if *j < idx { *j } else { *j - 1 };
                Ok((weaken(HilbertProof::Assn(j2), &c, &a), c))
            }
        }
        HilbertProof::Ax(schema, args) => {
            let c = schema.instantiate(args);
            Ok((weaken(p.clone(), &c, &a), c))
        }
        HilbertProof::Nec(sub) => {
            let c = Formula::boxed(conclusion_of(logic, &[], sub)?);
            Ok((weaken(p.clone(), &c, &a), c))
        }
        HilbertProof::Mp(major, minor) => {
            let (dmaj, cmaj) = discharge(logic, asm, idx, major)?;
            let (dmin, cmin) = discharge(logic, asm, idx, minor)?;
            match cmaj {
                Formula::Implies(x, y) => {
                    debug_assert_eq!(*x, cmin);
                    let proof = HilbertProof::mp(
                        HilbertProof::mp(
                            HilbertProof::Ax(SchemaId::CombS, vec![a.clone(), *x, (*y).clone()]),
                            dmaj,
                        ),
                        dmin,
                    );
                    Ok((proof, *y))
                }
                _ => Err(HilbertError::MajorNotImplication { path: vec![] }),
            }
        }
    }
}

/// The deduction theorem: from a checked proof of `Γ, A ⊢ B` produces a
/// proof of `Γ ⊢ A -> B`. Rejects proofs that do not check.
pub fn deduction_theorem(
    logic: LogicId,
    assumptions: &[Formula],
    proof: &HilbertProof,
) -> Result<HilbertProof, HilbertError> {
    let idx = assumptions.len().checked_sub(1).ok_or(HilbertError::BadAssumptionIndex {
        index: 0,
        len: 0,
        path: vec![],
    })?;
    conclusion_of(logic, assumptions, proof)?;
    Ok(discharge(logic, assumptions, idx, proof)?.0)
}

/// Closed proof of `[]a -> [][]a` in CGL; axiom 4 is derivable from GL
/// via the conjunction `a & []a`.
fn derive_four_gl(a: &Formula) -> HilbertProof {
    use Formula as F;
    let ba = F::boxed(a.clone());
    let conj = F::and(a.clone(), ba.clone());
    let bconj = F::boxed(conj.clone());
    let bconj_imp_conj = F::implies(bconj.clone(), conj.clone());

    // Under [a, []conj]: derive conj.
    let asm = [a.clone(), bconj.clone()];
    let boxa_from_bconj = HilbertProof::mp(
        HilbertProof::mp(
            HilbertProof::Ax(SchemaId::K, vec![conj.clone(), a.clone()]),
            HilbertProof::nec(HilbertProof::Ax(SchemaId::Fst, vec![a.clone(), ba.clone()])),
        ),
        HilbertProof::Assn(1),
    );
    let pair = HilbertProof::mp(
        HilbertProof::mp(
            HilbertProof::Ax(SchemaId::Pair, vec![a.clone(), ba.clone()]),
            HilbertProof::Assn(0),
        ),
        boxa_from_bconj,
    );
    let (step1, _) = discharge(LogicId::CGL, &asm, 1, &pair).expect("closed discharge");
    let (c0, _) = discharge(LogicId::CGL, &asm[..1], 0, &step1).expect("closed discharge");
    // c0: ⊢ a -> ([]conj -> conj)
    let c1 = HilbertProof::nec(c0);
    let c2 = HilbertProof::mp(
        HilbertProof::Ax(SchemaId::K, vec![a.clone(), bconj_imp_conj.clone()]),
        c1,
    );
    // c2: []a -> [](([]conj) -> conj)
    let c3 = HilbertProof::Ax(SchemaId::GL, vec![conj.clone()]);
    let c4 = syll(c2, c3, &ba, &F::boxed(bconj_imp_conj), &bconj);
    // c4: []a -> []conj
    let c5 = HilbertProof::mp(
        HilbertProof::Ax(SchemaId::K, vec![conj.clone(), ba.clone()]),
        HilbertProof::nec(HilbertProof::Ax(SchemaId::Snd, vec![a.clone(), ba.clone()])),
    );
    // c5: []conj -> [][]a
    syll(c4, c5, &ba, &bconj, &F::boxed(ba.clone()))
}

/// Proof of `[][]b` from assumption `[]b` at index `i`, in any logic
/// with axiom 4 available or derivable.
fn double_box(logic: LogicId, b: &Formula, i: usize) -> HilbertProof {
    match logic {
        LogicId::CGL => HilbertProof::mp(derive_four_gl(b), HilbertProof::Assn(i)),
        _ => HilbertProof::mp(
            HilbertProof::Ax(SchemaId::Four, vec![b.clone()]),
            HilbertProof::Assn(i),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("construct outside the translatable fragment: {0}")]
    UnsupportedConstruct(String),
    #[error("derivation does not check: {0}")]
    InvalidDerivation(String),
}

/// Result of translating a dual-context derivation: a checked Hilbert
/// proof of `□Δ, Γ ⊢ A` in the matching logic.
#[derive(Debug, Clone)]
pub struct Translation {
    pub logic: LogicId,
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
    pub proof: HilbertProof,
}

/// The assumption list `□B₁, …, □Bₙ, A₁, …, Aₘ` read off a dual context.
pub fn assumptions_of(ctx: &DualContext) -> Vec<Formula> {
    let mut out: Vec<Formula> = ctx
        .modal
        .iter()
        .map(|(_, t)| Formula::boxed(type_to_formula(t)))
        .collect();
    out.extend(ctx.intuit.iter().map(|(_, t)| type_to_formula(t)));
    out
}

/// Translates a dual-context derivation into a Hilbert proof of
/// `□Δ, Γ ⊢ A` in the matching logic.
pub fn translate(sys: SystemId, d: &TypingDerivation) -> Result<Translation, TranslateError> {
    check_derivation(d, sys).map_err(|e| TranslateError::InvalidDerivation(e.to_string()))?;
    let logic = LogicId::for_system(sys);
    let proof = tr(logic, d)?;
    Ok(Translation {
        logic,
        assumptions: assumptions_of(&d.ctx),
        goal: type_to_formula(&d.ty),
        proof,
    })
}

/// Discharges every assumption of `asm`, last first; returns the closed
/// proof and the curried formula.
fn curry_all(
    logic: LogicId,
    asm: &[Formula],
    proof: HilbertProof,
    conclusion: Formula,
) -> Result<(HilbertProof, Formula), TranslateError> {
    let mut asm = asm.to_vec();
    let mut proof = proof;
    let mut conclusion = conclusion;
    while !asm.is_empty() {
        let idx = asm.len() - 1;
        let last = asm[idx].clone();
        let (p2, _) = discharge(logic, &asm, idx, &proof)
            .map_err(|e| TranslateError::InvalidDerivation(e.to_string()))?;
        proof = p2;
        conclusion = Formula::implies(last, conclusion);
        asm.pop();
    }
    Ok((proof, conclusion))
}

/// Necessitates a closed curried premise and distributes the box over
/// each antecedent with axiom K, discharging with the supplied minors.
fn nec_and_distribute(
    curried: HilbertProof,
    mut chain: Formula,
    minors: Vec<HilbertProof>,
) -> Result<HilbertProof, TranslateError> {
    let mut proof = HilbertProof::nec(curried);
    for minor in minors {
        let (x, rest) = match chain {
            Formula::Implies(x, rest) => (*x, *rest),
            other => {
                return Err(TranslateError::InvalidDerivation(format!(
                    "expected an implication chain, found {}",
                    other
                )))
            }
        };
        proof = HilbertProof::mp(
            HilbertProof::mp(HilbertProof::Ax(SchemaId::K, vec![x, rest.clone()]), proof),
            minor,
        );
        chain = rest;
    }
    Ok(proof)
}

fn tr(logic: LogicId, d: &TypingDerivation) -> Result<HilbertProof, TranslateError> {
    let n_modal = d.ctx.modal.len();
    match d.rule {
        RuleName::Var => {
            let v = match &d.term {
                Term::Var(v) => v,
                _ => return Err(TranslateError::InvalidDerivation("var on non-variable".into())),
            };
            let j = d.ctx.intuit.position(v).expect("checked derivation");
            Ok(HilbertProof::Assn(n_modal + j))
        }
        RuleName::BoxVar => {
            let v = match &d.term {
                Term::Var(v) => v,
                _ => return Err(TranslateError::InvalidDerivation("[]var on non-variable".into())),
            };
            let i = d.ctx.modal.position(v).expect("checked derivation");
            let a = type_to_formula(&d.ty);
            Ok(HilbertProof::mp(
                HilbertProof::Ax(SchemaId::T, vec![a]),
                HilbertProof::Assn(i),
            ))
        }
        RuleName::ArrowI => {
            let premise = &d.premises[0];
            let sub = tr(logic, premise)?;
            let asm = assumptions_of(&premise.ctx);
            discharge(logic, &asm, asm.len() - 1, &sub)
                .map(|(p, _)| p)
                .map_err(|e| TranslateError::InvalidDerivation(e.to_string()))
        }
        RuleName::ArrowE => {
            let f = tr(logic, &d.premises[0])?;
            let a = tr(logic, &d.premises[1])?;
            Ok(HilbertProof::mp(f, a))
        }
        RuleName::ProdI => {
            let a = type_to_formula(&d.premises[0].ty);
            let b = type_to_formula(&d.premises[1].ty);
            let l = tr(logic, &d.premises[0])?;
            let r = tr(logic, &d.premises[1])?;
            Ok(HilbertProof::mp(
                HilbertProof::mp(HilbertProof::Ax(SchemaId::Pair, vec![a, b]), l),
                r,
            ))
        }
        RuleName::ProdE1 | RuleName::ProdE2 => {
            let premise = &d.premises[0];
            let (a, b) = match &premise.ty {
                TypeExpr::Prod(a, b) => (type_to_formula(a), type_to_formula(b)),
                _ => return Err(TranslateError::InvalidDerivation("*E premise not a product".into())),
            };
            let schema = if d.rule == RuleName::ProdE1 { SchemaId::Fst } else { SchemaId::Snd };
            let sub = tr(logic, premise)?;
            Ok(HilbertProof::mp(HilbertProof::Ax(schema, vec![a, b]), sub))
        }
        RuleName::BoxE => {
            let bound = &d.premises[0];
            let body = &d.premises[1];
            let dn = tr(logic, body)?;
            let asm_body = assumptions_of(&body.ctx);
            // The fresh modal assumption sits right after the Δ block.
            let idx = body.ctx.modal.len() - 1;
            let (dd, _) = discharge(logic, &asm_body, idx, &dn)
                .map_err(|e| TranslateError::InvalidDerivation(e.to_string()))?;
            let dm = tr(logic, bound)?;
            Ok(HilbertProof::mp(dd, dm))
        }
        RuleName::BoxIK | RuleName::BoxIK4 | RuleName::BoxIS4 | RuleName::BoxIGL => {
            let premise = &d.premises[0];
            let sub = tr(logic, premise)?;
            let asm_p = assumptions_of(&premise.ctx);
            let (curried, chain) =
                curry_all(logic, &asm_p, sub, type_to_formula(&premise.ty))?;
            let deltas: Vec<Formula> =
                d.ctx.modal.iter().map(|(_, t)| type_to_formula(t)).collect();
            let n = deltas.len();
            let mut minors = Vec::new();
            match d.rule {
                RuleName::BoxIK => {
                    // premise assumptions are B₁..Bₙ; feed □Bᵢ directly
                    for i in 0..n {
                        minors.push(HilbertProof::Assn(i));
                    }
                }
                RuleName::BoxIS4 => {
                    // premise assumptions are □B₁..□Bₙ; feed □□Bᵢ via 4
                    for (i, b) in deltas.iter().enumerate() {
                        minors.push(double_box(logic, b, i));
                    }
                }
                RuleName::BoxIK4 | RuleName::BoxIGL => {
                    for (i, b) in deltas.iter().enumerate() {
                        minors.push(double_box(logic, b, i));
                    }
                    for i in 0..n {
                        minors.push(HilbertProof::Assn(i));
                    }
                }
                _ => unreachable!(),
            }
            let distributed = nec_and_distribute(curried, chain, minors)?;
            if d.rule == RuleName::BoxIGL {
                // distributed: □(□A→A); close the loop with the GL axiom
                let a = match &d.ty {
                    TypeExpr::Box(a) => type_to_formula(a),
                    _ => return Err(TranslateError::InvalidDerivation("fixbox at non-box type".into())),
                };
                Ok(HilbertProof::mp(
                    HilbertProof::Ax(SchemaId::GL, vec![a]),
                    distributed,
                ))
            } else {
                Ok(distributed)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_judgment};
    use crate::typecheck::infer;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn axiom_matching() {
        assert_eq!(is_axiom_instance(LogicId::CK, &f("[](p -> q) -> []p -> []q")), Some(SchemaId::K));
        assert_eq!(is_axiom_instance(LogicId::CK, &f("[]p -> p")), None);
        assert_eq!(is_axiom_instance(LogicId::CT, &f("[]p -> p")), Some(SchemaId::T));
        assert_eq!(is_axiom_instance(LogicId::CK, &f("p -> q -> p")), Some(SchemaId::CombK));
        assert_eq!(is_axiom_instance(LogicId::CGL, &f("[]([]p -> p) -> []p")), Some(SchemaId::GL));
        // inconsistent metavariables do not match
        assert_eq!(is_axiom_instance(LogicId::CK, &f("p -> q -> q")), None);
    }

    #[test]
    fn matching_closed_under_substitution() {
        // replace p by a compound formula uniformly
        assert_eq!(
            is_axiom_instance(LogicId::CK, &f("(p & []r) -> q -> (p & []r)")),
            Some(SchemaId::CombK)
        );
    }

    #[test]
    fn nec_requires_closed_subproof() {
        // ⊢ [](p -> p) via NEC over the closed identity proof
        let p = f("p");
        let proof = HilbertProof::nec(imp_identity(&p));
        check_hilbert(LogicId::CK, &[], &f("[](p -> p)"), &proof).unwrap();
        // NEC over an assumption is rejected
        let bad = HilbertProof::nec(HilbertProof::Assn(0));
        let e = check_hilbert(LogicId::CK, std::slice::from_ref(&p), &f("[]p"), &bad).unwrap_err();
        assert!(matches!(e, HilbertError::BadAssumptionIndex { len: 0, .. }));
    }

    #[test]
    fn t_axiom_direct_use() {
        // []p ⊢ p in CT
        let proof = HilbertProof::mp(
            HilbertProof::Ax(SchemaId::T, vec![f("p")]),
            HilbertProof::Assn(0),
        );
        check_hilbert(LogicId::CT, &[f("[]p")], &f("p"), &proof).unwrap();
        // but T is not available in CK
        assert!(matches!(
            check_hilbert(LogicId::CK, &[f("[]p")], &f("p"), &proof),
            Err(HilbertError::SchemaNotInLogic { .. })
        ));
    }

    #[test]
    fn deduction_identity() {
        // from A ⊢ A (by assumption) to ⊢ A -> A
        let out = deduction_theorem(LogicId::CK, &[f("p")], &HilbertProof::Assn(0)).unwrap();
        check_hilbert(LogicId::CK, &[], &f("p -> p"), &out).unwrap();
    }

    #[test]
    fn deduction_vacuous() {
        // an axiom used under Γ, A discharges vacuously
        let ax = HilbertProof::Ax(SchemaId::K, vec![f("p"), f("q")]);
        let out = deduction_theorem(LogicId::CK, &[f("r")], &ax).unwrap();
        check_hilbert(LogicId::CK, &[], &f("r -> ([](p -> q) -> ([]p -> []q))"), &out).unwrap();
    }

    #[test]
    fn four_is_derivable_in_cgl() {
        let proof = derive_four_gl(&f("p"));
        check_hilbert(LogicId::CGL, &[], &f("[]p -> [][]p"), &proof).unwrap();
    }

    fn translate_src(sys: SystemId, src: &str) -> Translation {
        let j = parse_judgment(src).unwrap();
        let d = infer(sys, &j.ctx, &j.term).unwrap();
        translate(sys, &d).unwrap()
    }

    #[test]
    fn translate_t_dereliction() {
        let t = translate_src(SystemId::T, "; x:[]p |- let box u = x in u");
        assert_eq!(t.logic, LogicId::CT);
        assert_eq!(t.assumptions, vec![f("[]p")]);
        assert_eq!(t.goal, f("p"));
        check_hilbert(t.logic, &t.assumptions, &t.goal, &t.proof).unwrap();
    }

    #[test]
    fn translate_axiom_k_term() {
        let t = translate_src(
            SystemId::K,
            "; |- \\f:[](p -> q). \\x:[]p. let box g = f in let box a = x in box (g a)",
        );
        assert_eq!(t.goal, f("[](p -> q) -> []p -> []q"));
        assert!(t.assumptions.is_empty());
        check_hilbert(t.logic, &t.assumptions, &t.goal, &t.proof).unwrap();
    }

    #[test]
    fn translate_loeb_term() {
        let t = translate_src(
            SystemId::GL,
            "; |- \\f:[]([]p -> p). let box g = f in fix z:[]p. g z",
        );
        assert_eq!(t.logic, LogicId::CGL);
        assert_eq!(t.goal, f("[]([]p -> p) -> []p"));
        check_hilbert(t.logic, &t.assumptions, &t.goal, &t.proof).unwrap();
    }

    #[test]
    fn translate_axiom_4_term_s4_and_k4() {
        for sys in [SystemId::K4, SystemId::S4] {
            let t = translate_src(sys, "; |- \\x:[]p. let box u = x in box box u");
            assert_eq!(t.goal, f("[]p -> [][]p"));
            check_hilbert(t.logic, &t.assumptions, &t.goal, &t.proof).unwrap();
        }
    }
}
