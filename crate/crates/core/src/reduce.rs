//! One-step and full reduction, with or without the commuting
//! conversions, plus the subformula-property checker for derivations of
//! normal forms.

use std::collections::HashSet;
use std::fmt;

use crate::syntax::{fresh_var, fv, subst, ProjIndex, Term, TypeExpr, VarName};
use crate::typecheck::TypingDerivation;

/// Which reduction relation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Beta rules only.
    Plain,
    /// Beta rules plus the three commuting conversions.
    Cc,
}

/// Redex selection order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
}

/// Name of a contraction rule, for traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    Beta,
    BetaProd,
    BetaBox,
    BetaFix,
    CcProj,
    CcApp,
    CcLet,
}

impl StepRule {
    pub fn name(self) -> &'static str {
        match self {
            StepRule::Beta => "beta",
            StepRule::BetaProd => "beta-prod",
            StepRule::BetaBox => "beta-box",
            StepRule::BetaFix => "beta-fix",
            StepRule::CcProj => "cc-proj",
            StepRule::CcApp => "cc-app",
            StepRule::CcLet => "cc-let",
        }
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// One contraction: where it happened, which rule fired, and the whole
/// term afterwards.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub path: Vec<usize>,
    pub rule: StepRule,
    pub term: Term,
}

/// The steps taken by a normalization run, in order.
#[derive(Debug, Clone, Default)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone)]
pub struct Normalized {
    pub term: Term,
    pub trace: ReductionTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("fuel exhausted after {0} steps; the term may not terminate")]
    FuelExhausted(u32),
}

/// Contracts the redex at the root, if there is one.
fn contract_root(t: &Term, cc: bool) -> Option<(Term, StepRule)> {
    match t {
        Term::App(f, a) => match f.as_ref() {
            Term::Lam(x, _, body) => Some((subst(body, x, a), StepRule::Beta)),
            Term::LetBox(u, m, p) if cc => {
                // (let box u = M in P) Q -> let box u = M in P Q
                let (u2, p2) = avoid_capture(u, p, a);
                Some((
                    Term::letbox(u2, m.as_ref().clone(), Term::app(p2, a.as_ref().clone())),
                    StepRule::CcApp,
                ))
            }
            _ => None,
        },
        Term::Proj(i, body) => match body.as_ref() {
            Term::Pair(a, b) => {
                let picked = match i {
                    ProjIndex::Fst => a,
                    ProjIndex::Snd => b,
                };
                Some((picked.as_ref().clone(), StepRule::BetaProd))
            }
            Term::LetBox(u, m, n) if cc => {
                // fst (let box u = M in N) -> let box u = M in fst N
                Some((
                    Term::letbox(u.clone(), m.as_ref().clone(), Term::proj(*i, n.as_ref().clone())),
                    StepRule::CcProj,
                ))
            }
            _ => None,
        },
        Term::LetBox(v, bound, body) => match bound.as_ref() {
            Term::BoxI(m) => Some((subst(body, v, m), StepRule::BetaBox)),
            Term::FixBox(z, ty, m) => {
                // let box u = fix z.M in N -> N[M[fix z.M / z]/u]
                let unrolled = subst(m, z, &Term::fixbox(z.clone(), ty.clone(), m.as_ref().clone()));
                Some((subst(body, v, &unrolled), StepRule::BetaFix))
            }
            Term::LetBox(u, m, n) if cc => {
                // let box v = (let box u = M in N) in P
                //   -> let box u = M in let box v = N in P
                let (u2, n2) = avoid_capture(u, n, body);
                Some((
                    Term::letbox(
                        u2,
                        m.as_ref().clone(),
                        Term::letbox(v.clone(), n2, body.as_ref().clone()),
                    ),
                    StepRule::CcLet,
                ))
            }
            _ => None,
        },
        _ => None,
    }
}

/// Renames `binder` in `scope` when it would capture a free variable of
/// `incoming` after a commuting conversion.
fn avoid_capture(binder: &VarName, scope: &Term, incoming: &Term) -> (VarName, Term) {
    let fvi = fv(incoming);
    if !fvi.contains(binder) {
        return (binder.clone(), scope.clone());
    }
    let mut avoid = fvi;
    avoid.extend(fv(scope));
    let fresh = fresh_var(binder, &avoid);
    let renamed = subst(scope, binder, &Term::Var(fresh.clone()));
    (fresh, renamed)
}

fn children(t: &Term) -> Vec<&Term> {
    match t {
        Term::Var(_) => vec![],
        Term::Lam(_, _, b) | Term::Proj(_, b) | Term::BoxI(b) | Term::FixBox(_, _, b) => vec![b],
        Term::App(a, b) | Term::Pair(a, b) | Term::LetBox(_, a, b) => vec![a, b],
    }
}

fn with_child(t: &Term, idx: usize, new: Term) -> Term {
    match (t, idx) {
        (Term::Lam(x, ty, _), 0) => Term::lam(x.clone(), ty.clone(), new),
        (Term::Proj(i, _), 0) => Term::proj(*i, new),
        (Term::BoxI(_), 0) => Term::boxi(new),
        (Term::FixBox(z, ty, _), 0) => Term::fixbox(z.clone(), ty.clone(), new),
        (Term::App(_, b), 0) => Term::app(new, b.as_ref().clone()),
        (Term::App(a, _), 1) => Term::app(a.as_ref().clone(), new),
        (Term::Pair(_, b), 0) => Term::pair(new, b.as_ref().clone()),
        (Term::Pair(a, _), 1) => Term::pair(a.as_ref().clone(), new),
        (Term::LetBox(u, _, b), 0) => Term::letbox(u.clone(), new, b.as_ref().clone()),
        (Term::LetBox(u, a, _), 1) => Term::letbox(u.clone(), a.as_ref().clone(), new),
        _ => unreachable!("child index out of range"),
    }
}

/// Finds one redex under the given strategy and contracts it.
pub fn step_with(t: &Term, cc: bool, strategy: Strategy) -> Option<(Term, StepRule, Vec<usize>)> {
    match strategy {
        Strategy::LeftmostOutermost => step_lo(t, cc, &mut Vec::new()),
        Strategy::RightmostInnermost => step_ri(t, cc, &mut Vec::new()),
    }
}

fn step_lo(t: &Term, cc: bool, path: &mut Vec<usize>) -> Option<(Term, StepRule, Vec<usize>)> {
    if let Some((t2, rule)) = contract_root(t, cc) {
        return Some((t2, rule, path.clone()));
    }
    for (i, c) in children(t).into_iter().enumerate() {
        path.push(i);
        if let Some((c2, rule, at)) = step_lo(c, cc, path) {
            path.pop();
            return Some((with_child(t, i, c2), rule, at));
        }
        path.pop();
    }
    None
}

fn step_ri(t: &Term, cc: bool, path: &mut Vec<usize>) -> Option<(Term, StepRule, Vec<usize>)> {
    let kids = children(t);
    for (i, c) in kids.into_iter().enumerate().rev() {
        path.push(i);
        if let Some((c2, rule, at)) = step_ri(c, cc, path) {
            path.pop();
            return Some((with_child(t, i, c2), rule, at));
        }
        path.pop();
    }
    if let Some((t2, rule)) = contract_root(t, cc) {
        return Some((t2, rule, path.clone()));
    }
    None
}

/// Contracts the leftmost-outermost beta redex; `None` on normal forms.
pub fn step(t: &Term) -> Option<Term> {
    step_with(t, false, Strategy::LeftmostOutermost).map(|(t, _, _)| t)
}

/// Like `step`, with the commuting conversions as extra redexes.
pub fn step_cc(t: &Term) -> Option<Term> {
    step_with(t, true, Strategy::LeftmostOutermost).map(|(t, _, _)| t)
}

/// Iterates the chosen step relation to a normal form, recording the
/// trace; errors if `fuel` steps do not suffice.
pub fn normalize(t: &Term, relation: Relation, fuel: u32) -> Result<Normalized, ReduceError> {
    normalize_with(t, relation, Strategy::LeftmostOutermost, fuel)
}

pub fn normalize_with(
    t: &Term,
    relation: Relation,
    strategy: Strategy,
    fuel: u32,
) -> Result<Normalized, ReduceError> {
    let cc = relation == Relation::Cc;
    let mut current = t.clone();
    let mut trace = ReductionTrace::default();
    for _ in 0..fuel {
        match step_with(&current, cc, strategy) {
            Some((next, rule, path)) => {
                trace.steps.push(TraceStep { path, rule, term: next.clone() });
                current = next;
            }
            None => return Ok(Normalized { term: current, trace }),
        }
    }
    if step_with(&current, cc, strategy).is_none() {
        return Ok(Normalized { term: current, trace });
    }
    Err(ReduceError::FuelExhausted(fuel))
}

/// Violation found by `subformula_check`: the premise path to the node
/// and the offending type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaViolation {
    pub path: Vec<usize>,
    pub offending: TypeExpr,
}

impl fmt::Display for SubformulaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {} at node {:?} is not a subformula of the conclusion", self.offending, self.path)
    }
}

/// Checks that every type occurring in the derivation is a subexpression
/// of the conclusion type or of a type in the conclusion's contexts.
pub fn subformula_check(d: &TypingDerivation) -> Result<(), SubformulaViolation> {
    let mut allowed: HashSet<TypeExpr> = HashSet::new();
    let mut roots: Vec<&TypeExpr> = vec![&d.ty];
    roots.extend(d.ctx.modal.iter().map(|(_, t)| t));
    roots.extend(d.ctx.intuit.iter().map(|(_, t)| t));
    for r in roots {
        for s in r.subexpressions() {
            allowed.insert(s.clone());
        }
    }
    fn walk(
        d: &TypingDerivation,
        allowed: &HashSet<TypeExpr>,
        path: &mut Vec<usize>,
    ) -> Result<(), SubformulaViolation> {
        let mut mentioned: Vec<&TypeExpr> = vec![&d.ty];
        mentioned.extend(d.ctx.modal.iter().map(|(_, t)| t));
        mentioned.extend(d.ctx.intuit.iter().map(|(_, t)| t));
        for t in mentioned {
            if !allowed.contains(t) {
                return Err(SubformulaViolation { path: path.clone(), offending: t.clone() });
            }
        }
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            walk(p, allowed, path)?;
            path.pop();
        }
        Ok(())
    }
    walk(d, &allowed, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_judgment, parse_term};
    use crate::syntax::alpha_eq;
    use crate::typecheck::{infer, SystemId};

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    #[test]
    fn beta_step() {
        assert_eq!(step(&t("(\\x:p. x) y")), Some(t("y")));
    }

    #[test]
    fn box_beta_step() {
        // let box u = box x in box u -> box x
        assert_eq!(step(&t("let box u = box x in box u")), Some(t("box x")));
    }

    #[test]
    fn gl_beta_discards_unused_fix() {
        // let box u = fix z:[]p. y in <u,u> -> <y,y> since z is not free in y
        assert_eq!(step(&t("let box u = fix z:[]p. y in <u, u>")), Some(t("<y, y>")));
    }

    #[test]
    fn gl_beta_unrolls_fix() {
        // z free in the body: one unrolling is substituted
        let r = step(&t("let box u = fix z:[]p. f z in u")).unwrap();
        assert!(alpha_eq(&r, &t("f (fix z:[]p. f z)")));
    }

    #[test]
    fn cc_redexes() {
        assert_eq!(
            step_cc(&t("fst (let box u = x in <u, u>)")),
            Some(t("let box u = x in fst <u, u>"))
        );
        assert_eq!(
            step_cc(&t("(let box u = x in f) y")),
            Some(t("let box u = x in f y"))
        );
        assert_eq!(
            step_cc(&t("let box v = (let box u = x in box u) in v")),
            Some(t("let box u = x in let box v = box u in v"))
        );
    }

    #[test]
    fn cc_avoids_capture() {
        // the argument mentions u free; the letbox binder must be renamed
        let r = step_cc(&t("(let box u = x in f) u")).unwrap();
        assert!(alpha_eq(&r, &t("let box w = x in f u")));
    }

    #[test]
    fn plain_step_ignores_cc() {
        assert_eq!(step(&t("fst (let box u = x in <u, u>)")), None);
    }

    #[test]
    fn normalize_nested() {
        let n = normalize(&t("(\\x:p. x) ((\\y:p. y) z)"), Relation::Plain, 100).unwrap();
        assert_eq!(n.term, t("z"));
        assert_eq!(n.trace.steps.len(), 2);
    }

    #[test]
    fn normalize_cc_example() {
        let n = normalize(&t("fst (let box u = x in <u, u>)"), Relation::Cc, 100).unwrap();
        assert!(alpha_eq(&n.term, &t("let box u = x in u")));
    }

    #[test]
    fn normal_form_zero_steps() {
        let n = normalize(&t("\\x:p. x"), Relation::Plain, 10).unwrap();
        assert_eq!(n.trace.steps.len(), 0);
        assert_eq!(n.term, t("\\x:p. x"));
    }

    #[test]
    fn fuel_exhaustion_reported() {
        // not enough fuel for two steps
        let e = normalize(&t("(\\x:p. x) ((\\y:p. y) z)"), Relation::Plain, 1).unwrap_err();
        assert_eq!(e, ReduceError::FuelExhausted(1));
    }

    #[test]
    fn strategies_agree_here() {
        let term = t("(\\x:p. x) ((\\y:p. y) z)");
        let a = normalize_with(&term, Relation::Plain, Strategy::LeftmostOutermost, 100).unwrap();
        let b = normalize_with(&term, Relation::Plain, Strategy::RightmostInnermost, 100).unwrap();
        assert!(alpha_eq(&a.term, &b.term));
    }

    #[test]
    fn subformula_positive() {
        let j = parse_judgment("; x:p |- x").unwrap();
        let d = infer(SystemId::K, &j.ctx, &j.term).unwrap();
        assert!(subformula_check(&d).is_ok());
    }

    #[test]
    fn subformula_negative_redex() {
        // (λx:[]p. x)(box y) in K under ⟨y:p ; ·⟩ mentions []p -> []p,
        // not a subexpression of []p or of p.
        let j = parse_judgment("y:p ; |- (\\x:[]p. x) (box y)").unwrap();
        let d = infer(SystemId::K, &j.ctx, &j.term).unwrap();
        let v = subformula_check(&d).unwrap_err();
        assert_eq!(v.offending, crate::parser::parse_type("[]p -> []p").unwrap());
    }
}
