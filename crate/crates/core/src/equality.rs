//! Equality of well-typed terms for K, K4, T, S4: rewrite both sides to
//! a candidate canonical form (beta + box-beta + commuting conversions,
//! then eta-contraction) and compare up to alpha. Sound but not claimed
//! complete; "not equal" means "not proved equal".

use crate::reduce::{normalize, ReduceError, Relation};
use crate::syntax::{alpha_eq, fv, DualContext, Term, TypeExpr};
use crate::typecheck::{infer, SystemId, TypeError};

#[derive(Debug, Clone)]
pub struct EqVerdict {
    pub equal: bool,
    pub left_nf: Term,
    pub right_nf: Term,
    /// Names of the rewrite rules applied, left side then right side.
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EqError {
    #[error("term does not check at the stated type: {0}")]
    IllTyped(TypeError),
    #[error("the equational theory does not cover {0}")]
    UnsupportedSystem(SystemId),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

/// One innermost-leftmost eta contraction:
/// `\x:A. M x -> M` when `x` is not free in `M`, and
/// `let box u = M in box u -> M`.
fn eta_once(t: &Term) -> Option<Term> {
    // Try subterms first (post-order), then the root.
    match t {
        Term::Var(_) => {}
        Term::Lam(x, ty, b) => {
            if let Some(b2) = eta_once(b) {
                return Some(Term::lam(x.clone(), ty.clone(), b2));
            }
        }
        Term::App(a, b) => {
            if let Some(a2) = eta_once(a) {
                return Some(Term::app(a2, b.as_ref().clone()));
            }
            if let Some(b2) = eta_once(b) {
                return Some(Term::app(a.as_ref().clone(), b2));
            }
        }
        Term::Pair(a, b) => {
            if let Some(a2) = eta_once(a) {
                return Some(Term::pair(a2, b.as_ref().clone()));
            }
            if let Some(b2) = eta_once(b) {
                return Some(Term::pair(a.as_ref().clone(), b2));
            }
        }
        Term::Proj(i, b) => {
            if let Some(b2) = eta_once(b) {
                return Some(Term::proj(*i, b2));
            }
        }
        Term::BoxI(b) => {
            if let Some(b2) = eta_once(b) {
                return Some(Term::boxi(b2));
            }
        }
        Term::LetBox(u, m, n) => {
            if let Some(m2) = eta_once(m) {
                return Some(Term::letbox(u.clone(), m2, n.as_ref().clone()));
            }
            if let Some(n2) = eta_once(n) {
                return Some(Term::letbox(u.clone(), m.as_ref().clone(), n2));
            }
        }
        Term::FixBox(z, ty, b) => {
            if let Some(b2) = eta_once(b) {
                return Some(Term::fixbox(z.clone(), ty.clone(), b2));
            }
        }
    }
    match t {
        // (→η): λx:A. M x = M when x ∉ fv(M)
        Term::Lam(x, _, body) => match body.as_ref() {
            Term::App(m, arg) => match arg.as_ref() {
                Term::Var(v) if v == x && !fv(m).contains(x) => Some(m.as_ref().clone()),
                _ => None,
            },
            _ => None,
        },
        // (□η): let box u = M in box u = M
        Term::LetBox(u, m, body) => match body.as_ref() {
            Term::BoxI(inner) => match inner.as_ref() {
                Term::Var(v) if v == u => Some(m.as_ref().clone()),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// Canonicalizes: contract the eta redexes already visible (before
/// cc-normalization can push applications under a letbox and hide
/// them), then cc-normalize, then alternate eta contractions with
/// re-normalization until a fixpoint.
pub fn canonical_form(t: &Term, fuel: u32, trace: &mut Vec<String>) -> Result<Term, ReduceError> {
    let mut current = t.clone();
    while let Some(next) = eta_once(&current) {
        trace.push("eta".into());
        current = next;
    }
    let n = normalize(&current, Relation::Cc, fuel)?;
    trace.extend(n.trace.steps.iter().map(|s| s.rule.name().to_string()));
    current = n.term;
    loop {
        match eta_once(&current) {
            Some(next) => {
                trace.push("eta".into());
                let n = normalize(&next, Relation::Cc, fuel)?;
                trace.extend(n.trace.steps.iter().map(|s| s.rule.name().to_string()));
                current = n.term;
            }
            None => return Ok(current),
        }
    }
}

/// Decides (soundly) whether two terms of type `ty` are equal in the
/// equational theory of the system. GL has no equational theory here.
pub fn eq_terms(
    sys: SystemId,
    ctx: &DualContext,
    m: &Term,
    n: &Term,
    ty: &TypeExpr,
) -> Result<EqVerdict, EqError> {
    eq_terms_with_fuel(sys, ctx, m, n, ty, 10_000)
}

pub fn eq_terms_with_fuel(
    sys: SystemId,
    ctx: &DualContext,
    m: &Term,
    n: &Term,
    ty: &TypeExpr,
    fuel: u32,
) -> Result<EqVerdict, EqError> {
    if sys == SystemId::GL {
        return Err(EqError::UnsupportedSystem(sys));
    }
    for side in [m, n] {
        let d = infer(sys, ctx, side).map_err(EqError::IllTyped)?;
        if d.ty != *ty {
            return Err(EqError::IllTyped(TypeError::TypeMismatch {
                expected: ty.to_string(),
                found: d.ty.to_string(),
            }));
        }
    }
    let mut trace = Vec::new();
    let left_nf = canonical_form(m, fuel, &mut trace)?;
    let right_nf = canonical_form(n, fuel, &mut trace)?;
    let equal = alpha_eq(&left_nf, &right_nf);
    Ok(EqVerdict { equal, left_nf, right_nf, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_eq_judgment, parse_type};

    fn verdict(sys: SystemId, src: &str) -> EqVerdict {
        let j = parse_eq_judgment(src).unwrap();
        eq_terms(sys, &j.ctx, &j.left, &j.right, &j.ty).unwrap()
    }

    #[test]
    fn box_eta() {
        let v = verdict(SystemId::K, "; x:[]p |- let box u = x in box u = x : []p");
        assert!(v.equal);
    }

    #[test]
    fn arrow_eta() {
        let v = verdict(SystemId::K, "; f:p -> p |- \\x:p. f x = f : p -> p");
        assert!(v.equal);
    }

    #[test]
    fn reflexive() {
        let v = verdict(SystemId::S4, "u:p ; |- box u = box u : []p");
        assert!(v.equal);
    }

    #[test]
    fn distinct_normal_forms() {
        let v = verdict(SystemId::K, "; y:p |- \\x:p. x = \\x:p. y : p -> p");
        assert!(!v.equal);
    }

    #[test]
    fn beta_box_instances() {
        let v = verdict(SystemId::K, "u:p ; |- let box v = box u in box v = box u : []p");
        assert!(v.equal);
    }

    #[test]
    fn gl_unsupported() {
        let j = parse_eq_judgment("; x:[]p |- x = x : []p").unwrap();
        let e = eq_terms(SystemId::GL, &j.ctx, &j.left, &j.right, &j.ty).unwrap_err();
        assert!(matches!(e, EqError::UnsupportedSystem(SystemId::GL)));
    }

    #[test]
    fn ill_typed_rejected() {
        let j = parse_eq_judgment("; x:p |- x = x : q").unwrap();
        assert!(matches!(
            eq_terms(SystemId::K, &j.ctx, &j.left, &j.right, &j.ty),
            Err(EqError::IllTyped(_))
        ));
        let _ = parse_type("q").unwrap();
    }

    #[test]
    fn congruence_closure_preserves_equality() {
        // the (□η) pair, pushed through the one-hole contexts of the
        // congruence rules
        let base_l = "let box u = x in box u";
        let base_r = "x";
        for (l, r, ty, ctx) in [
            // pair context
            ("<[L], y>", "<[R], y>", "[]p * q", "; x:[]p, y:q"),
            // application context
            ("f [L]", "f [R]", "q", "; x:[]p, f:[]p -> q"),
            // lambda context
            ("\\w:q. [L]", "\\w:q. [R]", "q -> []p", "; x:[]p"),
            // letbox context
            ("let box v = [L] in box v", "let box v = [R] in box v", "[]p", "; x:[]p"),
            // projection context
            ("fst <[L], y>", "fst <[R], y>", "[]p", "; x:[]p, y:q"),
        ] {
            let src = format!(
                "{} |- {} = {} : {}",
                ctx,
                l.replace("[L]", &format!("({})", base_l)),
                r.replace("[R]", base_r),
                ty
            );
            let j = crate::parser::parse_eq_judgment(&src).unwrap();
            let v = eq_terms(SystemId::K, &j.ctx, &j.left, &j.right, &j.ty).unwrap();
            assert!(v.equal, "congruence failed for {}", src);
        }
    }

    #[test]
    fn equivalence_relation_shape() {
        // m, a beta-expansion of m, and an eta-expansion of that: all
        // pairwise equal, exercising symmetry and transitivity
        let ctx_src = "; f:p -> p, y:p";
        let m = "f y";
        let beta_exp = "(\\w:p. f w) y";
        let eta_then_beta = "(\\w:p. (\\v:p. f v) w) y";
        for (a, b) in [
            (m, beta_exp),
            (beta_exp, m),
            (beta_exp, eta_then_beta),
            (m, eta_then_beta),
            (eta_then_beta, m),
        ] {
            let src = format!("{} |- {} = {} : p", ctx_src, a, b);
            let j = crate::parser::parse_eq_judgment(&src).unwrap();
            let v = eq_terms(SystemId::K, &j.ctx, &j.left, &j.right, &j.ty).unwrap();
            assert!(v.equal, "{} should equal {}", a, b);
        }
    }

    #[test]
    fn eta_under_binders() {
        let v = verdict(
            SystemId::K,
            "; f:p -> p -> p |- \\x:p. \\y:p. f x y = f : p -> p -> p",
        );
        assert!(v.equal);
    }
}
