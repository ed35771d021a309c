//! Syntax-directed type synthesis and derivation checking for the five
//! dual-context systems K, K4, GL, T, S4.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{
    alpha_eq, complement_ctx, complement_term, fresh_var, subst, Context, DualContext, ProjIndex,
    Term, TypeExpr, VarName,
};

/// Which dual-context system a judgment is checked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemId {
    K,
    K4,
    GL,
    T,
    S4,
}

impl SystemId {
    pub const ALL: [SystemId; 5] = [SystemId::K, SystemId::K4, SystemId::GL, SystemId::T, SystemId::S4];

    /// Systems whose contexts must keep complementary variables apart.
    pub fn uses_complements(self) -> bool {
        matches!(self, SystemId::K4 | SystemId::GL)
    }

    /// Systems with the modal variable rule.
    pub fn has_box_var(self) -> bool {
        matches!(self, SystemId::T | SystemId::S4)
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemId::K => "k",
            SystemId::K4 => "k4",
            SystemId::GL => "gl",
            SystemId::T => "t",
            SystemId::S4 => "s4",
        }
    }

    pub fn from_name(s: &str) -> Option<SystemId> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Some(SystemId::K),
            "k4" => Some(SystemId::K4),
            "gl" => Some(SystemId::GL),
            "t" => Some(SystemId::T),
            "s4" => Some(SystemId::S4),
            _ => None,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Names of the typing rules a derivation node may instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleName {
    Var,
    BoxVar,
    ProdI,
    ProdE1,
    ProdE2,
    ArrowI,
    ArrowE,
    BoxE,
    BoxIK,
    BoxIK4,
    BoxIGL,
    BoxIS4,
}

impl RuleName {
    pub fn name(self) -> &'static str {
        match self {
            RuleName::Var => "var",
            RuleName::BoxVar => "[]var",
            RuleName::ProdI => "*I",
            RuleName::ProdE1 => "*E1",
            RuleName::ProdE2 => "*E2",
            RuleName::ArrowI => "->I",
            RuleName::ArrowE => "->E",
            RuleName::BoxE => "[]E",
            RuleName::BoxIK => "[]I-K",
            RuleName::BoxIK4 => "[]I-K4",
            RuleName::BoxIGL => "[]I-GL",
            RuleName::BoxIS4 => "[]I-S4",
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A rule-labeled derivation tree for `⟨Δ; Γ⟩ ⊢ M : A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypingDerivation {
    pub rule: RuleName,
    pub ctx: DualContext,
    pub term: Term,
    pub ty: TypeExpr,
    pub premises: Vec<TypingDerivation>,
}

impl TypingDerivation {
    fn leaf(rule: RuleName, ctx: DualContext, term: Term, ty: TypeExpr) -> TypingDerivation {
        TypingDerivation { rule, ctx, term, ty, premises: Vec::new() }
    }

    /// Indented rendering of the derivation tree.
    pub fn pretty(&self) -> String {
        fn go(d: &TypingDerivation, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&format!(
                "[{}] {} |- {} : {}\n",
                d.rule, d.ctx, d.term, d.ty
            ));
            for p in &d.premises {
                go(p, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(VarName),
    #[error("modal variable `{0}` used outside a box in system {1}")]
    ZoneViolation(VarName, SystemId),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("ill-formed context: {0}")]
    IllFormedContext(String),
    #[error("construct `{construct}` is not part of system {sys}")]
    WrongConstructForSystem { construct: &'static str, sys: SystemId },
}

/// Checks that a dual context is well-defined for the system: the two
/// zones are disjoint and duplicate-free, and for K4/GL no context holds
/// a variable together with its complement.
pub fn well_defined(ctx: &DualContext, sys: SystemId) -> bool {
    if !ctx.modal.no_duplicates() || !ctx.intuit.no_duplicates() {
        return false;
    }
    if ctx.modal.vars().intersection(&ctx.intuit.vars()).next().is_some() {
        return false;
    }
    if sys.uses_complements() {
        for zone in [&ctx.modal, &ctx.intuit] {
            let vars = zone.vars();
            let comp = complement_ctx(zone).vars();
            if vars.intersection(&comp).next().is_some() {
                return false;
            }
        }
    }
    true
}

/// True when `v` can be added to `ctx` without breaking well-definedness.
fn binder_ok(ctx: &DualContext, sys: SystemId, v: &VarName) -> bool {
    let all = ctx.all_vars();
    if all.contains(v) {
        return false;
    }
    if sys.uses_complements() && all.contains(&v.complement()) {
        return false;
    }
    true
}

/// Renames `binder` (in `body`) to something fresh for `ctx` if needed.
fn freshen(ctx: &DualContext, sys: SystemId, binder: &VarName, body: &Term) -> (VarName, Term) {
    if binder_ok(ctx, sys, binder) {
        return (binder.clone(), body.clone());
    }
    let mut avoid = ctx.all_vars();
    avoid.extend(crate::syntax::fv(body));
    if sys.uses_complements() {
        let comps: Vec<_> = avoid.iter().map(|v| v.complement()).collect();
        avoid.extend(comps);
    }
    let fresh = fresh_var(binder, &avoid);
    let body = subst(body, binder, &Term::Var(fresh.clone()));
    (fresh, body)
}

/// Syntax-directed type synthesis. Returns the unique derivation
/// assigning a type to `m` in the given system, or the first error.
pub fn infer(sys: SystemId, ctx: &DualContext, m: &Term) -> Result<TypingDerivation, TypeError> {
    if !well_defined(ctx, sys) {
        return Err(TypeError::IllFormedContext(format!("⟨{}⟩ for system {}", ctx, sys)));
    }
    infer_wd(sys, ctx, m, &BTreeSet::new())
}

/// Like `infer` but assumes the context is already well-defined.
/// `erased` holds variables bound in an enclosing judgment that the
/// system's box-introduction premise did not transport here; using one
/// is a zone violation rather than an unknown name.
fn infer_wd(
    sys: SystemId,
    ctx: &DualContext,
    m: &Term,
    erased: &BTreeSet<VarName>,
) -> Result<TypingDerivation, TypeError> {
    match m {
        Term::Var(v) => {
            if let Some(ty) = ctx.intuit.lookup(v) {
                return Ok(TypingDerivation::leaf(RuleName::Var, ctx.clone(), m.clone(), ty.clone()));
            }
            if let Some(ty) = ctx.modal.lookup(v) {
                if sys.has_box_var() {
                    return Ok(TypingDerivation::leaf(
                        RuleName::BoxVar,
                        ctx.clone(),
                        m.clone(),
                        ty.clone(),
                    ));
                }
                return Err(TypeError::ZoneViolation(v.clone(), sys));
            }
            if erased.contains(v) || erased.contains(&v.complement()) {
                return Err(TypeError::ZoneViolation(v.clone(), sys));
            }
            Err(TypeError::UnboundVariable(v.clone()))
        }
        Term::Lam(x, annot, body) => {
            let (x2, body2) = freshen(ctx, sys, x, body);
            let inner = DualContext::new(
                ctx.modal.clone(),
                ctx.intuit.extended(x2, annot.clone()),
            );
            let premise = infer_wd(sys, &inner, &body2, erased)?;
            let ty = TypeExpr::arrow(annot.clone(), premise.ty.clone());
            Ok(TypingDerivation {
                rule: RuleName::ArrowI,
                ctx: ctx.clone(),
                term: m.clone(),
                ty,
                premises: vec![premise],
            })
        }
        Term::App(fun, arg) => {
            let df = infer_wd(sys, ctx, fun, erased)?;
            let da = infer_wd(sys, ctx, arg, erased)?;
            match df.ty.clone() {
                TypeExpr::Arrow(dom, cod) => {
                    if *dom != da.ty {
                        return Err(TypeError::TypeMismatch {
                            expected: dom.to_string(),
                            found: da.ty.to_string(),
                        });
                    }
                    Ok(TypingDerivation {
                        rule: RuleName::ArrowE,
                        ctx: ctx.clone(),
                        term: m.clone(),
                        ty: *cod,
                        premises: vec![df, da],
                    })
                }
                other => Err(TypeError::TypeMismatch {
                    expected: "a function type".into(),
                    found: other.to_string(),
                }),
            }
        }
        Term::Pair(a, b) => {
            let da = infer_wd(sys, ctx, a, erased)?;
            let db = infer_wd(sys, ctx, b, erased)?;
            let ty = TypeExpr::prod(da.ty.clone(), db.ty.clone());
            Ok(TypingDerivation {
                rule: RuleName::ProdI,
                ctx: ctx.clone(),
                term: m.clone(),
                ty,
                premises: vec![da, db],
            })
        }
        Term::Proj(i, body) => {
            let d = infer_wd(sys, ctx, body, erased)?;
            match d.ty.clone() {
                TypeExpr::Prod(a, b) => {
                    let (rule, ty) = match i {
                        ProjIndex::Fst => (RuleName::ProdE1, *a),
                        ProjIndex::Snd => (RuleName::ProdE2, *b),
                    };
                    Ok(TypingDerivation {
                        rule,
                        ctx: ctx.clone(),
                        term: m.clone(),
                        ty,
                        premises: vec![d],
                    })
                }
                other => Err(TypeError::TypeMismatch {
                    expected: "a product type".into(),
                    found: other.to_string(),
                }),
            }
        }
        Term::BoxI(body) => {
            let (rule, premise_ctx, premise_term) = match sys {
                SystemId::K | SystemId::T => (
                    RuleName::BoxIK,
                    DualContext::new(Context::new(), ctx.modal.clone()),
                    body.as_ref().clone(),
                ),
                SystemId::S4 => (
                    RuleName::BoxIS4,
                    DualContext::new(ctx.modal.clone(), Context::new()),
                    body.as_ref().clone(),
                ),
                SystemId::K4 => (
                    RuleName::BoxIK4,
                    DualContext::new(ctx.modal.clone(), complement_ctx(&ctx.modal)),
                    complement_term(body),
                ),
                SystemId::GL => {
                    return Err(TypeError::WrongConstructForSystem { construct: "box", sys })
                }
            };
            if !well_defined(&premise_ctx, sys) {
                return Err(TypeError::IllFormedContext(format!(
                    "⟨{}⟩ for system {}",
                    premise_ctx, sys
                )));
            }
            let mut erased2 = erased.clone();
            erased2.extend(ctx.all_vars());
            let premise = infer_wd(sys, &premise_ctx, &premise_term, &erased2)?;
            let ty = TypeExpr::boxed(premise.ty.clone());
            Ok(TypingDerivation {
                rule,
                ctx: ctx.clone(),
                term: m.clone(),
                ty,
                premises: vec![premise],
            })
        }
        Term::FixBox(z, annot, body) => {
            if sys != SystemId::GL {
                return Err(TypeError::WrongConstructForSystem { construct: "fix", sys });
            }
            let inner_ty = match annot {
                TypeExpr::Box(inner) => inner.as_ref().clone(),
                other => {
                    return Err(TypeError::TypeMismatch {
                        expected: "a boxed annotation `[]A` on fix".into(),
                        found: other.to_string(),
                    })
                }
            };
            // premise: ⟨Δ; Δ⊥, z⊥:□A⟩ ⊢ M⊥ : A
            let premise_modal = ctx.modal.clone();
            let mut premise_intuit = complement_ctx(&ctx.modal);
            let premise_base = DualContext::new(premise_modal.clone(), premise_intuit.clone());
            let (z2, body2) = freshen(&premise_base, sys, z, body);
            premise_intuit.push(z2.complement(), annot.clone());
            let premise_ctx = DualContext::new(premise_modal, premise_intuit);
            if !well_defined(&premise_ctx, sys) {
                return Err(TypeError::IllFormedContext(format!(
                    "⟨{}⟩ for system {}",
                    premise_ctx, sys
                )));
            }
            let mut erased2 = erased.clone();
            erased2.extend(ctx.all_vars());
            let premise = infer_wd(sys, &premise_ctx, &complement_term(&body2), &erased2)?;
            if premise.ty != inner_ty {
                return Err(TypeError::TypeMismatch {
                    expected: inner_ty.to_string(),
                    found: premise.ty.to_string(),
                });
            }
            Ok(TypingDerivation {
                rule: RuleName::BoxIGL,
                ctx: ctx.clone(),
                term: m.clone(),
                ty: annot.clone(),
                premises: vec![premise],
            })
        }
        Term::LetBox(u, bound, body) => {
            let d_bound = infer_wd(sys, ctx, bound, erased)?;
            let inner_ty = match d_bound.ty.clone() {
                TypeExpr::Box(inner) => *inner,
                other => {
                    return Err(TypeError::TypeMismatch {
                        expected: "a boxed type `[]A`".into(),
                        found: other.to_string(),
                    })
                }
            };
            let (u2, body2) = freshen(ctx, sys, u, body);
            let inner_ctx = DualContext::new(
                ctx.modal.extended(u2, inner_ty),
                ctx.intuit.clone(),
            );
            let d_body = infer_wd(sys, &inner_ctx, &body2, erased)?;
            let ty = d_body.ty.clone();
            Ok(TypingDerivation {
                rule: RuleName::BoxE,
                ctx: ctx.clone(),
                term: m.clone(),
                ty,
                premises: vec![d_bound, d_body],
            })
        }
    }
}

/// A defect found while checking a derivation tree: the path of premise
/// indices to the first bad node, and why it is bad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationDefect {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for DerivationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad derivation node at {:?}: {}", self.path, self.reason)
    }
}

/// Verifies that every node of `d` is a correct instance of its named
/// rule for the given system.
pub fn check_derivation(d: &TypingDerivation, sys: SystemId) -> Result<(), DerivationDefect> {
    let mut path = Vec::new();
    check_node(d, sys, &mut path)
}

fn defect(path: &[usize], reason: impl Into<String>) -> Result<(), DerivationDefect> {
    Err(DerivationDefect { path: path.to_vec(), reason: reason.into() })
}

fn check_node(
    d: &TypingDerivation,
    sys: SystemId,
    path: &mut Vec<usize>,
) -> Result<(), DerivationDefect> {
    if !well_defined(&d.ctx, sys) {
        return defect(path, format!("context ⟨{}⟩ not well-defined for {}", d.ctx, sys));
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(p, sys, path)?;
        path.pop();
    }
    let arity_ok = |n: usize| d.premises.len() == n;
    match d.rule {
        RuleName::Var => {
            if !arity_ok(0) {
                return defect(path, "var takes no premises");
            }
            match &d.term {
                Term::Var(v) => match d.ctx.intuit.lookup(v) {
                    Some(ty) if *ty == d.ty => Ok(()),
                    Some(_) => defect(path, "var type disagrees with context"),
                    None => defect(path, "var not bound in the intuitionistic zone"),
                },
                _ => defect(path, "var rule on a non-variable"),
            }
        }
        RuleName::BoxVar => {
            if !sys.has_box_var() {
                return defect(path, format!("[]var is not a rule of {}", sys));
            }
            if !arity_ok(0) {
                return defect(path, "[]var takes no premises");
            }
            match &d.term {
                Term::Var(v) => match d.ctx.modal.lookup(v) {
                    Some(ty) if *ty == d.ty => Ok(()),
                    Some(_) => defect(path, "[]var type disagrees with context"),
                    None => defect(path, "[]var not bound in the modal zone"),
                },
                _ => defect(path, "[]var rule on a non-variable"),
            }
        }
        RuleName::ProdI => {
            if !arity_ok(2) {
                return defect(path, "*I takes two premises");
            }
            let (a, b) = (&d.premises[0], &d.premises[1]);
            if a.ctx != d.ctx || b.ctx != d.ctx {
                return defect(path, "*I premises must share the conclusion context");
            }
            match (&d.term, &d.ty) {
                (Term::Pair(l, r), TypeExpr::Prod(ta, tb)) => {
                    if !alpha_eq(l, &a.term) || !alpha_eq(r, &b.term) {
                        return defect(path, "*I premise terms disagree with the pair");
                    }
                    if a.ty != **ta || b.ty != **tb {
                        return defect(path, "*I premise types disagree with the product");
                    }
                    Ok(())
                }
                _ => defect(path, "*I concludes a pair at a product type"),
            }
        }
        RuleName::ProdE1 | RuleName::ProdE2 => {
            if !arity_ok(1) {
                return defect(path, "*E takes one premise");
            }
            let p = &d.premises[0];
            if p.ctx != d.ctx {
                return defect(path, "*E premise must share the conclusion context");
            }
            let want = match d.rule {
                RuleName::ProdE1 => ProjIndex::Fst,
                _ => ProjIndex::Snd,
            };
            match (&d.term, &p.ty) {
                (Term::Proj(i, body), TypeExpr::Prod(ta, tb)) if *i == want => {
                    if !alpha_eq(body, &p.term) {
                        return defect(path, "*E premise term disagrees");
                    }
                    let picked = match want {
                        ProjIndex::Fst => ta,
                        ProjIndex::Snd => tb,
                    };
                    if d.ty != **picked {
                        return defect(path, "*E conclusion type disagrees");
                    }
                    Ok(())
                }
                _ => defect(path, "*E concludes a projection of a product"),
            }
        }
        RuleName::ArrowI => {
            if !arity_ok(1) {
                return defect(path, "->I takes one premise");
            }
            let p = &d.premises[0];
            match (&d.term, &d.ty) {
                (Term::Lam(x, annot, body), TypeExpr::Arrow(ta, tb)) => {
                    if annot != ta.as_ref() {
                        return defect(path, "->I annotation disagrees with the arrow domain");
                    }
                    if p.ty != **tb {
                        return defect(path, "->I premise type disagrees with the codomain");
                    }
                    if p.ctx.modal != d.ctx.modal {
                        return defect(path, "->I must keep the modal zone");
                    }
                    let (last, init) = match p.ctx.intuit.0.split_last() {
                        Some(x) => x,
                        None => return defect(path, "->I premise must bind the argument"),
                    };
                    if Context(init.to_vec()) != d.ctx.intuit {
                        return defect(path, "->I premise must extend the intuitionistic zone");
                    }
                    if last.1 != *annot {
                        return defect(path, "->I bound variable type disagrees");
                    }
                    let rebuilt = Term::lam(last.0.clone(), annot.clone(), p.term.clone());
                    let given = Term::lam(x.clone(), annot.clone(), body.as_ref().clone());
                    if !alpha_eq(&rebuilt, &given) {
                        return defect(path, "->I premise term disagrees with the body");
                    }
                    Ok(())
                }
                _ => defect(path, "->I concludes a lambda at an arrow type"),
            }
        }
        RuleName::ArrowE => {
            if !arity_ok(2) {
                return defect(path, "->E takes two premises");
            }
            let (df, da) = (&d.premises[0], &d.premises[1]);
            if df.ctx != d.ctx || da.ctx != d.ctx {
                return defect(path, "->E premises must share the conclusion context");
            }
            match (&d.term, &df.ty) {
                (Term::App(fun, arg), TypeExpr::Arrow(dom, cod)) => {
                    if !alpha_eq(fun, &df.term) || !alpha_eq(arg, &da.term) {
                        return defect(path, "->E premise terms disagree");
                    }
                    if da.ty != **dom || d.ty != **cod {
                        return defect(path, "->E types disagree");
                    }
                    Ok(())
                }
                _ => defect(path, "->E concludes an application of an arrow"),
            }
        }
        RuleName::BoxE => {
            if !arity_ok(2) {
                return defect(path, "[]E takes two premises");
            }
            let (dm, dn) = (&d.premises[0], &d.premises[1]);
            if dm.ctx != d.ctx {
                return defect(path, "[]E bound premise must share the conclusion context");
            }
            match (&d.term, &dm.ty) {
                (Term::LetBox(u, bound, body), TypeExpr::Box(inner)) => {
                    if !alpha_eq(bound, &dm.term) {
                        return defect(path, "[]E bound term disagrees");
                    }
                    if dn.ty != d.ty {
                        return defect(path, "[]E body type disagrees with the conclusion");
                    }
                    if dn.ctx.intuit != d.ctx.intuit {
                        return defect(path, "[]E must keep the intuitionistic zone");
                    }
                    let (last, init) = match dn.ctx.modal.0.split_last() {
                        Some(x) => x,
                        None => return defect(path, "[]E body premise must bind the variable"),
                    };
                    if Context(init.to_vec()) != d.ctx.modal {
                        return defect(path, "[]E body premise must extend the modal zone");
                    }
                    if last.1 != **inner {
                        return defect(path, "[]E bound variable type disagrees");
                    }
                    let rebuilt = Term::letbox(last.0.clone(), dm.term.clone(), dn.term.clone());
                    let given = Term::letbox(u.clone(), bound.as_ref().clone(), body.as_ref().clone());
                    if !alpha_eq(&rebuilt, &given) {
                        return defect(path, "[]E body term disagrees");
                    }
                    Ok(())
                }
                _ => defect(path, "[]E eliminates a boxed bound term"),
            }
        }
        RuleName::BoxIK | RuleName::BoxIK4 | RuleName::BoxIS4 => {
            let allowed = match d.rule {
                RuleName::BoxIK => matches!(sys, SystemId::K | SystemId::T),
                RuleName::BoxIK4 => sys == SystemId::K4,
                _ => sys == SystemId::S4,
            };
            if !allowed {
                return defect(path, format!("{} is not a rule of {}", d.rule, sys));
            }
            if !arity_ok(1) {
                return defect(path, "[]I takes one premise");
            }
            let p = &d.premises[0];
            let (body, inner) = match (&d.term, &d.ty) {
                (Term::BoxI(body), TypeExpr::Box(inner)) => (body, inner),
                _ => return defect(path, "[]I concludes `box M` at `[]A`"),
            };
            if p.ty != **inner {
                return defect(path, "[]I premise type disagrees");
            }
            match d.rule {
                RuleName::BoxIK => {
                    if !p.ctx.modal.is_empty() || p.ctx.intuit != d.ctx.modal {
                        return defect(path, "[]I-K premise must be ⟨·; Δ⟩");
                    }
                    if !alpha_eq(&p.term, body) {
                        return defect(path, "[]I-K premise term disagrees");
                    }
                }
                RuleName::BoxIS4 => {
                    if p.ctx.modal != d.ctx.modal || !p.ctx.intuit.is_empty() {
                        return defect(path, "[]I-S4 premise must be ⟨Δ; ·⟩");
                    }
                    if !alpha_eq(&p.term, body) {
                        return defect(path, "[]I-S4 premise term disagrees");
                    }
                }
                _ => {
                    if p.ctx.modal != d.ctx.modal
                        || p.ctx.intuit != complement_ctx(&d.ctx.modal)
                    {
                        return defect(path, "[]I-K4 premise must be ⟨Δ; Δ⊥⟩");
                    }
                    if !alpha_eq(&p.term, &complement_term(body)) {
                        return defect(path, "[]I-K4 premise term must be the complement");
                    }
                }
            }
            Ok(())
        }
        RuleName::BoxIGL => {
            if sys != SystemId::GL {
                return defect(path, format!("[]I-GL is not a rule of {}", sys));
            }
            if !arity_ok(1) {
                return defect(path, "[]I-GL takes one premise");
            }
            let p = &d.premises[0];
            let (z, annot, body) = match &d.term {
                Term::FixBox(z, annot, body) => (z, annot, body),
                _ => return defect(path, "[]I-GL concludes a fixbox"),
            };
            if d.ty != *annot {
                return defect(path, "[]I-GL conclusion type must equal the annotation");
            }
            let inner = match annot {
                TypeExpr::Box(inner) => inner,
                _ => return defect(path, "[]I-GL annotation must be a boxed type"),
            };
            if p.ty != **inner {
                return defect(path, "[]I-GL premise type disagrees");
            }
            if p.ctx.modal != d.ctx.modal {
                return defect(path, "[]I-GL premise must keep Δ");
            }
            let (last, init) = match p.ctx.intuit.0.split_last() {
                Some(x) => x,
                None => return defect(path, "[]I-GL premise must bind the diagonal variable"),
            };
            if Context(init.to_vec()) != complement_ctx(&d.ctx.modal) {
                return defect(path, "[]I-GL premise zone must be Δ⊥ plus the diagonal");
            }
            if last.1 != *annot {
                return defect(path, "[]I-GL diagonal variable must have the boxed type");
            }
            // Premise term is M⊥ with z renamed to (diag var)⊥.
            let diag = last.0.complement();
            let renamed = subst(body, z, &Term::Var(diag));
            if !alpha_eq(&p.term, &complement_term(&renamed)) {
                return defect(path, "[]I-GL premise term must be the complemented body");
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_judgment;

    fn check(sys: SystemId, src: &str) -> Result<TypeExpr, TypeError> {
        let j = parse_judgment(src).expect("judgment parses");
        infer(sys, &j.ctx, &j.term).map(|d| d.ty)
    }

    #[test]
    fn well_defined_examples() {
        let p = TypeExpr::atom("p");
        let q = TypeExpr::atom("q");
        // ⟨u:p ; u:q⟩ breaks disjointness in every system
        let shared = DualContext::new(
            Context::from_pairs(vec![(VarName::plain("u"), p.clone())]),
            Context::from_pairs(vec![(VarName::plain("u"), q.clone())]),
        );
        assert!(!well_defined(&shared, SystemId::K));
        // ⟨x:p, x':q ; ·⟩ is rejected exactly in K4/GL
        let complements = DualContext::new(
            Context::from_pairs(vec![
                (VarName::plain("x"), p.clone()),
                (VarName::primed("x"), q.clone()),
            ]),
            Context::new(),
        );
        assert!(!well_defined(&complements, SystemId::K4));
        assert!(!well_defined(&complements, SystemId::GL));
        assert!(well_defined(&complements, SystemId::S4));
        // complements split across the zones are fine even in K4
        let split = DualContext::new(
            Context::from_pairs(vec![(VarName::plain("x"), p)]),
            Context::from_pairs(vec![(VarName::primed("x"), q)]),
        );
        assert!(well_defined(&split, SystemId::K4));
    }

    #[test]
    fn var_rule_in_every_system() {
        for sys in SystemId::ALL {
            let ty = check(sys, "; x:p |- x").unwrap();
            assert_eq!(ty, TypeExpr::atom("p"));
        }
    }

    #[test]
    fn axiom_k_term_types_in_k() {
        let ty = check(
            SystemId::K,
            "; |- \\f:[](p -> q). \\x:[]p. let box g = f in let box a = x in box (g a)",
        )
        .unwrap();
        assert_eq!(ty, crate::parser::parse_type("[](p -> q) -> []p -> []q").unwrap());
    }

    #[test]
    fn axiom_4_term_types_in_k4_only_not_k_t() {
        let src = "; |- \\x:[]p. let box u = x in box box u";
        let want = crate::parser::parse_type("[]p -> [][]p").unwrap();
        assert_eq!(check(SystemId::K4, src).unwrap(), want);
        assert_eq!(check(SystemId::S4, src).unwrap(), want);
        assert!(matches!(check(SystemId::K, src), Err(TypeError::ZoneViolation(_, _))));
        assert!(matches!(check(SystemId::T, src), Err(TypeError::ZoneViolation(_, _))));
    }

    #[test]
    fn axiom_t_term_types_in_t_not_k() {
        let src = "; |- \\x:[]p. let box u = x in u";
        let want = crate::parser::parse_type("[]p -> p").unwrap();
        assert_eq!(check(SystemId::T, src).unwrap(), want);
        assert!(matches!(check(SystemId::K, src), Err(TypeError::ZoneViolation(_, _))));
    }

    #[test]
    fn loeb_term_types_in_gl() {
        let src = "; |- \\f:[]([]p -> p). let box g = f in fix z:[]p. g z";
        let want = crate::parser::parse_type("[]([]p -> p) -> []p").unwrap();
        assert_eq!(check(SystemId::GL, src).unwrap(), want);
        for sys in [SystemId::K, SystemId::K4, SystemId::T, SystemId::S4] {
            assert!(matches!(
                check(sys, src),
                Err(TypeError::WrongConstructForSystem { construct: "fix", .. })
            ));
        }
    }

    #[test]
    fn gl_rejects_box() {
        let src = "; x:p |- box x";
        assert!(matches!(
            check(SystemId::GL, src),
            Err(TypeError::WrongConstructForSystem { construct: "box", .. })
        ));
    }

    #[test]
    fn gl_fixbox_premise_shape() {
        let j = parse_judgment("; |- \\f:[]([]p -> p). let box g = f in fix z:[]p. g z").unwrap();
        let d = infer(SystemId::GL, &j.ctx, &j.term).unwrap();
        // walk to the fixbox node: ->I / []E / []I-GL
        let fix_node = &d.premises[0].premises[1];
        assert_eq!(fix_node.rule, RuleName::BoxIGL);
        let premise = &fix_node.premises[0];
        let expect = parse_judgment("g:[]p -> p ; g':[]p -> p, z':[]p |- g' z' : p").unwrap();
        assert_eq!(premise.ctx, expect.ctx);
        assert!(alpha_eq(&premise.term, &expect.term));
        assert_eq!(premise.ty, TypeExpr::atom("p"));
    }

    #[test]
    fn k4_inner_premise_shape() {
        let j = parse_judgment("; |- \\x:[]p. let box u = x in box box u").unwrap();
        let d = infer(SystemId::K4, &j.ctx, &j.term).unwrap();
        let outer_box = &d.premises[0].premises[1];
        assert_eq!(outer_box.rule, RuleName::BoxIK4);
        let inner_box = &outer_box.premises[0];
        assert_eq!(inner_box.rule, RuleName::BoxIK4);
        let inner_premise = &inner_box.premises[0];
        let expect = parse_judgment("u:p ; u':p |- u' : p").unwrap();
        assert_eq!(inner_premise.ctx, expect.ctx);
        assert!(alpha_eq(&inner_premise.term, &expect.term));
    }

    #[test]
    fn unbound_is_distinct_from_zone_violation() {
        assert!(matches!(
            check(SystemId::K, "; |- y"),
            Err(TypeError::UnboundVariable(_))
        ));
        assert!(matches!(
            check(SystemId::K, "u:p ; |- u"),
            Err(TypeError::ZoneViolation(_, _))
        ));
    }

    #[test]
    fn infer_output_checks() {
        let cases = [
            (SystemId::K, "; |- \\f:[](p -> q). \\x:[]p. let box g = f in let box a = x in box (g a)"),
            (SystemId::K4, "; |- \\x:[]p. let box u = x in box box u"),
            (SystemId::T, "; x:[]p |- let box u = x in u"),
            (SystemId::S4, "u:p ; |- box u"),
            (SystemId::GL, "; |- \\f:[]([]p -> p). let box g = f in fix z:[]p. g z"),
        ];
        for (sys, src) in cases {
            let j = parse_judgment(src).unwrap();
            let d = infer(sys, &j.ctx, &j.term).unwrap();
            check_derivation(&d, sys).unwrap();
        }
    }

    #[test]
    fn check_derivation_rejects_wrong_system() {
        let j = parse_judgment("u:p ; |- u").unwrap();
        let d = infer(SystemId::T, &j.ctx, &j.term).unwrap();
        assert_eq!(d.rule, RuleName::BoxVar);
        assert!(check_derivation(&d, SystemId::K).is_err());
    }

    #[test]
    fn check_derivation_rejects_perturbed_k4_zone() {
        let j = parse_judgment("u:p ; |- box u").unwrap();
        let mut d = infer(SystemId::K4, &j.ctx, &j.term).unwrap();
        // premise zone should be ⟨u:p ; u':p⟩; break the complement zone
        d.premises[0].ctx.intuit = Context::from_pairs(vec![(VarName::plain("w"), TypeExpr::atom("p"))]);
        d.premises[0].term = Term::var("w");
        assert!(check_derivation(&d, SystemId::K4).is_err());
    }

    #[test]
    fn infer_is_deterministic() {
        let j = parse_judgment("u:p ; x:[]q |- <box u, let box v = x in box v>").unwrap();
        let a = infer(SystemId::K4, &j.ctx, &j.term).unwrap();
        let b = infer(SystemId::K4, &j.ctx, &j.term).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn binder_shadowing_context_is_renamed() {
        // x already in Γ; the lambda binder must be freshened, same type
        let ty = check(SystemId::K, "; x:p |- \\x:q. x").unwrap();
        assert_eq!(ty, crate::parser::parse_type("q -> q").unwrap());
        // and the original is still reachable outside the lambda
        let ty = check(SystemId::K, "; x:p |- <x, \\x:q. x>").unwrap();
        assert_eq!(ty, crate::parser::parse_type("p * (q -> q)").unwrap());
    }

    #[test]
    fn letbox_requires_boxed_bound() {
        let r = check(SystemId::K, "; x:p |- let box u = x in box u");
        assert!(matches!(r, Err(TypeError::TypeMismatch { .. })));
    }

    #[test]
    fn fix_annotation_must_be_boxed() {
        let t = Term::fixbox(VarName::plain("z"), TypeExpr::atom("p"), Term::var("y"));
        let ctx = parse_judgment("; y:p |- y").unwrap().ctx;
        assert!(matches!(
            infer(SystemId::GL, &ctx, &t),
            Err(TypeError::TypeMismatch { .. })
        ));
    }
}
