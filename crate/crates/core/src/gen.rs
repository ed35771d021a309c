//! Seeded random generation of types, raw terms, contexts, and
//! well-typed terms per system. Backs the empirical metatheory checks
//! and the benchmark corpora.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{complement_ctx, complement_term, Context, DualContext, ProjIndex, Term, TypeExpr, VarName};
use crate::typecheck::SystemId;

const FREE_POOL: [&str; 5] = ["x", "y", "z", "f", "g"];
const MODAL_POOL: [&str; 3] = ["u", "v", "w"];

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub atoms: Vec<String>,
    pub max_type_depth: usize,
    pub max_modal: usize,
    pub max_intuit: usize,
    pub max_term_size: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: vec!["p".into(), "q".into(), "r".into()],
            max_type_depth: 2,
            max_modal: 2,
            max_intuit: 2,
            max_term_size: 60,
        }
    }
}

pub struct TermGen {
    rng: ChaCha8Rng,
    pub cfg: GenConfig,
    fresh: u64,
}

impl TermGen {
    pub fn new(seed: u64, cfg: GenConfig) -> TermGen {
        TermGen { rng: ChaCha8Rng::seed_from_u64(seed), cfg, fresh: 0 }
    }

    pub fn with_seed(seed: u64) -> TermGen {
        TermGen::new(seed, GenConfig::default())
    }

    fn fresh_binder(&mut self) -> VarName {
        self.fresh += 1;
        VarName::plain(format!("b{}", self.fresh))
    }

    /// Uniform draw from `0..n`, for callers composing their own cases.
    pub fn choose(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.rng.random_range(0..xs.len())]
    }

    pub fn random_type(&mut self, depth: usize) -> TypeExpr {
        let atom = TypeExpr::atom(self.pick(&self.cfg.atoms.clone()).clone());
        if depth == 0 {
            return atom;
        }
        match self.rng.random_range(0..6) {
            0 | 1 => atom,
            2 => TypeExpr::prod(self.random_type(depth - 1), self.random_type(depth - 1)),
            3 | 4 => TypeExpr::arrow(self.random_type(depth - 1), self.random_type(depth - 1)),
            _ => TypeExpr::boxed(self.random_type(depth - 1)),
        }
    }

    fn small_type(&mut self) -> TypeExpr {
        self.random_type(1)
    }

    /// A random well-defined dual context for the system; binder bases
    /// are distinct and unprimed, so complements never collide.
    pub fn random_context(&mut self, _sys: SystemId) -> DualContext {
        let n_modal = self.rng.random_range(0..=self.cfg.max_modal);
        let n_intuit = self.rng.random_range(0..=self.cfg.max_intuit);
        let mut modal = Context::new();
        for name in MODAL_POOL.iter().take(n_modal) {
            let ty = self.random_type(self.cfg.max_type_depth);
            modal.push(VarName::plain(*name), ty);
        }
        let mut intuit = Context::new();
        for name in FREE_POOL.iter().take(n_intuit) {
            let ty = self.random_type(self.cfg.max_type_depth);
            intuit.push(VarName::plain(*name), ty);
        }
        DualContext::new(modal, intuit)
    }

    /// Variables of the context usable at this type in this system.
    fn usable_vars(&self, sys: SystemId, ctx: &DualContext, ty: &TypeExpr) -> Vec<VarName> {
        let mut out: Vec<VarName> = ctx
            .intuit
            .iter()
            .filter(|(_, t)| t == ty)
            .map(|(v, _)| v.clone())
            .collect();
        if sys.has_box_var() {
            out.extend(
                ctx.modal
                    .iter()
                    .filter(|(_, t)| t == ty)
                    .map(|(v, _)| v.clone()),
            );
        }
        out
    }

    /// Tries to produce a term of the given type; `None` when the
    /// budget runs out or the goal looks uninhabited from here. A failed
    /// attempt is cheap; retry at the call site with a fresh goal.
    pub fn typed_term(
        &mut self,
        sys: SystemId,
        ctx: &DualContext,
        ty: &TypeExpr,
        budget: usize,
    ) -> Option<Term> {
        self.typed_once(sys, ctx, ty, budget)
    }

    fn typed_once(
        &mut self,
        sys: SystemId,
        ctx: &DualContext,
        ty: &TypeExpr,
        budget: usize,
    ) -> Option<Term> {
        let vars = self.usable_vars(sys, ctx, ty);
        // Small budgets force variables or the cheapest intro.
        if budget <= 1 {
            if vars.is_empty() {
                return None;
            }
            return Some(Term::Var(self.pick(&vars).clone()));
        }
        let use_var = !vars.is_empty() && self.rng.random_range(0..100) < 25;
        if use_var {
            return Some(Term::Var(self.pick(&vars).clone()));
        }
        let try_elim = budget >= 5 && self.rng.random_range(0..100) < 30;
        if try_elim {
            if let Some(t) = self.elim(sys, ctx, ty, budget) {
                return Some(t);
            }
        }
        match ty {
            TypeExpr::Arrow(a, b) => {
                let x = self.fresh_binder();
                let inner =
                    DualContext::new(ctx.modal.clone(), ctx.intuit.extended(x.clone(), a.as_ref().clone()));
                let body = self.typed_term(sys, &inner, b, budget - 1)?;
                Some(Term::lam(x, a.as_ref().clone(), body))
            }
            TypeExpr::Prod(a, b) => {
                let left_budget = 1 + self.rng.random_range(0..budget.saturating_sub(2).max(1));
                let l = self.typed_term(sys, ctx, a, left_budget)?;
                let r = self.typed_term(sys, ctx, b, budget.saturating_sub(1 + l.size()).max(1))?;
                Some(Term::pair(l, r))
            }
            TypeExpr::Box(a) => self.box_intro(sys, ctx, a, budget),
            TypeExpr::Atom(_) => {
                if budget >= 4 {
                    if let Some(t) = self.elim(sys, ctx, ty, budget) {
                        return Some(t);
                    }
                }
                if vars.is_empty() {
                    None
                } else {
                    Some(Term::Var(self.pick(&vars).clone()))
                }
            }
        }
    }

    fn box_intro(
        &mut self,
        sys: SystemId,
        ctx: &DualContext,
        inner: &TypeExpr,
        budget: usize,
    ) -> Option<Term> {
        match sys {
            SystemId::K | SystemId::T => {
                let premise = DualContext::new(Context::new(), ctx.modal.clone());
                let body = self.typed_term(sys, &premise, inner, budget - 1)?;
                Some(Term::boxi(body))
            }
            SystemId::S4 => {
                let premise = DualContext::new(ctx.modal.clone(), Context::new());
                let body = self.typed_term(sys, &premise, inner, budget - 1)?;
                Some(Term::boxi(body))
            }
            SystemId::K4 => {
                let premise = DualContext::new(ctx.modal.clone(), complement_ctx(&ctx.modal));
                let p = self.typed_term(sys, &premise, inner, budget - 1)?;
                Some(Term::boxi(complement_term(&p)))
            }
            SystemId::GL => {
                let z = self.fresh_binder();
                let annot = TypeExpr::boxed(inner.clone());
                let mut premise_intuit = complement_ctx(&ctx.modal);
                premise_intuit.push(z.complement(), annot.clone());
                let premise = DualContext::new(ctx.modal.clone(), premise_intuit);
                let p = self.typed_term(sys, &premise, inner, budget.saturating_sub(2).max(1))?;
                Some(Term::fixbox(z, annot, complement_term(&p)))
            }
        }
    }

    fn elim(
        &mut self,
        sys: SystemId,
        ctx: &DualContext,
        ty: &TypeExpr,
        budget: usize,
    ) -> Option<Term> {
        match self.rng.random_range(0..3) {
            0 => {
                // application at a small argument type
                let arg_ty = self.small_type();
                let half = (budget / 2).max(2);
                let f = self.typed_term(
                    sys,
                    ctx,
                    &TypeExpr::arrow(arg_ty.clone(), ty.clone()),
                    half,
                )?;
                let a = self.typed_term(sys, ctx, &arg_ty, budget.saturating_sub(f.size() + 1).max(1))?;
                Some(Term::app(f, a))
            }
            1 => {
                // projection out of a product
                let other = self.small_type();
                let (prod, side) = if self.rng.random_bool(0.5) {
                    (TypeExpr::prod(ty.clone(), other), ProjIndex::Fst)
                } else {
                    (TypeExpr::prod(other, ty.clone()), ProjIndex::Snd)
                };
                let sub = self.typed_term(sys, ctx, &prod, budget - 1)?;
                Some(Term::proj(side, sub))
            }
            _ => {
                // letbox at a small inner type
                let inner_ty = self.small_type();
                let half = (budget / 2).max(2);
                let bound = self.typed_term(sys, ctx, &TypeExpr::boxed(inner_ty.clone()), half)?;
                let u = self.fresh_binder();
                let inner_ctx = DualContext::new(
                    ctx.modal.extended(u.clone(), inner_ty),
                    ctx.intuit.clone(),
                );
                let body =
                    self.typed_term(sys, &inner_ctx, ty, budget.saturating_sub(bound.size() + 1).max(1))?;
                Some(Term::letbox(u, bound, body))
            }
        }
    }

    /// A random well-typed judgment for the system.
    pub fn random_typed(&mut self, sys: SystemId) -> (DualContext, Term, TypeExpr) {
        for _ in 0..1000 {
            let ctx = self.random_context(sys);
            let ty = self.random_type(self.cfg.max_type_depth);
            let budget = self.rng.random_range(3..=self.cfg.max_term_size);
            if let Some(t) = self.typed_term(sys, &ctx, &ty, budget) {
                return (ctx, t, ty);
            }
        }
        // Unreachable in practice; a variable judgment always types.
        let atom = TypeExpr::atom(self.cfg.atoms[0].clone());
        let ctx = DualContext::new(
            Context::new(),
            Context::from_pairs(vec![(VarName::plain("x"), atom.clone())]),
        );
        (ctx, Term::var("x"), atom)
    }

    /// A raw, possibly ill-typed term with fresh unprimed binders (the
    /// hygiene the complementation laws assume).
    pub fn random_raw(&mut self, size: usize) -> Term {
        if size <= 1 {
            return Term::Var(VarName::plain(*self.pick(&FREE_POOL)));
        }
        match self.rng.random_range(0..8) {
            0 => Term::Var(VarName::plain(*self.pick(&FREE_POOL))),
            1 => {
                let x = self.fresh_binder();
                Term::lam(x, self.small_type(), self.random_raw(size - 1))
            }
            2 => {
                let l = self.random_raw(size / 2);
                Term::app(l, self.random_raw((size / 2).max(1)))
            }
            3 => {
                let l = self.random_raw(size / 2);
                Term::pair(l, self.random_raw((size / 2).max(1)))
            }
            4 => {
                let side = if self.rng.random_bool(0.5) { ProjIndex::Fst } else { ProjIndex::Snd };
                Term::proj(side, self.random_raw(size - 1))
            }
            5 => Term::boxi(self.random_raw(size - 1)),
            6 => {
                let u = self.fresh_binder();
                let bound = self.random_raw(size / 2);
                Term::letbox(u, bound, self.random_raw((size / 2).max(1)))
            }
            _ => {
                let z = self.fresh_binder();
                Term::fixbox(z, TypeExpr::boxed(self.small_type()), self.random_raw(size - 1))
            }
        }
    }

    /// A raw term with reusable (possibly primed, possibly shadowing)
    /// names everywhere; exercises the parser and alpha-equivalence.
    pub fn random_raw_any(&mut self, size: usize) -> Term {
        let any_var = |g: &mut Self| {
            let base = *g.pick(&FREE_POOL);
            if g.rng.random_bool(0.25) {
                VarName::primed(base)
            } else {
                VarName::plain(base)
            }
        };
        if size <= 1 {
            return Term::Var(any_var(self));
        }
        match self.rng.random_range(0..8) {
            0 => Term::Var(any_var(self)),
            1 => {
                let x = any_var(self);
                Term::lam(x, self.random_type(2), self.random_raw_any(size - 1))
            }
            2 => {
                let l = self.random_raw_any(size / 2);
                Term::app(l, self.random_raw_any((size / 2).max(1)))
            }
            3 => {
                let l = self.random_raw_any(size / 2);
                Term::pair(l, self.random_raw_any((size / 2).max(1)))
            }
            4 => {
                let side = if self.rng.random_bool(0.5) { ProjIndex::Fst } else { ProjIndex::Snd };
                Term::proj(side, self.random_raw_any(size - 1))
            }
            5 => Term::boxi(self.random_raw_any(size - 1)),
            6 => {
                let u = any_var(self);
                let bound = self.random_raw_any(size / 2);
                Term::letbox(u, bound, self.random_raw_any((size / 2).max(1)))
            }
            _ => {
                let z = any_var(self);
                Term::fixbox(z, TypeExpr::boxed(self.random_type(1)), self.random_raw_any(size - 1))
            }
        }
    }
}

/// Cheap deterministic generator for property-test harnesses that want
/// one term per seed.
pub fn raw_term_from_seed(seed: u64, size: usize) -> Term {
    let mut g = TermGen::with_seed(seed);
    g.random_raw(size)
}

/// As `raw_term_from_seed` but with shadowing and primed names allowed.
pub fn any_term_from_seed(seed: u64, size: usize) -> Term {
    let mut g = TermGen::with_seed(seed);
    g.random_raw_any(size)
}

/// Splits one seed into per-case seeds without correlation.
pub fn spread_seed(seed: u64, case: u64) -> u64 {
    let mut rng = SmallRng::seed_from_u64(seed ^ case.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.random()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::{infer, SystemId};

    #[test]
    fn typed_terms_check() {
        for sys in SystemId::ALL {
            let mut g = TermGen::with_seed(7);
            for _ in 0..50 {
                let (ctx, t, ty) = g.random_typed(sys);
                let d = infer(sys, &ctx, &t).unwrap_or_else(|e| {
                    panic!("{}: generated term fails to check: {} ({})", sys, t, e)
                });
                assert_eq!(d.ty, ty, "{}: type disagrees for {}", sys, t);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let (c1, t1, y1) = TermGen::with_seed(42).random_typed(SystemId::S4);
        let (c2, t2, y2) = TermGen::with_seed(42).random_typed(SystemId::S4);
        assert_eq!(c1, c2);
        assert_eq!(t1, t2);
        assert_eq!(y1, y2);
    }

    #[test]
    fn raw_sizes_bounded() {
        let mut g = TermGen::with_seed(3);
        for i in 0..100 {
            let t = g.random_raw(30);
            assert!(t.size() <= 40, "case {}: size {}", i, t.size());
        }
    }
}
