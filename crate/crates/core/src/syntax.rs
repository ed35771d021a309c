//! Core syntax: variables with polarity, types, terms, contexts, and the
//! basic operations on them (alpha-equivalence, capture-avoiding
//! substitution, complementation, free-variable functions).

use std::collections::BTreeSet;
use std::fmt;

/// A term variable. `primed` distinguishes a variable `x` from its
/// complement `x'`; complementation toggles the flag and is therefore an
/// involution by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName {
    pub base: String,
    pub primed: bool,
}

impl VarName {
    pub fn plain(base: impl Into<String>) -> Self {
        VarName { base: base.into(), primed: false }
    }

    pub fn primed(base: impl Into<String>) -> Self {
        VarName { base: base.into(), primed: true }
    }

    /// The involution `(-)⊥`: flips the polarity, keeps the base.
    pub fn complement(&self) -> VarName {
        VarName { base: self.base.clone(), primed: !self.primed }
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primed {
            write!(f, "{}'", self.base)
        } else {
            write!(f, "{}", self.base)
        }
    }
}

/// Flips the polarity of a variable; applying it twice is the identity.
pub fn complement_var(v: &VarName) -> VarName {
    v.complement()
}

/// Modal propositional types: atoms, products, arrows, box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Atom(String),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Box(Box<TypeExpr>),
}

impl TypeExpr {
    pub fn atom(name: impl Into<String>) -> TypeExpr {
        TypeExpr::Atom(name.into())
    }

    pub fn prod(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: TypeExpr) -> TypeExpr {
        TypeExpr::Box(Box::new(a))
    }

    /// True iff `self` occurs as a subexpression of `other` (reflexively).
    pub fn is_subexpr_of(&self, other: &TypeExpr) -> bool {
        if self == other {
            return true;
        }
        match other {
            TypeExpr::Atom(_) => false,
            TypeExpr::Prod(a, b) | TypeExpr::Arrow(a, b) => {
                self.is_subexpr_of(a) || self.is_subexpr_of(b)
            }
            TypeExpr::Box(a) => self.is_subexpr_of(a),
        }
    }

    /// All subexpressions of this type, including itself.
    pub fn subexpressions(&self) -> Vec<&TypeExpr> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            match t {
                TypeExpr::Atom(_) => {}
                TypeExpr::Prod(a, b) | TypeExpr::Arrow(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                TypeExpr::Box(a) => stack.push(a),
            }
        }
        out
    }

    /// Names of all atoms occurring in the type.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.subexpressions() {
            if let TypeExpr::Atom(name) = t {
                out.insert(name.clone());
            }
        }
        out
    }
}

/// Projection index for pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjIndex {
    Fst,
    Snd,
}

/// Dual-context lambda-terms. `LetBox` binds its variable in the body
/// only; `Lam` and `FixBox` bind in their body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(VarName),
    Lam(VarName, TypeExpr, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(ProjIndex, Box<Term>),
    BoxI(Box<Term>),
    LetBox(VarName, Box<Term>, Box<Term>),
    FixBox(VarName, TypeExpr, Box<Term>),
}

impl Term {
    pub fn var(v: impl Into<String>) -> Term {
        Term::Var(VarName::plain(v))
    }

    pub fn lam(x: VarName, ty: TypeExpr, body: Term) -> Term {
        Term::Lam(x, ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj(i: ProjIndex, t: Term) -> Term {
        Term::Proj(i, Box::new(t))
    }

    pub fn boxi(t: Term) -> Term {
        Term::BoxI(Box::new(t))
    }

    pub fn letbox(u: VarName, bound: Term, body: Term) -> Term {
        Term::LetBox(u, Box::new(bound), Box::new(body))
    }

    pub fn fixbox(z: VarName, ty: TypeExpr, body: Term) -> Term {
        Term::FixBox(z, ty, Box::new(body))
    }

    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, _, b) | Term::Proj(_, b) | Term::BoxI(b) | Term::FixBox(_, _, b) => {
                1 + b.size()
            }
            Term::App(a, b) | Term::Pair(a, b) | Term::LetBox(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Free variables of a term.
pub fn fv(t: &Term) -> BTreeSet<VarName> {
    match t {
        Term::Var(v) => std::iter::once(v.clone()).collect(),
        Term::Lam(x, _, b) => {
            let mut s = fv(b);
            s.remove(x);
            s
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            let mut s = fv(a);
            s.extend(fv(b));
            s
        }
        Term::Proj(_, b) => fv(b),
        Term::BoxI(b) => fv(b),
        Term::LetBox(u, m, n) => {
            let mut s = fv(m);
            let mut body = fv(n);
            body.remove(u);
            s.extend(body);
            s
        }
        Term::FixBox(z, _, b) => {
            let mut s = fv(b);
            s.remove(z);
            s
        }
    }
}

/// Unboxed free variables: free variables not under the scope of a
/// `box`/`fixbox` construct.
pub fn ufv(t: &Term) -> BTreeSet<VarName> {
    match t {
        Term::Var(v) => std::iter::once(v.clone()).collect(),
        Term::Lam(x, _, b) => {
            let mut s = ufv(b);
            s.remove(x);
            s
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            let mut s = ufv(a);
            s.extend(ufv(b));
            s
        }
        Term::Proj(_, b) => ufv(b),
        Term::BoxI(_) => BTreeSet::new(),
        Term::LetBox(u, m, n) => {
            let mut s = ufv(m);
            let mut body = ufv(n);
            body.remove(u);
            s.extend(body);
            s
        }
        Term::FixBox(_, _, _) => BTreeSet::new(),
    }
}

/// Boxed free variables: free variables that do occur under a
/// `box`/`fixbox` construct.
pub fn bfv(t: &Term) -> BTreeSet<VarName> {
    match t {
        Term::Var(_) => BTreeSet::new(),
        Term::Lam(x, _, b) => {
            let mut s = bfv(b);
            s.remove(x);
            s
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            let mut s = bfv(a);
            s.extend(bfv(b));
            s
        }
        Term::Proj(_, b) => bfv(b),
        Term::BoxI(b) => fv(b),
        Term::LetBox(u, m, n) => {
            let mut s = bfv(m);
            let mut body = bfv(n);
            body.remove(u);
            s.extend(body);
            s
        }
        Term::FixBox(z, _, b) => {
            let mut s = fv(b);
            s.remove(z);
            s
        }
    }
}

/// Picks a variable not in `avoid` (and whose complement is not in `avoid`
/// either), based on the given hint. Keeps the hint's polarity.
pub fn fresh_var(hint: &VarName, avoid: &BTreeSet<VarName>) -> VarName {
    let ok = |v: &VarName| !avoid.contains(v) && !avoid.contains(&v.complement());
    if ok(hint) {
        return hint.clone();
    }
    for i in 1.. {
        let candidate = VarName { base: format!("{}{}", hint.base, i), primed: hint.primed };
        if ok(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

/// Alpha-equivalence of terms. Binders are matched positionally; free
/// variables (including polarity) must coincide exactly.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go(
        a: &Term,
        b: &Term,
        depth: u32,
        la: &mut Vec<(VarName, u32)>,
        lb: &mut Vec<(VarName, u32)>,
    ) -> bool {
        let lookup = |env: &[(VarName, u32)], v: &VarName| {
            env.iter().rev().find(|(w, _)| w == v).map(|(_, d)| *d)
        };
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => match (lookup(la, x), lookup(lb, y)) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            },
            (Term::Lam(x, tx, ba), Term::Lam(y, ty, bb)) => {
                if tx != ty {
                    return false;
                }
                la.push((x.clone(), depth));
                lb.push((y.clone(), depth));
                let r = go(ba, bb, depth + 1, la, lb);
                la.pop();
                lb.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                go(f1, f2, depth, la, lb) && go(a1, a2, depth, la, lb)
            }
            (Term::Pair(f1, a1), Term::Pair(f2, a2)) => {
                go(f1, f2, depth, la, lb) && go(a1, a2, depth, la, lb)
            }
            (Term::Proj(i, m), Term::Proj(j, n)) => i == j && go(m, n, depth, la, lb),
            (Term::BoxI(m), Term::BoxI(n)) => go(m, n, depth, la, lb),
            (Term::LetBox(u, m1, n1), Term::LetBox(v, m2, n2)) => {
                if !go(m1, m2, depth, la, lb) {
                    return false;
                }
                la.push((u.clone(), depth));
                lb.push((v.clone(), depth));
                let r = go(n1, n2, depth + 1, la, lb);
                la.pop();
                lb.pop();
                r
            }
            (Term::FixBox(x, tx, ba), Term::FixBox(y, ty, bb)) => {
                if tx != ty {
                    return false;
                }
                la.push((x.clone(), depth));
                lb.push((y.clone(), depth));
                let r = go(ba, bb, depth + 1, la, lb);
                la.pop();
                lb.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, 0, &mut Vec::new(), &mut Vec::new())
}

/// Capture-avoiding substitution `target[replacement/var]`. Bound
/// variables are renamed when they would capture a free variable of the
/// replacement.
pub fn subst(target: &Term, var: &VarName, replacement: &Term) -> Term {
    let fvr = fv(replacement);
    go(target, var, replacement, &fvr)
}

fn go(t: &Term, var: &VarName, rep: &Term, fvr: &BTreeSet<VarName>) -> Term {
    // Renames binder b away from fvr before substituting under it.
    let under_binder = |b: &VarName, body: &Term| -> (VarName, Term) {
        if fvr.contains(b) {
            let mut avoid = fvr.clone();
            avoid.extend(fv(body));
            avoid.insert(var.clone());
            let b2 = fresh_var(b, &avoid);
            let renamed = subst(body, b, &Term::Var(b2.clone()));
            (b2, go(&renamed, var, rep, fvr))
        } else {
            (b.clone(), go(body, var, rep, fvr))
        }
    };
    match t {
        Term::Var(v) => {
            if v == var {
                rep.clone()
            } else {
                t.clone()
            }
        }
        Term::Lam(x, ty, body) => {
            if x == var {
                t.clone()
            } else {
                let (x2, body2) = under_binder(x, body);
                Term::lam(x2, ty.clone(), body2)
            }
        }
        Term::App(f, a) => Term::app(go(f, var, rep, fvr), go(a, var, rep, fvr)),
        Term::Pair(a, b) => Term::pair(go(a, var, rep, fvr), go(b, var, rep, fvr)),
        Term::Proj(i, m) => Term::proj(*i, go(m, var, rep, fvr)),
        Term::BoxI(m) => Term::boxi(go(m, var, rep, fvr)),
        Term::LetBox(u, m, n) => {
            let m2 = go(m, var, rep, fvr);
            if u == var {
                Term::letbox(u.clone(), m2, n.as_ref().clone())
            } else {
                let (u2, n2) = under_binder(u, n);
                Term::letbox(u2, m2, n2)
            }
        }
        Term::FixBox(z, ty, body) => {
            if z == var {
                t.clone()
            } else {
                let (z2, body2) = under_binder(z, body);
                Term::fixbox(z2, ty.clone(), body2)
            }
        }
    }
}

/// Extends the involution `(-)⊥` to terms: variables (free and
/// lambda-bound) are complemented, but nothing changes inside a
/// `box`/`fixbox` construct and `letbox` binders stay fixed.
pub fn complement_term(t: &Term) -> Term {
    fn comp(t: &Term, letbound: &BTreeSet<VarName>) -> Term {
        match t {
            Term::Var(v) => {
                if letbound.contains(v) {
                    t.clone()
                } else {
                    Term::Var(v.complement())
                }
            }
            Term::Lam(x, ty, body) => {
                let mut inner = letbound.clone();
                inner.remove(x);
                Term::lam(x.complement(), ty.clone(), comp(body, &inner))
            }
            Term::App(f, a) => Term::app(comp(f, letbound), comp(a, letbound)),
            Term::Pair(a, b) => Term::pair(comp(a, letbound), comp(b, letbound)),
            Term::Proj(i, m) => Term::proj(*i, comp(m, letbound)),
            Term::BoxI(_) | Term::FixBox(_, _, _) => t.clone(),
            Term::LetBox(u, m, n) => {
                let mut inner = letbound.clone();
                inner.insert(u.clone());
                Term::letbox(u.clone(), comp(m, letbound), comp(n, &inner))
            }
        }
    }
    comp(t, &BTreeSet::new())
}

/// An ordered list of typed variable bindings; no name occurs twice.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context(pub Vec<(VarName, TypeExpr)>);

impl Context {
    pub fn new() -> Context {
        Context(Vec::new())
    }

    pub fn from_pairs(pairs: Vec<(VarName, TypeExpr)>) -> Context {
        Context(pairs)
    }

    pub fn push(&mut self, v: VarName, ty: TypeExpr) {
        self.0.push((v, ty));
    }

    pub fn extended(&self, v: VarName, ty: TypeExpr) -> Context {
        let mut c = self.clone();
        c.push(v, ty);
        c
    }

    pub fn lookup(&self, v: &VarName) -> Option<&TypeExpr> {
        self.0.iter().find(|(w, _)| w == v).map(|(_, t)| t)
    }

    pub fn position(&self, v: &VarName) -> Option<usize> {
        self.0.iter().position(|(w, _)| w == v)
    }

    pub fn contains(&self, v: &VarName) -> bool {
        self.lookup(v).is_some()
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        self.0.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(VarName, TypeExpr)> {
        self.0.iter()
    }

    /// True iff no variable name occurs twice.
    pub fn no_duplicates(&self) -> bool {
        self.vars().len() == self.0.len()
    }
}

/// Complements every binder name in a context, keeping types and order.
pub fn complement_ctx(c: &Context) -> Context {
    Context(c.0.iter().map(|(v, t)| (v.complement(), t.clone())).collect())
}

/// A dual context `⟨Δ; Γ⟩`: a modal zone and an intuitionistic zone.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualContext {
    pub modal: Context,
    pub intuit: Context,
}

impl DualContext {
    pub fn new(modal: Context, intuit: Context) -> DualContext {
        DualContext { modal, intuit }
    }

    pub fn empty() -> DualContext {
        DualContext::default()
    }

    /// All variables bound in either zone.
    pub fn all_vars(&self) -> BTreeSet<VarName> {
        let mut s = self.modal.vars();
        s.extend(self.intuit.vars());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> TypeExpr {
        TypeExpr::atom("p")
    }

    fn q() -> TypeExpr {
        TypeExpr::atom("q")
    }

    fn v(s: &str) -> VarName {
        VarName::plain(s)
    }

    #[test]
    fn alpha_eq_renames_bound() {
        let a = Term::lam(v("x"), p(), Term::var("x"));
        let b = Term::lam(v("y"), p(), Term::var("y"));
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn alpha_eq_annotations_differ() {
        let a = Term::lam(v("x"), p(), Term::var("x"));
        let b = Term::lam(v("x"), q(), Term::var("x"));
        assert!(!alpha_eq(&a, &b));
    }

    #[test]
    fn alpha_eq_letbox_binder() {
        // letbox u = x in box u vs letbox w = x in box w
        let a = Term::letbox(v("u"), Term::var("x"), Term::boxi(Term::Var(v("u"))));
        let b = Term::letbox(v("w"), Term::var("x"), Term::boxi(Term::Var(v("w"))));
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn alpha_eq_free_vars_must_match() {
        assert!(!alpha_eq(&Term::var("x"), &Term::var("y")));
        // polarity is part of the name
        assert!(!alpha_eq(&Term::var("x"), &Term::Var(VarName::primed("x"))));
    }

    #[test]
    fn subst_variable() {
        let t = subst(&Term::var("x"), &v("x"), &Term::var("y"));
        assert_eq!(t, Term::var("y"));
    }

    #[test]
    fn subst_capture_avoids() {
        // (λy:p. x)[y/x] must rename the binder
        let t = Term::lam(v("y"), p(), Term::var("x"));
        let r = subst(&t, &v("x"), &Term::var("y"));
        let expected = Term::lam(v("y1"), p(), Term::var("y"));
        assert!(alpha_eq(&r, &expected));
    }

    #[test]
    fn subst_letbox_bound() {
        // (letbox u = x in u)[box z / x] → letbox u = box z in u
        let t = Term::letbox(v("u"), Term::var("x"), Term::Var(v("u")));
        let r = subst(&t, &v("x"), &Term::boxi(Term::var("z")));
        let expected = Term::letbox(v("u"), Term::boxi(Term::var("z")), Term::Var(v("u")));
        assert_eq!(r, expected);
    }

    #[test]
    fn subst_shadowed_binder_blocks() {
        // (λx:p. x)[y/x] leaves the bound occurrence alone
        let t = Term::lam(v("x"), p(), Term::var("x"));
        let r = subst(&t, &v("x"), &Term::var("y"));
        assert_eq!(r, t);
    }

    #[test]
    fn complement_var_involutive() {
        let x = v("x");
        assert_eq!(complement_var(&x), VarName::primed("x"));
        assert_eq!(complement_var(&complement_var(&x)), x);
    }

    #[test]
    fn complement_lambda() {
        // (λx:p. u x)⊥ = λx':p. u' x'
        let t = Term::lam(v("x"), p(), Term::app(Term::var("u"), Term::var("x")));
        let r = complement_term(&t);
        let expected = Term::Lam(
            VarName::primed("x"),
            p(),
            Box::new(Term::App(
                Box::new(Term::Var(VarName::primed("u"))),
                Box::new(Term::Var(VarName::primed("x"))),
            )),
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn complement_stops_at_box() {
        let t = Term::boxi(Term::app(Term::var("u"), Term::var("x")));
        assert_eq!(complement_term(&t), t);
    }

    #[test]
    fn complement_letbox_keeps_binder() {
        // (letbox u = v in u)⊥ = letbox u = v' in u
        let t = Term::letbox(v("u"), Term::var("v"), Term::Var(v("u")));
        let r = complement_term(&t);
        let expected = Term::LetBox(
            v("u"),
            Box::new(Term::Var(VarName::primed("v"))),
            Box::new(Term::Var(v("u"))),
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn complement_ctx_examples() {
        let c = Context::from_pairs(vec![(v("x"), p()), (v("y"), q())]);
        let cc = complement_ctx(&c);
        assert_eq!(
            cc,
            Context::from_pairs(vec![(VarName::primed("x"), p()), (VarName::primed("y"), q())])
        );
        assert_eq!(complement_ctx(&cc), c);
        assert_eq!(complement_ctx(&Context::new()), Context::new());
    }

    #[test]
    fn fv_clauses() {
        // fv(λx:p. x y) = {y}
        let t = Term::lam(v("x"), p(), Term::app(Term::var("x"), Term::var("y")));
        assert_eq!(fv(&t), [v("y")].into_iter().collect());

        // fv(letbox u = x in ⟨u, y⟩) = {x, y}
        let t = Term::letbox(
            v("u"),
            Term::var("x"),
            Term::pair(Term::Var(v("u")), Term::var("y")),
        );
        assert_eq!(fv(&t), [v("x"), v("y")].into_iter().collect());

        // fv(fix z:□p. g z) = {g}
        let t = Term::fixbox(
            v("z"),
            TypeExpr::boxed(p()),
            Term::app(Term::var("g"), Term::var("z")),
        );
        assert_eq!(fv(&t), [v("g")].into_iter().collect());
    }

    #[test]
    fn ufv_bfv_clauses() {
        let t = Term::boxi(Term::var("x"));
        assert!(ufv(&t).is_empty());
        assert_eq!(bfv(&t), [v("x")].into_iter().collect());

        let t = Term::pair(Term::var("x"), Term::boxi(Term::var("y")));
        assert_eq!(ufv(&t), [v("x")].into_iter().collect());
        assert_eq!(bfv(&t), [v("y")].into_iter().collect());
    }

    #[test]
    fn fresh_var_avoids_complement() {
        let avoid: BTreeSet<VarName> = [v("x"), VarName::primed("x1")].into_iter().collect();
        let f = fresh_var(&v("x"), &avoid);
        assert_eq!(f, v("x2"));
    }
}
