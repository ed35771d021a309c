//! Finite set-theoretic semantics: a small catalog of strong monoidal
//! endofunctors on finite sets, brute-force verification of the
//! categorical laws each system requires, and the denotational
//! interpretation of typing derivations with a soundness check.
//!
//! Elements of a finite object are flat indices `0..size`. Products
//! encode big-endian (`(a, b) = a * |B| + b`, left component most
//! significant), and exponentials enumerate total function tables in
//! lexicographic order of the domain enumeration.

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{DualContext, Term, TypeExpr};
use crate::typecheck::{infer, RuleName, SystemId, TypingDerivation};

/// Keeps exhaustive table construction bounded.
pub const MAX_TABLE_SIZE: usize = 4_000_000;

/// A finite set with a canonical enumeration of its elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetObj {
    Atom(String, usize),
    Unit,
    Prod(Box<SetObj>, Box<SetObj>),
    Fun(Box<SetObj>, Box<SetObj>),
}

impl SetObj {
    pub fn atom(name: impl Into<String>, size: usize) -> SetObj {
        SetObj::Atom(name.into(), size)
    }

    pub fn prod(a: SetObj, b: SetObj) -> SetObj {
        SetObj::Prod(Box::new(a), Box::new(b))
    }

    pub fn fun(a: SetObj, b: SetObj) -> SetObj {
        SetObj::Fun(Box::new(a), Box::new(b))
    }

    /// Cardinality, bounded by `MAX_TABLE_SIZE`.
    pub fn size(&self) -> Result<usize, SemanticsError> {
        let n = match self {
            SetObj::Atom(_, n) => *n,
            SetObj::Unit => 1,
            SetObj::Prod(a, b) => {
                let (x, y) = (a.size()?, b.size()?);
                x.checked_mul(y).ok_or_else(|| too_big(self))?
            }
            SetObj::Fun(a, b) => {
                let (x, y) = (a.size()?, b.size()?);
                checked_pow(y, x).ok_or_else(|| too_big(self))?
            }
        };
        if n > MAX_TABLE_SIZE {
            return Err(too_big(self));
        }
        Ok(n)
    }

    /// Human-readable rendering of element `idx`.
    pub fn label(&self, idx: usize) -> String {
        match self {
            SetObj::Atom(_, _) => idx.to_string(),
            SetObj::Unit => "*".to_string(),
            SetObj::Prod(a, b) => {
                let nb = b.size().unwrap_or(1).max(1);
                format!("({}, {})", a.label(idx / nb), b.label(idx % nb))
            }
            SetObj::Fun(a, b) => {
                let na = a.size().unwrap_or(0);
                let nb = b.size().unwrap_or(1).max(1);
                let mut parts = Vec::with_capacity(na);
                let mut rest = idx;
                let mut digits = vec![0usize; na];
                for slot in digits.iter_mut().rev() {
                    *slot = rest % nb;
                    rest /= nb;
                }
                for d in digits {
                    parts.push(b.label(d));
                }
                format!("[{}]", parts.join(" "))
            }
        }
    }
}

fn too_big(obj: &SetObj) -> SemanticsError {
    SemanticsError::SizeLimit(format!("{:?}", obj))
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > MAX_TABLE_SIZE {
            return None;
        }
    }
    Some(acc)
}

impl fmt::Display for SetObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetObj::Atom(name, n) => write!(f, "{}[{}]", name, n),
            SetObj::Unit => write!(f, "1"),
            SetObj::Prod(a, b) => write!(f, "({} x {})", a, b),
            SetObj::Fun(a, b) => write!(f, "({} -> {})", a, b),
        }
    }
}

/// A total function between finite objects, as a full table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Denotation {
    pub dom: SetObj,
    pub cod: SetObj,
    pub table: Vec<usize>,
}

impl Denotation {
    pub fn identity(obj: &SetObj) -> Result<Denotation, SemanticsError> {
        let n = obj.size()?;
        Ok(Denotation { dom: obj.clone(), cod: obj.clone(), table: (0..n).collect() })
    }

    pub fn from_fn(
        dom: SetObj,
        cod: SetObj,
        f: impl Fn(usize) -> usize,
    ) -> Result<Denotation, SemanticsError> {
        let n = dom.size()?;
        let _ = cod.size()?;
        Ok(Denotation { dom, cod, table: (0..n).map(f).collect() })
    }

    /// Diagrammatic composition: `self` first, then `g`.
    pub fn then(&self, g: &Denotation) -> Denotation {
        Denotation {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            table: self.table.iter().map(|&v| g.table[v]).collect(),
        }
    }

    pub fn is_bijection(&self) -> bool {
        let n = self.table.len();
        match self.cod.size() {
            Ok(m) if m == n => {
                let mut seen = vec![false; n];
                for &v in &self.table {
                    if v >= n || seen[v] {
                        return false;
                    }
                    seen[v] = true;
                }
                true
            }
            _ => false,
        }
    }

    /// `self × g` on flat pair encodings.
    pub fn prod_map(&self, g: &Denotation) -> Result<Denotation, SemanticsError> {
        let gd = g.dom.size()?;
        let gc = g.cod.size()?;
        let dom = SetObj::prod(self.dom.clone(), g.dom.clone());
        let cod = SetObj::prod(self.cod.clone(), g.cod.clone());
        let _ = dom.size()?;
        let mut table = Vec::with_capacity(self.table.len() * gd);
        for &fa in &self.table {
            for &gb in &g.table {
                table.push(fa * gc + gb);
            }
        }
        Ok(Denotation { dom, cod, table })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("atom `{0}` has no interpretation in the model")]
    UnknownAtom(String),
    #[error("no finite semantics is defined for GL")]
    GLUnsupported,
    #[error("the {functor} functor lacks the {needs} component required here")]
    ModelMismatch { needs: &'static str, functor: String },
    #[error("arity mismatch: expected domain {expected}, found {found}")]
    ArityMismatch { expected: String, found: String },
    #[error("object too large to enumerate: {0}")]
    SizeLimit(String),
    #[error("term does not check: {0}")]
    IllTyped(String),
}

/// The functor catalog: object map, arrow map, monoidal structure, and
/// the optional comultiplication/counit components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctorSpec {
    /// F X = X with identity structure maps; models K, K4, T, S4.
    Identity,
    /// F X = 1; models K and K4 but has no natural counit.
    ConstUnit,
    /// F X = X × X with δ(a,b) = ((a,b),(a,b)) and ε = first projection
    /// (a candidate that fails the comonad counit law); models K and K4.
    Diagonal,
}

impl FunctorSpec {
    pub const ALL: [FunctorSpec; 3] = [FunctorSpec::Identity, FunctorSpec::ConstUnit, FunctorSpec::Diagonal];

    pub fn name(self) -> &'static str {
        match self {
            FunctorSpec::Identity => "identity",
            FunctorSpec::ConstUnit => "unit",
            FunctorSpec::Diagonal => "diag",
        }
    }

    pub fn from_name(s: &str) -> Option<FunctorSpec> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "id" => Some(FunctorSpec::Identity),
            "unit" | "constunit" => Some(FunctorSpec::ConstUnit),
            "diag" | "diagonal" => Some(FunctorSpec::Diagonal),
            _ => None,
        }
    }

    /// Systems whose laws this functor claims to satisfy.
    pub fn claims(self) -> &'static [SystemId] {
        match self {
            FunctorSpec::Identity => &[SystemId::K, SystemId::K4, SystemId::T, SystemId::S4],
            FunctorSpec::ConstUnit => &[SystemId::K, SystemId::K4],
            FunctorSpec::Diagonal => &[SystemId::K, SystemId::K4],
        }
    }

    pub fn apply_obj(self, obj: &SetObj) -> SetObj {
        match self {
            FunctorSpec::Identity => obj.clone(),
            FunctorSpec::ConstUnit => SetObj::Unit,
            FunctorSpec::Diagonal => SetObj::prod(obj.clone(), obj.clone()),
        }
    }

    pub fn apply_arrow(self, f: &Denotation) -> Result<Denotation, SemanticsError> {
        match self {
            FunctorSpec::Identity => Ok(f.clone()),
            FunctorSpec::ConstUnit => Ok(Denotation {
                dom: SetObj::Unit,
                cod: SetObj::Unit,
                table: vec![0],
            }),
            FunctorSpec::Diagonal => f.prod_map(f),
        }
    }

    /// `m₀ : 1 → F1`.
    pub fn m0(self) -> Denotation {
        Denotation { dom: SetObj::Unit, cod: self.apply_obj(&SetObj::Unit), table: vec![0] }
    }

    /// `m_{A,B} : FA × FB → F(A × B)`.
    pub fn m_pair(self, a: &SetObj, b: &SetObj) -> Result<Denotation, SemanticsError> {
        let fa = self.apply_obj(a);
        let fb = self.apply_obj(b);
        let dom = SetObj::prod(fa, fb);
        let cod = self.apply_obj(&SetObj::prod(a.clone(), b.clone()));
        match self {
            FunctorSpec::Identity => {
                let n = dom.size()?;
                Ok(Denotation { dom, cod, table: (0..n).collect() })
            }
            FunctorSpec::ConstUnit => Ok(Denotation { dom, cod, table: vec![0] }),
            FunctorSpec::Diagonal => {
                let (na, nb) = (a.size()?, b.size()?);
                let _ = dom.size()?;
                let mut table = Vec::with_capacity(na * na * nb * nb);
                for a1 in 0..na {
                    for a2 in 0..na {
                        for b1 in 0..nb {
                            for b2 in 0..nb {
                                // ((a1,a2),(b1,b2)) -> ((a1,b1),(a2,b2))
                                table.push((a1 * nb + b1) * (na * nb) + (a2 * nb + b2));
                            }
                        }
                    }
                }
                Ok(Denotation { dom, cod, table })
            }
        }
    }

    /// `δ_A : FA → FFA`, when the functor provides one.
    pub fn delta(self, a: &SetObj) -> Result<Option<Denotation>, SemanticsError> {
        match self {
            FunctorSpec::Identity => Ok(Some(Denotation::identity(a)?)),
            FunctorSpec::ConstUnit => Ok(Some(Denotation {
                dom: SetObj::Unit,
                cod: SetObj::Unit,
                table: vec![0],
            })),
            FunctorSpec::Diagonal => {
                let fa = self.apply_obj(a);
                let n = fa.size()?;
                let ffa = self.apply_obj(&fa);
                let _ = ffa.size()?;
                Ok(Some(Denotation {
                    dom: fa,
                    cod: ffa,
                    table: (0..n).map(|i| i * n + i).collect(),
                }))
            }
        }
    }

    /// `ε_A : FA → A`, when the functor provides one at this object.
    pub fn epsilon(self, a: &SetObj) -> Result<Option<Denotation>, SemanticsError> {
        match self {
            FunctorSpec::Identity => Ok(Some(Denotation::identity(a)?)),
            FunctorSpec::ConstUnit => {
                // only a canonical pick where the object is inhabited
                if a.size()? == 0 {
                    return Ok(None);
                }
                Ok(Some(Denotation { dom: SetObj::Unit, cod: a.clone(), table: vec![0] }))
            }
            FunctorSpec::Diagonal => {
                let n = a.size()?;
                let fa = self.apply_obj(a);
                Ok(Some(Denotation {
                    dom: fa,
                    cod: a.clone(),
                    table: (0..n).flat_map(|x| std::iter::repeat_n(x, n)).collect(),
                }))
            }
        }
    }
}

/// A finite model: an interpretation of atoms plus a functor from the
/// catalog.
#[derive(Debug, Clone)]
pub struct FiniteModel {
    pub atoms: BTreeMap<String, usize>,
    pub functor: FunctorSpec,
}

impl FiniteModel {
    pub fn new(functor: FunctorSpec) -> FiniteModel {
        FiniteModel { atoms: BTreeMap::new(), functor }
    }

    pub fn with_atom(mut self, name: impl Into<String>, size: usize) -> FiniteModel {
        self.atoms.insert(name.into(), size);
        self
    }

    /// Interprets every named atom at `size` unless already set.
    pub fn fill_atoms(&mut self, names: impl IntoIterator<Item = String>, size: usize) {
        for n in names {
            self.atoms.entry(n).or_insert(size);
        }
    }
}

/// `⟦A⟧`: structural interpretation of a type.
pub fn interp_type(model: &FiniteModel, t: &TypeExpr) -> Result<SetObj, SemanticsError> {
    let obj = match t {
        TypeExpr::Atom(name) => {
            let size = model
                .atoms
                .get(name)
                .copied()
                .ok_or_else(|| SemanticsError::UnknownAtom(name.clone()))?;
            SetObj::atom(name.clone(), size)
        }
        TypeExpr::Prod(a, b) => SetObj::prod(interp_type(model, a)?, interp_type(model, b)?),
        TypeExpr::Arrow(a, b) => SetObj::fun(interp_type(model, a)?, interp_type(model, b)?),
        TypeExpr::Box(a) => model.functor.apply_obj(&interp_type(model, a)?),
    };
    let _ = obj.size()?;
    Ok(obj)
}

/// The component objects of `⟦⟨Δ; Γ⟩⟧` in order: `F(B_i)` then `A_j`.
fn ctx_objs(model: &FiniteModel, ctx: &DualContext) -> Result<Vec<SetObj>, SemanticsError> {
    let mut out = Vec::new();
    for (_, t) in ctx.modal.iter() {
        out.push(model.functor.apply_obj(&interp_type(model, t)?));
    }
    for (_, t) in ctx.intuit.iter() {
        out.push(interp_type(model, t)?);
    }
    Ok(out)
}

/// Left-associated product of a list of objects; empty product is `1`.
pub fn fold_objs(objs: &[SetObj]) -> SetObj {
    match objs.split_first() {
        None => SetObj::Unit,
        Some((first, rest)) => rest
            .iter()
            .fold(first.clone(), |acc, o| SetObj::prod(acc, o.clone())),
    }
}

/// `⟦⟨Δ; Γ⟩⟧` as a single left-associated product object.
pub fn interp_ctx(model: &FiniteModel, ctx: &DualContext) -> Result<SetObj, SemanticsError> {
    let obj = fold_objs(&ctx_objs(model, ctx)?);
    let _ = obj.size()?;
    Ok(obj)
}

/// Mixed-radix codec for flat tuple encodings (first component most
/// significant).
struct Tuple {
    sizes: Vec<usize>,
    total: usize,
}

impl Tuple {
    fn new(objs: &[SetObj]) -> Result<Tuple, SemanticsError> {
        let mut sizes = Vec::with_capacity(objs.len());
        let mut total: usize = 1;
        for o in objs {
            let n = o.size()?;
            sizes.push(n);
            total = total
                .checked_mul(n)
                .filter(|&t| t <= MAX_TABLE_SIZE)
                .ok_or_else(|| too_big(o))?;
        }
        Ok(Tuple { sizes, total })
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &n) in out.iter_mut().zip(&self.sizes).rev() {
            if n == 0 {
                return out;
            }
            *slot = idx % n;
            idx /= n;
        }
        out
    }

    fn encode(&self, comps: &[usize]) -> usize {
        let mut idx = 0;
        for (&c, &n) in comps.iter().zip(&self.sizes) {
            idx = idx * n + c;
        }
        idx
    }
}

/// `m⁽ⁿ⁾ : Π F(Aᵢ) → F(Π Aᵢ)`, built inductively from `m₀` and `m`.
pub fn m_n(functor: FunctorSpec, objs: &[SetObj]) -> Result<Denotation, SemanticsError> {
    match objs.len() {
        0 => Ok(functor.m0()),
        1 => Denotation::identity(&functor.apply_obj(&objs[0])),
        n => {
            let prefix = &objs[..n - 1];
            let last = &objs[n - 1];
            let m_prev = m_n(functor, prefix)?;
            let id_last = Denotation::identity(&functor.apply_obj(last))?;
            let step = m_prev.prod_map(&id_last)?;
            let pairing = functor.m_pair(&fold_objs(prefix), last)?;
            Ok(step.then(&pairing))
        }
    }
}

fn expect_dom(f: &Denotation, expected: &SetObj) -> Result<(), SemanticsError> {
    if &f.dom != expected {
        return Err(SemanticsError::ArityMismatch {
            expected: expected.to_string(),
            found: f.dom.to_string(),
        });
    }
    Ok(())
}

/// `f• = Ff ∘ m⁽ⁿ⁾` for `f : Π Aᵢ → B`; interprets the K-style box.
pub fn box_bullet(
    functor: FunctorSpec,
    objs: &[SetObj],
    f: &Denotation,
) -> Result<Denotation, SemanticsError> {
    expect_dom(f, &fold_objs(objs))?;
    let m = m_n(functor, objs)?;
    Ok(m.then(&functor.apply_arrow(f)?))
}

/// `f* = Ff ∘ m⁽ⁿ⁾ ∘ Π δ` for `f : Π F(Aᵢ) → B`; the co-Kleisli
/// extension interpreting the S4 box.
pub fn box_star(
    functor: FunctorSpec,
    objs: &[SetObj],
    f: &Denotation,
) -> Result<Denotation, SemanticsError> {
    let f_objs: Vec<SetObj> = objs.iter().map(|o| functor.apply_obj(o)).collect();
    expect_dom(f, &fold_objs(&f_objs))?;
    let mut deltas = Vec::with_capacity(objs.len());
    for o in objs {
        deltas.push(functor.delta(o)?.ok_or(SemanticsError::ModelMismatch {
            needs: "delta",
            functor: functor.name().to_string(),
        })?);
    }
    let dom = fold_objs(&f_objs);
    let codec_in = Tuple::new(&f_objs)?;
    let ff_objs: Vec<SetObj> = f_objs.iter().map(|o| functor.apply_obj(o)).collect();
    let codec_mid = Tuple::new(&ff_objs)?;
    let m = m_n(functor, &f_objs)?;
    let ff = functor.apply_arrow(f)?;
    let table = (0..codec_in.total)
        .map(|i| {
            let comps = codec_in.decode(i);
            let mapped: Vec<usize> = comps
                .iter()
                .zip(&deltas)
                .map(|(&c, d)| d.table[c])
                .collect();
            ff.table[m.table[codec_mid.encode(&mapped)]]
        })
        .collect();
    Ok(Denotation { dom, cod: ff.cod.clone(), table })
}

/// `f# = Ff ∘ m⁽²ⁿ⁾ ∘ ⟨δπᵢ…, πᵢ…⟩` for `f : Π F(Aᵢ) ×ₗ Π Aᵢ → B`;
/// interprets the K4 box.
pub fn box_sharp(
    functor: FunctorSpec,
    objs: &[SetObj],
    f: &Denotation,
) -> Result<Denotation, SemanticsError> {
    let f_objs: Vec<SetObj> = objs.iter().map(|o| functor.apply_obj(o)).collect();
    let mut full: Vec<SetObj> = f_objs.clone();
    full.extend(objs.iter().cloned());
    expect_dom(f, &fold_objs(&full))?;
    let mut deltas = Vec::with_capacity(objs.len());
    for o in objs {
        deltas.push(functor.delta(o)?.ok_or(SemanticsError::ModelMismatch {
            needs: "delta",
            functor: functor.name().to_string(),
        })?);
    }
    let dom = fold_objs(&f_objs);
    let codec_in = Tuple::new(&f_objs)?;
    // the 2n-ary m is taken at the objects (FA₁..FAₙ, A₁..Aₙ)
    let mid_objs: Vec<SetObj> = full.iter().map(|o| functor.apply_obj(o)).collect();
    let codec_mid = Tuple::new(&mid_objs)?;
    let m = m_n(functor, &full)?;
    let ff = functor.apply_arrow(f)?;
    let table = (0..codec_in.total)
        .map(|i| {
            let comps = codec_in.decode(i);
            let mut mapped = Vec::with_capacity(2 * comps.len());
            for (&c, d) in comps.iter().zip(&deltas) {
                mapped.push(d.table[c]);
            }
            mapped.extend(comps.iter().copied());
            ff.table[m.table[codec_mid.encode(&mapped)]]
        })
        .collect();
    Ok(Denotation { dom, cod: ff.cod.clone(), table })
}

/// Digit powers for the function-table encoding into `Fun(a, b)`.
fn fun_powers(dom_size: usize, cod_size: usize) -> Vec<usize> {
    let mut pows = vec![1usize; dom_size];
    for i in (0..dom_size.saturating_sub(1)).rev() {
        pows[i] = pows[i + 1] * cod_size;
    }
    pows
}

/// `⟦⟨Δ; Γ⟩ ⊢ M : A⟧` as a full table over the context object. The
/// derivation must check in the system and the model must have passed
/// `verify_model` for it.
pub fn interp_term(
    model: &FiniteModel,
    sys: SystemId,
    d: &TypingDerivation,
) -> Result<Denotation, SemanticsError> {
    if sys == SystemId::GL {
        return Err(SemanticsError::GLUnsupported);
    }
    let objs = ctx_objs(model, &d.ctx)?;
    let codec = Tuple::new(&objs)?;
    let dom = fold_objs(&objs);
    let cod = interp_type(model, &d.ty)?;
    let n_modal = d.ctx.modal.len();
    match d.rule {
        RuleName::Var => {
            let v = match &d.term {
                Term::Var(v) => v,
                _ => unreachable!("checked derivation"),
            };
            let j = n_modal + d.ctx.intuit.position(v).expect("bound");
            Ok(Denotation {
                dom,
                cod,
                table: (0..codec.total).map(|i| codec.decode(i)[j]).collect(),
            })
        }
        RuleName::BoxVar => {
            let v = match &d.term {
                Term::Var(v) => v,
                _ => unreachable!("checked derivation"),
            };
            let i = d.ctx.modal.position(v).expect("bound");
            let a = interp_type(model, &d.ty)?;
            let eps = model.functor.epsilon(&a)?.ok_or(SemanticsError::ModelMismatch {
                needs: "epsilon",
                functor: model.functor.name().to_string(),
            })?;
            Ok(Denotation {
                dom,
                cod,
                table: (0..codec.total)
                    .map(|e| eps.table[codec.decode(e)[i]])
                    .collect(),
            })
        }
        RuleName::ProdI => {
            let l = interp_term(model, sys, &d.premises[0])?;
            let r = interp_term(model, sys, &d.premises[1])?;
            let nb = r.cod.size()?;
            Ok(Denotation {
                dom,
                cod,
                table: (0..codec.total).map(|i| l.table[i] * nb + r.table[i]).collect(),
            })
        }
        RuleName::ProdE1 | RuleName::ProdE2 => {
            let p = interp_term(model, sys, &d.premises[0])?;
            let (a, b) = match &p.cod {
                SetObj::Prod(a, b) => (a.as_ref().clone(), b.as_ref().clone()),
                _ => unreachable!("premise of a projection is a product"),
            };
            let nb = b.size()?;
            let _ = a.size()?;
            let pick_first = d.rule == RuleName::ProdE1;
            Ok(Denotation {
                dom,
                cod,
                table: p
                    .table
                    .iter()
                    .map(|&v| if pick_first { v / nb } else { v % nb })
                    .collect(),
            })
        }
        RuleName::ArrowI => {
            let p = interp_term(model, sys, &d.premises[0])?;
            let (arg_ty, res_ty) = match &d.ty {
                TypeExpr::Arrow(a, b) => (a, b),
                _ => unreachable!("lambda at arrow type"),
            };
            let arg_obj = interp_type(model, arg_ty)?;
            let res_obj = interp_type(model, res_ty)?;
            let na = arg_obj.size()?;
            let nb = res_obj.size()?;
            let _ = cod.size()?;
            let pows = fun_powers(na, nb);
            let table = (0..codec.total)
                .map(|i| {
                    (0..na)
                        .map(|a| p.table[i * na + a] * pows[a])
                        .sum::<usize>()
                })
                .collect();
            Ok(Denotation { dom, cod, table })
        }
        RuleName::ArrowE => {
            let pf = interp_term(model, sys, &d.premises[0])?;
            let pa = interp_term(model, sys, &d.premises[1])?;
            let (na, nb) = match &pf.cod {
                SetObj::Fun(a, b) => (a.size()?, b.size()?),
                _ => unreachable!("application head has a function type"),
            };
            let pows = fun_powers(na, nb);
            let table = (0..codec.total)
                .map(|i| {
                    let fun = pf.table[i];
                    let arg = pa.table[i];
                    (fun / pows[arg]) % nb
                })
                .collect();
            Ok(Denotation { dom, cod, table })
        }
        RuleName::BoxE => {
            let dm = interp_term(model, sys, &d.premises[0])?;
            let dn = interp_term(model, sys, &d.premises[1])?;
            let inner_objs = ctx_objs(model, &d.premises[1].ctx)?;
            let inner_codec = Tuple::new(&inner_objs)?;
            let table = (0..codec.total)
                .map(|i| {
                    let comps = codec.decode(i);
                    let mut inner = Vec::with_capacity(comps.len() + 1);
                    inner.extend_from_slice(&comps[..n_modal]);
                    inner.push(dm.table[i]);
                    inner.extend_from_slice(&comps[n_modal..]);
                    dn.table[inner_codec.encode(&inner)]
                })
                .collect();
            Ok(Denotation { dom, cod, table })
        }
        RuleName::BoxIK | RuleName::BoxIK4 | RuleName::BoxIS4 => {
            let premise = &d.premises[0];
            let f = interp_term(model, sys, premise)?;
            let delta_types: Vec<SetObj> = d
                .ctx
                .modal
                .iter()
                .map(|(_, t)| interp_type(model, t))
                .collect::<Result<_, _>>()?;
            let boxed = match d.rule {
                RuleName::BoxIK => box_bullet(model.functor, &delta_types, &f)?,
                RuleName::BoxIS4 => box_star(model.functor, &delta_types, &f)?,
                _ => box_sharp(model.functor, &delta_types, &f)?,
            };
            // precompose the projection onto the modal block
            let gamma_total: usize = {
                let mut t = 1usize;
                for o in &objs[n_modal..] {
                    t *= o.size()?;
                }
                t.max(1)
            };
            let table = (0..codec.total)
                .map(|i| boxed.table[i / gamma_total])
                .collect();
            Ok(Denotation { dom, cod, table })
        }
        RuleName::BoxIGL => Err(SemanticsError::GLUnsupported),
    }
}

/// Interprets both terms and compares the tables pointwise.
pub fn check_soundness(
    model: &FiniteModel,
    sys: SystemId,
    ctx: &DualContext,
    m: &Term,
    n: &Term,
    ty: &TypeExpr,
) -> Result<bool, SemanticsError> {
    let dm = infer(sys, ctx, m).map_err(|e| SemanticsError::IllTyped(e.to_string()))?;
    let dn = infer(sys, ctx, n).map_err(|e| SemanticsError::IllTyped(e.to_string()))?;
    if dm.ty != *ty || dn.ty != *ty {
        return Err(SemanticsError::IllTyped(format!(
            "terms check at {} and {}, not at {}",
            dm.ty, dn.ty, ty
        )));
    }
    let tm = interp_term(model, sys, &dm)?;
    let tn = interp_term(model, sys, &dn)?;
    Ok(tm.table == tn.table)
}

/// Outcome of one law check.
#[derive(Debug, Clone)]
pub struct LawCheck {
    pub law: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Full report of `verify_model`.
#[derive(Debug, Clone)]
pub struct ModelReport {
    pub functor: String,
    pub sys: SystemId,
    pub checks: Vec<LawCheck>,
    pub passed: bool,
}

impl ModelReport {
    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Laws are checked exhaustively over synthetic objects of every
    /// size up to this bound.
    pub max_atom_size: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_atom_size: 3 }
    }
}

fn all_arrows(a: &SetObj, b: &SetObj) -> Vec<Denotation> {
    let na = a.size().unwrap_or(0);
    let nb = b.size().unwrap_or(0);
    if na == 0 {
        return vec![Denotation { dom: a.clone(), cod: b.clone(), table: vec![] }];
    }
    if nb == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; na];
    loop {
        out.push(Denotation { dom: a.clone(), cod: b.clone(), table: digits.clone() });
        let mut k = na;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < nb {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn tables_equal(lhs: &Denotation, rhs: &Denotation) -> Option<usize> {
    debug_assert_eq!(lhs.table.len(), rhs.table.len());
    lhs.table.iter().zip(&rhs.table).position(|(a, b)| a != b)
}

struct Verifier {
    functor: FunctorSpec,
    objs: Vec<SetObj>,
    checks: Vec<LawCheck>,
}

impl Verifier {
    fn record(&mut self, law: &str, witness: Option<String>) {
        self.checks.push(LawCheck {
            law: law.to_string(),
            passed: witness.is_none(),
            witness,
        });
    }

    fn base_laws(&mut self) -> Result<(), SemanticsError> {
        let fs = self.functor;
        // functoriality
        let mut witness = None;
        'outer_id: for a in &self.objs {
            let id = Denotation::identity(a)?;
            let fid = fs.apply_arrow(&id)?;
            let want = Denotation::identity(&fs.apply_obj(a))?;
            if let Some(i) = tables_equal(&fid, &want) {
                witness = Some(format!("F(id) at {}: element {} maps to {}", a, i, fid.table[i]));
                break 'outer_id;
            }
        }
        self.record("functor-id", witness);

        let mut witness = None;
        'outer_comp: for a in &self.objs {
            for b in &self.objs {
                for c in &self.objs {
                    for f in all_arrows(a, b) {
                        for g in all_arrows(b, c) {
                            let lhs = fs.apply_arrow(&f.then(&g))?;
                            let rhs = fs.apply_arrow(&f)?.then(&fs.apply_arrow(&g)?);
                            if let Some(i) = tables_equal(&lhs, &rhs) {
                                witness = Some(format!(
                                    "F(g∘f) != Fg∘Ff at {}→{}→{}, element {}",
                                    a, b, c, i
                                ));
                                break 'outer_comp;
                            }
                        }
                    }
                }
            }
        }
        self.record("functor-comp", witness);

        // m₀ and m isos
        let m0 = fs.m0();
        self.record(
            "m0-iso",
            if m0.is_bijection() { None } else { Some("m0 is not a bijection".into()) },
        );
        let mut witness = None;
        for a in &self.objs {
            for b in &self.objs {
                let m = fs.m_pair(a, b)?;
                if !m.is_bijection() {
                    witness = Some(format!("m at ({}, {}) is not a bijection", a, b));
                    break;
                }
            }
        }
        self.record("m-iso", witness);

        // naturality of m
        let mut witness = None;
        'outer_nat: for a in &self.objs {
            for a2 in &self.objs {
                for b in &self.objs {
                    for b2 in &self.objs {
                        for f in all_arrows(a, a2) {
                            for g in all_arrows(b, b2) {
                                let m_ab = fs.m_pair(a, b)?;
                                let m_a2b2 = fs.m_pair(a2, b2)?;
                                let lhs = m_ab.then(&fs.apply_arrow(&f.prod_map(&g)?)?);
                                let rhs = fs
                                    .apply_arrow(&f)?
                                    .prod_map(&fs.apply_arrow(&g)?)?
                                    .then(&m_a2b2);
                                if let Some(i) = tables_equal(&lhs, &rhs) {
                                    witness = Some(format!(
                                        "m not natural at f:{}→{}, g:{}→{}, element {}",
                                        a, a2, b, b2, i
                                    ));
                                    break 'outer_nat;
                                }
                            }
                        }
                    }
                }
            }
        }
        self.record("m-natural", witness);

        // associativity coherence (associators are identities on flat
        // encodings)
        let mut witness = None;
        'outer_assoc: for a in &self.objs {
            for b in &self.objs {
                for c in &self.objs {
                    let id_fa = Denotation::identity(&fs.apply_obj(a))?;
                    let id_fc = Denotation::identity(&fs.apply_obj(c))?;
                    let lhs = id_fa
                        .prod_map(&fs.m_pair(b, c)?)?
                        .then(&fs.m_pair(a, &SetObj::prod(b.clone(), c.clone()))?);
                    let rhs = fs
                        .m_pair(a, b)?
                        .prod_map(&id_fc)?
                        .then(&fs.m_pair(&SetObj::prod(a.clone(), b.clone()), c)?);
                    if let Some(i) = tables_equal(&lhs, &rhs) {
                        witness =
                            Some(format!("coherence fails at ({}, {}, {}), element {}", a, b, c, i));
                        break 'outer_assoc;
                    }
                }
            }
        }
        self.record("m-assoc-coherence", witness);

        // unit coherence
        let mut witness = None;
        for a in &self.objs {
            let fa = fs.apply_obj(a);
            let id_fa = Denotation::identity(&fa)?;
            let right = id_fa.prod_map(&fs.m0())?.then(&fs.m_pair(a, &SetObj::Unit)?);
            if right.table.iter().enumerate().any(|(i, &v)| i != v) {
                witness = Some(format!("right unit fails at {}", a));
                break;
            }
            let left = fs.m0().prod_map(&id_fa)?.then(&fs.m_pair(&SetObj::Unit, a)?);
            if left.table.iter().enumerate().any(|(i, &v)| i != v) {
                witness = Some(format!("left unit fails at {}", a));
                break;
            }
        }
        self.record("m-unit-coherence", witness);
        Ok(())
    }

    fn delta_laws(&mut self) -> Result<(), SemanticsError> {
        let fs = self.functor;
        let missing = |law: &str| format!("{}: delta component missing", law);
        // naturality: δ_B ∘ Ff = FFf ∘ δ_A
        let mut witness = None;
        'nat: for a in &self.objs {
            for b in &self.objs {
                let (da, db) = match (fs.delta(a)?, fs.delta(b)?) {
                    (Some(x), Some(y)) => (x, y),
                    _ => {
                        witness = Some(missing("delta-natural"));
                        break 'nat;
                    }
                };
                for f in all_arrows(a, b) {
                    let ff = fs.apply_arrow(&f)?;
                    let fff = fs.apply_arrow(&ff)?;
                    let lhs = ff.then(&db);
                    let rhs = da.then(&fff);
                    if let Some(i) = tables_equal(&lhs, &rhs) {
                        witness = Some(format!(
                            "delta not natural at f:{}→{} (table {:?}), element {}",
                            a, b, f.table, i
                        ));
                        break 'nat;
                    }
                }
            }
        }
        self.record("delta-natural", witness);

        // monoidality: δ_{A×B} ∘ m = F(m) ∘ m_{FA,FB} ∘ (δ_A × δ_B)
        let mut witness = None;
        'mon: for a in &self.objs {
            for b in &self.objs {
                let ab = SetObj::prod(a.clone(), b.clone());
                let (da, db, dab) = match (fs.delta(a)?, fs.delta(b)?, fs.delta(&ab)?) {
                    (Some(x), Some(y), Some(z)) => (x, y, z),
                    _ => {
                        witness = Some(missing("delta-monoidal"));
                        break 'mon;
                    }
                };
                let m = fs.m_pair(a, b)?;
                let lhs = m.then(&dab);
                let m_faf = fs.m_pair(&fs.apply_obj(a), &fs.apply_obj(b))?;
                let rhs = da.prod_map(&db)?.then(&m_faf).then(&fs.apply_arrow(&m)?);
                if let Some(i) = tables_equal(&lhs, &rhs) {
                    witness = Some(format!("delta not monoidal at ({}, {}), element {}", a, b, i));
                    break 'mon;
                }
            }
        }
        self.record("delta-monoidal", witness);

        let unit_witness = match fs.delta(&SetObj::Unit)? {
            Some(d1) => {
                let lhs = fs.m0().then(&d1);
                let rhs = fs.m0().then(&fs.apply_arrow(&fs.m0())?);
                tables_equal(&lhs, &rhs).map(|i| format!("delta unit coherence, element {}", i))
            }
            None => Some(missing("delta-monoidal-unit")),
        };
        self.record("delta-monoidal-unit", unit_witness);

        // coassociativity: Q(δ_A) ∘ δ_A = δ_{QA} ∘ δ_A
        let mut witness = None;
        for a in &self.objs {
            let da = match fs.delta(a)? {
                Some(x) => x,
                None => {
                    witness = Some(missing("delta-coassoc"));
                    break;
                }
            };
            let dqa = match fs.delta(&fs.apply_obj(a))? {
                Some(x) => x,
                None => {
                    witness = Some(missing("delta-coassoc"));
                    break;
                }
            };
            let lhs = da.then(&fs.apply_arrow(&da)?);
            let rhs = da.then(&dqa);
            if let Some(i) = tables_equal(&lhs, &rhs) {
                witness = Some(format!("coassociativity fails at {}, element {}", a, i));
                break;
            }
        }
        self.record("delta-coassoc", witness);
        Ok(())
    }

    fn epsilon_laws(&mut self) -> Result<(), SemanticsError> {
        let fs = self.functor;
        // naturality first: f ∘ ε_A = ε_B ∘ Ff (skipping objects where the
        // component is missing; their absence is reported separately)
        let mut witness = None;
        'nat: for a in &self.objs {
            for b in &self.objs {
                let (ea, eb) = match (fs.epsilon(a)?, fs.epsilon(b)?) {
                    (Some(x), Some(y)) => (x, y),
                    _ => continue,
                };
                for f in all_arrows(a, b) {
                    let lhs = ea.then(&f);
                    let rhs = fs.apply_arrow(&f)?.then(&eb);
                    if let Some(i) = tables_equal(&lhs, &rhs) {
                        witness = Some(format!(
                            "epsilon not natural at f:{}→{} (table {:?}), element {}: {} vs {}",
                            a, b, f.table, i, lhs.cod.label(lhs.table[i]), rhs.cod.label(rhs.table[i])
                        ));
                        break 'nat;
                    }
                }
            }
        }
        self.record("epsilon-natural", witness);

        // monoidality: ε_{A×B} ∘ m = ε_A × ε_B
        let mut witness = None;
        'mon: for a in &self.objs {
            for b in &self.objs {
                let ab = SetObj::prod(a.clone(), b.clone());
                let (ea, eb, eab) = match (fs.epsilon(a)?, fs.epsilon(b)?, fs.epsilon(&ab)?) {
                    (Some(x), Some(y), Some(z)) => (x, y, z),
                    _ => continue,
                };
                let lhs = fs.m_pair(a, b)?.then(&eab);
                let rhs = ea.prod_map(&eb)?;
                if let Some(i) = tables_equal(&lhs, &rhs) {
                    witness = Some(format!("epsilon not monoidal at ({}, {}), element {}", a, b, i));
                    break 'mon;
                }
            }
        }
        self.record("epsilon-monoidal", witness);

        let unit_witness = match fs.epsilon(&SetObj::Unit)? {
            Some(e1) => {
                let lhs = fs.m0().then(&e1);
                if lhs.table == vec![0] {
                    None
                } else {
                    Some("epsilon unit coherence fails".to_string())
                }
            }
            None => Some("epsilon component missing at 1".to_string()),
        };
        self.record("epsilon-monoidal-unit", unit_witness);

        let missing: Vec<String> = self
            .objs
            .iter()
            .filter(|o| matches!(fs.epsilon(o), Ok(None)))
            .map(|o| o.to_string())
            .collect();
        self.record(
            "epsilon-total",
            if missing.is_empty() {
                None
            } else {
                Some(format!("no epsilon component at {}", missing.join(", ")))
            },
        );
        Ok(())
    }

    fn counit_laws(&mut self) -> Result<(), SemanticsError> {
        let fs = self.functor;
        let mut left = None;
        let mut right = None;
        for a in &self.objs {
            let fa = fs.apply_obj(a);
            let (delta, eps_fa, eps_a) = match (fs.delta(a)?, fs.epsilon(&fa)?, fs.epsilon(a)?) {
                (Some(d), Some(ef), Some(ea)) => (d, ef, ea),
                _ => {
                    left.get_or_insert("missing delta or epsilon component".to_string());
                    break;
                }
            };
            if left.is_none() {
                let lhs = delta.then(&eps_fa);
                if let Some(i) = tables_equal(&lhs, &Denotation::identity(&fa)?) {
                    left = Some(format!(
                        "counit-left fails at {}: element {} maps to {} instead of {}",
                        a,
                        fa.label(i),
                        fa.label(lhs.table[i]),
                        fa.label(i)
                    ));
                }
            }
            if right.is_none() {
                let lhs = delta.then(&fs.apply_arrow(&eps_a)?);
                if let Some(i) = tables_equal(&lhs, &Denotation::identity(&fa)?) {
                    right = Some(format!(
                        "counit-right fails at {}: element {} maps to {} instead of {}",
                        a,
                        fa.label(i),
                        fa.label(lhs.table[i]),
                        fa.label(i)
                    ));
                }
            }
        }
        self.record("counit-left", left);
        self.record("counit-right", right);
        Ok(())
    }
}

/// Brute-force checks of every law the system requires of the model's
/// functor, over synthetic objects of all sizes up to the bound.
pub fn verify_model_with(
    model: &FiniteModel,
    sys: SystemId,
    cfg: VerifyConfig,
) -> Result<ModelReport, SemanticsError> {
    if sys == SystemId::GL {
        return Err(SemanticsError::GLUnsupported);
    }
    let objs: Vec<SetObj> = (0..=cfg.max_atom_size)
        .map(|n| SetObj::atom(format!("#{}", n), n))
        .collect();
    let mut v = Verifier { functor: model.functor, objs, checks: Vec::new() };
    v.base_laws()?;
    if matches!(sys, SystemId::K4 | SystemId::S4) {
        v.delta_laws()?;
    }
    if matches!(sys, SystemId::T | SystemId::S4) {
        v.epsilon_laws()?;
    }
    if sys == SystemId::S4 {
        v.counit_laws()?;
    }
    let passed = v.checks.iter().all(|c| c.passed);
    Ok(ModelReport {
        functor: model.functor.name().to_string(),
        sys,
        checks: v.checks,
        passed,
    })
}

pub fn verify_model(model: &FiniteModel, sys: SystemId) -> Result<ModelReport, SemanticsError> {
    verify_model_with(model, sys, VerifyConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_judgment;

    fn id_model(p_size: usize) -> FiniteModel {
        FiniteModel::new(FunctorSpec::Identity).with_atom("p", p_size).with_atom("q", 3)
    }

    #[test]
    fn interp_type_sizes() {
        let m = id_model(2);
        let t = crate::parser::parse_type("[]p").unwrap();
        assert_eq!(interp_type(&m, &t).unwrap().size().unwrap(), 2);
        let m = FiniteModel::new(FunctorSpec::Diagonal).with_atom("p", 2);
        assert_eq!(interp_type(&m, &t).unwrap().size().unwrap(), 4);
        let m = id_model(2);
        let t = crate::parser::parse_type("p -> q").unwrap();
        assert_eq!(interp_type(&m, &t).unwrap().size().unwrap(), 9);
    }

    #[test]
    fn interp_ctx_sizes() {
        let j = parse_judgment("u:p ; x:p |- x").unwrap();
        let m = id_model(2);
        assert_eq!(interp_ctx(&m, &j.ctx).unwrap().size().unwrap(), 4);
        let m = FiniteModel::new(FunctorSpec::Diagonal).with_atom("p", 2);
        assert_eq!(interp_ctx(&m, &j.ctx).unwrap().size().unwrap(), 8);
        let empty = parse_judgment("; |- \\x:p. x").unwrap();
        assert_eq!(interp_ctx(&m, &empty.ctx).unwrap().size().unwrap(), 1);
    }

    #[test]
    fn unknown_atom_reported() {
        let m = FiniteModel::new(FunctorSpec::Identity);
        let t = crate::parser::parse_type("p").unwrap();
        assert!(matches!(interp_type(&m, &t), Err(SemanticsError::UnknownAtom(_))));
    }

    #[test]
    fn identity_passes_all_systems() {
        let m = id_model(2);
        for sys in [SystemId::K, SystemId::K4, SystemId::T, SystemId::S4] {
            let r = verify_model(&m, sys).unwrap();
            assert!(r.passed, "identity failed {}: {:?}", sys, r.first_failure());
        }
    }

    #[test]
    fn const_unit_passes_k4_fails_t() {
        let m = FiniteModel::new(FunctorSpec::ConstUnit).with_atom("p", 2);
        assert!(verify_model(&m, SystemId::K).unwrap().passed);
        assert!(verify_model(&m, SystemId::K4).unwrap().passed);
        let r = verify_model(&m, SystemId::T).unwrap();
        assert!(!r.passed);
        assert_eq!(r.first_failure().unwrap().law, "epsilon-natural");
    }

    #[test]
    fn diagonal_passes_k4_fails_s4_counit() {
        let m = FiniteModel::new(FunctorSpec::Diagonal).with_atom("p", 2);
        assert!(verify_model(&m, SystemId::K).unwrap().passed);
        assert!(verify_model(&m, SystemId::K4).unwrap().passed);
        let r = verify_model(&m, SystemId::S4).unwrap();
        assert!(!r.passed);
        let fail = r.checks.iter().find(|c| !c.passed).unwrap();
        assert_eq!(fail.law, "counit-right");
        assert!(fail.witness.as_deref().unwrap().contains("(0, 1)"));
    }

    #[test]
    fn m_n_is_iso_on_test_objects() {
        for fs in FunctorSpec::ALL {
            for n in 0..4 {
                let objs: Vec<SetObj> = (0..n).map(|i| SetObj::atom(format!("a{}", i), 2)).collect();
                assert!(m_n(fs, &objs).unwrap().is_bijection(), "{} at n={}", fs.name(), n);
            }
        }
    }

    #[test]
    fn box_maps_identity_model() {
        // in the identity model, f• = f and f* = f, f# = f ∘ duplicate
        let a = SetObj::atom("p", 2);
        let f = Denotation::from_fn(a.clone(), a.clone(), |x| 1 - x).unwrap();
        let bb = box_bullet(FunctorSpec::Identity, std::slice::from_ref(&a), &f).unwrap();
        assert_eq!(bb.table, f.table);
        let bs = box_star(FunctorSpec::Identity, std::slice::from_ref(&a), &f).unwrap();
        assert_eq!(bs.table, f.table);
        // comonad counit composite: ε_B ∘ f* = f
        let eps = FunctorSpec::Identity.epsilon(&a).unwrap().unwrap();
        assert_eq!(bs.then(&eps).table, f.table);
        // f over ⟨x:p ; x':p⟩, i.e. p × p → p, first projection
        let f2 = Denotation::from_fn(
            SetObj::prod(a.clone(), a.clone()),
            a.clone(),
            |i| i / 2,
        )
        .unwrap();
        let sharp = box_sharp(FunctorSpec::Identity, std::slice::from_ref(&a), &f2).unwrap();
        // duplicate then project = identity
        assert_eq!(sharp.table, vec![0, 1]);
    }

    #[test]
    fn box_maps_nullary_case() {
        // n = 0: f•, f# and f* all collapse to Ff ∘ m₀
        for fs in FunctorSpec::ALL {
            let b = SetObj::atom("p", 3);
            // point picking element 2 of b
            let f = Denotation::from_fn(SetObj::Unit, b.clone(), |_| 2).unwrap();
            let bullet = box_bullet(fs, &[], &f).unwrap();
            let sharp = box_sharp(fs, &[], &f).unwrap();
            let star = box_star(fs, &[], &f).unwrap();
            let direct = fs.m0().then(&fs.apply_arrow(&f).unwrap());
            assert_eq!(bullet.table, direct.table, "{} bullet", fs.name());
            assert_eq!(sharp.table, direct.table, "{} sharp", fs.name());
            assert_eq!(star.table, direct.table, "{} star", fs.name());
        }
    }

    #[test]
    fn diagonal_box_bullet_hand_composition() {
        // f = id on p with |p| = 2: f• = Ff ∘ m⁽¹⁾ = (f × f) ∘ id
        let p = SetObj::atom("p", 2);
        let f = Denotation::identity(&p).unwrap();
        let bullet = box_bullet(FunctorSpec::Diagonal, std::slice::from_ref(&p), &f).unwrap();
        assert_eq!(bullet.table, vec![0, 1, 2, 3]);
        // and against an independent composition for a non-identity f
        let swap = Denotation::from_fn(p.clone(), p.clone(), |x| 1 - x).unwrap();
        let bullet = box_bullet(FunctorSpec::Diagonal, std::slice::from_ref(&p), &swap).unwrap();
        let m1 = m_n(FunctorSpec::Diagonal, std::slice::from_ref(&p)).unwrap();
        let by_hand = m1.then(&FunctorSpec::Diagonal.apply_arrow(&swap).unwrap());
        assert_eq!(bullet.table, by_hand.table);
        // (a, b) ↦ (swap a, swap b)
        assert_eq!(bullet.table, vec![3, 2, 1, 0]);
    }

    #[test]
    fn diagonal_box_sharp_hand_composition() {
        // f : Fp ×ₗ p → p taking the plain copy; check the full composite
        // against the displayed formula with δ(a,b) = ((a,b),(a,b))
        let p = SetObj::atom("p", 2);
        let fp = FunctorSpec::Diagonal.apply_obj(&p);
        let dom = SetObj::prod(fp.clone(), p.clone());
        // element index: ((a1,a2), b) = (a1*2 + a2)*2 + b; pick b
        let f = Denotation::from_fn(dom, p.clone(), |i| i % 2).unwrap();
        let sharp = box_sharp(FunctorSpec::Diagonal, std::slice::from_ref(&p), &f).unwrap();
        // by hand: input (a1,a2) goes to Ff(m²(δ(a1,a2), (a1,a2)));
        // both components end up selecting the plain copy (a1, a2)
        assert_eq!(sharp.dom.size().unwrap(), 4);
        assert_eq!(sharp.table, vec![0, 1, 2, 3]);
    }

    #[test]
    fn letbox_box_u_denotes_identity() {
        let m = id_model(2);
        let j = parse_judgment("; x:[]p |- let box u = x in box u").unwrap();
        let d = infer(SystemId::K, &j.ctx, &j.term).unwrap();
        let den = interp_term(&m, SystemId::K, &d).unwrap();
        assert_eq!(den.table, vec![0, 1]);
    }

    #[test]
    fn t_dereliction_denotes_epsilon() {
        let m = id_model(2);
        let j = parse_judgment("; x:[]p |- let box u = x in u").unwrap();
        let d = infer(SystemId::T, &j.ctx, &j.term).unwrap();
        let den = interp_term(&m, SystemId::T, &d).unwrap();
        // identity model: ε = id
        assert_eq!(den.table, vec![0, 1]);
    }

    #[test]
    fn t_lambda_dereliction_is_epsilon_in_every_t_model() {
        // ⟦λx:[]p. let box u = x in u⟧ encodes exactly ε_p
        let j = parse_judgment("; |- \\x:[]p. let box u = x in u").unwrap();
        for fs in [FunctorSpec::Identity, FunctorSpec::Diagonal] {
            let model = FiniteModel::new(fs).with_atom("p", 2);
            assert!(verify_model(&model, SystemId::T).unwrap().passed);
            let d = infer(SystemId::T, &j.ctx, &j.term).unwrap();
            let den = interp_term(&model, SystemId::T, &d).unwrap();
            let p = SetObj::atom("p", 2);
            let eps = fs.epsilon(&p).unwrap().unwrap();
            // encode the ε table as one element of the exponential
            let n = eps.table.len();
            let encoded: usize = eps
                .table
                .iter()
                .enumerate()
                .map(|(i, &v)| v * 2usize.pow((n - 1 - i) as u32))
                .sum();
            assert_eq!(den.table, vec![encoded], "{}", fs.name());
        }
    }

    #[test]
    fn const_unit_every_box_denotation_trivial() {
        let mut m = FiniteModel::new(FunctorSpec::ConstUnit);
        m.atoms.insert("p".into(), 2);
        let j = parse_judgment("u:p ; |- box u").unwrap();
        let d = infer(SystemId::K, &j.ctx, &j.term).unwrap();
        let den = interp_term(&m, SystemId::K, &d).unwrap();
        assert_eq!(den.cod.size().unwrap(), 1);
        assert!(den.table.iter().all(|&v| v == 0));
    }

    #[test]
    fn soundness_examples() {
        let m = id_model(2);
        let j = crate::parser::parse_eq_judgment("; x:[]p |- let box u = x in box u = x : []p").unwrap();
        assert!(check_soundness(&m, SystemId::K, &j.ctx, &j.left, &j.right, &j.ty).unwrap());
        let j = crate::parser::parse_eq_judgment("; y:p |- (\\x:p. x) y = y : p").unwrap();
        assert!(check_soundness(&m, SystemId::K, &j.ctx, &j.left, &j.right, &j.ty).unwrap());
        let j = crate::parser::parse_eq_judgment("; y:p |- \\x:p. x = \\x:p. y : p -> p").unwrap();
        assert!(!check_soundness(&m, SystemId::K, &j.ctx, &j.left, &j.right, &j.ty).unwrap());
    }

    #[test]
    fn gl_semantics_refused() {
        let m = id_model(2);
        assert!(matches!(
            verify_model(&m, SystemId::GL),
            Err(SemanticsError::GLUnsupported)
        ));
    }
}
