//! Composition of lexical meanings along a syntax tree.
//!
//! Each node applies its functor to its argument. When the argument's sort
//! does not fit, the engine tries lexical coercions of the two words and
//! chains of inclusion morphisms. Polymorphic functors are specialised by
//! matching their domain against the argument. A type variable that the
//! argument leaves open stays abstracted, so the next node can fix it. This
//! is how a polymorphic conjunction receives its second predicate.

pub mod builtins;

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::batch::{self, Execution};
use crate::kernel::{normalize, type_of, Env, ReduceError, Term, Type, TypeError, DEFAULT_FUEL};
use crate::lexicon::{
    chain_candidates, coercion_candidates, coercions_from, lexical_candidates, CoercionCandidate, CoercionKind,
    Grammar, LexEntry, Lexicon, LexiconError, DEFAULT_MAX_DEPTH,
};
use crate::sexpr::{self, Sexp, SyntaxError};

/// Position in a syntax tree: `0` is the functor, `1` the argument.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreePath(pub Vec<u8>);

impl TreePath {
    fn child(&self, step: u8) -> TreePath {
        let mut p = self.0.clone();
        p.push(step);
        TreePath(p)
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

/// A binary application tree over words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxTree {
    Leaf(String),
    Node(Box<SyntaxTree>, Box<SyntaxTree>),
}

impl SyntaxTree {
    pub fn leaf(word: impl Into<String>) -> SyntaxTree {
        SyntaxTree::Leaf(word.into())
    }

    pub fn node(functor: SyntaxTree, argument: SyntaxTree) -> SyntaxTree {
        SyntaxTree::Node(Box::new(functor), Box::new(argument))
    }

    /// Reads `word` or `(node FUNCTOR ARGUMENT)`.
    pub fn parse(src: &str) -> Result<SyntaxTree, ComposeError> {
        Ok(SyntaxTree::from_sexp(&sexpr::parse_one(src)?)?)
    }

    pub fn from_sexp(x: &Sexp) -> Result<SyntaxTree, SyntaxError> {
        match x {
            Sexp::Atom(w, _) => Ok(SyntaxTree::leaf(w.clone())),
            Sexp::List(items, _) if items.len() == 3 && items[0].as_atom() == Some("node") => {
                Ok(SyntaxTree::node(SyntaxTree::from_sexp(&items[1])?, SyntaxTree::from_sexp(&items[2])?))
            }
            _ => Err(SyntaxError::new(x.pos(), format!("expected a word or `(node F A)`, found `{x}`"))),
        }
    }

    /// The word heading the functor spine, with its path.
    pub fn head(&self) -> (&str, TreePath) {
        let mut cur = self;
        let mut path = TreePath::default();
        loop {
            match cur {
                SyntaxTree::Leaf(w) => return (w, path),
                SyntaxTree::Node(f, _) => {
                    path = path.child(0);
                    cur = f;
                }
            }
        }
    }

    pub fn at(&self, path: &TreePath) -> Option<&SyntaxTree> {
        let mut cur = self;
        for step in &path.0 {
            cur = match (cur, step) {
                (SyntaxTree::Node(f, _), 0) => f,
                (SyntaxTree::Node(_, a), 1) => a,
                _ => return None,
            };
        }
        Some(cur)
    }
}

impl fmt::Display for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxTree::Leaf(w) => f.write_str(w),
            SyntaxTree::Node(a, b) => write!(f, "(node {a} {b})"),
        }
    }
}

/// A syntax tree whose leaves carry their lexical entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTree {
    Leaf { entry: LexEntry, path: TreePath },
    Node { functor: Box<RawTree>, argument: Box<RawTree>, path: TreePath },
}

impl RawTree {
    pub fn path(&self) -> &TreePath {
        match self {
            RawTree::Leaf { path, .. } | RawTree::Node { path, .. } => path,
        }
    }

    /// Entry and path of the word heading the functor spine.
    pub fn head(&self) -> (&LexEntry, &TreePath) {
        match self {
            RawTree::Leaf { entry, path } => (entry, path),
            RawTree::Node { functor, .. } => functor.head(),
        }
    }

    /// The plain application of lexical terms, before any repair. It need
    /// not be well typed.
    pub fn term(&self) -> Term {
        match self {
            RawTree::Leaf { entry, .. } => entry.main.clone(),
            RawTree::Node { functor, argument, .. } => Term::app(functor.term(), argument.term()),
        }
    }
}

/// Replaces every leaf by its lexical entry. No reduction happens.
pub fn instantiate(tree: &SyntaxTree, lexicon: &Lexicon) -> Result<RawTree, ComposeError> {
    fn go(tree: &SyntaxTree, lexicon: &Lexicon, path: TreePath) -> Result<RawTree, ComposeError> {
        match tree {
            SyntaxTree::Leaf(w) => Ok(RawTree::Leaf { entry: lexicon.lookup(w)?.clone(), path }),
            SyntaxTree::Node(f, a) => Ok(RawTree::Node {
                functor: Box::new(go(f, lexicon, path.child(0))?),
                argument: Box::new(go(a, lexicon, path.child(1))?),
                path,
            }),
        }
    }
    go(tree, lexicon, TreePath::default())
}

/// One coercion applied during composition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoercionUse {
    /// Node where the coercion was inserted.
    pub site: TreePath,
    /// Leaf of the word occurrence the coercion belongs to.
    pub at: TreePath,
    pub anchor_word: String,
    pub coercion: String,
    pub kind: CoercionKind,
    pub exclusive: bool,
}

impl fmt::Display for CoercionUse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CoercionKind::Lexical => "lexical",
            CoercionKind::Inclusion => "inclusion",
        };
        write!(f, "{} ({kind}) on {}@{} at node {}", self.coercion, self.anchor_word, self.at, self.site)?;
        if self.exclusive {
            f.write_str(" [exclusive]")?;
        }
        Ok(())
    }
}

/// A type argument given to a polymorphic word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instantiation {
    pub word: String,
    pub at: TreePath,
    pub binder: String,
    pub ty: Type,
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}: {} := {}", self.word, self.at, self.binder, self.ty)
    }
}

/// A repaired, well-typed composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repaired {
    pub term: Term,
    pub ty: Type,
    pub trace: Vec<CoercionUse>,
    pub instantiations: Vec<Instantiation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reading {
    /// Closed normal term of sort `t`.
    pub term: Term,
    /// The repaired term before normalisation.
    pub composed: Term,
    pub steps: usize,
    pub trace: Vec<CoercionUse>,
    pub instantiations: Vec<Instantiation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Lexicon(Box<LexiconError>),
    #[error("NoReading at node {site}: cannot apply {functor} to {argument}: {}", .reasons.join("; "))]
    NoReading { site: TreePath, functor: String, argument: String, reasons: Vec<String> },
    #[error("TypeMismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Type, found: Type },
    #[error("internal: repaired term is ill typed: {0}")]
    IllTyped(TypeError),
    #[error("FuelExhausted after {steps} steps")]
    FuelExhausted { steps: usize },
}

impl From<LexiconError> for ComposeError {
    fn from(e: LexiconError) -> Self {
        ComposeError::Lexicon(Box::new(e))
    }
}

impl ComposeError {
    /// Whether the error reflects a bug or resource limit rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, ComposeError::IllTyped(_) | ComposeError::FuelExhausted { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComposeConfig {
    /// Longest inclusion chain tried as a coercion.
    pub max_depth: usize,
    pub fuel: usize,
    pub execution: Execution,
}

impl Default for ComposeConfig {
    fn default() -> Self {
        ComposeConfig { max_depth: DEFAULT_MAX_DEPTH, fuel: DEFAULT_FUEL, execution: Execution::default() }
    }
}

/// `specimen_of{X} restrictor`, the specimen of the subset of `X` picked
/// out by the restrictor.
pub fn specimen_read(restrictor: &Term, sort: &Type, grammar: &Grammar) -> Result<Term, ComposeError> {
    let expected = Type::arrow(sort.clone(), Type::prop());
    let found = type_of(restrictor, &grammar.signature, &Env::new()).map_err(ComposeError::IllTyped)?;
    if found != expected {
        return Err(ComposeError::TypeMismatch { expected, found });
    }
    let op = grammar.signature.get(builtins::SPECIMEN_OF).expect("builtin").clone();
    Ok(Term::app(Term::ty_app(Term::constant(builtins::SPECIMEN_OF, op), sort.clone()), restrictor.clone()))
}

#[derive(Clone, Debug)]
struct Partial {
    term: Term,
    ty: Type,
    trace: Vec<CoercionUse>,
    insts: Vec<Instantiation>,
}

/// An argument, possibly coerced before it reaches the functor.
struct Version {
    term: Term,
    ty: Type,
    uses: Vec<CoercionUse>,
}

#[derive(Clone, Copy)]
struct Head<'a> {
    entry: &'a LexEntry,
    path: &'a TreePath,
}

struct Engine<'a> {
    grammar: &'a Grammar,
    max_depth: usize,
    fresh: Cell<usize>,
}

/// First-order matching of `pat` against `ty`, solving the variables listed
/// in `metas`. `depth` counts the Π binders entered on both sides.
pub(crate) fn match_type(
    pat: &Type,
    ty: &Type,
    depth: usize,
    sol: &mut BTreeMap<String, Type>,
    metas: &[String],
) -> bool {
    match (pat, ty) {
        (Type::Var(m), _) if metas.contains(m) => {
            if ty.mentions_escaping(0, depth).is_some() {
                return false;
            }
            let ty = ty.shift(-(depth as isize), 0);
            match sol.get(m) {
                Some(prev) => *prev == ty,
                None => {
                    sol.insert(m.clone(), ty);
                    true
                }
            }
        }
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
            match_type(a1, a2, depth, sol, metas) && match_type(b1, b2, depth, sol, metas)
        }
        (Type::Forall(_, b1), Type::Forall(_, b2)) => match_type(b1, b2, depth + 1, sol, metas),
        _ => pat == ty,
    }
}

/// Strips leading Π binders, replacing them with named metavariables.
pub(crate) fn open_metas(ty: &Type) -> (Vec<(String, String)>, Type) {
    let (hints, _) = ty.split_foralls();
    let mut body = ty.clone();
    let mut metas = Vec::new();
    for (i, h) in hints.into_iter().enumerate() {
        let m = format!("?{i}");
        body = body.instantiate(&Type::var(&m)).expect("split_foralls counted a binder");
        metas.push((m, h));
    }
    (metas, body)
}

fn conflict(trace: &[CoercionUse]) -> Option<(&CoercionUse, &CoercionUse)> {
    let lexical: Vec<_> = trace.iter().filter(|u| u.kind == CoercionKind::Lexical).collect();
    for (i, u) in lexical.iter().enumerate() {
        for v in &lexical[i + 1..] {
            if u.at == v.at && u.coercion != v.coercion && (u.exclusive || v.exclusive) {
                return Some(if u.exclusive { (u, v) } else { (v, u) });
            }
        }
    }
    None
}

impl<'a> Engine<'a> {
    fn fresh(&self) -> String {
        let n = self.fresh.get();
        self.fresh.set(n + 1);
        format!("?g{n}")
    }

    fn uses(&self, c: &CoercionCandidate, owner: Head, site: &TreePath) -> Vec<CoercionUse> {
        c.steps
            .iter()
            .map(|s| CoercionUse {
                site: site.clone(),
                at: owner.path.clone(),
                anchor_word: owner.entry.word.clone(),
                coercion: s.name.clone(),
                kind: s.kind,
                exclusive: s.exclusive,
            })
            .collect()
    }

    fn build(&self, raw: &'a RawTree) -> Result<Vec<Partial>, ComposeError> {
        match raw {
            RawTree::Leaf { entry, .. } => Ok(vec![Partial {
                term: entry.main.clone(),
                ty: entry.ty.clone(),
                trace: Vec::new(),
                insts: Vec::new(),
            }]),
            RawTree::Node { functor, argument, path } => {
                let fs = self.build(functor)?;
                let args = self.build(argument)?;
                let (fe, fp) = functor.head();
                let (ae, ap) = argument.head();
                let fh = Head { entry: fe, path: fp };
                let ah = Head { entry: ae, path: ap };
                let mut out = Vec::new();
                let mut reasons = Vec::new();
                for f in &fs {
                    for a in &args {
                        self.apply(f, a, fh, ah, path, &mut out, &mut reasons);
                    }
                }
                if out.is_empty() {
                    let mut seen = Vec::new();
                    reasons.retain(|r| {
                        let fresh = !seen.contains(r);
                        seen.push(r.clone());
                        fresh
                    });
                    let describe = |t: &RawTree, ps: &[Partial]| {
                        let tys: Vec<String> = ps.iter().map(|p| p.ty.to_string()).collect();
                        format!("`{}` : {}", tree_text(t), tys.join(" | "))
                    };
                    return Err(ComposeError::NoReading {
                        site: path.clone(),
                        functor: describe(functor, &fs),
                        argument: describe(argument, &args),
                        reasons,
                    });
                }
                Ok(out)
            }
        }
    }

    /// The argument itself, then every coercion of it when it denotes an
    /// entity: the argument word's own transfers and inclusion chains, then
    /// transfers offered by the functor word.
    fn versions(&self, a: &Partial, ah: Head, fh: Head, site: &TreePath) -> Vec<Version> {
        let mut out = vec![Version { term: a.term.clone(), ty: a.ty.clone(), uses: Vec::new() }];
        let Some(sort) = a.ty.as_entity() else { return out };
        for c in coercions_from(ah.entry, &self.grammar.ontology, sort, self.max_depth) {
            out.push(Version {
                term: c.apply(a.term.clone()),
                ty: Type::base(c.to.clone()),
                uses: self.uses(&c, ah, site),
            });
        }
        if fh.path != ah.path {
            for c in &fh.entry.coercions {
                let Some((from, to)) = c.sorts() else { continue };
                if from != sort {
                    continue;
                }
                for cand in lexical_candidates(fh.entry, from, to).iter().filter(|k| k.steps[0].name == c.name) {
                    out.push(Version {
                        term: cand.apply(a.term.clone()),
                        ty: Type::base(to),
                        uses: self.uses(cand, fh, site),
                    });
                }
            }
        }
        out
    }

    /// Coercions turning an `from` argument into a `to` one, as needed by a
    /// monomorphic functor.
    fn repairs(&self, from: &str, to: &str, ah: Head, fh: Head, site: &TreePath) -> Vec<Version> {
        let mut out = Vec::new();
        for (owner, cands) in [
            (ah, lexical_candidates(ah.entry, from, to)),
            (fh, if fh.path == ah.path { Vec::new() } else { lexical_candidates(fh.entry, from, to) }),
            (ah, chain_candidates(&self.grammar.ontology, from, to, self.max_depth)),
        ] {
            for c in cands.into_iter().filter(|c| !c.is_identity()) {
                out.push(Version { term: c.term.clone(), ty: Type::base(to), uses: self.uses(&c, owner, site) });
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn apply(
        &self,
        f: &Partial,
        a: &Partial,
        fh: Head,
        ah: Head,
        site: &TreePath,
        out: &mut Vec<Partial>,
        reasons: &mut Vec<String>,
    ) {
        let (metas, body) = open_metas(&f.ty);
        let Some((dom, cod)) = body.as_arrow() else {
            reasons.push(format!("`{}` has type {}, which takes no argument", fh.entry.word, f.ty));
            return;
        };
        let join = |extra: &[CoercionUse]| {
            let mut t = f.trace.clone();
            t.extend(a.trace.iter().cloned());
            t.extend(extra.iter().cloned());
            t
        };

        if !metas.is_empty() {
            let names: Vec<String> = metas.iter().map(|(m, _)| m.clone()).collect();
            for v in self.versions(a, ah, fh, site) {
                let mut sol = BTreeMap::new();
                if !match_type(dom, &v.ty, 0, &mut sol, &names) {
                    reasons.push(format!("argument of type {} does not fit {}", v.ty, show_open(dom)));
                    continue;
                }
                let mut term = f.term.clone();
                let mut ty = cod.clone();
                let mut insts = f.insts.clone();
                insts.extend(a.insts.iter().cloned());
                let mut open = Vec::new();
                for (m, hint) in &metas {
                    let arg = match sol.get(m) {
                        Some(t) => {
                            insts.push(Instantiation {
                                word: fh.entry.word.clone(),
                                at: fh.path.clone(),
                                binder: hint.clone(),
                                ty: t.clone(),
                            });
                            t.clone()
                        }
                        None => {
                            let y = self.fresh();
                            open.push((y.clone(), hint.clone()));
                            Type::var(y)
                        }
                    };
                    term = Term::ty_app(term, arg.clone());
                    ty = ty.subst_var(m, &arg);
                }
                term = Term::app(term, v.term);
                for (y, hint) in open.iter().rev() {
                    term = Term::TyAbs { hint: hint.clone(), body: Box::new(term.close_type(y, 0)) };
                    ty = Type::Forall(hint.clone(), Box::new(ty.close_at(y, 0)));
                }
                let p = Partial { term, ty, trace: join(&v.uses), insts };
                self.saturate(p, v.ty.as_entity(), ah, site, out, reasons);
            }
            return;
        }

        let mut insts = f.insts.clone();
        insts.extend(a.insts.iter().cloned());
        if a.ty == *dom {
            let p =
                Partial { term: Term::app(f.term.clone(), a.term.clone()), ty: cod.clone(), trace: join(&[]), insts };
            self.saturate(p, a.ty.as_entity(), ah, site, out, reasons);
            return;
        }

        let (ametas, abody) = open_metas(&a.ty);
        if !ametas.is_empty() {
            let names: Vec<String> = ametas.iter().map(|(m, _)| m.clone()).collect();
            let mut sol = BTreeMap::new();
            if match_type(&abody, dom, 0, &mut sol, &names) && sol.len() == names.len() {
                let mut term = a.term.clone();
                for (m, hint) in &ametas {
                    term = Term::ty_app(term, sol[m].clone());
                    insts.push(Instantiation {
                        word: ah.entry.word.clone(),
                        at: ah.path.clone(),
                        binder: hint.clone(),
                        ty: sol[m].clone(),
                    });
                }
                let p = Partial { term: Term::app(f.term.clone(), term), ty: cod.clone(), trace: join(&[]), insts };
                self.saturate(p, dom.as_entity(), ah, site, out, reasons);
            } else {
                reasons.push(format!("no instance of {} fits {}", a.ty, dom));
            }
            return;
        }

        match (a.ty.as_entity(), dom.as_entity()) {
            (Some(from), Some(to)) => {
                let fixes = self.repairs(from, to, ah, fh, site);
                if fixes.is_empty() {
                    reasons.push(format!("no coercion from {from} to {to}"));
                }
                for fix in fixes {
                    let arg = Term::app(fix.term, a.term.clone());
                    let p = Partial {
                        term: Term::app(f.term.clone(), arg),
                        ty: cod.clone(),
                        trace: join(&fix.uses),
                        insts: insts.clone(),
                    };
                    self.saturate(p, Some(to), ah, site, out, reasons);
                }
            }
            _ => reasons.push(format!("argument of type {} does not fit {}", a.ty, dom)),
        }
    }

    /// Fills coercion slots `(S1→S2)` that follow an argument of sort `S1`,
    /// then applies the exclusivity filter.
    fn saturate(
        &self,
        p: Partial,
        arg_sort: Option<&str>,
        ah: Head,
        site: &TreePath,
        out: &mut Vec<Partial>,
        reasons: &mut Vec<String>,
    ) {
        let slot = arg_sort.and_then(|s| {
            let (slot, rest) = p.ty.as_arrow()?;
            let (s1, s2) = slot.as_arrow()?;
            (s1.as_entity()? == s).then_some((s, s2.as_entity()?.to_string(), rest.clone()))
        });
        if let Some((s1, s2, rest)) = slot {
            let cands = coercion_candidates(ah.entry, &self.grammar.ontology, s1, &s2, self.max_depth);
            if cands.is_empty() {
                reasons.push(format!("no coercion from {s1} to {s2} for `{}`", ah.entry.word));
            }
            for c in cands {
                let mut trace = p.trace.clone();
                trace.extend(self.uses(&c, ah, site));
                let next = Partial {
                    term: Term::app(p.term.clone(), c.term.clone()),
                    ty: rest.clone(),
                    trace,
                    insts: p.insts.clone(),
                };
                self.saturate(next, arg_sort, ah, site, out, reasons);
            }
            return;
        }
        if let Some((x, y)) = conflict(&p.trace) {
            reasons.push(format!(
                "exclusive coercion `{}` of `{}` cannot combine with `{}`",
                x.coercion, x.anchor_word, y.coercion
            ));
            return;
        }
        out.push(p);
    }
}

fn show_open(ty: &Type) -> String {
    ty.to_string().replace('?', "_")
}

fn tree_text(t: &RawTree) -> String {
    match t {
        RawTree::Leaf { entry, .. } => entry.word.clone(),
        RawTree::Node { functor, argument, .. } => format!("(node {} {})", tree_text(functor), tree_text(argument)),
    }
}

/// Every well-typed repair of `raw`, at whatever type the whole reaches.
pub fn repair(raw: &RawTree, grammar: &Grammar, max_depth: usize) -> Result<Vec<Repaired>, ComposeError> {
    let engine = Engine { grammar, max_depth, fresh: Cell::new(0) };
    Ok(engine
        .build(raw)?
        .into_iter()
        .map(|p| Repaired { term: p.term, ty: p.ty, trace: p.trace, instantiations: p.insts })
        .collect())
}

/// All readings of `tree`: closed normal terms of sort `t`, ordered by
/// trace and then by printed term, without duplicates up to alpha.
pub fn readings(tree: &SyntaxTree, grammar: &Grammar, config: &ComposeConfig) -> Result<Vec<Reading>, ComposeError> {
    let raw = instantiate(tree, &grammar.lexicon)?;
    let repaired = repair(&raw, grammar, config.max_depth)?;
    let (props, others): (Vec<_>, Vec<_>) = repaired.into_iter().partition(|r| r.ty.is_prop());
    if props.is_empty() {
        let mut tys: Vec<String> = others.iter().map(|r| r.ty.to_string()).collect();
        tys.dedup();
        return Err(ComposeError::NoReading {
            site: TreePath::default(),
            functor: tree.to_string(),
            argument: "nothing".into(),
            reasons: vec![format!("the sentence has type {}, which does not reach sort t", tys.join(" | "))],
        });
    }
    let sig = &grammar.signature;
    let results = batch::map(config.execution, &props, |r| -> Result<Reading, ComposeError> {
        type_of(&r.term, sig, &Env::new()).map_err(ComposeError::IllTyped)?;
        let n = normalize(&r.term, config.fuel).map_err(|e| match e {
            ReduceError::FuelExhausted { steps } => ComposeError::FuelExhausted { steps },
            ReduceError::IllTyped(e) => ComposeError::IllTyped(e),
        })?;
        Ok(Reading {
            term: n.term,
            composed: r.term.clone(),
            steps: n.steps,
            trace: r.trace.clone(),
            instantiations: r.instantiations.clone(),
        })
    });
    let mut out = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut keyed: Vec<(String, Reading)> = out.drain(..).map(|r| (r.term.to_string(), r)).collect();
    keyed.sort_by(|(ka, a), (kb, b)| a.trace.cmp(&b.trace).then_with(|| ka.cmp(kb)));
    let mut unique: Vec<Reading> = Vec::new();
    for (_, r) in keyed {
        if !unique.iter().any(|u| u.term == r.term) {
            unique.push(r);
        }
    }
    Ok(unique)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;

    fn read(src: &str) -> Result<Vec<Reading>, ComposeError> {
        readings(&SyntaxTree::parse(src).unwrap(), &demo::grammar(), &ComposeConfig::default())
    }

    #[test]
    fn tree_syntax() {
        let t = SyntaxTree::parse("(node (node loves France) the_Brits)").unwrap();
        assert_eq!(t.to_string(), "(node (node loves France) the_Brits)");
        assert_eq!(t.head(), ("loves", TreePath(vec![0, 0])));
        assert_eq!(TreePath(vec![0, 1]).to_string(), "0.1");
        assert!(SyntaxTree::parse("").is_err());
        assert!(SyntaxTree::parse("(node a)").is_err());
    }

    #[test]
    fn instantiate_inserts_lexical_terms() {
        let g = demo::grammar();
        let raw = instantiate(&SyntaxTree::leaf("Carlotta"), &g.lexicon).unwrap();
        assert_eq!(raw.term().to_string(), "(const Carlotta)");
        let err = instantiate(&SyntaxTree::leaf("unicorn"), &g.lexicon).unwrap_err();
        assert_eq!(err, LexiconError::UnknownWord("unicorn".into()).into());
    }

    #[test]
    fn brits_love_france() {
        let rs = read("(node (node loves France) the_Brits)").unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(
            rs[0].term.to_string(),
            "((const loves) ((const a) ((const h) ((const specimen) {Brits}))) (const France))"
        );
        let chain: Vec<_> = rs[0].trace.iter().map(|u| u.coercion.as_str()).collect();
        assert_eq!(chain, vec!["h", "a"]);
    }

    #[test]
    fn carlotta_has_two_readings() {
        let rs = read("(node tall Carlotta)").unwrap();
        let sorts: Vec<_> = rs.iter().map(|r| r.instantiations[0].ty.to_string()).collect();
        assert_eq!(sorts, vec!["2yoGirl", "human"]);
        assert!(rs[0].trace.is_empty());
        assert_eq!(rs[1].trace[0].coercion, "h");
    }

    #[test]
    fn felicity_filter() {
        assert!(!read("(node (node (node and poor_town) important_harbour) Liverpool)").unwrap().is_empty());
        let err = read("(node (node (node and poor_town) (node defeated Chelsea)) Liverpool)").unwrap_err();
        let ComposeError::NoReading { site, reasons, .. } = err else { panic!("{err}") };
        assert_eq!(site, TreePath::default());
        assert!(reasons.iter().any(|r| r.contains("to_team")), "{reasons:?}");
        let err = read("(node barks table)").unwrap_err();
        assert!(err.to_string().contains("no coercion from Table to Dogs"), "{err}");
    }

    #[test]
    fn specimen_of_restrictor() {
        let g = demo::grammar();
        let p =
            crate::kernel::parse_term("(lam x student ((const passed) x (const logic)))", &g.signature, &Env::new())
                .unwrap();
        let s = specimen_read(&p, &Type::base("student"), &g).unwrap();
        assert_eq!(type_of(&s, &g.signature, &Env::new()).unwrap(), Type::base("student"));
        assert!(matches!(specimen_read(&p, &Type::base("Subject"), &g), Err(ComposeError::TypeMismatch { .. })));
    }
}
