//! Sort ontology and word lexicon.
//!
//! Each word has a main term plus a finite set of optional coercions: terms
//! of type `A → B` that let the word's denotation be viewed as a member of
//! another sort. A coercion marked exclusive cannot be combined with any
//! other coercion of the same word occurrence.

mod load;
mod ontology;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kernel::{SignatureError, SurfaceError, Term, Type, TypeError};
use crate::sexpr::{Pos, SyntaxError};

pub use load::Grammar;
pub use ontology::{Inclusion, Ontology};

pub const DEFAULT_MAX_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("UnknownWord: `{0}`")]
    UnknownWord(String),
    #[error("UnknownSort: `{0}`")]
    UnknownSort(String),
    #[error("inclusion {sub} ⊆ {sup} would close a cycle")]
    Cycle { sub: String, sup: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("{pos}: {source}")]
    Signature { pos: Pos, source: SignatureError },
    #[error("{pos}: word `{word}`: {source}")]
    IllTyped { pos: Pos, word: String, source: Box<TypeError> },
    #[error("{pos}: word `{word}` is defined twice")]
    DuplicateWord { word: String, pos: Pos },
    #[error("{pos}: word `{word}`: main term must be closed")]
    OpenMain { pos: Pos, word: String },
    #[error("{pos}: coercion `{name}` of `{word}` has non-functional type {ty}")]
    NotACoercion { pos: Pos, word: String, name: String, ty: Type },
    #[error("{pos}: morphism `{name}` is declared as {found}, inclusion needs {expected}")]
    MorphismType { pos: Pos, name: String, expected: Type, found: Type },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coercion {
    pub name: String,
    pub term: Term,
    pub ty: Type,
    pub exclusive: bool,
}

impl Coercion {
    /// Domain and codomain when both are entity sorts.
    pub fn sorts(&self) -> Option<(&str, &str)> {
        let (a, b) = self.ty.as_arrow()?;
        Some((a.as_entity()?, b.as_entity()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub main: Term,
    pub ty: Type,
    pub coercions: Vec<Coercion>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexEntry>,
}

impl Lexicon {
    pub fn insert(&mut self, entry: LexEntry) -> Option<LexEntry> {
        self.entries.insert(entry.word.clone(), entry)
    }

    pub fn lookup(&self, word: &str) -> Result<&LexEntry, LexiconError> {
        self.entries.get(word).ok_or_else(|| LexiconError::UnknownWord(word.to_string()))
    }

    pub fn words(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    /// Same lexicon with every exclusivity flag cleared.
    pub fn without_exclusivity(&self) -> Lexicon {
        let mut out = self.clone();
        for e in out.entries.values_mut() {
            for c in &mut e.coercions {
                c.exclusive = false;
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoercionKind {
    /// Supplied by a lexical entry.
    Lexical,
    /// An ontological inclusion morphism.
    Inclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoercionStep {
    pub name: String,
    pub exclusive: bool,
    pub kind: CoercionKind,
}

/// A way to turn a `from` value into a `to` value: one lexical coercion, or
/// a chain of inclusion morphisms (empty for the identity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoercionCandidate {
    pub from: String,
    pub to: String,
    pub steps: Vec<CoercionStep>,
    /// The coercion as a closed function term of type `from → to`.
    pub term: Term,
    lexical: Option<Term>,
}

impl CoercionCandidate {
    fn lexical(c: &Coercion, from: &str, to: &str) -> Self {
        CoercionCandidate {
            from: from.to_string(),
            to: to.to_string(),
            steps: vec![CoercionStep { name: c.name.clone(), exclusive: c.exclusive, kind: CoercionKind::Lexical }],
            term: c.term.clone(),
            lexical: Some(c.term.clone()),
        }
    }

    fn chain(ontology: &Ontology, from: &str, to: &str, chain: &[String]) -> Self {
        let mut sort = from.to_string();
        let mut morphisms = Vec::new();
        for m in chain {
            let next = ontology.follow(&sort, std::slice::from_ref(m)).expect("chain follows the ontology");
            morphisms.push(Term::constant(m.clone(), Type::arrow(Type::base(sort), Type::base(next.clone()))));
            sort = next;
        }
        let x = Term::free("x", Type::base(from));
        let body = morphisms.iter().cloned().fold(x, |acc, m| Term::app(m, acc));
        CoercionCandidate {
            from: from.to_string(),
            to: to.to_string(),
            steps: chain
                .iter()
                .map(|m| CoercionStep { name: m.clone(), exclusive: false, kind: CoercionKind::Inclusion })
                .collect(),
            term: Term::lam("x", Type::base(from), body),
            lexical: None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn exclusive(&self) -> bool {
        self.steps.iter().any(|s| s.exclusive)
    }

    /// Applies the coercion to `arg`. Inclusion chains are inserted as
    /// nested morphism applications, so no redex is introduced.
    pub fn apply(&self, arg: Term) -> Term {
        if let Some(t) = &self.lexical {
            return Term::app(t.clone(), arg);
        }
        let mut sort = self.from.clone();
        let mut acc = arg;
        for step in &self.steps {
            let next = Type::base(self.sort_after(&sort, &step.name));
            acc = Term::app(Term::constant(step.name.clone(), Type::arrow(Type::base(sort), next.clone())), acc);
            sort = next.as_base().unwrap().to_string();
        }
        acc
    }

    fn sort_after(&self, sort: &str, morphism: &str) -> String {
        // The function term records every morphism with its type.
        let mut found = None;
        self.term.walk(&mut |t| {
            if let Term::Const { name, ty } = t {
                if name == morphism {
                    if let Some((a, b)) = ty.as_arrow() {
                        if a.as_base() == Some(sort) {
                            found = b.as_base().map(str::to_string);
                        }
                    }
                }
            }
        });
        found.expect("morphism recorded in chain term")
    }
}

/// Lexical coercions of `entry` typed `from → to`, then inclusion chains
/// from `from` to `to` by length and name. The identity chain appears when
/// `from == to`.
pub fn coercion_candidates(
    entry: &LexEntry,
    ontology: &Ontology,
    from: &str,
    to: &str,
    max_depth: usize,
) -> Vec<CoercionCandidate> {
    let mut out = lexical_candidates(entry, from, to);
    out.extend(chain_candidates(ontology, from, to, max_depth));
    out
}

pub fn lexical_candidates(entry: &LexEntry, from: &str, to: &str) -> Vec<CoercionCandidate> {
    entry
        .coercions
        .iter()
        .filter(|c| c.sorts() == Some((from, to)))
        .map(|c| CoercionCandidate::lexical(c, from, to))
        .collect()
}

pub fn chain_candidates(ontology: &Ontology, from: &str, to: &str, max_depth: usize) -> Vec<CoercionCandidate> {
    match ontology.inclusion_paths(from, to, max_depth) {
        Ok(paths) => paths.iter().map(|p| CoercionCandidate::chain(ontology, from, to, p)).collect(),
        Err(_) => Vec::new(),
    }
}

/// Every non-identity way to coerce a `from` value: lexical coercions of
/// `entry` with that domain, then inclusion chains to each reachable sort.
pub fn coercions_from(entry: &LexEntry, ontology: &Ontology, from: &str, max_depth: usize) -> Vec<CoercionCandidate> {
    let mut out: Vec<_> = entry
        .coercions
        .iter()
        .filter_map(|c| match c.sorts() {
            Some((a, b)) if a == from => Some(CoercionCandidate::lexical(c, a, b)),
            _ => None,
        })
        .collect();
    if ontology.has_sort(from) {
        let mut chains: Vec<CoercionCandidate> = ontology
            .reachable(from, max_depth)
            .iter()
            .flat_map(|to| chain_candidates(ontology, from, to, max_depth))
            .collect();
        chains.sort_by(|a, b| {
            let names = |c: &CoercionCandidate| c.steps.iter().map(|s| s.name.clone()).collect::<Vec<_>>();
            a.steps.len().cmp(&b.steps.len()).then_with(|| names(a).cmp(&names(b)))
        });
        out.extend(chains);
    }
    out
}
