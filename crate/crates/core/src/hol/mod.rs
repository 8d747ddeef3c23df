//! Multisorted higher-order formulas read off normal readings.

mod check;
mod pretty;
mod sexp;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::compose::builtins::{AND, EXISTS, FORALL, IMPLIES, IOTA, NOT, OR, SPECIMEN, SPECIMEN_OF};
use crate::compose::Reading;
use crate::kernel::{normalize, Arg, ReduceError, Signature, Term, Type, DEFAULT_FUEL};
use crate::lexicon::CoercionKind;

pub use check::{check_sorts, SortClash};
pub use pretty::{pretty, PrettyOptions};
pub use sexp::{formula_from_sexp, formula_to_sexp, parse_formula, HolSyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
    Not,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Lt,
    Leq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    /// `⪍{A}`: a virtual typical member of `A`.
    Bare,
    /// `⪍{A} P`: the specimen of the members of `A` satisfying `P`.
    Restricted,
    /// `ι{A} P`: a chosen member satisfying `P`.
    Choice,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HolTerm {
    Individual {
        name: String,
        sort: Type,
    },
    Var {
        name: String,
        sort: Type,
    },
    /// A generic element. The restrictor mentions the element itself as
    /// `Var { name, .. }`.
    Generic {
        name: String,
        sort: Type,
        origin: Origin,
        restrictor: Option<Box<Formula>>,
    },
    /// A transfer or inclusion morphism applied to an element.
    FunApp {
        morphism: String,
        sort: Type,
        arg: Box<HolTerm>,
        inclusion: bool,
    },
}

impl HolTerm {
    pub fn sort(&self) -> &Type {
        match self {
            HolTerm::Individual { sort, .. }
            | HolTerm::Var { sort, .. }
            | HolTerm::Generic { sort, .. }
            | HolTerm::FunApp { sort, .. } => sort,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `sorts` lists the argument sorts at this use of the predicate.
    Pred {
        name: String,
        sorts: Vec<Type>,
        args: Vec<HolTerm>,
    },
    Conn {
        kind: Connective,
        operands: Vec<Formula>,
    },
    Quant {
        kind: Quantifier,
        var: String,
        sort: Type,
        body: Box<Formula>,
    },
    Cmp {
        kind: Comparison,
        left: HolTerm,
        right: HolTerm,
    },
}

impl Formula {
    pub fn and(operands: Vec<Formula>) -> Formula {
        Formula::Conn { kind: Connective::And, operands }
    }

    /// Every atomic subformula, left to right.
    pub fn atoms(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Pred { .. } | Formula::Cmp { .. } => out.push(self),
            Formula::Conn { operands, .. } => operands.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Quant { body, .. } => body.collect_atoms(out),
        }
    }

    /// The top-level conjuncts, flattening nested conjunctions.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Conn { kind: Connective::And, operands } => operands.iter().flat_map(Formula::conjuncts).collect(),
            _ => vec![self],
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self, PrettyOptions::default()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HolError {
    #[error("NotAProposition: {0}")]
    NotAProposition(String),
    #[error("UnsortableTerm: {0}")]
    UnsortableTerm(String),
    #[error("restrictor did not normalise: {0}")]
    Reduce(#[from] ReduceError),
}

/// A restrictor waiting to be asserted, with the quantified variables it
/// mentions.
struct Pending {
    formula: Formula,
    vars: BTreeSet<String>,
}

struct Reader<'a> {
    sig: &'a Signature,
    inclusions: &'a BTreeSet<String>,
    /// Names of enclosing quantified variables.
    scope: Vec<String>,
    generics: Vec<(Term, HolTerm)>,
    pending: Vec<Pending>,
}

fn vars_of_term(t: &HolTerm, out: &mut BTreeSet<String>) {
    match t {
        HolTerm::Var { name, .. } => {
            out.insert(name.clone());
        }
        HolTerm::FunApp { arg, .. } => vars_of_term(arg, out),
        HolTerm::Generic { name, restrictor: Some(r), .. } => {
            let mut inner = BTreeSet::new();
            vars_of(r, &mut inner);
            inner.remove(name);
            out.extend(inner);
        }
        _ => {}
    }
}

fn vars_of(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Pred { args, .. } => args.iter().for_each(|a| vars_of_term(a, out)),
        Formula::Cmp { left, right, .. } => {
            vars_of_term(left, out);
            vars_of_term(right, out);
        }
        Formula::Conn { operands, .. } => operands.iter().for_each(|o| vars_of(o, out)),
        Formula::Quant { var, body, .. } => {
            let mut inner = BTreeSet::new();
            vars_of(body, &mut inner);
            inner.remove(var);
            out.extend(inner);
        }
    }
}

impl Reader<'_> {
    fn fresh(&self, hint: &str) -> String {
        let taken = |n: &str| {
            self.scope.iter().any(|s| s == n)
                || self.generics.iter().any(|(_, g)| matches!(g, HolTerm::Generic { name, .. } if name == n))
        };
        let mut name = if hint.is_empty() { "x".to_string() } else { hint.to_string() };
        while taken(&name) {
            name.push('\'');
        }
        name
    }

    fn formula(&mut self, t: &Term) -> Result<Formula, HolError> {
        let (head, args) = t.spine();
        let terms: Vec<&Term> =
            args.iter().filter_map(|a| if let Arg::Term(x) = a { Some(*x) } else { None }).collect();
        let types: Vec<&Type> =
            args.iter().filter_map(|a| if let Arg::Type(x) = a { Some(*x) } else { None }).collect();
        let leading_types = args.iter().take_while(|a| matches!(a, Arg::Type(_))).count();
        if leading_types != types.len() {
            return Err(HolError::UnsortableTerm(t.to_string()));
        }
        let (name, ty) = match head {
            Term::Const { name, ty } | Term::Free { name, ty } => (name.as_str(), ty),
            _ => return Err(HolError::NotAProposition(t.to_string())),
        };
        let is_const = matches!(head, Term::Const { .. });
        let connective = match name {
            AND => Some(Connective::And),
            OR => Some(Connective::Or),
            IMPLIES => Some(Connective::Implies),
            NOT => Some(Connective::Not),
            _ => None,
        };
        if let (true, Some(kind)) = (is_const, connective) {
            let arity = if kind == Connective::Not { 1 } else { 2 };
            if terms.len() != arity || !types.is_empty() {
                return Err(HolError::NotAProposition(t.to_string()));
            }
            let operands = terms.iter().map(|x| self.formula(x)).collect::<Result<_, _>>()?;
            return Ok(Formula::Conn { kind, operands });
        }
        let quant = match name {
            FORALL => Some(Quantifier::Forall),
            EXISTS => Some(Quantifier::Exists),
            _ => None,
        };
        if let (true, Some(kind)) = (is_const, quant) {
            let ([sort], [p]) = (types.as_slice(), terms.as_slice()) else {
                return Err(HolError::NotAProposition(t.to_string()));
            };
            let sort = (*sort).clone();
            let hint = match p {
                Term::Abs { hint, .. } => hint.as_str(),
                _ => "x",
            };
            let var = self.fresh(hint);
            let x = Term::free(var.clone(), sort.clone());
            let body_term = match p {
                Term::Abs { body, .. } => body.open_term(&x),
                _ => Term::app((*p).clone(), x),
            };
            self.scope.push(var.clone());
            let body = self.formula(&body_term);
            self.scope.pop();
            let mut body = body?;
            let (mine, rest): (Vec<_>, Vec<_>) =
                std::mem::take(&mut self.pending).into_iter().partition(|p| p.vars.contains(&var));
            self.pending = rest;
            if !mine.is_empty() {
                let mut ops: Vec<Formula> = mine.into_iter().map(|p| p.formula).collect();
                ops.push(body);
                body = Formula::and(ops);
            }
            return Ok(Formula::Quant { kind, var, sort, body: Box::new(body) });
        }
        let cmp = match name {
            "lt" => Some(Comparison::Lt),
            "leq" => Some(Comparison::Leq),
            _ => None,
        };
        if let (true, Some(kind), [l, r]) = (is_const, cmp, terms.as_slice()) {
            return Ok(Formula::Cmp { kind, left: self.term(l)?, right: self.term(r)? });
        }

        // An ordinary predicate: specialise its type, then read the domains.
        if is_const && self.sig.get(name).is_some_and(|d| d != ty) {
            return Err(HolError::UnsortableTerm(t.to_string()));
        }
        let mut inst = ty.clone();
        for a in &types {
            inst = inst.instantiate(a).ok_or_else(|| HolError::UnsortableTerm(t.to_string()))?;
        }
        let mut sorts = Vec::new();
        for _ in &terms {
            let (dom, cod) = inst.as_arrow().ok_or_else(|| HolError::NotAProposition(t.to_string()))?;
            sorts.push(dom.clone());
            inst = cod.clone();
        }
        if !inst.is_prop() {
            return Err(HolError::NotAProposition(t.to_string()));
        }
        let args = terms.iter().map(|x| self.term(x)).collect::<Result<_, _>>()?;
        Ok(Formula::Pred { name: name.to_string(), sorts, args })
    }

    fn term(&mut self, t: &Term) -> Result<HolTerm, HolError> {
        let unsortable = || HolError::UnsortableTerm(t.to_string());
        match t {
            Term::Const { name, ty } if ty.as_entity().is_some() => {
                Ok(HolTerm::Individual { name: name.clone(), sort: ty.clone() })
            }
            Term::Free { name, ty } => Ok(HolTerm::Var { name: name.clone(), sort: ty.clone() }),
            Term::TyApp(f, sort) => match &**f {
                Term::Const { name, .. } if name == SPECIMEN => Ok(HolTerm::Generic {
                    name: format!("⪍_{sort}"),
                    sort: sort.clone(),
                    origin: Origin::Bare,
                    restrictor: None,
                }),
                _ => Err(unsortable()),
            },
            Term::App(f, a) => match &**f {
                Term::TyApp(g, sort) => match &**g {
                    Term::Const { name, .. } if name == SPECIMEN_OF || name == IOTA => {
                        let origin = if name == IOTA { Origin::Choice } else { Origin::Restricted };
                        self.generic(t, sort, a, origin)
                    }
                    _ => Err(unsortable()),
                },
                Term::Const { name, ty } => {
                    let (_, cod) = ty.as_arrow().ok_or_else(unsortable)?;
                    if cod.as_entity().is_none() {
                        return Err(unsortable());
                    }
                    Ok(HolTerm::FunApp {
                        morphism: name.clone(),
                        sort: cod.clone(),
                        arg: Box::new(self.term(a)?),
                        inclusion: self.inclusions.contains(name),
                    })
                }
                _ => Err(unsortable()),
            },
            _ => Err(unsortable()),
        }
    }

    fn generic(&mut self, whole: &Term, sort: &Type, restrictor: &Term, origin: Origin) -> Result<HolTerm, HolError> {
        if let Some((_, g)) = self.generics.iter().find(|(k, _)| k == whole) {
            return Ok(g.clone());
        }
        let base = match origin {
            Origin::Choice => "c",
            _ => "s",
        };
        let mut name = base.to_string();
        let mut k = 0;
        let taken = |n: &str, r: &Reader| {
            r.scope.iter().any(|s| s == n)
                || r.generics.iter().any(|(_, g)| matches!(g, HolTerm::Generic { name, .. } if name == n))
        };
        while taken(&name, self) {
            k += 1;
            name = format!("{base}{k}");
        }
        let applied = normalize(&Term::app(restrictor.clone(), Term::free(name.clone(), sort.clone())), DEFAULT_FUEL)?;
        // Reserve the name before reading the restrictor, which may mention
        // further generics.
        let placeholder = HolTerm::Generic { name: name.clone(), sort: sort.clone(), origin, restrictor: None };
        self.generics.push((whole.clone(), placeholder));
        self.scope.push(name.clone());
        let r = self.formula(&applied.term);
        self.scope.pop();
        let r = r?;
        let g =
            HolTerm::Generic { name: name.clone(), sort: sort.clone(), origin, restrictor: Some(Box::new(r.clone())) };
        if let Some(slot) = self.generics.iter_mut().find(|(k, _)| k == whole) {
            slot.1 = g.clone();
        }
        if origin == Origin::Restricted {
            let mut vars = BTreeSet::new();
            vars_of(&r, &mut vars);
            vars.remove(&name);
            self.pending.push(Pending { formula: r, vars });
        }
        Ok(g)
    }
}

/// Reads a closed normal term of sort `t` as a formula. `inclusions` names
/// the morphisms that come from the ontology rather than the lexicon.
pub fn term_to_formula(term: &Term, sig: &Signature, inclusions: &BTreeSet<String>) -> Result<Formula, HolError> {
    let mut r = Reader { sig, inclusions, scope: Vec::new(), generics: Vec::new(), pending: Vec::new() };
    let matrix = r.formula(term)?;
    if r.pending.is_empty() {
        return Ok(matrix);
    }
    let mut ops: Vec<Formula> = r.pending.into_iter().map(|p| p.formula).collect();
    ops.push(matrix);
    Ok(Formula::and(ops))
}

/// The formula of a reading. Restrictors of restricted specimens are
/// asserted as extra conjuncts.
pub fn to_formula(reading: &Reading, sig: &Signature) -> Result<Formula, HolError> {
    let inclusions =
        reading.trace.iter().filter(|u| u.kind == CoercionKind::Inclusion).map(|u| u.coercion.clone()).collect();
    term_to_formula(&reading.term, sig, &inclusions)
}

/// The generic elements of a formula, each once, in order of appearance.
pub fn generics(f: &Formula) -> Vec<&HolTerm> {
    fn term<'a>(t: &'a HolTerm, out: &mut Vec<&'a HolTerm>) {
        match t {
            HolTerm::Generic { restrictor, .. } => {
                if !out.contains(&t) {
                    out.push(t);
                }
                if let Some(r) = restrictor {
                    formula(r, out);
                }
            }
            HolTerm::FunApp { arg, .. } => term(arg, out),
            _ => {}
        }
    }
    fn formula<'a>(f: &'a Formula, out: &mut Vec<&'a HolTerm>) {
        match f {
            Formula::Pred { args, .. } => args.iter().for_each(|a| term(a, out)),
            Formula::Cmp { left, right, .. } => {
                term(left, out);
                term(right, out);
            }
            Formula::Conn { operands, .. } => operands.iter().for_each(|o| formula(o, out)),
            Formula::Quant { body, .. } => formula(body, out),
        }
    }
    let mut out = Vec::new();
    formula(f, &mut out);
    out
}
