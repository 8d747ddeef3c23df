//! Named s-expression syntax for types and terms.
//!
//! Types: `t`, a sort name, a type variable, `(-> A B)` (n-ary arrows
//! associate to the right), `(pi X T)`.
//! Terms: `x`, `(const name)`, `(lam x A body)`, `(tlam X body)`,
//! `(app f a)`, `(tapp f A)`, and the application sugar `(f a {A} b)`.
//!
//! In type position an identifier bound by an enclosing `pi`/`tlam` wins
//! over a sort of the same name; an identifier that is neither is a free
//! type variable.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::check::Env;
use super::signature::Signature;
use super::term::Term;
use super::types::{Type, PROP};
use crate::sexpr::{self, Pos, Sexp, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: UnboundVariable: `{name}`")]
    UnboundVariable { name: String, pos: Pos },
    #[error("{pos}: UnknownConstant: `{name}`")]
    UnknownConstant { name: String, pos: Pos },
}

fn malformed(x: &Sexp, msg: impl Into<String>) -> SurfaceError {
    SurfaceError::Syntax(SyntaxError::new(x.pos(), msg))
}

/// Elaborates a type, keeping every non-sort identifier as a named `Var`.
/// `scope` lists enclosing type binders; a scoped name always stays a `Var`
/// even when a sort of the same name exists.
fn named_type(x: &Sexp, sig: Option<&Signature>, scope: &mut Vec<String>) -> Result<Type, SurfaceError> {
    match x {
        Sexp::Atom(a, _) => {
            if scope.iter().any(|s| s == a) {
                Ok(Type::var(a.clone()))
            } else if a == PROP || sig.is_none_or(|s| s.has_sort(a)) {
                Ok(Type::base(a.clone()))
            } else {
                Ok(Type::var(a.clone()))
            }
        }
        Sexp::List(items, _) => match items.first().and_then(Sexp::as_atom) {
            Some("->") if items.len() >= 3 => {
                let mut parts = items[1..].iter().map(|i| named_type(i, sig, scope)).collect::<Result<Vec<_>, _>>()?;
                let mut acc = parts.pop().unwrap();
                while let Some(dom) = parts.pop() {
                    acc = Type::arrow(dom, acc);
                }
                Ok(acc)
            }
            Some("pi") if items.len() == 3 => {
                let binder = items[1].expect_atom("type variable")?.to_string();
                scope.push(binder.clone());
                let body = named_type(&items[2], sig, scope);
                scope.pop();
                Ok(Type::forall(&binder, body?))
            }
            _ => Err(malformed(x, format!("malformed type `{x}`"))),
        },
        Sexp::Brace(..) => Err(malformed(x, "unexpected `{` in type")),
    }
}

/// Elaborates a closed-scope type. Without a signature every identifier
/// other than a bound one is read as a sort.
pub fn type_from_sexp(x: &Sexp, sig: Option<&Signature>) -> Result<Type, SurfaceError> {
    named_type(x, sig, &mut Vec::new())
}

pub fn parse_type(src: &str, sig: &Signature) -> Result<Type, SurfaceError> {
    type_from_sexp(&sexpr::parse_one(src)?, Some(sig))
}

struct Elaborator<'a> {
    sig: &'a Signature,
    env: &'a Env,
    terms: Vec<(String, Type)>,
    types: Vec<String>,
}

impl Elaborator<'_> {
    fn ty(&mut self, x: &Sexp) -> Result<Type, SurfaceError> {
        named_type(x, Some(self.sig), &mut self.types)
    }

    fn term(&mut self, x: &Sexp) -> Result<Term, SurfaceError> {
        match x {
            Sexp::Atom(name, pos) => {
                if let Some(i) = self.terms.iter().rev().position(|(n, _)| n == name) {
                    let named = &self.terms[self.terms.len() - 1 - i].1;
                    return Ok(Term::Bound { index: i, ty: named.bind_names(&self.types) });
                }
                match self.env.get(name) {
                    Some(ty) => Ok(Term::free(name.clone(), ty.bind_names(&self.types))),
                    None => Err(SurfaceError::UnboundVariable { name: name.clone(), pos: *pos }),
                }
            }
            Sexp::Brace(..) => Err(malformed(x, "type argument `{...}` outside an application")),
            Sexp::List(items, _) => {
                let head = items.first().and_then(Sexp::as_atom);
                match (head, items.len()) {
                    (Some("const"), 2) => {
                        let name = items[1].expect_atom("constant name")?;
                        match self.sig.get(name) {
                            Some(ty) => Ok(Term::constant(name, ty.clone())),
                            None => Err(SurfaceError::UnknownConstant { name: name.to_string(), pos: items[1].pos() }),
                        }
                    }
                    (Some("lam"), 4) => {
                        let binder = items[1].expect_atom("variable")?.to_string();
                        let named = self.ty(&items[2])?;
                        let ty = named.bind_names(&self.types);
                        self.terms.push((binder.clone(), named));
                        let body = self.term(&items[3]);
                        self.terms.pop();
                        Ok(Term::Abs { hint: binder, ty, body: Box::new(body?) })
                    }
                    (Some("tlam"), 3) => {
                        let binder = items[1].expect_atom("type variable")?.to_string();
                        self.types.push(binder.clone());
                        let body = self.term(&items[2]);
                        self.types.pop();
                        Ok(Term::TyAbs { hint: binder, body: Box::new(body?) })
                    }
                    (Some("app"), 3) => Ok(Term::app(self.term(&items[1])?, self.term(&items[2])?)),
                    (Some("tapp"), 3) => {
                        let f = self.term(&items[1])?;
                        let ty = self.ty(&items[2])?.bind_names(&self.types);
                        Ok(Term::ty_app(f, ty))
                    }
                    (Some("const" | "lam" | "tlam" | "app" | "tapp"), _) => {
                        Err(malformed(x, format!("wrong number of parts in `{x}`")))
                    }
                    (_, 0) => Err(malformed(x, "empty application")),
                    (_, 1) => Err(malformed(x, "application without arguments")),
                    _ => {
                        let mut acc = self.term(&items[0])?;
                        for item in &items[1..] {
                            acc = match item {
                                Sexp::Brace(inner, _) if inner.len() == 1 => {
                                    let ty = self.ty(&inner[0])?.bind_names(&self.types);
                                    Term::ty_app(acc, ty)
                                }
                                Sexp::Brace(..) => return Err(malformed(item, "expected one type in `{...}`")),
                                _ => Term::app(acc, self.term(item)?),
                            };
                        }
                        Ok(acc)
                    }
                }
            }
        }
    }
}

/// Elaborates a term. Constants get their declared types; free variables
/// must be typed by `env`.
pub fn term_from_sexp(x: &Sexp, sig: &Signature, env: &Env) -> Result<Term, SurfaceError> {
    Elaborator { sig, env, terms: Vec::new(), types: Vec::new() }.term(x)
}

pub fn parse_term(src: &str, sig: &Signature, env: &Env) -> Result<Term, SurfaceError> {
    term_from_sexp(&sexpr::parse_one(src)?, sig, env)
}

fn fresh(hint: &str, avoid: &BTreeSet<String>, scope: &[String]) -> String {
    let mut name = hint.to_string();
    while avoid.contains(&name) || scope.contains(&name) {
        name.push('\'');
    }
    name
}

struct Printer {
    /// Names a type binder must not take: free type variables and sorts.
    type_avoid: BTreeSet<String>,
    /// Names a term binder must not take: free term variables.
    term_avoid: BTreeSet<String>,
    types: Vec<String>,
    terms: Vec<String>,
}

impl Printer {
    fn for_type(ty: &Type) -> Self {
        let mut vars = BTreeSet::new();
        let mut bases = BTreeSet::new();
        ty.collect_names(&mut vars, &mut bases);
        vars.extend(bases);
        Printer { type_avoid: vars, term_avoid: BTreeSet::new(), types: Vec::new(), terms: Vec::new() }
    }

    fn for_term(term: &Term) -> Self {
        let mut vars = BTreeSet::new();
        let mut bases = BTreeSet::new();
        term.walk(&mut |t| match t {
            Term::Bound { ty, .. } | Term::Free { ty, .. } | Term::Const { ty, .. } | Term::Abs { ty, .. } => {
                ty.collect_names(&mut vars, &mut bases)
            }
            Term::TyApp(_, ty) => ty.collect_names(&mut vars, &mut bases),
            _ => {}
        });
        vars.extend(bases);
        Printer { type_avoid: vars, term_avoid: term.free_vars(), types: Vec::new(), terms: Vec::new() }
    }

    fn ty(&mut self, ty: &Type, out: &mut String) {
        match ty {
            Type::Base(n) | Type::Var(n) => out.push_str(n),
            Type::Bound(i) => match self.types.len().checked_sub(i + 1) {
                Some(j) => out.push_str(&self.types[j]),
                None => out.push_str(&format!("#{}", i - self.types.len())),
            },
            Type::Arrow(a, b) => {
                out.push_str("(-> ");
                self.ty(a, out);
                out.push(' ');
                self.ty(b, out);
                out.push(')');
            }
            Type::Forall(h, b) => {
                let name = fresh(h, &self.type_avoid, &self.types);
                out.push_str("(pi ");
                out.push_str(&name);
                out.push(' ');
                self.types.push(name);
                self.ty(b, out);
                self.types.pop();
                out.push(')');
            }
        }
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Bound { index, .. } => match self.terms.len().checked_sub(index + 1) {
                Some(j) => out.push_str(&self.terms[j]),
                None => out.push_str(&format!("#{}", index - self.terms.len())),
            },
            Term::Free { name, .. } => out.push_str(name),
            Term::Const { name, .. } => {
                out.push_str("(const ");
                out.push_str(name);
                out.push(')');
            }
            Term::Abs { hint, ty, body } => {
                let name = fresh(hint, &self.term_avoid, &self.terms);
                out.push_str("(lam ");
                out.push_str(&name);
                out.push(' ');
                self.ty(ty, out);
                out.push(' ');
                self.terms.push(name);
                self.term(body, out);
                self.terms.pop();
                out.push(')');
            }
            Term::TyAbs { hint, body } => {
                let name = fresh(hint, &self.type_avoid, &self.types);
                out.push_str("(tlam ");
                out.push_str(&name);
                out.push(' ');
                self.types.push(name);
                self.term(body, out);
                self.types.pop();
                out.push(')');
            }
            Term::App(..) | Term::TyApp(..) => {
                let (head, args) = t.spine();
                out.push('(');
                self.term(head, out);
                for arg in args {
                    out.push(' ');
                    match arg {
                        super::term::Arg::Term(a) => self.term(a, out),
                        super::term::Arg::Type(ty) => {
                            out.push('{');
                            self.ty(ty, out);
                            out.push('}');
                        }
                    }
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        Printer::for_type(self).ty(self, &mut out);
        f.write_str(&out)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        Printer::for_term(self).term(self, &mut out);
        f.write_str(&out)
    }
}
