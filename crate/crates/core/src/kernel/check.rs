use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::signature::Signature;
use super::term::Term;
use super::types::Type;

/// Types of the free term variables.
pub type Env = BTreeMap<String, Type>;

/// Position of a subterm: `0` descends into the function of an application,
/// the body of a binder or the term of a type application; `1` descends
/// into the argument of an application.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermPath(pub Vec<u8>);

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("UnboundVariable: `{0}`")]
    UnboundVariable(String),
    #[error("UnknownConstant: `{0}`")]
    UnknownConstant(String),
    #[error("constant `{name}` is annotated {found} but declared {declared}")]
    ConstantTypeMismatch { name: String, declared: Type, found: Type },
    #[error("variable `{name}` is annotated {found} but bound at {expected}")]
    VariableTypeMismatch { name: String, expected: Type, found: Type },
    #[error("ApplicationMismatch: expected {expected}, found {found}")]
    ApplicationMismatch { expected: Type, found: Type },
    #[error("cannot apply a term of type {0}")]
    NotAFunction(Type),
    #[error("SpecialisationOfNonPi: term of type {0} applied to a type")]
    SpecialisationOfNonPi(Type),
    #[error("GeneralisationViolation: `{variable}` occurs in the type of free variable `{free_var}`")]
    GeneralisationViolation { variable: String, free_var: String },
    #[error("dangling index #{0}")]
    DanglingIndex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} (at term path {path})")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: TermPath,
}

struct Checker<'a> {
    sig: &'a Signature,
    env: &'a Env,
    /// Term binders: hint, type, number of type binders open at the binder.
    terms: Vec<(&'a str, &'a Type, usize)>,
    /// Type binder hints, innermost last.
    types: Vec<&'a str>,
    path: Vec<u8>,
}

impl<'a> Checker<'a> {
    fn fail(&self, kind: TypeErrorKind) -> TypeError {
        TypeError { kind, path: TermPath(self.path.clone()) }
    }

    fn well_scoped(&self, ty: &Type) -> Result<(), TypeError> {
        let reach = ty.escape_depth();
        if reach > self.types.len() {
            return Err(self.fail(TypeErrorKind::DanglingIndex(reach - 1)));
        }
        Ok(())
    }

    /// Checks an occurrence annotation against the binding type. `crossed`
    /// type abstractions lie between the binding point and the occurrence.
    fn occurrence(&self, name: &str, annotated: &Type, binding: &Type, crossed: usize) -> Result<(), TypeError> {
        self.well_scoped(annotated)?;
        if let Some(level) = annotated.mentions_escaping(0, crossed) {
            let variable = self.types[self.types.len() - 1 - level].to_string();
            return Err(self.fail(TypeErrorKind::GeneralisationViolation { variable, free_var: name.to_string() }));
        }
        let expected = binding.shift(crossed as isize, 0);
        if *annotated != expected {
            return Err(self.fail(TypeErrorKind::VariableTypeMismatch {
                name: name.to_string(),
                expected,
                found: annotated.clone(),
            }));
        }
        Ok(())
    }

    fn check(&mut self, term: &'a Term) -> Result<Type, TypeError> {
        match term {
            Term::Const { name, ty } => {
                let declared =
                    self.sig.get(name).ok_or_else(|| self.fail(TypeErrorKind::UnknownConstant(name.clone())))?;
                if declared != ty {
                    return Err(self.fail(TypeErrorKind::ConstantTypeMismatch {
                        name: name.clone(),
                        declared: declared.clone(),
                        found: ty.clone(),
                    }));
                }
                Ok(ty.clone())
            }
            Term::Free { name, ty } => {
                let bound =
                    self.env.get(name).ok_or_else(|| self.fail(TypeErrorKind::UnboundVariable(name.clone())))?;
                self.occurrence(name, ty, bound, self.types.len())?;
                Ok(ty.clone())
            }
            Term::Bound { index, ty } => {
                let Some(&(hint, bty, at)) = self.terms.len().checked_sub(index + 1).map(|i| &self.terms[i]) else {
                    return Err(self.fail(TypeErrorKind::DanglingIndex(*index)));
                };
                self.occurrence(hint, ty, bty, self.types.len() - at)?;
                Ok(ty.clone())
            }
            Term::App(f, a) => {
                self.path.push(0);
                let tf = self.check(f)?;
                self.path.pop();
                self.path.push(1);
                let ta = self.check(a)?;
                self.path.pop();
                match tf {
                    Type::Arrow(dom, cod) => {
                        if *dom != ta {
                            return Err(self.fail(TypeErrorKind::ApplicationMismatch { expected: *dom, found: ta }));
                        }
                        Ok(*cod)
                    }
                    other => Err(self.fail(TypeErrorKind::NotAFunction(other))),
                }
            }
            Term::Abs { hint, ty, body } => {
                self.well_scoped(ty)?;
                self.terms.push((hint, ty, self.types.len()));
                self.path.push(0);
                let tb = self.check(body);
                self.path.pop();
                self.terms.pop();
                Ok(Type::arrow(ty.clone(), tb?))
            }
            Term::TyApp(f, arg) => {
                self.well_scoped(arg)?;
                self.path.push(0);
                let tf = self.check(f)?;
                self.path.pop();
                tf.instantiate(arg).ok_or_else(|| self.fail(TypeErrorKind::SpecialisationOfNonPi(tf.clone())))
            }
            Term::TyAbs { hint, body } => {
                self.types.push(hint);
                self.path.push(0);
                let tb = self.check(body);
                self.path.pop();
                self.types.pop();
                Ok(Type::Forall(hint.clone(), Box::new(tb?)))
            }
        }
    }
}

/// Computes the type of `term`.
///
/// A type abstraction `ΛX.u` is rejected when `X` occurs in the type of a
/// variable that is free in `u`; with annotated occurrences this shows up as
/// an occurrence whose annotation refers to a type binder that lies between
/// the occurrence and the variable's binding point.
pub fn type_of(term: &Term, sig: &Signature, env: &Env) -> Result<Type, TypeError> {
    let mut checker = Checker { sig, env, terms: Vec::new(), types: Vec::new(), path: Vec::new() };
    checker.check(term)
}
