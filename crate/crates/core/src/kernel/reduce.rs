use thiserror::Error;

use super::check::{type_of, Env, TypeError};
use super::signature::Signature;
use super::term::Term;

pub const DEFAULT_FUEL: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("IllTyped: {0}")]
    IllTyped(#[from] TypeError),
    #[error("FuelExhausted after {steps} steps")]
    FuelExhausted { steps: usize },
}

/// Contracts `term` itself if it is a β-redex or a type β-redex.
pub fn contract(term: &Term) -> Option<Term> {
    match term {
        Term::App(f, a) => match &**f {
            Term::Abs { body, .. } => Some(body.open_term(a)),
            _ => None,
        },
        Term::TyApp(f, ty) => match &**f {
            Term::TyAbs { body, .. } => Some(body.open_type(ty)),
            _ => None,
        },
        _ => None,
    }
}

/// One leftmost-outermost reduction step, or `None` when `term` is normal.
pub fn reduce_step(term: &Term) -> Option<Term> {
    if let Some(r) = contract(term) {
        return Some(r);
    }
    match term {
        Term::App(f, a) => match reduce_step(f) {
            Some(f2) => Some(Term::App(Box::new(f2), a.clone())),
            None => reduce_step(a).map(|a2| Term::App(f.clone(), Box::new(a2))),
        },
        Term::TyApp(f, ty) => reduce_step(f).map(|f2| Term::TyApp(Box::new(f2), ty.clone())),
        Term::Abs { hint, ty, body } => {
            reduce_step(body).map(|b| Term::Abs { hint: hint.clone(), ty: ty.clone(), body: Box::new(b) })
        }
        Term::TyAbs { hint, body } => reduce_step(body).map(|b| Term::TyAbs { hint: hint.clone(), body: Box::new(b) }),
        _ => None,
    }
}

pub fn is_normal(term: &Term) -> bool {
    let mut normal = true;
    term.walk(&mut |t| {
        if contract(t).is_some() {
            normal = false;
        }
    });
    normal
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub steps: usize,
}

/// Reduces to normal form with at most `fuel` steps.
///
/// System F is strongly normalising, so running out of fuel means either a
/// pathological input or a bug.
pub fn normalize(term: &Term, fuel: usize) -> Result<Normalized, ReduceError> {
    let mut cur = term.clone();
    let mut steps = 0;
    while let Some(next) = reduce_step(&cur) {
        if steps == fuel {
            return Err(ReduceError::FuelExhausted { steps });
        }
        cur = next;
        steps += 1;
    }
    Ok(Normalized { term: cur, steps })
}

/// Type-checks, then normalises. Types are never re-checked during
/// reduction.
pub fn normalize_checked(term: &Term, sig: &Signature, env: &Env, fuel: usize) -> Result<Normalized, ReduceError> {
    type_of(term, sig, env)?;
    normalize(term, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::types::Type;

    fn e() -> Type {
        Type::base("e")
    }

    #[test]
    fn beta_on_identity() {
        let c = Term::constant("c", e());
        let redex = Term::app(Term::lam("x", e(), Term::free("x", e())), c.clone());
        assert_eq!(reduce_step(&redex), Some(c.clone()));
        let n = normalize(&redex, 10).unwrap();
        assert_eq!(n.steps, 1);
        assert_eq!(normalize(&c, 10).unwrap(), Normalized { term: c, steps: 0 });
    }

    #[test]
    fn type_beta() {
        let x = Type::var("X");
        let poly = Term::tlam("X", Term::lam("x", x.clone(), Term::free("x", x)));
        let r = reduce_step(&Term::ty_app(poly, Type::base("Book"))).unwrap();
        assert_eq!(r, Term::lam("x", Type::base("Book"), Term::free("x", Type::base("Book"))));
    }

    #[test]
    fn leftmost_outermost_order() {
        // (λx. c) ((λy. y) c): the outer redex goes first and discards the inner one.
        let c = Term::constant("c", e());
        let inner = Term::app(Term::lam("y", e(), Term::free("y", e())), c.clone());
        let outer = Term::app(Term::lam("x", e(), c.clone()), inner);
        assert_eq!(reduce_step(&outer), Some(c));
    }

    #[test]
    fn fuel_is_enforced() {
        let c = Term::constant("c", e());
        let id = Term::lam("x", e(), Term::free("x", e()));
        let t = Term::app(id.clone(), Term::app(id, c));
        assert_eq!(normalize(&t, 1), Err(ReduceError::FuelExhausted { steps: 1 }));
        assert_eq!(normalize(&t, 2).unwrap().steps, 2);
    }
}
