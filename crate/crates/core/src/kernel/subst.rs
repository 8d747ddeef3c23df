use super::check::{type_of, Env, TypeError};
use super::signature::Signature;
use super::term::Term;
use super::types::Type;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("TypeMismatch: `{var}` has type {expected} but the replacement has type {found}")]
    TypeMismatch { var: String, expected: Type, found: Type },
    #[error("replacement is ill-typed: {0}")]
    IllTyped(#[from] TypeError),
}

/// `body[var := replacement]` for a free term variable.
///
/// Every occurrence of `var` must be annotated with the replacement's type.
pub fn subst_term(body: &Term, var: &str, replacement: &Term, sig: &Signature, env: &Env) -> Result<Term, SubstError> {
    let found = type_of(replacement, sig, env)?;
    let mut mismatch = None;
    body.for_each_free(&mut |name, ty, tdepth| {
        if name != var || mismatch.is_some() {
            return;
        }
        let escapes = ty.mentions_escaping(0, tdepth).is_some();
        if escapes || ty.shift(-(tdepth as isize), 0) != found {
            mismatch = Some(ty.clone());
        }
    });
    if let Some(expected) = mismatch {
        return Err(SubstError::TypeMismatch { var: var.to_string(), expected, found });
    }
    Ok(body.replace_free(var, replacement))
}

/// Capture-avoiding substitution of a free type variable.
pub trait SubstType {
    fn subst_type(&self, var: &str, replacement: &Type) -> Self;
}

impl SubstType for Type {
    fn subst_type(&self, var: &str, replacement: &Type) -> Type {
        self.subst_var(var, replacement)
    }
}

impl SubstType for Term {
    fn subst_type(&self, var: &str, replacement: &Type) -> Term {
        self.map_types(&|t, d| t.subst_var_at(var, replacement, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::surface::parse_term;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_sort("A");
        s.add_sort("Book");
        s.declare("c", Type::base("A")).unwrap();
        s
    }

    #[test]
    fn variable_replaced_by_constant() {
        let s = sig();
        let env = Env::from([("x".to_string(), Type::base("A"))]);
        let x = parse_term("x", &s, &env).unwrap();
        let c = parse_term("(const c)", &s, &env).unwrap();
        assert_eq!(subst_term(&x, "x", &c, &s, &env).unwrap(), c);
    }

    #[test]
    fn substitution_under_binder_avoids_capture() {
        let s = sig();
        let env = Env::from([("x".to_string(), Type::base("A")), ("y".to_string(), Type::base("A"))]);
        let body = parse_term("(lam y A x)", &s, &env).unwrap();
        let y = parse_term("y", &s, &env).unwrap();
        let out = subst_term(&body, "x", &y, &s, &env).unwrap();
        assert_eq!(out.to_string(), "(lam y' A y)");
        // The result is not the identity.
        assert_ne!(out, parse_term("(lam y A y)", &s, &env).unwrap());
    }

    #[test]
    fn mismatched_replacement_is_rejected() {
        let s = sig();
        let env = Env::from([("x".to_string(), Type::base("Book"))]);
        let body = parse_term("x", &s, &env).unwrap();
        let c = parse_term("(const c)", &s, &env).unwrap();
        assert!(matches!(subst_term(&body, "x", &c, &s, &env), Err(SubstError::TypeMismatch { .. })));
    }

    #[test]
    fn type_substitution_in_terms() {
        let s = sig();
        let env = Env::from([("x".to_string(), Type::var("X"))]);
        let t = parse_term("(lam y X x)", &s, &env).unwrap();
        let out = t.subst_type("X", &Type::base("Book"));
        let env2 = Env::from([("x".to_string(), Type::base("Book"))]);
        assert_eq!(out, parse_term("(lam y Book x)", &s, &env2).unwrap());
        assert_eq!(
            Type::arrow(Type::var("X"), Type::prop()).subst_type("X", &Type::base("Book")),
            Type::arrow(Type::base("Book"), Type::prop())
        );
    }
}
