use std::collections::BTreeSet;

use super::types::Type;

/// A System F term in locally nameless form with Church-style annotations.
///
/// Term variables bound by `Abs` are de Bruijn indices (`Bound`); free
/// variables are named (`Free`). Every variable occurrence carries its type
/// as written at the occurrence, so a type abstraction placed over an
/// occurrence binds the type variables in that annotation too; this is what
/// makes the generalisation side condition observable. Type annotations use
/// the index discipline of [`Type`], with enclosing `TyAbs` binders counted
/// after a type's own `Forall`s.
///
/// Binder names are hints for printing; `==` is alpha-equivalence.
#[derive(Clone, Debug)]
pub enum Term {
    Bound { index: usize, ty: Type },
    Free { name: String, ty: Type },
    Const { name: String, ty: Type },
    App(Box<Term>, Box<Term>),
    Abs { hint: String, ty: Type, body: Box<Term> },
    TyApp(Box<Term>, Type),
    TyAbs { hint: String, body: Box<Term> },
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Bound { index: i, ty: a }, Bound { index: j, ty: b }) => i == j && a == b,
            (Free { name: n, ty: a }, Free { name: m, ty: b })
            | (Const { name: n, ty: a }, Const { name: m, ty: b }) => n == m && a == b,
            (App(f1, a1), App(f2, a2)) => f1 == f2 && a1 == a2,
            (Abs { ty: t1, body: b1, .. }, Abs { ty: t2, body: b2, .. }) => t1 == t2 && b1 == b2,
            (TyApp(f1, t1), TyApp(f2, t2)) => f1 == f2 && t1 == t2,
            (TyAbs { body: b1, .. }, TyAbs { body: b2, .. }) => b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Term {}

/// Alpha-equivalence on terms or types.
pub fn alpha_eq<T: PartialEq>(a: &T, b: &T) -> bool {
    a == b
}

impl Term {
    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const { name: name.into(), ty }
    }

    pub fn free(name: impl Into<String>, ty: Type) -> Term {
        Term::Free { name: name.into(), ty }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn ty_app(f: Term, ty: Type) -> Term {
        Term::TyApp(Box::new(f), ty)
    }

    /// `λname:ty. body`, binding free occurrences of `name` in `body`.
    pub fn lam(name: &str, ty: Type, body: Term) -> Term {
        Term::Abs { hint: name.to_string(), ty, body: Box::new(body.close_term(name, 0)) }
    }

    /// `ΛX. body`, binding the free type variable `name` throughout `body`,
    /// including in the annotations of free variable occurrences.
    pub fn tlam(name: &str, body: Term) -> Term {
        Term::TyAbs { hint: name.to_string(), body: Box::new(body.close_type(name, 0)) }
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<Arg<'_>>) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Term::App(f, a) => {
                    args.push(Arg::Term(a));
                    cur = f;
                }
                Term::TyApp(f, t) => {
                    args.push(Arg::Type(t));
                    cur = f;
                }
                _ => break,
            }
        }
        args.reverse();
        (cur, args)
    }

    /// Shifts free term indices at or above `cutoff`.
    pub fn shift_terms(&self, delta: isize, cutoff: usize) -> Term {
        if delta == 0 {
            return self.clone();
        }
        match self {
            Term::Bound { index, ty } if *index >= cutoff => {
                let j = *index as isize + delta;
                assert!(j >= 0, "term index shifted below zero");
                Term::Bound { index: j as usize, ty: ty.clone() }
            }
            Term::App(f, a) => Term::app(f.shift_terms(delta, cutoff), a.shift_terms(delta, cutoff)),
            Term::Abs { hint, ty, body } => {
                Term::Abs { hint: hint.clone(), ty: ty.clone(), body: Box::new(body.shift_terms(delta, cutoff + 1)) }
            }
            Term::TyApp(f, t) => Term::ty_app(f.shift_terms(delta, cutoff), t.clone()),
            Term::TyAbs { hint, body } => {
                Term::TyAbs { hint: hint.clone(), body: Box::new(body.shift_terms(delta, cutoff)) }
            }
            other => other.clone(),
        }
    }

    /// Applies `f` to every type annotation, passing the number of enclosing
    /// type abstractions (within this term) at that annotation.
    pub fn map_types(&self, f: &impl Fn(&Type, usize) -> Type) -> Term {
        self.map_types_at(f, 0)
    }

    fn map_types_at(&self, f: &impl Fn(&Type, usize) -> Type, depth: usize) -> Term {
        match self {
            Term::Bound { index, ty } => Term::Bound { index: *index, ty: f(ty, depth) },
            Term::Free { name, ty } => Term::Free { name: name.clone(), ty: f(ty, depth) },
            Term::Const { name, ty } => Term::Const { name: name.clone(), ty: f(ty, depth) },
            Term::App(a, b) => Term::app(a.map_types_at(f, depth), b.map_types_at(f, depth)),
            Term::Abs { hint, ty, body } => {
                Term::Abs { hint: hint.clone(), ty: f(ty, depth), body: Box::new(body.map_types_at(f, depth)) }
            }
            Term::TyApp(a, t) => Term::ty_app(a.map_types_at(f, depth), f(t, depth)),
            Term::TyAbs { hint, body } => {
                Term::TyAbs { hint: hint.clone(), body: Box::new(body.map_types_at(f, depth + 1)) }
            }
        }
    }

    pub fn shift_types(&self, delta: isize, cutoff: usize) -> Term {
        if delta == 0 {
            return self.clone();
        }
        self.map_types(&|t, d| t.shift(delta, cutoff + d))
    }

    /// Opens the body of a term binder at level `k` with `arg`.
    pub fn open_term(&self, arg: &Term) -> Term {
        self.open_term_at(0, 0, arg)
    }

    fn open_term_at(&self, k: usize, tdepth: usize, arg: &Term) -> Term {
        match self {
            Term::Bound { index, .. } if *index == k => arg.shift_terms(k as isize, 0).shift_types(tdepth as isize, 0),
            Term::Bound { index, ty } if *index > k => Term::Bound { index: index - 1, ty: ty.clone() },
            Term::App(f, a) => Term::app(f.open_term_at(k, tdepth, arg), a.open_term_at(k, tdepth, arg)),
            Term::Abs { hint, ty, body } => {
                Term::Abs { hint: hint.clone(), ty: ty.clone(), body: Box::new(body.open_term_at(k + 1, tdepth, arg)) }
            }
            Term::TyApp(f, t) => Term::ty_app(f.open_term_at(k, tdepth, arg), t.clone()),
            Term::TyAbs { hint, body } => {
                Term::TyAbs { hint: hint.clone(), body: Box::new(body.open_term_at(k, tdepth + 1, arg)) }
            }
            other => other.clone(),
        }
    }

    /// Opens the body of a type abstraction with the type `arg`.
    pub fn open_type(&self, arg: &Type) -> Term {
        self.map_types(&|t, d| t.open_at(d, arg))
    }

    fn close_term(&self, name: &str, k: usize) -> Term {
        match self {
            Term::Free { name: n, ty } if n == name => Term::Bound { index: k, ty: ty.clone() },
            Term::Bound { index, ty } if *index >= k => Term::Bound { index: index + 1, ty: ty.clone() },
            Term::App(f, a) => Term::app(f.close_term(name, k), a.close_term(name, k)),
            Term::Abs { hint, ty, body } => {
                Term::Abs { hint: hint.clone(), ty: ty.clone(), body: Box::new(body.close_term(name, k + 1)) }
            }
            Term::TyApp(f, t) => Term::ty_app(f.close_term(name, k), t.clone()),
            Term::TyAbs { hint, body } => Term::TyAbs { hint: hint.clone(), body: Box::new(body.close_term(name, k)) },
            other => other.clone(),
        }
    }

    pub fn close_type(&self, name: &str, k: usize) -> Term {
        self.map_types(&|t, d| t.close_at(name, k + d))
    }

    /// Replaces the free term variable `name` by `replacement` without any
    /// type check. Bound names cannot capture because bound variables are
    /// indices.
    pub fn replace_free(&self, name: &str, replacement: &Term) -> Term {
        self.replace_free_at(name, replacement, 0, 0)
    }

    fn replace_free_at(&self, name: &str, r: &Term, k: usize, tdepth: usize) -> Term {
        match self {
            Term::Free { name: n, .. } if n == name => r.shift_terms(k as isize, 0).shift_types(tdepth as isize, 0),
            Term::App(f, a) => Term::app(f.replace_free_at(name, r, k, tdepth), a.replace_free_at(name, r, k, tdepth)),
            Term::Abs { hint, ty, body } => Term::Abs {
                hint: hint.clone(),
                ty: ty.clone(),
                body: Box::new(body.replace_free_at(name, r, k + 1, tdepth)),
            },
            Term::TyApp(f, t) => Term::ty_app(f.replace_free_at(name, r, k, tdepth), t.clone()),
            Term::TyAbs { hint, body } => {
                Term::TyAbs { hint: hint.clone(), body: Box::new(body.replace_free_at(name, r, k, tdepth + 1)) }
            }
            other => other.clone(),
        }
    }

    /// Visits every occurrence of a free variable with its annotation and
    /// the number of enclosing type abstractions.
    pub(crate) fn for_each_free(&self, f: &mut impl FnMut(&str, &Type, usize)) {
        fn go(t: &Term, f: &mut impl FnMut(&str, &Type, usize), tdepth: usize) {
            match t {
                Term::Free { name, ty } => f(name, ty, tdepth),
                Term::App(a, b) => {
                    go(a, f, tdepth);
                    go(b, f, tdepth);
                }
                Term::Abs { body, .. } => go(body, f, tdepth),
                Term::TyApp(a, _) => go(a, f, tdepth),
                Term::TyAbs { body, .. } => go(body, f, tdepth + 1),
                _ => {}
            }
        }
        go(self, f, 0)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_free(&mut |n, _, _| {
            out.insert(n.to_string());
        });
        out
    }

    /// No free variables and no dangling indices.
    pub fn is_closed(&self) -> bool {
        fn go(t: &Term, k: usize) -> bool {
            match t {
                Term::Bound { index, .. } => *index < k,
                Term::Free { .. } => false,
                Term::Const { .. } => true,
                Term::App(a, b) => go(a, k) && go(b, k),
                Term::Abs { body, .. } => go(body, k + 1),
                Term::TyApp(a, _) => go(a, k),
                Term::TyAbs { body, .. } => go(body, k),
            }
        }
        go(self, 0)
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Const { name, .. } = t {
                out.insert(name.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::App(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Term::Abs { body, .. } | Term::TyAbs { body, .. } => body.walk(f),
            Term::TyApp(a, _) => a.walk(f),
            _ => {}
        }
    }

    /// Number of nodes (types excluded).
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Height of the syntax tree (types excluded); a leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::App(a, b) => 1 + a.depth().max(b.depth()),
            Term::Abs { body, .. } | Term::TyAbs { body, .. } => 1 + body.depth(),
            Term::TyApp(a, _) => 1 + a.depth(),
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Arg<'a> {
    Term(&'a Term),
    Type(&'a Type),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> Type {
        Type::base("e")
    }

    #[test]
    fn lam_binds_by_index() {
        let id = Term::lam("x", e(), Term::free("x", e()));
        assert_eq!(id, Term::Abs { hint: "x".into(), ty: e(), body: Box::new(Term::Bound { index: 0, ty: e() }) });
        let other = Term::lam("z", e(), Term::free("z", e()));
        assert!(alpha_eq(&id, &other));
        let wrong = Term::lam("x", Type::prop(), Term::free("x", Type::prop()));
        assert!(!alpha_eq(&id, &wrong));
    }

    #[test]
    fn tlam_binds_annotations() {
        let poly = Term::tlam("X", Term::lam("x", Type::var("X"), Term::free("x", Type::var("X"))));
        let poly2 = Term::tlam("Y", Term::lam("z", Type::var("Y"), Term::free("z", Type::var("Y"))));
        assert_eq!(poly, poly2);
        let Term::TyAbs { body, .. } = &poly else { panic!() };
        let opened = body.open_type(&e());
        assert_eq!(opened, Term::lam("x", e(), Term::free("x", e())));
    }

    #[test]
    fn open_term_shifts_replacement_under_binders() {
        // (λy:e. x) with x := a term that itself uses an outer index.
        let body = Term::Abs { hint: "y".into(), ty: e(), body: Box::new(Term::Bound { index: 1, ty: e() }) };
        let arg = Term::Bound { index: 3, ty: e() };
        let out = body.open_term(&arg);
        assert_eq!(out, Term::Abs { hint: "y".into(), ty: e(), body: Box::new(Term::Bound { index: 4, ty: e() }) });
    }

    #[test]
    fn spine_collects_mixed_arguments() {
        let c = Term::constant("f", e());
        let t = Term::app(Term::ty_app(c.clone(), e()), c.clone());
        let (head, args) = t.spine();
        assert_eq!(head, &c);
        assert!(matches!(args[0], Arg::Type(_)));
        assert!(matches!(args[1], Arg::Term(_)));
    }
}
