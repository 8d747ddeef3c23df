use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

/// The proposition sort.
pub const PROP: &str = "t";

/// A System F type in locally nameless form.
///
/// `Bound` indices count enclosing `Forall` binders first and then, when
/// the type sits inside a term, enclosing type abstractions. `Var` is a free
/// type variable referred to by name. Binder names on `Forall` are only
/// printing hints: equality ignores them, so `==` is alpha-equivalence.
#[derive(Clone, Debug)]
pub enum Type {
    Base(String),
    Var(String),
    Bound(usize),
    Arrow(Box<Type>, Box<Type>),
    Forall(String, Box<Type>),
}

impl PartialEq for Type {
    fn eq(&self, other: &Type) -> bool {
        match (self, other) {
            (Type::Base(a), Type::Base(b)) | (Type::Var(a), Type::Var(b)) => a == b,
            (Type::Bound(i), Type::Bound(j)) => i == j,
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => a1 == a2 && b1 == b2,
            (Type::Forall(_, b1), Type::Forall(_, b2)) => b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Type {}

impl Hash for Type {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Type::Base(s) | Type::Var(s) => s.hash(state),
            Type::Bound(i) => i.hash(state),
            Type::Arrow(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Type::Forall(_, b) => b.hash(state),
        }
    }
}

impl Type {
    pub fn base(name: impl Into<String>) -> Type {
        Type::Base(name.into())
    }

    pub fn prop() -> Type {
        Type::Base(PROP.to_string())
    }

    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// `ΠX.body`, binding every free occurrence of `Var(name)` in `body`.
    pub fn forall(name: &str, body: Type) -> Type {
        Type::Forall(name.to_string(), Box::new(body.close_at(name, 0)))
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Type::Base(s) if s == PROP)
    }

    pub fn as_base(&self) -> Option<&str> {
        match self {
            Type::Base(s) => Some(s),
            _ => None,
        }
    }

    /// An entity sort: any base sort other than `t`.
    pub fn as_entity(&self) -> Option<&str> {
        self.as_base().filter(|s| *s != PROP)
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn shift(&self, delta: isize, cutoff: usize) -> Type {
        if delta == 0 {
            return self.clone();
        }
        match self {
            Type::Bound(i) if *i >= cutoff => {
                let j = *i as isize + delta;
                assert!(j >= 0, "type index shifted below zero");
                Type::Bound(j as usize)
            }
            Type::Arrow(a, b) => Type::arrow(a.shift(delta, cutoff), b.shift(delta, cutoff)),
            Type::Forall(h, b) => Type::Forall(h.clone(), Box::new(b.shift(delta, cutoff + 1))),
            other => other.clone(),
        }
    }

    /// Replaces `Bound(k)` with `arg` and lowers every index above `k`: the
    /// body of a binder at level `k` is opened with `arg`. `arg` is expressed
    /// in the scope outside the binder.
    pub fn open_at(&self, k: usize, arg: &Type) -> Type {
        match self {
            Type::Bound(i) if *i == k => arg.shift(k as isize, 0),
            Type::Bound(i) if *i > k => Type::Bound(i - 1),
            Type::Arrow(a, b) => Type::arrow(a.open_at(k, arg), b.open_at(k, arg)),
            Type::Forall(h, b) => Type::Forall(h.clone(), Box::new(b.open_at(k + 1, arg))),
            other => other.clone(),
        }
    }

    /// Specialises `ΠX.T` to `T[X:=arg]`. Returns `None` for non-Π types.
    pub fn instantiate(&self, arg: &Type) -> Option<Type> {
        match self {
            Type::Forall(_, body) => Some(body.open_at(0, arg)),
            _ => None,
        }
    }

    /// Turns free `Var(name)` into `Bound(k)` (adjusted for depth), raising
    /// indices that already point past level `k`.
    pub fn close_at(&self, name: &str, k: usize) -> Type {
        match self {
            Type::Var(n) if n == name => Type::Bound(k),
            Type::Bound(i) if *i >= k => Type::Bound(i + 1),
            Type::Arrow(a, b) => Type::arrow(a.close_at(name, k), b.close_at(name, k)),
            Type::Forall(h, b) => Type::Forall(h.clone(), Box::new(b.close_at(name, k + 1))),
            other => other.clone(),
        }
    }

    /// Resolves named variables against a scope of enclosing type binders
    /// (innermost last): `Var(scope[len-1-j])` becomes `Bound(j)`.
    pub fn bind_names(&self, scope: &[String]) -> Type {
        self.bind_names_at(scope, 0)
    }

    fn bind_names_at(&self, scope: &[String], depth: usize) -> Type {
        match self {
            Type::Var(n) => match scope.iter().rev().position(|s| s == n) {
                Some(j) => Type::Bound(j + depth),
                None => self.clone(),
            },
            Type::Bound(i) if *i >= depth => Type::Bound(i + scope.len()),
            Type::Arrow(a, b) => Type::arrow(a.bind_names_at(scope, depth), b.bind_names_at(scope, depth)),
            Type::Forall(h, b) => Type::Forall(h.clone(), Box::new(b.bind_names_at(scope, depth + 1))),
            other => other.clone(),
        }
    }

    /// Capture-avoiding substitution of a free type variable.
    pub fn subst_var(&self, name: &str, replacement: &Type) -> Type {
        self.subst_var_at(name, replacement, 0)
    }

    pub(crate) fn subst_var_at(&self, name: &str, replacement: &Type, depth: usize) -> Type {
        match self {
            Type::Var(n) if n == name => replacement.shift(depth as isize, 0),
            Type::Arrow(a, b) => {
                Type::arrow(a.subst_var_at(name, replacement, depth), b.subst_var_at(name, replacement, depth))
            }
            Type::Forall(h, b) => Type::Forall(h.clone(), Box::new(b.subst_var_at(name, replacement, depth + 1))),
            other => other.clone(),
        }
    }

    /// Whether an index that escapes `depth` local binders points at one of
    /// the `levels` nearest enclosing binders, i.e. `depth <= i < depth + levels`.
    pub fn mentions_escaping(&self, depth: usize, levels: usize) -> Option<usize> {
        match self {
            Type::Bound(i) if *i >= depth && *i < depth + levels => Some(i - depth),
            Type::Arrow(a, b) => a.mentions_escaping(depth, levels).or_else(|| b.mentions_escaping(depth, levels)),
            Type::Forall(_, b) => b.mentions_escaping(depth + 1, levels),
            _ => None,
        }
    }

    /// Largest number of enclosing binders this type reaches out to
    /// (0 when locally closed).
    pub fn escape_depth(&self) -> usize {
        fn go(t: &Type, depth: usize) -> usize {
            match t {
                Type::Bound(i) if *i >= depth => i - depth + 1,
                Type::Arrow(a, b) => go(a, depth).max(go(b, depth)),
                Type::Forall(_, b) => go(b, depth + 1),
                _ => 0,
            }
        }
        go(self, 0)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out, &mut BTreeSet::new());
        out
    }

    /// Collects free variable names and base sort names.
    pub(crate) fn collect_names(&self, vars: &mut BTreeSet<String>, bases: &mut BTreeSet<String>) {
        match self {
            Type::Var(n) => {
                vars.insert(n.clone());
            }
            Type::Base(n) => {
                bases.insert(n.clone());
            }
            Type::Arrow(a, b) => {
                a.collect_names(vars, bases);
                b.collect_names(vars, bases);
            }
            Type::Forall(_, b) => b.collect_names(vars, bases),
            Type::Bound(_) => {}
        }
    }

    pub fn base_sorts(&self) -> BTreeSet<String> {
        let mut bases = BTreeSet::new();
        self.collect_names(&mut BTreeSet::new(), &mut bases);
        bases
    }

    /// Splits leading Π binders: `ΠX1..ΠXn.body` gives the hints and `body`
    /// with its indices still pointing at the stripped binders.
    pub fn split_foralls(&self) -> (Vec<String>, &Type) {
        let mut hints = Vec::new();
        let mut cur = self;
        while let Type::Forall(h, b) = cur {
            hints.push(h.clone());
            cur = b;
        }
        (hints, cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Type {
        Type::var("X")
    }

    #[test]
    fn forall_equality_ignores_binder_names() {
        let a = Type::forall("X", Type::arrow(x(), x()));
        let b = Type::forall("Y", Type::arrow(Type::var("Y"), Type::var("Y")));
        assert_eq!(a, b);
        let c = Type::forall("X", Type::arrow(x(), Type::prop()));
        assert_ne!(a, c);
    }

    #[test]
    fn instantiate_replaces_bound_variable() {
        let ty = Type::forall("X", Type::arrow(x(), Type::prop()));
        assert_eq!(ty.instantiate(&Type::base("Book")).unwrap(), Type::arrow(Type::base("Book"), Type::prop()));
    }

    #[test]
    fn impredicative_instantiation() {
        let id = Type::forall("X", x());
        assert_eq!(id.instantiate(&id).unwrap(), id);
    }

    #[test]
    fn subst_var_under_binder_does_not_capture() {
        // (ΠX. X → Y)[Y := X] keeps the bound and the free X apart.
        let ty = Type::forall("X", Type::arrow(x(), Type::var("Y")));
        let out = ty.subst_var("Y", &x());
        assert_eq!(out, Type::Forall("X".into(), Box::new(Type::arrow(Type::Bound(0), x()))));
        assert_ne!(out, Type::forall("X", Type::arrow(x(), x())));
    }

    #[test]
    fn shadowed_binders_resolve_innermost() {
        let inner = Type::forall("X", x());
        let ty = Type::forall("X", Type::arrow(x(), inner));
        let (hints, body) = ty.split_foralls();
        assert_eq!(hints.len(), 1);
        assert_eq!(*body, Type::arrow(Type::Bound(0), Type::Forall("X".into(), Box::new(Type::Bound(0)))));
    }

    #[test]
    fn escape_detection() {
        let ty = Type::arrow(Type::Bound(1), Type::Forall("Y".into(), Box::new(Type::Bound(0))));
        assert_eq!(ty.escape_depth(), 2);
        assert_eq!(ty.mentions_escaping(0, 1), None);
        assert_eq!(ty.mentions_escaping(0, 2), Some(1));
    }
}
