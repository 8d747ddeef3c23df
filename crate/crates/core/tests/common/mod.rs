//! Seeded generator of well-typed System F terms.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specimen_core::kernel::{contract, Signature, Term, Type};

/// Maximum depth of generated terms.
pub const MAX_DEPTH: usize = 8;

pub fn e() -> Type {
    Type::base("e")
}

pub fn arrow(a: Type, b: Type) -> Type {
    Type::arrow(a, b)
}

pub fn signature() -> Signature {
    let mut sig = Signature::new();
    sig.add_sort("e");
    let x = Type::var("X");
    for (name, ty) in [
        ("c", e()),
        ("d", e()),
        ("p", arrow(e(), Type::prop())),
        ("r", arrow(e(), arrow(e(), Type::prop()))),
        ("f", arrow(e(), e())),
        ("any", Type::forall("X", x.clone())),
        ("twice", Type::forall("X", arrow(arrow(x.clone(), x.clone()), arrow(x.clone(), x)))),
    ] {
        sig.declare(name, ty).unwrap();
    }
    sig
}

pub struct Gen {
    rng: ChaCha8Rng,
    counter: usize,
    sig: Signature,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), counter: 0, sig: signature() }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base}{}", self.counter)
    }

    fn constant(&self, name: &str) -> Term {
        Term::constant(name, self.sig.get(name).unwrap().clone())
    }

    /// A small random type whose free variables come from `tyvars`.
    pub fn ty(&mut self, tyvars: &[String], depth: usize) -> Type {
        let choice = self.rng.gen_range(0..if depth == 0 { 3 } else { 7 });
        match choice {
            0 => e(),
            1 => Type::prop(),
            2 => match tyvars.choose(&mut self.rng) {
                Some(v) => Type::var(v.clone()),
                None => e(),
            },
            3 | 4 => {
                let a = self.ty(tyvars, depth - 1);
                let b = self.ty(tyvars, depth - 1);
                arrow(a, b)
            }
            5 => {
                let x = self.fresh("Y");
                let mut inner = tyvars.to_vec();
                inner.push(x.clone());
                let body = self.ty(&inner, depth - 1);
                Type::forall(&x, arrow(Type::var(x.clone()), body))
            }
            _ => arrow(e(), Type::prop()),
        }
    }

    /// A closed term of a random type, of depth at most [`MAX_DEPTH`].
    pub fn closed(&mut self) -> (Term, Type) {
        let ty = self.ty(&[], 2);
        let t = self.term(&ty, &[], &[], MAX_DEPTH);
        (t, ty)
    }

    /// A closed term whose outermost constructor is a redex, so that
    /// reduction has something to do.
    pub fn closed_redex(&mut self) -> (Term, Type) {
        let ty = self.ty(&[], 2);
        let t = if self.rng.gen_bool(0.5) {
            self.redex(&ty, &[], &[], MAX_DEPTH)
        } else {
            self.type_redex(&ty, &[], &[], MAX_DEPTH)
        };
        (t, ty)
    }

    fn leaf(&mut self, ty: &Type, ctx: &[(String, Type)]) -> Term {
        let mut options: Vec<Term> =
            ctx.iter().filter(|(_, t)| t == ty).map(|(n, t)| Term::free(n.clone(), t.clone())).collect();
        for (n, t) in self.sig.constants() {
            if t == ty {
                options.push(Term::constant(n, t.clone()));
            }
        }
        if options.is_empty() || self.rng.gen_bool(0.1) {
            return Term::ty_app(self.constant("any"), ty.clone());
        }
        options.choose(&mut self.rng).unwrap().clone()
    }

    /// `(λx:A. M) N` at type `ty`.
    fn redex(&mut self, ty: &Type, ctx: &[(String, Type)], tyvars: &[String], budget: usize) -> Term {
        // Often bind a function returning `ty`, so the body can use it.
        let a = if self.rng.gen_bool(0.5) {
            let dom = self.ty(tyvars, 1);
            arrow(dom, ty.clone())
        } else {
            self.ty(tyvars, 2)
        };
        let x = self.fresh("x");
        let mut inner = ctx.to_vec();
        inner.push((x.clone(), a.clone()));
        let body = self.term(ty, &inner, tyvars, budget.saturating_sub(2));
        let arg = self.term(&a, ctx, tyvars, budget.saturating_sub(1));
        Term::app(Term::lam(&x, a, body), arg)
    }

    /// `(ΛX. (λz:X. M) (any{X})) {A}` at type `ty`.
    fn type_redex(&mut self, ty: &Type, ctx: &[(String, Type)], tyvars: &[String], budget: usize) -> Term {
        let x = self.fresh("X");
        let z = self.fresh("z");
        let mut tv = tyvars.to_vec();
        tv.push(x.clone());
        let xv = Type::var(x.clone());
        let mut inner = ctx.to_vec();
        inner.push((z.clone(), xv.clone()));
        let body = self.term(ty, &inner, &tv, budget.saturating_sub(4));
        let any_x = Term::ty_app(self.constant("any"), xv.clone());
        let abs = Term::tlam(&x, Term::app(Term::lam(&z, xv, body), any_x));
        let arg = self.ty(tyvars, 1);
        Term::ty_app(abs, arg)
    }

    /// A term of type `ty` in context `ctx`, of depth at most `budget`
    /// (or 2, whichever is larger).
    pub fn term(&mut self, ty: &Type, ctx: &[(String, Type)], tyvars: &[String], budget: usize) -> Term {
        if budget <= 2 {
            return self.leaf(ty, ctx);
        }
        let roll = self.rng.gen_range(0..12);
        match ty {
            Type::Arrow(a, b) if roll < 4 => {
                let x = self.fresh("x");
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), (**a).clone()));
                let body = self.term(b, &inner, tyvars, budget - 1);
                return Term::lam(&x, (**a).clone(), body);
            }
            Type::Forall(..) if roll < 5 => {
                let x = self.fresh("X");
                let body_ty = ty.instantiate(&Type::var(x.clone())).unwrap();
                let mut tv = tyvars.to_vec();
                tv.push(x.clone());
                let body = self.term(&body_ty, ctx, &tv, budget - 1);
                return Term::tlam(&x, body);
            }
            _ => {}
        }
        match roll {
            0..=3 if budget >= 4 => self.redex(ty, ctx, tyvars, budget),
            4 | 5 if budget >= 6 => self.type_redex(ty, ctx, tyvars, budget),
            6 if budget >= 4 => {
                // twice{ty} g x
                let g = self.term(&arrow(ty.clone(), ty.clone()), ctx, tyvars, budget - 2);
                let x = self.term(ty, ctx, tyvars, budget - 1);
                Term::apps(Term::ty_app(self.constant("twice"), ty.clone()), [g, x])
            }
            7 | 8 if ty.is_prop() && budget >= 4 => {
                let a = self.term(&e(), ctx, tyvars, budget - 1);
                if roll == 7 {
                    Term::app(self.constant("p"), a)
                } else {
                    let b = self.term(&e(), ctx, tyvars, budget - 2);
                    Term::apps(self.constant("r"), [b, a])
                }
            }
            7 | 8 if *ty == e() => Term::app(self.constant("f"), self.term(&e(), ctx, tyvars, budget - 1)),
            9 | 10 => {
                // Apply a function from the context, if one returns `ty`.
                let fs: Vec<_> =
                    ctx.iter().filter(|(_, t)| matches!(t, Type::Arrow(_, b) if **b == *ty)).cloned().collect();
                match fs.choose(&mut self.rng) {
                    Some((n, fty)) => {
                        let (a, _) = fty.as_arrow().unwrap();
                        let a = a.clone();
                        let arg = self.term(&a, ctx, tyvars, budget - 1);
                        Term::app(Term::free(n.clone(), fty.clone()), arg)
                    }
                    None => self.intro_or_leaf(ty, ctx, tyvars, budget),
                }
            }
            _ => self.intro_or_leaf(ty, ctx, tyvars, budget),
        }
    }

    fn intro_or_leaf(&mut self, ty: &Type, ctx: &[(String, Type)], tyvars: &[String], budget: usize) -> Term {
        match ty {
            Type::Arrow(a, b) => {
                let x = self.fresh("x");
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), (**a).clone()));
                let body = self.term(b, &inner, tyvars, budget - 1);
                Term::lam(&x, (**a).clone(), body)
            }
            Type::Forall(..) => {
                let x = self.fresh("X");
                let body_ty = ty.instantiate(&Type::var(x.clone())).unwrap();
                let mut tv = tyvars.to_vec();
                tv.push(x.clone());
                let body = self.term(&body_ty, ctx, &tv, budget - 1);
                Term::tlam(&x, body)
            }
            _ => self.leaf(ty, ctx),
        }
    }

    /// A term `λy:X. ΛX. ((λz:X. G) y)` that generalises over a type
    /// variable occurring in the type of a variable free in the body.
    pub fn generalisation_violation(&mut self) -> Term {
        let x = self.fresh("X");
        let y = self.fresh("y");
        let z = self.fresh("z");
        let xv = Type::var(x.clone());
        let g_ty = self.ty(std::slice::from_ref(&x), 1);
        let g = self.term(&g_ty, &[(z.clone(), xv.clone())], std::slice::from_ref(&x), 3);
        let inner = Term::app(Term::lam(&z, xv.clone(), g), Term::free(y.clone(), xv.clone()));
        Term::lam(&y, xv, Term::tlam(&x, inner))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// One rightmost-innermost reduction step.
pub fn step_innermost(t: &Term) -> Option<Term> {
    let inner = match t {
        Term::App(f, a) => step_innermost(a)
            .map(|a2| Term::App(f.clone(), Box::new(a2)))
            .or_else(|| step_innermost(f).map(|f2| Term::App(Box::new(f2), a.clone()))),
        Term::TyApp(f, ty) => step_innermost(f).map(|f2| Term::TyApp(Box::new(f2), ty.clone())),
        Term::Abs { hint, ty, body } => {
            step_innermost(body).map(|b| Term::Abs { hint: hint.clone(), ty: ty.clone(), body: Box::new(b) })
        }
        Term::TyAbs { hint, body } => {
            step_innermost(body).map(|b| Term::TyAbs { hint: hint.clone(), body: Box::new(b) })
        }
        _ => None,
    };
    inner.or_else(|| contract(t))
}

/// Normal form under the rightmost-innermost strategy.
pub fn normalize_innermost(t: &Term, fuel: usize) -> Option<Term> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match step_innermost(&cur) {
            Some(next) => cur = next,
            None => return Some(cur),
        }
    }
    None
}
