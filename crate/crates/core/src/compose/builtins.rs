//! Logical constants shared by every lexicon.

use crate::kernel::{parse_term, Env, Signature, SignatureError, Term, Type};

pub const FORALL: &str = "forall";
pub const EXISTS: &str = "exists";
/// The bare specimen, `ΠX.X`.
pub const SPECIMEN: &str = "specimen";
/// The restricted specimen of "most of the", `ΠX.(X→t)→X`.
pub const SPECIMEN_OF: &str = "specimen_of";
pub const IOTA: &str = "iota";
pub const AND: &str = "and";
pub const OR: &str = "or";
pub const IMPLIES: &str = "implies";
pub const NOT: &str = "not";

/// Source of the polymorphic predicate conjunction. Variables whose types
/// mention `B` are bound under `ΛB`.
pub const POLY_AND_SRC: &str = "(tlam A (tlam M \
    (lam i (-> A t) (lam h (-> M t) \
    (tlam B (lam b B (lam a (-> B A) (lam m (-> B M) \
      ((const and) (h (m b)) (i (a b)))))))))))";

fn x() -> Type {
    Type::var("X")
}

fn pred(ty: Type) -> Type {
    Type::arrow(ty, Type::prop())
}

/// Declared type of each builtin constant.
pub fn constants() -> Vec<(&'static str, Type)> {
    let quant = Type::forall("X", Type::arrow(pred(x()), Type::prop()));
    let choice = Type::forall("X", Type::arrow(pred(x()), x()));
    let binary = Type::arrow(Type::prop(), Type::arrow(Type::prop(), Type::prop()));
    vec![
        (FORALL, quant.clone()),
        (EXISTS, quant),
        (SPECIMEN, Type::forall("X", x())),
        (SPECIMEN_OF, choice.clone()),
        (IOTA, choice),
        (AND, binary.clone()),
        (OR, binary.clone()),
        (IMPLIES, binary),
        (NOT, Type::arrow(Type::prop(), Type::prop())),
    ]
}

pub fn declare(sig: &mut Signature) -> Result<(), SignatureError> {
    for (name, ty) in constants() {
        sig.declare(name, ty)?;
    }
    Ok(())
}

/// A signature holding only the builtins.
pub fn signature() -> Signature {
    let mut sig = Signature::new();
    declare(&mut sig).expect("builtins are consistent");
    sig
}

/// `ΛA ΛM λi:A→t λh:M→t ΛB λb:B λa:B→A λm:B→M. and (h (m b)) (i (a b))`
pub fn poly_and() -> Term {
    parse_term(POLY_AND_SRC, &signature(), &Env::new()).expect("builtin AND parses")
}

/// `ΠA.ΠM.(A→t)→(M→t)→ΠB.B→(B→A)→(B→M)→t`
pub fn poly_and_type() -> Type {
    let (a, m, b) = (Type::var("A"), Type::var("M"), Type::var("B"));
    let inner = Type::forall(
        "B",
        Type::arrow(
            b.clone(),
            Type::arrow(Type::arrow(b.clone(), a.clone()), Type::arrow(Type::arrow(b, m.clone()), Type::prop())),
        ),
    );
    Type::forall("A", Type::forall("M", Type::arrow(pred(a), Type::arrow(pred(m), inner))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::type_of;

    #[test]
    fn poly_and_has_its_declared_type() {
        let ty = type_of(&poly_and(), &signature(), &Env::new()).unwrap();
        assert_eq!(ty, poly_and_type());
    }

    #[test]
    fn quantifier_and_specimen_types() {
        let sig = signature();
        assert_eq!(sig.get(FORALL).unwrap().to_string(), "(pi X (-> (-> X t) t))");
        assert_eq!(sig.get(SPECIMEN).unwrap().to_string(), "(pi X X)");
        assert_eq!(sig.get(SPECIMEN_OF).unwrap().to_string(), "(pi X (-> (-> X t) X))");
        assert_eq!(sig.get(IOTA), sig.get(SPECIMEN_OF));
        assert_eq!(sig.get(AND).unwrap().to_string(), "(-> t (-> t t))");
    }
}
