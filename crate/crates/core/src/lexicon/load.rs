//! Reader for lexicon files.
//!
//! ```text
//! (sort Brits)
//! (incl Brits Humans h)          ; declares h : Brits → Humans
//! (const loves (-> Animals Countries t))
//! (word France :main (const France))
//! (word Liverpool :main (const Liverpool)
//!   :coercion (to_team (const to_team) :exclusive))
//! ```
//!
//! Directives may appear in any order and across several files.

use crate::compose::builtins;
use crate::kernel::{term_from_sexp, type_from_sexp, type_of, Env, Signature, Type};
use crate::sexpr::{self, keyword_groups, Pos, Sexp, SyntaxError};

use super::{Coercion, Inclusion, LexEntry, Lexicon, LexiconError, Ontology};

/// Everything composition needs: typed constants, sorts with their
/// inclusions, and the words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub signature: Signature,
    pub ontology: Ontology,
    pub lexicon: Lexicon,
}

fn syntax(pos: Pos, msg: impl Into<String>) -> LexiconError {
    LexiconError::Syntax(SyntaxError::new(pos, msg))
}

fn args<'a>(x: &'a Sexp, head: &str, n: usize) -> Result<&'a [Sexp], LexiconError> {
    let items = x.as_list().unwrap_or(&[]);
    if items.len() != n + 1 {
        return Err(syntax(x.pos(), format!("`{head}` takes {n} arguments")));
    }
    Ok(&items[1..])
}

impl Grammar {
    pub fn parse(src: &str) -> Result<Grammar, LexiconError> {
        Grammar::from_sources([src])
    }

    /// Loads several sources as one grammar.
    pub fn from_sources<'a>(sources: impl IntoIterator<Item = &'a str>) -> Result<Grammar, LexiconError> {
        let mut forms = Vec::new();
        for src in sources {
            forms.extend(sexpr::parse_all(src)?);
        }
        for f in &forms {
            match f.head() {
                Some("sort" | "incl" | "const" | "word") => {}
                _ => return Err(syntax(f.pos(), format!("unknown directive `{f}`"))),
            }
        }
        let of = |h: &'static str| forms.iter().filter(move |f| f.head() == Some(h));

        let mut signature = Signature::new();
        let mut ontology = Ontology::new();
        for f in of("sort") {
            let name = args(f, "sort", 1)?[0].expect_atom("sort name")?;
            if name == crate::kernel::PROP {
                return Err(syntax(f.pos(), "`t` is the sort of propositions, not an entity sort"));
            }
            signature.add_sort(name);
            ontology.add_sort(name);
        }
        builtins::declare(&mut signature).map_err(|source| LexiconError::Signature { pos: Pos::default(), source })?;

        for f in of("const") {
            let a = args(f, "const", 2)?;
            let name = a[0].expect_atom("constant name")?;
            let ty = type_from_sexp(&a[1], Some(&signature))?;
            signature.declare(name, ty).map_err(|source| LexiconError::Signature { pos: f.pos(), source })?;
        }

        for f in of("incl") {
            let a = args(f, "incl", 3)?;
            let sub = a[0].expect_atom("sort")?;
            let sup = a[1].expect_atom("sort")?;
            let morphism = a[2].expect_atom("morphism name")?;
            let expected = Type::arrow(Type::base(sub), Type::base(sup));
            ontology.add_inclusion(Inclusion { sub: sub.into(), sup: sup.into(), morphism: morphism.into() })?;
            match signature.get(morphism) {
                Some(found) if *found != expected => {
                    return Err(LexiconError::MorphismType {
                        pos: f.pos(),
                        name: morphism.into(),
                        expected,
                        found: found.clone(),
                    })
                }
                Some(_) => {}
                None => signature
                    .declare(morphism, expected)
                    .map_err(|source| LexiconError::Signature { pos: f.pos(), source })?,
            }
        }

        let mut lexicon = Lexicon::default();
        for f in of("word") {
            let entry = read_word(f, &signature)?;
            let word = entry.word.clone();
            if lexicon.insert(entry).is_some() {
                return Err(LexiconError::DuplicateWord { word, pos: f.pos() });
            }
        }
        Ok(Grammar { signature, ontology, lexicon })
    }
}

fn read_word(f: &Sexp, sig: &Signature) -> Result<LexEntry, LexiconError> {
    let items = f.as_list().unwrap_or(&[]);
    let (positional, groups) = keyword_groups(&items[1..]);
    let [name] = positional.as_slice() else {
        return Err(syntax(f.pos(), "`word` takes a name followed by keyword arguments"));
    };
    let word = name.expect_atom("word")?.to_string();
    let env = Env::new();
    let typed = |x: &Sexp| -> Result<_, LexiconError> {
        let term = term_from_sexp(x, sig, &env)?;
        if !term.is_closed() {
            return Err(LexiconError::OpenMain { pos: x.pos(), word: word.clone() });
        }
        let ty = type_of(&term, sig, &env).map_err(|source| LexiconError::IllTyped {
            pos: x.pos(),
            word: word.clone(),
            source: Box::new(source),
        })?;
        Ok((term, ty))
    };

    let mut main = None;
    let mut coercions = Vec::new();
    for (key, vals) in groups {
        match (key, vals.as_slice()) {
            (":main", [x]) if main.is_none() => main = Some(typed(x)?),
            (":coercion", [c]) => {
                let parts = c.as_list().unwrap_or(&[]);
                let (pos, flags) = keyword_groups(parts);
                let exclusive = match flags.as_slice() {
                    [] => false,
                    [(":exclusive", v)] if v.is_empty() => true,
                    _ => return Err(syntax(c.pos(), "coercion flags are limited to `:exclusive`")),
                };
                let [cname, body] = pos.as_slice() else {
                    return Err(syntax(c.pos(), "coercion is `(name TERM [:exclusive])`"));
                };
                let name = cname.expect_atom("coercion name")?.to_string();
                let (term, ty) = typed(body)?;
                if ty.as_arrow().is_none() {
                    return Err(LexiconError::NotACoercion { pos: c.pos(), word: word.clone(), name, ty });
                }
                coercions.push(Coercion { name, term, ty, exclusive });
            }
            _ => return Err(syntax(f.pos(), format!("unexpected `{key}` in word `{word}`"))),
        }
    }
    let Some((main, ty)) = main else {
        return Err(syntax(f.pos(), format!("word `{word}` has no `:main`")));
    };
    Ok(LexEntry { word, main, ty, coercions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_directives_is_irrelevant() {
        let g = Grammar::parse(
            "(word w :main (const c) :coercion (k (const k)))
             (const k (-> A B))
             (const c A)
             (sort B) (sort A)",
        )
        .unwrap();
        let w = g.lexicon.lookup("w").unwrap();
        assert_eq!(w.ty, Type::base("A"));
        assert_eq!(w.coercions[0].sorts(), Some(("A", "B")));
    }

    #[test]
    fn inclusion_declares_its_morphism() {
        let g = Grammar::parse("(sort A) (sort B) (incl A B up)").unwrap();
        assert_eq!(g.signature.get("up"), Some(&Type::arrow(Type::base("A"), Type::base("B"))));
        let bad = Grammar::parse("(sort A) (sort B) (const up (-> B A)) (incl A B up)");
        assert!(matches!(bad, Err(LexiconError::MorphismType { .. })));
    }

    #[test]
    fn errors_are_reported() {
        assert!(matches!(Grammar::parse("(sort A) (incl A Z m)"), Err(LexiconError::UnknownSort(_))));
        assert!(matches!(
            Grammar::parse("(sort A) (sort B) (incl A B m) (incl B A n)"),
            Err(LexiconError::Cycle { .. })
        ));
        assert!(matches!(
            Grammar::parse("(sort A) (const c A) (word w :main (const c) :coercion (k (const c)))"),
            Err(LexiconError::NotACoercion { .. })
        ));
        assert!(matches!(
            Grammar::parse("(sort A) (const c A) (word w :main (const c)) (word w :main (const c))"),
            Err(LexiconError::DuplicateWord { .. })
        ));
        assert!(matches!(Grammar::parse("(word w :main x)"), Err(LexiconError::Surface(_))));
        assert!(matches!(Grammar::parse("(frob)"), Err(LexiconError::Syntax(_))));
        assert!(matches!(
            Grammar::parse("(sort A) (const f (-> A A)) (word w :main (const f) {A})"),
            Err(LexiconError::Syntax(_))
        ));
    }
}
