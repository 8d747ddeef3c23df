use std::collections::BTreeMap;
use std::fmt;

use super::{Comparison, Formula, HolTerm};
use crate::compose::{match_type, open_metas};
use crate::kernel::{Signature, Type};

/// One sort error found in a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortClash {
    /// The offending subformula or term, as an s-expression.
    pub at: String,
    pub message: String,
}

impl fmt::Display for SortClash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.at, self.message)
    }
}

struct Checker<'a> {
    sig: &'a Signature,
    scope: Vec<(String, Type)>,
    clashes: Vec<SortClash>,
}

/// Verifies every predicate, comparison, quantifier and term against the
/// declared sorts. Individuals not declared in the signature are literals
/// and only need a registered sort.
pub fn check_sorts(f: &Formula, sig: &Signature) -> Result<(), Vec<SortClash>> {
    // Asserted restrictors refer to their generic as a variable, so every
    // generic name is in scope throughout.
    let scope = super::generics(f)
        .into_iter()
        .filter_map(|g| match g {
            HolTerm::Generic { name, sort, .. } => Some((name.clone(), sort.clone())),
            _ => None,
        })
        .collect();
    let mut c = Checker { sig, scope, clashes: Vec::new() };
    c.formula(f);
    if c.clashes.is_empty() {
        Ok(())
    } else {
        Err(c.clashes)
    }
}

fn show(f: &Formula) -> String {
    super::formula_to_sexp(f)
}

fn show_term(t: &HolTerm) -> String {
    super::sexp::term_to_sexp(t)
}

impl Checker<'_> {
    fn clash(&mut self, at: String, message: String) {
        self.clashes.push(SortClash { at, message });
    }

    fn sort_ok(&mut self, ty: &Type, at: &dyn Fn() -> String) {
        if let Some(v) = ty.free_vars().into_iter().next() {
            self.clash(at(), format!("sort mentions type variable `{v}`"));
        }
        for s in ty.base_sorts() {
            if !self.sig.has_sort(&s) {
                self.clash(at(), format!("unknown sort `{s}`"));
            }
        }
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Pred { name, sorts, args } => {
                if sorts.len() != args.len() {
                    self.clash(show(f), format!("{} sorts for {} arguments", sorts.len(), args.len()));
                }
                for (i, (a, s)) in args.iter().zip(sorts).enumerate() {
                    self.term(a);
                    if a.sort() != s {
                        self.clash(
                            show(f),
                            format!("argument {} of `{name}` has sort {}, expected {s}", i + 1, a.sort()),
                        );
                    }
                }
                let expected = sorts.iter().rev().fold(Type::prop(), |acc, s| Type::arrow(s.clone(), acc));
                let declared = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(n, _)| n == name)
                    .map(|(_, t)| t.clone())
                    .or_else(|| self.sig.get(name).cloned());
                match declared {
                    None => self.clash(show(f), format!("unknown predicate `{name}`")),
                    Some(d) => {
                        let (metas, body) = open_metas(&d);
                        let names: Vec<String> = metas.into_iter().map(|(m, _)| m).collect();
                        if !match_type(&body, &expected, 0, &mut BTreeMap::new(), &names) {
                            self.clash(show(f), format!("`{name}` is declared {d}, which has no instance {expected}"));
                        }
                    }
                }
            }
            Formula::Cmp { kind, left, right } => {
                self.term(left);
                self.term(right);
                let name = match kind {
                    Comparison::Lt => "lt",
                    Comparison::Leq => "leq",
                };
                match self.sig.get(name).and_then(|d| {
                    let (a, rest) = d.as_arrow()?;
                    Some((a.clone(), rest.as_arrow()?.0.clone()))
                }) {
                    Some((a, b)) => {
                        if *left.sort() != a || *right.sort() != b {
                            self.clash(
                                show(f),
                                format!("`{name}` compares {a} with {b}, found {} and {}", left.sort(), right.sort()),
                            );
                        }
                    }
                    None if left.sort() != right.sort() => {
                        self.clash(show(f), format!("cannot compare {} with {}", left.sort(), right.sort()))
                    }
                    None => {}
                }
            }
            Formula::Conn { operands, .. } => operands.iter().for_each(|o| self.formula(o)),
            Formula::Quant { var, sort, body, .. } => {
                self.sort_ok(sort, &|| show(f));
                self.scope.push((var.clone(), sort.clone()));
                self.formula(body);
                self.scope.pop();
            }
        }
    }

    fn term(&mut self, t: &HolTerm) {
        let at = || show_term(t);
        match t {
            HolTerm::Individual { name, sort } => match self.sig.get(name) {
                Some(d) if d != sort => self.clash(at(), format!("`{name}` is declared {d}, used at {sort}")),
                Some(_) => {}
                None => self.sort_ok(sort, &at),
            },
            HolTerm::Var { name, sort } => match self.scope.iter().rev().find(|(n, _)| n == name) {
                Some((_, s)) if s != sort => self.clash(at(), format!("`{name}` is bound at {s}, used at {sort}")),
                Some(_) => {}
                None => self.clash(at(), format!("variable `{name}` is not bound")),
            },
            HolTerm::Generic { name, sort, restrictor, .. } => {
                self.sort_ok(sort, &at);
                if let Some(r) = restrictor {
                    self.scope.push((name.clone(), sort.clone()));
                    self.formula(r);
                    self.scope.pop();
                }
            }
            HolTerm::FunApp { morphism, sort, arg, .. } => {
                self.term(arg);
                let want = Type::arrow(arg.sort().clone(), sort.clone());
                match self.sig.get(morphism) {
                    Some(d) if *d == want => {}
                    Some(d) => self.clash(at(), format!("`{morphism}` is declared {d}, used at {want}")),
                    None => self.clash(at(), format!("unknown morphism `{morphism}`")),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;
    use crate::hol::parse_formula;

    #[test]
    fn height_of_carlotta() {
        let g = demo::grammar();
        let ok = parse_formula("(pred height ((ind Carlotta 2yoGirl) (ind 1.2 float)) (2yoGirl float))").unwrap();
        assert_eq!(check_sorts(&ok, &g.signature), Ok(()));

        let clash =
            parse_formula("(pred height ((ind Carlotta 2yoGirl) (ind Carlotta 2yoGirl)) (2yoGirl float))").unwrap();
        let errs = check_sorts(&clash, &g.signature).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("argument 2"), "{}", errs[0]);

        let bad_inst =
            parse_formula("(pred height ((ind Carlotta 2yoGirl) (ind Carlotta 2yoGirl)) (2yoGirl 2yoGirl))").unwrap();
        assert!(check_sorts(&bad_inst, &g.signature).is_err());
    }

    #[test]
    fn comparisons_and_binders() {
        let g = demo::grammar();
        let lt = parse_formula("(lt (ind 0.5 float) (ind 0.9 float))").unwrap();
        assert_eq!(check_sorts(&lt, &g.signature), Ok(()));
        let mixed = parse_formula("(lt (ind 0.5 float) (ind Carlotta 2yoGirl))").unwrap();
        assert!(check_sorts(&mixed, &g.signature).is_err());
        let unbound = parse_formula("(leq (var h float) (ind 1 float))").unwrap();
        assert!(check_sorts(&unbound, &g.signature).is_err());
        let bound = parse_formula("(forall h float (leq (var h float) (ind 1 float)))").unwrap();
        assert_eq!(check_sorts(&bound, &g.signature), Ok(()));
        let unknown = parse_formula("(forall h Martians (pred p () ()))").unwrap();
        assert_eq!(check_sorts(&unknown, &g.signature).unwrap_err().len(), 2);
    }
}
