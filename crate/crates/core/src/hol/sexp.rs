//! Machine-readable formula syntax.
//!
//! ```text
//! (and (pred passed ((generic s student :restrictor F) (ind logic Subject)) (student Subject)) ...)
//! (forall h float (leq (var hs float) (var h float)))
//! (fun a Animals (fun h Humans (generic ⪍_Brits Brits)) :inclusion)
//! ```

use thiserror::Error;

use super::{Comparison, Connective, Formula, HolTerm, Origin, Quantifier};
use crate::kernel::{type_from_sexp, SurfaceError, Type};
use crate::sexpr::{self, keyword_groups, Sexp, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HolSyntaxError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Type(#[from] SurfaceError),
}

pub fn formula_to_sexp(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Pred { name, sorts, args } => {
            out.push_str(&format!("(pred {name} ("));
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_term(a, out);
            }
            out.push_str(") (");
            let sorts: Vec<String> = sorts.iter().map(Type::to_string).collect();
            out.push_str(&sorts.join(" "));
            out.push_str("))");
        }
        Formula::Conn { kind, operands } => {
            out.push('(');
            out.push_str(match kind {
                Connective::And => "and",
                Connective::Or => "or",
                Connective::Implies => "implies",
                Connective::Not => "not",
            });
            for o in operands {
                out.push(' ');
                write_formula(o, out);
            }
            out.push(')');
        }
        Formula::Quant { kind, var, sort, body } => {
            let k = match kind {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            };
            out.push_str(&format!("({k} {var} {sort} "));
            write_formula(body, out);
            out.push(')');
        }
        Formula::Cmp { kind, left, right } => {
            out.push_str(match kind {
                Comparison::Lt => "(lt ",
                Comparison::Leq => "(leq ",
            });
            write_term(left, out);
            out.push(' ');
            write_term(right, out);
            out.push(')');
        }
    }
}

pub(super) fn term_to_sexp(t: &HolTerm) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &HolTerm, out: &mut String) {
    match t {
        HolTerm::Individual { name, sort } => out.push_str(&format!("(ind {name} {sort})")),
        HolTerm::Var { name, sort } => out.push_str(&format!("(var {name} {sort})")),
        HolTerm::Generic { name, sort, origin, restrictor } => {
            out.push_str(&format!("(generic {name} {sort}"));
            if *origin == Origin::Choice {
                out.push_str(" :choice");
            }
            if let Some(r) = restrictor {
                out.push_str(" :restrictor ");
                write_formula(r, out);
            }
            out.push(')');
        }
        HolTerm::FunApp { morphism, sort, arg, inclusion } => {
            out.push_str(&format!("(fun {morphism} {sort} "));
            write_term(arg, out);
            if *inclusion {
                out.push_str(" :inclusion");
            }
            out.push(')');
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, HolSyntaxError> {
    formula_from_sexp(&sexpr::parse_one(src)?)
}

fn bad(x: &Sexp, what: &str) -> HolSyntaxError {
    HolSyntaxError::Syntax(SyntaxError::new(x.pos(), format!("malformed {what} `{x}`")))
}

fn sort(x: &Sexp) -> Result<Type, HolSyntaxError> {
    Ok(type_from_sexp(x, None)?)
}

pub fn formula_from_sexp(x: &Sexp) -> Result<Formula, HolSyntaxError> {
    let items = x.as_list().ok_or_else(|| bad(x, "formula"))?;
    let head = x.head().ok_or_else(|| bad(x, "formula"))?;
    let rest = &items[1..];
    let conn = |kind| -> Result<Formula, HolSyntaxError> {
        let operands = rest.iter().map(formula_from_sexp).collect::<Result<_, _>>()?;
        Ok(Formula::Conn { kind, operands })
    };
    match (head, rest) {
        ("pred", [name, args, sorts]) => Ok(Formula::Pred {
            name: name.expect_atom("predicate")?.to_string(),
            args: args
                .as_list()
                .ok_or_else(|| bad(args, "argument list"))?
                .iter()
                .map(term_from_sexp)
                .collect::<Result<_, _>>()?,
            sorts: sorts
                .as_list()
                .ok_or_else(|| bad(sorts, "sort list"))?
                .iter()
                .map(sort)
                .collect::<Result<_, _>>()?,
        }),
        ("and", _) => conn(Connective::And),
        ("or", _) => conn(Connective::Or),
        ("implies", [_, _]) => conn(Connective::Implies),
        ("not", [_]) => conn(Connective::Not),
        ("forall" | "exists", [var, s, body]) => Ok(Formula::Quant {
            kind: if head == "forall" { Quantifier::Forall } else { Quantifier::Exists },
            var: var.expect_atom("variable")?.to_string(),
            sort: sort(s)?,
            body: Box::new(formula_from_sexp(body)?),
        }),
        ("lt" | "leq", [l, r]) => Ok(Formula::Cmp {
            kind: if head == "lt" { Comparison::Lt } else { Comparison::Leq },
            left: term_from_sexp(l)?,
            right: term_from_sexp(r)?,
        }),
        _ => Err(bad(x, "formula")),
    }
}

fn term_from_sexp(x: &Sexp) -> Result<HolTerm, HolSyntaxError> {
    let items = x.as_list().ok_or_else(|| bad(x, "term"))?;
    let (positional, flags) = keyword_groups(items.get(1..).unwrap_or(&[]));
    match (x.head(), positional.as_slice()) {
        (Some("ind"), [n, s]) if flags.is_empty() => {
            Ok(HolTerm::Individual { name: n.expect_atom("name")?.to_string(), sort: sort(s)? })
        }
        (Some("var"), [n, s]) if flags.is_empty() => {
            Ok(HolTerm::Var { name: n.expect_atom("name")?.to_string(), sort: sort(s)? })
        }
        (Some("generic"), [n, s]) => {
            let mut choice = false;
            let mut restrictor = None;
            for (k, vals) in &flags {
                match (*k, vals.as_slice()) {
                    (":choice", []) => choice = true,
                    (":restrictor", [f]) => restrictor = Some(Box::new(formula_from_sexp(f)?)),
                    _ => return Err(bad(x, "generic")),
                }
            }
            let origin = match (choice, &restrictor) {
                (true, _) => Origin::Choice,
                (false, Some(_)) => Origin::Restricted,
                (false, None) => Origin::Bare,
            };
            Ok(HolTerm::Generic { name: n.expect_atom("name")?.to_string(), sort: sort(s)?, origin, restrictor })
        }
        (Some("fun"), [m, s, arg]) => {
            let inclusion = match flags.as_slice() {
                [] => false,
                [(":inclusion", v)] if v.is_empty() => true,
                _ => return Err(bad(x, "function application")),
            };
            Ok(HolTerm::FunApp {
                morphism: m.expect_atom("morphism")?.to_string(),
                sort: sort(s)?,
                arg: Box::new(term_from_sexp(arg)?),
                inclusion,
            })
        }
        _ => Err(bad(x, "term")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_of_a_restricted_generic() {
        let src = "(and (pred passed ((generic s student :restrictor (pred passed ((var s student) (ind logic Subject)) (student Subject))) (ind topology Subject)) (student Subject)))";
        let f = parse_formula(src).unwrap();
        assert_eq!(formula_to_sexp(&f), src);
    }

    #[test]
    fn round_trip_of_quantifiers_and_morphisms() {
        let src = "(forall h float (implies (not (lt (var h float) (ind 1.2 float))) (pred p ((fun a Animals (generic ⪍_Humans Humans) :inclusion)) (Animals))))";
        let f = parse_formula(src).unwrap();
        assert_eq!(formula_to_sexp(&f), src);
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(parse_formula("(implies (pred p () ()))").is_err());
        assert!(parse_formula("(pred p (x) ())").is_err());
        assert!(parse_formula("(generic s)").is_err());
    }
}
