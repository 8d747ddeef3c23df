use super::{Comparison, Connective, Formula, HolTerm, Quantifier};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrettyOptions {
    /// Hide inclusion morphisms, showing `loves(⪍_Brits, France)` for
    /// `loves(a(h(⪍_Brits)), France)`.
    pub elide_inclusions: bool,
}

// Binding strength; larger binds tighter.
const QUANT: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const ATOM: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Pred { .. } | Formula::Cmp { .. } => ATOM,
        Formula::Quant { .. } => QUANT,
        Formula::Conn { kind, .. } => match kind {
            Connective::Not => NOT,
            Connective::And => AND,
            Connective::Or => OR,
            Connective::Implies => IMPLIES,
        },
    }
}

/// Renders a formula with `¬ ∧ ∨ ⇒` binding in that order, `⇒` to the
/// right, and runs of quantifiers sharing one dot.
pub fn pretty(f: &Formula, opts: PrettyOptions) -> String {
    let mut out = String::new();
    formula(f, opts, &mut out);
    out
}

fn operand(f: &Formula, min: u8, opts: PrettyOptions, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        formula(f, opts, out);
        out.push(')');
    } else {
        formula(f, opts, out);
    }
}

fn formula(f: &Formula, opts: PrettyOptions, out: &mut String) {
    match f {
        Formula::Pred { name, args, .. } => {
            out.push_str(name);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    term(a, opts, out);
                }
                out.push(')');
            }
        }
        Formula::Cmp { kind, left, right } => {
            term(left, opts, out);
            out.push_str(match kind {
                Comparison::Lt => " < ",
                Comparison::Leq => " ≤ ",
            });
            term(right, opts, out);
        }
        Formula::Conn { kind: Connective::Not, operands } => {
            out.push('¬');
            for o in operands {
                operand(o, NOT, opts, out);
            }
        }
        Formula::Conn { kind: Connective::Implies, operands } => {
            for (i, o) in operands.iter().enumerate() {
                if i > 0 {
                    out.push_str(" ⇒ ");
                }
                let last = i + 1 == operands.len();
                operand(o, if last { IMPLIES } else { IMPLIES + 1 }, opts, out);
            }
        }
        Formula::Conn { kind, operands } => {
            let (sym, p) = if *kind == Connective::And { (" ∧ ", AND) } else { (" ∨ ", OR) };
            for (i, o) in operands.iter().enumerate() {
                if i > 0 {
                    out.push_str(sym);
                }
                operand(o, p + 1, opts, out);
            }
        }
        Formula::Quant { .. } => {
            let mut cur = f;
            let mut first = true;
            while let Formula::Quant { kind, var, sort, body } = cur {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push(match kind {
                    Quantifier::Forall => '∀',
                    Quantifier::Exists => '∃',
                });
                out.push_str(&format!("{var}:{sort}"));
                cur = body;
            }
            out.push_str(". ");
            formula(cur, opts, out);
        }
    }
}

fn term(t: &HolTerm, opts: PrettyOptions, out: &mut String) {
    match t {
        HolTerm::Individual { name, .. } | HolTerm::Var { name, .. } | HolTerm::Generic { name, .. } => {
            out.push_str(name)
        }
        HolTerm::FunApp { arg, inclusion: true, .. } if opts.elide_inclusions => term(arg, opts, out),
        HolTerm::FunApp { morphism, arg, .. } => {
            out.push_str(morphism);
            out.push('(');
            term(arg, opts, out);
            out.push(')');
        }
    }
}
