//! The System F core: types, terms, substitution, type checking and
//! normalisation.

mod check;
mod reduce;
mod signature;
mod subst;
mod surface;
mod term;
mod types;

pub use check::{type_of, Env, TermPath, TypeError, TypeErrorKind};
pub use reduce::{
    contract, is_normal, normalize, normalize_checked, reduce_step, Normalized, ReduceError, DEFAULT_FUEL,
};
pub use signature::{Signature, SignatureError};
pub use subst::{subst_term, SubstError, SubstType};
pub use surface::{parse_term, parse_type, term_from_sexp, type_from_sexp, SurfaceError};
pub use term::{alpha_eq, Arg, Term};
pub use types::{Type, PROP};
