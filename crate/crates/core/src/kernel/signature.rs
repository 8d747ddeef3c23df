use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::types::{Type, PROP};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("constant `{0}` is already declared")]
    DuplicateConstant(String),
    #[error("sort `{sort}` used by `{constant}` is not registered")]
    UnknownSort { constant: String, sort: String },
    #[error("type of constant `{constant}` has free type variable `{var}`")]
    OpenType { constant: String, var: String },
}

/// Registered base sorts and typed constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeSet<String>,
    constants: BTreeMap<String, Type>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    /// An empty signature; the proposition sort `t` is always present.
    pub fn new() -> Self {
        Signature { sorts: BTreeSet::from([PROP.to_string()]), constants: BTreeMap::new() }
    }

    pub fn add_sort(&mut self, name: impl Into<String>) -> bool {
        self.sorts.insert(name.into())
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &str> {
        self.sorts.iter().map(String::as_str)
    }

    /// Declares a constant. Its type must be closed and only mention
    /// registered sorts.
    pub fn declare(&mut self, name: impl Into<String>, ty: Type) -> Result<(), SignatureError> {
        let name = name.into();
        if self.constants.contains_key(&name) {
            return Err(SignatureError::DuplicateConstant(name));
        }
        if let Some(var) = ty.free_vars().into_iter().next() {
            return Err(SignatureError::OpenType { constant: name, var });
        }
        if let Some(sort) = ty.base_sorts().into_iter().find(|s| !self.sorts.contains(s)) {
            return Err(SignatureError::UnknownSort { constant: name, sort });
        }
        self.constants.insert(name, ty);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.constants.get(name)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.constants.iter().map(|(k, v)| (k.as_str(), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn always_has_prop() {
        let sig = Signature::new();
        assert!(sig.has_sort("t"));
    }

    #[test]
    fn declare_rejects_duplicates_and_unknown_sorts() {
        let mut sig = Signature::new();
        sig.add_sort("e");
        sig.declare("p", Type::arrow(Type::base("e"), Type::prop())).unwrap();
        assert_eq!(sig.declare("p", Type::prop()), Err(SignatureError::DuplicateConstant("p".into())));
        assert!(matches!(sig.declare("q", Type::base("Dogs")), Err(SignatureError::UnknownSort { .. })));
        assert!(matches!(sig.declare("r", Type::var("X")), Err(SignatureError::OpenType { .. })));
        sig.declare("all", Type::forall("X", Type::arrow(Type::arrow(Type::var("X"), Type::prop()), Type::prop())))
            .unwrap();
    }
}
