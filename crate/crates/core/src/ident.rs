//! Lowercase identifier tokens shared by the knowledge base and the rule language.

use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier {0:?}: expected [a-z][a-z0-9_]*")]
pub struct InvalidIdent(pub String);

/// Returns true if `s` matches `[a-z][a-z0-9_]*`.
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

macro_rules! ident_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Result<Self, InvalidIdent> {
                let s = s.into();
                if is_ident(&s) {
                    Ok(Self(s))
                } else {
                    Err(InvalidIdent(s))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl TryFrom<String> for $name {
            type Error = InvalidIdent;

            fn try_from(s: String) -> Result<Self, Self::Error> {
                Self::new(s)
            }
        }

        impl TryFrom<&str> for $name {
            type Error = InvalidIdent;

            fn try_from(s: &str) -> Result<Self, Self::Error> {
                Self::new(s)
            }
        }

        impl From<$name> for String {
            fn from(id: $name) -> String {
                id.0
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::str::FromStr for $name {
            type Err = InvalidIdent;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }
    };
}

ident_newtype!(
    /// A generic identifier: fact predicates, fact arguments and rule names.
    Ident
);
ident_newtype!(
    /// Identifier of a declared symptom.
    SymptomId
);
ident_newtype!(
    /// Identifier of a declared disease.
    DiseaseId
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_lowercase_tokens() {
        for ok in ["a", "tb", "night_sweat", "hepatitis_b", "x1_2"] {
            assert!(is_ident(ok), "{ok}");
        }
    }

    #[test]
    fn rejects_other_shapes() {
        for bad in ["", "_x", "1a", "Cough", "night-sweat", "a b", "AND", "é"] {
            assert!(!is_ident(bad), "{bad}");
            assert!(SymptomId::new(bad).is_err());
        }
    }

    #[test]
    fn serde_validates() {
        let id: DiseaseId = serde_json::from_str("\"tb\"").unwrap();
        assert_eq!(id.as_str(), "tb");
        assert!(serde_json::from_str::<DiseaseId>("\"T B\"").is_err());
    }
}
