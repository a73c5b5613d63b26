use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// Outcome of a decision procedure.
///
/// `Yes` carries a certificate that can be re-checked independently, `No`
/// carries a bound-independent reason, and `Inconclusive` records the bounds
/// that were exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<C> {
    Yes(C),
    No {
        reason: String,
    },
    Inconclusive {
        reason: String,
        bounds: BTreeMap<String, u64>,
    },
}

impl<C> Verdict<C> {
    pub fn no(reason: impl Into<String>) -> Self {
        Verdict::No {
            reason: reason.into(),
        }
    }

    pub fn inconclusive<I, K>(reason: impl Into<String>, bounds: I) -> Self
    where
        I: IntoIterator<Item = (K, u64)>,
        K: Into<String>,
    {
        Verdict::Inconclusive {
            reason: reason.into(),
            bounds: bounds.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Verdict::Yes(c) => Some(c),
            _ => None,
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict::Yes(_) => None,
            Verdict::No { reason } | Verdict::Inconclusive { reason, .. } => Some(reason),
        }
    }

    pub fn outcome(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No { .. } => "no",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn map<D>(self, f: impl FnOnce(C) -> D) -> Verdict<D> {
        match self {
            Verdict::Yes(c) => Verdict::Yes(f(c)),
            Verdict::No { reason } => Verdict::No { reason },
            Verdict::Inconclusive { reason, bounds } => Verdict::Inconclusive { reason, bounds },
        }
    }
}

impl<C: Serialize> Serialize for Verdict<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            Verdict::Yes(c) => {
                map.serialize_entry("certificate", c)?;
                map.serialize_entry("outcome", "yes")?;
            }
            Verdict::No { reason } => {
                map.serialize_entry("outcome", "no")?;
                map.serialize_entry("reason", reason)?;
            }
            Verdict::Inconclusive { reason, bounds } => {
                map.serialize_entry("bounds", bounds)?;
                map.serialize_entry("outcome", "inconclusive")?;
                map.serialize_entry("reason", reason)?;
            }
        }
        map.end()
    }
}
