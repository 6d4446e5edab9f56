use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BaselineHalf, RepeatedSolving, SieveStream, SplitGreedy, TwoPlayerProtocol};
use crate::error::{Error, Result};

/// The shipped two-player protocols, by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProtocolKind {
    P1,
    P1Grouped { eps: f64 },
    P3,
    Half,
    Sieve { eps: f64 },
}

impl ProtocolKind {
    pub const NAMES: [&'static str; 5] = ["p1", "p1g", "p3", "half", "sieve"];

    /// `eps` is required by `p1g` and `sieve` and ignored otherwise.
    pub fn from_name(name: &str, eps: Option<f64>) -> Result<Self> {
        let need = |what: &str| {
            eps.ok_or_else(|| Error::Invalid(format!("protocol {what} needs a grouping parameter eps")))
        };
        match name {
            "p1" => Ok(Self::P1),
            "p1g" => Ok(Self::P1Grouped { eps: need("p1g")? }),
            "p3" => Ok(Self::P3),
            "half" => Ok(Self::Half),
            "sieve" => Ok(Self::Sieve { eps: need("sieve")? }),
            other => Err(Error::Invalid(format!(
                "unknown protocol {other:?}; expected one of {}",
                Self::NAMES.join(", ")
            ))),
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Self::P1 => "p1",
            Self::P1Grouped { .. } => "p1g",
            Self::P3 => "p3",
            Self::Half => "half",
            Self::Sieve { .. } => "sieve",
        }
    }

    pub fn build(&self) -> Result<Box<dyn TwoPlayerProtocol>> {
        Ok(match *self {
            Self::P1 => Box::new(RepeatedSolving::exact()),
            Self::P1Grouped { eps } => Box::new(RepeatedSolving::grouped(eps)?),
            Self::P3 => Box::new(SplitGreedy),
            Self::Half => Box::new(BaselineHalf),
            Self::Sieve { eps } => Box::new(SieveStream::new(eps)?),
        })
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::P1Grouped { eps } | Self::Sieve { eps } => write!(f, "{}(eps={eps})", self.short_name()),
            _ => f.write_str(self.short_name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in ProtocolKind::NAMES {
            let kind = ProtocolKind::from_name(name, Some(0.5)).unwrap();
            assert_eq!(kind.short_name(), name);
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(serde_json::from_str::<ProtocolKind>(&json).unwrap(), kind);
            assert!(kind.build().is_ok());
        }
        assert!(ProtocolKind::from_name("p1g", None).is_err());
        assert!(ProtocolKind::from_name("p9", None).is_err());
        assert_eq!(
            serde_json::to_string(&ProtocolKind::P1Grouped { eps: 0.1 }).unwrap(),
            r#"{"kind":"p1_grouped","eps":0.1}"#
        );
    }
}
