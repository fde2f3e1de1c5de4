use std::fmt;

use serde::{Serialize, Serializer};

/// A count that may be infinite. Serializes as a JSON number or `"INFINITE"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinal {
    Finite(u64),
    Infinite,
}

impl Cardinal {
    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinal::Finite(n) => Some(n),
            Cardinal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Cardinal::Infinite
    }
}

impl From<usize> for Cardinal {
    fn from(n: usize) -> Self {
        Cardinal::Finite(n as u64)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Infinite => f.write_str("∞"),
        }
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinal::Finite(n) => s.serialize_u64(*n),
            Cardinal::Infinite => s.serialize_str("INFINITE"),
        }
    }
}
