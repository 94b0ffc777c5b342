use std::fmt;

use serde::{Deserialize, Serialize};

use super::rat::{self, Rat};
use crate::error::{Error, Result};

/// Real interval with optional infinite ends. `None` is -inf / +inf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "opt_rat")]
    pub lo: Option<Rat>,
    #[serde(with = "opt_rat")]
    pub hi: Option<Rat>,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Option<Rat>, hi: Option<Rat>, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a >= b {
                return Err(Error::Input(format!("empty interval: {a} >= {b}")));
            }
        }
        // Infinite ends are never closed.
        Ok(Interval {
            lo_closed: lo_closed && lo.is_some(),
            hi_closed: hi_closed && hi.is_some(),
            lo,
            hi,
        })
    }

    pub fn real_line() -> Self {
        Interval { lo: None, hi: None, lo_closed: false, hi_closed: false }
    }

    pub fn open(a: Rat, b: Rat) -> Self {
        Self::new(Some(a), Some(b), false, false).expect("a < b")
    }

    pub fn closed(a: Rat, b: Rat) -> Self {
        Self::new(Some(a), Some(b), true, true).expect("a < b")
    }

    /// `(a, +inf)` or `[a, +inf)`.
    pub fn from(a: Rat, closed: bool) -> Self {
        Interval { lo: Some(a), hi: None, lo_closed: closed, hi_closed: false }
    }

    /// `(0, +inf)`.
    pub fn half_line() -> Self {
        Self::from(rat::zero(), false)
    }

    /// Same ends, both closed where finite.
    pub fn closure(&self) -> Self {
        Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_closed: self.lo.is_some(),
            hi_closed: self.hi.is_some(),
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let lo_ok = match &self.lo {
            None => true,
            Some(a) => x > a || (self.lo_closed && x == a),
        };
        let hi_ok = match &self.hi {
            None => true,
            Some(b) => x < b || (self.hi_closed && x == b),
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = match &self.lo {
            None => "(-inf".to_string(),
            Some(a) => format!("{}{}", if self.lo_closed { '[' } else { '(' }, rat::to_string(a)),
        };
        let h = match &self.hi {
            None => "inf)".to_string(),
            Some(b) => format!("{}{}", rat::to_string(b), if self.hi_closed { ']' } else { ')' }),
        };
        write!(f, "{l}, {h}")
    }
}

mod opt_rat {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&crate::exact::rat::to_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Null => Ok(None),
            v => crate::exact::rat::from_json(&v).map(Some).map_err(serde::de::Error::custom),
        }
    }
}
