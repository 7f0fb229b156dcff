use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// A bounded interval of rationals with independently open or closed ends.
///
/// Text form is the usual bracket notation, e.g. `(0,2]` or `[-3/2,-1/2]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl RatInterval {
    pub fn closed(lo: Rat, hi: Rat) -> Self {
        RatInterval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    /// `(lo, hi]`.
    pub fn open_closed(lo: Rat, hi: Rat) -> Self {
        RatInterval {
            lo,
            hi,
            lo_open: true,
            hi_open: false,
        }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval::closed(x.clone(), x)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }

    pub fn is_point(&self) -> bool {
        !self.is_empty() && self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = if self.lo_open { x > &self.lo } else { x >= &self.lo };
        let below = if self.hi_open { x < &self.hi } else { x <= &self.hi };
        above && below
    }

    pub fn intersect(&self, other: &RatInterval) -> RatInterval {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_open),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_open),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_open),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_open),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        RatInterval {
            lo,
            hi,
            lo_open,
            hi_open,
        }
    }

    /// Tightens the lower end to `x` (closed) if that is stricter.
    pub fn at_least(&self, x: Rat) -> RatInterval {
        self.intersect(&RatInterval::closed(x, self.hi.clone().max(self.lo.clone())))
    }

    /// Tightens the upper end to `x` (closed) if that is stricter.
    pub fn at_most(&self, x: Rat) -> RatInterval {
        self.intersect(&RatInterval::closed(self.lo.clone().min(self.hi.clone()), x))
    }

    pub fn max_abs(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / 2
    }

    /// Image of the interval under `x ↦ (x - center)²`.
    pub fn squared_distance_image(&self, center: &Rat) -> RatInterval {
        debug_assert!(!self.is_empty());
        let dlo = (&self.lo - center).square();
        let dhi = (&self.hi - center).square();
        let (min, min_open) = if &self.lo <= center && center <= &self.hi {
            (Rat::zero(), !self.contains(center))
        } else if center < &self.lo {
            (dlo.clone(), self.lo_open)
        } else {
            (dhi.clone(), self.hi_open)
        };
        let (max, max_open) = match dlo.cmp(&dhi) {
            std::cmp::Ordering::Greater => (dlo, self.lo_open),
            std::cmp::Ordering::Less => (dhi, self.hi_open),
            std::cmp::Ordering::Equal => (dlo, self.lo_open && self.hi_open),
        };
        RatInterval {
            lo: min,
            hi: max,
            lo_open: min_open,
            hi_open: max_open,
        }
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo.to_fraction_string(),
            self.hi.to_fraction_string(),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RatInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("malformed interval `{s}`"));
        let lo_open = match s.chars().next() {
            Some('(') => true,
            Some('[') => false,
            _ => return Err(bad()),
        };
        let hi_open = match s.chars().last() {
            Some(')') => true,
            Some(']') => false,
            _ => return Err(bad()),
        };
        if s.len() < 2 {
            return Err(bad());
        }
        let inner = &s[1..s.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let lo: Rat = a.parse().map_err(|_| bad())?;
        let hi: Rat = b.parse().map_err(|_| bad())?;
        Ok(RatInterval {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }
}

impl Serialize for RatInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A box in the `(b, T)` slice. `T` must stay inside `(0, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub b: RatInterval,
    #[serde(rename = "T")]
    pub t_sq: RatInterval,
}

impl Region {
    pub fn new(b: RatInterval, t_sq: RatInterval) -> Result<Self> {
        let region = Region { b, t_sq };
        region.validate()?;
        Ok(region)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.is_empty() {
            return Err(Error::EmptyRegion(format!("b-range {} is empty", self.b)));
        }
        if self.t_sq.is_empty() {
            return Err(Error::EmptyRegion(format!("T-range {} is empty", self.t_sq)));
        }
        if self.t_sq.lo.is_negative() || (self.t_sq.lo.is_zero() && !self.t_sq.lo_open) {
            return Err(Error::EmptyRegion(format!(
                "T-range {} must lie inside (0, oo)",
                self.t_sq
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> RatInterval {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let i = iv("(0, 2]");
        assert!(i.lo_open && !i.hi_open);
        assert_eq!(i.to_string(), "(0/1,2/1]");
        assert_eq!(iv(&i.to_string()), i);
        assert!("0,2".parse::<RatInterval>().is_err());
        assert!("[0;2]".parse::<RatInterval>().is_err());
        assert!("[0.5,2]".parse::<RatInterval>().is_err());
    }

    #[test]
    fn emptiness_and_membership() {
        assert!(iv("(1,1]").is_empty());
        assert!(!iv("[1,1]").is_empty());
        assert!(iv("[2,1]").is_empty());
        let i = iv("(0,2]");
        assert!(!i.contains(&Rat::zero()));
        assert!(i.contains(&Rat::from_int(2)));
        assert!(iv("[0,1]").intersect(&iv("(1,2]")).is_empty());
        assert!(!iv("[0,1]").intersect(&iv("[1,2]")).is_empty());
    }

    #[test]
    fn squared_distance_image_endpoints() {
        let img = iv("[-3,-1]").squared_distance_image(&Rat::from_int(-2));
        assert_eq!(img, iv("[0,1]"));
        let img = iv("(0,2]").squared_distance_image(&Rat::zero());
        assert_eq!(img, iv("(0,4]"));
        let img = iv("(1,2)").squared_distance_image(&Rat::zero());
        assert_eq!(img, iv("(1,4)"));
        let img = iv("[-1,1)").squared_distance_image(&Rat::from_int(3));
        assert_eq!(img, iv("(4,16]"));
    }

    #[test]
    fn region_validation() {
        assert!(Region::new(iv("[0,1]"), iv("(0,1]")).is_ok());
        assert!(Region::new(iv("[0,1]"), iv("[0,1]")).is_err());
        assert!(Region::new(iv("[1,0]"), iv("(0,1]")).is_err());
        assert!(Region::new(iv("[0,1]"), iv("[-1,1]")).is_err());
    }
}
