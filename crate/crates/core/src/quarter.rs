//! Calendar quarters.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use crate::Error;

/// A calendar quarter such as `1980Q1`.
///
/// Ordering follows the calendar. Quarters convert to and from a linear
/// index (`year * 4 + quarter - 1`) so that series can be indexed by offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "alloc::string::String", into = "alloc::string::String"))]
pub struct Quarter {
    year: i32,
    quarter: u8,
}

impl Quarter {
    pub fn new(year: i32, quarter: u8) -> Result<Self, Error> {
        if (1..=4).contains(&quarter) {
            Ok(Self { year, quarter })
        } else {
            Err(Error::InvalidQuarter(alloc::format!("{year}Q{quarter}")))
        }
    }

    pub const fn year(self) -> i32 {
        self.year
    }

    pub const fn quarter(self) -> u8 {
        self.quarter
    }

    pub const fn index(self) -> i64 {
        self.year as i64 * 4 + (self.quarter as i64 - 1)
    }

    pub fn from_index(index: i64) -> Self {
        Self {
            year: index.div_euclid(4) as i32,
            quarter: (index.rem_euclid(4) + 1) as u8,
        }
    }

    /// Moves `k` quarters forward (backward when negative).
    pub fn offset(self, k: i64) -> Self {
        Self::from_index(self.index() + k)
    }

    /// Signed number of quarters from `self` to `other`.
    pub fn quarters_until(self, other: Quarter) -> i64 {
        other.index() - self.index()
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Q{}", self.year, self.quarter)
    }
}

impl FromStr for Quarter {
    type Err = Error;

    /// Parses `YYYYQn`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidQuarter(s.to_string());
        let t = s.trim();
        let (y, q) = t.split_once(['Q', 'q']).ok_or_else(bad)?;
        if y.is_empty() || !y.bytes().all(|b| b.is_ascii_digit()) || q.len() != 1 {
            return Err(bad());
        }
        let year: i32 = y.parse().map_err(|_| bad())?;
        let quarter: u8 = q.parse().map_err(|_| bad())?;
        Quarter::new(year, quarter).map_err(|_| bad())
    }
}

impl TryFrom<alloc::string::String> for Quarter {
    type Error = Error;
    fn try_from(s: alloc::string::String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Quarter> for alloc::string::String {
    fn from(q: Quarter) -> Self {
        q.to_string()
    }
}

/// An inclusive range of quarters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    pub start: Quarter,
    pub end: Quarter,
}

impl Window {
    pub fn new(start: Quarter, end: Quarter) -> Result<Self, Error> {
        if start > end {
            return Err(Error::InvalidArgument("window start is after window end"));
        }
        Ok(Self { start, end })
    }

    /// The default sample, 1980Q1 through 2016Q1.
    pub fn default_sample() -> Self {
        Self {
            start: Quarter { year: 1980, quarter: 1 },
            end: Quarter { year: 2016, quarter: 1 },
        }
    }

    pub fn contains(&self, q: Quarter) -> bool {
        self.start <= q && q <= self.end
    }

    pub fn len(&self) -> usize {
        (self.start.quarters_until(self.end) + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `1980Q1:2016Q1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidQuarter(s.to_string()))?;
        Window::new(a.parse()?, b.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let q: Quarter = "1980Q1".parse().unwrap();
        assert_eq!(q, Quarter::new(1980, 1).unwrap());
        assert_eq!(alloc::format!("{q}"), "1980Q1");
        assert!("1980Q5".parse::<Quarter>().is_err());
        assert!("1980Q0".parse::<Quarter>().is_err());
        assert!("80-1".parse::<Quarter>().is_err());
        assert!("Q1".parse::<Quarter>().is_err());
    }

    #[test]
    fn offsets_cross_years() {
        let q = Quarter::new(1979, 4).unwrap();
        assert_eq!(q.offset(1), Quarter::new(1980, 1).unwrap());
        assert_eq!(q.offset(-4), Quarter::new(1978, 4).unwrap());
        assert_eq!(Quarter::from_index(q.index()), q);
    }

    #[test]
    fn ordering_is_calendar_order() {
        let a = Quarter::new(1999, 4).unwrap();
        let b = Quarter::new(2000, 1).unwrap();
        assert!(a < b);
        assert_eq!(a.quarters_until(b), 1);
    }

    #[test]
    fn default_window_has_145_quarters() {
        assert_eq!(Window::default_sample().len(), 145);
        let w: Window = "1990Q1:2016Q1".parse().unwrap();
        assert_eq!(w.len(), 105);
        assert!("2016Q1:1980Q1".parse::<Window>().is_err());
    }
}
