//! Recession regimes from GDP growth.

use alloc::vec::Vec;

use crate::quarter::Window;
use crate::series::QuarterlySeries;
use crate::{CountryCode, Error, Quarter, Result};

/// Which growth values count as a recession quarter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RecessionRule {
    /// Growth `<= 0`: every non-growing quarter.
    #[default]
    NonGrowing,
    /// Growth `< 0` only.
    Contracting,
}

/// Per-quarter recession flags (`true` = recession), aligned like a
/// [`QuarterlySeries`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegimeSeries {
    pub country: CountryCode,
    pub start: Quarter,
    pub flags: Vec<Option<bool>>,
}

impl RegimeSeries {
    pub fn get(&self, q: Quarter) -> Option<bool> {
        let t = self.start.quarters_until(q);
        if t < 0 {
            return None;
        }
        self.flags.get(t as usize).copied().flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Quarter, Option<bool>)> + '_ {
        self.flags
            .iter()
            .enumerate()
            .map(move |(t, f)| (self.start.offset(t as i64), *f))
    }

    /// Number of quarters in `window` with a defined flag.
    pub fn defined_in(&self, window: Window) -> usize {
        self.iter()
            .filter(|(q, f)| window.contains(*q) && f.is_some())
            .count()
    }
}

/// Recession dummy with the default non-growing rule.
pub fn recession_dummy(gdp: &QuarterlySeries) -> Result<RegimeSeries> {
    recession_dummy_with(gdp, RecessionRule::NonGrowing)
}

/// Flags quarter `t` when log GDP growth `log g_t − log g_{t−1}` is
/// non-positive (or negative, under [`RecessionRule::Contracting`]).
///
/// The first quarter has no growth and is flagged `false`. Missing GDP at
/// `t` or `t − 1` leaves the flag missing. Since `log` is increasing, the
/// sign of log growth is decided by comparing levels directly, which also
/// keeps the dummy exactly invariant to rescaling GDP.
pub fn recession_dummy_with(gdp: &QuarterlySeries, rule: RecessionRule) -> Result<RegimeSeries> {
    if gdp.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: gdp.len(),
        });
    }
    if let Some((quarter, value)) = gdp
        .iter()
        .find_map(|(q, v)| v.filter(|v| !(*v > 0.0)).map(|v| (q, v)))
    {
        return Err(Error::NonPositiveGdp { quarter, value });
    }
    let v = gdp.values();
    let mut flags = Vec::with_capacity(v.len());
    flags.push(v[0].map(|_| false));
    for w in v.windows(2) {
        flags.push(match (w[0], w[1]) {
            (Some(prev), Some(cur)) => Some(match rule {
                RecessionRule::NonGrowing => cur <= prev,
                RecessionRule::Contracting => cur < prev,
            }),
            _ => None,
        });
    }
    Ok(RegimeSeries {
        country: gdp.country(),
        start: gdp.start(),
        flags,
    })
}

/// Number of recession quarters inside the inclusive `window`.
pub fn count_recessions(r: &RegimeSeries, window: Window) -> usize {
    r.iter()
        .filter(|(q, f)| window.contains(*q) && *f == Some(true))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn gdp(v: &[f64]) -> QuarterlySeries {
        QuarterlySeries::from_values("US".parse().unwrap(), "gdp", Quarter::new(1980, 1).unwrap(), v)
            .unwrap()
    }

    fn q(s: &str) -> Quarter {
        s.parse().unwrap()
    }

    #[test]
    fn dummy_example() {
        let r = recession_dummy(&gdp(&[100.0, 99.0, 99.0, 101.0])).unwrap();
        assert_eq!(r.flags, vec![Some(false), Some(true), Some(true), Some(false)]);
        let strict = recession_dummy_with(&gdp(&[100.0, 99.0, 99.0, 101.0]), RecessionRule::Contracting)
            .unwrap();
        assert_eq!(strict.flags, vec![Some(false), Some(true), Some(false), Some(false)]);
    }

    #[test]
    fn growing_gdp_has_no_recessions() {
        let v: Vec<f64> = (0..40).map(|t| 100.0 + t as f64).collect();
        let r = recession_dummy(&gdp(&v)).unwrap();
        assert!(r.flags.iter().all(|f| *f == Some(false)));
        assert_eq!(count_recessions(&r, Window::default_sample()), 0);
    }

    #[test]
    fn missing_gdp_gives_missing_flags() {
        let s = QuarterlySeries::new(
            "US".parse().unwrap(),
            "gdp",
            q("1980Q1"),
            vec![Some(1.0), None, Some(0.5), Some(0.4)],
        )
        .unwrap();
        let r = recession_dummy(&s).unwrap();
        assert_eq!(r.flags, vec![Some(false), None, None, Some(true)]);
        assert_eq!(r.defined_in(Window::new(q("1980Q1"), q("1980Q3")).unwrap()), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(recession_dummy(&gdp(&[1.0])), Err(Error::SeriesTooShort { .. })));
        assert!(matches!(
            recession_dummy(&gdp(&[1.0, 0.0])),
            Err(Error::NonPositiveGdp { .. })
        ));
    }

    #[test]
    fn window_is_inclusive() {
        let r = recession_dummy(&gdp(&[3.0, 2.0, 1.0, 0.5])).unwrap();
        let w = Window::new(q("1980Q2"), q("1980Q3")).unwrap();
        assert_eq!(count_recessions(&r, w), 2);
        let w = Window::new(q("1980Q4"), q("1980Q4")).unwrap();
        assert_eq!(count_recessions(&r, w), 1);
    }

    proptest! {
        #[test]
        fn counts_add_over_adjacent_windows(
            v in proptest::collection::vec(1.0f64..2.0, 2..80),
            split in 0usize..80,
        ) {
            let r = recession_dummy(&gdp(&v)).unwrap();
            let start = q("1980Q1");
            let end = start.offset(v.len() as i64 - 1);
            let mid = start.offset((split % v.len()) as i64);
            let whole = count_recessions(&r, Window::new(start, end).unwrap());
            let left = count_recessions(&r, Window::new(start, mid).unwrap());
            let right = if mid < end {
                count_recessions(&r, Window::new(mid.offset(1), end).unwrap())
            } else {
                0
            };
            prop_assert_eq!(whole, left + right);
        }

        #[test]
        fn scale_invariant(v in proptest::collection::vec(1.0f64..2.0, 2..60), k in 1e-3f64..1e3) {
            let a = recession_dummy(&gdp(&v)).unwrap();
            let scaled: Vec<f64> = v.iter().map(|x| x * k).collect();
            // Rescaling may round two distinct neighbours onto the same value.
            let collision = v.windows(2).zip(scaled.windows(2))
                .any(|(a, b)| (a[0] == a[1]) != (b[0] == b[1]) || (a[0] < a[1]) != (b[0] < b[1]));
            prop_assume!(!collision);
            let b = recession_dummy(&gdp(&scaled)).unwrap();
            prop_assert_eq!(a.flags, b.flags);
        }
    }
}
