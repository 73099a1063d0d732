//! Quarterly series and the transforms that build model proxies from raw
//! levels.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::quarter::Window;
use crate::{Error, Quarter, Result};

/// Two-letter uppercase country code (`AU`, `US`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "String", into = "String"))]
pub struct CountryCode([u8; 2]);

impl CountryCode {
    /// Panics unless both bytes are ASCII uppercase letters.
    pub const fn from_bytes(b: [u8; 2]) -> Self {
        assert!(b[0].is_ascii_uppercase() && b[1].is_ascii_uppercase());
        Self(b)
    }

    pub fn as_str(&self) -> &str {
        // Constructed only from ASCII uppercase letters.
        core::str::from_utf8(&self.0).unwrap_or("??")
    }
}

impl FromStr for CountryCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b = s.trim().as_bytes();
        if b.len() == 2 && b.iter().all(u8::is_ascii_uppercase) {
            Ok(Self([b[0], b[1]]))
        } else {
            Err(Error::InvalidCountryCode(s.to_string()))
        }
    }
}

impl fmt::Display for CountryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for CountryCode {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CountryCode> for String {
    fn from(c: CountryCode) -> Self {
        c.as_str().to_string()
    }
}

/// S&P market classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MarketClass {
    Developed,
    Emerging,
    Frontier,
}

impl MarketClass {
    pub const ALL: [MarketClass; 3] = [Self::Developed, Self::Emerging, Self::Frontier];

    pub fn letter(self) -> char {
        match self {
            Self::Developed => 'D',
            Self::Emerging => 'E',
            Self::Frontier => 'F',
        }
    }
}

impl FromStr for MarketClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "D" | "Developed" => Ok(Self::Developed),
            "E" | "Emerging" => Ok(Self::Emerging),
            "F" | "Frontier" => Ok(Self::Frontier),
            _ => Err(Error::InvalidArgument("market class must be D, E or F")),
        }
    }
}

impl fmt::Display for MarketClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// One variable of one country on a contiguous run of quarters.
///
/// Index `t` refers to `start.offset(t)`. Gaps are stored as `None`, never
/// skipped, so two series can always be aligned by quarter arithmetic.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuarterlySeries {
    country: CountryCode,
    name: String,
    start: Quarter,
    values: Vec<Option<f64>>,
}

impl QuarterlySeries {
    pub fn new(
        country: CountryCode,
        name: impl Into<String>,
        start: Quarter,
        values: Vec<Option<f64>>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        Ok(Self {
            country,
            name: name.into(),
            start,
            values,
        })
    }

    /// Builds a fully observed series.
    pub fn from_values(
        country: CountryCode,
        name: impl Into<String>,
        start: Quarter,
        values: &[f64],
    ) -> Result<Self> {
        Self::new(country, name, start, values.iter().map(|&v| Some(v)).collect())
    }

    pub fn country(&self) -> CountryCode {
        self.country
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> Quarter {
        self.start
    }

    /// Last quarter covered (present or missing).
    pub fn end(&self) -> Quarter {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn get(&self, q: Quarter) -> Option<f64> {
        let t = self.start.quarters_until(q);
        if t < 0 {
            return None;
        }
        self.values.get(t as usize).copied().flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Quarter, Option<f64>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(t, v)| (self.start.offset(t as i64), *v))
    }

    pub fn present(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.values.iter().filter_map(|v| *v)
    }

    pub fn present_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Applies `f` to every present value.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v.map(&mut f)).collect(),
            ..self.clone()
        }
    }

    /// Restricts the series to the quarters of `window`. Quarters of the
    /// window outside the series are not added.
    pub fn restrict(&self, window: Window) -> Result<Self> {
        let from = self.start.max(window.start);
        let to = self.end().min(window.end);
        if from > to {
            return Err(Error::NoOverlap);
        }
        let a = self.start.quarters_until(from) as usize;
        let b = self.start.quarters_until(to) as usize;
        Self::new(self.country, self.name.clone(), from, self.values[a..=b].to_vec())
    }

    /// Drops leading and trailing missing values.
    pub fn trim(&self) -> Result<Self> {
        let first = self.values.iter().position(Option::is_some);
        let last = self.values.iter().rposition(Option::is_some);
        match (first, last) {
            (Some(a), Some(b)) => Self::new(
                self.country,
                self.name.clone(),
                self.start.offset(a as i64),
                self.values[a..=b].to_vec(),
            ),
            _ => Err(Error::InsufficientData { needed: 1, got: 0 }),
        }
    }

    /// The longest run of consecutive present values, as a fully observed
    /// series. Ties go to the earliest run.
    pub fn longest_present_run(&self) -> Result<Self> {
        let mut best: Option<(usize, usize)> = None;
        let mut t = 0;
        while t < self.values.len() {
            if self.values[t].is_none() {
                t += 1;
                continue;
            }
            let a = t;
            while t < self.values.len() && self.values[t].is_some() {
                t += 1;
            }
            if best.map_or(true, |(ba, bb)| t - a > bb - ba) {
                best = Some((a, t));
            }
        }
        let (a, b) = best.ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
        Self::new(
            self.country,
            self.name.clone(),
            self.start.offset(a as i64),
            self.values[a..b].to_vec(),
        )
    }

    /// Combines two series on the intersection of their quarter ranges.
    /// The result is missing wherever either operand is missing.
    pub fn zip_with(
        &self,
        other: &QuarterlySeries,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        let from = self.start.max(other.start);
        let to = self.end().min(other.end());
        if from > to {
            return Err(Error::NoOverlap);
        }
        let n = from.quarters_until(to) as usize + 1;
        let values = (0..n)
            .map(|t| {
                let q = from.offset(t as i64);
                Some(f(self.get(q)?, other.get(q)?))
            })
            .collect();
        Self::new(self.country, self.name.clone(), from, values)
    }

    pub fn sub(&self, other: &QuarterlySeries) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

/// All raw series of one country.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountryDataset {
    pub code: CountryCode,
    pub market_class: MarketClass,
    pub cpi: QuarterlySeries,
    pub expected_cpi: QuarterlySeries,
    pub unemployment: QuarterlySeries,
    pub gdp: QuarterlySeries,
}

impl CountryDataset {
    pub fn new(
        code: CountryCode,
        market_class: MarketClass,
        cpi: QuarterlySeries,
        expected_cpi: QuarterlySeries,
        unemployment: QuarterlySeries,
        gdp: QuarterlySeries,
    ) -> Result<Self> {
        for s in [&cpi, &expected_cpi, &unemployment, &gdp] {
            if s.country() != code {
                return Err(Error::CountryMismatch {
                    expected: code,
                    found: s.country(),
                });
            }
        }
        Ok(Self {
            code,
            market_class,
            cpi,
            expected_cpi,
            unemployment,
            gdp,
        })
    }
}

/// Natural log of `v + c` for every present value.
pub fn shifted_log(s: &QuarterlySeries, c: f64) -> Result<QuarterlySeries> {
    if !(c >= 0.0) {
        return Err(Error::InvalidArgument("shift constant must be non-negative"));
    }
    if let Some((quarter, value)) = s
        .iter()
        .find_map(|(q, v)| v.filter(|v| !(v + c > 0.0)).map(|v| (q, v)))
    {
        return Err(Error::NonPositiveAfterShift {
            quarter,
            value,
            shift: c,
        });
    }
    Ok(s.map(|v| libm::log(v + c)))
}

/// `s_t - s_{t-1}`, starting one quarter after `s`.
pub fn first_diff(s: &QuarterlySeries) -> Result<QuarterlySeries> {
    if s.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: s.len(),
        });
    }
    let values = s
        .values
        .windows(2)
        .map(|w| Some(w[1]? - w[0]?))
        .collect();
    QuarterlySeries::new(s.country, s.name.clone(), s.start.offset(1), values)
}

/// Shifts `s` forward by `k` quarters: the result at quarter `q` is the value
/// of `s` at `q - k`.
pub fn lag(s: &QuarterlySeries, k: usize) -> Result<QuarterlySeries> {
    if k == 0 {
        return Err(Error::InvalidArgument("lag must be at least 1"));
    }
    if k >= s.len() {
        return Err(Error::SeriesTooShort {
            needed: k + 1,
            got: s.len(),
        });
    }
    QuarterlySeries::new(
        s.country,
        s.name.clone(),
        s.start.offset(k as i64),
        s.values[..s.len() - k].to_vec(),
    )
}

/// Quarterly inflation: first difference of `log(cpi + c)`.
pub fn inflation_proxy(cpi: &QuarterlySeries, c: f64) -> Result<QuarterlySeries> {
    first_diff(&shifted_log(cpi, c)?)
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub mean: f64,
    pub stddev: f64,
}

/// Mean and sample (n - 1) standard deviation over the present values.
pub fn describe(s: &QuarterlySeries) -> Result<Summary> {
    describe_values(s.present())
}

pub fn describe_values(values: impl Iterator<Item = f64> + Clone) -> Result<Summary> {
    let n = values.clone().count();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    Ok(Summary {
        mean,
        stddev: libm::sqrt(ss / (n - 1) as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn cc() -> CountryCode {
        "AU".parse().unwrap()
    }

    fn q(s: &str) -> Quarter {
        s.parse().unwrap()
    }

    fn series(values: &[f64]) -> QuarterlySeries {
        QuarterlySeries::from_values(cc(), "x", q("1980Q1"), values).unwrap()
    }

    fn close(a: &[Option<f64>], b: &[f64]) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| x.map_or(false, |x| (x - y).abs() < 1e-12))
    }

    #[test]
    fn country_codes() {
        assert_eq!("US".parse::<CountryCode>().unwrap().as_str(), "US");
        assert!("us".parse::<CountryCode>().is_err());
        assert!("USA".parse::<CountryCode>().is_err());
    }

    #[test]
    fn empty_series_rejected() {
        assert!(QuarterlySeries::new(cc(), "x", q("1980Q1"), vec![]).is_err());
    }

    #[test]
    fn shifted_log_examples() {
        let e = core::f64::consts::E;
        let s = shifted_log(&series(&[1.0, e, e * e]), 0.0).unwrap();
        assert!(close(s.values(), &[0.0, 1.0, 2.0]));

        let s = shifted_log(&series(&[0.0, 0.0, 0.0]), 1.0).unwrap();
        assert!(close(s.values(), &[0.0, 0.0, 0.0]));

        let err = shifted_log(&series(&[-2.0, 5.0]), 1.0).unwrap_err();
        assert!(matches!(err, Error::NonPositiveAfterShift { .. }));
    }

    #[test]
    fn shifted_log_keeps_missing() {
        let s = QuarterlySeries::new(cc(), "x", q("1980Q1"), vec![Some(1.0), None]).unwrap();
        let l = shifted_log(&s, 0.0).unwrap();
        assert_eq!(l.values(), &[Some(0.0), None]);
    }

    #[test]
    fn first_diff_examples() {
        let d = first_diff(&series(&[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(d.start(), q("1980Q2"));
        assert!(close(d.values(), &[1.0, 1.0]));

        let d = first_diff(&series(&[5.0, 5.0, 5.0])).unwrap();
        assert!(close(d.values(), &[0.0, 0.0]));

        let s = QuarterlySeries::new(cc(), "x", q("1980Q1"), vec![Some(1.0), None, Some(3.0)])
            .unwrap();
        assert_eq!(first_diff(&s).unwrap().values(), &[None, None]);

        assert!(matches!(
            first_diff(&series(&[1.0])),
            Err(Error::SeriesTooShort { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn lag_examples() {
        let s = series(&[1.0, 2.0, 3.0]);
        let l1 = lag(&s, 1).unwrap();
        assert_eq!(l1.start(), q("1980Q2"));
        assert!(close(l1.values(), &[1.0, 2.0]));
        let l2 = lag(&s, 2).unwrap();
        assert_eq!(l2.start(), q("1980Q3"));
        assert!(close(l2.values(), &[1.0]));
        assert_eq!(lag(&l1, 1).unwrap(), l2);
        assert_eq!(l1.get(q("1980Q3")), s.get(q("1980Q2")));
        assert!(lag(&s, 0).is_err());
        assert!(lag(&s, 3).is_err());
    }

    #[test]
    fn inflation_examples() {
        let p = inflation_proxy(&series(&[100.0, 101.0]), 0.0).unwrap();
        assert!((p.values()[0].unwrap() - libm::log(1.01)).abs() < 1e-15);
        assert!((p.values()[0].unwrap() - 0.00995).abs() < 1e-5);

        let p = inflation_proxy(&series(&[120.0; 8]), 1.0).unwrap();
        assert!(p.present().all(|v| v == 0.0));
    }

    #[test]
    fn describe_examples() {
        let s = describe(&series(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!((s.mean, s.stddev), (1.0, 0.0));
        let s = describe(&series(&[0.0, 2.0])).unwrap();
        assert_eq!(s.mean, 1.0);
        assert!((s.stddev - core::f64::consts::SQRT_2).abs() < 1e-15);
        let one = QuarterlySeries::new(cc(), "x", q("1980Q1"), vec![Some(1.0), None]).unwrap();
        assert!(matches!(
            describe(&one),
            Err(Error::InsufficientData { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn zip_uses_intersection() {
        let a = series(&[1.0, 2.0, 3.0, 4.0]);
        let b = QuarterlySeries::new(cc(), "y", q("1980Q3"), vec![Some(10.0), None, Some(30.0)])
            .unwrap();
        let c = a.zip_with(&b, |x, y| x + y).unwrap();
        assert_eq!(c.start(), q("1980Q3"));
        assert_eq!(c.values(), &[Some(13.0), None]);
        let far = QuarterlySeries::from_values(cc(), "z", q("1990Q1"), &[1.0]).unwrap();
        assert_eq!(a.zip_with(&far, |x, _| x), Err(Error::NoOverlap));
    }

    #[test]
    fn longest_run_and_trim() {
        let s = QuarterlySeries::new(
            cc(),
            "x",
            q("1980Q1"),
            vec![None, Some(1.0), None, Some(2.0), Some(3.0), None],
        )
        .unwrap();
        let r = s.longest_present_run().unwrap();
        assert_eq!(r.start(), q("1980Q4"));
        assert!(close(r.values(), &[2.0, 3.0]));
        let t = s.trim().unwrap();
        assert_eq!(t.start(), q("1980Q2"));
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn restrict_clips_to_window() {
        let s = series(&[1.0, 2.0, 3.0, 4.0]);
        let w = Window::new(q("1979Q1"), q("1980Q2")).unwrap();
        let r = s.restrict(w).unwrap();
        assert_eq!(r.start(), q("1980Q1"));
        assert_eq!(r.len(), 2);
        assert!(s.restrict(Window::new(q("1990Q1"), q("1990Q4")).unwrap()).is_err());
    }

    fn arb_series() -> impl Strategy<Value = QuarterlySeries> {
        (
            1970i32..2000,
            1u8..=4,
            proptest::collection::vec(proptest::option::weighted(0.85, 0.5f64..200.0), 2..60),
        )
            .prop_map(|(y, qq, v)| {
                QuarterlySeries::new(cc(), "p", Quarter::new(y, qq).unwrap(), v).unwrap()
            })
    }

    proptest! {
        #[test]
        fn first_diff_bookkeeping(s in arb_series()) {
            let d = first_diff(&s).unwrap();
            prop_assert_eq!(d.start(), s.start().offset(1));
            prop_assert_eq!(d.len(), s.len() - 1);
        }

        #[test]
        fn lag_composes(s in arb_series()) {
            prop_assume!(s.len() > 2);
            prop_assert_eq!(lag(&lag(&s, 1).unwrap(), 1).unwrap(), lag(&s, 2).unwrap());
        }

        #[test]
        fn constant_growth_gives_constant_inflation(
            base in 1.0f64..500.0,
            ratio in 0.9f64..1.1,
            n in 3usize..60,
        ) {
            let v: Vec<f64> = (0..n).map(|t| base * libm::pow(ratio, t as f64)).collect();
            let p = inflation_proxy(&series(&v), 0.0).unwrap();
            let first = p.values()[0].unwrap();
            prop_assert!((first - libm::log(ratio)).abs() < 1e-9);
            for v in p.present() {
                prop_assert!((v - first).abs() < 1e-9);
            }
        }

        #[test]
        fn describe_mean_survives_self_concatenation(v in proptest::collection::vec(-10.0f64..10.0, 2..50)) {
            let once = describe(&series(&v)).unwrap();
            let mut twice = v.clone();
            twice.extend_from_slice(&v);
            let both = describe(&series(&twice)).unwrap();
            prop_assert!((once.mean - both.mean).abs() < 1e-12);
        }

        #[test]
        fn zip_is_defined_on_present_intersection(a in arb_series(), b in arb_series()) {
            if let Ok(c) = a.zip_with(&b, |x, y| x - y) {
                for (q, v) in c.iter() {
                    let expect = match (a.get(q), b.get(q)) {
                        (Some(x), Some(y)) => Some(x - y),
                        _ => None,
                    };
                    prop_assert_eq!(v, expect);
                }
                prop_assert_eq!(c.start(), a.start().max(b.start()));
                prop_assert_eq!(c.end(), a.end().min(b.end()));
            }
        }
    }
}
