//! Parametric time scale families, truncated to finitely many blocks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Asymptotics, Beyond, Interval, Result, Tail, TimeScale, TimeScaleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    /// `[i/2, i/2 + 1/i^3]`
    Ex1,
    /// integers `i` together with `i + 1/(j+1)`, `j >= 2`
    Ex2,
    /// `[i/2, i/2 + 1/i]`
    Ex5,
    /// `[1,2] ∪ [3,7] ∪ {8, 9, ...}`
    Ex6,
    /// `[i/2 + 1/(i+1), i/2 + 1/i]`
    Ex8,
    /// `{1} ∪ {11} ∪ [12, inf)`
    Ex9,
}

impl FamilyName {
    pub const ALL: [FamilyName; 6] = [
        FamilyName::Ex1,
        FamilyName::Ex2,
        FamilyName::Ex5,
        FamilyName::Ex6,
        FamilyName::Ex8,
        FamilyName::Ex9,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Ex1 => "ex1",
            FamilyName::Ex2 => "ex2",
            FamilyName::Ex5 => "ex5",
            FamilyName::Ex6 => "ex6",
            FamilyName::Ex8 => "ex8",
            FamilyName::Ex9 => "ex9",
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = TimeScaleError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| TimeScaleError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub index_start: u32,
    pub index_max: u32,
    /// Truncation of the inner index `j` (ex2 only).
    pub inner_index_max: Option<u32>,
}

impl FamilySpec {
    pub fn new(name: FamilyName, index_start: u32, index_max: u32, inner_index_max: Option<u32>) -> Self {
        FamilySpec {
            name,
            index_start,
            index_max,
            inner_index_max,
        }
    }

    /// Generates the truncated scale. The ex6 integer tail always starts at 8
    /// and runs to `index_max`; ex9 has no free index.
    pub fn build(&self) -> Result<TimeScale> {
        let (i0, n) = (self.index_start, self.index_max);
        if i0 == 0 || n < i0 {
            return Err(TimeScaleError::FamilyIndices(format!(
                "need 1 <= index_start <= index_max, got {i0}..={n}"
            )));
        }
        let half = |i: u32| f64::from(i) / 2.0;
        let inv = |i: u32| 1.0 / f64::from(i);
        let alternating = |intervals: Vec<Interval>, successor: f64| {
            TimeScale::new(
                intervals,
                Tail::Truncated {
                    successor,
                    beyond: Beyond::Unknown,
                },
                Asymptotics::Alternating,
            )
        };
        match self.name {
            FamilyName::Ex1 => {
                let ivs = (i0..=n)
                    .map(|i| Interval::new(half(i), half(i) + inv(i).powi(3)))
                    .collect();
                alternating(ivs, half(n + 1))
            }
            FamilyName::Ex5 => {
                let ivs = (i0..=n)
                    .map(|i| Interval::new(half(i), half(i) + inv(i)))
                    .collect();
                alternating(ivs, half(n + 1))
            }
            FamilyName::Ex8 => {
                let ivs = (i0..=n)
                    .map(|i| Interval::new(half(i) + inv(i + 1), half(i) + inv(i)))
                    .collect();
                alternating(ivs, half(n + 1) + inv(n + 2))
            }
            FamilyName::Ex2 => {
                let inner = self.inner_index_max.ok_or_else(|| {
                    TimeScaleError::FamilyIndices("ex2 needs inner_index_max".into())
                })?;
                if inner < 2 {
                    return Err(TimeScaleError::FamilyIndices(format!(
                        "ex2 needs inner_index_max >= 2, got {inner}"
                    )));
                }
                let mut ivs = Vec::new();
                for i in i0..=n {
                    let base = f64::from(i);
                    ivs.push(Interval {
                        start: base,
                        end: base,
                        accumulates: true,
                    });
                    // ascending order: largest j first
                    for j in (2..=inner).rev() {
                        ivs.push(Interval::point(base + inv(j + 1)));
                    }
                }
                alternating(ivs, f64::from(n + 1))
            }
            FamilyName::Ex6 => {
                if n < 8 {
                    return Err(TimeScaleError::FamilyIndices(format!(
                        "ex6 needs index_max >= 8, got {n}"
                    )));
                }
                let mut ivs = vec![Interval::new(1.0, 2.0), Interval::new(3.0, 7.0)];
                ivs.extend((8..=n).map(|k| Interval::point(f64::from(k))));
                TimeScale::new(
                    ivs,
                    Tail::Truncated {
                        successor: f64::from(n + 1),
                        beyond: Beyond::ScatteredForever,
                    },
                    Asymptotics::EventuallyScattered,
                )
            }
            FamilyName::Ex9 => TimeScale::new(
                vec![
                    Interval::point(1.0),
                    Interval::point(11.0),
                    Interval::new(12.0, f64::INFINITY),
                ],
                Tail::Unbounded,
                Asymptotics::EventuallyDense,
            ),
        }
    }
}
