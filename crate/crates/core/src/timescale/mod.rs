//! Truncated time scales.
//!
//! A time scale is stored as a finite, sorted list of disjoint closed
//! intervals. Degenerate intervals `[a, a]` are isolated points. What lies
//! beyond the last stored point is described by [`Tail`]: either the final
//! interval runs to `+inf`, or the scale was truncated and we only know the
//! forward jump of the last point.
//!
//! All queries are pure; a [`TimeScale`] never changes after construction.

mod decompose;
mod family;

pub use decompose::{Boundary, SegmentDecomposition};
pub use family::{FamilyName, FamilySpec};

use thiserror::Error;

/// Absolute tolerance used to decide membership `t ∈ T`.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimeScaleError {
    #[error("time scale has no intervals")]
    Empty,
    #[error("interval {index} [{start}, {end}] is out of order or overlaps its predecessor")]
    Overlap { index: usize, start: f64, end: f64 },
    #[error("time scale starts at {0} < 0")]
    NegativeStart(f64),
    #[error("non-finite endpoint in interval {0}")]
    NonFinite(usize),
    #[error("{0} is not a point of the time scale")]
    NotInScale(f64),
    #[error("invalid window [{from}, {to}]")]
    Window { from: f64, to: f64 },
    #[error("unknown time scale family `{0}`")]
    UnknownFamily(String),
    #[error("invalid family indices: {0}")]
    FamilyIndices(String),
    #[error("arithmetic on an infinite boundary (T_{0} = inf)")]
    InfiniteBoundary(usize),
    #[error("segment {0} is unbounded")]
    UnboundedSegment(usize),
}

pub type Result<T> = std::result::Result<T, TimeScaleError>;

/// A closed interval `[start, end]` of the time scale.
///
/// `accumulates` marks a right endpoint at which omitted points accumulate
/// from the right (a truncated family such as `{i + 1/(j+1)}`); such an
/// endpoint is right-dense even though the next stored point is further away.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
    pub accumulates: bool,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Self {
        Interval {
            start,
            end,
            accumulates: false,
        }
    }

    pub fn point(t: f64) -> Self {
        Interval::new(t, t)
    }

    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }
}

/// What immediately follows the last stored point of a truncated scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beyond {
    Unknown,
    /// Only right-scattered points from here on.
    ScatteredForever,
    /// One dense run to `+inf`.
    DenseForever,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// The last interval is `[start, +inf)`.
    Unbounded,
    /// The scale continues past the stored data; the last stored point jumps
    /// to `successor` (equal to it when the cut fell inside a dense run).
    Truncated { successor: f64, beyond: Beyond },
}

/// Eventual structure of the untruncated scale, when known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Asymptotics {
    Unknown,
    /// Both right-scattered and right-dense points are unbounded.
    Alternating,
    /// Finitely many dense runs, then right-scattered points only.
    EventuallyScattered,
    /// Finitely many right-scattered points, then dense to infinity.
    EventuallyDense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    RightScattered,
    RightDense,
}

/// One step of a walk through the scale from `t0` to `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    /// Continuous flow across a dense stretch.
    Flow { from: f64, to: f64 },
    /// Forward jump from the right-scattered point `at`.
    Jump { at: f64, mu: f64 },
    /// Omitted points between an accumulation endpoint and the next stored point.
    Gap { from: f64, to: f64 },
}

/// Maximal run of one point type, in scale order.
#[derive(Debug, Clone, PartialEq)]
pub enum Run {
    Dense { start: f64, end: f64 },
    Scattered {
        start: f64,
        points: Vec<(f64, f64)>,
        /// The run begins with points omitted by truncation.
        omitted_prefix: bool,
    },
}

impl Run {
    pub fn start(&self) -> f64 {
        match self {
            Run::Dense { start, .. } | Run::Scattered { start, .. } => *start,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Spot {
    /// `start <= t < end` of interval k.
    Interior(usize),
    /// `t` is the right endpoint of interval k.
    RightEnd(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    intervals: Vec<Interval>,
    tail: Tail,
    asymptotics: Asymptotics,
}

impl TimeScale {
    /// Validates and builds a scale from raw parts.
    pub fn new(mut intervals: Vec<Interval>, tail: Tail, asymptotics: Asymptotics) -> Result<Self> {
        if intervals.is_empty() {
            return Err(TimeScaleError::Empty);
        }
        if let Tail::Unbounded = tail {
            intervals.last_mut().unwrap().end = f64::INFINITY;
        }
        let last = intervals.len() - 1;
        for (k, iv) in intervals.iter().enumerate() {
            if !iv.start.is_finite() || (k < last && !iv.end.is_finite()) || iv.end.is_nan() {
                return Err(TimeScaleError::NonFinite(k));
            }
            if iv.start > iv.end {
                return Err(TimeScaleError::Overlap {
                    index: k,
                    start: iv.start,
                    end: iv.end,
                });
            }
            if k > 0 && intervals[k - 1].end >= iv.start {
                return Err(TimeScaleError::Overlap {
                    index: k,
                    start: iv.start,
                    end: iv.end,
                });
            }
        }
        if intervals[0].start < 0.0 {
            return Err(TimeScaleError::NegativeStart(intervals[0].start));
        }
        if let Tail::Truncated { successor, .. } = tail {
            let end = intervals[last].end;
            if !end.is_finite() || !successor.is_finite() || successor < end {
                return Err(TimeScaleError::NonFinite(last));
            }
        }
        // the final endpoint's behaviour is governed by the tail
        intervals[last].accumulates = false;
        let asymptotics = match tail {
            Tail::Unbounded => Asymptotics::EventuallyDense,
            _ => asymptotics,
        };
        Ok(TimeScale {
            intervals,
            tail,
            asymptotics,
        })
    }

    /// Builds a scale from `(a_k, b_k)` pairs. With `unbounded_tail` the last
    /// interval is replaced by `[a_last, +inf)`; otherwise its right endpoint
    /// is the maximum of the scale.
    pub fn from_pairs(pairs: &[(f64, f64)], unbounded_tail: bool) -> Result<Self> {
        let intervals: Vec<Interval> = pairs.iter().map(|&(a, b)| Interval::new(a, b)).collect();
        let tail = if unbounded_tail {
            Tail::Unbounded
        } else {
            match intervals.last() {
                Some(iv) => Tail::Truncated {
                    successor: iv.end,
                    beyond: Beyond::Unknown,
                },
                None => return Err(TimeScaleError::Empty),
            }
        };
        TimeScale::new(intervals, tail, Asymptotics::Unknown)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn asymptotics(&self) -> Asymptotics {
        self.asymptotics
    }

    /// `T0 = inf T`.
    pub fn start(&self) -> f64 {
        self.intervals[0].start
    }

    /// Last stored point (`+inf` for an unbounded tail).
    pub fn end(&self) -> f64 {
        self.intervals.last().unwrap().end
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_ok()
    }

    /// Returns the scale point nearest to `t` within [`MEMBERSHIP_TOL`].
    pub fn snap(&self, t: f64) -> Result<f64> {
        Ok(match self.locate(t)? {
            Spot::Interior(_) => t,
            Spot::RightEnd(k) => self.intervals[k].end,
        })
    }

    fn locate(&self, t: f64) -> Result<Spot> {
        if !t.is_finite() {
            return Err(TimeScaleError::NotInScale(t));
        }
        // last interval whose start is <= t (within tolerance)
        let k = self
            .intervals
            .partition_point(|iv| iv.start <= t + MEMBERSHIP_TOL);
        if k == 0 {
            return Err(TimeScaleError::NotInScale(t));
        }
        let k = k - 1;
        let iv = &self.intervals[k];
        if (t - iv.end).abs() <= MEMBERSHIP_TOL {
            Ok(Spot::RightEnd(k))
        } else if t < iv.end {
            Ok(Spot::Interior(k))
        } else {
            Err(TimeScaleError::NotInScale(t))
        }
    }

    /// Forward jump of the right endpoint of interval `k`.
    fn right_jump(&self, k: usize) -> f64 {
        let iv = &self.intervals[k];
        if k + 1 < self.intervals.len() {
            if iv.accumulates {
                iv.end
            } else {
                self.intervals[k + 1].start
            }
        } else {
            match self.tail {
                Tail::Unbounded => iv.end,
                Tail::Truncated { successor, .. } => successor,
            }
        }
    }

    fn right_end_scattered(&self, k: usize) -> bool {
        self.right_jump(k) > self.intervals[k].end
    }

    /// Forward jump operator σ(t).
    pub fn sigma(&self, t: f64) -> Result<f64> {
        Ok(match self.locate(t)? {
            Spot::Interior(_) => t,
            Spot::RightEnd(k) => self.right_jump(k),
        })
    }

    /// Graininess μ(t) = σ(t) − t.
    pub fn mu(&self, t: f64) -> Result<f64> {
        Ok(match self.locate(t)? {
            Spot::Interior(_) => 0.0,
            Spot::RightEnd(k) => self.right_jump(k) - self.intervals[k].end,
        })
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        Ok(if self.mu(t)? > 0.0 {
            PointClass::RightScattered
        } else {
            PointClass::RightDense
        })
    }

    /// True when `t` is the maximum of a bounded scale (σ(t) = t with no
    /// later points).
    pub fn is_max_point(&self, t: f64) -> bool {
        match (self.locate(t), self.tail) {
            (Ok(Spot::RightEnd(k)), Tail::Truncated { successor, .. }) => {
                k + 1 == self.intervals.len() && successor == self.intervals[k].end
            }
            _ => false,
        }
    }

    /// Right-scattered points in `[from, to)` with their graininess.
    pub fn scattered_points_in(&self, from: f64, to: f64) -> Result<Vec<(f64, f64)>> {
        if !(from <= to) || !self.contains(from) || !self.contains(to) {
            return Err(TimeScaleError::Window { from, to });
        }
        Ok(self
            .pieces(from, to)?
            .into_iter()
            .filter_map(|p| match p {
                Piece::Jump { at, mu } => Some((at, mu)),
                _ => None,
            })
            .collect())
    }

    /// Every right-scattered point stored in the scale.
    pub fn scattered_points(&self) -> Vec<(f64, f64)> {
        (0..self.intervals.len())
            .filter(|&k| self.intervals[k].end.is_finite() && self.right_end_scattered(k))
            .map(|k| {
                let b = self.intervals[k].end;
                (b, self.right_jump(k) - b)
            })
            .collect()
    }

    /// Walks the scale from `t0` to `t`: dense stretches become [`Piece::Flow`],
    /// every right-scattered `s ∈ [t0, t)` becomes a [`Piece::Jump`].
    pub fn pieces(&self, t0: f64, t: f64) -> Result<Vec<Piece>> {
        let s0 = self.locate(t0)?;
        let s1 = self.locate(t)?;
        let (k0, mut cursor) = match s0 {
            Spot::Interior(k) => (k, t0),
            Spot::RightEnd(k) => (k, self.intervals[k].end),
        };
        let (k1, target) = match s1 {
            Spot::Interior(k) => (k, t),
            Spot::RightEnd(k) => (k, self.intervals[k].end),
        };
        if k1 < k0 || (k1 == k0 && target < cursor) {
            return Err(TimeScaleError::Window { from: t0, to: t });
        }
        let mut out = Vec::new();
        let mut k = k0;
        loop {
            let iv = self.intervals[k];
            if k == k1 {
                if target > cursor {
                    out.push(Piece::Flow {
                        from: cursor,
                        to: target,
                    });
                }
                break;
            }
            if iv.end > cursor {
                out.push(Piece::Flow {
                    from: cursor,
                    to: iv.end,
                });
            }
            let next = self.intervals[k + 1].start;
            if iv.accumulates {
                out.push(Piece::Gap {
                    from: iv.end,
                    to: next,
                });
            } else {
                out.push(Piece::Jump {
                    at: iv.end,
                    mu: next - iv.end,
                });
            }
            k += 1;
            cursor = next;
        }
        Ok(out)
    }

    /// Maximal runs of scattered and dense points, in order.
    pub fn runs(&self) -> Vec<Run> {
        let mut runs: Vec<Run> = Vec::new();
        let last = self.intervals.len() - 1;
        for (k, iv) in self.intervals.iter().enumerate() {
            let scattered_end = iv.end.is_finite() && self.right_end_scattered(k);
            if !iv.is_degenerate() || !scattered_end {
                runs.push(Run::Dense {
                    start: iv.start,
                    end: iv.end,
                });
            }
            if !iv.end.is_finite() {
                continue;
            }
            if scattered_end {
                let entry = (iv.end, self.right_jump(k) - iv.end);
                match runs.last_mut() {
                    Some(Run::Scattered { points, .. }) => points.push(entry),
                    _ => runs.push(Run::Scattered {
                        start: iv.end,
                        points: vec![entry],
                        omitted_prefix: false,
                    }),
                }
            } else if iv.accumulates && k < last {
                runs.push(Run::Scattered {
                    start: iv.end,
                    points: Vec::new(),
                    omitted_prefix: true,
                });
            }
        }
        runs
    }

    /// Index of the run containing `t`.
    pub fn run_index_of(&self, runs: &[Run], t: f64) -> Result<usize> {
        let t = self.snap(t)?;
        let scattered = self.mu(t)? > 0.0;
        for (i, run) in runs.iter().enumerate() {
            match run {
                Run::Dense { start, end } if !scattered && *start <= t && t <= *end => return Ok(i),
                Run::Scattered { points, .. } if scattered && points.iter().any(|p| p.0 == t) => {
                    return Ok(i)
                }
                _ => {}
            }
        }
        Err(TimeScaleError::NotInScale(t))
    }

    /// Restricts the scale to `[T0, horizon]`.
    ///
    /// A cut inside a dense interval makes `horizon` the last point (σ = t).
    /// A cut in a gap keeps the preceding right-scattered point together with
    /// its original forward jump.
    pub fn restrict(&self, horizon: f64) -> Result<TimeScale> {
        let t0 = self.start();
        if !(horizon >= t0) || !horizon.is_finite() {
            return Err(TimeScaleError::Window {
                from: t0,
                to: horizon,
            });
        }
        let n = self
            .intervals
            .partition_point(|iv| iv.start <= horizon + MEMBERSHIP_TOL);
        let k = n - 1;
        let last = self.intervals.len() - 1;
        let iv = self.intervals[k];
        let mut kept: Vec<Interval> = self.intervals[..=k].to_vec();

        if horizon >= iv.end - MEMBERSHIP_TOL {
            if k == last {
                return Ok(self.clone());
            }
            let beyond = if self.asymptotics == Asymptotics::EventuallyScattered
                && self.intervals[k..].iter().all(|v| v.is_degenerate() && !v.accumulates)
                && self.right_end_scattered(k)
            {
                Beyond::ScatteredForever
            } else {
                Beyond::Unknown
            };
            let tail = Tail::Truncated {
                successor: self.right_jump(k),
                beyond,
            };
            return TimeScale::new(kept, tail, self.asymptotics);
        }

        // cut inside the dense part of interval k
        let beyond = match (k == last, self.tail) {
            (true, Tail::Unbounded) => Beyond::DenseForever,
            (true, Tail::Truncated { successor, beyond }) if successor == iv.end => beyond,
            _ => Beyond::Unknown,
        };
        kept[k].end = horizon;
        kept[k].accumulates = false;
        let tail = Tail::Truncated {
            successor: horizon,
            beyond: if beyond == Beyond::DenseForever {
                Beyond::DenseForever
            } else {
                Beyond::Unknown
            },
        };
        TimeScale::new(kept, tail, self.asymptotics)
    }

    /// The alternating scattered/dense segment decomposition.
    pub fn decompose(&self) -> SegmentDecomposition {
        SegmentDecomposition::of(self)
    }
}
