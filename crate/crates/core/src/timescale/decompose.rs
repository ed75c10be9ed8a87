//! Alternating scattered/dense segment boundaries `T0 <= T1 <= T2 <= ...`.
//!
//! Even segments `[T_2i, T_2i+1)` hold right-scattered points, odd segments
//! `[T_2i+1, T_2i+2)` are dense. `inf` marks a segment that never ends (or
//! never starts); `trunc` marks a boundary lying beyond the stored window.

use std::fmt;

use serde::ser::{Serialize, Serializer};

use super::{Beyond, Result, Run, Tail, TimeScale, TimeScaleError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Finite(f64),
    Infinity,
    Truncated,
}

impl Boundary {
    pub fn is_finite(&self) -> bool {
        matches!(self, Boundary::Finite(_))
    }

    /// The finite value; `index` is only used for the error message.
    pub fn value(&self, index: usize) -> Result<f64> {
        match self {
            Boundary::Finite(x) => Ok(*x),
            _ => Err(TimeScaleError::InfiniteBoundary(index)),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Finite(x) => write!(f, "{x}"),
            Boundary::Infinity => f.write_str("inf"),
            Boundary::Truncated => f.write_str("trunc"),
        }
    }
}

impl Serialize for Boundary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Boundary::Finite(x) => s.serialize_f64(*x),
            Boundary::Infinity => s.serialize_str("inf"),
            Boundary::Truncated => s.serialize_str("truncated"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SegmentDecomposition {
    /// `T0, T1, ...` up to and including the first non-finite marker.
    pub boundaries: Vec<Boundary>,
    /// Right-scattered points `(t, mu)` of each even segment `[T_2i, T_2i+1)`.
    pub scattered: Vec<Vec<(f64, f64)>>,
    /// Stored extent of each odd (dense) segment, clipped to the window.
    pub dense: Vec<(f64, f64)>,
}

impl SegmentDecomposition {
    pub(super) fn of(ts: &TimeScale) -> Self {
        let runs = ts.runs();
        let end_marker = |scattered_run: bool| -> Boundary {
            let beyond = match ts.tail() {
                Tail::Unbounded => Beyond::DenseForever,
                Tail::Truncated { beyond, .. } => beyond,
            };
            match (scattered_run, beyond) {
                (true, Beyond::ScatteredForever) | (false, Beyond::DenseForever) => Boundary::Infinity,
                _ => Boundary::Truncated,
            }
        };

        let mut boundaries = vec![Boundary::Finite(ts.start())];
        let mut scattered = Vec::new();
        let mut dense = Vec::new();
        let mut idx = 0;

        // a scale starting at a right-dense point has an empty first segment
        if let Some(Run::Dense { .. }) = runs.first() {
            boundaries.push(Boundary::Finite(ts.start()));
            scattered.push(Vec::new());
        }

        while idx < runs.len() {
            let last = idx + 1 == runs.len();
            match &runs[idx] {
                Run::Scattered { points, .. } => {
                    scattered.push(points.clone());
                    if last {
                        boundaries.push(end_marker(true));
                        break;
                    }
                    boundaries.push(Boundary::Finite(runs[idx + 1].start()));
                }
                Run::Dense { start, end } => {
                    let clipped = if end.is_finite() { *end } else { ts.end() };
                    dense.push((*start, clipped));
                    if !end.is_finite() {
                        boundaries.push(Boundary::Infinity);
                        break;
                    }
                    if last {
                        boundaries.push(end_marker(false));
                        break;
                    }
                    if start == end {
                        // empty dense run: points accumulate at `start`
                        boundaries.push(Boundary::Infinity);
                        break;
                    }
                    boundaries.push(Boundary::Finite(*end));
                }
            }
            idx += 1;
        }
        SegmentDecomposition {
            boundaries,
            scattered,
            dense,
        }
    }

    /// `T_j`; indices past the stored list repeat the final marker.
    pub fn boundary(&self, j: usize) -> Boundary {
        self.boundaries
            .get(j)
            .copied()
            .unwrap_or_else(|| *self.boundaries.last().unwrap())
    }

    /// Number of right-scattered points over all even segments.
    pub fn scattered_count(&self) -> usize {
        self.scattered.iter().map(Vec::len).sum()
    }

    /// Multi-line table with per-segment point counts.
    pub fn report(&self) -> String {
        let mut out = format!("{self}\n");
        for (j, pair) in self.boundaries.windows(2).enumerate() {
            let kind = if j % 2 == 0 { "scattered" } else { "dense" };
            let detail = if j % 2 == 0 {
                format!("{} points", self.scattered.get(j / 2).map_or(0, Vec::len))
            } else {
                match self.dense.get(j / 2) {
                    Some((a, b)) => format!("length {}", b - a),
                    None => "empty".into(),
                }
            };
            out.push_str(&format!(
                "  [T{j}, T{}) = [{}, {})  {kind}  {detail}\n",
                j + 1,
                pair[0],
                pair[1]
            ));
        }
        out
    }
}

impl fmt::Display for SegmentDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, b) in self.boundaries.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "T{j}={b}")?;
        }
        Ok(())
    }
}
