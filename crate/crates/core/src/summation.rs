//! Compensated accumulation and the truncation engine shared by every
//! theta and Lambert-type series in the crate.
//!
//! Terms are added in ascending index order with Neumaier compensation, so a
//! given input always produces the same bits. Each term carries a magnitude
//! envelope (a majorant of `|term|` that decays monotonically once the series
//! is in its convergent regime); truncation and the tail estimate are driven
//! by the envelope so that oscillating factors such as `sin(nv)` cannot
//! trigger an early stop.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// When to stop summing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Absolute bound on the last term and on the estimated tail.
    pub tolerance: f64,
    /// Maximum number of terms.
    pub cap: usize,
    /// The empirical ratio of consecutive envelopes must be below this.
    pub ratio_guard: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tolerance: 1e-14,
            cap: 10_000,
            ratio_guard: 0.99,
        }
    }
}

impl TruncationPolicy {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// A truncated series value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Estimated bound on `|value - exact|`: the dropped tail plus a
    /// rounding allowance proportional to the summed term magnitudes.
    pub tail_bound: f64,
}

impl SeriesResult {
    /// A closed-form value: no terms, no tail.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            terms_used: 0,
            tail_bound: 0.0,
        }
    }

    /// `c * self + offset`, with the tail scaled accordingly.
    pub fn affine(self, c: f64, offset: f64) -> Self {
        Self {
            value: c * self.value + offset,
            terms_used: self.terms_used,
            tail_bound: c.abs() * self.tail_bound,
        }
    }
}

/// Linear combination of series results with bookkeeping of terms and tails.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tally {
    acc: CompensatedSum,
    terms: usize,
    tail: f64,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, coefficient: f64, part: &SeriesResult) -> &mut Self {
        self.acc.add(coefficient * part.value);
        self.terms += part.terms_used;
        self.tail += coefficient.abs() * part.tail_bound;
        self
    }

    pub fn constant(&mut self, value: f64) -> &mut Self {
        self.acc.add(value);
        self
    }

    pub fn finish(&self) -> SeriesResult {
        SeriesResult {
            value: self.acc.value(),
            terms_used: self.terms,
            tail_bound: self.tail,
        }
    }
}

/// One term of a series together with its magnitude envelope.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    pub value: f64,
    pub envelope: f64,
}

impl Term {
    pub fn new(value: f64, envelope: f64) -> Self {
        Self { value, envelope }
    }

    /// A term whose own magnitude is its envelope.
    pub fn plain(value: f64) -> Self {
        Self {
            value,
            envelope: value.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Summed {
    pub result: SeriesResult,
    /// Sum of envelopes; the natural scale of the series.
    pub magnitude: f64,
}

/// Relative rounding error charged per unit of summed envelope: a few ulps for
/// evaluating each term plus the final compensated sum.
const ROUNDING_ULPS: f64 = 4.0;

fn rounding_allowance(magnitude: f64) -> f64 {
    ROUNDING_ULPS * f64::EPSILON * magnitude
}

/// Sums `term(first) + term(first + 1) + ...` until the policy is met.
/// Stopping looks only at the truncation tail; the reported bound adds rounding.
pub(crate) fn sum_series<F>(policy: &TruncationPolicy, first: u64, mut term: F) -> Result<Summed>
where
    F: FnMut(u64) -> Term,
{
    let mut acc = CompensatedSum::new();
    let mut magnitude = 0.0;
    let mut prev_env = f64::NAN;
    let mut ratio = f64::NAN;
    let mut last = f64::NAN;

    for i in 0..policy.cap {
        let n = first + i as u64;
        let t = term(n);
        if !t.value.is_finite() || !t.envelope.is_finite() {
            return Err(Error::NonConvergence {
                cap: i + 1,
                last_term: t.value,
                ratio,
            });
        }
        acc.add(t.value);
        magnitude += t.envelope;
        last = t.envelope;
        let used = i + 1;

        if t.envelope == 0.0 {
            return Ok(Summed {
                result: SeriesResult {
                    value: acc.value(),
                    terms_used: used,
                    tail_bound: rounding_allowance(magnitude),
                },
                magnitude,
            });
        }
        if i > 0 {
            ratio = if prev_env == 0.0 {
                0.0
            } else {
                t.envelope / prev_env
            };
            if t.envelope < policy.tolerance && ratio < policy.ratio_guard {
                let tail = t.envelope * ratio / (1.0 - ratio);
                if tail <= policy.tolerance {
                    return Ok(Summed {
                        result: SeriesResult {
                            value: acc.value(),
                            terms_used: used,
                            tail_bound: tail + rounding_allowance(magnitude),
                        },
                        magnitude,
                    });
                }
            }
        }
        prev_env = t.envelope;
    }

    Err(Error::NonConvergence {
        cap: policy.cap,
        last_term: last,
        ratio,
    })
}
