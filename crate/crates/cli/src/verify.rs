//! Range verification: every start in `[lo, hi]` must reach 1.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use arbor_core::dynamics::DEFAULT_STEP_LIMIT;
use arbor_core::{Error, MapVariant, Result};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub variant: MapVariant,
    pub shards: usize,
    /// Stop an orbit once it drops below its own start. Sound when `[1, lo)`
    /// is known to converge: every smaller value in range is checked too.
    pub assume_below: bool,
    pub step_limit: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            variant: MapVariant::Shortcut,
            shards: 1,
            assume_below: false,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Record<T> {
    pub value: u128,
    #[serde(flatten)]
    pub measure: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Steps {
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Peak {
    pub peak: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub lo: u128,
    pub hi: u128,
    pub variant: MapVariant,
    pub assume_below: bool,
    pub all_converged: bool,
    /// Longest orbit; ties go to the smallest start.
    pub max_steps: Record<Steps>,
    /// Highest excursion; ties go to the smallest start.
    pub max_peak: Record<Peak>,
    /// Starts that exhausted the step budget.
    pub failures: Vec<u128>,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl VerifyReport {
    /// Equality of everything except wall-clock time.
    pub fn same_aggregate(&self, other: &VerifyReport) -> bool {
        VerifyReport { elapsed: Duration::ZERO, ..self.clone() }
            == VerifyReport { elapsed: Duration::ZERO, ..other.clone() }
    }
}

struct Partial {
    max_steps: Record<Steps>,
    max_peak: Record<Peak>,
    failures: Vec<u128>,
}

impl Partial {
    fn new(first: u128) -> Self {
        Partial {
            max_steps: Record { value: first, measure: Steps { steps: 0 } },
            max_peak: Record { value: first, measure: Peak { peak: 0 } },
            failures: Vec::new(),
        }
    }

    /// Fold in a later (larger-start) partial; strict comparisons keep the
    /// smallest start on ties.
    fn absorb(&mut self, later: Partial) {
        if later.max_steps.measure > self.max_steps.measure {
            self.max_steps = later.max_steps;
        }
        if later.max_peak.measure > self.max_peak.measure {
            self.max_peak = later.max_peak;
        }
        self.failures.extend(later.failures);
    }
}

enum Outcome {
    Converged { steps: u64, peak: u128 },
    Exhausted,
}

fn orbit(start: u128, opts: &VerifyOptions) -> Result<Outcome> {
    let floor = if opts.assume_below { start } else { 2 };
    let mut x = start;
    let mut peak = start;
    let mut steps: u64 = 0;
    while x >= floor && x != 1 {
        if steps >= opts.step_limit {
            return Ok(Outcome::Exhausted);
        }
        if x % 2 == 0 {
            let run = if opts.assume_below {
                1
            } else {
                u64::from(x.trailing_zeros()).min(opts.step_limit - steps)
            };
            x >>= run;
            steps += run;
            continue;
        }
        let up = x.checked_mul(3).and_then(|v| v.checked_add(1)).ok_or(Error::Overflow)?;
        x = match opts.variant {
            MapVariant::Shortcut => up >> 1,
            MapVariant::Classic => up,
        };
        steps += 1;
        peak = peak.max(x);
    }
    Ok(Outcome::Converged { steps, peak })
}

fn scan(range: RangeInclusive<u128>, opts: &VerifyOptions) -> Result<Partial> {
    let mut part = Partial::new(*range.start());
    for d in range {
        match orbit(d, opts)? {
            Outcome::Converged { steps, peak } => {
                if steps > part.max_steps.measure.steps {
                    part.max_steps = Record { value: d, measure: Steps { steps } };
                }
                if peak > part.max_peak.measure.peak {
                    part.max_peak = Record { value: d, measure: Peak { peak } };
                }
            }
            Outcome::Exhausted => part.failures.push(d),
        }
    }
    Ok(part)
}

/// Split `[lo, hi]` into `shards` contiguous pieces of near-equal length.
fn shard_ranges(lo: u128, hi: u128, shards: usize) -> Vec<RangeInclusive<u128>> {
    let total = hi - lo + 1;
    let shards = (shards.max(1) as u128).min(total);
    let base = total / shards;
    let extra = total % shards;
    let mut start = lo;
    (0..shards)
        .map(|i| {
            let len = base + u128::from(i < extra);
            let r = start..=start + len - 1;
            start += len;
            r
        })
        .collect()
}

pub fn batch_verify(lo: u128, hi: u128, opts: &VerifyOptions) -> Result<VerifyReport> {
    if lo == 0 {
        return Err(Error::Zero);
    }
    if lo > hi {
        return Err(Error::Precondition(format!("empty range [{lo}, {hi}]")));
    }
    let began = Instant::now();
    let ranges = shard_ranges(lo, hi, opts.shards);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ranges.len())
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let parts = pool.install(|| {
        ranges
            .into_par_iter()
            .map(|r| scan(r, opts))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut parts = parts.into_iter();
    let mut total = parts.next().expect("at least one shard");
    for p in parts {
        total.absorb(p);
    }
    Ok(VerifyReport {
        lo,
        hi,
        variant: opts.variant,
        assume_below: opts.assume_below,
        all_converged: total.failures.is_empty(),
        max_steps: total.max_steps,
        max_peak: total.max_peak,
        failures: total.failures,
        elapsed: began.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use arbor_core::trajectory;

    fn opts(shards: usize) -> VerifyOptions {
        VerifyOptions { shards, ..Default::default() }
    }

    #[test]
    fn single_root() {
        let r = batch_verify(1, 1, &opts(1)).unwrap();
        assert!(r.all_converged);
        assert_eq!(r.max_steps, Record { value: 1, measure: Steps { steps: 0 } });
    }

    #[test]
    fn twenty_seven() {
        let r = batch_verify(27, 27, &opts(1)).unwrap();
        assert_eq!(r.max_steps.measure.steps, 70);
        assert_eq!(r.max_peak.measure.peak, 4616);
    }

    #[test]
    fn matches_trajectory_oracle() {
        for variant in [MapVariant::Shortcut, MapVariant::Classic] {
            let o = VerifyOptions { variant, ..Default::default() };
            for d in 1..=3_000u128 {
                let r = batch_verify(d, d, &o).unwrap();
                let t = trajectory(&d, variant, 1 << 16).unwrap();
                assert_eq!((r.max_steps.measure.steps, r.max_peak.measure.peak), (t.steps, t.peak), "{d}");
            }
        }
    }

    #[test]
    fn shard_count_does_not_change_the_aggregate() {
        let one = batch_verify(1, 100_000, &opts(1)).unwrap();
        for shards in [2, 3, 8, 13] {
            assert!(one.same_aggregate(&batch_verify(1, 100_000, &opts(shards)).unwrap()));
        }
    }

    #[test]
    fn step_budget_failures_are_recorded() {
        let o = VerifyOptions { step_limit: 20, ..Default::default() };
        let r = batch_verify(1, 30, &o).unwrap();
        assert!(!r.all_converged);
        assert!(r.failures.contains(&27));
        assert!(!r.failures.contains(&8));
    }

    #[test]
    fn assume_below_stops_at_the_start() {
        let o = VerifyOptions { assume_below: true, ..Default::default() };
        let r = batch_verify(1, 10_000, &o).unwrap();
        assert!(r.all_converged);
        let r = batch_verify(27, 27, &o).unwrap();
        assert!(r.max_steps.measure.steps < 70);
    }

    #[test]
    fn ranges_cover_exactly() {
        let rs = shard_ranges(5, 104, 7);
        assert_eq!(rs.len(), 7);
        assert_eq!(*rs[0].start(), 5);
        assert_eq!(*rs[6].end(), 104);
        assert!(rs.windows(2).all(|w| *w[0].end() + 1 == *w[1].start()));
        assert_eq!(shard_ranges(1, 1, 8).len(), 1);
    }

    #[test]
    fn bad_ranges() {
        assert_eq!(batch_verify(0, 5, &opts(1)).unwrap_err(), Error::Zero);
        assert!(batch_verify(5, 4, &opts(1)).is_err());
    }
}
