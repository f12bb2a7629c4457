//! Ultimate periodicity of `(L, k, κ)` sequences.
//!
//! The sequence is ultimately periodic iff some offset `A` satisfies
//!
//! ```text
//! κ(s, A + y) ≡ κ(1, A) · s · k^y   (mod L)   for all s ∈ [1, k-1], y ∈ ℕ,
//! ```
//!
//! in which case `L·k^A` is a period. If it is not, no equally spaced
//! subsequence is ultimately periodic either.

use rayon::prelude::*;

use crate::error::{GtmError, Result};
use crate::kappa::KappaSpec;
use crate::sequence::equally_spaced;

/// The sequence `k^e mod L` is eventually periodic: `residues[e]` for
/// `e < preperiod + period`, then repeating with `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerCycle {
    pub preperiod: usize,
    pub period: usize,
    residues: Vec<u32>,
}

impl PowerCycle {
    pub fn new(k: u32, modulus: u32) -> Self {
        let mut first_seen = vec![usize::MAX; modulus as usize];
        let mut residues = Vec::new();
        let mut r = 1 % modulus;
        loop {
            let seen = first_seen[r as usize];
            if seen != usize::MAX {
                return Self {
                    preperiod: seen,
                    period: residues.len() - seen,
                    residues,
                };
            }
            first_seen[r as usize] = residues.len();
            residues.push(r);
            r = ((u64::from(r) * u64::from(k)) % u64::from(modulus)) as u32;
        }
    }

    pub fn get(&self, y: usize) -> u32 {
        if y < self.preperiod {
            self.residues[y]
        } else {
            self.residues[self.preperiod + (y - self.preperiod) % self.period]
        }
    }
}

/// First `(s, y)` at which the congruence fails for a given offset `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Refutation {
    pub offset: usize,
    pub digit: u32,
    pub exponent: usize,
    /// `κ(1, A)·s·k^y mod L`.
    pub expected: u32,
    /// `κ(s, A + y)`.
    pub found: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicityVerdict {
    /// The congruence holds at `offset`; `period = L·k^offset` is a period and
    /// the sequence is purely periodic.
    Periodic {
        offset: usize,
        period: u64,
        /// `κ(1, A)`, the exponent of the root of unity `h`.
        multiplier: u32,
        /// Number of `y` values compared; covers every `y` by eventual periodicity.
        checked_through: usize,
    },
    /// No offset in `[0, offsets_end)` works, and none beyond can.
    NonPeriodic {
        offsets_end: usize,
        /// One refutation per searched offset, in offset order.
        refutations: Vec<Refutation>,
    },
    /// κ is known only up to `bound`; offsets consistent with the known columns
    /// are listed but nothing is concluded.
    UnknownUpToBound { bound: usize, consistent_offsets: Vec<usize> },
}

impl PeriodicityVerdict {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::Periodic { .. })
    }

    pub fn is_non_periodic(&self) -> bool {
        matches!(self, Self::NonPeriodic { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            Self::Periodic { .. } => "Periodic",
            Self::NonPeriodic { .. } => "NonPeriodic",
            Self::UnknownUpToBound { .. } => "UnknownUpToBound",
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Checks the congruence at `offset` for `y < horizon`.
fn first_failure(
    spec: &KappaSpec,
    cycle: &PowerCycle,
    offset: usize,
    horizon: usize,
) -> Result<Option<Refutation>> {
    let modulus = u64::from(spec.modulus());
    let c = u64::from(spec.kappa(1, offset)?);
    for y in 0..horizon {
        let ky = u64::from(cycle.get(y));
        for s in 1..spec.base() {
            let expected = ((c * u64::from(s)) % modulus * ky % modulus) as u32;
            let found = spec.kappa(s, offset + y)?;
            if expected != found {
                return Ok(Some(Refutation {
                    offset,
                    digit: s,
                    exponent: y,
                    expected,
                    found,
                }));
            }
        }
    }
    Ok(None)
}

fn period_for(spec: &KappaSpec, offset: usize) -> Result<u64> {
    u64::from(spec.base())
        .checked_pow(offset as u32)
        .and_then(|p| p.checked_mul(u64::from(spec.modulus())))
        .ok_or(GtmError::Overflow("period L·k^A"))
}

/// Decides ultimate periodicity exactly for eventually periodic κ.
///
/// For a fixed `A` both sides of the congruence are eventually periodic in `y`:
/// the left with preperiod `max(y0 - A, 0)` and period `p`, the right with the
/// preperiod and period of `k^y mod L`. Comparing `y` up to the larger
/// preperiod plus the lcm of the periods therefore decides all `y`.
///
/// Offsets `A ≥ y0` give the same left-hand stream and the same `κ(1, A)` as
/// `y0 + (A - y0) mod p`, so searching `A < y0 + p` is exhaustive.
///
/// Finite-window specs get [`PeriodicityVerdict::UnknownUpToBound`].
pub fn classify(spec: &KappaSpec) -> Result<PeriodicityVerdict> {
    let cycle = PowerCycle::new(spec.base(), spec.modulus());
    let Some((y0, p)) = spec.preperiod_period() else {
        let bound = spec.width();
        let mut consistent_offsets = Vec::new();
        for offset in 0..bound {
            if first_failure(spec, &cycle, offset, bound - offset)?.is_none() {
                consistent_offsets.push(offset);
            }
        }
        return Ok(PeriodicityVerdict::UnknownUpToBound {
            bound,
            consistent_offsets,
        });
    };

    let offsets_end = y0 + p;
    let mut refutations = Vec::with_capacity(offsets_end);
    for offset in 0..offsets_end {
        let horizon = cycle.preperiod.max(y0.saturating_sub(offset)) + lcm(cycle.period, p);
        match first_failure(spec, &cycle, offset, horizon)? {
            None => {
                return Ok(PeriodicityVerdict::Periodic {
                    offset,
                    period: period_for(spec, offset)?,
                    multiplier: spec.kappa(1, offset)?,
                    checked_through: horizon,
                })
            }
            Some(r) => refutations.push(r),
        }
    }
    Ok(PeriodicityVerdict::NonPeriodic {
        offsets_end,
        refutations,
    })
}

/// Periodicity for κ independent of `y`: periodic iff `s·κ(1) ≡ κ(s)` for
/// every `s` and `κ(k-1) ≡ 0 (mod L)`.
pub fn classify_constant(modulus: u32, k: u32, values: &[u32]) -> Result<PeriodicityVerdict> {
    let spec = KappaSpec::constant(modulus, k, values)?;
    let l = u64::from(modulus);
    let c = u64::from(values[0]);
    let linear_fail = (1..k).find(|&s| (u64::from(s) * c) % l != u64::from(values[s as usize - 1]));
    let top_zero = values[k as usize - 2] == 0;
    if linear_fail.is_none() && top_zero {
        return Ok(PeriodicityVerdict::Periodic {
            offset: 0,
            period: l,
            multiplier: values[0],
            checked_through: 2,
        });
    }
    // With linearity at y = 0, the top-digit condition is the y = 1 congruence for s = 1.
    let refutation = match linear_fail {
        Some(s) => Refutation {
            offset: 0,
            digit: s,
            exponent: 0,
            expected: ((u64::from(s) * c) % l) as u32,
            found: values[s as usize - 1],
        },
        None => Refutation {
            offset: 0,
            digit: 1,
            exponent: 1,
            expected: ((c * u64::from(k)) % l) as u32,
            found: spec.kappa(1, 1)?,
        },
    };
    Ok(PeriodicityVerdict::NonPeriodic {
        offsets_end: 1,
        refutations: vec![refutation],
    })
}

/// Least `(preperiod, period)` such that `values[n] == values[n + period]` for
/// every `preperiod ≤ n < len - period`, minimizing the period first.
///
/// The answer is about the window only; `None` means "no period up to the
/// bounds", never a proof of non-periodicity.
pub fn brute_force_period(
    values: &[u32],
    max_preperiod: usize,
    max_period: usize,
) -> Result<Option<(usize, usize)>> {
    let needed = max_preperiod + 2 * max_period;
    if values.len() < needed || max_period == 0 {
        return Err(GtmError::InsufficientLength {
            len: values.len(),
            needed: needed.max(2),
        });
    }
    let len = values.len();
    for period in 1..=max_period {
        let last_mismatch = (0..len - period)
            .rev()
            .find(|&n| values[n] != values[n + period]);
        let preperiod = last_mismatch.map_or(0, |n| n + 1);
        if preperiod <= max_preperiod {
            return Ok(Some((preperiod, period)));
        }
    }
    Ok(None)
}

/// A window `(a(N + n·l))_{n < horizon}` that looked ultimately periodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AenpHit {
    pub start: u64,
    pub stride: u64,
    pub preperiod: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AenpReport {
    pub windows_checked: usize,
    pub horizon: usize,
    /// Ordered by `(stride, start)`.
    pub flagged: Vec<AenpHit>,
}

/// Runs [`brute_force_period`] on every window `a(N + n·l)`, `N ≤ max_start`,
/// `1 ≤ l ≤ max_stride`, of length `horizon`. Each window is searched for
/// periods and preperiods up to `horizon / 4`.
pub fn aenp_scan(spec: &KappaSpec, max_start: u64, max_stride: u64, horizon: usize) -> Result<AenpReport> {
    let bound = horizon / 4;
    if bound == 0 {
        return Err(GtmError::InsufficientLength {
            len: horizon,
            needed: 4,
        });
    }
    let grid: Vec<(u64, u64)> = (1..=max_stride)
        .flat_map(|l| (0..=max_start).map(move |n| (l, n)))
        .collect();
    let results = grid
        .par_iter()
        .map(|&(stride, start)| -> Result<Option<AenpHit>> {
            let window = equally_spaced(spec, start, stride, horizon)?;
            Ok(brute_force_period(&window.values, bound, bound)?.map(|(preperiod, period)| AenpHit {
                start,
                stride,
                preperiod,
                period,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AenpReport {
        windows_checked: grid.len(),
        horizon,
        flagged: results.into_iter().flatten().collect(),
    })
}
