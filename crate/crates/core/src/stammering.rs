//! Stammering witnesses for equally spaced subsequences.
//!
//! For `m` large enough, the prefix of `a` of length `(Ll+1)·k^m` is a chain of
//! blocks `A_m, f^{i_1}(A_m), …` where block `j` is `A_m` shifted by
//! `i_j = a(j·k^m) mod L`. Among the `L + 1` blocks starting at `k^m·t·l`,
//! `t = 0..=L`, two carry the same shift, so the subsequence `b(n) = a(N + n·l)`
//! factors as `W1 W2 W3 W2 …`. Then `U = W1`, `V = W2 W3` and
//! `w = 1 + 1/(2Ll + 3)` make `U·V^w` a prefix of `b`.

use num_rational::Ratio;

use crate::error::{GtmError, Result};
use crate::kappa::KappaSpec;
use crate::periodicity::classify;
use crate::sequence::{a_of_n, SequenceWindow};

/// Prefix certificate `U·V^w` for `b(n) = a(start + n·stride)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StammerWitness {
    pub start: u64,
    pub stride: u64,
    pub m: u32,
    pub modulus: u32,
    pub base: u32,
    /// `U = W1`.
    pub prefix: Vec<u32>,
    /// `V = W2 W3`.
    pub repeat: Vec<u32>,
    /// `|W2|`; `repeat[..w2_len]` is the block that recurs right after `V`.
    pub w2_len: usize,
    /// `w` as an exact fraction `(2Ll + 4) / (2Ll + 3)`.
    pub exponent: Ratio<u64>,
    /// The colliding block indices `t < t2`, `t2 ≤ L`.
    pub shift_pair: (u64, u64),
}

/// Outcome of the size conditions, each evaluated exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundChecks {
    /// `|W1| ≤ ((Ll+1)k^m − N)/l + 1`.
    pub w1_upper: bool,
    /// `|W2| ≥ (k^m − N)/l − 1`.
    pub w2_lower: bool,
    /// `|W2| + |W3| ≤ ((Ll+1)k^m − N)/l + 1`.
    pub w23_upper: bool,
    /// `⌈(w−1)|V|⌉ ≤ k^m/(2l) < |W2|`.
    pub tail_fits: bool,
    /// `|U|/|V| ≤ 2Ll + 3`.
    pub ratio: bool,
}

impl BoundChecks {
    pub fn all(&self) -> bool {
        self.w1_upper && self.w2_lower && self.w23_upper && self.tail_fits && self.ratio
    }
}

impl StammerWitness {
    pub fn w1(&self) -> &[u32] {
        &self.prefix
    }

    pub fn w2(&self) -> &[u32] {
        &self.repeat[..self.w2_len]
    }

    pub fn w3(&self) -> &[u32] {
        &self.repeat[self.w2_len..]
    }

    /// `⌈(w − ⌊w⌋)·|V|⌉`, the length of the partial copy of `V`.
    pub fn tail_len(&self) -> usize {
        let frac = self.exponent.fract();
        let v = Ratio::from_integer(self.repeat.len() as u64);
        (frac * v).ceil().to_integer() as usize
    }

    /// `U · V^⌊w⌋ · V[..tail_len]`.
    pub fn word(&self) -> Vec<u32> {
        let whole = self.exponent.floor().to_integer() as usize;
        let mut out = self.prefix.clone();
        for _ in 0..whole {
            out.extend_from_slice(&self.repeat);
        }
        out.extend_from_slice(&self.repeat[..self.tail_len().min(self.repeat.len())]);
        out
    }

    /// `2Ll + 3`.
    pub fn ratio_bound(&self) -> u64 {
        2 * u64::from(self.modulus) * self.stride + 3
    }

    pub fn bounds(&self) -> BoundChecks {
        type Q = Ratio<i128>;
        let km = i128::from(self.base).pow(self.m);
        let n = i128::from(self.start);
        let l = i128::from(self.stride);
        let big_l = i128::from(self.modulus);
        let w1 = Q::from_integer(self.prefix.len() as i128);
        let w2 = Q::from_integer(self.w2_len as i128);
        let v = Q::from_integer(self.repeat.len() as i128);
        let outer = Q::new((big_l * l + 1) * km - n, l) + 1;
        let half = Q::new(km, 2 * l);
        BoundChecks {
            w1_upper: w1 <= outer,
            w2_lower: w2 >= Q::new(km - n, l) - 1,
            w23_upper: v <= outer,
            tail_fits: Q::from_integer(self.tail_len() as i128) <= half && half < w2,
            ratio: !self.repeat.is_empty()
                && w1 <= v * Q::from_integer(i128::from(self.ratio_bound())),
        }
    }
}

/// Smallest `M` with `k^M > 2(N + l)`; witnesses need `m > M`.
pub fn min_exponent(k: u32, start: u64, stride: u64) -> u32 {
    let target = 2 * (u128::from(start) + u128::from(stride));
    let mut m = 0;
    let mut p = 1u128;
    while p <= target {
        p *= u128::from(k);
        m += 1;
    }
    m
}

/// Builds the witness `(U_m, V_m, w)` for `b(n) = a(start + n·stride)`.
pub fn build_witness(spec: &KappaSpec, start: u64, stride: u64, m: u32) -> Result<StammerWitness> {
    if stride == 0 {
        return Err(GtmError::InvalidArgument("stride l must be positive".into()));
    }
    match classify(spec)? {
        v if v.is_non_periodic() => {}
        v if v.is_periodic() => return Err(GtmError::PeriodicSpec),
        _ => return Err(GtmError::FiniteWindowSpec),
    }
    let k = spec.base();
    let modulus = spec.modulus();
    let min = min_exponent(k, start, stride) + 1;
    if m < min {
        return Err(GtmError::MTooSmall { m, min });
    }

    let km = u64::from(k)
        .checked_pow(m)
        .ok_or(GtmError::Overflow("k^m"))?;
    let big_l = u64::from(modulus);
    // Highest index touched: (L·l + 1)·k^m plus slack.
    (big_l * stride + 2)
        .checked_mul(km)
        .ok_or(GtmError::Overflow("block index"))?;

    // Shift of the block starting at k^m·t·l.
    let shifts = (0..=big_l)
        .map(|t| a_of_n(spec, km * t * stride))
        .collect::<Result<Vec<_>>>()?;
    let (t, t2) = (1..=big_l)
        .flat_map(|gap| (0..=big_l - gap).map(move |t| (t, t + gap)))
        .find(|&(t, t2)| shifts[t as usize] == shifts[t2 as usize])
        .expect("L + 1 shifts in L classes must collide");

    // Subsequence index range of the block [base, base + k^m).
    let base = km * t * stride;
    let first = if base <= start {
        0
    } else {
        (base - start).div_ceil(stride)
    };
    let end = (base + km - start).div_ceil(stride);
    let w2_len = (end - first) as usize;
    let repeat_len = (km * (t2 - t)) as usize;

    let value = |i: u64| a_of_n(spec, start + i * stride);
    let prefix = (0..first).map(value).collect::<Result<Vec<_>>>()?;
    let repeat = (first..first + repeat_len as u64)
        .map(value)
        .collect::<Result<Vec<_>>>()?;

    let denom = 2 * big_l * stride + 3;
    let witness = StammerWitness {
        start,
        stride,
        m,
        modulus,
        base: k,
        prefix,
        repeat,
        w2_len,
        exponent: Ratio::new(denom + 1, denom),
        shift_pair: (t, t2),
    };
    let b = witness.bounds();
    if !(b.w1_upper && b.w2_lower && b.w23_upper) {
        return Err(GtmError::InvalidArgument(format!(
            "block sizes violate their bounds at m = {m}: {b:?}"
        )));
    }
    Ok(witness)
}

/// Result of checking a witness against a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub valid: bool,
    /// First index where `U·V^w` and the window differ.
    pub mismatch: Option<usize>,
    pub reason: Option<String>,
}

impl WitnessCheck {
    fn fail(reason: impl Into<String>, mismatch: Option<usize>) -> Self {
        Self {
            valid: false,
            mismatch,
            reason: Some(reason.into()),
        }
    }
}

/// Checks that `U·V^w` is a prefix of the window and that the witness meets
/// `w > 1`, `V ≠ ε` and `|U|/|V| ≤ 2Ll + 3`.
pub fn verify_witness(window: &SequenceWindow, witness: &StammerWitness) -> Result<WitnessCheck> {
    if window.start != witness.start || window.stride != witness.stride {
        return Err(GtmError::InvalidArgument(format!(
            "window is a({} + n·{}), witness is for a({} + n·{})",
            window.start, window.stride, witness.start, witness.stride
        )));
    }
    if witness.exponent <= Ratio::from_integer(1) {
        return Ok(WitnessCheck::fail("exponent w must exceed 1", None));
    }
    if witness.repeat.is_empty() {
        return Ok(WitnessCheck::fail("repeated block V is empty", None));
    }
    let word = witness.word();
    if window.len() < word.len() {
        return Err(GtmError::InsufficientLength {
            len: window.len(),
            needed: word.len(),
        });
    }
    if let Some(i) = word.iter().zip(&window.values).position(|(a, b)| a != b) {
        return Ok(WitnessCheck::fail(format!("U·V^w differs from the window at index {i}"), Some(i)));
    }
    if !witness.bounds().ratio {
        return Ok(WitnessCheck::fail("|U|/|V| exceeds 2Ll + 3", None));
    }
    Ok(WitnessCheck {
        valid: true,
        mismatch: None,
        reason: None,
    })
}

/// Witnesses for every `m` in `ms`.
pub fn witness_family(
    spec: &KappaSpec,
    start: u64,
    stride: u64,
    ms: std::ops::Range<u32>,
) -> Result<Vec<StammerWitness>> {
    ms.map(|m| build_witness(spec, start, stride, m)).collect()
}
