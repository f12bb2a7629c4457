//! Finite descriptions of the digit map `κ : {1..k-1} × ℕ → Z_L`.

use crate::error::{GtmError, Result};
use crate::expansion::{check_base, check_digit};

/// How the stored columns extend to all `y ∈ ℕ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnTail {
    /// Columns `y ≥ preperiod` repeat with the given period.
    EventuallyPeriodic { preperiod: usize, period: usize },
    /// Only columns `y < window` are known; nothing is claimed beyond.
    FiniteWindow { window: usize },
}

/// The map `κ(s, y)` for an `(L, k, κ)` sequence.
///
/// `rows[s - 1][y]` stores `κ(s, y)` for the stored columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KappaSpec {
    modulus: u32,
    base: u32,
    rows: Vec<Vec<u32>>,
    tail: ColumnTail,
}

impl KappaSpec {
    /// Eventually periodic κ with `preperiod + period` stored columns.
    pub fn eventually_periodic(
        modulus: u32,
        base: u32,
        rows: Vec<Vec<u32>>,
        preperiod: usize,
        period: usize,
    ) -> Result<Self> {
        if period == 0 {
            return Err(GtmError::InvalidSpec("period must be at least 1".into()));
        }
        Self::build(
            modulus,
            base,
            rows,
            ColumnTail::EventuallyPeriodic { preperiod, period },
        )
    }

    /// κ known only on `y < window` (the number of stored columns).
    pub fn finite_window(modulus: u32, base: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let window = rows.first().map_or(0, Vec::len);
        Self::build(modulus, base, rows, ColumnTail::FiniteWindow { window })
    }

    /// κ independent of `y`: `κ(s, y) = values[s - 1]`.
    pub fn constant(modulus: u32, base: u32, values: &[u32]) -> Result<Self> {
        let rows = values.iter().map(|&v| vec![v]).collect();
        Self::eventually_periodic(modulus, base, rows, 0, 1)
    }

    /// The classical Thue–Morse sequence: `L = k = 2`, `κ ≡ 1`.
    pub fn thue_morse() -> Self {
        Self::constant(2, 2, &[1]).expect("valid")
    }

    /// `κ ≡ 0`.
    pub fn zero(modulus: u32, base: u32) -> Result<Self> {
        check_base(base)?;
        Self::constant(modulus, base, &vec![0; base as usize - 1])
    }

    fn build(modulus: u32, base: u32, rows: Vec<Vec<u32>>, tail: ColumnTail) -> Result<Self> {
        check_base(base)?;
        if modulus < 2 {
            return Err(GtmError::InvalidModulus(modulus));
        }
        if rows.len() != base as usize - 1 {
            return Err(GtmError::InvalidSpec(format!(
                "expected {} rows (one per digit 1..k-1), got {}",
                base - 1,
                rows.len()
            )));
        }
        let width = match tail {
            ColumnTail::EventuallyPeriodic { preperiod, period } => preperiod + period,
            ColumnTail::FiniteWindow { window } => window,
        };
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(GtmError::InvalidSpec(format!(
                    "row for digit {} has {} columns, expected {}",
                    i + 1,
                    row.len(),
                    width
                )));
            }
            if let Some((y, &v)) = row.iter().enumerate().find(|(_, &v)| v >= modulus) {
                return Err(GtmError::InvalidSpec(format!(
                    "kappa({}, {}) = {} is outside [0, {}]",
                    i + 1,
                    y,
                    v,
                    modulus - 1
                )));
            }
        }
        Ok(Self {
            modulus,
            base,
            rows,
            tail,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn tail(&self) -> ColumnTail {
        self.tail
    }

    /// Stored columns, one row per digit `s = 1..k-1`.
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Number of stored columns.
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// `(preperiod, period)` for eventually periodic specs.
    pub fn preperiod_period(&self) -> Option<(usize, usize)> {
        match self.tail {
            ColumnTail::EventuallyPeriodic { preperiod, period } => Some((preperiod, period)),
            ColumnTail::FiniteWindow { .. } => None,
        }
    }

    pub fn window(&self) -> Option<usize> {
        match self.tail {
            ColumnTail::FiniteWindow { window } => Some(window),
            ColumnTail::EventuallyPeriodic { .. } => None,
        }
    }

    pub fn is_finite_window(&self) -> bool {
        matches!(self.tail, ColumnTail::FiniteWindow { .. })
    }

    /// Stored column holding `κ(·, y)`.
    #[inline]
    pub fn column(&self, y: usize) -> Result<usize> {
        match self.tail {
            ColumnTail::EventuallyPeriodic { preperiod, period } => Ok(if y < preperiod {
                y
            } else {
                preperiod + (y - preperiod) % period
            }),
            ColumnTail::FiniteWindow { window } => {
                if y < window {
                    Ok(y)
                } else {
                    Err(GtmError::WindowExceeded {
                        exponent: y,
                        window,
                    })
                }
            }
        }
    }

    /// `κ(s, y)` for `s ∈ [1, k-1]`.
    pub fn kappa(&self, s: u32, y: usize) -> Result<u32> {
        check_digit(s, self.base)?;
        Ok(self.rows[s as usize - 1][self.column(y)?])
    }

    /// `κ(j, y)` for any digit `j ∈ [0, k-1]`, with `κ(0, ·) = 0`.
    #[inline]
    pub(crate) fn digit_value(&self, j: u32, y: usize) -> Result<u32> {
        if j == 0 {
            Ok(0)
        } else {
            Ok(self.rows[j as usize - 1][self.column(y)?])
        }
    }

    /// Same sequence with one more period stored explicitly.
    pub fn unrolled(&self) -> Self {
        match self.tail {
            ColumnTail::EventuallyPeriodic { preperiod, period } => {
                let rows = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut r = row.clone();
                        r.extend_from_slice(&row[preperiod..preperiod + period]);
                        r
                    })
                    .collect();
                Self::eventually_periodic(self.modulus, self.base, rows, preperiod, 2 * period)
                    .expect("unrolling preserves validity")
            }
            ColumnTail::FiniteWindow { .. } => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_lookup() {
        let spec =
            KappaSpec::eventually_periodic(3, 2, vec![vec![2, 0, 1]], 1, 2).unwrap();
        let got: Vec<u32> = (0..7).map(|y| spec.kappa(1, y).unwrap()).collect();
        assert_eq!(got, vec![2, 0, 1, 0, 1, 0, 1]);
        assert!(spec.kappa(2, 0).is_err());
        assert_eq!(spec.digit_value(0, 5).unwrap(), 0);
    }

    #[test]
    fn finite_window_refuses() {
        let spec = KappaSpec::finite_window(2, 3, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(spec.kappa(2, 1).unwrap(), 1);
        assert_eq!(
            spec.kappa(1, 2),
            Err(GtmError::WindowExceeded {
                exponent: 2,
                window: 2
            })
        );
    }

    #[test]
    fn validation() {
        assert!(KappaSpec::constant(2, 2, &[2]).is_err());
        assert!(KappaSpec::constant(1, 2, &[0]).is_err());
        assert!(KappaSpec::constant(2, 3, &[0]).is_err());
        assert!(KappaSpec::eventually_periodic(2, 2, vec![vec![0, 1]], 0, 1).is_err());
        assert!(KappaSpec::eventually_periodic(2, 2, vec![vec![]], 0, 0).is_err());
    }

    #[test]
    fn unrolled_same_values() {
        let spec =
            KappaSpec::eventually_periodic(5, 3, vec![vec![1, 2, 3], vec![4, 0, 2]], 1, 2).unwrap();
        let u = spec.unrolled();
        assert_eq!(u.width(), 5);
        for s in 1..3 {
            for y in 0..20 {
                assert_eq!(spec.kappa(s, y), u.kappa(s, y));
            }
        }
    }
}
