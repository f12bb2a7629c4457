//! Generation of `(L, k, κ)` sequences.
//!
//! Letters are residues `0..L-1`; letter `j` stands for the root of unity
//! `exp(2πij/L)`, so the cyclic morphism `f` is `+1 mod L` and products of
//! roots of unity are sums of exponents.

use crate::budget::Budget;
use crate::error::{GtmError, Result};
use crate::kappa::KappaSpec;

/// `a(n) = Σ κ(s, y) mod L` over the digits `s·k^y` of `n`.
pub fn a_of_n(spec: &KappaSpec, n: u64) -> Result<u32> {
    let k = u64::from(spec.base());
    let modulus = u64::from(spec.modulus());
    let mut rest = n;
    let mut y = 0usize;
    let mut acc = 0u64;
    while rest > 0 {
        let d = (rest % k) as u32;
        if d != 0 {
            acc += u64::from(spec.digit_value(d, y)?);
        }
        rest /= k;
        y += 1;
    }
    Ok((acc % modulus) as u32)
}

/// The exponent `c` of `b(n) = exp(2πic/L)` in the multiplicative form of the
/// sequence. Identical to [`a_of_n`].
pub fn b_exponent(spec: &KappaSpec, n: u64) -> Result<u32> {
    a_of_n(spec, n)
}

/// `A_m`, the prefix of length `k^m`, by the morphic recursion
/// `A_{n+1} = A_n f^{κ(1,n)}(A_n) … f^{κ(k-1,n)}(A_n)`.
pub fn generate_prefix_morphic(spec: &KappaSpec, m: u32) -> Result<Vec<u32>> {
    generate_prefix_morphic_with(spec, m, &Budget::from_env())
}

pub fn generate_prefix_morphic_with(spec: &KappaSpec, m: u32, budget: &Budget) -> Result<Vec<u32>> {
    let total = budget.check_power("morphic prefix", spec.base(), m)?;
    if let Some(window) = spec.window() {
        if m as usize > window {
            return Err(GtmError::WindowExceeded {
                exponent: m as usize - 1,
                window,
            });
        }
    }
    let modulus = spec.modulus();
    let mut word = Vec::with_capacity(total);
    word.push(0u32);
    for step in 0..m as usize {
        let len = word.len();
        for s in 1..spec.base() {
            let shift = spec.kappa(s, step)?;
            for i in 0..len {
                let v = word[i] + shift;
                word.push(if v >= modulus { v - modulus } else { v });
            }
        }
    }
    Ok(word)
}

/// `[a(n) for n < count]` by digit counting.
pub fn prefix_digit(spec: &KappaSpec, count: u64) -> Result<Vec<u32>> {
    (0..count).map(|n| a_of_n(spec, n)).collect()
}

/// Values `a(start + i·stride)` for `i < values.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    pub spec: KappaSpec,
    pub start: u64,
    pub stride: u64,
    pub values: Vec<u32>,
}

impl SequenceWindow {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The equally spaced subsequence `a(N + n·l)`, `n < count`.
pub fn equally_spaced(spec: &KappaSpec, start: u64, stride: u64, count: usize) -> Result<SequenceWindow> {
    if stride == 0 {
        return Err(GtmError::InvalidArgument("stride l must be positive".into()));
    }
    if count > 0 {
        (count as u64 - 1)
            .checked_mul(stride)
            .and_then(|x| x.checked_add(start))
            .ok_or(GtmError::Overflow("subsequence index"))?;
    }
    let values = (0..count as u64)
        .map(|i| a_of_n(spec, start + i * stride))
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceWindow {
        spec: spec.clone(),
        start,
        stride,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::expand;
    use proptest::prelude::*;

    #[test]
    fn thue_morse_prefixes() {
        let tm = KappaSpec::thue_morse();
        assert_eq!(generate_prefix_morphic(&tm, 0).unwrap(), vec![0]);
        assert_eq!(generate_prefix_morphic(&tm, 2).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(
            generate_prefix_morphic(&tm, 3).unwrap(),
            vec![0, 1, 1, 0, 1, 0, 0, 1]
        );
        assert_eq!(prefix_digit(&tm, 8).unwrap(), vec![0, 1, 1, 0, 1, 0, 0, 1]);
        assert_eq!(b_exponent(&tm, 3).unwrap(), 0);
    }

    #[test]
    fn zero_map() {
        let z = KappaSpec::zero(4, 3).unwrap();
        assert!(generate_prefix_morphic(&z, 5).unwrap().iter().all(|&v| v == 0));
        assert!((0..1000).all(|n| a_of_n(&z, n).unwrap() == 0));
    }

    #[test]
    fn digit_sum_mod_three() {
        let spec = KappaSpec::constant(3, 3, &[1, 2]).unwrap();
        for n in 0..5000u64 {
            let digit_sum: u64 = expand(n, 3).unwrap().terms().iter().map(|t| u64::from(t.coeff)).sum();
            assert_eq!(u64::from(a_of_n(&spec, n).unwrap()), digit_sum % 3);
        }
    }

    #[test]
    fn windows() {
        let tm = KappaSpec::thue_morse();
        assert_eq!(equally_spaced(&tm, 0, 1, 8).unwrap().values, vec![0, 1, 1, 0, 1, 0, 0, 1]);
        assert!(equally_spaced(&tm, 5, 3, 0).unwrap().is_empty());
        assert_eq!(equally_spaced(&tm, 1, 2, 5).unwrap().values, vec![1, 0, 0, 1, 0]);
        assert!(equally_spaced(&tm, 0, 0, 3).is_err());
        assert!(equally_spaced(&tm, u64::MAX, 2, 3).is_err());
    }

    #[test]
    fn budget_and_window_errors() {
        let tm = KappaSpec::thue_morse();
        assert!(matches!(
            generate_prefix_morphic_with(&tm, 11, &Budget::new(1024)),
            Err(GtmError::BudgetExceeded { .. })
        ));
        let fw = KappaSpec::finite_window(2, 2, vec![vec![1, 1, 0]]).unwrap();
        assert_eq!(generate_prefix_morphic(&fw, 3).unwrap(), prefix_digit(&fw, 8).unwrap());
        assert!(matches!(generate_prefix_morphic(&fw, 4), Err(GtmError::WindowExceeded { .. })));
        assert!(matches!(a_of_n(&fw, 8), Err(GtmError::WindowExceeded { .. })));
    }

    fn arb_spec() -> impl Strategy<Value = KappaSpec> {
        (2u32..7, 2u32..6, 0usize..4, 1usize..5).prop_flat_map(|(l, k, y0, p)| {
            proptest::collection::vec(proptest::collection::vec(0..l, y0 + p), (k - 1) as usize)
                .prop_map(move |rows| KappaSpec::eventually_periodic(l, k, rows, y0, p).unwrap())
        })
    }

    proptest! {
        #[test]
        fn morphic_agrees_with_digit_counting(spec in arb_spec()) {
            let m = match spec.base() { 2 => 10, 3 => 7, 4 => 6, _ => 5 };
            let word = generate_prefix_morphic(&spec, m).unwrap();
            prop_assert_eq!(word, prefix_digit(&spec, u64::from(spec.base()).pow(m)).unwrap());
        }

        #[test]
        fn prefix_stability(spec in arb_spec(), m in 0u32..5) {
            let short = generate_prefix_morphic(&spec, m).unwrap();
            let long = generate_prefix_morphic(&spec, m + 1).unwrap();
            prop_assert_eq!(&long[..short.len()], &short[..]);
        }

        #[test]
        fn disjoint_support_additivity(spec in arb_spec(), n in 0u64..1_000_000, raw in 0u64..1_000_000) {
            let k = u64::from(spec.base());
            // keep only the digits of `raw` where `n` has a zero digit
            let (mut m, mut place, mut a, mut b) = (0u64, 1u64, n, raw);
            while b > 0 {
                if a % k == 0 {
                    m += (b % k) * place;
                }
                a /= k;
                b /= k;
                place *= k;
            }
            prop_assert!(expand(n, spec.base()).unwrap().disjoint_from(&expand(m, spec.base()).unwrap()));
            let lhs = a_of_n(&spec, n + m).unwrap();
            let rhs = (a_of_n(&spec, n).unwrap() + a_of_n(&spec, m).unwrap()) % spec.modulus();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn single_digit_values(spec in arb_spec(), y in 0u32..8) {
            let k = spec.base();
            for s in 1..k {
                let n = u64::from(s) * u64::from(k).pow(y);
                prop_assert_eq!(a_of_n(&spec, n).unwrap(), spec.kappa(s, y as usize).unwrap());
            }
        }
    }
}
