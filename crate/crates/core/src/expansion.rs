//! Base-k digit machinery.
//!
//! Every natural number has a unique expansion `n = Σ s_q k^{w_q}` with
//! coefficients `1 ≤ s_q ≤ k-1` and strictly increasing exponents. Zero has
//! the empty expansion.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{GtmError, Result};

/// One nonzero digit `coeff · k^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub coeff: u32,
    pub exponent: usize,
}

/// The nonzero digits of a number in base `k`, lowest exponent first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitExpansion {
    base: u32,
    terms: Vec<Term>,
}

pub(crate) fn check_base(k: u32) -> Result<()> {
    if k < 2 {
        Err(GtmError::InvalidBase(k))
    } else {
        Ok(())
    }
}

pub(crate) fn check_digit(s: u32, k: u32) -> Result<()> {
    if s == 0 || s >= k {
        Err(GtmError::DigitOutOfRange { digit: s, max: k - 1 })
    } else {
        Ok(())
    }
}

impl DigitExpansion {
    /// Builds an expansion from explicit terms, validating coefficient range and
    /// strictly increasing exponents.
    pub fn from_terms(base: u32, terms: Vec<Term>) -> Result<Self> {
        check_base(base)?;
        for t in &terms {
            check_digit(t.coeff, base)?;
        }
        if terms.windows(2).any(|w| w[1].exponent <= w[0].exponent) {
            return Err(GtmError::InvalidArgument(
                "expansion exponents must be strictly increasing".into(),
            ));
        }
        Ok(Self { base, terms })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest-exponent term.
    pub fn leading(&self) -> Option<Term> {
        self.terms.first().copied()
    }

    /// Highest-exponent term.
    pub fn top(&self) -> Option<Term> {
        self.terms.last().copied()
    }

    /// `w(2) - w(1)`; `None` stands for an infinite gap (fewer than two terms).
    pub fn gap(&self) -> Option<usize> {
        match self.terms.as_slice() {
            [a, b, ..] => Some(b.exponent - a.exponent),
            _ => None,
        }
    }

    pub fn contains(&self, s: u32, y: usize) -> bool {
        self.terms
            .binary_search_by_key(&y, |t| t.exponent)
            .map(|i| self.terms[i].coeff == s)
            .unwrap_or(false)
    }

    pub fn count_coeff(&self, s: u32) -> usize {
        self.terms.iter().filter(|t| t.coeff == s).count()
    }

    /// Re-evaluates `Σ s_q k^{w_q}`.
    pub fn value(&self) -> BigUint {
        let k = BigUint::from(self.base);
        self.terms.iter().fold(BigUint::zero(), |acc, t| {
            acc + BigUint::from(t.coeff) * num_traits::pow(k.clone(), t.exponent)
        })
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value().to_u64()
    }

    /// True when every term sits at an exponent strictly above every term of `other`
    /// or strictly below; i.e. the supports are disjoint.
    pub fn disjoint_from(&self, other: &DigitExpansion) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].exponent.cmp(&other.terms[j].exponent) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// Base-`k` expansion of `n`.
pub fn expand(n: u64, k: u32) -> Result<DigitExpansion> {
    check_base(k)?;
    let kk = u64::from(k);
    let mut terms = Vec::new();
    let mut rest = n;
    let mut exponent = 0;
    while rest > 0 {
        let d = (rest % kk) as u32;
        if d != 0 {
            terms.push(Term { coeff: d, exponent });
        }
        rest /= kk;
        exponent += 1;
    }
    Ok(DigitExpansion { base: k, terms })
}

/// Base-`k` expansion of an arbitrary-precision `n`.
pub fn expand_big(n: &BigUint, k: u32) -> Result<DigitExpansion> {
    check_base(k)?;
    let digits: Vec<u32> = if k <= 256 {
        n.to_radix_le(k).into_iter().map(u32::from).collect()
    } else {
        let kk = BigUint::from(k);
        let mut rest = n.clone();
        let mut out = Vec::new();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&kk);
            out.push(r.to_u32().expect("remainder below k"));
            rest = q;
        }
        out
    };
    let terms = digits
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d != 0)
        .map(|(exponent, coeff)| Term { coeff, exponent })
        .collect();
    Ok(DigitExpansion { base: k, terms })
}

/// `d(n; s·k^y)`: 1 when the expansion of `n` contains the term `s·k^y`.
pub fn digit_indicator(n: u64, s: u32, y: usize, k: u32) -> Result<u8> {
    check_base(k)?;
    check_digit(s, k)?;
    let kk = u64::from(k);
    let mut rest = n;
    for _ in 0..y {
        if rest == 0 {
            return Ok(0);
        }
        rest /= kk;
    }
    Ok(u8::from(rest % kk == u64::from(s)))
}

/// `e_s(n)`: number of occurrences of the digit `s` in base `k`.
pub fn digit_count(n: u64, s: u32, k: u32) -> Result<usize> {
    check_base(k)?;
    check_digit(s, k)?;
    Ok(expand(n, k)?.count_coeff(s))
}

/// `e_s^L(n)`: [`digit_count`] reduced into `[0, L-1]`.
pub fn digit_count_mod(n: u64, s: u32, k: u32, modulus: u32) -> Result<u32> {
    if modulus < 2 {
        return Err(GtmError::InvalidModulus(modulus));
    }
    Ok((digit_count(n, s, k)? % modulus as usize) as u32)
}

/// Prime factorization of `n` by trial division, ascending primes.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Internal scalars of the constructive gap-multiple path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapConstruction {
    /// `G`: the part of `l` coprime to `k`.
    pub cofactor: BigUint,
    /// `F + 1`, or `None` when `l` is coprime to `k` and the power of `k` is dropped.
    pub scale_exponent: Option<u32>,
    /// `D` with `D·G ≡ 1 (mod k^{t+1})`, `1 ≤ D < k^{t+1}`.
    pub inverse: BigUint,
    /// `E` with `D·G = 1 - k^{t+1}·E`.
    pub defect: BigInt,
    /// Whether the `G = 1` branch `k^{F+1}(1 + k^{t+1})` was taken.
    pub unit_branch: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapMultipleResult {
    /// The multiplier `x`.
    pub multiplier: BigUint,
    /// `x · l`.
    pub product: BigUint,
    /// Expansion of `x · l`.
    pub expansion: DigitExpansion,
    pub leading_exponent: usize,
    /// `w(2) - w(1)`, `None` meaning infinite.
    pub gap: Option<usize>,
    pub construction: GapConstruction,
}

impl GapMultipleResult {
    /// Leading coefficient 1 and a gap exceeding `t`.
    pub fn satisfies(&self, t: u32) -> bool {
        self.expansion.leading().map(|lead| lead.coeff) == Some(1)
            && self.gap.is_none_or(|g| g > t as usize)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Finds `x` such that the expansion of `x·l` starts with coefficient 1 and
/// its second term (if any) sits more than `t` exponents higher.
///
/// The witness is constructive rather than minimal: with `l = G·Π p^{x_u}`
/// (`G` coprime to `k`) and `D·G = 1 - k^{t+1}E`, the product is
/// `x·l = k^{F+1}·D²G² = k^{F+1}(1 + k^{t+1}·E(k^{t+1}E - 2))`.
pub fn gap_multiple(l: u64, k: u32, t: u32) -> Result<GapMultipleResult> {
    check_base(k)?;
    if l == 0 {
        return Err(GtmError::InvalidArgument("l must be positive".into()));
    }

    // Strip the primes of k out of l; F is the largest floor(x_u / y_u).
    let mut cofactor = l;
    let mut prime_part = 1u64;
    let mut f: Option<u32> = None;
    for (p, y) in factorize(u64::from(k)) {
        let mut x_u = 0u32;
        while cofactor.is_multiple_of(p) {
            cofactor /= p;
            prime_part *= p;
            x_u += 1;
        }
        if x_u > 0 {
            let a = x_u / y;
            f = Some(f.map_or(a, |cur| cur.max(a)));
        }
    }
    let scale_exponent = f.map(|f| f + 1);
    let kb = BigUint::from(k);
    let scale = scale_exponent.map_or_else(BigUint::one, |e| num_traits::pow(kb.clone(), e as usize));
    // k^{F+1} / Π p^{x_u} is a natural number by the choice of F.
    debug_assert!((&scale % prime_part).is_zero());
    let scale_over_prime = &scale / prime_part;

    let g = BigUint::from(cofactor);
    let modulus = num_traits::pow(kb.clone(), t as usize + 1);
    let gi = BigInt::from(g.clone());
    let mi = BigInt::from(modulus.clone());
    let d = mod_inverse(&gi, &mi).expect("G is coprime to k");
    let defect = (BigInt::one() - &d * &gi) / &mi;
    let quad = &defect * (&mi * &defect - BigInt::from(2));
    debug_assert!(quad.sign() != Sign::Minus);

    let (multiplier, unit_branch) = if quad.is_zero() {
        // G = 1: k^{F+1}(1 + k^{t+1}).
        (&scale_over_prime * (BigUint::one() + &modulus), true)
    } else {
        let d_u = d.to_biguint().expect("inverse is positive");
        (&scale_over_prime * &d_u * &d_u * &g, false)
    };
    let product = &multiplier * l;
    let expansion = expand_big(&product, k)?;
    let leading_exponent = expansion.leading().map_or(0, |lead| lead.exponent);
    let gap = expansion.gap();
    let result = GapMultipleResult {
        multiplier,
        product,
        expansion,
        leading_exponent,
        gap,
        construction: GapConstruction {
            cofactor: g,
            scale_exponent,
            inverse: d.to_biguint().expect("inverse is positive"),
            defect,
            unit_branch,
        },
    };
    debug_assert!(result.satisfies(t));
    Ok(result)
}

/// Two gap multiples for thresholds `t` and `t2` sharing the same leading exponent.
///
/// The leading exponent is `F + 1` (or 0), which does not depend on the threshold.
pub fn gap_multiple_pair(
    l: u64,
    k: u32,
    t: u32,
    t2: u32,
) -> Result<(GapMultipleResult, GapMultipleResult)> {
    let first = gap_multiple(l, k, t)?;
    let second = gap_multiple(l, k, t2)?;
    debug_assert_eq!(first.leading_exponent, second.leading_exponent);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn digits_string(mut n: u64, k: u64) -> Vec<u64> {
        let mut v = Vec::new();
        while n > 0 {
            v.push(n % k);
            n /= k;
        }
        v
    }

    /// Smallest x ≤ limit such that x·l satisfies the gap property.
    fn brute_minimal_gap_multiple(l: u64, k: u32, t: u32, limit: u64) -> Option<u64> {
        (1..=limit).find(|&x| {
            let e = expand(x * l, k).unwrap();
            e.leading().unwrap().coeff == 1 && e.gap().is_none_or(|g| g > t as usize)
        })
    }

    #[test]
    fn expand_examples() {
        assert!(expand(0, 2).unwrap().is_zero());
        assert_eq!(
            expand(4, 3).unwrap().terms(),
            &[Term { coeff: 1, exponent: 0 }, Term { coeff: 1, exponent: 1 }]
        );
        assert_eq!(expand(5, 1), Err(GtmError::InvalidBase(1)));
    }

    #[test]
    fn indicator_and_counts() {
        assert_eq!(digit_indicator(4, 1, 1, 3).unwrap(), 1);
        assert_eq!(digit_indicator(4, 2, 0, 3).unwrap(), 0);
        assert!(digit_indicator(4, 3, 0, 3).is_err());
        assert!(digit_indicator(4, 0, 0, 3).is_err());
        for s in 1..5 {
            assert_eq!(digit_count(0, s, 5).unwrap(), 0);
        }
        assert_eq!(digit_count(5, 1, 2).unwrap(), 2);
        assert_eq!(digit_count_mod(7, 1, 2, 2).unwrap(), 1);
        assert!(digit_count_mod(7, 1, 2, 1).is_err());
    }

    #[test]
    fn from_terms_validates() {
        assert!(DigitExpansion::from_terms(3, vec![Term { coeff: 3, exponent: 0 }]).is_err());
        assert!(DigitExpansion::from_terms(
            3,
            vec![Term { coeff: 1, exponent: 2 }, Term { coeff: 1, exponent: 2 }]
        )
        .is_err());
    }

    #[test]
    fn big_expansion_matches_small() {
        for k in [2u32, 3, 7, 300] {
            for n in [0u64, 1, 99, 123_456_789, u64::MAX] {
                assert_eq!(expand_big(&BigUint::from(n), k).unwrap(), expand(n, k).unwrap());
            }
        }
    }

    #[test]
    fn gap_multiple_examples() {
        let r = gap_multiple(1, 2, 2).unwrap();
        assert_eq!(r.multiplier, BigUint::from(9u32));
        assert_eq!(r.gap, Some(3));

        let r = gap_multiple(3, 2, 2).unwrap();
        assert!(r.satisfies(2));
        assert_eq!(brute_minimal_gap_multiple(3, 2, 2, 1_000_000), Some(3));

        // l = k^a: the constructive path scales by k^{a+1}.
        for (k, a, t) in [(2u32, 3u32, 1u32), (3, 2, 3), (6, 1, 0)] {
            let l = u64::from(k).pow(a);
            let r = gap_multiple(l, k, t).unwrap();
            assert!(r.construction.unit_branch);
            assert_eq!(r.leading_exponent, a as usize + 1);
            assert_eq!(r.gap, Some(t as usize + 1));
        }
    }

    #[test]
    fn gap_pair_examples() {
        let (a, b) = gap_multiple_pair(3, 2, 1, 4).unwrap();
        assert_eq!(a.leading_exponent, b.leading_exponent);
        assert!(a.satisfies(1) && b.satisfies(4));
        let (a, b) = gap_multiple_pair(1, 3, 0, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constructive_never_beats_minimal() {
        for k in [2u32, 3, 4, 6] {
            for l in 1..=12u64 {
                for t in 0..=2 {
                    let r = gap_multiple(l, k, t).unwrap();
                    let min = brute_minimal_gap_multiple(l, k, t, 1_000_000).unwrap();
                    assert!(BigUint::from(min) <= r.multiplier);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn expand_reconstructs(n in 0u64..1_000_000, k in 2u32..40) {
            let e = expand(n, k).unwrap();
            prop_assert_eq!(e.value_u64(), Some(n));
            prop_assert!(e.terms().windows(2).all(|w| w[0].exponent < w[1].exponent));
            prop_assert_eq!(DigitExpansion::from_terms(k, e.terms().to_vec()).unwrap(), e);
        }

        #[test]
        fn indicator_matches_membership(n in 0u64..1_000_000, k in 2u32..12, y in 0usize..14, s in 1u32..12) {
            prop_assume!(s < k);
            let e = expand(n, k).unwrap();
            prop_assert_eq!(digit_indicator(n, s, y, k).unwrap() == 1, e.contains(s, y));
        }

        #[test]
        fn count_matches_string_scan(n in 0u64..1_000_000, k in 2u32..12) {
            let digits = digits_string(n, u64::from(k));
            let mut total = 0;
            for s in 1..k {
                let c = digit_count(n, s, k).unwrap();
                prop_assert_eq!(c, digits.iter().filter(|&&d| d == u64::from(s)).count());
                total += c;
            }
            prop_assert_eq!(total, digits.iter().filter(|&&d| d != 0).count());
        }

        #[test]
        fn gap_multiple_post(l in 1u64..500, k in 2u32..11, t in 0u32..8, t2 in 0u32..8) {
            let (a, b) = gap_multiple_pair(l, k, t, t2).unwrap();
            prop_assert!(a.satisfies(t));
            prop_assert!(b.satisfies(t2));
            prop_assert_eq!(a.leading_exponent, b.leading_exponent);
            prop_assert_eq!(&a.multiplier * l, a.product.clone());
            prop_assert_eq!(a.expansion.value(), a.product);
        }
    }
}
