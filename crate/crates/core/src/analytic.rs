//! Generating functions, series values and continued fractions.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::budget::Budget;
use crate::error::{GtmError, Result};
use crate::kappa::KappaSpec;
use crate::periodicity::{classify, PeriodicityVerdict};
use crate::sequence::a_of_n;

/// Exact rational number (reduced, positive denominator).
pub type ExactRational = BigRational;

/// A coefficient of the truncated product: zero or a single root of unity
/// `exp(2πi·c/L)`, stored as `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Zero,
    Root(u32),
}

/// Coefficients of `Π_{y=0}^{Y} (1 + Σ_s ζ^{κ(s,y)} z^{s·k^y})` for `n < k^{Y+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedProductSeries {
    pub modulus: u32,
    pub base: u32,
    pub coefficients: Vec<Coefficient>,
}

impl TruncatedProductSeries {
    /// Root exponents, failing on a zero coefficient.
    pub fn exponents(&self) -> Option<Vec<u32>> {
        self.coefficients
            .iter()
            .map(|c| match c {
                Coefficient::Root(e) => Some(*e),
                Coefficient::Zero => None,
            })
            .collect()
    }
}

/// Multiplies out the product factor by factor. Each factor is a sparse
/// polynomial; every product term is added into its slot, and a slot
/// receiving a second root of unity is reported as a collision.
pub fn product_coefficients(spec: &KappaSpec, max_exponent: u32) -> Result<TruncatedProductSeries> {
    product_coefficients_with(spec, max_exponent, &Budget::from_env())
}

pub fn product_coefficients_with(
    spec: &KappaSpec,
    max_exponent: u32,
    budget: &Budget,
) -> Result<TruncatedProductSeries> {
    let k = spec.base();
    let modulus = spec.modulus();
    let total = budget.check_power("product coefficients", k, max_exponent + 1)?;
    let mut current = vec![Coefficient::Root(0)];
    let mut stride = 1usize;
    for y in 0..=max_exponent as usize {
        // factor terms: (degree, root exponent)
        let mut factor = vec![(0usize, 0u32)];
        for s in 1..k {
            factor.push((s as usize * stride, spec.kappa(s, y)?));
        }
        let mut next = vec![Coefficient::Zero; current.len() * k as usize];
        for (i, c) in current.iter().enumerate() {
            let Coefficient::Root(ci) = *c else { continue };
            for &(deg, e) in &factor {
                let slot = &mut next[i + deg];
                if *slot != Coefficient::Zero {
                    return Err(GtmError::CoefficientCollision { index: i + deg });
                }
                *slot = Coefficient::Root((ci + e) % modulus);
            }
        }
        current = next;
        stride *= k as usize;
    }
    debug_assert_eq!(current.len(), total);
    Ok(TruncatedProductSeries {
        modulus,
        base: k,
        coefficients: current,
    })
}

/// Enclosure `[lo, hi]` of `Σ_{n≥0} a(N + n·l)·β^{-n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesInterval {
    pub lo: ExactRational,
    pub hi: ExactRational,
    /// Number of summed terms.
    pub terms: usize,
    pub beta: u64,
}

impl SeriesInterval {
    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

fn check_beta(spec: &KappaSpec, beta: u64) -> Result<()> {
    if beta < u64::from(spec.modulus()) || beta < 2 {
        Err(GtmError::BetaTooSmall {
            beta,
            modulus: spec.modulus(),
        })
    } else {
        Ok(())
    }
}

/// Number of terms for `digits` decimal digits: `digits·⌈log_β 10⌉ + 2`.
pub fn series_terms(beta: u64, digits: u32) -> usize {
    // ⌈log_β 10⌉ = smallest e with β^e ≥ 10
    let mut e = 0usize;
    let mut p = 1u64;
    while p < 10 {
        p = p.saturating_mul(beta);
        e += 1;
    }
    digits as usize * e + 2
}

/// Partial sum to `T` terms plus the tail bound `Σ_{n≥T} (β−1)β^{-n-1} = β^{-T}`.
pub fn eval_series(spec: &KappaSpec, start: u64, stride: u64, beta: u64, digits: u32) -> Result<SeriesInterval> {
    check_beta(spec, beta)?;
    if digits == 0 {
        return Err(GtmError::InvalidArgument("digits must be at least 1".into()));
    }
    if stride == 0 {
        return Err(GtmError::InvalidArgument("stride l must be positive".into()));
    }
    let terms = series_terms(beta, digits);
    let b = BigUint::from(beta);
    // Horner: numerator = Σ_{n<T} a_n β^{T-1-n}
    let mut numerator = BigUint::zero();
    for n in 0..terms as u64 {
        let idx = n
            .checked_mul(stride)
            .and_then(|x| x.checked_add(start))
            .ok_or(GtmError::Overflow("series index"))?;
        numerator = numerator * &b + a_of_n(spec, idx)?;
    }
    let denominator = num_traits::pow(b, terms);
    let lo = BigRational::new(numerator.clone().into(), denominator.clone().into());
    let hi = BigRational::new((numerator + 1u32).into(), denominator.into());
    Ok(SeriesInterval { lo, hi, terms, beta })
}

/// Exact value of the series for a periodic sequence, built from the closed form
/// `G(z)·Σ_{j<L}(h z^{k^A})^j / (1 − z^{L·k^A})`: one period of `a` is
/// `a(r + j·k^A) = a(r) + j·κ(1, A)` for `r < k^A`, `j < L`, with `a(r)` read
/// from the truncated product `G`.
pub fn periodic_closed_form(spec: &KappaSpec, start: u64, stride: u64, beta: u64) -> Result<ExactRational> {
    check_beta(spec, beta)?;
    let PeriodicityVerdict::Periodic {
        offset,
        period,
        multiplier,
        ..
    } = classify(spec)?
    else {
        return Err(GtmError::InvalidArgument(
            "closed form exists only for periodic sequences".into(),
        ));
    };
    let modulus = spec.modulus();
    let head: Vec<u32> = if offset == 0 {
        vec![0]
    } else {
        product_coefficients(spec, offset as u32 - 1)?
            .exponents()
            .expect("product coefficients are all roots")
    };
    let block = head.len() as u64;
    let period_values: Vec<u32> = (0..u64::from(modulus))
        .flat_map(|j| {
            head.iter()
                .map(move |&r| ((u64::from(r) + j * u64::from(multiplier)) % u64::from(modulus)) as u32)
        })
        .collect();
    debug_assert_eq!(period_values.len() as u64, period);
    let _ = block;

    // b(n) = a(N + n·l) has period `period` as well.
    let b = BigUint::from(beta);
    let mut numerator = BigUint::zero();
    for n in 0..period {
        let idx = ((u128::from(start) + u128::from(n) * u128::from(stride)) % u128::from(period)) as usize;
        numerator = numerator * &b + period_values[idx];
    }
    let denominator = num_traits::pow(b, period as usize) - 1u32;
    Ok(BigRational::new(numerator.into(), denominator.into()))
}

/// Decimal rendering of an interval: the digits of `lo` truncated toward zero,
/// and whether `hi` truncates to the same digits.
pub fn render_decimal(interval: &SeriesInterval, digits: u32) -> (String, bool) {
    let scale = num_traits::pow(BigUint::from(10u32), digits as usize);
    let trunc = |x: &ExactRational| -> BigUint {
        let scaled = x * BigRational::from_integer(scale.clone().into());
        scaled.floor().to_integer().to_biguint().unwrap_or_default()
    };
    let lo = trunc(&interval.lo);
    let hi = trunc(&interval.hi);
    let int_part = &lo / &scale;
    let frac = (&lo % &scale).to_string();
    let text = format!("{}.{:0>width$}", int_part, frac, width = digits as usize);
    (text, lo == hi)
}

/// Injective map from residues to positive partial quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueMap(Vec<u64>);

impl ValueMap {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.contains(&0) {
            return Err(GtmError::InvalidValueMap("values must be positive".into()));
        }
        let mut sorted = values.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GtmError::InvalidValueMap("values must be distinct".into()));
        }
        Ok(Self(values))
    }

    /// `j ↦ j + 1`.
    pub fn shifted(modulus: u32) -> Self {
        Self((1..=u64::from(modulus)).collect())
    }

    pub fn get(&self, residue: u32) -> Option<u64> {
        self.0.get(residue as usize).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Convergents `p_n/q_n` of `[a_0; a_1, a_2, …]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentList {
    pub partial_quotients: Vec<u64>,
    pub numerators: Vec<BigUint>,
    pub denominators: Vec<BigUint>,
}

impl ConvergentList {
    pub fn from_quotients(partial_quotients: Vec<u64>) -> Self {
        let mut numerators = Vec::with_capacity(partial_quotients.len());
        let mut denominators = Vec::with_capacity(partial_quotients.len());
        // p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1
        let (mut p1, mut q1) = (BigUint::one(), BigUint::zero());
        let (mut p2, mut q2) = (BigUint::zero(), BigUint::one());
        for &a in &partial_quotients {
            let p = &p1 * a + &p2;
            let q = &q1 * a + &q2;
            numerators.push(p.clone());
            denominators.push(q.clone());
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
        }
        Self {
            partial_quotients,
            numerators,
            denominators,
        }
    }

    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    pub fn convergent(&self, n: usize) -> ExactRational {
        BigRational::new(
            self.numerators[n].clone().into(),
            self.denominators[n].clone().into(),
        )
    }

    /// `p_n q_{n−1} − p_{n−1} q_n = (−1)^{n−1}` for every `n ≥ 1`.
    pub fn determinant_holds(&self) -> bool {
        (1..self.len()).all(|n| {
            let lhs = &self.numerators[n] * &self.denominators[n - 1];
            let rhs = &self.numerators[n - 1] * &self.denominators[n];
            if n % 2 == 1 {
                lhs == rhs + 1u32
            } else {
                lhs + 1u32 == rhs
            }
        })
    }
}

/// Convergents of `[0; ρ(a(N)), ρ(a(N+l)), …]` with `depth` partial quotients
/// after the leading 0.
pub fn eval_cf(
    spec: &KappaSpec,
    start: u64,
    stride: u64,
    depth: usize,
    value_map: &ValueMap,
) -> Result<ConvergentList> {
    if value_map.len() < spec.modulus() as usize {
        return Err(GtmError::InvalidValueMap(format!(
            "map covers {} residues, need {}",
            value_map.len(),
            spec.modulus()
        )));
    }
    if stride == 0 {
        return Err(GtmError::InvalidArgument("stride l must be positive".into()));
    }
    let mut quotients = Vec::with_capacity(depth + 1);
    quotients.push(0);
    for n in 0..depth as u64 {
        let idx = n
            .checked_mul(stride)
            .and_then(|x| x.checked_add(start))
            .ok_or(GtmError::Overflow("continued fraction index"))?;
        let residue = a_of_n(spec, idx)?;
        quotients.push(value_map.get(residue).expect("map covers all residues"));
    }
    Ok(ConvergentList::from_quotients(quotients))
}

/// Empirical irrationality-exponent indicator. Not a bound of any kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrrationalityEstimate {
    /// `1 + max log q_{n+1} / log q_n` over the upper half of the list.
    pub value: f64,
    /// Index `n` attaining the maximum.
    pub at: usize,
    pub depth: usize,
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().map_or(f64::INFINITY, f64::ln)
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64-bit value");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `1 + max_n log q_{n+1} / log q_n`, the max taken over `n` in the upper half
/// of the convergent list (where `q_n > 1`), tracking the limsup that defines
/// the irrationality exponent of the limit.
pub fn irrationality_estimate(conv: &ConvergentList) -> Result<IrrationalityEstimate> {
    let len = conv.len();
    if len < 3 {
        return Err(GtmError::InsufficientDepth { needed: 3, got: len });
    }
    let from = (len / 2).max(1);
    let one = BigUint::one();
    let mut best: Option<(f64, usize)> = None;
    for n in from..len - 1 {
        if conv.denominators[n] <= one {
            continue;
        }
        let r = ln_big(&conv.denominators[n + 1]) / ln_big(&conv.denominators[n]);
        if best.is_none_or(|(b, _)| r > b) {
            best = Some((r, n));
        }
    }
    let (ratio, at) = best.ok_or(GtmError::InsufficientDepth { needed: len + 1, got: len })?;
    Ok(IrrationalityEstimate {
        value: 1.0 + ratio,
        at,
        depth: len,
    })
}
