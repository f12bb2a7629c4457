//! Fixed-seed spec corpora shared by the integration tests.
#![allow(dead_code)]

use gtm::{classify, KappaSpec, PeriodicityVerdict, PowerCycle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x7475_e5ee_d001;
pub const CORPUS_SIZE: usize = 60;

/// Random eventually periodic specs with `L ≤ 6`, `k ≤ 5`, `y0 ≤ 3`, `p ≤ 4`.
pub fn random_corpus() -> Vec<KappaSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let modulus = rng.random_range(2..=6u32);
            let k = rng.random_range(2..=5u32);
            let y0 = rng.random_range(0..=3usize);
            let p = rng.random_range(1..=4usize);
            let rows = (1..k)
                .map(|_| (0..y0 + p).map(|_| rng.random_range(0..modulus)).collect())
                .collect();
            KappaSpec::eventually_periodic(modulus, k, rows, y0, p).unwrap()
        })
        .collect()
}

/// A spec built to satisfy the periodicity congruence at `offset`.
#[derive(Debug, Clone)]
pub struct ConstructedPeriodic {
    pub spec: KappaSpec,
    pub offset: usize,
}

/// Specs with `κ(s, A + y) = h·s·k^y mod L` for every `y ≥ 0`; the columns
/// below `A` are arbitrary.
pub fn periodic_corpus() -> Vec<ConstructedPeriodic> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 0xff);
    let mut out = Vec::new();
    for modulus in 2..=6u32 {
        for k in 2..=4u32 {
            for offset in 0..=2usize {
                if out.len() >= 30 || rng.random_bool(0.35) {
                    continue;
                }
                let h = rng.random_range(0..modulus);
                let cycle = PowerCycle::new(k, modulus);
                let y0 = offset + cycle.preperiod;
                let width = y0 + cycle.period;
                let rows = (1..k)
                    .map(|s| {
                        (0..width)
                            .map(|y| {
                                if y < offset {
                                    rng.random_range(0..modulus)
                                } else {
                                    let ky = cycle.get(y - offset);
                                    ((u64::from(h) * u64::from(s) * u64::from(ky)) % u64::from(modulus)) as u32
                                }
                            })
                            .collect()
                    })
                    .collect();
                let spec = KappaSpec::eventually_periodic(modulus, k, rows, y0, cycle.period).unwrap();
                out.push(ConstructedPeriodic { spec, offset });
            }
        }
    }
    out
}

/// Corpus specs classified NonPeriodic.
pub fn non_periodic(corpus: &[KappaSpec]) -> Vec<KappaSpec> {
    corpus
        .iter()
        .filter(|s| matches!(classify(s), Ok(PeriodicityVerdict::NonPeriodic { .. })))
        .cloned()
        .collect()
}

/// Corpus specs classified Periodic.
pub fn periodic(corpus: &[KappaSpec]) -> Vec<KappaSpec> {
    corpus
        .iter()
        .filter(|s| matches!(classify(s), Ok(PeriodicityVerdict::Periodic { .. })))
        .cloned()
        .collect()
}
