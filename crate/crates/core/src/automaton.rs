//! The k-kernel of an `(L, k, κ)` sequence and its DFAO.
//!
//! Every kernel element `a(k^e n + j)` equals `a_e(n) + a(j) mod L`, where
//! `a_e(n) = Σ κ(s, w + e)` over the digits `s·k^w` of `n`. A state is the pair
//! `(e, c)` standing for `n ↦ a_e(n) + c`.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{GtmError, Result};
use crate::kappa::{ColumnTail, KappaSpec};
use crate::sequence::a_of_n;

/// `(shift, offset)`, with the shift canonical for the spec's minimal n-period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelState {
    pub shift: usize,
    pub offset: u32,
}

impl KernelState {
    /// `a_shift(n) + offset mod L`.
    pub fn denote(&self, spec: &KappaSpec, n: u64) -> Result<u32> {
        let k = u64::from(spec.base());
        let mut rest = n;
        let mut w = self.shift;
        let mut acc = u64::from(self.offset);
        while rest > 0 {
            acc += u64::from(spec.digit_value((rest % k) as u32, w)?);
            rest /= k;
            w += 1;
        }
        Ok((acc % u64::from(spec.modulus())) as u32)
    }
}

fn column_of(spec: &KappaSpec, y: usize) -> Vec<u32> {
    let c = spec.column(y).expect("eventually periodic");
    spec.rows().iter().map(|r| r[c]).collect()
}

/// Minimal `(y0, p)` with `κ(·, y) = κ(·, y + p)` for all `y ≥ y0`;
/// `None` for finite-window specs.
pub fn is_n_periodic(spec: &KappaSpec) -> Option<(usize, usize)> {
    let ColumnTail::EventuallyPeriodic { preperiod, period } = spec.tail() else {
        return None;
    };
    let cols: Vec<Vec<u32>> = (0..preperiod + period).map(|y| column_of(spec, y)).collect();
    let p = (1..=period)
        .filter(|d| period % d == 0)
        .find(|&d| (preperiod..preperiod + period).all(|y| cols[y] == column_of(spec, y + d)))
        .expect("the declared period works");
    let mut y0 = preperiod;
    while y0 > 0 && cols[y0 - 1] == column_of(spec, y0 - 1 + p) {
        y0 -= 1;
    }
    Some((y0, p))
}

/// A closed kernel, as a DFAO reading base-k digits least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelAutomaton {
    pub base: u32,
    pub modulus: u32,
    /// Minimal n-period used for canonical shifts; `None` for finite windows.
    pub n_period: Option<(usize, usize)>,
    /// `states[0]` is the initial state `(0, 0)`.
    pub states: Vec<KernelState>,
    /// `transitions[i][j]`: state reached from `i` on digit `j`.
    pub transitions: Vec<Vec<usize>>,
    /// Output of each state: its offset.
    pub outputs: Vec<u32>,
    /// BFS depth: the least `e` with the state among `a(k^e n + j)`.
    pub depth: Vec<usize>,
}

impl KernelAutomaton {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `a(n)` by running the automaton on the digits of `n`.
    pub fn eval(&self, n: u64) -> u32 {
        let k = u64::from(self.base);
        let mut state = 0;
        let mut rest = n;
        while rest > 0 {
            state = self.transitions[state][(rest % k) as usize];
            rest /= k;
        }
        self.outputs[state]
    }

    /// Number of states at depth at most `e_max`.
    pub fn reachable_within(&self, e_max: usize) -> usize {
        self.depth.iter().filter(|&&d| d <= e_max).count()
    }
}

/// Outcome of a bounded kernel closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelOutcome {
    Closed(KernelAutomaton),
    /// The closure was cut short. Never a proof that the kernel is infinite.
    Inconclusive {
        states_explored: usize,
        reason: InconclusiveReason,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    MaxStates(usize),
    WindowExhausted(usize),
}

impl KernelOutcome {
    pub fn automaton(&self) -> Option<&KernelAutomaton> {
        match self {
            KernelOutcome::Closed(a) => Some(a),
            KernelOutcome::Inconclusive { .. } => None,
        }
    }
}

/// BFS closure from `(0, 0)` under `(e, c) ↦ (e + 1, c + κ(j, e))`.
pub fn kernel_explore(spec: &KappaSpec, max_states: usize) -> KernelOutcome {
    let k = spec.base();
    let modulus = spec.modulus();
    let n_period = is_n_periodic(spec);
    let canonical = |e: usize| match n_period {
        Some((y0, p)) if e >= y0 => y0 + (e - y0) % p,
        _ => e,
    };

    let start = KernelState { shift: 0, offset: 0 };
    let mut index: HashMap<KernelState, usize> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut depth = vec![0usize];
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        let state = states[i];
        let mut row = Vec::with_capacity(k as usize);
        for j in 0..k {
            let add = match spec.digit_value(j, state.shift) {
                Ok(v) => v,
                Err(_) => {
                    return KernelOutcome::Inconclusive {
                        states_explored: states.len(),
                        reason: InconclusiveReason::WindowExhausted(spec.window().unwrap_or(0)),
                    }
                }
            };
            let child = KernelState {
                shift: canonical(state.shift + 1),
                offset: (state.offset + add) % modulus,
            };
            let id = match index.get(&child) {
                Some(&id) => id,
                None => {
                    if states.len() >= max_states {
                        return KernelOutcome::Inconclusive {
                            states_explored: states.len(),
                            reason: InconclusiveReason::MaxStates(max_states),
                        };
                    }
                    let id = states.len();
                    index.insert(child, id);
                    states.push(child);
                    depth.push(depth[i] + 1);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        // BFS pops states in index order, so rows line up with states.
        debug_assert_eq!(transitions.len(), i);
        transitions.push(row);
    }

    let outputs = states.iter().map(|s| s.offset).collect();
    KernelOutcome::Closed(KernelAutomaton {
        base: k,
        modulus,
        n_period,
        states,
        transitions,
        outputs,
        depth,
    })
}

/// Distinct prefixes among the kernel subsequences `a(k^e n + j)`,
/// `e ≤ e_max`, `j < k^e`, `n < horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGroups {
    pub horizon: usize,
    /// Distinct prefixes, in order of their first `(e, j)`.
    pub prefixes: Vec<Vec<u32>>,
    /// First `(e, j)` producing each prefix.
    pub representatives: Vec<(u32, u64)>,
}

impl KernelGroups {
    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }
}

/// Test oracle: materializes every subsequence and groups by exact prefix.
/// The group count is a lower bound on the kernel size.
pub fn kernel_brute_force(spec: &KappaSpec, e_max: u32, horizon: usize) -> Result<KernelGroups> {
    kernel_brute_force_with(spec, e_max, horizon, &Budget::from_env())
}

pub fn kernel_brute_force_with(
    spec: &KappaSpec,
    e_max: u32,
    horizon: usize,
    budget: &Budget,
) -> Result<KernelGroups> {
    let k = u64::from(spec.base());
    let count: u128 = (0..=e_max).map(|e| u128::from(k).pow(e)).sum();
    budget.check("kernel subsequences", count * horizon as u128)?;
    k.checked_pow(e_max)
        .and_then(|p| p.checked_mul(horizon as u64))
        .ok_or(GtmError::Overflow("kernel index"))?;

    // (first (e, j), prefix) for the distinct prefixes at each e
    type Distinct = Vec<((u32, u64), Vec<u32>)>;
    let per_e: Vec<Distinct> = (0..=e_max)
        .into_par_iter()
        .map(|e| -> Result<Distinct> {
            let ke = k.pow(e);
            let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
            let mut out = Vec::new();
            for j in 0..ke {
                let prefix = (0..horizon as u64)
                    .map(|n| a_of_n(spec, ke * n + j))
                    .collect::<Result<Vec<u32>>>()?;
                if !seen.contains_key(&prefix) {
                    seen.insert(prefix.clone(), ());
                    out.push(((e, j), prefix));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut prefixes = Vec::new();
    let mut representatives = Vec::new();
    for (rep, prefix) in per_e.into_iter().flatten() {
        if !index.contains_key(&prefix) {
            index.insert(prefix.clone(), prefixes.len());
            prefixes.push(prefix);
            representatives.push(rep);
        }
    }
    Ok(KernelGroups {
        horizon,
        prefixes,
        representatives,
    })
}

/// For each group, the states whose denotation matches its prefix.
pub fn match_groups(spec: &KappaSpec, automaton: &KernelAutomaton, groups: &KernelGroups) -> Result<Vec<Vec<usize>>> {
    let denotations = automaton
        .states
        .iter()
        .map(|s| (0..groups.horizon as u64).map(|n| s.denote(spec, n)).collect::<Result<Vec<u32>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(groups
        .prefixes
        .iter()
        .map(|p| {
            denotations
                .iter()
                .enumerate()
                .filter(|(_, d)| *d == p)
                .map(|(i, _)| i)
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn n_periods() {
        assert_eq!(is_n_periodic(&KappaSpec::thue_morse()), Some((0, 1)));
        let s = KappaSpec::eventually_periodic(2, 2, vec![vec![1, 0, 1, 0, 1]], 1, 4).unwrap();
        assert_eq!(is_n_periodic(&s), Some((0, 2)));
        let s = KappaSpec::eventually_periodic(3, 2, vec![vec![2, 1, 0, 1, 0]], 1, 4).unwrap();
        assert_eq!(is_n_periodic(&s), Some((1, 2)));
        let fw = KappaSpec::finite_window(2, 2, vec![vec![1, 0]]).unwrap();
        assert_eq!(is_n_periodic(&fw), None);
    }

    #[test]
    fn thue_morse_kernel() {
        let tm = KappaSpec::thue_morse();
        let auto = kernel_explore(&tm, 100);
        let auto = auto.automaton().unwrap();
        assert_eq!(auto.len(), 2);
        assert_eq!(auto.transitions, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(auto.outputs, vec![0, 1]);
        let groups = kernel_brute_force(&tm, 6, 1 << 12).unwrap();
        assert_eq!(groups.len(), 2);
    }

    #[test]
    fn zero_kernel() {
        let z = KappaSpec::zero(3, 4).unwrap();
        assert_eq!(kernel_explore(&z, 10).automaton().unwrap().len(), 1);
        assert_eq!(kernel_brute_force(&z, 3, 256).unwrap().len(), 1);
    }

    #[test]
    fn alternating_columns() {
        let s = KappaSpec::eventually_periodic(2, 2, vec![vec![0, 1]], 0, 2).unwrap();
        let auto = kernel_explore(&s, 100);
        let auto = auto.automaton().unwrap();
        assert!(auto.len() <= 4);
        let groups = kernel_brute_force(&s, 5, 1 << 12).unwrap();
        assert_eq!(groups.len(), auto.reachable_within(5));
        for m in match_groups(&s, auto, &groups).unwrap() {
            assert_eq!(m.len(), 1);
        }
    }

    #[test]
    fn finite_window_is_inconclusive() {
        let fw = KappaSpec::finite_window(2, 2, vec![vec![1, 0, 1]]).unwrap();
        assert!(matches!(
            kernel_explore(&fw, 100),
            KernelOutcome::Inconclusive {
                reason: InconclusiveReason::WindowExhausted(3),
                ..
            }
        ));
        let s = KappaSpec::eventually_periodic(5, 2, vec![vec![1, 2, 3]], 0, 3).unwrap();
        assert!(matches!(
            kernel_explore(&s, 2),
            KernelOutcome::Inconclusive {
                reason: InconclusiveReason::MaxStates(2),
                ..
            }
        ));
    }

    #[test]
    fn brute_force_budget() {
        assert!(matches!(
            kernel_brute_force_with(&KappaSpec::thue_morse(), 10, 1 << 12, &Budget::new(1 << 16)),
            Err(GtmError::BudgetExceeded { .. })
        ));
    }

    fn arb_spec() -> impl Strategy<Value = KappaSpec> {
        (2u32..6, 2u32..5, 0usize..4, 1usize..5).prop_flat_map(|(l, k, y0, p)| {
            proptest::collection::vec(proptest::collection::vec(0..l, y0 + p), (k - 1) as usize)
                .prop_map(move |rows| KappaSpec::eventually_periodic(l, k, rows, y0, p).unwrap())
        })
    }

    proptest! {
        #[test]
        fn automaton_computes_sequence(spec in arb_spec(), n in 0u64..1_000_000) {
            let outcome = kernel_explore(&spec, 1000);
            let auto = outcome.automaton().unwrap();
            prop_assert_eq!(auto.eval(n), a_of_n(&spec, n).unwrap());
        }

        #[test]
        fn state_bound(spec in arb_spec()) {
            let (y0, p) = spec.preperiod_period().unwrap();
            let outcome = kernel_explore(&spec, 1000);
            let auto = outcome.automaton().unwrap();
            prop_assert!(auto.len() <= (y0 + p) * spec.modulus() as usize);
        }

        #[test]
        fn decomposition_identity(spec in arb_spec(), e in 0u32..5, j in 0u64..1000, n in 0u64..500) {
            let ke = u64::from(spec.base()).pow(e);
            let j = j % ke;
            let state = KernelState { shift: e as usize, offset: a_of_n(&spec, j).unwrap() };
            prop_assert_eq!(a_of_n(&spec, ke * n + j).unwrap(), state.denote(&spec, n).unwrap());
        }

        #[test]
        fn shift_periodicity(spec in arb_spec(), e in 0usize..6, extra in 0usize..3) {
            let (y0, p) = spec.preperiod_period().unwrap();
            let e = e + y0;
            let a = KernelState { shift: e, offset: 0 };
            let b = KernelState { shift: e + extra * p, offset: 0 };
            for n in 0..300 {
                prop_assert_eq!(a.denote(&spec, n).unwrap(), b.denote(&spec, n).unwrap());
            }
        }
    }
}
