//! Generalized Thue–Morse sequences of type `(L, k, κ)`.
//!
//! `a(n) = Σ κ(s, y) mod L` over the base-k digits `s·k^y` of `n`. The crate
//! builds these sequences, decides whether they are ultimately periodic,
//! constructs stammering witnesses, computes the k-kernel as an automaton and
//! evaluates the associated series and continued fractions exactly.

pub mod analytic;
pub mod automaton;
pub mod budget;
pub mod error;
pub mod expansion;
pub mod kappa;
pub mod periodicity;
pub mod sequence;
pub mod specfile;
pub mod stammering;

pub use analytic::{
    eval_cf, eval_series, irrationality_estimate, periodic_closed_form, product_coefficients, render_decimal,
    Coefficient, ConvergentList, ExactRational, IrrationalityEstimate, SeriesInterval, TruncatedProductSeries,
    ValueMap,
};
pub use automaton::{
    is_n_periodic, kernel_brute_force, kernel_explore, InconclusiveReason, KernelAutomaton, KernelGroups,
    KernelOutcome, KernelState,
};
pub use budget::Budget;
pub use error::{GtmError, Result};
pub use expansion::{
    digit_count, digit_count_mod, digit_indicator, expand, expand_big, gap_multiple, gap_multiple_pair,
    DigitExpansion, GapMultipleResult, Term,
};
pub use kappa::{ColumnTail, KappaSpec};
pub use periodicity::{
    aenp_scan, brute_force_period, classify, classify_constant, AenpReport, PeriodicityVerdict, PowerCycle,
    Refutation,
};
pub use sequence::{a_of_n, b_exponent, equally_spaced, generate_prefix_morphic, prefix_digit, SequenceWindow};
pub use specfile::{parse_spec, to_toml, SpecFile};
pub use stammering::{build_witness, verify_witness, witness_family, StammerWitness, WitnessCheck};
