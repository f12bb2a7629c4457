//! `gtm`: command-line front end for generalized Thue–Morse sequences.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gtm::{
    automaton::InconclusiveReason, budget::BUDGET_ENV, stammering::min_exponent, ExactRational, GtmError,
    KernelOutcome, PeriodicityVerdict, SpecFile,
};
use serde_json::{json, Value};

const EXIT_HELP: &str = "\
Exit codes:
  0  success
  1  other error (invalid argument, overflow, I/O)
  2  usage error
  3  spec file could not be read or parsed
  4  refused: the sequence is periodic (no stammering witness exists)
  5  refused: a finite-window spec was asked about columns beyond its window
  6  refused: the term budget would be exceeded

Environment:
  GTM_MAX_TERMS  maximum number of terms one operation may materialize (default 268435456)";

#[derive(Parser, Debug)]
#[command(name = "gtm", version, about = "Generalized Thue-Morse sequences of type (L, k, kappa)", after_help = EXIT_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for parallel scans (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Digit,
    Morphic,
    Both,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Digit => "digit",
            Mode::Morphic => "morphic",
            Mode::Both => "both",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a(N + n·l) for n < count.
    Gen {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Digit)]
        mode: Mode,
        #[arg(long, default_value_t = 32)]
        count: usize,
        #[arg(long = "N", default_value_t = 0)]
        start: u64,
        #[arg(long = "l", default_value_t = 1)]
        stride: u64,
    },
    /// Decide whether the sequence is ultimately periodic.
    Classify {
        spec: PathBuf,
        /// Also scan the windows a(N + n·l) of this length for apparent periods.
        #[arg(long)]
        scan: Option<usize>,
        #[arg(long, default_value_t = 8)]
        scan_max_n: u64,
        #[arg(long, default_value_t = 8)]
        scan_max_l: u64,
    },
    /// Build and verify a stammering witness for a(N + n·l).
    Stammer {
        spec: PathBuf,
        #[arg(long = "N", default_value_t = 0)]
        start: u64,
        #[arg(long = "l", default_value_t = 1)]
        stride: u64,
        /// Construction index; defaults to the smallest legal value.
        #[arg(long)]
        m: Option<u32>,
    },
    /// Close the k-kernel and print it as a DFAO.
    Kernel {
        spec: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_states: usize,
    },
    /// Enclose Σ a(N + n·l) β^{-n-1} in a rational interval.
    Eval {
        spec: PathBuf,
        #[arg(long = "N", default_value_t = 0)]
        start: u64,
        #[arg(long = "l", default_value_t = 1)]
        stride: u64,
        #[arg(long)]
        beta: u64,
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// Convergents of [0; ρ(a(N)), ρ(a(N+l)), …].
    Cf {
        spec: PathBuf,
        #[arg(long = "N", default_value_t = 0)]
        start: u64,
        #[arg(long = "l", default_value_t = 1)]
        stride: u64,
        #[arg(long, default_value_t = 50)]
        depth: usize,
        /// Partial quotient for each residue, comma separated (default j ↦ j + 1).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<u64>>,
    },
    /// Multiple x·l whose base-k expansion starts with 1 followed by a gap > t.
    Gap {
        l: u64,
        k: u32,
        t: u32,
        /// Second threshold; prints a pair with a shared leading exponent.
        #[arg(long)]
        t2: Option<u32>,
    },
}

enum Failure {
    Library(GtmError),
    Io(String),
}

impl From<GtmError> for Failure {
    fn from(e: GtmError) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 3,
            Failure::Library(e) => match e {
                GtmError::SpecParse { .. } => 3,
                GtmError::PeriodicSpec => 4,
                GtmError::WindowExceeded { .. } | GtmError::FiniteWindowSpec => 5,
                GtmError::BudgetExceeded { .. } => 6,
                _ => 1,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.code() {
            3 => "spec",
            4 => "periodic",
            5 => "window",
            6 => "budget",
            _ => "error",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) => m.clone(),
            Failure::Library(e) => e.to_string(),
        }
    }
}

struct Report {
    command: &'static str,
    parameters: Value,
    result: Value,
    text: String,
}

fn load(path: &Path) -> Result<SpecFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    gtm::parse_spec(&text).map_err(|e| match e {
        GtmError::SpecParse { line, column, message } => {
            Failure::Io(format!("{}:{line}:{column}: {message}", path.display()))
        }
        other => other.into(),
    })
}

fn spec_json(file: &SpecFile, path: &Path) -> Value {
    let spec = &file.spec;
    json!({
        "file": path.display().to_string(),
        "name": file.name,
        "L": spec.modulus(),
        "k": spec.base(),
    })
}

fn rat(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn word_text(values: &[u32], modulus: u32) -> String {
    if modulus <= 10 {
        values.iter().map(u32::to_string).collect()
    } else {
        values.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn cmd_gen(path: &Path, mode: Mode, count: usize, start: u64, stride: u64) -> Result<Report, Failure> {
    let file = load(path)?;
    let spec = &file.spec;
    let digit = || gtm::equally_spaced(spec, start, stride, count).map(|w| w.values);
    let morphic = || -> Result<Vec<u32>, GtmError> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let last = (count as u64 - 1)
            .checked_mul(stride)
            .and_then(|x| x.checked_add(start))
            .ok_or(GtmError::Overflow("subsequence index"))?;
        let k = u128::from(spec.base());
        let (mut m, mut len) = (0u32, 1u128);
        while len <= u128::from(last) {
            len *= k;
            m += 1;
        }
        let word = gtm::generate_prefix_morphic(spec, m)?;
        Ok((0..count as u64).map(|i| word[(start + i * stride) as usize]).collect())
    };
    let (values, agree) = match mode {
        Mode::Digit => (digit()?, None),
        Mode::Morphic => (morphic()?, None),
        Mode::Both => {
            let d = digit()?;
            let m = morphic()?;
            let agree = d == m;
            (d, Some(agree))
        }
    };
    let mut text = word_text(&values, spec.modulus());
    if let Some(agree) = agree {
        text.push_str(if agree { " AGREE" } else { " DISAGREE" });
    }
    Ok(Report {
        command: "gen",
        parameters: json!({
            "spec": spec_json(&file, path),
            "mode": mode.name(),
            "count": count,
            "N": start,
            "l": stride,
        }),
        result: json!({ "values": values, "agree": agree }),
        text,
    })
}

fn verdict_json(v: &PeriodicityVerdict) -> Value {
    match v {
        PeriodicityVerdict::Periodic {
            offset,
            period,
            multiplier,
            checked_through,
        } => json!({
            "status": "Periodic",
            "offset": offset,
            "period": period,
            "multiplier": multiplier,
            "checked_through": checked_through,
        }),
        PeriodicityVerdict::NonPeriodic {
            offsets_end,
            refutations,
        } => json!({
            "status": "NonPeriodic",
            "offsets_end": offsets_end,
            "refutations": refutations.iter().map(|r| json!({
                "offset": r.offset,
                "digit": r.digit,
                "exponent": r.exponent,
                "expected": r.expected,
                "found": r.found,
            })).collect::<Vec<_>>(),
        }),
        PeriodicityVerdict::UnknownUpToBound {
            bound,
            consistent_offsets,
        } => json!({
            "status": "UnknownUpToBound",
            "bound": bound,
            "consistent_offsets": consistent_offsets,
        }),
    }
}

fn cmd_classify(path: &Path, scan: Option<usize>, max_n: u64, max_l: u64) -> Result<Report, Failure> {
    let file = load(path)?;
    let verdict = gtm::classify(&file.spec)?;
    let mut result = verdict_json(&verdict);
    let mut text = match &verdict {
        PeriodicityVerdict::Periodic { offset, period, .. } => format!("Periodic offset={offset} period={period}"),
        PeriodicityVerdict::NonPeriodic { offsets_end, .. } => {
            format!("NonPeriodic (offsets 0..{offsets_end} refuted)")
        }
        PeriodicityVerdict::UnknownUpToBound {
            bound,
            consistent_offsets,
        } => format!("UnknownUpToBound bound={bound} consistent_offsets={consistent_offsets:?}"),
    };
    if let Some(horizon) = scan {
        let report = gtm::aenp_scan(&file.spec, max_n, max_l, horizon)?;
        text.push_str(&format!(
            "\nscan: {} of {} windows look periodic",
            report.flagged.len(),
            report.windows_checked
        ));
        result["scan"] = json!({
            "horizon": report.horizon,
            "windows_checked": report.windows_checked,
            "flagged": report.flagged.iter().map(|h| json!({
                "N": h.start,
                "l": h.stride,
                "preperiod": h.preperiod,
                "period": h.period,
            })).collect::<Vec<_>>(),
        });
    }
    Ok(Report {
        command: "classify",
        parameters: json!({
            "spec": spec_json(&file, path),
            "scan": scan.map(|h| json!({ "horizon": h, "max_N": max_n, "max_l": max_l })),
        }),
        result,
        text,
    })
}

fn cmd_stammer(path: &Path, start: u64, stride: u64, m: Option<u32>) -> Result<Report, Failure> {
    let file = load(path)?;
    let spec = &file.spec;
    let m = m.unwrap_or_else(|| min_exponent(spec.base(), start, stride) + 1);
    let w = gtm::build_witness(spec, start, stride, m)?;
    let window = gtm::equally_spaced(spec, start, stride, w.word().len())?;
    let check = gtm::verify_witness(&window, &w)?;
    let b = w.bounds();
    let text = format!(
        "|U|={} |V|={} w={}/{} verified={} bounds={}",
        w.prefix.len(),
        w.repeat.len(),
        w.exponent.numer(),
        w.exponent.denom(),
        check.valid,
        b.all()
    );
    Ok(Report {
        command: "stammer",
        parameters: json!({ "spec": spec_json(&file, path), "N": start, "l": stride, "m": m }),
        result: json!({
            "exponent": format!("{}/{}", w.exponent.numer(), w.exponent.denom()),
            "shift_pair": [w.shift_pair.0, w.shift_pair.1],
            "u_len": w.prefix.len(),
            "v_len": w.repeat.len(),
            "w2_len": w.w2_len,
            "u": w.prefix,
            "v": w.repeat,
            "verified": check.valid,
            "mismatch": check.mismatch,
            "bounds": {
                "w1_upper": b.w1_upper,
                "w2_lower": b.w2_lower,
                "w23_upper": b.w23_upper,
                "tail_fits": b.tail_fits,
                "ratio": b.ratio,
            },
        }),
        text,
    })
}

fn cmd_kernel(path: &Path, max_states: usize) -> Result<Report, Failure> {
    let file = load(path)?;
    let outcome = gtm::kernel_explore(&file.spec, max_states);
    let (result, text) = match &outcome {
        KernelOutcome::Closed(a) => (
            json!({
                "status": "Closed",
                "n_period": a.n_period.map(|(y0, p)| json!({ "preperiod": y0, "period": p })),
                "states": a.states.iter().map(|s| json!({ "shift": s.shift, "offset": s.offset })).collect::<Vec<_>>(),
                "initial": 0,
                "transitions": a.transitions,
                "outputs": a.outputs,
                "depth": a.depth,
            }),
            format!("Closed: {} states", a.len()),
        ),
        KernelOutcome::Inconclusive {
            states_explored,
            reason,
        } => {
            let reason = match reason {
                InconclusiveReason::MaxStates(n) => json!({ "max_states": n }),
                InconclusiveReason::WindowExhausted(w) => json!({ "window": w }),
            };
            (
                json!({ "status": "Inconclusive", "states_explored": states_explored, "reason": reason }),
                format!("Inconclusive after {states_explored} states"),
            )
        }
    };
    Ok(Report {
        command: "kernel",
        parameters: json!({ "spec": spec_json(&file, path), "max_states": max_states }),
        result,
        text,
    })
}

fn cmd_eval(path: &Path, start: u64, stride: u64, beta: u64, digits: u32) -> Result<Report, Failure> {
    let file = load(path)?;
    let spec = &file.spec;
    let iv = gtm::eval_series(spec, start, stride, beta, digits)?;
    let (decimal, certain) = gtm::render_decimal(&iv, digits);
    let closed = match gtm::classify(spec) {
        Ok(PeriodicityVerdict::Periodic { period, .. }) if period <= 1 << 16 => {
            Some(rat(&gtm::periodic_closed_form(spec, start, stride, beta)?))
        }
        _ => None,
    };
    Ok(Report {
        command: "eval",
        parameters: json!({ "spec": spec_json(&file, path), "N": start, "l": stride, "beta": beta, "digits": digits }),
        result: json!({
            "terms": iv.terms,
            "lo": rat(&iv.lo),
            "hi": rat(&iv.hi),
            "decimal": decimal,
            "decimal_certain": certain,
            "closed_form": closed,
        }),
        text: decimal,
    })
}

fn cmd_cf(path: &Path, start: u64, stride: u64, depth: usize, values: Option<Vec<u64>>) -> Result<Report, Failure> {
    let file = load(path)?;
    let spec = &file.spec;
    let map = match &values {
        Some(v) => gtm::ValueMap::new(v.clone())?,
        None => gtm::ValueMap::shifted(spec.modulus()),
    };
    let conv = gtm::eval_cf(spec, start, stride, depth, &map)?;
    let estimate = gtm::irrationality_estimate(&conv).ok();
    let last = conv.len() - 1;
    let text = format!(
        "[{}] p/q = {}/{}",
        conv.partial_quotients.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
        conv.numerators[last],
        conv.denominators[last]
    );
    Ok(Report {
        command: "cf",
        parameters: json!({
            "spec": spec_json(&file, path),
            "N": start,
            "l": stride,
            "depth": depth,
            "values": (0..spec.modulus()).map(|j| map.get(j)).collect::<Vec<_>>(),
        }),
        result: json!({
            "partial_quotients": conv.partial_quotients,
            "numerators": conv.numerators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "denominators": conv.denominators.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "determinant_holds": conv.determinant_holds(),
            "irrationality_estimate": estimate.map(|e| json!({
                "label": "ESTIMATE",
                "value": e.value,
                "at": e.at,
            })),
        }),
        text,
    })
}

fn gap_json(r: &gtm::GapMultipleResult, t: u32) -> Value {
    let c = &r.construction;
    json!({
        "t": t,
        "multiplier": r.multiplier.to_string(),
        "product": r.product.to_string(),
        "expansion": r.expansion.terms().iter().map(|term| json!({ "coeff": term.coeff, "exponent": term.exponent })).collect::<Vec<_>>(),
        "leading_exponent": r.leading_exponent,
        "gap": r.gap,
        "verified": r.satisfies(t),
        "construction": {
            "cofactor": c.cofactor.to_string(),
            "scale_exponent": c.scale_exponent,
            "inverse": c.inverse.to_string(),
            "defect": c.defect.to_string(),
            "unit_branch": c.unit_branch,
        },
    })
}

fn cmd_gap(l: u64, k: u32, t: u32, t2: Option<u32>) -> Result<Report, Failure> {
    let (result, text) = match t2 {
        None => {
            let r = gtm::gap_multiple(l, k, t)?;
            let text = format!("x={} x*l={} verified={}", r.multiplier, r.product, r.satisfies(t));
            (gap_json(&r, t), text)
        }
        Some(t2) => {
            let (a, b) = gtm::gap_multiple_pair(l, k, t, t2)?;
            let text = format!(
                "x={} X={} leading exponents {} {}",
                a.multiplier, b.multiplier, a.leading_exponent, b.leading_exponent
            );
            (json!({ "first": gap_json(&a, t), "second": gap_json(&b, t2) }), text)
        }
    };
    Ok(Report {
        command: "gap",
        parameters: json!({ "l": l, "k": k, "t": t, "t2": t2 }),
        result,
        text,
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Gen {
            spec,
            mode,
            count,
            start,
            stride,
        } => cmd_gen(spec, *mode, *count, *start, *stride),
        Command::Classify {
            spec,
            scan,
            scan_max_n,
            scan_max_l,
        } => cmd_classify(spec, *scan, *scan_max_n, *scan_max_l),
        Command::Stammer { spec, start, stride, m } => cmd_stammer(spec, *start, *stride, *m),
        Command::Kernel { spec, max_states } => cmd_kernel(spec, *max_states),
        Command::Eval {
            spec,
            start,
            stride,
            beta,
            digits,
        } => cmd_eval(spec, *start, *stride, *beta, *digits),
        Command::Cf {
            spec,
            start,
            stride,
            depth,
            values,
        } => cmd_cf(spec, *start, *stride, *depth, values.clone()),
        Command::Gap { l, k, t, t2 } => cmd_gap(*l, *k, *t, *t2),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let started = Instant::now();
    let outcome = run(&cli);
    let elapsed = started.elapsed();
    match outcome {
        Ok(report) => {
            match cli.format {
                Format::Json => {
                    let doc = json!({
                        "command": report.command,
                        "parameters": report.parameters,
                        "result": report.result,
                        "version": env!("CARGO_PKG_VERSION"),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
                }
                Format::Text => println!("{}", report.text),
            }
            eprintln!("wall time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match cli.format {
                Format::Json => eprintln!(
                    "{}",
                    json!({ "error": failure.kind(), "message": failure.message(), "exit_code": failure.code() })
                ),
                Format::Text => eprintln!("error: {}", failure.message()),
            }
            if let Failure::Library(GtmError::BudgetExceeded { .. }) = failure {
                eprintln!("raise the limit with {BUDGET_ENV}=<terms>");
            }
            ExitCode::from(failure.code())
        }
    }
}
