//! TOML spec files.
//!
//! ```toml
//! name = "thue-morse"
//! L = 2
//! k = 2
//! preperiod = 0
//! period = 1
//! kappa = [[1]]      # one row per digit s = 1..k-1, one entry per column y
//! ```
//!
//! A finite-window spec replaces `preperiod`/`period` with `window`, which must
//! equal the number of stored columns.

use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{GtmError, Result};
use crate::kappa::{ColumnTail, KappaSpec};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: Option<String>,
    comment: Option<String>,
    #[serde(rename = "L")]
    modulus: Spanned<u32>,
    k: Spanned<u32>,
    preperiod: Option<Spanned<usize>>,
    period: Option<Spanned<usize>>,
    window: Option<Spanned<usize>>,
    kappa: Spanned<Vec<Spanned<Vec<Spanned<u32>>>>>,
}

/// A parsed spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub name: Option<String>,
    pub comment: Option<String>,
    pub spec: KappaSpec,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(text: &str, span: Range<usize>, message: impl Into<String>) -> GtmError {
    let (line, column) = position(text, span.start);
    GtmError::SpecParse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a spec file, reporting problems with line and column.
pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        error_at(text, span, e.message().to_string())
    })?;

    let modulus = *raw.modulus.get_ref();
    if modulus < 2 {
        return Err(error_at(text, raw.modulus.span(), "L must be at least 2"));
    }
    let k = *raw.k.get_ref();
    if k < 2 {
        return Err(error_at(text, raw.k.span(), "k must be at least 2"));
    }
    let rows = raw.kappa.get_ref();
    if rows.len() != k as usize - 1 {
        return Err(error_at(
            text,
            raw.kappa.span(),
            format!("kappa needs {} rows (digits 1..k-1), found {}", k - 1, rows.len()),
        ));
    }
    for row in rows {
        for v in row.get_ref() {
            if *v.get_ref() >= modulus {
                return Err(error_at(
                    text,
                    v.span(),
                    format!("entry {} is outside [0, {}]", v.get_ref(), modulus - 1),
                ));
            }
        }
    }
    let width = rows.first().map_or(0, |r| r.get_ref().len());
    if let Some(row) = rows.iter().find(|r| r.get_ref().len() != width) {
        return Err(error_at(
            text,
            row.span(),
            format!("row has {} columns, the first row has {}", row.get_ref().len(), width),
        ));
    }
    let table: Vec<Vec<u32>> = rows
        .iter()
        .map(|r| r.get_ref().iter().map(|v| *v.get_ref()).collect())
        .collect();

    let spec = match (&raw.preperiod, &raw.period, &raw.window) {
        (Some(pre), Some(per), None) => {
            if *per.get_ref() == 0 {
                return Err(error_at(text, per.span(), "period must be at least 1"));
            }
            if pre.get_ref() + per.get_ref() != width {
                return Err(error_at(
                    text,
                    raw.kappa.span(),
                    format!(
                        "kappa rows need preperiod + period = {} columns, found {}",
                        pre.get_ref() + per.get_ref(),
                        width
                    ),
                ));
            }
            KappaSpec::eventually_periodic(modulus, k, table, *pre.get_ref(), *per.get_ref())
        }
        (None, None, Some(window)) => {
            if *window.get_ref() != width {
                return Err(error_at(
                    text,
                    window.span(),
                    format!("window {} does not match the {} stored columns", window.get_ref(), width),
                ));
            }
            KappaSpec::finite_window(modulus, k, table)
        }
        _ => {
            return Err(error_at(
                text,
                0..0,
                "give either both preperiod and period, or window alone",
            ))
        }
    }
    .map_err(|e| error_at(text, raw.kappa.span(), e.to_string()))?;

    Ok(SpecFile {
        name: raw.name,
        comment: raw.comment,
        spec,
    })
}

/// Canonical on-disk form.
pub fn to_toml(spec: &KappaSpec, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("name = {:?}\n", name));
    }
    out.push_str(&format!("L = {}\nk = {}\n", spec.modulus(), spec.base()));
    match spec.tail() {
        ColumnTail::EventuallyPeriodic { preperiod, period } => {
            out.push_str(&format!("preperiod = {}\nperiod = {}\n", preperiod, period));
        }
        ColumnTail::FiniteWindow { window } => out.push_str(&format!("window = {}\n", window)),
    }
    let rows: Vec<String> = spec
        .rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    out.push_str(&format!("kappa = [{}]\n", rows.join(", ")));
    out
}
