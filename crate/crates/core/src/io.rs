//! Version-1 JSON documents for interval sets and verdict reports.
//!
//! Field order is fixed, so identical sets always produce identical bytes.

use std::fs;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::construction::TruncatedSet;
use crate::error::IoError;
use crate::fold::{FoldFailure, FoldReport, Verdict};
use crate::interval::{Interval, IntervalSet};
use crate::scalar::{format_rational, parse_rational, EpsBinding, Scalar};

pub const VERSION: u64 = 1;

/// Digits used for decimal renderings in reports.
pub const REPORT_DIGITS: usize = 12;

#[derive(Serialize, Deserialize)]
struct SetDoc {
    version: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps_ratio: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    excess: Option<Scalar>,
    intervals: Vec<Interval>,
}

/// Optional construction metadata stored next to the intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta {
    pub n: Option<u32>,
    pub depth: Option<u32>,
    pub excess: Option<Scalar>,
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub set: IntervalSet,
    pub meta: Meta,
    /// The stored list was not canonical and has been re-normalized.
    pub non_canonical: bool,
}

pub fn to_document(set: &IntervalSet, meta: &Meta) -> String {
    let doc = SetDoc {
        version: VERSION,
        eps_ratio: set.binding().ratio().map(format_rational),
        n: meta.n,
        depth: meta.depth,
        excess: meta.excess.clone(),
        intervals: set.intervals().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn truncated_document(t: &TruncatedSet) -> String {
    to_document(
        &t.set,
        &Meta {
            n: Some(t.params.n()),
            depth: Some(t.depth),
            excess: Some(t.excess_measure.clone()),
        },
    )
}

pub fn from_document(text: &str) -> Result<Loaded, IoError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    match value.get("version").and_then(serde_json::Value::as_u64) {
        Some(VERSION) => {}
        Some(v) => return Err(IoError::Version(v)),
        None => return Err(IoError::Parse("missing or non-integer \"version\"".into())),
    }
    let doc: SetDoc = serde_json::from_value(value).map_err(|e| IoError::Parse(e.to_string()))?;
    let binding = match &doc.eps_ratio {
        Some(r) => {
            let r = parse_rational(r).map_err(|e| IoError::Parse(e.to_string()))?;
            EpsBinding::new(r).map_err(|e| IoError::Parse(e.to_string()))?
        }
        None => EpsBinding::unbound(),
    };
    let mentions_eps = doc
        .intervals
        .iter()
        .any(|iv| !iv.lo().eps_coef().is_zero() || !iv.hi().eps_coef().is_zero());
    if mentions_eps && !binding.is_bound() {
        return Err(IoError::Parse(
            "endpoints mention eps but \"eps_ratio\" is missing".into(),
        ));
    }
    let non_canonical = !IntervalSet::is_canonical_list(&doc.intervals, &binding);
    let set = IntervalSet::normalize(doc.intervals, binding)?;
    Ok(Loaded {
        set,
        meta: Meta {
            n: doc.n,
            depth: doc.depth,
            excess: doc.excess,
        },
        non_canonical,
    })
}

pub fn save(path: impl AsRef<Path>, set: &IntervalSet, meta: &Meta) -> Result<(), IoError> {
    fs::write(path, to_document(set, meta))?;
    Ok(())
}

pub fn save_truncated(path: impl AsRef<Path>, t: &TruncatedSet) -> Result<(), IoError> {
    fs::write(path, truncated_document(t))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Loaded, IoError> {
    from_document(&fs::read_to_string(path)?)
}

/// Exact value with a decimal rendering.
#[derive(Serialize)]
pub struct Measured {
    pub exact: Scalar,
    pub decimal: String,
}

impl Measured {
    pub fn new(x: &Scalar, binding: &EpsBinding) -> Self {
        Self {
            exact: x.clone(),
            decimal: x.to_decimal(binding, REPORT_DIGITS),
        }
    }
}

#[derive(Serialize)]
pub struct FoldReportDoc {
    pub cell: [Scalar; 2],
    pub cover: Vec<Interval>,
    pub gap: Vec<Interval>,
    pub overlap: Vec<Interval>,
    pub gap_measure: Measured,
    pub overlap_measure: Measured,
    pub max_multiplicity: u32,
    pub failure_reason: Option<FoldFailure>,
    pub exact: bool,
}

impl FoldReportDoc {
    pub fn new(r: &FoldReport) -> Self {
        let b = r.binding();
        Self {
            cell: [r.cell.0.clone(), r.cell.1.clone()],
            cover: r.cover.intervals().to_vec(),
            gap: r.gap.intervals().to_vec(),
            overlap: r.overlap.intervals().to_vec(),
            gap_measure: Measured::new(&r.gap_measure, b),
            overlap_measure: Measured::new(&r.overlap_measure, b),
            max_multiplicity: r.max_multiplicity,
            failure_reason: r.failure_reason,
            exact: r.is_exact(),
        }
    }
}

#[derive(Serialize)]
pub struct VerdictDoc {
    pub version: u64,
    pub eps_ratio: Option<String>,
    pub is_wavelet_set: bool,
    pub total_defect: Measured,
    pub translation: FoldReportDoc,
    pub dilation_pos: FoldReportDoc,
    pub dilation_neg: FoldReportDoc,
}

pub fn verdict_document(v: &Verdict) -> String {
    let b = v.translation.binding();
    let doc = VerdictDoc {
        version: VERSION,
        eps_ratio: b.ratio().map(format_rational),
        is_wavelet_set: v.is_wavelet_set,
        total_defect: Measured::new(&v.total_defect(), b),
        translation: FoldReportDoc::new(&v.translation),
        dilation_pos: FoldReportDoc::new(&v.dilation_pos),
        dilation_neg: FoldReportDoc::new(&v.dilation_neg),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("reports always serialize");
    s.push('\n');
    s
}
