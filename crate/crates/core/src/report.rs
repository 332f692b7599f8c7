//! Serializable per-dataset reports and rank correlations across a panel.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::afriat::{afriat_index, money_pump_cost};
use crate::caps::Caps;
use crate::classes::check_homothetic;
use crate::dataset::PurchaseDataset;
use crate::error::{Error, Result};
use crate::indices::{houtman_maks_index, swaps_index, varian_index, Aggregator};
use crate::rational::{format_rational, to_f64, Rational};
use crate::relations::{check_garp, classify_cycles, CycleClass};

/// Version tag carried by every JSON document.
pub const SCHEMA_VERSION: &str = "revpref/1";

/// An exact rational with a floating-point rendering alongside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactNumber {
    pub exact: String,
    pub decimal: f64,
}

impl From<&Rational> for ExactNumber {
    fn from(v: &Rational) -> Self {
        ExactNumber {
            exact: format_rational(v),
            decimal: to_f64(v),
        }
    }
}

impl From<Rational> for ExactNumber {
    fn from(v: Rational) -> Self {
        ExactNumber::from(&v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Note {
    pub index: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSelection {
    Afriat,
    Varian,
    Hm,
    Swaps,
    All,
}

impl IndexSelection {
    fn includes(&self, other: IndexSelection) -> bool {
        *self == IndexSelection::All || *self == other
    }
}

impl std::str::FromStr for IndexSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "afriat" => Ok(IndexSelection::Afriat),
            "varian" => Ok(IndexSelection::Varian),
            "hm" => Ok(IndexSelection::Hm),
            "swaps" => Ok(IndexSelection::Swaps),
            "all" => Ok(IndexSelection::All),
            _ => Err(Error::Precondition(format!("unknown index {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub dataset_id: String,
    pub observations: usize,
    pub goods: usize,
    pub garp: bool,
    pub cycle_class: CycleClass,
    pub afriat: Option<ExactNumber>,
    pub varian: Option<ExactNumber>,
    pub houtman_maks: Option<usize>,
    pub swaps: Option<ExactNumber>,
    /// Money-pump cost of the reported violating cycle; zero under GARP.
    pub money_pump: Option<ExactNumber>,
    /// Witness cycle, 1-based.
    pub witness: Option<Vec<usize>>,
    pub homothetic: bool,
    pub notes: Vec<Note>,
}

/// Computes the selected indices. Cap violations become notes and leave the
/// affected field empty; other failures are errors.
pub fn index_report(id: &str, d: &PurchaseDataset, which: IndexSelection, caps: &Caps) -> Result<IndexReport> {
    let garp = check_garp(d);
    let mut notes = Vec::new();
    let mut capped = |name: &str, r: Result<Rational>| -> Result<Option<ExactNumber>> {
        match r {
            Ok(v) => Ok(Some(v.into())),
            Err(e @ Error::CapExceeded { .. }) => {
                notes.push(Note {
                    index: name.to_string(),
                    message: e.to_string(),
                });
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    let afriat = if which.includes(IndexSelection::Afriat) {
        Some(afriat_index(d).into())
    } else {
        None
    };
    let varian = if which.includes(IndexSelection::Varian) {
        capped("varian", varian_index(d, Aggregator::MeanShortfall))?
    } else {
        None
    };
    let swaps = if which.includes(IndexSelection::Swaps) {
        capped("swaps", swaps_index(d, caps))?
    } else {
        None
    };
    let houtman_maks = which.includes(IndexSelection::Hm).then(|| houtman_maks_index(d));
    let money_pump = match &garp.witness {
        Some(w) => Some(money_pump_cost(d, w)?.into()),
        None => Some(Rational::from_integer(0.into()).into()),
    };
    Ok(IndexReport {
        dataset_id: id.to_string(),
        observations: d.len(),
        goods: d.goods(),
        garp: garp.satisfied,
        cycle_class: classify_cycles(d),
        afriat,
        varian,
        houtman_maks,
        swaps,
        money_pump,
        witness: garp.witness.map(|w| w.nodes.iter().map(|t| t + 1).collect()),
        homothetic: check_homothetic(d),
        notes,
    })
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
pub fn average_ranks<T: Ord>(values: &[T]) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[idx[j + 1]].cmp(&values[idx[i]]) == Ordering::Equal {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation. When both sides are constant the rankings
/// agree trivially (1); when only one is, there is no association (0).
pub fn spearman<T: Ord>(x: &[T], y: &[T]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = rx.len() as f64;
    if rx.is_empty() {
        return Ok(1.0);
    }
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    Ok(match (sxx == 0.0, syy == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpearmanMatrix {
    pub indices: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    /// Number of datasets entering the correlations.
    pub sample_size: usize,
}

/// Pairwise correlations among Afriat, Varian and Houtman-Maks, over the
/// reports that carry all three.
pub fn spearman_matrix(reports: &[&IndexReport]) -> Result<SpearmanMatrix> {
    let mut cols: [Vec<Rational>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for r in reports {
        let parse = |x: &Option<ExactNumber>| {
            x.as_ref().and_then(|v| crate::rational::parse_rational(&v.exact).ok())
        };
        if let (Some(a), Some(v), Some(h)) = (parse(&r.afriat), parse(&r.varian), r.houtman_maks) {
            cols[0].push(a);
            cols[1].push(v);
            cols[2].push(Rational::from_integer((h as i64).into()));
        }
    }
    let mut matrix = vec![vec![1.0; 3]; 3];
    for i in 0..3 {
        for j in i + 1..3 {
            let c = spearman(&cols[i], &cols[j])?;
            matrix[i][j] = c;
            matrix[j][i] = c;
        }
    }
    Ok(SpearmanMatrix {
        indices: vec!["afriat".into(), "varian".into(), "houtman_maks".into()],
        matrix,
        sample_size: cols[0].len(),
    })
}
