//! Robust preference relations and compensation levels.
//!
//! A robust relation holds between two bundles when every best-fitting
//! utility for the chosen loss ranks the first above the second. Each loss
//! reduces to a finite family of reachability criteria over (a subset of)
//! the observations with fixed efficiency levels; the relation is their
//! conjunction.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::afriat::afriat_estar;
use crate::caps::Caps;
use crate::dataset::{Bundle, PurchaseDataset};
use crate::error::{Error, Result};
use crate::indices::{houtman_maks_minsets, varian_optimal_vectors, Aggregator};
use crate::rational::{qi, Rational};
use crate::relations::{check_e_garp, reach_in, EfficiencyVector, ReachMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    Afriat,
    Varian,
    #[serde(rename = "hm")]
    HoutmanMaks,
}

impl Loss {
    pub fn as_str(&self) -> &'static str {
        match self {
            Loss::Afriat => "afriat",
            Loss::Varian => "varian",
            Loss::HoutmanMaks => "hm",
        }
    }
}

impl std::str::FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "afriat" => Ok(Loss::Afriat),
            "varian" => Ok(Loss::Varian),
            "hm" | "houtman-maks" => Ok(Loss::HoutmanMaks),
            _ => Err(Error::Precondition(format!("unknown loss {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Preferred,
    Dispreferred,
    Equivalent,
    Incomparable,
}

impl Verdict {
    pub fn from_pair(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, true) => Verdict::Equivalent,
            (true, false) => Verdict::Preferred,
            (false, true) => Verdict::Dispreferred,
            (false, false) => Verdict::Incomparable,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustQueryResult {
    pub forward: bool,
    pub backward: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
struct Criterion {
    data: PurchaseDataset,
    budgets: Vec<Rational>,
    mode: ReachMode,
}

impl Criterion {
    fn new(data: PurchaseDataset, e: &EfficiencyVector, mode: ReachMode) -> Self {
        let budgets = (0..data.len()).map(|t| &e.values()[t] * data.expenditure(t)).collect();
        Criterion { data, budgets, mode }
    }
}

/// A robust relation prepared for repeated queries on one dataset.
#[derive(Clone, Debug)]
pub struct RobustRelation {
    goods: usize,
    criteria: Vec<Criterion>,
}

impl RobustRelation {
    /// At `e*`: weak reachability when e*-GARP holds, strict otherwise.
    pub fn afriat(d: &PurchaseDataset) -> Result<Self> {
        let estar = afriat_estar(d);
        let e = EfficiencyVector::uniform(d.len(), &estar)?;
        let mode = if check_e_garp(d, &e)? { ReachMode::Weak } else { ReachMode::Strict };
        Ok(RobustRelation {
            goods: d.goods(),
            criteria: vec![Criterion::new(d.clone(), &e, mode)],
        })
    }

    /// Weak reachability at full efficiency on every maximal consistent subset.
    pub fn houtman_maks(d: &PurchaseDataset, caps: &Caps) -> Result<Self> {
        let criteria = houtman_maks_minsets(d, caps)?
            .into_iter()
            .map(|removed| {
                let keep: Vec<usize> = (0..d.len()).filter(|t| !removed.contains(t)).collect();
                let sub = d.restrict(&keep)?;
                let ones = EfficiencyVector::ones(sub.len());
                Ok(Criterion::new(sub, &ones, ReachMode::Weak))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RobustRelation {
            goods: d.goods(),
            criteria,
        })
    }

    /// Efficiency vectors of all loss-minimizing orders. If some of them
    /// pass vector e-GARP the optimum is attained: weak reachability at each
    /// attaining vector. Otherwise strict reachability at each limit vector.
    pub fn varian(d: &PurchaseDataset, agg: Aggregator, caps: &Caps) -> Result<Self> {
        caps.check_orders("observations for robust Varian preferences", d.len())?;
        let (_, mut optimal) = varian_optimal_vectors(d, agg)?;
        optimal.sort();
        let mut feasible = Vec::new();
        for e in &optimal {
            if check_e_garp(d, e)? {
                feasible.push(e.clone());
            }
        }
        let criteria = if feasible.is_empty() {
            optimal.iter().map(|e| Criterion::new(d.clone(), e, ReachMode::Strict)).collect()
        } else {
            feasible.iter().map(|e| Criterion::new(d.clone(), e, ReachMode::Weak)).collect()
        };
        Ok(RobustRelation {
            goods: d.goods(),
            criteria,
        })
    }

    pub fn build(d: &PurchaseDataset, loss: Loss, caps: &Caps) -> Result<Self> {
        match loss {
            Loss::Afriat => Self::afriat(d),
            Loss::Varian => Self::varian(d, Aggregator::MeanShortfall, caps),
            Loss::HoutmanMaks => Self::houtman_maks(d, caps),
        }
    }

    /// `a 𝓡 b`.
    pub fn relates(&self, a: &Bundle, b: &Bundle) -> Result<bool> {
        for x in [a, b] {
            if x.len() != self.goods {
                return Err(Error::DimensionMismatch {
                    expected: self.goods,
                    found: x.len(),
                });
            }
        }
        Ok(self
            .criteria
            .iter()
            .all(|c| reach_in(&c.data, &c.budgets, c.mode, a, b)))
    }

    pub fn query(&self, a: &Bundle, b: &Bundle) -> Result<RobustQueryResult> {
        let forward = self.relates(a, b)?;
        let backward = self.relates(b, a)?;
        Ok(RobustQueryResult {
            forward,
            backward,
            verdict: Verdict::from_pair(forward, backward),
        })
    }

    /// Number of reachability criteria conjoined.
    pub fn criteria_count(&self) -> usize {
        self.criteria.len()
    }
}

pub fn robust_pref_afriat(d: &PurchaseDataset, a: &Bundle, b: &Bundle) -> Result<bool> {
    RobustRelation::afriat(d)?.relates(a, b)
}

pub fn robust_pref_hm(d: &PurchaseDataset, a: &Bundle, b: &Bundle, caps: &Caps) -> Result<bool> {
    RobustRelation::houtman_maks(d, caps)?.relates(a, b)
}

pub fn robust_pref_varian(
    d: &PurchaseDataset,
    a: &Bundle,
    b: &Bundle,
    agg: Aggregator,
    caps: &Caps,
) -> Result<bool> {
    RobustRelation::varian(d, agg, caps)?.relates(a, b)
}

/// The observed bundle with the lower median quantity of `good`; ties go to
/// the lower observation index.
pub fn median_bundle(d: &PurchaseDataset, good: usize) -> Result<Bundle> {
    if good >= d.goods() {
        return Err(Error::Precondition(format!(
            "good {} out of range (dataset has {})",
            good,
            d.goods()
        )));
    }
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| {
        d.bundle(a).as_slice()[good]
            .cmp(&d.bundle(b).as_slice()[good])
            .then(a.cmp(&b))
    });
    Ok(d.bundle(idx[(d.len() + 1) / 2 - 1]).clone())
}

/// A threshold in `[0, cap]`, or none reached within the cap.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Threshold {
    Value(Rational),
    OverCap,
}

impl Threshold {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Threshold::Value(v) => Some(v),
            Threshold::OverCap => None,
        }
    }

    fn or_cap<'a>(&'a self, cap: &'a Rational) -> &'a Rational {
        self.value().unwrap_or(cap)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompensationResult {
    pub k_w: Threshold,
    pub k_s: Threshold,
    pub cap: Rational,
}

/// Parameters of the counterfactual: `good` is cut by `reduction`, every
/// other good is raised by a factor `1 + k` for `k ∈ [0, cap]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompensationSpec {
    pub loss: Loss,
    pub good: usize,
    pub reduction: Rational,
    pub cap: Rational,
}

impl CompensationSpec {
    pub fn new(loss: Loss, good: usize) -> Self {
        CompensationSpec {
            loss,
            good,
            reduction: Rational::new(1.into(), 4.into()),
            cap: Rational::one(),
        }
    }

    fn validate(&self, d: &PurchaseDataset) -> Result<()> {
        if !self.reduction.is_positive() || self.reduction >= Rational::one() {
            return Err(Error::Precondition("reduction must lie strictly between 0 and 1".into()));
        }
        if self.cap.is_negative() {
            return Err(Error::Precondition("cap must be nonnegative".into()));
        }
        if self.good >= d.goods() {
            return Err(Error::Precondition(format!("good {} out of range", self.good)));
        }
        Ok(())
    }
}

/// One row of the per-`k` scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionRow {
    pub k: Rational,
    /// `q^M 𝓡 q^{M,k}`.
    pub baseline_preferred: bool,
    /// `q^{M,k} 𝓡 q^M`.
    pub counterfactual_preferred: bool,
    pub verdict: Verdict,
}

struct Counterfactual {
    base: Bundle,
    good: usize,
    reduced: Rational,
}

impl Counterfactual {
    fn at(&self, k: &Rational) -> Bundle {
        let factor = Rational::one() + k;
        let q = self
            .base
            .as_slice()
            .iter()
            .enumerate()
            .map(|(l, x)| if l == self.good { &self.reduced * x } else { &factor * x })
            .collect();
        Bundle::new(q).expect("nonnegative scaling of a bundle")
    }
}

struct Compensation {
    relation: RobustRelation,
    counterfactual: Counterfactual,
    points: Vec<Rational>,
    cap: Rational,
}

impl Compensation {
    fn new(d: &PurchaseDataset, spec: &CompensationSpec, caps: &Caps) -> Result<Self> {
        spec.validate(d)?;
        let relation = RobustRelation::build(d, spec.loss, caps)?;
        let base = median_bundle(d, spec.good)?;
        let counterfactual = Counterfactual {
            base: base.clone(),
            good: spec.good,
            reduced: Rational::one() - &spec.reduction,
        };
        let g = spec.good;
        let mut points = vec![Rational::zero(), spec.cap.clone()];
        // budget lines: p·q^{M,k} = budget
        for c in &relation.criteria {
            for t in 0..c.data.len() {
                let p = c.data.price(t).as_slice();
                let others: Rational = (0..base.len()).filter(|&l| l != g).map(|l| &p[l] * &base.as_slice()[l]).sum();
                if others.is_positive() {
                    let fixed = &p[g] * &counterfactual.reduced * &base.as_slice()[g];
                    points.push((&c.budgets[t] - fixed - &others) / others);
                }
            }
        }
        // dominance flips against any observed bundle or the baseline
        let mut bundles: Vec<&Bundle> = vec![&base];
        for c in &relation.criteria {
            bundles.extend(c.data.observations().iter().map(|o| o.quantity()));
        }
        for x in bundles {
            for l in (0..base.len()).filter(|&l| l != g) {
                let ql = &base.as_slice()[l];
                if ql.is_positive() {
                    points.push(&x.as_slice()[l] / ql - Rational::one());
                }
            }
        }
        points.retain(|k| !k.is_negative() && *k <= spec.cap);
        points.sort();
        points.dedup();
        Ok(Compensation {
            relation,
            counterfactual,
            points,
            cap: spec.cap.clone(),
        })
    }

    fn row(&self, k: &Rational) -> Result<RegionRow> {
        let b = self.counterfactual.at(k);
        let forward = self.relation.relates(&self.counterfactual.base, &b)?;
        let backward = self.relation.relates(&b, &self.counterfactual.base)?;
        Ok(RegionRow {
            k: k.clone(),
            baseline_preferred: forward,
            counterfactual_preferred: backward,
            verdict: Verdict::from_pair(backward, forward),
        })
    }

    /// Breakpoints interleaved with the midpoints of the gaps between them.
    fn probes(&self) -> Vec<(Rational, bool)> {
        let mut out = Vec::with_capacity(2 * self.points.len());
        for (i, k) in self.points.iter().enumerate() {
            out.push((k.clone(), true));
            if let Some(next) = self.points.get(i + 1) {
                out.push(((k + next) / qi(2), false));
            }
        }
        out
    }

    /// Infimum of `{k ∈ [0,cap] : pred(k)}`, given that the predicate is
    /// constant between consecutive breakpoints.
    fn threshold(&self, pred: impl Fn(&RegionRow) -> bool) -> Result<Threshold> {
        let probes = self.probes();
        for (i, (k, is_point)) in probes.iter().enumerate() {
            if pred(&self.row(k)?) {
                let at = if *is_point { k.clone() } else { probes[i - 1].0.clone() };
                return Ok(Threshold::Value(at));
            }
        }
        Ok(Threshold::OverCap)
    }
}

pub fn compensation_levels(d: &PurchaseDataset, spec: &CompensationSpec, caps: &Caps) -> Result<CompensationResult> {
    let comp = Compensation::new(d, spec, caps)?;
    Ok(CompensationResult {
        k_w: comp.threshold(|r| !r.baseline_preferred)?,
        k_s: comp.threshold(|r| r.counterfactual_preferred)?,
        cap: comp.cap.clone(),
    })
}

/// Relation status at every breakpoint, every gap midpoint and `steps + 1`
/// evenly spaced values of `k`, in increasing order.
pub fn compensation_regions(
    d: &PurchaseDataset,
    spec: &CompensationSpec,
    caps: &Caps,
    steps: usize,
) -> Result<Vec<RegionRow>> {
    let comp = Compensation::new(d, spec, caps)?;
    let mut ks: Vec<Rational> = comp.probes().into_iter().map(|(k, _)| k).collect();
    let steps = steps.max(1);
    ks.extend((0..=steps).map(|i| &comp.cap * Rational::new((i as i64).into(), (steps as i64).into())));
    ks.sort();
    ks.dedup();
    ks.iter().map(|k| comp.row(k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sharpness {
    FirstSharper,
    SecondSharper,
    Equal,
    Incomparable,
}

/// Compares the welfare intervals `[k_w, k_s]`; the narrower one (by
/// containment) is sharper. An over-cap end counts as the cap.
pub fn sharpness_compare(r1: &CompensationResult, r2: &CompensationResult) -> Result<Sharpness> {
    if r1.cap != r2.cap {
        return Err(Error::Precondition("compensation results use different caps".into()));
    }
    let cap = &r1.cap;
    let (a0, a1) = (r1.k_w.or_cap(cap), r1.k_s.or_cap(cap));
    let (b0, b1) = (r2.k_w.or_cap(cap), r2.k_s.or_cap(cap));
    let first_in_second = b0 <= a0 && a1 <= b1;
    let second_in_first = a0 <= b0 && b1 <= a1;
    Ok(match (first_in_second, second_in_first) {
        (true, true) => Sharpness::Equal,
        (true, false) => Sharpness::FirstSharper,
        (false, true) => Sharpness::SecondSharper,
        (false, false) => Sharpness::Incomparable,
    })
}
