//! Preference orders on the observed bundles and the efficiency vectors
//! they induce.
//!
//! A total preorder is stored as one integer level per observation; higher
//! is better. Admissible orders respect dominance: `q^t ≥ q^s` forces
//! `level(t) ≥ level(s)`, strictly when the bundles differ.

use num_traits::One;

use crate::dataset::PurchaseDataset;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::relations::{CostTable, EfficiencyVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceOrder {
    levels: Vec<usize>,
}

impl PreferenceOrder {
    pub fn new(levels: Vec<usize>) -> Self {
        PreferenceOrder { levels }
    }

    /// Strict ranking from best to worst.
    pub fn from_ranking(best_first: &[usize]) -> Self {
        let n = best_first.len();
        let mut levels = vec![0; n];
        for (rank, &t) in best_first.iter().enumerate() {
            levels[t] = n - 1 - rank;
        }
        PreferenceOrder { levels }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Whether the order is consistent with componentwise dominance.
    pub fn respects_dominance(&self, d: &PurchaseDataset) -> bool {
        let n = d.len();
        self.levels.len() == n
            && (0..n).all(|t| {
                (0..n).all(|s| {
                    let (bt, bs) = (d.bundle(t), d.bundle(s));
                    if bt == bs {
                        self.levels[t] == self.levels[s]
                    } else if bt.dominates(bs) {
                        self.levels[t] > self.levels[s]
                    } else {
                        true
                    }
                })
            })
    }
}

/// `e_t = min { p^t·q^s / p^t·q^t : level(s) ≥ level(t) }`, never above 1.
pub fn order_efficiency(d: &PurchaseDataset, order: &PreferenceOrder) -> Result<EfficiencyVector> {
    if order.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: order.len(),
        });
    }
    if !order.respects_dominance(d) {
        return Err(Error::Precondition("order contradicts bundle dominance".into()));
    }
    let costs = CostTable::new(d);
    Ok(efficiency_from_levels(&costs, order.levels()))
}

pub(crate) fn efficiency_from_levels(costs: &CostTable, levels: &[usize]) -> EfficiencyVector {
    let n = levels.len();
    let values = (0..n)
        .map(|t| {
            (0..n)
                .filter(|&s| levels[s] >= levels[t])
                .map(|s| costs.ratio(t, s))
                .min()
                .unwrap_or_else(Rational::one)
                .min(Rational::one())
        })
        .collect();
    EfficiencyVector::new(values).expect("ratios of nonnegative costs lie in [0,1] after clamping")
}

/// Observations grouped by identical bundles, plus the dominance structure
/// between groups.
#[derive(Clone, Debug)]
pub(crate) struct BundleClasses {
    /// Members of each class, in index order.
    pub members: Vec<Vec<usize>>,
    /// `above[c]`: classes whose bundle strictly dominates class `c`'s.
    pub above: Vec<Vec<usize>>,
}

impl BundleClasses {
    pub fn new(d: &PurchaseDataset) -> Self {
        let n = d.len();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![usize::MAX; n];
        for t in 0..n {
            match (0..t).find(|&s| d.bundle(s) == d.bundle(t)) {
                Some(s) => {
                    class_of[t] = class_of[s];
                    members[class_of[s]].push(t);
                }
                None => {
                    class_of[t] = members.len();
                    members.push(vec![t]);
                }
            }
        }
        let k = members.len();
        let above = (0..k)
            .map(|c| {
                (0..k)
                    .filter(|&o| o != c && d.bundle(members[o][0]).dominates(d.bundle(members[c][0])))
                    .collect()
            })
            .collect();
        BundleClasses { members, above }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// Every dominance-respecting strict ranking of bundle classes, as orders.
/// Identical bundles always share a level.
pub fn linear_orders(d: &PurchaseDataset) -> Vec<PreferenceOrder> {
    let classes = BundleClasses::new(d);
    let k = classes.len();
    let mut out = Vec::new();
    let mut placed = vec![false; k];
    let mut ranking = Vec::with_capacity(k);
    fn rec(
        classes: &BundleClasses,
        placed: &mut Vec<bool>,
        ranking: &mut Vec<usize>,
        out: &mut Vec<PreferenceOrder>,
        n: usize,
    ) {
        let k = classes.len();
        if ranking.len() == k {
            let mut levels = vec![0; n];
            for (rank, &c) in ranking.iter().enumerate() {
                for &t in &classes.members[c] {
                    levels[t] = k - 1 - rank;
                }
            }
            out.push(PreferenceOrder::new(levels));
            return;
        }
        for c in 0..k {
            if !placed[c] && classes.above[c].iter().all(|&o| placed[o]) {
                placed[c] = true;
                ranking.push(c);
                rec(classes, placed, ranking, out, n);
                ranking.pop();
                placed[c] = false;
            }
        }
    }
    rec(&classes, &mut placed, &mut ranking, &mut out, d.len());
    out
}

/// Every dominance-respecting total preorder (ties allowed).
pub fn total_preorders(d: &PurchaseDataset) -> Vec<PreferenceOrder> {
    let n = d.len();
    let mut out = Vec::new();
    // Assign blocks from the top down: each step picks a nonempty subset of
    // the remaining observations as the next indifference class.
    fn rec(d: &PurchaseDataset, remaining: u64, blocks: &mut Vec<u64>, out: &mut Vec<PreferenceOrder>) {
        if remaining == 0 {
            let n = d.len();
            let mut levels = vec![0; n];
            let k = blocks.len();
            for (i, b) in blocks.iter().enumerate() {
                for (t, level) in levels.iter_mut().enumerate() {
                    if b >> t & 1 == 1 {
                        *level = k - 1 - i;
                    }
                }
            }
            let order = PreferenceOrder::new(levels);
            if order.respects_dominance(d) {
                out.push(order);
            }
            return;
        }
        let mut sub = remaining;
        while sub != 0 {
            blocks.push(sub);
            rec(d, remaining & !sub, blocks, out);
            blocks.pop();
            sub = (sub - 1) & remaining;
        }
    }
    assert!(n < 64, "preorder enumeration is for small datasets");
    rec(d, (1u64 << n) - 1, &mut Vec::new(), &mut out);
    out
}
