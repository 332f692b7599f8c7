//! Rationalizability by homothetic and by objective concave expected utility.
//!
//! Both conditions bound the product of ratios around every cycle of a
//! weighted digraph on the observations. Products are tracked exactly with
//! a multiplicative Bellman-Ford.

use num_traits::{One, Signed};

use crate::dataset::PurchaseDataset;
use crate::error::{Error, Result};
use crate::rational::{qi, Rational};
use crate::relations::CostTable;

/// State probabilities: strictly positive, summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityVector(Vec<Rational>);

impl ProbabilityVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|p| !p.is_positive()) {
            return Err(Error::Precondition("probabilities must be positive".into()));
        }
        if values.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::Precondition("probabilities must sum to 1".into()));
        }
        Ok(ProbabilityVector(values))
    }

    pub fn uniform(states: usize) -> Result<Self> {
        if states == 0 {
            return Err(Error::Precondition("at least one state is required".into()));
        }
        Self::new(vec![Rational::one() / qi(states as i64); states])
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Whether some cycle has edge-weight product below one. `w[i][j]` is the
/// weight of `i → j`; `None` means no edge. Weights must be positive.
pub fn has_cycle_product_below_one(w: &[Vec<Option<Rational>>]) -> bool {
    let n = w.len();
    // distances from a virtual source joined to every node with weight 1
    let mut dist = vec![Rational::one(); n];
    for round in 0..=n {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if let Some(wij) = &w[i][j] {
                    let cand = &dist[i] * wij;
                    if cand < dist[j] {
                        if round == n {
                            return true;
                        }
                        dist[j] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return false;
        }
    }
    false
}

/// Every cycle's product of `p^t·q^s / p^t·q^t` is at least one.
pub fn check_homothetic(d: &PurchaseDataset) -> bool {
    let costs = CostTable::new(d);
    let n = d.len();
    let w: Vec<Vec<Option<Rational>>> = (0..n)
        .map(|t| (0..n).map(|s| Some(costs.ratio(t, s))).collect())
        .collect();
    !has_cycle_product_below_one(&w)
}

/// Largest ratio `π_ℓ̃·p^t_ℓ / (π_ℓ·p^u_ℓ̃)` over good pairs with `q^t_ℓ > q^u_ℓ̃`.
pub fn oceu_edge_weight(d: &PurchaseDataset, pi: &ProbabilityVector, t: usize, u: usize) -> Option<Rational> {
    let (qt, qu) = (d.bundle(t).as_slice(), d.bundle(u).as_slice());
    let (pt, pu) = (d.price(t).as_slice(), d.price(u).as_slice());
    let pi = pi.values();
    let l = qt.len();
    (0..l)
        .flat_map(|a| (0..l).map(move |b| (a, b)))
        .filter(|&(a, b)| qt[a] > qu[b])
        .map(|(a, b)| &pi[b] * &pt[a] / (&pi[a] * &pu[b]))
        .max()
}

/// No balanced test sequence has a ratio product above one.
pub fn check_oceu(d: &PurchaseDataset, pi: &ProbabilityVector) -> Result<bool> {
    if pi.len() != d.goods() {
        return Err(Error::DimensionMismatch {
            expected: d.goods(),
            found: pi.len(),
        });
    }
    let n = d.len();
    let weights: Vec<Vec<Option<Rational>>> = (0..n)
        .map(|t| (0..n).map(|u| oceu_edge_weight(d, pi, t, u)).collect())
        .collect();
    if (0..n).any(|t| weights[t][t].as_ref().map_or(false, |w| *w > Rational::one())) {
        return Ok(false);
    }
    let inverted: Vec<Vec<Option<Rational>>> = weights
        .iter()
        .map(|row| row.iter().map(|w| w.as_ref().map(|x| x.recip())).collect())
        .collect();
    Ok(!has_cycle_product_below_one(&inverted))
}
