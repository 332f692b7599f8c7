//! Afriat efficiency, rationalizing utilities, GARP-restoring perturbations
//! and money-pump costs.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dataset::{Bundle, PurchaseDataset};
use crate::error::{Error, Result};
use crate::rational::{qi, Rational};
use crate::relations::{
    breakpoints, check_e_garp_scalar, check_garp, direct_relations, find_cycle, is_e_acyclic,
    transitive_closure, BoolMatrix, CostTable, CycleWitness, EfficiencyVector,
};
use crate::utility::{maximize_on_budget, Piece, PiecewiseConcaveUtility};

/// Largest uniform efficiency `e` at which the data pass e-GARP.
///
/// Scans the breakpoint grid from the top; the first level at which the
/// strict relation is acyclic is the answer.
pub fn afriat_estar(d: &PurchaseDataset) -> Rational {
    let grid = breakpoints(d);
    grid.values()
        .iter()
        .rev()
        .find(|e| is_e_acyclic(d, e))
        .cloned()
        // the smallest grid value always leaves the strict relation empty
        .unwrap_or_else(Rational::zero)
}

/// `1 − e*`.
pub fn afriat_index(d: &PurchaseDataset) -> Rational {
    Rational::one() - afriat_estar(d)
}

/// A utility that `e`-rationalizes `d`: for every `t`, nothing on the shrunk
/// budget `{x : p^t·x ≤ e·p^t·q^t}` beats `q^t`.
pub fn construct_utility(d: &PurchaseDataset, e: &Rational) -> Result<PiecewiseConcaveUtility> {
    if e.is_negative() || *e > Rational::one() {
        return Err(Error::Precondition("efficiency must lie in [0,1]".into()));
    }
    if !check_e_garp_scalar(d, e)? {
        return Err(Error::Precondition("data violate e-GARP at the requested level".into()));
    }
    let n = d.len();
    let costs = CostTable::new(d);
    // a[s][t] = p^s·q^t − e·m_s; Afriat numbers must satisfy U_t ≤ U_s + λ_s·a[s][t].
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|s| {
            let budget = e * costs.own(s);
            (0..n).map(|t| costs.cost(s, t) - &budget).collect()
        })
        .collect();

    // Level of s: number of R_e-strongly-connected classes reachable from s.
    let reach = transitive_closure(&BoolMatrix::from_fn(n, |s, t| s == t || !a[s][t].is_positive()));
    let level: Vec<usize> = (0..n)
        .map(|s| {
            (0..n)
                .filter(|&t| reach.get(s, t))
                .filter(|&t| (0..t).all(|u| !(reach.get(t, u) && reach.get(u, t))))
                .count()
        })
        .collect();

    // λ_s = M^(T − level(s)) with M large enough that one positive link
    // outweighs every negative link from strictly higher levels.
    let max_abs = a.iter().flatten().map(Signed::abs).max().unwrap_or_else(Rational::zero);
    let min_pos = a.iter().flatten().filter(|x| x.is_positive()).min().cloned();
    let big = match min_pos {
        Some(mp) => qi(n as i64) * max_abs / mp + Rational::one(),
        None => qi(2),
    };
    let lambda: Vec<Rational> = level
        .iter()
        .map(|&lv| num_traits::pow(big.clone(), n - lv))
        .collect();

    // Shortest distances from a virtual source; all start at zero.
    let mut u = vec![Rational::zero(); n];
    for _ in 0..n {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                let cand = &u[s] + &lambda[s] * &a[s][t];
                if cand < u[t] {
                    u[t] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for s in 0..n {
        for t in 0..n {
            if &u[s] + &lambda[s] * &a[s][t] < u[t] {
                return Err(Error::Solver("Afriat inequalities are infeasible".into()));
            }
        }
    }

    let pieces = (0..n)
        .map(|s| Piece {
            constant: &u[s] - &lambda[s] * e * costs.own(s),
            gradient: d.price(s).as_slice().iter().map(|p| &lambda[s] * p).collect(),
        })
        .collect();
    let util = PiecewiseConcaveUtility::new(pieces)?;

    for t in 0..n {
        let best = maximize_on_budget(&util, d.price(t), &(e * costs.own(t)))?;
        if best.value > util.value(d.bundle(t)) {
            return Err(Error::Solver(format!(
                "constructed utility fails to rationalize observation {}",
                t + 1
            )));
        }
    }
    Ok(util)
}

/// Bisection estimate of a utility's Afriat loss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LossEstimate {
    /// Midpoint of the certified bracket.
    pub value: Rational,
    /// Half-width of the bracket; the true loss lies within `value ± radius`.
    pub radius: Rational,
}

pub fn default_loss_tolerance() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 40)
}

/// `1 − min_t ê_t`, where `ê_t` is the largest `e` with `U(q^t)` maximal on
/// the budget shrunk to `e·p^t·q^t`.
pub fn afriat_loss(u: &PiecewiseConcaveUtility, d: &PurchaseDataset) -> Result<LossEstimate> {
    afriat_loss_with_tolerance(u, d, &default_loss_tolerance())
}

pub fn afriat_loss_with_tolerance(
    u: &PiecewiseConcaveUtility,
    d: &PurchaseDataset,
    tolerance: &Rational,
) -> Result<LossEstimate> {
    if !tolerance.is_positive() {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let mut min_lo: Option<Rational> = None;
    let mut min_hi: Option<Rational> = None;
    for t in 0..d.len() {
        let target = u.value(d.bundle(t));
        let m = d.expenditure(t);
        let ok = |e: &Rational| -> Result<bool> {
            Ok(maximize_on_budget(u, d.price(t), &(e * &m))?.value <= target)
        };
        let (mut lo, mut hi) = (Rational::zero(), Rational::one());
        if ok(&hi)? {
            lo = hi.clone();
        } else {
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            while &hi - &lo > *tolerance {
                let mid = (&lo + &hi) * &half;
                if ok(&mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        if min_lo.as_ref().map_or(true, |x| lo < *x) {
            min_lo = Some(lo);
        }
        if min_hi.as_ref().map_or(true, |x| hi < *x) {
            min_hi = Some(hi);
        }
    }
    let (lo, hi) = (min_lo.expect("T ≥ 1"), min_hi.expect("T ≥ 1"));
    let two = qi(2);
    Ok(LossEstimate {
        value: Rational::one() - (&lo + &hi) / &two,
        radius: (hi - lo) / two,
    })
}

/// Moves bundles along their budget lines, each by at most `delta` in every
/// coordinate, until GARP holds. Requires every violation to be a weak cycle.
pub fn perturb_to_garp(d: &PurchaseDataset, delta: &Rational) -> Result<PurchaseDataset> {
    if !delta.is_positive() {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    let rel = direct_relations(d, &EfficiencyVector::ones(d.len()))?;
    if find_cycle(&rel.strict).is_some() {
        return Err(Error::Precondition("data contain a strong revealed-preference cycle".into()));
    }
    let all: Vec<usize> = (0..d.len()).collect();
    perturb_subset(d, &all, delta, &rel.strict)
}

fn perturb_subset(
    d: &PurchaseDataset,
    keep: &[usize],
    delta: &Rational,
    strict: &BoolMatrix,
) -> Result<PurchaseDataset> {
    let sub = d.restrict(keep)?;
    if check_garp(&sub).satisfied {
        return Ok(sub);
    }
    // An observation no other one is strictly revealed preferred to. Budgets
    // are preserved, so no retained observation can become strictly
    // preferred to it after the rest is perturbed.
    let pos = (0..keep.len())
        .find(|&i| keep.iter().all(|&t| t == keep[i] || !strict.get(t, keep[i])))
        .ok_or_else(|| Error::Solver("every observation is strictly dominated in revealed preference".into()))?;
    let s = keep[pos];
    let rest: Vec<usize> = keep.iter().copied().filter(|&t| t != s).collect();
    let fixed = perturb_subset(d, &rest, delta, strict)?;
    let util = construct_utility(&fixed, &Rational::one())?;
    let target = maximize_on_budget(&util, d.price(s), &d.expenditure(s))?.argmax;

    let original = d.bundle(s);
    let assemble = |bundle: Bundle| -> Result<PurchaseDataset> {
        let mut obs: Vec<_> = fixed.observations().to_vec();
        obs.insert(pos, crate::dataset::Observation::new(d.price(s).clone(), bundle)?);
        PurchaseDataset::new(obs)
    };
    let mut step = Rational::new(BigInt::one(), BigInt::from(2));
    let half = step.clone();
    for _ in 0..60 {
        // q̃ = α q^s + (1 − α) q̂ with 1 − α = step
        let alpha = Rational::one() - &step;
        let mixed: Vec<Rational> = original
            .as_slice()
            .iter()
            .zip(target.as_slice())
            .map(|(x, y)| &alpha * x + &step * y)
            .collect();
        let bundle = Bundle::new(mixed)?;
        if bundle.sup_distance(original) <= *delta {
            let candidate = assemble(bundle)?;
            if check_garp(&candidate).satisfied {
                return Ok(candidate);
            }
        }
        step *= &half;
    }
    Err(Error::Solver("no perturbation restored GARP".into()))
}

/// `Σ_k p^{t_k}·(q^{t_k} − q^{t_{k+1}})` around the cycle.
pub fn money_pump_cost(d: &PurchaseDataset, cycle: &CycleWitness) -> Result<Rational> {
    let n = d.len();
    if cycle.nodes.is_empty() || cycle.nodes.iter().any(|&t| t >= n) {
        return Err(Error::Precondition("cycle refers to unknown observations".into()));
    }
    let costs = CostTable::new(d);
    let mut total = Rational::zero();
    for (a, b) in cycle.links() {
        if costs.own(a) < costs.cost(a, b) {
            return Err(Error::Precondition(format!(
                "link {} -> {} is not a revealed preference",
                a + 1,
                b + 1
            )));
        }
        total += costs.own(a) - costs.cost(a, b);
    }
    Ok(total)
}
