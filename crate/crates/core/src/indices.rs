//! Varian, Swaps and Houtman-Maks indices.
//!
//! Varian and Swaps minimize over dominance-respecting orders of the
//! observed bundles. Ties can only enlarge the sets each term minimizes or
//! measures over, so strict rankings of bundle classes suffice. The search
//! places classes from the top down with a memo on the set already placed.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::dataset::{Bundle, PurchaseDataset};
use crate::error::{Error, Result};
use crate::orders::{order_efficiency, total_preorders, BundleClasses, PreferenceOrder};
use crate::rational::{qi, Rational};
use crate::relations::{check_garp, CostTable, EfficiencyVector};

/// Aggregates an efficiency vector into a scalar loss.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    /// `(1/T)·Σ_t (1 − e_t)`.
    #[default]
    MeanShortfall,
}

impl Aggregator {
    pub fn evaluate(&self, e: &EfficiencyVector) -> Rational {
        match self {
            Aggregator::MeanShortfall => {
                let total: Rational = e.values().iter().map(|x| Rational::one() - x).sum();
                total / qi(e.len() as i64)
            }
        }
    }
}

type Mask = u64;

const MAX_OBSERVATIONS: usize = 63;

/// Best ranking of bundle classes under an additive per-observation cost.
///
/// `term(t, set)` is observation `t`'s cost when `set` (a mask over
/// observations) holds everything ranked at or above it. It must be
/// monotone in `set`, which makes the cost with the current placed set an
/// admissible bound for observations not yet placed.
struct OrderSearch<'a, F> {
    classes: &'a BundleClasses,
    class_mask: Vec<Mask>,
    term: F,
    best_total: Option<Rational>,
    best_ranking: Vec<usize>,
    seen: HashMap<Mask, Rational>,
}

impl<'a, F: FnMut(usize, Mask) -> Rational> OrderSearch<'a, F> {
    fn new(classes: &'a BundleClasses, term: F) -> Self {
        let class_mask = classes
            .members
            .iter()
            .map(|m| m.iter().fold(0, |acc, &t| acc | 1 << t))
            .collect();
        OrderSearch {
            classes,
            class_mask,
            term,
            best_total: None,
            best_ranking: Vec::new(),
            seen: HashMap::new(),
        }
    }

    fn eligible(&self, placed_classes: Mask, c: usize) -> bool {
        placed_classes >> c & 1 == 0 && self.classes.above[c].iter().all(|&o| placed_classes >> o & 1 == 1)
    }

    fn class_cost(&mut self, c: usize, placed: Mask) -> Rational {
        let set = placed | self.class_mask[c];
        let members = self.classes.members[c].clone();
        members.into_iter().map(|t| (self.term)(t, set)).sum()
    }

    fn lower_bound(&mut self, placed_classes: Mask, placed: Mask) -> Rational {
        let k = self.classes.len();
        let mut total = Rational::zero();
        for c in 0..k {
            if placed_classes >> c & 1 == 0 {
                total += self.class_cost(c, placed);
            }
        }
        total
    }

    fn greedy(&mut self) {
        let k = self.classes.len();
        let (mut placed_classes, mut placed) = (0 as Mask, 0 as Mask);
        let mut total = Rational::zero();
        let mut ranking = Vec::with_capacity(k);
        for _ in 0..k {
            let mut pick: Option<(usize, Rational)> = None;
            for c in 0..k {
                if self.eligible(placed_classes, c) {
                    let cost = self.class_cost(c, placed);
                    if pick.as_ref().map_or(true, |(_, b)| cost < *b) {
                        pick = Some((c, cost));
                    }
                }
            }
            let (c, cost) = pick.expect("dominance is acyclic, so some class is eligible");
            total += cost;
            placed_classes |= 1 << c;
            placed |= self.class_mask[c];
            ranking.push(c);
        }
        self.best_total = Some(total);
        self.best_ranking = ranking;
    }

    fn dfs(&mut self, placed_classes: Mask, placed: Mask, acc: Rational, ranking: &mut Vec<usize>) {
        let k = self.classes.len();
        if ranking.len() == k {
            if self.best_total.as_ref().map_or(true, |b| acc < *b) {
                self.best_total = Some(acc);
                self.best_ranking = ranking.clone();
            }
            return;
        }
        if let Some(prev) = self.seen.get(&placed_classes) {
            if acc >= *prev {
                return;
            }
        }
        self.seen.insert(placed_classes, acc.clone());
        let bound = &acc + self.lower_bound(placed_classes, placed);
        if self.best_total.as_ref().map_or(false, |b| bound >= *b) {
            return;
        }
        let eligible: Vec<usize> = (0..k).filter(|&c| self.eligible(placed_classes, c)).collect();
        let mut children: Vec<(Rational, usize)> =
            eligible.into_iter().map(|c| (self.class_cost(c, placed), c)).collect();
        children.sort();
        for (cost, c) in children {
            ranking.push(c);
            self.dfs(placed_classes | 1 << c, placed | self.class_mask[c], &acc + cost, ranking);
            ranking.pop();
        }
    }

    fn run(mut self) -> (Rational, Vec<usize>) {
        self.greedy();
        self.dfs(0, 0, Rational::zero(), &mut Vec::new());
        (self.best_total.expect("greedy sets an incumbent"), self.best_ranking)
    }
}

fn levels_from_ranking(classes: &BundleClasses, ranking: &[usize], n: usize) -> PreferenceOrder {
    let k = ranking.len();
    let mut levels = vec![0; n];
    for (rank, &c) in ranking.iter().enumerate() {
        for &t in &classes.members[c] {
            levels[t] = k - 1 - rank;
        }
    }
    PreferenceOrder::new(levels)
}

fn check_mask_width(d: &PurchaseDataset) -> Result<()> {
    if d.len() > MAX_OBSERVATIONS {
        return Err(Error::CapExceeded {
            what: "observations in order search",
            limit: MAX_OBSERVATIONS,
            requested: d.len(),
        });
    }
    Ok(())
}

/// Varian index with its minimizing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarianSolution {
    pub value: Rational,
    pub order: PreferenceOrder,
    pub efficiency: EfficiencyVector,
}

/// Exact Varian index by branch and bound over rankings of bundle classes.
pub fn varian_solution(d: &PurchaseDataset, agg: Aggregator) -> Result<VarianSolution> {
    check_mask_width(d)?;
    let classes = BundleClasses::new(d);
    let costs = CostTable::new(d);
    let n = d.len();
    let ratios: Vec<Vec<Rational>> = (0..n).map(|t| (0..n).map(|s| costs.ratio(t, s)).collect()).collect();
    let term = |t: usize, set: Mask| -> Rational {
        let e = (0..n)
            .filter(|&s| set >> s & 1 == 1)
            .map(|s| &ratios[t][s])
            .min()
            .cloned()
            .unwrap_or_else(Rational::one);
        Rational::one() - e.min(Rational::one())
    };
    let (_, ranking) = OrderSearch::new(&classes, term).run();
    let order = levels_from_ranking(&classes, &ranking, n);
    let efficiency = order_efficiency(d, &order)?;
    Ok(VarianSolution {
        value: agg.evaluate(&efficiency),
        order,
        efficiency,
    })
}

pub fn varian_index(d: &PurchaseDataset, agg: Aggregator) -> Result<Rational> {
    Ok(varian_solution(d, agg)?.value)
}

/// Every distinct efficiency vector induced by a loss-minimizing ranking,
/// with the minimal loss. Dynamic programming over placed class sets: an
/// optimal ranking must reach each intermediate set at its cheapest prefix
/// cost, so optimal completions can be shared between prefixes.
pub fn varian_optimal_vectors(d: &PurchaseDataset, agg: Aggregator) -> Result<(Rational, Vec<EfficiencyVector>)> {
    check_mask_width(d)?;
    let classes = BundleClasses::new(d);
    let costs = CostTable::new(d);
    let n = d.len();
    let k = classes.len();
    let class_mask: Vec<Mask> = classes
        .members
        .iter()
        .map(|m| m.iter().fold(0, |acc, &t| acc | 1 << t))
        .collect();
    let ratios: Vec<Vec<Rational>> = (0..n).map(|t| (0..n).map(|s| costs.ratio(t, s)).collect()).collect();
    let efficiency = |t: usize, set: Mask| -> Rational {
        (0..n)
            .filter(|&s| set >> s & 1 == 1)
            .map(|s| &ratios[t][s])
            .min()
            .cloned()
            .unwrap_or_else(Rational::one)
            .min(Rational::one())
    };

    type Completion = (Rational, Vec<Vec<Rational>>);
    fn solve(
        placed_classes: Mask,
        placed: Mask,
        k: usize,
        classes: &BundleClasses,
        class_mask: &[Mask],
        efficiency: &dyn Fn(usize, Mask) -> Rational,
        n: usize,
        memo: &mut HashMap<Mask, Completion>,
    ) -> Completion {
        if placed_classes.count_ones() as usize == k {
            return (Rational::zero(), vec![vec![Rational::one(); n]]);
        }
        if let Some(hit) = memo.get(&placed_classes) {
            return hit.clone();
        }
        let mut best: Option<Completion> = None;
        for c in 0..k {
            let open = placed_classes >> c & 1 == 0 && classes.above[c].iter().all(|&o| placed_classes >> o & 1 == 1);
            if !open {
                continue;
            }
            let set = placed | class_mask[c];
            let here: Vec<(usize, Rational)> = classes.members[c].iter().map(|&t| (t, efficiency(t, set))).collect();
            let shortfall: Rational = here.iter().map(|(_, e)| Rational::one() - e).sum();
            let (rest, tails) = solve(placed_classes | 1 << c, set, k, classes, class_mask, efficiency, n, memo);
            let total = shortfall + rest;
            let extend = |tails: Vec<Vec<Rational>>| {
                tails.into_iter().map(move |mut v| {
                    for (t, e) in &here {
                        v[*t] = e.clone();
                    }
                    v
                })
            };
            match best.as_mut() {
                Some((b, _)) if total > *b => {}
                Some((b, vs)) if total == *b => vs.extend(extend(tails)),
                _ => best = Some((total, extend(tails).collect())),
            }
        }
        let (total, mut vs) = best.expect("dominance is acyclic, so some class is open");
        vs.sort();
        vs.dedup();
        memo.insert(placed_classes, (total.clone(), vs.clone()));
        (total, vs)
    }

    let mut memo = HashMap::new();
    let (_, vectors) = solve(0, 0, k, &classes, &class_mask, &efficiency, n, &mut memo);
    let vectors: Vec<EfficiencyVector> = vectors.into_iter().map(EfficiencyVector::new).collect::<Result<_>>()?;
    let value = agg.evaluate(&vectors[0]);
    Ok((value, vectors))
}

/// Varian index by enumerating every total preorder; for small `T` only.
pub fn varian_index_exhaustive(d: &PurchaseDataset, agg: Aggregator, caps: &Caps) -> Result<Rational> {
    caps.check_orders("observations for order enumeration", d.len())?;
    total_preorders(d)
        .iter()
        .map(|o| order_efficiency(d, o).map(|e| agg.evaluate(&e)))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().min().expect("some order respects dominance"))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Volume of `{x ≥ floor} ∩ {p·x ≤ m}`.
fn simplex_volume(p: &[Rational], m: &Rational, floor: &[Rational], denom: &Rational) -> Rational {
    let slack = m - crate::rational::dot(p, floor);
    if !slack.is_positive() {
        return Rational::zero();
    }
    num_traits::pow(slack, p.len()) / denom
}

/// Lebesgue measure of `∪_{s∈S} {x ≥ q^s}` within observation `t`'s budget set.
pub fn upper_contour_measure(d: &PurchaseDataset, t: usize, set: &[usize], caps: &Caps) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::Precondition("upper contour set needs at least one bundle".into()));
    }
    if let Some(&s) = set.iter().find(|&&s| s >= d.len()) {
        return Err(Error::Precondition(format!("unknown observation {}", s + 1)));
    }
    let bundles: Vec<&Bundle> = set.iter().map(|&s| d.bundle(s)).collect();
    measure_of_union(d, t, &bundles, caps)
}

fn measure_of_union(d: &PurchaseDataset, t: usize, bundles: &[&Bundle], caps: &Caps) -> Result<Rational> {
    let p = d.price(t);
    let m = d.expenditure(t);
    // Cones whose apex is not strictly affordable contribute nothing, and a
    // cone inside another adds nothing to the union.
    let mut live: Vec<&Bundle> = bundles.iter().copied().filter(|b| p.cost(b) < m).collect();
    live.sort();
    live.dedup();
    let minimal: Vec<&Bundle> = live
        .iter()
        .copied()
        .filter(|b| !live.iter().any(|o| o != b && b.dominates(o)))
        .collect();
    if minimal.is_empty() {
        return Ok(Rational::zero());
    }
    caps.check_union(minimal.len())?;
    let prices = p.as_slice();
    let l = prices.len();
    let denom = Rational::from_integer(factorial(l)) * prices.iter().fold(Rational::one(), |acc, x| acc * x);
    let k = minimal.len();
    let mut total = Rational::zero();
    for mask in 1u32..(1u32 << k) {
        let mut floor: Vec<Rational> = vec![Rational::zero(); l];
        for (i, b) in minimal.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (f, x) in floor.iter_mut().zip(b.as_slice()) {
                    if x > f {
                        *f = x.clone();
                    }
                }
            }
        }
        let vol = simplex_volume(prices, &m, &floor, &denom);
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total)
}

/// Swaps total for a given order.
pub fn swaps_of_order(d: &PurchaseDataset, order: &PreferenceOrder, caps: &Caps) -> Result<Rational> {
    if !order.respects_dominance(d) {
        return Err(Error::Precondition("order contradicts bundle dominance".into()));
    }
    let n = d.len();
    let lv = order.levels();
    let mut total = Rational::zero();
    for t in 0..n {
        let set: Vec<usize> = (0..n).filter(|&s| lv[s] >= lv[t]).collect();
        total += upper_contour_measure(d, t, &set, caps)?;
    }
    Ok(total)
}

/// Swaps index with its minimizing order.
pub fn swaps_solution(d: &PurchaseDataset, caps: &Caps) -> Result<(Rational, PreferenceOrder)> {
    caps.check_orders("observations for the swaps index", d.len())?;
    check_mask_width(d)?;
    let classes = BundleClasses::new(d);
    let n = d.len();
    let mut failure: Option<Error> = None;
    let mut cache: HashMap<(usize, Mask), Rational> = HashMap::new();
    let term = |t: usize, set: Mask| -> Rational {
        if let Some(v) = cache.get(&(t, set)) {
            return v.clone();
        }
        let bundles: Vec<&Bundle> = (0..n).filter(|&s| set >> s & 1 == 1).map(|s| d.bundle(s)).collect();
        let v = match measure_of_union(d, t, &bundles, caps) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Rational::zero()
            }
        };
        cache.insert((t, set), v.clone());
        v
    };
    let (value, ranking) = OrderSearch::new(&classes, term).run();
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((value, levels_from_ranking(&classes, &ranking, n)))
}

pub fn swaps_index(d: &PurchaseDataset, caps: &Caps) -> Result<Rational> {
    Ok(swaps_solution(d, caps)?.0)
}

/// Swaps index by enumerating every total preorder.
pub fn swaps_index_exhaustive(d: &PurchaseDataset, caps: &Caps) -> Result<Rational> {
    caps.check_orders("observations for order enumeration", d.len())?;
    let mut best: Option<Rational> = None;
    for o in total_preorders(d) {
        let v = swaps_of_order(d, &o, caps)?;
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("some order respects dominance"))
}

fn retained(n: usize, removed: &[usize]) -> Vec<usize> {
    (0..n).filter(|t| !removed.contains(t)).collect()
}

fn garp_without(d: &PurchaseDataset, removed: &[usize]) -> Option<Vec<usize>> {
    let keep = retained(d.len(), removed);
    let sub = d.restrict(&keep).ok()?;
    let res = check_garp(&sub);
    match res.witness {
        None => None,
        Some(w) => Some(w.nodes.iter().map(|&i| keep[i]).collect()),
    }
}

/// Depth-limited search for `k` removals that hit every violating cycle.
fn hits_all_cycles(
    d: &PurchaseDataset,
    removed: &mut Vec<usize>,
    k: usize,
    failed: &mut HashSet<Vec<usize>>,
) -> bool {
    let mut key = removed.clone();
    key.sort_unstable();
    if failed.contains(&key) {
        return false;
    }
    let cycle = match garp_without(d, removed) {
        None => return true,
        Some(c) => c,
    };
    if k == 0 {
        return false;
    }
    let mut nodes = cycle;
    nodes.sort_unstable();
    nodes.dedup();
    for t in nodes {
        if removed.contains(&t) {
            continue;
        }
        removed.push(t);
        let ok = hits_all_cycles(d, removed, k - 1, failed);
        removed.pop();
        if ok {
            return true;
        }
    }
    failed.insert(key);
    false
}

/// Fewest observations whose removal restores GARP.
pub fn houtman_maks_index(d: &PurchaseDataset) -> usize {
    (0..=d.len())
        .find(|&k| hits_all_cycles(d, &mut Vec::new(), k, &mut HashSet::new()))
        .expect("removing all but one observation always works")
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    let k = k.min(n - k);
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    usize::try_from(acc).ok()
}

/// Every minimum-size removal set, as sorted index lists in lexicographic order.
pub fn houtman_maks_minsets(d: &PurchaseDataset, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    let n = d.len();
    let k = houtman_maks_index(d);
    let candidates = binomial(n, k).unwrap_or(usize::MAX);
    if candidates > caps.max_min_sets {
        return Err(Error::CapExceeded {
            what: "candidate removal sets",
            limit: caps.max_min_sets,
            requested: candidates,
        });
    }
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        if garp_without(d, &combo).is_none() {
            out.push(combo.clone());
        }
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if combo[i] < n - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}
