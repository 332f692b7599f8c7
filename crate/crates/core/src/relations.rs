//! Revealed-preference relations between observations.
//!
//! Observation `t` is (e-)revealed weakly preferred to bundle `x` when
//! `e_t · p^t·q^t ≥ p^t·x`, strictly when the inequality is strict. All
//! comparisons are exact.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dataset::{Bundle, PurchaseDataset};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense square boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    data: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(n: usize) -> Self {
        BoolMatrix {
            n,
            data: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| i == j)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i * self.n + j] = value;
    }

    /// Entrywise `self ⊆ other`.
    pub fn is_subset_of(&self, other: &BoolMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    /// Successors of `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    /// Principal submatrix on `keep` (in that order).
    pub fn restrict(&self, keep: &[usize]) -> BoolMatrix {
        Self::from_fn(keep.len(), |i, j| self.get(keep[i], keep[j]))
    }
}

/// Warshall's algorithm: the smallest transitive relation containing `m`.
pub fn transitive_closure(m: &BoolMatrix) -> BoolMatrix {
    let mut c = m.clone();
    let n = c.n;
    for k in 0..n {
        for i in 0..n {
            if !c.get(i, k) {
                continue;
            }
            for j in 0..n {
                if c.get(k, j) {
                    c.set(i, j, true);
                }
            }
        }
    }
    c
}

/// Shortest path `from → to` along edges of `m`, both endpoints included.
fn shortest_path(m: &BoolMatrix, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = m.size();
    let mut pred = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = pred[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for v in m.row(u) {
            if !seen[v] {
                seen[v] = true;
                pred[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Per-observation efficiency levels, each in `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EfficiencyVector(Vec<Rational>);

impl EfficiencyVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.is_negative() || **v > Rational::one()) {
            return Err(Error::Precondition(format!("efficiency {v} outside [0,1]")));
        }
        Ok(EfficiencyVector(values))
    }

    /// The same level `e` for all `len` observations.
    pub fn uniform(len: usize, e: &Rational) -> Result<Self> {
        Self::new(vec![e.clone(); len])
    }

    pub fn ones(len: usize) -> Self {
        EfficiencyVector(vec![Rational::one(); len])
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

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    pub fn restrict(&self, keep: &[usize]) -> EfficiencyVector {
        EfficiencyVector(keep.iter().map(|&t| self.0[t].clone()).collect())
    }
}

/// Weak (`R_e`) and strict (`P_e`) direct revealed preference among observations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    pub weak: BoolMatrix,
    pub strict: BoolMatrix,
    pub efficiency: EfficiencyVector,
}

/// A revealed-preference cycle `t_1 → t_2 → … → t_K → t_1`; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub nodes: Vec<usize>,
    /// `strict_flags[k]` is true when link `nodes[k] → nodes[k+1]` is strict.
    pub strict_flags: Vec<bool>,
}

impl CycleWitness {
    /// Builds the witness for `nodes`, reading link strictness off `rel`.
    pub fn from_nodes(nodes: Vec<usize>, rel: &RelationMatrix) -> Self {
        let k = nodes.len();
        let strict_flags = (0..k)
            .map(|i| rel.strict.get(nodes[i], nodes[(i + 1) % k]))
            .collect();
        CycleWitness {
            nodes,
            strict_flags,
        }
    }

    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.nodes.len();
        (0..k).map(move |i| (self.nodes[i], self.nodes[(i + 1) % k]))
    }

    pub fn is_strong(&self) -> bool {
        !self.strict_flags.is_empty() && self.strict_flags.iter().all(|&f| f)
    }

    /// Every link holds weakly, the recorded flags match, and one link is strict.
    pub fn verify(&self, rel: &RelationMatrix) -> bool {
        let n = rel.weak.size();
        !self.nodes.is_empty()
            && self.nodes.len() == self.strict_flags.len()
            && self.nodes.iter().all(|&t| t < n)
            && self
                .links()
                .zip(&self.strict_flags)
                .all(|((a, b), &s)| rel.weak.get(a, b) && rel.strict.get(a, b) == s)
            && self.strict_flags.iter().any(|&f| f)
    }
}

/// Outcome of a GARP test with an optional violating cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GarpResult {
    pub satisfied: bool,
    pub witness: Option<CycleWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleClass {
    /// GARP holds.
    None,
    /// GARP fails but every violating cycle has a link that is only weak.
    WeakOnly,
    /// Some cycle consists entirely of strict links.
    HasStrong,
}

/// Sorted distinct expenditure ratios in `[0,1]`; always contains 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakpointGrid(Vec<Rational>);

impl BreakpointGrid {
    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.0.binary_search(value).is_ok()
    }
}

/// Cached `p^t·q^s` for all pairs.
#[derive(Clone, Debug)]
pub struct CostTable {
    cost: Vec<Vec<Rational>>,
}

impl CostTable {
    pub fn new(d: &PurchaseDataset) -> Self {
        let n = d.len();
        CostTable {
            cost: (0..n)
                .map(|t| (0..n).map(|s| d.cross_cost(t, s)).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cost.is_empty()
    }

    /// `p^t·q^s`.
    pub fn cost(&self, t: usize, s: usize) -> &Rational {
        &self.cost[t][s]
    }

    /// `p^t·q^t`.
    pub fn own(&self, t: usize) -> &Rational {
        &self.cost[t][t]
    }

    /// `p^t·q^s / p^t·q^t`.
    pub fn ratio(&self, t: usize, s: usize) -> Rational {
        &self.cost[t][s] / &self.cost[t][t]
    }

    pub fn relations(&self, e: &EfficiencyVector) -> Result<RelationMatrix> {
        let n = self.len();
        if e.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: e.len(),
            });
        }
        let budgets: Vec<Rational> = (0..n).map(|t| &e.values()[t] * self.own(t)).collect();
        Ok(RelationMatrix {
            weak: BoolMatrix::from_fn(n, |t, s| budgets[t] >= self.cost[t][s]),
            strict: BoolMatrix::from_fn(n, |t, s| budgets[t] > self.cost[t][s]),
            efficiency: e.clone(),
        })
    }

    /// Strict relation at a uniform level `e`.
    pub fn strict_at(&self, e: &Rational) -> BoolMatrix {
        let n = self.len();
        BoolMatrix::from_fn(n, |t, s| e * self.own(t) > self.cost[t][s])
    }
}

/// `R_e` and `P_e` for the dataset at efficiency vector `e`.
pub fn direct_relations(d: &PurchaseDataset, e: &EfficiencyVector) -> Result<RelationMatrix> {
    CostTable::new(d).relations(e)
}

/// First violating cycle for the relation pair, if any: some `s P t` with `t R* s`.
pub fn garp_witness(rel: &RelationMatrix) -> Option<CycleWitness> {
    let closure = transitive_closure(&rel.weak);
    let n = rel.weak.size();
    for s in 0..n {
        for t in 0..n {
            if rel.strict.get(s, t) && closure.get(t, s) {
                let mut nodes = vec![s];
                if t != s {
                    let path = shortest_path(&rel.weak, t, s).expect("closure implies a path");
                    nodes.extend_from_slice(&path[..path.len() - 1]);
                }
                return Some(CycleWitness::from_nodes(nodes, rel));
            }
        }
    }
    None
}

/// Generalized axiom of revealed preference.
pub fn check_garp(d: &PurchaseDataset) -> GarpResult {
    let rel = direct_relations(d, &EfficiencyVector::ones(d.len())).expect("sizes agree");
    let witness = garp_witness(&rel);
    GarpResult {
        satisfied: witness.is_none(),
        witness,
    }
}

/// Vector e-GARP: no `R_e` chain closes with a `P_e` back-link.
pub fn check_e_garp(d: &PurchaseDataset, e: &EfficiencyVector) -> Result<bool> {
    Ok(garp_witness(&direct_relations(d, e)?).is_none())
}

/// Scalar e-GARP.
pub fn check_e_garp_scalar(d: &PurchaseDataset, e: &Rational) -> Result<bool> {
    check_e_garp(d, &EfficiencyVector::uniform(d.len(), e)?)
}

/// Strong axiom: every weak revealed-preference cycle consists of identical bundles.
pub fn check_sarp(d: &PurchaseDataset) -> bool {
    let rel = direct_relations(d, &EfficiencyVector::ones(d.len())).expect("sizes agree");
    let closure = transitive_closure(&rel.weak);
    let n = d.len();
    (0..n).all(|t| {
        (t + 1..n).all(|s| !(closure.get(t, s) && closure.get(s, t)) || d.bundle(t) == d.bundle(s))
    })
}

/// A directed cycle in `m`, if one exists.
pub fn find_cycle(m: &BoolMatrix) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = m.size();
    let mut mark = vec![Mark::New; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // iterative DFS: (node, next successor to try)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Active;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next >= n {
                mark[u] = Mark::Done;
                stack.pop();
                continue;
            }
            let v = *next;
            *next += 1;
            if !m.get(u, v) {
                continue;
            }
            match mark[v] {
                Mark::New => {
                    mark[v] = Mark::Active;
                    parent[v] = u;
                    stack.push((v, 0));
                }
                Mark::Active => {
                    let mut cycle = vec![u];
                    let mut cur = u;
                    while cur != v {
                        cur = parent[cur];
                        cycle.push(cur);
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                Mark::Done => {}
            }
        }
    }
    None
}

/// A cycle made only of strict links at efficiency `e`, if one exists.
pub fn find_strict_cycle(d: &PurchaseDataset, e: &EfficiencyVector) -> Result<Option<CycleWitness>> {
    let rel = direct_relations(d, e)?;
    Ok(find_cycle(&rel.strict).map(|nodes| CycleWitness::from_nodes(nodes, &rel)))
}

/// Whether `P_e` (uniform `e`) is acyclic.
pub fn is_e_acyclic(d: &PurchaseDataset, e: &Rational) -> bool {
    find_cycle(&CostTable::new(d).strict_at(e)).is_none()
}

/// Weak-only versus strong revealed-preference cycles.
pub fn classify_cycles(d: &PurchaseDataset) -> CycleClass {
    let rel = direct_relations(d, &EfficiencyVector::ones(d.len())).expect("sizes agree");
    if garp_witness(&rel).is_none() {
        CycleClass::None
    } else if find_cycle(&rel.strict).is_some() {
        CycleClass::HasStrong
    } else {
        CycleClass::WeakOnly
    }
}

/// All expenditure ratios `p^t·q^s / p^t·q^t` lying in `[0,1]`.
pub fn breakpoints(d: &PurchaseDataset) -> BreakpointGrid {
    let costs = CostTable::new(d);
    let n = d.len();
    let one = Rational::one();
    let mut values: Vec<Rational> = (0..n)
        .flat_map(|t| (0..n).map(move |s| (t, s)))
        .map(|(t, s)| costs.ratio(t, s))
        .filter(|r| *r <= one && !r.is_negative())
        .collect();
    values.sort();
    values.dedup();
    BreakpointGrid(values)
}

/// Strength of the revealed-preference edges used for reachability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReachMode {
    Weak,
    Strict,
}

/// Whether `a` reaches `b` through dominance (`x ≥ y`) and revealed-preference
/// edges out of observations. `a` and `b` need not be observed bundles.
pub fn reach_with_virtual(
    d: &PurchaseDataset,
    e: &EfficiencyVector,
    mode: ReachMode,
    a: &Bundle,
    b: &Bundle,
) -> Result<bool> {
    d.check_bundle(a)?;
    d.check_bundle(b)?;
    if e.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: e.len(),
        });
    }
    let budgets: Vec<Rational> = (0..d.len()).map(|t| &e.values()[t] * d.expenditure(t)).collect();
    Ok(reach_in(d, &budgets, mode, a, b))
}

pub(crate) fn reach_in(
    d: &PurchaseDataset,
    budgets: &[Rational],
    mode: ReachMode,
    a: &Bundle,
    b: &Bundle,
) -> bool {
    let n = d.len();
    let (src, dst) = (n, n + 1);
    let bundle = |i: usize| -> &Bundle {
        match i {
            i if i < n => d.bundle(i),
            i if i == src => a,
            _ => b,
        }
    };
    let edge = |x: usize, y: usize| -> bool {
        if bundle(x).dominates(bundle(y)) {
            return true;
        }
        if x < n {
            let c = d.price(x).cost(bundle(y));
            return match mode {
                ReachMode::Weak => budgets[x] >= c,
                ReachMode::Strict => budgets[x] > c,
            };
        }
        false
    };
    let mut seen = vec![false; n + 2];
    let mut queue = VecDeque::from([src]);
    seen[src] = true;
    while let Some(u) = queue.pop_front() {
        if u == dst {
            return true;
        }
        for v in (0..n).chain([dst]) {
            if !seen[v] && edge(u, v) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

impl RelationMatrix {
    pub fn is_zero_efficiency(&self) -> bool {
        self.efficiency.values().iter().all(Zero::is_zero)
    }
}
