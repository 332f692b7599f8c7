//! Shared fixtures and brute-force oracles for the integration suites.
//!
//! Nothing here calls the library's algorithms; oracles work from the raw
//! prices and quantities so that agreement is meaningful.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use revpref::rational::{q, qi};
use revpref::{Bundle, PurchaseDataset, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dbar() -> PurchaseDataset {
    PurchaseDataset::from_int_rows(&[(&[2, 1], &[4, 4]), (&[1, 2], &[2, 5])]).unwrap()
}

pub fn dstar() -> PurchaseDataset {
    PurchaseDataset::from_rows(vec![
        (vec![qi(2), qi(1)], vec![q(9, 2), qi(3)]),
        (vec![qi(1), qi(2)], vec![qi(2), qi(5)]),
    ])
    .unwrap()
}

/// The cusp sequence: first bundle `(4 − 1/(3n), 4 + 2/(3n))`.
pub fn d_n(n: i64) -> PurchaseDataset {
    PurchaseDataset::from_rows(vec![
        (vec![qi(2), qi(1)], vec![qi(4) - q(1, 3 * n), qi(4) + q(2, 3 * n)]),
        (vec![qi(1), qi(2)], vec![qi(2), qi(5)]),
    ])
    .unwrap()
}

pub fn bundle(xs: &[Rational]) -> Bundle {
    Bundle::new(xs.to_vec()).unwrap()
}

pub fn int_bundle(xs: &[i64]) -> Bundle {
    Bundle::from_ints(xs).unwrap()
}

/// Small-integer data: prices in 1..=5, quantities in 0..=6 (never all zero).
/// Ties between expenditures are frequent, so weak-only cycles show up.
pub fn random_dataset<R: Rng>(rng: &mut R, t: usize, l: usize) -> PurchaseDataset {
    let rows = (0..t)
        .map(|_| {
            let p: Vec<Rational> = (0..l).map(|_| qi(rng.gen_range(1..=5))).collect();
            let mut x: Vec<Rational> = (0..l).map(|_| qi(rng.gen_range(0..=6))).collect();
            if x.iter().all(Zero::is_zero) {
                let i = rng.gen_range(0..l);
                x[i] = qi(rng.gen_range(1..=6));
            }
            (p, x)
        })
        .collect();
    PurchaseDataset::from_rows(rows).unwrap()
}

pub fn random_sized<R: Rng>(rng: &mut R, max_t: usize, max_l: usize) -> PurchaseDataset {
    let t = rng.gen_range(1..=max_t);
    // one good never produces a violation, so keep it rare
    let l = if max_l > 1 && rng.gen_bool(0.9) { rng.gen_range(2..=max_l) } else { 1 };
    mixed_dataset(rng, t, l)
}

/// Every bundle exhausts a budget of 60 split among the goods in integer
/// shares, so budget lines cross and violations are common.
pub fn crossing_dataset<R: Rng>(rng: &mut R, t: usize, l: usize) -> PurchaseDataset {
    let rows = (0..t)
        .map(|_| {
            let p: Vec<Rational> = (0..l).map(|_| qi(rng.gen_range(1..=5))).collect();
            let mut w: Vec<i64> = (0..l).map(|_| rng.gen_range(0..=3)).collect();
            if w.iter().all(|&x| x == 0) {
                w[rng.gen_range(0..l)] = 1;
            }
            let total: i64 = w.iter().sum();
            let x = (0..l).map(|i| q(60 * w[i], total) / &p[i]).collect();
            (p, x)
        })
        .collect();
    PurchaseDataset::from_rows(rows).unwrap()
}

/// Half plain random data, half crossing budgets.
pub fn mixed_dataset<R: Rng>(rng: &mut R, t: usize, l: usize) -> PurchaseDataset {
    if rng.gen_bool(0.5) {
        random_dataset(rng, t, l)
    } else {
        crossing_dataset(rng, t, l)
    }
}

/// A random bundle whose coordinates are small multiples of 1/2.
pub fn random_bundle<R: Rng>(rng: &mut R, l: usize) -> Bundle {
    loop {
        let x: Vec<Rational> = (0..l).map(|_| q(rng.gen_range(0..=14), 2)).collect();
        if x.iter().any(|v| !v.is_zero()) {
            return Bundle::new(x).unwrap();
        }
    }
}

pub fn quantities(d: &PurchaseDataset, t: usize) -> Vec<Rational> {
    d.bundle(t).as_slice().to_vec()
}

pub fn prices(d: &PurchaseDataset, t: usize) -> Vec<Rational> {
    d.price(t).as_slice().to_vec()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `p^t·x`.
pub fn cost_at(d: &PurchaseDataset, t: usize, x: &[Rational]) -> Rational {
    dot(&prices(d, t), x)
}

pub fn spend(d: &PurchaseDataset, t: usize) -> Rational {
    cost_at(d, t, &quantities(d, t))
}

pub fn geq(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// `R_e` and `P_e` as plain matrices.
pub fn relations(d: &PurchaseDataset, e: &[Rational]) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let n = d.len();
    let mut weak = vec![vec![false; n]; n];
    let mut strict = vec![vec![false; n]; n];
    for t in 0..n {
        let budget = &e[t] * spend(d, t);
        for s in 0..n {
            let c = cost_at(d, t, &quantities(d, s));
            weak[t][s] = budget >= c;
            strict[t][s] = budget > c;
        }
    }
    (weak, strict)
}

pub fn uniform(n: usize, e: &Rational) -> Vec<Rational> {
    vec![e.clone(); n]
}

/// Closure by squaring until nothing changes.
pub fn closure_fixpoint(m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = m.len();
    let mut c = m.to_vec();
    loop {
        let mut next = c.clone();
        for i in 0..n {
            for j in 0..n {
                if !next[i][j] {
                    next[i][j] = (0..n).any(|k| c[i][k] && c[k][j]);
                }
            }
        }
        if next == c {
            return c;
        }
        c = next;
    }
}

pub fn e_garp(d: &PurchaseDataset, e: &[Rational]) -> bool {
    let (weak, strict) = relations(d, e);
    let c = closure_fixpoint(&weak);
    let n = d.len();
    !(0..n).any(|s| (0..n).any(|t| strict[s][t] && c[t][s]))
}

pub fn garp(d: &PurchaseDataset) -> bool {
    e_garp(d, &uniform(d.len(), &Rational::one()))
}

/// Every simple cycle of length ≥ 2, each listed once starting at its
/// smallest node.
pub fn simple_cycles(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn dfs(adj: &[Vec<bool>], start: usize, path: &mut Vec<usize>, on: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        for v in start..adj.len() {
            if !adj[u][v] {
                continue;
            }
            if v == start {
                if path.len() >= 2 {
                    out.push(path.clone());
                }
            } else if !on[v] {
                on[v] = true;
                path.push(v);
                dfs(adj, start, path, on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let n = adj.len();
    let mut out = Vec::new();
    for start in 0..n {
        let mut on = vec![false; n];
        on[start] = true;
        dfs(adj, start, &mut vec![start], &mut on, &mut out);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleClass {
    Consistent,
    WeakOnly,
    Strong,
}

/// Cycle classification from the full list of simple cycles in `R_1`.
pub fn classify(d: &PurchaseDataset) -> OracleClass {
    let (weak, strict) = relations(d, &uniform(d.len(), &Rational::one()));
    let mut violated = false;
    for c in simple_cycles(&weak) {
        let flags: Vec<bool> = (0..c.len()).map(|i| strict[c[i]][c[(i + 1) % c.len()]]).collect();
        if flags.iter().all(|&f| f) {
            return OracleClass::Strong;
        }
        violated |= flags.iter().any(|&f| f);
    }
    if violated {
        OracleClass::WeakOnly
    } else {
        OracleClass::Consistent
    }
}

/// All cycles of `P_1`, as node lists.
pub fn strict_cycles(d: &PurchaseDataset) -> Vec<Vec<usize>> {
    let (_, strict) = relations(d, &uniform(d.len(), &Rational::one()));
    simple_cycles(&strict)
}

/// Sorted distinct cross-expenditure ratios in `[0,1]`, plus 0 and 1.
pub fn ratio_grid(d: &PurchaseDataset) -> Vec<Rational> {
    let n = d.len();
    let mut g = vec![Rational::zero(), Rational::one()];
    for t in 0..n {
        for s in 0..n {
            let r = cost_at(d, t, &quantities(d, s)) / spend(d, t);
            if r <= Rational::one() {
                g.push(r);
            }
        }
    }
    g.sort();
    g.dedup();
    g
}

/// `sup {e ∈ [0,1] : e-GARP}` from the grid: the relations are constant
/// between consecutive grid points, so testing each point and each gap
/// midpoint determines the supremum exactly.
pub fn estar_grid(d: &PurchaseDataset) -> Rational {
    let n = d.len();
    let g = ratio_grid(d);
    let mut best = Rational::zero();
    for (i, x) in g.iter().enumerate() {
        if e_garp(d, &uniform(n, x)) && *x > best {
            best = x.clone();
        }
        if i + 1 < g.len() {
            let mid = (x + &g[i + 1]) / qi(2);
            if e_garp(d, &uniform(n, &mid)) && g[i + 1] > best {
                best = g[i + 1].clone();
            }
        }
    }
    best
}

/// Bisection on `e` over `[0,1]`, `steps` halvings.
pub fn estar_bisect(d: &PurchaseDataset, steps: usize) -> Rational {
    let n = d.len();
    if e_garp(d, &uniform(n, &Rational::one())) {
        return Rational::one();
    }
    let (mut lo, mut hi) = (Rational::zero(), Rational::one());
    for _ in 0..steps {
        let mid = (&lo + &hi) / qi(2);
        if e_garp(d, &uniform(n, &mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / qi(2)
}

/// Every ordered partition of `0..n` into nonempty blocks, best block first,
/// as level vectors.
pub fn weak_orders(n: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<usize>>, n: usize) {
        if remaining.is_empty() {
            let k = blocks.len();
            let mut levels = vec![0; n];
            for (i, b) in blocks.iter().enumerate() {
                for &t in b {
                    levels[t] = k - 1 - i;
                }
            }
            out.push(levels);
            return;
        }
        let m = remaining.len();
        for mask in 1u32..(1 << m) {
            let (block, rest): (Vec<usize>, Vec<usize>) = (0..m)
                .map(|i| (i, remaining[i]))
                .fold((Vec::new(), Vec::new()), |(mut b, mut r), (i, t)| {
                    if mask >> i & 1 == 1 {
                        b.push(t)
                    } else {
                        r.push(t)
                    }
                    (b, r)
                });
            blocks.push(block);
            rec(&rest, blocks, out, n);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    rec(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out, n);
    out
}

pub fn admissible(d: &PurchaseDataset, levels: &[usize]) -> bool {
    let n = d.len();
    (0..n).all(|t| {
        (0..n).all(|s| {
            let (a, b) = (quantities(d, t), quantities(d, s));
            if a == b {
                levels[t] == levels[s]
            } else if geq(&a, &b) {
                levels[t] > levels[s]
            } else {
                true
            }
        })
    })
}

/// `p^t·q^s / p^t·q^t` for every pair.
pub fn ratio_table(d: &PurchaseDataset) -> Vec<Vec<Rational>> {
    let n = d.len();
    (0..n)
        .map(|t| {
            let m = spend(d, t);
            (0..n).map(|s| cost_at(d, t, &quantities(d, s)) / &m).collect()
        })
        .collect()
}

/// `e_t` induced by an order: cheapest weakly preferred bundle relative to
/// own spending, capped at 1.
pub fn induced_efficiency(ratios: &[Vec<Rational>], levels: &[usize]) -> Vec<Rational> {
    let n = levels.len();
    (0..n)
        .map(|t| {
            (0..n)
                .filter(|&s| levels[s] >= levels[t])
                .map(|s| &ratios[t][s])
                .fold(Rational::one(), |a, b| if *b < a { b.clone() } else { a })
        })
        .collect()
}

pub fn mean_shortfall(e: &[Rational]) -> Rational {
    e.iter().map(|x| Rational::one() - x).sum::<Rational>() / qi(e.len() as i64)
}

/// Varian index by enumerating every admissible weak order.
pub fn varian_brute(d: &PurchaseDataset) -> Rational {
    let ratios = ratio_table(d);
    weak_orders(d.len())
        .into_iter()
        .filter(|lv| admissible(d, lv))
        .map(|lv| mean_shortfall(&induced_efficiency(&ratios, &lv)))
        .min()
        .expect("some admissible order exists")
}

/// Area of `{x ≥ 0 : p·x ≤ m, x ≥ a for some apex a}` in two goods, by
/// integrating the gap between the budget line and the staircase formed by
/// the apexes.
pub fn staircase_area(p: &[Rational], m: &Rational, apexes: &[Vec<Rational>]) -> Rational {
    assert_eq!(p.len(), 2);
    let right = m / &p[0];
    let mut xs: Vec<Rational> = apexes.iter().map(|a| a[0].clone()).filter(|x| *x < right).collect();
    xs.push(right.clone());
    xs.sort();
    xs.dedup();
    let mut area = Rational::zero();
    for w in xs.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        // lowest apex height among apexes already passed
        let floor = apexes.iter().filter(|a| a[0] <= *lo).map(|a| a[1].clone()).min();
        let Some(c) = floor else { continue };
        // h(u) = (m − p0 u)/p1 exceeds c for u below u_c
        let u_c = (m - &p[1] * &c) / &p[0];
        let top = if u_c < *hi { u_c } else { hi.clone() };
        if top <= *lo {
            continue;
        }
        // ∫ (m − p0 u)/p1 − c du over [lo, top]
        let prim = |u: &Rational| -> Rational { (m * u - &p[0] * u * u / qi(2)) / &p[1] - &c * u };
        area += prim(&top) - prim(lo);
    }
    area
}

/// Swaps index in two goods over every admissible weak order.
pub fn swaps_brute_two_goods(d: &PurchaseDataset) -> Rational {
    let n = d.len();
    weak_orders(n)
        .into_iter()
        .filter(|lv| admissible(d, lv))
        .map(|lv| {
            (0..n)
                .map(|t| {
                    let apexes: Vec<Vec<Rational>> =
                        (0..n).filter(|&s| lv[s] >= lv[t]).map(|s| quantities(d, s)).collect();
                    staircase_area(&prices(d, t), &spend(d, t), &apexes)
                })
                .sum::<Rational>()
        })
        .min()
        .expect("some admissible order exists")
}

/// Houtman-Maks index by scanning removal sets in order of size.
pub fn hm_brute(d: &PurchaseDataset) -> usize {
    let n = d.len();
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        if mask.count_ones() as usize == n {
            // every nonempty retained set is tried first; empty data is trivially fine
            return n;
        }
        let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        if garp(&d.restrict(&keep).unwrap()) {
            return mask.count_ones() as usize;
        }
    }
    unreachable!()
}

/// Chains `a → x_1 → … → b` through observed bundles, at most `depth`
/// intermediate steps, each link either dominance or affordability at the
/// given budgets.
pub fn chain_reach(d: &PurchaseDataset, budgets: &[Rational], strict: bool, a: &Bundle, b: &Bundle) -> bool {
    let n = d.len();
    let bx = b.as_slice();
    let link = |from: Option<usize>, from_q: &[Rational], to: &[Rational]| -> bool {
        if geq(from_q, to) {
            return true;
        }
        match from {
            Some(t) => {
                let c = cost_at(d, t, to);
                if strict {
                    budgets[t] > c
                } else {
                    budgets[t] >= c
                }
            }
            None => false,
        }
    };
    fn dfs(
        at: Option<usize>,
        at_q: Vec<Rational>,
        used: &mut Vec<bool>,
        depth: usize,
        link: &dyn Fn(Option<usize>, &[Rational], &[Rational]) -> bool,
        d: &PurchaseDataset,
        bx: &[Rational],
    ) -> bool {
        if link(at, &at_q, bx) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        for s in 0..d.len() {
            let qs = quantities(d, s);
            if !used[s] && link(at, &at_q, &qs) {
                used[s] = true;
                if dfs(Some(s), qs, used, depth - 1, link, d, bx) {
                    return true;
                }
                used[s] = false;
            }
        }
        false
    }
    dfs(None, a.as_slice().to_vec(), &mut vec![false; n], n, &link, d, bx)
}

/// The Afriat-loss robust relation from chain enumeration.
pub fn robust_afriat_brute(d: &PurchaseDataset, a: &Bundle, b: &Bundle) -> bool {
    let n = d.len();
    let e = estar_grid(d);
    let budgets: Vec<Rational> = (0..n).map(|t| &e * spend(d, t)).collect();
    let attained = e_garp(d, &uniform(n, &e));
    chain_reach(d, &budgets, !attained, a, b)
}

/// Homothetic test by listing every simple cycle of the complete digraph.
pub fn homothetic_brute(d: &PurchaseDataset) -> bool {
    let n = d.len();
    let all = vec![vec![true; n]; n];
    simple_cycles(&all).iter().all(|c| {
        let prod = (0..c.len()).fold(Rational::one(), |acc, i| {
            let (t, s) = (c[i], c[(i + 1) % c.len()]);
            acc * cost_at(d, t, &quantities(d, s)) / spend(d, t)
        });
        prod >= Rational::one()
    })
}

/// OCEU test over every t-balanced multiset of up to `max_len` comparisons.
/// Each comparison `(t, ℓ) vs (u, ℓ̃)` needs `q^t_ℓ > q^u_ℓ̃`.
pub fn oceu_brute(d: &PurchaseDataset, pi: &[Rational], max_len: usize) -> bool {
    let n = d.len();
    let l = d.goods();
    struct Cmp {
        t: usize,
        u: usize,
        ratio: Rational,
    }
    let mut cmps = Vec::new();
    for t in 0..n {
        for u in 0..n {
            let (qt, qu, pt, pu) = (quantities(d, t), quantities(d, u), prices(d, t), prices(d, u));
            for a in 0..l {
                for b in 0..l {
                    if qt[a] > qu[b] {
                        cmps.push(Cmp {
                            t,
                            u,
                            ratio: &pi[b] * &pt[a] / (&pi[a] * &pu[b]),
                        });
                    }
                }
            }
        }
    }
    // multisets as nondecreasing index sequences
    fn rec(cmps: &[Cmp], from: usize, chosen: &mut Vec<usize>, max_len: usize, n: usize) -> bool {
        if !chosen.is_empty() {
            let mut bal = vec![0i64; n];
            let mut prod = Rational::one();
            for &i in chosen.iter() {
                bal[cmps[i].t] += 1;
                bal[cmps[i].u] -= 1;
                prod *= &cmps[i].ratio;
            }
            if bal.iter().all(|&b| b == 0) && prod > Rational::one() {
                return false;
            }
        }
        if chosen.len() == max_len {
            return true;
        }
        for i in from..cmps.len() {
            chosen.push(i);
            if !rec(cmps, i, chosen, max_len, n) {
                return false;
            }
            chosen.pop();
        }
        true
    }
    rec(&cmps, 0, &mut Vec::new(), max_len, n)
}

/// Monte-Carlo estimate of the affordable part of `∪_s {x ≥ q^s}` for
/// observation `t`, by uniform sampling in the bounding box. Returns the
/// estimate and the box volume.
pub fn measure_mc<R: Rng>(d: &PurchaseDataset, t: usize, set: &[usize], samples: usize, rng: &mut R) -> (f64, f64) {
    let p: Vec<f64> = prices(d, t).iter().map(revpref::rational::to_f64).collect();
    let m = revpref::rational::to_f64(&spend(d, t));
    let apexes: Vec<Vec<f64>> = set
        .iter()
        .map(|&s| quantities(d, s).iter().map(revpref::rational::to_f64).collect())
        .collect();
    let sides: Vec<f64> = p.iter().map(|pi| m / pi).collect();
    let volume: f64 = sides.iter().product();
    let mut hits = 0usize;
    let mut x = vec![0.0; p.len()];
    for _ in 0..samples {
        for (xi, side) in x.iter_mut().zip(&sides) {
            *xi = rng.gen::<f64>() * side;
        }
        let affordable = x.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>() <= m;
        if affordable && apexes.iter().any(|a| x.iter().zip(a).all(|(xi, ai)| xi >= ai)) {
            hits += 1;
        }
    }
    (volume * hits as f64 / samples as f64, volume)
}

/// Weak-only cycle data built from a budget-line intersection: the first
/// bundle lies on both of the first two budget lines and the second bundle
/// is strictly cheaper at the first prices.
pub fn cusp_pair<R: Rng>(rng: &mut R) -> PurchaseDataset {
    loop {
        let p1 = [qi(rng.gen_range(1..=5)), qi(rng.gen_range(1..=5))];
        let p2 = [qi(rng.gen_range(1..=5)), qi(rng.gen_range(1..=5))];
        let x = [qi(rng.gen_range(1..=6)), qi(rng.gen_range(1..=6))];
        // direction along the second budget line
        let dir = [p2[1].clone(), -p2[0].clone()];
        let slope = dot(&p1, &dir);
        if slope.is_zero() {
            continue;
        }
        let sign = if slope.is_positive() { -qi(1) } else { qi(1) };
        // largest step keeping the bundle nonnegative, then a random fraction of it
        let limit = (0..2)
            .filter_map(|i| {
                let di = &sign * &dir[i];
                di.is_negative().then(|| &x[i] / -di)
            })
            .min()
            .unwrap();
        let step = limit * q(rng.gen_range(1..=4), 4);
        let y: Vec<Rational> = (0..2).map(|i| &x[i] + &step * &sign * &dir[i]).collect();
        if y.iter().all(Zero::is_zero) {
            continue;
        }
        return PurchaseDataset::from_rows(vec![(p1.to_vec(), x.to_vec()), (p2.to_vec(), y)]).unwrap();
    }
}

/// A cusp pair padded with random observations, kept only when the cycles
/// stay weak.
pub fn weak_only_dataset<R: Rng>(rng: &mut R) -> PurchaseDataset {
    loop {
        let base = cusp_pair(rng);
        let extra = rng.gen_range(0..=2);
        let mut rows: Vec<(Vec<Rational>, Vec<Rational>)> = (0..2).map(|t| (prices(&base, t), quantities(&base, t))).collect();
        let pad = random_dataset(rng, extra.max(1), 2);
        for t in 0..extra {
            rows.push((prices(&pad, t), quantities(&pad, t)));
        }
        let d = PurchaseDataset::from_rows(rows).unwrap();
        if classify(&d) == OracleClass::WeakOnly {
            return d;
        }
    }
}

pub fn strong_dataset<R: Rng>(rng: &mut R, max_t: usize, l: usize) -> PurchaseDataset {
    loop {
        let t = rng.gen_range(2..=max_t);
        let d = mixed_dataset(rng, t, l);
        if classify(&d) == OracleClass::Strong {
            return d;
        }
    }
}

pub fn garp_dataset<R: Rng>(rng: &mut R, max_t: usize, l: usize) -> PurchaseDataset {
    loop {
        let t = rng.gen_range(1..=max_t);
        let d = mixed_dataset(rng, t, l);
        if garp(&d) {
            return d;
        }
    }
}

/// Max of a piecewise-linear concave function over a dense grid of the
/// two-good budget line and its interior.
pub fn grid_max_two_goods(value: impl Fn(&[Rational]) -> Rational, p: &[Rational], m: &Rational, steps: i64) -> Rational {
    let mut best: Option<Rational> = None;
    for i in 0..=steps {
        let x0 = m / &p[0] * q(i, steps);
        for j in 0..=steps {
            let x1 = (m - &p[0] * &x0) / &p[1] * q(j, steps);
            let v = value(&[x0.clone(), x1]);
            if best.as_ref().map_or(true, |b| v > *b) {
                best = Some(v);
            }
        }
    }
    best.unwrap()
}
