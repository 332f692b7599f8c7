//! Synthetic purchase datasets.
//!
//! Each observation draws prices and an income, computes the demanded bundle
//! of a parametric utility and contracts it radially to a drawn share `e_t`
//! of the budget. The unspent `(1 - e_t)` share then goes to one randomly
//! drawn good, so every bundle sits on its budget line while the optimum
//! stays affordable at `e_t` times the income. With `e_t = 1` the data are
//! exactly optimal.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Bundle, Observation, PriceVector, PurchaseDataset};
use crate::error::{Error, Result};
use crate::rational::{from_f64, q, qi, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UtilityFamily {
    CobbDouglas,
    Ces,
    Leontief,
}

impl std::str::FromStr for UtilityFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cobb-douglas" => Ok(UtilityFamily::CobbDouglas),
            "ces" => Ok(UtilityFamily::Ces),
            "leontief" => Ok(UtilityFamily::Leontief),
            _ => Err(Error::Precondition(format!("unknown utility family {s:?}"))),
        }
    }
}

/// Parameters for [`synthesize`].
///
/// `utility_params` holds one positive weight per good; empty means equal
/// weights. For CES an extra trailing entry sets the exponent `rho`
/// (default 1/2, must be below 1 and nonzero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub observations: usize,
    pub goods: usize,
    pub utility_family: UtilityFamily,
    pub utility_params: Vec<Rational>,
    pub efficiency_noise: (Rational, Rational),
    pub price_range: (Rational, Rational),
    pub income_range: (Rational, Rational),
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(observations: usize, goods: usize, utility_family: UtilityFamily, seed: u64) -> Self {
        GeneratorSpec {
            observations,
            goods,
            utility_family,
            utility_params: Vec::new(),
            efficiency_noise: (qi(1), qi(1)),
            price_range: (qi(1), qi(4)),
            income_range: (qi(10), qi(20)),
            seed,
        }
    }

    pub fn with_noise(mut self, lo: Rational, hi: Rational) -> Self {
        self.efficiency_noise = (lo, hi);
        self
    }

    pub fn with_params(mut self, params: Vec<Rational>) -> Self {
        self.utility_params = params;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Precondition(m.to_string()));
        if self.observations == 0 {
            return Err(Error::EmptyDataset);
        }
        if self.goods == 0 {
            return bad("at least one good is required");
        }
        let (plo, phi) = &self.price_range;
        if !plo.is_positive() || plo > phi {
            return bad("price range must be a positive interval");
        }
        let (ilo, ihi) = &self.income_range;
        if !ilo.is_positive() || ilo > ihi {
            return bad("income range must be a positive interval");
        }
        let (elo, ehi) = &self.efficiency_noise;
        if !elo.is_positive() || elo > ehi || *ehi > Rational::one() {
            return bad("efficiency noise bounds must satisfy 0 < lo <= hi <= 1");
        }
        Ok(())
    }

    /// Per-good weights and, for CES, the exponent.
    fn weights(&self) -> Result<(Vec<Rational>, Rational)> {
        let l = self.goods;
        let params = &self.utility_params;
        let (weights, rho) = match (self.utility_family, params.len()) {
            (_, 0) => (vec![qi(1); l], q(1, 2)),
            (_, n) if n == l => (params.clone(), q(1, 2)),
            (UtilityFamily::Ces, n) if n == l + 1 => (params[..l].to_vec(), params[l].clone()),
            (_, n) => {
                return Err(Error::Degenerate(format!(
                    "expected {l} utility parameters, got {n}"
                )))
            }
        };
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::Degenerate("utility weights must be positive".into()));
        }
        if self.utility_family == UtilityFamily::Ces && (rho >= Rational::one() || rho.is_zero()) {
            return Err(Error::Degenerate("CES exponent must be below 1 and nonzero".into()));
        }
        Ok((weights, rho))
    }
}

/// A uniform draw from `lo + (hi - lo)·k/1000`, `k ∈ {0..1000}`.
fn draw(rng: &mut ChaCha8Rng, (lo, hi): &(Rational, Rational)) -> Rational {
    let k: i64 = rng.gen_range(0..=1000);
    lo + (hi - lo) * q(k, 1000)
}

/// The utility-maximizing bundle on budget `(p, m)`; spends exactly `m`.
fn demand(
    family: UtilityFamily,
    weights: &[Rational],
    rho: &Rational,
    p: &[Rational],
    m: &Rational,
) -> Result<Vec<Rational>> {
    match family {
        UtilityFamily::CobbDouglas => {
            let total: Rational = weights.iter().sum();
            Ok(weights
                .iter()
                .zip(p)
                .map(|(a, pl)| a / &total * m / pl)
                .collect())
        }
        UtilityFamily::Leontief => {
            let cost: Rational = weights.iter().zip(p).map(|(a, pl)| a * pl).sum();
            Ok(weights.iter().map(|a| a * m / &cost).collect())
        }
        UtilityFamily::Ces => {
            // x_l ∝ (a_l / p_l)^(1/(1-rho)); proportions in floating point,
            // then the exact budget is restored.
            let sigma = 1.0 / (1.0 - to_f64(rho));
            let shape = weights
                .iter()
                .zip(p)
                .map(|(a, pl)| {
                    let v = (to_f64(a) / to_f64(pl)).powf(sigma);
                    from_f64(v)
                        .filter(|r| r.is_positive())
                        .ok_or_else(|| Error::Degenerate("CES demand out of range".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let cost: Rational = shape.iter().zip(p).map(|(x, pl)| x * pl).sum();
            Ok(shape.iter().map(|x| x * m / &cost).collect())
        }
    }
}

/// Deterministic synthetic dataset for `spec`.
pub fn synthesize(spec: &GeneratorSpec) -> Result<PurchaseDataset> {
    spec.validate()?;
    let (weights, rho) = spec.weights()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut observations = Vec::with_capacity(spec.observations);
    for _ in 0..spec.observations {
        let prices: Vec<Rational> = (0..spec.goods).map(|_| draw(&mut rng, &spec.price_range)).collect();
        let income = draw(&mut rng, &spec.income_range);
        let e = draw(&mut rng, &spec.efficiency_noise);
        let optimal = demand(spec.utility_family, &weights, &rho, &prices, &income)?;
        let mut x: Vec<Rational> = optimal.into_iter().map(|x| x * &e).collect();
        // Radial contraction alone keeps homothetic demand consistent, so the
        // leftover income is spent on a single good.
        let j = rng.gen_range(0..spec.goods);
        x[j] += (Rational::one() - &e) * &income / &prices[j];
        let bundle = Bundle::new(x)?;
        observations.push(Observation::new(PriceVector::new(prices)?, bundle)?);
    }
    PurchaseDataset::new(observations)
}
