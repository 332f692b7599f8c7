//! Purchase datasets: observed price vectors paired with chosen bundles.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, format_rational, Rational};

/// A consumption bundle: nonnegative quantities of `L` goods.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bundle(Vec<Rational>);

impl Bundle {
    pub fn new(quantities: Vec<Rational>) -> Result<Self> {
        if quantities.is_empty() {
            return Err(Error::InvalidDataset("bundle has no goods".into()));
        }
        if let Some(i) = quantities.iter().position(|x| x.is_negative()) {
            return Err(Error::InvalidDataset(format!(
                "negative quantity {} for good {}",
                format_rational(&quantities[i]),
                i + 1
            )));
        }
        Ok(Bundle(quantities))
    }

    pub fn from_ints(quantities: &[i64]) -> Result<Self> {
        Self::new(quantities.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `self ≥ other` componentwise.
    pub fn dominates(&self, other: &Bundle) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// `self > other`: weakly larger everywhere and not equal.
    pub fn strictly_dominates(&self, other: &Bundle) -> bool {
        self.dominates(other) && self != other
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Bundle) -> Bundle {
        Bundle(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| if a >= b { a.clone() } else { b.clone() })
                .collect(),
        )
    }

    /// Largest coordinate gap `max_l |a_l - b_l|`.
    pub fn sup_distance(&self, other: &Bundle) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Strictly positive prices for `L` goods.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriceVector(Vec<Rational>);

impl PriceVector {
    pub fn new(prices: Vec<Rational>) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::InvalidDataset("price vector has no goods".into()));
        }
        if let Some(i) = prices.iter().position(|p| !p.is_positive()) {
            return Err(Error::InvalidDataset(format!(
                "nonpositive price {} for good {}",
                format_rational(&prices[i]),
                i + 1
            )));
        }
        Ok(PriceVector(prices))
    }

    pub fn from_ints(prices: &[i64]) -> Result<Self> {
        Self::new(prices.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// Cost of `bundle` at these prices.
    pub fn cost(&self, bundle: &Bundle) -> Rational {
        dot(&self.0, bundle.as_slice())
    }

    pub fn cost_of(&self, quantities: &[Rational]) -> Rational {
        dot(&self.0, quantities)
    }

    pub fn scaled(&self, factor: &Rational) -> Result<PriceVector> {
        PriceVector::new(self.0.iter().map(|p| p * factor).collect())
    }
}

/// One period of data: the prices faced and the bundle bought.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Observation {
    price: PriceVector,
    quantity: Bundle,
}

impl Observation {
    pub fn new(price: PriceVector, quantity: Bundle) -> Result<Self> {
        if price.len() != quantity.len() {
            return Err(Error::DimensionMismatch {
                expected: price.len(),
                found: quantity.len(),
            });
        }
        if quantity.is_zero() {
            return Err(Error::InvalidDataset("all-zero bundle".into()));
        }
        Ok(Observation { price, quantity })
    }

    pub fn price(&self) -> &PriceVector {
        &self.price
    }

    pub fn quantity(&self) -> &Bundle {
        &self.quantity
    }

    /// `p^t · q^t`, always positive.
    pub fn expenditure(&self) -> Rational {
        self.price.cost(&self.quantity)
    }
}

/// An ordered list of observations over a common set of `L` goods.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PurchaseDataset {
    observations: Vec<Observation>,
    goods: usize,
}

impl PurchaseDataset {
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        let first = observations.first().ok_or(Error::EmptyDataset)?;
        let goods = first.price.len();
        for obs in &observations {
            if obs.price.len() != goods {
                return Err(Error::DimensionMismatch {
                    expected: goods,
                    found: obs.price.len(),
                });
            }
        }
        Ok(PurchaseDataset {
            observations,
            goods,
        })
    }

    /// Builds a dataset from `(prices, quantities)` rows.
    pub fn from_rows(rows: Vec<(Vec<Rational>, Vec<Rational>)>) -> Result<Self> {
        let observations = rows
            .into_iter()
            .map(|(p, x)| Observation::new(PriceVector::new(p)?, Bundle::new(x)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(observations)
    }

    /// Integer convenience constructor: `(prices, quantities)` per row.
    pub fn from_int_rows(rows: &[(&[i64], &[i64])]) -> Result<Self> {
        let observations = rows
            .iter()
            .map(|(p, x)| Observation::new(PriceVector::from_ints(p)?, Bundle::from_ints(x)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(observations)
    }

    /// Number of observations `T`.
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Number of goods `L`.
    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn observation(&self, t: usize) -> &Observation {
        &self.observations[t]
    }

    pub fn bundle(&self, t: usize) -> &Bundle {
        &self.observations[t].quantity
    }

    pub fn price(&self, t: usize) -> &PriceVector {
        &self.observations[t].price
    }

    pub fn expenditure(&self, t: usize) -> Rational {
        self.observations[t].expenditure()
    }

    /// `p^t · q^s`.
    pub fn cross_cost(&self, t: usize, s: usize) -> Rational {
        self.price(t).cost(self.bundle(s))
    }

    /// Keeps only the listed observations, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Result<PurchaseDataset> {
        Self::new(keep.iter().map(|&t| self.observations[t].clone()).collect())
    }

    /// Replaces the bundle of observation `t`.
    pub fn with_bundle(&self, t: usize, bundle: Bundle) -> Result<PurchaseDataset> {
        let mut observations = self.observations.clone();
        observations[t] = Observation::new(observations[t].price.clone(), bundle)?;
        Self::new(observations)
    }

    /// Replaces the price vector of observation `t`.
    pub fn with_price(&self, t: usize, price: PriceVector) -> Result<PurchaseDataset> {
        let mut observations = self.observations.clone();
        observations[t] = Observation::new(price, observations[t].quantity.clone())?;
        Self::new(observations)
    }

    pub fn check_bundle(&self, bundle: &Bundle) -> Result<()> {
        if bundle.len() != self.goods {
            return Err(Error::DimensionMismatch {
                expected: self.goods,
                found: bundle.len(),
            });
        }
        Ok(())
    }
}
