//! Concave piecewise-linear utilities `U(x) = min_k (c_k + g_k·x)`.

use num_traits::{Signed, Zero};

use crate::dataset::{Bundle, PriceVector};
use crate::error::{Error, Result};
use crate::lp;
use crate::rational::{dot, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub constant: Rational,
    pub gradient: Vec<Rational>,
}

/// Minimum of finitely many affine functions with strictly positive gradients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseConcaveUtility {
    pieces: Vec<Piece>,
    goods: usize,
}

impl PiecewiseConcaveUtility {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let goods = pieces
            .first()
            .map(|p| p.gradient.len())
            .ok_or_else(|| Error::Precondition("utility needs at least one piece".into()))?;
        if goods == 0 {
            return Err(Error::Precondition("utility gradient has no goods".into()));
        }
        for p in &pieces {
            if p.gradient.len() != goods {
                return Err(Error::DimensionMismatch {
                    expected: goods,
                    found: p.gradient.len(),
                });
            }
            if p.gradient.iter().any(|g| !g.is_positive()) {
                return Err(Error::Precondition("utility gradients must be strictly positive".into()));
            }
        }
        Ok(PiecewiseConcaveUtility { pieces, goods })
    }

    /// A single affine piece `c + g·x`.
    pub fn linear(constant: Rational, gradient: Vec<Rational>) -> Result<Self> {
        Self::new(vec![Piece { constant, gradient }])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn value(&self, x: &Bundle) -> Rational {
        self.value_at(x.as_slice())
    }

    pub fn value_at(&self, x: &[Rational]) -> Rational {
        self.pieces
            .iter()
            .map(|p| &p.constant + dot(&p.gradient, x))
            .min()
            .expect("at least one piece")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetOptimum {
    pub argmax: Bundle,
    pub value: Rational,
}

/// Exact maximum of `u` over `{x ≥ 0 : p·x ≤ m}`, attained at a vertex.
pub fn maximize_on_budget(
    u: &PiecewiseConcaveUtility,
    p: &PriceVector,
    m: &Rational,
) -> Result<BudgetOptimum> {
    if p.len() != u.goods() {
        return Err(Error::DimensionMismatch {
            expected: u.goods(),
            found: p.len(),
        });
    }
    if m.is_negative() {
        return Err(Error::Precondition("budget must be nonnegative".into()));
    }
    // z = w + z0 with z0 = U(0); variables (w, x).
    let z0 = u.pieces.iter().map(|p| p.constant.clone()).min().expect("nonempty");
    let l = u.goods();
    let mut c = vec![Rational::zero(); l + 1];
    c[0] = Rational::from_integer(1.into());
    let mut rows = Vec::with_capacity(u.pieces.len() + 1);
    let mut rhs = Vec::with_capacity(u.pieces.len() + 1);
    for piece in &u.pieces {
        let mut row = vec![Rational::from_integer(1.into())];
        row.extend(piece.gradient.iter().map(|g| -g));
        rows.push(row);
        rhs.push(&piece.constant - &z0);
    }
    let mut budget = vec![Rational::zero()];
    budget.extend(p.as_slice().iter().cloned());
    rows.push(budget);
    rhs.push(m.clone());

    let sol = lp::maximize(&c, &rows, &rhs)?;
    let argmax = Bundle::new(sol.point[1..].to_vec())?;
    let value = u.value(&argmax);
    debug_assert_eq!(value, sol.value + z0);
    Ok(BudgetOptimum { argmax, value })
}
