//! Small dense simplex over exact rationals.
//!
//! Solves `max c·y  s.t.  A y ≤ b, y ≥ 0` with `b ≥ 0`, so the origin is a
//! feasible starting basis. Bland's rule guarantees termination.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: Vec<Rational>,
}

/// Maximizes `c·y` over `{y ≥ 0 : A y ≤ b}`. Requires `b ≥ 0`.
pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Solver("inconsistent LP dimensions".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::Solver("origin is infeasible".into()));
    }

    // Tableau rows: [A | I | b]; columns 0..n structural, n..n+m slack.
    let width = n + m;
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut r = a[i].clone();
            r.extend((0..m).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    // Reduced costs: objective row holds -c for the maximization.
    let mut obj: Vec<Rational> = c.iter().map(|x| -x).collect();
    obj.extend((0..=m).map(|_| Rational::zero()));
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test; ties go to the smallest basic index (Bland).
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Solver("LP is unbounded".into()));
        };

        let pivot = rows[r][enter].clone();
        for x in rows[r].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        basis[r] = enter;
    }

    let mut point = vec![Rational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            point[j] = rows[i][width].clone();
        }
    }
    Ok(LpSolution {
        value: obj[width].clone(),
        point,
    })
}
