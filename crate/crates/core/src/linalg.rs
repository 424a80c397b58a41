//! Exact linear solves and polynomial interpolation over the rationals.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A solution of `A x = b`; free variables are set to zero when `unique` is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Rational>,
    pub unique: bool,
    pub rank: usize,
}

/// Solves `A x = b` by Gauss-Jordan elimination. `A` has `cols` columns; rows may be many.
/// Fails with [`Error::FitFailed`] when the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Result<Solution> {
    assert_eq!(a.len(), b.len());
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.resize(cols, Rational::zero());
            row.push(bi.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].recip();
        for v in rows[rank].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[cols].is_zero()) {
        return Err(Error::FitFailed("inconsistent linear system".into()));
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][cols].clone();
    }
    Ok(Solution { x, unique: rank == cols, rank })
}

/// Coefficients `c_0..c_deg` of the polynomial through `points`, requiring a unique fit
/// of degree `≤ deg` that also passes through every point.
pub fn interpolate(points: &[(Rational, Rational)], deg: usize) -> Result<Vec<Rational>> {
    let a: Vec<Vec<Rational>> = points.iter().map(|(x, _)| (0..=deg).map(|k| x.pow(k as i32)).collect()).collect();
    let b: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    let sol = solve(&a, &b, deg + 1)?;
    if !sol.unique {
        return Err(Error::FitFailed("too few interpolation points".into()));
    }
    Ok(sol.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn solves_and_flags() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
        let s = solve(&a, &[q(3), q(1), q(4)], 2).unwrap();
        assert_eq!(s.x, vec![q(2), q(1)]);
        assert!(s.unique);
        assert!(solve(&a, &[q(3), q(1), q(5)], 2).is_err());
        let s = solve(&[vec![q(1), q(1)]], &[q(2)], 2).unwrap();
        assert!(!s.unique);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn interpolation() {
        // m³/12 - m/12 through six points
        let pts: Vec<_> = (1..=6).map(|m| (q(m), Rational::new(m * m * m - m, 12))).collect();
        let c = interpolate(&pts, 4).unwrap();
        assert_eq!(c, vec![q(0), Rational::new(-1, 12), q(0), Rational::new(1, 12), q(0)]);
        assert!(interpolate(&pts[..3], 4).is_err());
        assert!(interpolate(&pts, 2).is_err());
    }
}
