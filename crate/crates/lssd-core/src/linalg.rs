//! Dense exact linear algebra over rationals: row reduction, rank, nullspace
//! and inversion. Sizes here are small (at most a few thousand rows), so a
//! straightforward Gaussian elimination is enough.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone().recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= f.clone() * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work).len()
}

/// Indices of a maximal linearly independent subset of `rows`, chosen
/// greedily in order. Used to drop redundant equality constraints.
pub fn independent_rows(rows: &[Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    let mut kept = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut work = row.clone();
        // Reduce against the rows kept so far.
        for e in &echelon {
            let lead = e.iter().position(|x| !x.is_zero()).unwrap();
            if !work[lead].is_zero() {
                let f = work[lead].clone() / &e[lead];
                for c in lead..ncols {
                    if !e[c].is_zero() {
                        let delta = f.clone() * &e[c];
                        work[c] -= delta;
                    }
                }
            }
        }
        if work.iter().any(|x| !x.is_zero()) {
            kept.push(i);
            echelon.push(work);
            // Keep echelon sorted by leading column for the reduction above.
            echelon.sort_by_key(|e| e.iter().position(|x| !x.is_zero()).unwrap());
        }
    }
    kept
}

/// Particular solution and nullspace basis of `A x = b`.
/// Returns `None` when the system is inconsistent.
#[allow(clippy::type_complexity)]
pub fn affine_solution_and_nullspace(
    a: &[Vec<Rational>],
    b: &[Rational],
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    assert_eq!(a.len(), b.len());
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, d)| {
            let mut r = row.clone();
            r.push(d.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None; // pivot in the rhs column: inconsistent
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][ncols].clone();
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut vec = vec![Rational::zero(); ncols];
        vec[free] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            vec[c] = -aug[r][free].clone();
        }
        basis.push(vec);
    }
    Some((particular, basis))
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Invertible iff the pivots are exactly the first n columns.
    if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
