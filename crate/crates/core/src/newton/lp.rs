//! Exact phase-one simplex for `A x = b, x >= 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub enum Feasibility {
    Feasible(Vec<BigRational>),
    /// Farkas certificate `y` with `yᵀA <= 0` and `yᵀb > 0`.
    Infeasible(Vec<BigRational>),
}

/// Decides feasibility of `A x = b, x >= 0` with Bland's rule, which
/// terminates without cycling.
pub fn feasibility(a: &[Vec<BigRational>], b: &[BigRational]) -> Feasibility {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    // Normalize to b >= 0; remember flipped rows to undo on the dual.
    let mut flipped = vec![false; m];
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![BigRational::zero(); width];
        let sign = if b[i].is_negative() {
            flipped[i] = true;
            -BigRational::one()
        } else {
            BigRational::one()
        };
        for j in 0..n {
            row[j] = &a[i][j] * &sign;
        }
        row[n + i] = BigRational::one();
        row[width - 1] = &b[i] * &sign;
        t.push(row);
    }
    // Reduced costs of the phase-one objective Σ artificials.
    let mut obj = vec![BigRational::zero(); width];
    for j in 0..width {
        let c = if j >= n && j < n + m { BigRational::one() } else { BigRational::zero() };
        let col_sum = t.iter().fold(BigRational::zero(), |acc, row| acc + &row[j]);
        obj[j] = if j == width - 1 { -col_sum } else { c - col_sum };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so a leaving row exists.
        let (p, _) = leave.expect("phase-one objective is bounded");
        let piv = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, pv) in obj.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        basis[p] = enter;
    }

    if obj[width - 1].is_zero() {
        let mut x = vec![BigRational::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[i][width - 1].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        // y_i = c_art - reduced cost of artificial i.
        let y = (0..m)
            .map(|i| {
                let yi = BigRational::one() - &obj[n + i];
                if flipped[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        Feasibility::Infeasible(y)
    }
}
