use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::filtration::Filtration;
use crate::Result;

/// Rank over `Q` of a family of integer vectors, by incremental elimination
/// against a reduced echelon basis.
pub fn lattice_rank(vectors: &[Vec<u64>]) -> usize {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let width = vectors.first().map_or(0, Vec::len);
    for v in vectors {
        let mut v: Vec<BigRational> = v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        for (col, b) in &basis {
            if !v[*col].is_zero() {
                let f = v[*col].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero()) {
            let p = v[col].clone();
            for x in v.iter_mut() {
                *x /= &p;
            }
            for (_, b) in basis.iter_mut() {
                if !b[col].is_zero() {
                    let f = b[col].clone();
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x -= &f * y;
                    }
                }
            }
            basis.push((col, v));
            if basis.len() == width {
                break;
            }
        }
    }
    basis.len()
}

/// Upper bound for the analytic spread: the rank of the lattice spanned by
/// `(g, n)` over minimal generators `g` of `I_n`, clamped to `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBound {
    pub n_max: u64,
    pub raw_rank: usize,
    pub bound: usize,
}

pub fn toric_rank_bound(f: &Filtration, n_max: u64) -> Result<RankBound> {
    let mut vectors = Vec::new();
    for (n, i) in (1..=n_max).zip(f.ideals(n_max)?) {
        for g in i.generators() {
            let mut v = g.coords().to_vec();
            v.push(n);
            vectors.push(v);
        }
    }
    let raw_rank = lattice_rank(&vectors);
    Ok(RankBound { n_max, raw_rank, bound: raw_rank.min(f.dimension()) })
}
