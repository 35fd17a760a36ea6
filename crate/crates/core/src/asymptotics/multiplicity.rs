use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EpsilonReport, LengthSequence};
use crate::filtration::Filtration;
use crate::rational;
use crate::ring::{colength, quotient_length, Length, MonomialIdeal};
use crate::{Error, Result};

/// Colengths `λ(R/I_n)` for `n = 1..=n_max`; every member must be primary
/// to the maximal ideal.
pub fn samuel_sequence(f: &Filtration, n_max: u64) -> Result<LengthSequence> {
    let ideals = f.ideals(n_max)?;
    let lengths = ideals.par_iter().map(colength).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(lengths.len());
    for (n, l) in (1..=n_max).zip(lengths) {
        if !l.is_finite() {
            return Err(Error::NotPrimary { n });
        }
        out.push((n, l));
    }
    LengthSequence::from_lengths(f.dimension(), out)
}

fn finite(l: Length) -> Result<BigInt> {
    match l {
        Length::Finite(v) => Ok(BigInt::from(v)),
        Length::Infinite => Err(Error::InvalidArgument("unexpected infinite length".into())),
    }
}

/// `e_s(m, R/I)` with `s = dim R/I`, read off as the `s`-th difference of
/// `k -> λ(R/(I + m^k))`.
///
/// The standard monomials of `I` split into finitely many translates
/// `a + N^S` with `a` inside the box of generator maxima, so the difference
/// is constant from `k = Σ_i max_g g_i + 1` on; it is checked on a few
/// further values of `k`.
pub fn samuel_of_quotient(i: &MonomialIdeal) -> Result<BigInt> {
    let s = i.dim_quotient()?;
    let ctx = i.context();
    let d = ctx.dimension();
    let lcm_degree: u64 = (0..d).map(|t| i.generators().iter().map(|g| g.coords()[t]).max().unwrap_or(0)).sum();
    let k_max = (8 * i.max_degree()).max(lcm_degree as u128 + s as u128 + 4) as u64;
    let start = lcm_degree + 1;
    let h = |k: u64| -> Result<BigInt> { finite(colength(&i.sum(&MonomialIdeal::maximal_power(ctx, k))?)?) };
    let values = (start..=start + s as u64 + 3).map(h).collect::<Result<Vec<_>>>()?;
    let mut diffs = values;
    for _ in 0..s {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    if diffs.windows(2).any(|w| w[0] != w[1]) || start + s as u64 + 3 > k_max {
        return Err(Error::Stabilization { k_max });
    }
    Ok(diffs[0].clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsContribution {
    /// Variable names of the face prime.
    pub prime: Vec<String>,
    #[serde(with = "rational::serde_string")]
    pub value: BigRational,
    /// The normalized localized colengths were constant over the range, so
    /// the value is their common value rather than an extrapolation.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsReport {
    pub s: usize,
    pub contributions: Vec<EsContribution>,
    #[serde(with = "rational::serde_string")]
    pub total: BigRational,
    pub exact: bool,
}

/// `e_s(m, I) = Σ_p e(I_p) · e_m(R/p)` over the face primes `p ⊇ I_1` with
/// `dim R/p = s(I)`. In a polynomial ring `e_m(R/p) = 1` for face primes.
/// Each `e(I_p)` is the normalized limit of `λ(R_p / I_n R_p)`, taken exactly
/// when the normalized sequence is constant and otherwise estimated with the
/// rules of [`EpsilonReport`].
pub fn e_s_localized(f: &Filtration, n_max: u64, window: usize) -> Result<EsReport> {
    let i1 = f.ideal_at(1)?;
    let s = i1.dim_quotient()?;
    let height = f.dimension() - s;
    let mut contributions = Vec::new();
    for vars in i1.covers_of_size(height) {
        let local = f.localize(&vars)?;
        let seq = samuel_sequence(&local, n_max)?;
        let norms: Vec<&BigRational> = seq.entries.iter().filter_map(|e| e.normalized.as_ref()).collect();
        let (value, exact) = if norms.windows(2).all(|w| w[0] == w[1]) && !norms.is_empty() {
            (norms[0].clone(), true)
        } else {
            let report = EpsilonReport::from_sequence(seq, window)?;
            match report.classification {
                super::Classification::Converging { estimate, .. } => (estimate, false),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "localized colengths at {:?} are {}",
                        local.context().names(),
                        other.name()
                    )))
                }
            }
        };
        contributions.push(EsContribution { prime: local.context().names().to_vec(), value, exact });
    }
    let total = contributions.iter().fold(BigRational::zero(), |acc, c| acc + &c.value);
    let exact = contributions.iter().all(|c| c.exact);
    Ok(EsReport { s, contributions, total, exact })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceReport {
    pub larger: EpsilonReport,
    pub smaller: EpsilonReport,
    /// Normalized `λ(I_n / J_n)`.
    pub middle: EpsilonReport,
    /// `ε̂(J) - ε̂(I) - lim d! λ(I_n/J_n)/n^d`, when all three have estimates.
    #[serde(with = "rational::serde_option_string")]
    pub residual: Option<BigRational>,
}

/// Compares `ε(J)` with `ε(I) + d! lim λ(I_n/J_n)/n^d` for `J_n ⊆ I_n` with
/// finite `λ(I_n/J_n)`.
pub fn epsilon_difference_check(j: &Filtration, i: &Filtration, n_max: u64, window: usize) -> Result<DifferenceReport> {
    if i.dimension() != j.dimension() {
        return Err(Error::DimensionMismatch { expected: j.dimension(), found: i.dimension() });
    }
    let (ji, ii) = (j.ideals(n_max)?, i.ideals(n_max)?);
    let mut middle = Vec::with_capacity(ji.len());
    for (n, (jn, in_)) in (1..=n_max).zip(ji.iter().zip(&ii)) {
        if let Some(g) = in_.first_outside(jn)? {
            return Err(Error::Violation {
                n,
                detail: format!("{} lies in J_n but not in I_n", j.context().format_monomial(&g)),
            });
        }
        let l = quotient_length(in_, jn)?;
        if !l.is_finite() {
            return Err(Error::Violation { n, detail: "I_n / J_n has infinite length".into() });
        }
        middle.push((n, l));
    }
    let middle = EpsilonReport::from_sequence(LengthSequence::from_lengths(j.dimension(), middle)?, window)?;
    let larger = super::epsilon_report(j, n_max, window)?;
    let smaller = super::epsilon_report(i, n_max, window)?;
    let residual = match (larger.estimate(), smaller.estimate(), middle.estimate()) {
        (Some(a), Some(b), Some(c)) => Some(a - b - c),
        _ => None,
    };
    Ok(DifferenceReport { larger, smaller, middle, residual })
}
