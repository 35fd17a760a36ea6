//! Length sequences and estimates of their normalized limits.

mod multiplicity;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use multiplicity::{
    e_s_localized, epsilon_difference_check, samuel_of_quotient, samuel_sequence, DifferenceReport, EsContribution,
    EsReport,
};

use crate::filtration::Filtration;
use crate::rational;
use crate::ring::{quotient_length, Length};
use crate::{Error, Result};

/// `d! * len / n^d`.
pub fn normalize(len: &BigUint, n: u64, d: usize) -> BigRational {
    let fact: BigUint = (1..=d as u64).product();
    let den = num_traits::pow(BigUint::from(n), d);
    BigRational::new(BigInt::from(fact * len), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthEntry {
    pub n: u64,
    pub length: Length,
    /// `d! * length / n^d`; absent for infinite lengths.
    #[serde(with = "rational::serde_option_string")]
    pub normalized: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthSequence {
    /// Normalization exponent `d`.
    pub exponent: usize,
    pub entries: Vec<LengthEntry>,
}

impl LengthSequence {
    /// Sequence from `(n, length)` pairs with strictly increasing `n >= 1`.
    pub fn from_lengths(exponent: usize, lengths: Vec<(u64, Length)>) -> Result<Self> {
        if lengths.windows(2).any(|w| w[0].0 >= w[1].0) || lengths.first().is_some_and(|e| e.0 == 0) {
            return Err(Error::InvalidArgument("sequence indices must be positive and strictly increasing".into()));
        }
        let entries = lengths
            .into_iter()
            .map(|(n, length)| {
                let normalized = length.value().map(|v| normalize(v, n, exponent));
                LengthEntry { n, length, normalized }
            })
            .collect();
        Ok(Self { exponent, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lengths(&self) -> impl Iterator<Item = &Length> {
        self.entries.iter().map(|e| &e.length)
    }
}

/// `λ(I_n^sat / I_n)` for `n = 1..=n_max`, normalized by the ring dimension.
pub fn sat_quotient_sequence(f: &Filtration, n_max: u64) -> Result<LengthSequence> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("sequence bound must be at least 1".into()));
    }
    let ideals = f.ideals(n_max)?;
    let lengths = ideals.par_iter().map(|i| quotient_length(&i.saturate(), i)).collect::<Result<Vec<_>>>()?;
    LengthSequence::from_lengths(f.dimension(), (1..=n_max).zip(lengths).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// Secant estimates settle; `residual` is their spread over the trailing
    /// window.
    Converging {
        #[serde(with = "rational::serde_string")]
        estimate: BigRational,
        #[serde(with = "rational::serde_string")]
        residual: BigRational,
    },
    /// No settling; the estimate is the largest normalized value in the
    /// trailing window.
    Oscillating {
        #[serde(with = "rational::serde_string")]
        limsup_estimate: BigRational,
    },
    Diverging,
}

impl Classification {
    /// Converging estimate or oscillating limsup estimate.
    pub fn estimate(&self) -> Option<&BigRational> {
        match self {
            Classification::Converging { estimate, .. } => Some(estimate),
            Classification::Oscillating { limsup_estimate } => Some(limsup_estimate),
            Classification::Diverging => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classification::Converging { .. } => "converging",
            Classification::Oscillating { .. } => "oscillating",
            Classification::Diverging => "diverging",
        }
    }
}

/// Absolute tolerance on the spread of trailing secant estimates.
pub fn absolute_tolerance() -> BigRational {
    rational::ratio(1, 1000)
}

/// Relative tolerance on the spread of trailing secant estimates.
pub fn relative_tolerance() -> BigRational {
    rational::ratio(1, 100)
}

/// Factor by which the last value must exceed the initial median to count as
/// divergent.
pub const DIVERGENCE_FACTOR: u64 = 10;

/// Evidence about `limsup d! λ_n / n^d`.
///
/// Rules, applied to exact rationals with trailing window `w`:
///
/// * diverging: some length in the last `w` entries is infinite, or the last
///   normalized value exceeds [`DIVERGENCE_FACTOR`] times the median of the
///   first `w` values while the last `w` values are nondecreasing and not
///   constant;
/// * converging: the secant estimates of the last `w` entries spread by less
///   than `max(1/1000, |mean|/100)`; the estimate is the last of them;
/// * oscillating otherwise, with the largest normalized value in the last
///   `w` entries as limsup estimate.
///
/// The secant estimate at entry `k` fits `s_n = ε + c/n` through entries
/// `k - w` and `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub sequence: LengthSequence,
    pub window: usize,
    /// Running maximum of normalized values; `None` once an infinite length
    /// has occurred.
    #[serde(serialize_with = "ser_opt_vec", deserialize_with = "de_opt_vec")]
    pub running_sup: Vec<Option<BigRational>>,
    /// Secant estimate per entry; `None` for the first `w` entries or when an
    /// endpoint is infinite.
    #[serde(serialize_with = "ser_opt_vec", deserialize_with = "de_opt_vec")]
    pub secant: Vec<Option<BigRational>>,
    pub classification: Classification,
}

fn ser_opt_vec<S: serde::Serializer>(v: &[Option<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Option<String>> = v.iter().map(|r| r.as_ref().map(rational::to_string)).collect();
    strings.serialize(s)
}

fn de_opt_vec<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Option<BigRational>>, D::Error> {
    let strings = Vec::<Option<String>>::deserialize(d)?;
    strings.into_iter().map(|s| s.map(|s| rational::parse(&s)).transpose().map_err(serde::de::Error::custom)).collect()
}

/// `sat_quotient_sequence` followed by [`EpsilonReport::from_sequence`].
pub fn epsilon_report(f: &Filtration, n_max: u64, window: usize) -> Result<EpsilonReport> {
    check_window(n_max as usize, window)?;
    EpsilonReport::from_sequence(sat_quotient_sequence(f, n_max)?, window)
}

fn check_window(len: usize, window: usize) -> Result<()> {
    if window == 0 || len < 2 * window {
        return Err(Error::InvalidArgument(format!(
            "need at least twice the window ({window}) in entries, have {len}"
        )));
    }
    Ok(())
}

fn median(values: &[BigRational]) -> BigRational {
    let mut v = values.to_vec();
    v.sort();
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2].clone()
    } else {
        (&v[k / 2 - 1] + &v[k / 2]) / BigInt::from(2)
    }
}

impl EpsilonReport {
    pub fn from_sequence(sequence: LengthSequence, window: usize) -> Result<Self> {
        let len = sequence.len();
        check_window(len, window)?;
        let norm: Vec<Option<&BigRational>> = sequence.entries.iter().map(|e| e.normalized.as_ref()).collect();

        let mut running_sup = Vec::with_capacity(len);
        let mut cur: Option<BigRational> = Some(BigRational::zero());
        for v in &norm {
            cur = match (cur, v) {
                (Some(c), Some(v)) => Some(if **v > c { (*v).clone() } else { c }),
                _ => None,
            };
            running_sup.push(cur.clone());
        }

        let secant: Vec<Option<BigRational>> = (0..len)
            .map(|k| {
                if k < window {
                    return None;
                }
                let (a, b) = (&sequence.entries[k - window], &sequence.entries[k]);
                let (sa, sb) = (a.normalized.as_ref()?, b.normalized.as_ref()?);
                let (na, nb) = (BigInt::from(a.n), BigInt::from(b.n));
                Some((sb * &nb - sa * &na) / (&nb - &na))
            })
            .collect();

        let classification = classify(&norm, &secant, window);
        Ok(Self { sequence, window, running_sup, secant, classification })
    }

    pub fn estimate(&self) -> Option<&BigRational> {
        self.classification.estimate()
    }
}

fn classify(norm: &[Option<&BigRational>], secant: &[Option<BigRational>], w: usize) -> Classification {
    let len = norm.len();
    let tail = &norm[len - w..];
    if tail.iter().any(Option::is_none) {
        return Classification::Diverging;
    }
    let tail: Vec<&BigRational> = tail.iter().map(|v| v.unwrap()).collect();
    let head: Vec<BigRational> = norm[..w].iter().flatten().map(|v| (*v).clone()).collect();
    let last = tail[w - 1];
    let nondecreasing = tail.windows(2).all(|p| p[0] <= p[1]);
    if nondecreasing && last > tail[0] {
        let exceeds = if head.is_empty() { true } else { *last > median(&head) * BigInt::from(DIVERGENCE_FACTOR) };
        if exceeds {
            return Classification::Diverging;
        }
    }

    let sec: Vec<&BigRational> = secant[len - w..].iter().flatten().collect();
    if sec.len() == w {
        let max = sec.iter().max().unwrap();
        let min = sec.iter().min().unwrap();
        let spread = *max - *min;
        let mean: BigRational = sec.iter().fold(BigRational::zero(), |acc, v| acc + *v) / BigInt::from(w as u64);
        let tol = std::cmp::max(absolute_tolerance(), mean.abs() * relative_tolerance());
        if spread < tol {
            return Classification::Converging { estimate: sec[w - 1].clone(), residual: spread };
        }
    }
    let limsup = tail.iter().max().map(|v| (*v).clone()).unwrap_or_else(BigRational::one);
    Classification::Oscillating { limsup_estimate: limsup }
}
