use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::filtration::{Filtration, FiltrationSpec};
use crate::newton::integral_closure;
use crate::ring::{Exponent, MonomialIdeal};
use crate::valuation::INITIAL_BITS;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MaxStatus {
    /// `ℓ(I) = d` follows from the witness.
    Asserted {
        ell: usize,
        basis: String,
    },
    /// The saturation criterion holds but the filtration is not rational
    /// divisorial, so nothing follows for the analytic spread.
    Inapplicable {
        reason: String,
    },
    NotAsserted {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SpreadMaxResult {
    /// `witness ∈ sat(I_n) \ I_n` (for power filtrations, with `I_n`
    /// replaced by its integral closure).
    Maximal {
        n: u64,
        witness: Exponent,
        witness_text: String,
        status: MaxStatus,
    },
    NotFound {
        n_max: u64,
    },
}

/// Searches `n <= n_max` for a member with `m ∈ Ass(R/I_n)`, i.e.
/// `I_n ≠ sat(I_n)`.
///
/// For rational discrete valued specs this forces maximal analytic spread.
/// Power filtrations are searched through the integral closures of their
/// members, which form a rational discrete valued filtration with the same
/// analytic spread.
pub fn spread_max_test(f: &Filtration, n_max: u64) -> Result<SpreadMaxResult> {
    let closure_route = matches!(f.spec(), FiltrationSpec::Power(_));
    let ideals = f.ideals(n_max)?;
    let found: Vec<Option<Exponent>> = ideals
        .par_iter()
        .map(|i| {
            let member = if closure_route && !i.is_zero() { integral_closure(i)? } else { i.clone() };
            member.first_outside(&member.saturate())
        })
        .collect::<Result<_>>()?;
    let Some((n, witness)) = found.into_iter().enumerate().find_map(|(k, w)| w.map(|w| (k as u64 + 1, w))) else {
        return Ok(SpreadMaxResult::NotFound { n_max });
    };
    let d = f.dimension();
    let status = if f.is_q_divisorial() {
        MaxStatus::Asserted { ell: d, basis: "rational discrete valued filtration".into() }
    } else if closure_route {
        MaxStatus::Asserted { ell: d, basis: "integral closures of powers".into() }
    } else if matches!(f.spec(), FiltrationSpec::DiscreteValued(_)) {
        MaxStatus::Inapplicable { reason: "criterion holds; inapplicable (not Q-divisorial)".into() }
    } else {
        MaxStatus::NotAsserted { reason: "not a rational discrete valued filtration".into() }
    };
    Ok(SpreadMaxResult::Maximal { n, witness_text: f.context().format_monomial(&witness), witness, status })
}

/// `generator^r ∈ m · I_{rn}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCertificate {
    pub n: u64,
    pub generator: Exponent,
    pub r: u64,
}

/// Exponent `R = s · max r + 1` for degree `n`: a product of `R` generators
/// of `I_n` repeats one of the `s` generators at least `max r` times, so
/// every `f ∈ I_n` has `f^R ∈ m · I_{Rn}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Amplification {
    pub n: u64,
    pub generators: usize,
    pub max_r: u64,
    pub exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SpreadZeroResult {
    ZeroEvidence { certificates: Vec<GeneratorCertificate>, amplification: Vec<Amplification> },
    NotFound { n: u64, generator: Exponent, r_bound: u64 },
}

/// Largest search bound the adaptive rule may request.
pub const MAX_ADAPTIVE_R: u64 = 100_000;

/// `x^b ∈ m · I` iff some generator of `I` divides `x^b` properly.
fn in_m_times(i: &MonomialIdeal, b: &Exponent) -> bool {
    i.generators().iter().any(|h| h.divides(b) && h != b)
}

/// Search bound at degree `n`: `r_max`, raised to `ceil(2 / f)` where `f`
/// is a certified lower bound for the fractional gap `ceil(n a) - n a` of
/// any multiplier `a` of the filtration.
fn adaptive_bound(f: &Filtration, n: u64, r_max: u64) -> Result<u64> {
    let mut bound = r_max;
    let nq = BigRational::from_integer(BigInt::from(n));
    for a in f.ceil_multipliers() {
        let c = BigRational::from_integer(a.ceil_mul(n)?);
        let (_, hi) = a.interval(INITIAL_BITS);
        let gap = c - hi * &nq;
        if gap.is_positive() {
            let need = (BigRational::from_integer(BigInt::from(2)) / gap).ceil().to_integer();
            let need = need.to_u64().unwrap_or(MAX_ADAPTIVE_R).min(MAX_ADAPTIVE_R);
            bound = bound.max(need);
        }
    }
    Ok(bound)
}

/// Looks for `r <= bound` with `g^r ∈ m · I_{rn}` for every minimal
/// generator `g` of every `I_n`, `n <= n_max`.
pub fn spread_zero_test(f: &Filtration, n_max: u64, r_max: u64) -> Result<SpreadZeroResult> {
    if r_max < 2 {
        return Err(Error::InvalidArgument("r_max must be at least 2".into()));
    }
    let per_degree: Vec<std::result::Result<Vec<GeneratorCertificate>, (Exponent, u64)>> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let bound = adaptive_bound(f, n, r_max)?;
            let mut certs = Vec::new();
            for g in f.ideal_at(n)?.generators() {
                let mut hit = None;
                for r in 2..=bound {
                    if in_m_times(&f.ideal_at(r * n)?, &g.checked_scale(r)?) {
                        hit = Some(r);
                        break;
                    }
                }
                match hit {
                    Some(r) => certs.push(GeneratorCertificate { n, generator: g.clone(), r }),
                    None => return Ok(Err((g.clone(), bound))),
                }
            }
            Ok(Ok(certs))
        })
        .collect::<Result<_>>()?;
    let mut certificates = Vec::new();
    let mut amplification = Vec::new();
    for (n, res) in (1..=n_max).zip(per_degree) {
        match res {
            Ok(certs) => {
                let max_r = certs.iter().map(|c| c.r).max().unwrap_or(0);
                amplification.push(Amplification {
                    n,
                    generators: certs.len(),
                    max_r,
                    exponent: (certs.len() as u64) * max_r + 1,
                });
                certificates.extend(certs);
            }
            Err((generator, r_bound)) => return Ok(SpreadZeroResult::NotFound { n, generator, r_bound }),
        }
    }
    Ok(SpreadZeroResult::ZeroEvidence { certificates, amplification })
}

impl GeneratorCertificate {
    pub fn reverify(&self, f: &Filtration) -> Result<bool> {
        Ok(f.ideal_at(self.n)?.contains(&self.generator)?
            && in_m_times(&f.ideal_at(self.r * self.n)?, &self.generator.checked_scale(self.r)?))
    }
}
