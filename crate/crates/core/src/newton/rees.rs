use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{np_decide, np_membership, NpDecision};
use crate::filtration::{Filtration, FiltrationSpec};
use crate::rational;
use crate::ring::Exponent;
use crate::valuation::ExactScalar;
use crate::{Error, Result};

/// Proof that `x^a` is not integral over `R[I]` in degree `m`: for all
/// `r >= 1`, `ν_w(I_{rm}) >= slope * r + intercept > r * (w · a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoCertificate {
    pub degree: u64,
    pub monomial: Exponent,
    pub weight: Vec<u64>,
    pub slope: ExactScalar,
    #[serde(with = "rational::serde_string")]
    pub intercept: BigRational,
}

impl NoCertificate {
    /// Direct check of `r (w · a) < ν_w(I_{rm})` for `r = 1..=r_up_to`.
    pub fn reverify(&self, f: &Filtration, r_up_to: u64) -> Result<bool> {
        let wa = self.monomial.dot(&self.weight)?;
        for r in 1..=r_up_to {
            let i = f.ideal_at(r * self.degree)?;
            let mut nu: Option<u128> = None;
            for g in i.generators() {
                let v = g.dot(&self.weight)?;
                nu = Some(nu.map_or(v, |n| n.min(v)));
            }
            let Some(nu) = nu else { continue };
            if (r as u128) * wa >= nu {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Membership {
    /// `x^{ra} ∈ closure(I_{rm})`.
    Yes {
        r: u64,
    },
    No(NoCertificate),
    Unknown,
}

fn q(v: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn add_scalars(a: &ExactScalar, b: &ExactScalar) -> Option<ExactScalar> {
    match (a, b) {
        (ExactScalar::Rational(x), ExactScalar::Rational(y)) => Some(ExactScalar::Rational(x + y)),
        (ExactScalar::PiMultiple(x), ExactScalar::PiMultiple(y)) => Some(ExactScalar::pi_times(x + y)),
        (ExactScalar::Rational(x), other) | (other, ExactScalar::Rational(x)) if x.is_zero() => Some(other.clone()),
        _ => None,
    }
}

/// `(s, c)` with `ν_w(I_{rm}) >= s r + c` for every `r >= 1`, when the filtration
/// makes one available.
fn lower_bound(f: &Filtration, w: &[u64], m: u64) -> Result<Option<(ExactScalar, BigRational)>> {
    let mq = q(m as u128);
    match f.spec() {
        FiltrationSpec::Power(base) => {
            if base.is_zero() {
                return Ok(None);
            }
            let nu = base.generators().iter().map(|g| g.dot(w)).collect::<Result<Vec<_>>>()?.into_iter().min().unwrap();
            Ok(Some((ExactScalar::rational(q(nu) * &mq), BigRational::zero())))
        }
        FiltrationSpec::Template(gens) => {
            // Per generator: w · g(N) >= S_j N + T_j for N >= 1.
            let mut per_gen = Vec::with_capacity(gens.len());
            for g in gens {
                let mut s = ExactScalar::integer(0);
                let mut t = BigRational::zero();
                for (e, &wk) in g.iter().zip(w) {
                    if wk == 0 {
                        continue;
                    }
                    let Some((sk, ck)) = e.lower_linear_bound() else { return Ok(None) };
                    let wq = q(wk as u128);
                    let Some(sum) = add_scalars(&s, &sk.scale(&wq)) else { return Ok(None) };
                    s = sum;
                    t += ck * wq;
                }
                per_gen.push((s, t));
            }
            if per_gen.is_empty() {
                return Ok(None);
            }
            let min_t = per_gen.iter().map(|(_, t)| t.clone()).min().unwrap();
            if per_gen.iter().all(|(s, _)| s.is_rational()) {
                let slopes: Vec<&BigRational> = per_gen.iter().map(|(s, _)| s.as_rational().unwrap()).collect();
                let min_s = slopes.iter().min().copied().unwrap().clone();
                // S_j r m + T_j >= minS r m + (S_j - minS) m + T_j for r >= 1.
                let c = per_gen.iter().zip(&slopes).map(|((_, t), s)| (*s - &min_s) * &mq + t).min().unwrap();
                Ok(Some((ExactScalar::rational(min_s * &mq), c)))
            } else if per_gen.windows(2).all(|p| p[0].0 == p[1].0) {
                Ok(Some((per_gen[0].0.scale(&mq), min_t)))
            } else {
                Ok(None)
            }
        }
        _ => Ok(None),
    }
}

/// `r (w·a) < s r + c` for all `r >= 1`.
fn excludes(wa: u128, s: &ExactScalar, c: &BigRational) -> Result<bool> {
    let waq = q(wa);
    Ok(match s.cmp_rational(&waq)? {
        Ordering::Greater => s.cmp_rational(&(&waq - c))? == Ordering::Greater,
        Ordering::Equal => c.is_positive(),
        Ordering::Less => false,
    })
}

/// Is `x^a t^m` integral over the Rees algebra of `f`?
///
/// Discrete valued filtrations have integrally closed Rees algebras, so the
/// answer there is plain membership `a ∈ I_m`, and a failing valuation is
/// the certificate. Otherwise `r a ∈ closure(I_{rm})` is tried for
/// `r <= r_max`, then linear exclusion certificates over 0/1 weights and
/// the separating weight of the degree-`m` program.
pub fn filtration_integral_member(f: &Filtration, a: &Exponent, m: u64, r_max: u64) -> Result<Membership> {
    f.context().check(a)?;
    if m == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    if let FiltrationSpec::DiscreteValued(vals) = f.spec() {
        if f.ideal_at(m)?.contains(a)? {
            return Ok(Membership::Yes { r: 1 });
        }
        for (nu, mult) in vals {
            let need = mult.ceil_mul(m)?;
            if BigInt::from(nu.value(a)?) < need {
                return Ok(Membership::No(NoCertificate {
                    degree: m,
                    monomial: a.clone(),
                    weight: nu.weights().to_vec(),
                    slope: mult.scale(&q(m as u128)),
                    intercept: BigRational::zero(),
                }));
            }
        }
        unreachable!("a point outside the intersection violates some valuation");
    }
    for r in 1..=r_max {
        let ra = a.checked_scale(r)?;
        if np_membership(&f.ideal_at(r * m)?, &ra)? {
            return Ok(Membership::Yes { r });
        }
    }
    let d = f.dimension();
    let mut candidates: Vec<Vec<u64>> =
        (1u64..(1 << d)).map(|mask| (0..d).map(|k| (mask >> k) & 1).collect()).collect();
    if let NpDecision::Separated(w) = np_decide(&f.ideal_at(m)?, a)? {
        if !candidates.contains(&w) {
            candidates.push(w);
        }
    }
    for w in candidates {
        let Some((s, c)) = lower_bound(f, &w, m)? else { continue };
        if excludes(a.dot(&w)?, &s, &c)? {
            return Ok(Membership::No(NoCertificate {
                degree: m,
                monomial: a.clone(),
                weight: w,
                slope: s,
                intercept: c,
            }));
        }
    }
    Ok(Membership::Unknown)
}

/// Which inclusion a comparison step tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// A generator of the first filtration against the second's closure.
    FirstInSecond,
    SecondInFirst,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unresolved {
    pub degree: u64,
    pub monomial: Exponent,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum ClosureVerdict {
    EqualUpToBound { n_max: u64, r_max: u64, max_r_used: u64 },
    ProvenDifferentAt { degree: u64, monomial: Exponent, side: Side, certificate: NoCertificate },
    Inconclusive { unresolved: Vec<Unresolved> },
}

/// Compares the integral closures of the Rees algebras of `f` and `g` in
/// degrees `1..=n_max`, generator by generator.
pub fn rees_closure_compare(f: &Filtration, g: &Filtration, n_max: u64, r_max: u64) -> Result<ClosureVerdict> {
    if f.dimension() != g.dimension() {
        return Err(Error::DimensionMismatch { expected: f.dimension(), found: g.dimension() });
    }
    let per_degree: Vec<Vec<(Exponent, Side, Membership)>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut out = Vec::new();
            for (src, dst, side) in [(f, g, Side::FirstInSecond), (g, f, Side::SecondInFirst)] {
                for a in src.ideal_at(n)?.generators() {
                    out.push((a.clone(), side, filtration_integral_member(dst, a, n, r_max)?));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut unresolved = Vec::new();
    let mut max_r_used = 0;
    for (n, results) in (1..=n_max).zip(per_degree) {
        for (a, side, m) in results {
            match m {
                Membership::Yes { r } => max_r_used = max_r_used.max(r),
                Membership::No(certificate) => {
                    return Ok(ClosureVerdict::ProvenDifferentAt { degree: n, monomial: a, side, certificate })
                }
                Membership::Unknown => unresolved.push(Unresolved { degree: n, monomial: a, side }),
            }
        }
    }
    if unresolved.is_empty() {
        Ok(ClosureVerdict::EqualUpToBound { n_max, r_max, max_r_used })
    } else {
        Ok(ClosureVerdict::Inconclusive { unresolved })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{MonomialIdeal, RingContext};
    use crate::valuation::MonomialValuation;
    use std::sync::Arc;

    fn ctx2() -> Arc<RingContext> {
        RingContext::with_dimension(2).unwrap()
    }

    #[test]
    fn membership_examples() {
        let c = ctx2();
        let i_tau = Filtration::template(&c, &[&["2", "0"], &["1", "2*n"]]).unwrap();
        for n in 1..=10 {
            assert_eq!(filtration_integral_member(&i_tau, &[1, n].into(), n, 4).unwrap(), Membership::Yes { r: 2 });
            for g in i_tau.ideal_at(n).unwrap().generators() {
                assert_eq!(filtration_integral_member(&i_tau, g, n, 4).unwrap(), Membership::Yes { r: 1 });
            }
        }
        let j = Filtration::template(&c, &[&["n+1", "0"], &["n", "1"]]).unwrap();
        for n in 1..=5 {
            match filtration_integral_member(&j, &[n, 0].into(), n, 4).unwrap() {
                Membership::No(cert) => {
                    assert_eq!(cert.weight, vec![1, 1]);
                    assert_eq!(cert.slope, ExactScalar::integer(n));
                    assert_eq!(cert.intercept, rational::from_u64(1));
                    assert!(cert.reverify(&j, 100).unwrap());
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn discrete_valued_targets_use_plain_containment() {
        let c = ctx2();
        let f = Filtration::discrete_valued(
            &c,
            vec![
                (MonomialValuation::new(vec![1, 0]).unwrap(), ExactScalar::integer(3)),
                (MonomialValuation::new(vec![1, 1]).unwrap(), ExactScalar::integer(6)),
            ],
        )
        .unwrap();
        assert_eq!(filtration_integral_member(&f, &[3, 3].into(), 1, 2).unwrap(), Membership::Yes { r: 1 });
        match filtration_integral_member(&f, &[3, 2].into(), 1, 2).unwrap() {
            Membership::No(cert) => {
                assert_eq!(cert.weight, vec![1, 1]);
                assert!(cert.reverify(&f, 100).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let pi =
            Filtration::discrete_valued(&c, vec![(MonomialValuation::new(vec![1, 0]).unwrap(), ExactScalar::pi())])
                .unwrap();
        match filtration_integral_member(&pi, &[21, 0].into(), 7, 2).unwrap() {
            Membership::No(cert) => assert!(cert.reverify(&pi, 100).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compare_examples() {
        let c = ctx2();
        let i_tau = Filtration::template(&c, &[&["2", "0"], &["1", "2*n"]]).unwrap();
        let j = Filtration::template(&c, &[&["2", "0"], &["1", "n"]]).unwrap();
        match rees_closure_compare(&i_tau, &j, 20, 4).unwrap() {
            ClosureVerdict::EqualUpToBound { max_r_used, .. } => assert!(max_r_used <= 2),
            other => panic!("{other:?}"),
        }
        let x = Filtration::template(&c, &[&["n", "0"]]).unwrap();
        let jj = Filtration::template(&c, &[&["n+1", "0"], &["n", "1"]]).unwrap();
        match rees_closure_compare(&x, &jj, 5, 4).unwrap() {
            ClosureVerdict::ProvenDifferentAt { degree, monomial, side, certificate } => {
                assert_eq!((degree, monomial, side), (1, Exponent::from([1, 0]), Side::FirstInSecond));
                assert_eq!(certificate.weight, vec![1, 1]);
                let text = serde_json::to_string(&certificate).unwrap();
                let back: NoCertificate = serde_json::from_str(&text).unwrap();
                assert!(back.reverify(&jj, 100).unwrap());
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            rees_closure_compare(&j, &j, 10, 2).unwrap(),
            ClosureVerdict::EqualUpToBound { max_r_used: 1, .. }
        ));
        let m = Filtration::power(MonomialIdeal::maximal(&c));
        assert!(matches!(rees_closure_compare(&m, &m, 5, 2).unwrap(), ClosureVerdict::EqualUpToBound { .. }));
    }
}
