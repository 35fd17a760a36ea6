//! Property `A(c)`, analytic spread certificates and the toric rank bound.

mod rank;
mod spread;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use rank::{lattice_rank, toric_rank_bound, RankBound};
pub use spread::{
    spread_max_test, spread_zero_test, GeneratorCertificate, MaxStatus, SpreadMaxResult, SpreadZeroResult,
};

use crate::filtration::Filtration;
use crate::ring::{Exponent, MonomialIdeal};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AcVerdict {
    HoldsUpTo {
        n_max: u64,
    },
    /// `witness ∈ (I_n : m^∞) ∩ m^{cn}` but `witness ∉ I_n`.
    Fails {
        n: u64,
        witness: Exponent,
        witness_text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcReport {
    pub c: u64,
    pub n_max: u64,
    #[serde(flatten)]
    pub verdict: AcVerdict,
}

impl AcReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, AcVerdict::HoldsUpTo { .. })
    }

    /// Re-checks a failure witness against `f`; a holding report is
    /// trivially consistent.
    pub fn reverify(&self, f: &Filtration) -> Result<bool> {
        match &self.verdict {
            AcVerdict::HoldsUpTo { .. } => Ok(true),
            AcVerdict::Fails { n, witness, .. } => {
                let i = f.ideal_at(*n)?;
                Ok(i.saturate().contains(witness)?
                    && witness.degree() >= (self.c as u128) * (*n as u128)
                    && !i.contains(witness)?)
            }
        }
    }
}

/// Compares `(I_n : m^∞) ∩ m^{cn}` with `I_n ∩ m^{cn}` for `n = 1..=n_max`.
#[allow(non_snake_case)]
pub fn check_Ac(f: &Filtration, c: u64, n_max: u64) -> Result<AcReport> {
    if c == 0 {
        return Err(Error::InvalidArgument("c must be positive".into()));
    }
    let ctx = f.context().clone();
    let ideals = f.ideals(n_max)?;
    let witnesses: Vec<Option<Exponent>> = ideals
        .par_iter()
        .enumerate()
        .map(|(k, i)| {
            let n = k as u64 + 1;
            let mc = MonomialIdeal::maximal_power(&ctx, c.checked_mul(n).ok_or(Error::Overflow("c * n"))?);
            let lhs = i.saturate().intersect(&mc)?;
            let rhs = i.intersect(&mc)?;
            rhs.first_outside(&lhs)
        })
        .collect::<Result<_>>()?;
    let verdict = match witnesses.into_iter().enumerate().find_map(|(k, w)| w.map(|w| (k as u64 + 1, w))) {
        Some((n, witness)) => AcVerdict::Fails { n, witness_text: ctx.format_monomial(&witness), witness },
        None => AcVerdict::HoldsUpTo { n_max },
    };
    Ok(AcReport { c, n_max, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingContext;
    use std::sync::Arc;

    fn ctx2() -> Arc<RingContext> {
        RingContext::with_dimension(2).unwrap()
    }

    fn k_family(a: u64) -> Filtration {
        let e = format!("{a}*n");
        Filtration::template(&ctx2(), &[&["2", "0"], &["1", &e]]).unwrap()
    }

    #[test]
    fn ac_examples() {
        let r = check_Ac(&k_family(1), 2, 50).unwrap();
        assert!(r.holds());
        let r = check_Ac(&k_family(2), 2, 10).unwrap();
        assert!(!r.holds());
        assert!(r.reverify(&k_family(2)).unwrap());

        let c = ctx2();
        let j = Filtration::power(MonomialIdeal::from_coords(&c, &[&[3, 0], &[2, 1], &[1, 2]]).unwrap());
        let r = check_Ac(&j, 1, 5).unwrap();
        match &r.verdict {
            AcVerdict::Fails { n, witness_text, .. } => {
                assert_eq!(*n, 1);
                assert_eq!(witness_text, "x");
            }
            other => panic!("{other:?}"),
        }
        assert!(r.reverify(&j).unwrap());
        assert!(check_Ac(&j, 0, 5).is_err());
        let i = Filtration::template(&c, &[&["3*n", "0"]]).unwrap();
        assert!(check_Ac(&i, 1, 50).unwrap().holds());
    }

    #[test]
    fn ac_is_monotone_in_c() {
        for a in 1..=3 {
            let f = k_family(a);
            let verdicts: Vec<bool> = (1..=6).map(|c| check_Ac(&f, c, 30).unwrap().holds()).collect();
            for c in 0..5 {
                assert!(!verdicts[c] || verdicts[c + 1]);
            }
        }
    }
}
