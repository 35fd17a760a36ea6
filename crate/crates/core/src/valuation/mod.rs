//! Monomial valuations and certified ceilings of real multiples.

mod scalar;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use scalar::{pi_interval, ExactScalar, INITIAL_BITS, MAX_BITS};

use crate::ring::{minimalize, Exponent, MonomialIdeal, RingContext};
use crate::{Error, Result};

/// The valuation `ν(x^a) = w · a` of a nonnegative weight vector `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialValuation {
    weights: Vec<u64>,
}

impl MonomialValuation {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::InvalidArgument("valuation weights must not all be zero".into()));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// Variables with positive weight; they generate the center.
    pub fn center(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i] > 0).collect()
    }

    pub fn value(&self, a: &Exponent) -> Result<u128> {
        if a.dim() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: a.dim() });
        }
        a.dot(&self.weights)
    }

    /// `I(ν)_n = { f : ν(f) >= n }`.
    pub fn ideal(&self, ctx: &Arc<RingContext>, n: u64) -> Result<MonomialIdeal> {
        if ctx.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: ctx.dimension(), found: self.dimension() });
        }
        if n == 0 {
            return Ok(MonomialIdeal::unit(ctx));
        }
        let pos = self.center();
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.dimension()];
        self.points(&pos, 0, n, &mut cur, &mut out);
        minimalize(out, ctx)
    }

    /// Lattice points on the positive-weight coordinates with `w · a >= n`
    /// that cannot be lowered in their last coordinate.
    fn points(&self, pos: &[usize], k: usize, remaining: u64, cur: &mut Vec<u64>, out: &mut Vec<Exponent>) {
        let i = pos[k];
        let w = self.weights[i];
        let need = remaining.div_ceil(w);
        if k + 1 == pos.len() {
            cur[i] = need;
            out.push(Exponent::new(cur.clone()));
            cur[i] = 0;
            return;
        }
        for a in 0..=need {
            cur[i] = a;
            let left = remaining.saturating_sub(a.saturating_mul(w));
            if left == 0 {
                out.push(Exponent::new(cur.clone()));
            } else {
                self.points(pos, k + 1, left, cur, out);
            }
        }
        cur[i] = 0;
    }

    /// `ν(I) = min` over generators; the zero ideal has no finite value.
    pub fn of_ideal(&self, i: &MonomialIdeal) -> Result<u128> {
        let mut best: Option<u128> = None;
        for g in i.generators() {
            let v = self.value(g)?;
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        best.ok_or(Error::ZeroIdeal("valuation_of_ideal"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx2() -> Arc<RingContext> {
        RingContext::with_dimension(2).unwrap()
    }

    #[test]
    fn valuation_ideal_examples() {
        let c = ctx2();
        let v = |w: Vec<u64>| MonomialValuation::new(w).unwrap();
        assert_eq!(v(vec![1, 0]).ideal(&c, 3).unwrap(), MonomialIdeal::from_coords(&c, &[&[3, 0]]).unwrap());
        assert_eq!(v(vec![1, 1]).ideal(&c, 2).unwrap(), MonomialIdeal::maximal_power(&c, 2));
        assert_eq!(
            v(vec![1, 2]).ideal(&c, 4).unwrap(),
            MonomialIdeal::from_coords(&c, &[&[4, 0], &[2, 1], &[0, 2]]).unwrap()
        );
        assert!(v(vec![1, 2]).ideal(&c, 0).unwrap().is_unit());
        assert!(MonomialValuation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn valuation_of_ideal_examples() {
        let c = ctx2();
        let i = MonomialIdeal::from_coords(&c, &[&[2, 0], &[1, 1]]).unwrap();
        assert_eq!(MonomialValuation::new(vec![1, 1]).unwrap().of_ideal(&i).unwrap(), 2);
        let y3 = MonomialIdeal::from_coords(&c, &[&[0, 3]]).unwrap();
        assert_eq!(MonomialValuation::new(vec![1, 2]).unwrap().of_ideal(&y3).unwrap(), 6);
        let pi1 = MonomialIdeal::from_coords(&c, &[&[4, 0]])
            .unwrap()
            .intersect(&MonomialIdeal::maximal_power(&c, 7))
            .unwrap();
        assert_eq!(MonomialValuation::new(vec![1, 0]).unwrap().of_ideal(&pi1).unwrap(), 4);
        assert!(MonomialValuation::new(vec![1, 0]).unwrap().of_ideal(&MonomialIdeal::zero(&c)).is_err());
    }

    fn arb_valuation(d: usize) -> impl Strategy<Value = MonomialValuation> {
        prop::collection::vec(0u64..4, d)
            .prop_filter("nonzero", |w| w.iter().any(|&x| x > 0))
            .prop_map(|w| MonomialValuation::new(w).unwrap())
    }

    proptest! {
        #[test]
        fn membership_is_weight_threshold(
            (v, a) in (1usize..=3).prop_flat_map(|d| (arb_valuation(d), prop::collection::vec(0u64..8, d))),
            n in 0u64..15,
        ) {
            let ctx = RingContext::with_dimension(v.dimension()).unwrap();
            let e = Exponent::new(a);
            let inside = v.ideal(&ctx, n).unwrap().contains(&e).unwrap();
            prop_assert_eq!(inside, v.value(&e).unwrap() >= n as u128);
        }

        #[test]
        fn valuation_ideals_form_a_filtration(v in arb_valuation(2), a in 0u64..=30, b in 0u64..=30) {
            let ctx = ctx2();
            let prod = v.ideal(&ctx, a).unwrap().product(&v.ideal(&ctx, b).unwrap()).unwrap();
            prop_assert!(v.ideal(&ctx, a + b).unwrap().contains_ideal(&prod).unwrap());
        }
    }
}
