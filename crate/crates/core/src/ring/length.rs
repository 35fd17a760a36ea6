use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Exponent, MonomialIdeal};
use crate::{Error, Result};

/// Length of a module: a nonnegative integer or infinite.
///
/// Serialized as a decimal string or `"inf"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(BigUint),
    Infinite,
}

impl Length {
    pub fn finite(v: u64) -> Self {
        Length::Finite(BigUint::from(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn value(&self) -> Option<&BigUint> {
        match self {
            Length::Finite(v) => Some(v),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(v) => write!(f, "{v}"),
            Length::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Length {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(Length::Infinite),
            t => t.parse().map(Length::Finite).map_err(|_| Error::Parse(format!("invalid length {s:?}"))),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn check_pair(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<()> {
    if j.dimension() != i.dimension() {
        return Err(Error::DimensionMismatch { expected: j.dimension(), found: i.dimension() });
    }
    if let Some(g) = j.first_outside(i)? {
        return Err(Error::NotContained { witness: i.context().format_monomial(&g) });
    }
    Ok(())
}

/// `λ(J/I)` for `I ⊆ J`.
///
/// Finite exactly when `J ⊆ sat(I)`. Two-variable inputs are counted column
/// by column along the staircase; other dimensions go through
/// [`quotient_length_by_enumeration`].
pub fn quotient_length(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<Length> {
    check_pair(j, i)?;
    if j == i {
        return Ok(Length::Finite(BigUint::zero()));
    }
    match j.dimension() {
        1 => Ok(length_1d(j, i)),
        2 => length_2d(j, i),
        _ => enumerate(j, i),
    }
}

/// `λ(R/I)`.
pub fn colength(i: &MonomialIdeal) -> Result<Length> {
    quotient_length(&MonomialIdeal::unit(i.context()), i)
}

/// `λ(J/I)` by counting the monomials of `J \ I` inside a certified degree
/// bound, in any dimension.
///
/// If `J ⊆ sat(I)`, the least `k` with `m^k J ⊆ I` is found by iterating
/// `K <- K : m` from `K = I`; every monomial of `J \ I` then has total degree
/// below `k` plus the largest generator degree of `J`.
pub fn quotient_length_by_enumeration(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<Length> {
    check_pair(j, i)?;
    enumerate(j, i)
}

fn length_1d(j: &MonomialIdeal, i: &MonomialIdeal) -> Length {
    match (j.generators().first(), i.generators().first()) {
        (None, _) => Length::finite(0),
        (Some(_), None) => Length::Infinite,
        (Some(a), Some(b)) => Length::finite(b.coords()[0] - a.coords()[0]),
    }
}

/// Staircase profile of a two-variable ideal: breakpoints `(x, β)` where
/// `β(a)` is the least `y` with `(a, y)` in the ideal, for `a >= x` up to the
/// next breakpoint. Sorted by increasing `x`, strictly decreasing `β`.
fn profile(i: &MonomialIdeal) -> Vec<(u64, u64)> {
    // Canonically sorted minimal generators of a 2-variable ideal are ordered
    // by degree, not by x; resort.
    let mut v: Vec<(u64, u64)> = i.generators().iter().map(|g| (g.coords()[0], g.coords()[1])).collect();
    v.sort_unstable();
    v
}

fn beta_at(p: &[(u64, u64)], x: u64) -> Option<u64> {
    let idx = p.partition_point(|&(gx, _)| gx <= x);
    if idx == 0 {
        None
    } else {
        Some(p[idx - 1].1)
    }
}

fn length_2d(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<Length> {
    let (pj, pi) = (profile(j), profile(i));
    if pj.is_empty() {
        return Ok(Length::finite(0));
    }
    if pi.is_empty() {
        return Ok(Length::Infinite);
    }
    // Past the last breakpoint both profiles are constant; the columns there
    // contribute infinitely often unless the tails agree.
    if pi.last().unwrap().1 != pj.last().unwrap().1 {
        return Ok(Length::Infinite);
    }
    let mut xs: Vec<u64> = pj.iter().chain(&pi).map(|p| p.0).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut total: u128 = 0;
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let Some(bj) = beta_at(&pj, x0) else { continue };
        let height = match beta_at(&pi, x0) {
            Some(bi) => bi - bj,
            None => return Ok(Length::Infinite),
        };
        let cells = (height as u128).checked_mul((x1 - x0) as u128).ok_or(Error::Overflow("staircase count"))?;
        total = total.checked_add(cells).ok_or(Error::Overflow("staircase count"))?;
    }
    Ok(Length::Finite(BigUint::from(total)))
}

fn enumerate(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<Length> {
    if j.is_zero() {
        return Ok(Length::finite(0));
    }
    if !i.saturate().contains_ideal(j)? {
        return Ok(Length::Infinite);
    }
    let ctx = i.context();
    let m = MonomialIdeal::maximal(ctx);
    let maxdeg = i.max_degree().max(j.max_degree());
    let k_max = 10 * maxdeg.max(1) as u64;
    let mut k = 0u64;
    let mut colon = i.clone();
    while !colon.contains_ideal(j)? {
        k += 1;
        if k > k_max {
            return Err(Error::Stabilization { k_max });
        }
        colon = colon.colon(&m)?;
    }
    let bound = u64::try_from(k as u128 + j.max_degree()).map_err(|_| Error::Overflow("degree bound"))?;
    let d = ctx.dimension();
    let mut count: u128 = 0;
    let mut cur = vec![0u64; d];
    visit_simplex(&mut cur, 0, bound, &mut |a| {
        let e = Exponent::new(a.to_vec());
        if j.contains_unchecked(&e) && !i.contains_unchecked(&e) {
            count += 1;
        }
    });
    Ok(Length::Finite(BigUint::from(count)))
}

/// Calls `f` on every exponent with total degree `< bound`.
pub(crate) fn visit_simplex(cur: &mut Vec<u64>, pos: usize, bound: u64, f: &mut impl FnMut(&[u64])) {
    if pos == cur.len() {
        f(cur);
        return;
    }
    let used: u64 = cur[..pos].iter().sum();
    for a in 0..bound.saturating_sub(used) {
        cur[pos] = a;
        visit_simplex(cur, pos + 1, bound, f);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{minimalize, RingContext};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ideal(ctx: &Arc<RingContext>, g: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_coords(ctx, g).unwrap()
    }

    #[test]
    fn length_serializes_as_string() {
        assert_eq!(serde_json::to_string(&Length::finite(12)).unwrap(), "\"12\"");
        assert_eq!(serde_json::to_string(&Length::Infinite).unwrap(), "\"inf\"");
        let back: Length = serde_json::from_str("\"123456789012345678901234567890\"").unwrap();
        assert_eq!(back.to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<Length>("\"-1\"").is_err());
    }

    #[test]
    fn quotient_length_examples() {
        let c = RingContext::with_dimension(2).unwrap();
        assert_eq!(
            quotient_length(&ideal(&c, &[&[1, 0]]), &ideal(&c, &[&[2, 0], &[1, 1]])).unwrap(),
            Length::finite(1)
        );
        let x4 = ideal(&c, &[&[4, 0]]);
        let pi1 = x4.intersect(&MonomialIdeal::maximal_power(&c, 7)).unwrap();
        assert_eq!(quotient_length(&x4, &pi1).unwrap(), Length::finite(6));
        assert_eq!(quotient_length(&x4, &pi1), quotient_length_by_enumeration(&x4, &pi1));
        assert_eq!(quotient_length(&ideal(&c, &[&[1, 0]]), &ideal(&c, &[&[2, 0]])).unwrap(), Length::Infinite);
        let err = quotient_length(&ideal(&c, &[&[2, 0]]), &ideal(&c, &[&[1, 0]])).unwrap_err();
        assert!(matches!(err, Error::NotContained { .. }));
    }

    #[test]
    fn colength_examples() {
        let c = RingContext::with_dimension(2).unwrap();
        assert_eq!(colength(&MonomialIdeal::maximal_power(&c, 2)).unwrap(), Length::finite(3));
        assert_eq!(colength(&ideal(&c, &[&[2, 0], &[1, 1], &[0, 3]])).unwrap(), Length::finite(4));
        assert_eq!(colength(&ideal(&c, &[&[1, 0]])).unwrap(), Length::Infinite);
        assert_eq!(colength(&MonomialIdeal::unit(&c)).unwrap(), Length::finite(0));
        assert_eq!(colength(&MonomialIdeal::zero(&c)).unwrap(), Length::Infinite);
        let c1 = RingContext::with_dimension(1).unwrap();
        assert_eq!(colength(&ideal(&c1, &[&[5]])).unwrap(), Length::finite(5));
        let c3 = RingContext::with_dimension(3).unwrap();
        assert_eq!(colength(&MonomialIdeal::maximal_power(&c3, 3)).unwrap(), Length::finite(10));
    }

    #[test]
    fn colength_of_maximal_powers() {
        let c = RingContext::with_dimension(2).unwrap();
        for k in 0..=50u64 {
            let expected = k * (k + 1) / 2;
            let m = MonomialIdeal::maximal_power(&c, k);
            assert_eq!(colength(&m).unwrap(), Length::finite(expected), "k = {k}");
        }
    }

    /// Count points of `J \ I` in a box one step beyond every generator
    /// coordinate; a counted point on the outer face means the region is
    /// unbounded in that direction.
    fn box_oracle(j: &MonomialIdeal, i: &MonomialIdeal) -> Length {
        let d = j.dimension();
        let gens: Vec<&Exponent> = j.generators().iter().chain(i.generators()).collect();
        let k: Vec<u64> = (0..d).map(|t| gens.iter().map(|g| g.coords()[t]).max().unwrap_or(0) + 1).collect();
        let mut count = 0u64;
        let mut unbounded = false;
        let mut cur = vec![0u64; d];
        fn rec(t: usize, k: &[u64], cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
            if t == k.len() {
                f(cur);
                return;
            }
            for a in 0..=k[t] {
                cur[t] = a;
                rec(t + 1, k, cur, f);
            }
        }
        rec(0, &k, &mut cur, &mut |a| {
            let e = Exponent::new(a.to_vec());
            let inside = j.generators().iter().any(|g| g.divides(&e)) && !i.generators().iter().any(|g| g.divides(&e));
            if inside {
                count += 1;
                if a.iter().zip(&k).any(|(x, b)| x == b) {
                    unbounded = true;
                }
            }
        });
        if unbounded {
            Length::Infinite
        } else {
            Length::finite(count)
        }
    }

    fn arb_nested() -> impl Strategy<Value = (MonomialIdeal, MonomialIdeal)> {
        (1usize..=3).prop_flat_map(|d| {
            let gens = || prop::collection::vec(prop::collection::vec(0u64..5, d), 0..5);
            (gens(), gens()).prop_map(move |(a, b)| {
                let ctx = RingContext::with_dimension(d).unwrap();
                let j = minimalize(a.into_iter().map(Exponent::new).collect(), &ctx).unwrap();
                let extra = minimalize(b.into_iter().map(Exponent::new).collect(), &ctx).unwrap();
                // I = J * extra + (J ∩ m^3) keeps I inside J.
                let i = j
                    .product(&extra)
                    .unwrap()
                    .sum(&j.intersect(&MonomialIdeal::maximal_power(&ctx, 3)).unwrap())
                    .unwrap();
                (j, i)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn quotient_length_matches_box_oracle((j, i) in arb_nested()) {
            let expected = box_oracle(&j, &i);
            prop_assert_eq!(quotient_length(&j, &i).unwrap(), expected.clone());
            prop_assert_eq!(quotient_length_by_enumeration(&j, &i).unwrap(), expected.clone());
            prop_assert_eq!(expected.is_finite(), i.saturate().contains_ideal(&j).unwrap());
        }
    }
}
