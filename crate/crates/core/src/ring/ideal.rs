use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, Serializer};

use super::{Exponent, RingContext};
use crate::{Error, Result};

/// Binary operations on ideals that yield their result by generator
/// arithmetic alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Product,
}

/// A monomial ideal, stored as its canonical list of minimal generators.
#[derive(Clone)]
pub struct MonomialIdeal {
    ctx: Arc<RingContext>,
    gens: Vec<Exponent>,
}

/// Reduce a generator list to the antichain of minimal elements, sorted in
/// the canonical order of [`Exponent`].
pub fn minimalize(gens: Vec<Exponent>, ctx: &Arc<RingContext>) -> Result<MonomialIdeal> {
    for g in &gens {
        ctx.check(g)?;
    }
    let gens = match ctx.dimension() {
        1 => gens.into_iter().min().into_iter().collect(),
        2 => minimal_2d(gens),
        _ => minimal_general(gens),
    };
    Ok(MonomialIdeal { ctx: ctx.clone(), gens })
}

fn minimal_general(mut gens: Vec<Exponent>) -> Vec<Exponent> {
    gens.sort_unstable();
    gens.dedup();
    let mut kept: Vec<Exponent> = Vec::with_capacity(gens.len());
    for g in gens {
        // Any divisor of g precedes it in the degree-compatible order.
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept
}

fn minimal_2d(mut gens: Vec<Exponent>) -> Vec<Exponent> {
    gens.sort_unstable_by(|a, b| a.coords().cmp(b.coords()));
    let mut kept = Vec::new();
    let mut best_y = u64::MAX;
    let mut first = true;
    for g in gens {
        let y = g.coords()[1];
        if first || y < best_y {
            best_y = y;
            first = false;
            kept.push(g);
        }
    }
    kept.sort_unstable();
    kept
}

impl MonomialIdeal {
    pub fn new(ctx: &Arc<RingContext>, gens: Vec<Exponent>) -> Result<Self> {
        minimalize(gens, ctx)
    }

    /// Build from raw coordinate vectors; convenient in tests and fixtures.
    pub fn from_coords(ctx: &Arc<RingContext>, gens: &[&[u64]]) -> Result<Self> {
        minimalize(gens.iter().map(|g| Exponent::new(g.to_vec())).collect(), ctx)
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Self { ctx: ctx.clone(), gens: Vec::new() }
    }

    pub fn unit(ctx: &Arc<RingContext>) -> Self {
        Self { ctx: ctx.clone(), gens: vec![Exponent::zeros(ctx.dimension())] }
    }

    /// The maximal ideal `m = (x_1, ..., x_d)`.
    pub fn maximal(ctx: &Arc<RingContext>) -> Self {
        let d = ctx.dimension();
        let mut gens: Vec<Exponent> = (0..d).map(|i| Exponent::unit_vector(d, i)).collect();
        gens.sort_unstable();
        Self { ctx: ctx.clone(), gens }
    }

    /// `m^k`, generated by all monomials of degree `k`.
    pub fn maximal_power(ctx: &Arc<RingContext>, k: u64) -> Self {
        let d = ctx.dimension();
        let mut gens = Vec::new();
        let mut cur = vec![0u64; d];
        fn rec(i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Exponent>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Exponent::new(cur.clone()));
                return;
            }
            for a in 0..=left {
                cur[i] = a;
                rec(i + 1, left - a, cur, out);
            }
        }
        rec(0, k, &mut cur, &mut gens);
        gens.sort_unstable();
        Self { ctx: ctx.clone(), gens }
    }

    pub fn principal(ctx: &Arc<RingContext>, g: Exponent) -> Result<Self> {
        ctx.check(&g)?;
        Ok(Self { ctx: ctx.clone(), gens: vec![g] })
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn dimension(&self) -> usize {
        self.ctx.dimension()
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_zero()
    }

    /// Largest total degree of a minimal generator (0 for the zero ideal).
    pub fn max_degree(&self) -> u128 {
        self.gens.iter().map(Exponent::degree).max().unwrap_or(0)
    }

    /// Every variable has a pure power among the generators.
    pub fn is_m_primary(&self) -> bool {
        let d = self.dimension();
        (0..d).all(|i| self.gens.iter().any(|g| g.support().all(|j| j == i)))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: other.dimension() });
        }
        Ok(())
    }

    pub fn contains(&self, a: &Exponent) -> Result<bool> {
        self.ctx.check(a)?;
        Ok(self.contains_unchecked(a))
    }

    pub(crate) fn contains_unchecked(&self, a: &Exponent) -> bool {
        self.gens.iter().any(|g| g.divides(a))
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Self) -> Result<bool> {
        self.compatible(other)?;
        Ok(other.gens.iter().all(|g| self.contains_unchecked(g)))
    }

    /// A generator of `other` outside `self`, if `other ⊄ self`.
    pub fn first_outside(&self, other: &Self) -> Result<Option<Exponent>> {
        self.compatible(other)?;
        Ok(other.gens.iter().find(|g| !self.contains_unchecked(g)).cloned())
    }

    pub fn combine(&self, other: &Self, op: Combine) -> Result<Self> {
        match op {
            Combine::Sum => self.sum(other),
            Combine::Product => self.product(other),
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        minimalize(gens, &self.ctx)
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.checked_add(b)?);
            }
        }
        minimalize(gens, &self.ctx)
    }

    /// `I^n`; `n = 0` gives the unit ideal.
    pub fn power(&self, n: u64) -> Result<Self> {
        let mut result = Self::unit(&self.ctx);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base)?;
            }
        }
        Ok(result)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        if self.dimension() == 2 {
            return Ok(Self { ctx: self.ctx.clone(), gens: intersect_2d(&self.gens, &other.gens) });
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        minimalize(gens, &self.ctx)
    }

    /// Intersection through all pairwise lcms, without the two-variable
    /// staircase shortcut.
    pub fn intersect_pairwise(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        minimalize(gens, &self.ctx)
    }

    /// `I : x^g`.
    pub fn colon_monomial(&self, g: &Exponent) -> Result<Self> {
        self.ctx.check(g)?;
        minimalize(self.gens.iter().map(|a| a.colon(g)).collect(), &self.ctx)
    }

    /// `I : J` for a nonzero monomial ideal `J`.
    pub fn colon(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let (first, rest) = other.gens.split_first().ok_or(Error::ZeroIdeal("colon"))?;
        let mut acc = self.colon_monomial(first)?;
        for g in rest {
            acc = acc.intersect(&self.colon_monomial(g)?)?;
        }
        Ok(acc)
    }

    /// `I : x_i^∞`: drop the `i`-th coordinate of every generator.
    pub fn colon_variable_infinity(&self, i: usize) -> Self {
        let gens = self.gens.iter().map(|g| g.with_coord(i, 0)).collect();
        minimalize(gens, &self.ctx).expect("dimension preserved")
    }

    /// `I : m^∞`.
    ///
    /// For monomial ideals this equals `⋂_i (I : x_i^∞)`: if `x_i^{k_i} f ∈ I`
    /// for every `i` then every monomial of degree `Σ k_i` times `f` lies in `I`.
    pub fn saturate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut acc = self.colon_variable_infinity(0);
        for i in 1..self.dimension() {
            acc = acc.intersect(&self.colon_variable_infinity(i)).expect("same context");
        }
        acc
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// Extension to the localization at the face prime on `vars`: the other
    /// variables become units and their coordinates are dropped.
    pub fn localize(&self, vars: &[usize]) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::EmptyVariableSet);
        }
        let d = self.dimension();
        if let Some(&bad) = vars.iter().find(|&&i| i >= d) {
            return Err(Error::InvalidArgument(format!("variable index {bad} out of range for d = {d}")));
        }
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        vars.dedup();
        let ctx = self.ctx.restrict(&vars)?;
        minimalize(self.gens.iter().map(|g| g.project(&vars)).collect(), &ctx)
    }

    /// `dim R/I` for a proper nonzero ideal: `d` minus the size of a smallest
    /// variable set meeting the support of every generator.
    pub fn dim_quotient(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroIdeal("dim_quotient"));
        }
        if self.is_unit() {
            return Err(Error::UnitIdeal("dim_quotient"));
        }
        let d = self.dimension();
        for k in 0..=d {
            if !self.covers_of_size(k).is_empty() {
                return Ok(d - k);
            }
        }
        unreachable!("the full variable set covers every non-unit generator")
    }

    /// All `k`-element variable sets meeting the support of every generator,
    /// i.e. the face primes of height `k` containing `I`.
    pub fn covers_of_size(&self, k: usize) -> Vec<Vec<usize>> {
        let d = self.dimension();
        let masks: Vec<u64> = self.gens.iter().map(|g| g.support().fold(0u64, |m, i| m | (1 << i))).collect();
        let mut out = Vec::new();
        let mut subset = Vec::with_capacity(k);
        fn rec(start: usize, d: usize, k: usize, subset: &mut Vec<usize>, masks: &[u64], out: &mut Vec<Vec<usize>>) {
            if subset.len() == k {
                let m = subset.iter().fold(0u64, |m, &i| m | (1 << i));
                if masks.iter().all(|g| g & m != 0) {
                    out.push(subset.clone());
                }
                return;
            }
            for i in start..d {
                subset.push(i);
                rec(i + 1, d, k, subset, masks, out);
                subset.pop();
            }
        }
        rec(0, d, k, &mut subset, &masks, &mut out);
        out
    }
}

/// Staircase intersection in two variables. Column `a` of an ideal contains
/// `(a, b)` iff `b >= β(a)`, where `β(a)` is the least `y` among generators
/// with `x <= a`; the intersection has `β = max(β_I, β_J)`.
fn intersect_2d(a: &[Exponent], b: &[Exponent]) -> Vec<Exponent> {
    let by_x = |g: &[Exponent]| {
        let mut v: Vec<(u64, u64)> = g.iter().map(|e| (e.coords()[0], e.coords()[1])).collect();
        v.sort_unstable();
        v
    };
    let (sa, sb) = (by_x(a), by_x(b));
    let mut xs: Vec<u64> = sa.iter().chain(&sb).map(|p| p.0).collect();
    xs.sort_unstable();
    xs.dedup();
    let (mut ia, mut ib) = (0, 0);
    let (mut beta_a, mut beta_b) = (None::<u64>, None::<u64>);
    let mut last: Option<u64> = None;
    let mut out = Vec::new();
    for x in xs {
        while ia < sa.len() && sa[ia].0 <= x {
            beta_a = Some(beta_a.map_or(sa[ia].1, |v| v.min(sa[ia].1)));
            ia += 1;
        }
        while ib < sb.len() && sb[ib].0 <= x {
            beta_b = Some(beta_b.map_or(sb[ib].1, |v| v.min(sb[ib].1)));
            ib += 1;
        }
        if let (Some(ya), Some(yb)) = (beta_a, beta_b) {
            let y = ya.max(yb);
            if last.is_none_or(|l| y < l) {
                out.push(Exponent::new(vec![x, y]));
                last = Some(y);
            }
        }
    }
    out.sort_unstable();
    out
}

impl PartialEq for MonomialIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.dimension() == other.dimension() && self.gens == other.gens
    }
}

impl Eq for MonomialIdeal {}

impl std::hash::Hash for MonomialIdeal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.gens.hash(state);
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.ctx.format_monomial(g))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// JSON form: an array of exponent arrays.
impl Serialize for MonomialIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.gens.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx2() -> Arc<RingContext> {
        RingContext::with_dimension(2).unwrap()
    }

    fn ideal(ctx: &Arc<RingContext>, g: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_coords(ctx, g).unwrap()
    }

    #[test]
    fn minimalize_examples() {
        let c = ctx2();
        assert_eq!(ideal(&c, &[&[2, 0], &[1, 1], &[2, 1]]), ideal(&c, &[&[2, 0], &[1, 1]]));
        assert_eq!(ideal(&c, &[&[2, 0], &[1, 1], &[2, 1]]).generators().len(), 2);
        assert!(ideal(&c, &[]).is_zero());
        let m = ideal(&c, &[&[4, 0], &[3, 1], &[2, 1], &[0, 2]]);
        let gens: Vec<Vec<u64>> = m.generators().iter().map(|g| g.coords().to_vec()).collect();
        assert_eq!(gens, vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
        let err = minimalize(vec![Exponent::new(vec![1, 2, 3])], &c).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn contains_examples() {
        let c = ctx2();
        let i = ideal(&c, &[&[2, 0], &[1, 1]]);
        assert!(i.contains(&[3, 1].into()).unwrap());
        assert!(!i.contains(&[0, 5].into()).unwrap());
        let pi1 = ideal(&c, &[&[4, 0]]).intersect(&MonomialIdeal::maximal_power(&c, 7)).unwrap();
        assert!(pi1.contains(&[4, 3].into()).unwrap());
        assert!(i.contains(&[1, 2, 3].into()).is_err());
    }

    #[test]
    fn sums_products_powers() {
        let c = ctx2();
        let m = MonomialIdeal::maximal(&c);
        assert_eq!(m.product(&m).unwrap(), ideal(&c, &[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(
            ideal(&c, &[&[2, 0]]).combine(&ideal(&c, &[&[0, 2]]), Combine::Sum).unwrap(),
            ideal(&c, &[&[2, 0], &[0, 2]])
        );
        let m2 = ideal(&c, &[&[2, 0], &[1, 1], &[0, 2]]);
        assert_eq!(m2.power(2).unwrap(), ideal(&c, &[&[4, 0], &[3, 1], &[2, 2], &[1, 3], &[0, 4]]));
        assert!(m2.power(0).unwrap().is_unit());
        assert_eq!(m.power(5).unwrap(), MonomialIdeal::maximal_power(&c, 5));
    }

    #[test]
    fn intersection_examples() {
        let c = ctx2();
        assert_eq!(ideal(&c, &[&[1, 0]]).intersect(&ideal(&c, &[&[0, 1]])).unwrap(), ideal(&c, &[&[1, 1]]));
        let pi1 = ideal(&c, &[&[4, 0]]).intersect(&MonomialIdeal::maximal_power(&c, 7)).unwrap();
        assert_eq!(pi1, ideal(&c, &[&[7, 0], &[6, 1], &[5, 2], &[4, 3]]));
        let i = ideal(&c, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.intersect(&MonomialIdeal::unit(&c)).unwrap(), i);
        assert!(i.intersect(&MonomialIdeal::zero(&c)).unwrap().is_zero());
    }

    #[test]
    fn colon_examples() {
        let c = ctx2();
        let i = ideal(&c, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.colon(&ideal(&c, &[&[1, 0]])).unwrap(), MonomialIdeal::maximal(&c));
        assert_eq!(i.colon(&MonomialIdeal::maximal(&c)).unwrap(), ideal(&c, &[&[1, 0]]));
        assert_eq!(i.colon(&MonomialIdeal::unit(&c)).unwrap(), i);
        assert_eq!(i.colon(&MonomialIdeal::zero(&c)), Err(Error::ZeroIdeal("colon")));
    }

    #[test]
    fn saturation_examples() {
        let c = ctx2();
        assert_eq!(ideal(&c, &[&[2, 0], &[1, 1]]).saturate(), ideal(&c, &[&[1, 0]]));
        let c1 = RingContext::with_dimension(1).unwrap();
        assert!(ideal(&c1, &[&[5]]).saturate().is_unit());
        assert!(MonomialIdeal::maximal_power(&c, 4).saturate().is_unit());
        assert!(MonomialIdeal::zero(&c).saturate().is_zero());
        let p = ideal(&c, &[&[1, 0]]);
        assert!(p.is_saturated());
    }

    #[test]
    fn localization_examples() {
        let c = ctx2();
        let pi1 = ideal(&c, &[&[4, 0]]).intersect(&MonomialIdeal::maximal_power(&c, 7)).unwrap();
        let l = pi1.localize(&[0]).unwrap();
        assert_eq!(l.generators(), &[Exponent::new(vec![4])]);
        assert_eq!(l.context().names(), ["x"]);
        let i = ideal(&c, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.localize(&[0]).unwrap().generators(), &[Exponent::new(vec![1])]);
        assert_eq!(i.localize(&[1, 0]).unwrap(), i);
        assert_eq!(i.localize(&[]), Err(Error::EmptyVariableSet));
    }

    #[test]
    fn quotient_dimension_examples() {
        let c = ctx2();
        assert_eq!(ideal(&c, &[&[1, 0]]).dim_quotient().unwrap(), 1);
        assert_eq!(MonomialIdeal::maximal_power(&c, 2).dim_quotient().unwrap(), 0);
        let c3 = RingContext::with_dimension(3).unwrap();
        assert_eq!(ideal(&c3, &[&[1, 1, 0], &[1, 0, 1]]).dim_quotient().unwrap(), 2);
        assert!(MonomialIdeal::unit(&c).dim_quotient().is_err());
        assert!(MonomialIdeal::zero(&c).dim_quotient().is_err());
    }

    fn iterated_saturation(i: &MonomialIdeal) -> MonomialIdeal {
        let m = MonomialIdeal::maximal(i.context());
        let mut cur = i.clone();
        loop {
            let next = cur.colon(&m).unwrap();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn arb_ideal(d: usize, max_gens: usize, max_coord: u64) -> impl Strategy<Value = MonomialIdeal> {
        prop::collection::vec(prop::collection::vec(0..=max_coord, d), 0..=max_gens).prop_map(move |gs| {
            let ctx = RingContext::with_dimension(d).unwrap();
            minimalize(gs.into_iter().map(Exponent::new).collect(), &ctx).unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (MonomialIdeal, MonomialIdeal)> {
        (1usize..=3).prop_flat_map(|d| (arb_ideal(d, 5, 5), arb_ideal(d, 5, 5)))
    }

    fn is_antichain(i: &MonomialIdeal) -> bool {
        let g = i.generators();
        g.iter().enumerate().all(|(a, x)| g.iter().enumerate().all(|(b, y)| a == b || !x.divides(y)))
    }

    proptest! {
        #[test]
        fn minimalize_idempotent_and_order_free(mut gs in prop::collection::vec(prop::collection::vec(0u64..6, 3), 0..8)) {
            let ctx = RingContext::with_dimension(3).unwrap();
            let a = minimalize(gs.iter().cloned().map(Exponent::new).collect(), &ctx).unwrap();
            gs.reverse();
            let b = minimalize(gs.into_iter().map(Exponent::new).collect(), &ctx).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(is_antichain(&a));
            let again = minimalize(a.generators().to_vec(), &ctx).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn saturation_matches_iterated_colon((i, _j) in arb_pair()) {
            let sat = i.saturate();
            prop_assert_eq!(&sat, &iterated_saturation(&i));
            prop_assert!(sat.contains_ideal(&i).unwrap());
            prop_assert_eq!(sat.saturate(), sat);
        }

        #[test]
        fn staircase_intersection_matches_pairwise((i, j) in arb_pair()) {
            prop_assert_eq!(i.intersect(&j).unwrap(), i.intersect_pairwise(&j).unwrap());
        }

        #[test]
        fn product_contains_generator_sums((i, j) in arb_pair()) {
            let p = i.product(&j).unwrap();
            for a in i.generators() {
                for b in j.generators() {
                    prop_assert!(p.contains(&a.checked_add(b).unwrap()).unwrap());
                }
            }
        }

        #[test]
        fn localization_commutes_with_intersection((i, j) in arb_pair(), mask in 1u8..8) {
            let d = i.dimension();
            let vars: Vec<usize> = (0..d).filter(|k| mask & (1 << k) != 0).collect();
            prop_assume!(!vars.is_empty());
            let lhs = i.intersect(&j).unwrap().localize(&vars).unwrap();
            let rhs = i.localize(&vars).unwrap().intersect(&j.localize(&vars).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
