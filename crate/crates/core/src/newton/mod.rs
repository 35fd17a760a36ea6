//! Newton polyhedra and integral closure of monomial ideals and of Rees
//! algebras of filtrations.
//!
//! `x^a` is integral over a monomial ideal `I` iff `a` lies in the Newton
//! polyhedron `conv(generators) + R^d_{>=0}`. Membership is decided by an
//! exact rational linear program.

mod lp;
mod rees;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use rees::{filtration_integral_member, rees_closure_compare, ClosureVerdict, Membership, NoCertificate, Side};

use crate::ring::{minimalize, Exponent, MonomialIdeal};
use crate::{Error, Result};

fn q(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Outcome of the membership program: a convex combination of generators
/// lying below `a`, or a weight `w >= 0` with `w·a < min_g w·g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NpDecision {
    Member(Vec<BigRational>),
    Separated(Vec<u64>),
}

/// Solves `Σ λ_j g_j <= a, Σ λ_j = 1, λ >= 0` exactly.
pub fn np_decide(i: &MonomialIdeal, a: &Exponent) -> Result<NpDecision> {
    if i.is_zero() {
        return Err(Error::ZeroIdeal("np_membership"));
    }
    i.context().check(a)?;
    let gens = i.generators();
    if let Some(k) = gens.iter().position(|g| g.divides(a)) {
        let mut lambda = vec![BigRational::zero(); gens.len()];
        lambda[k] = BigRational::one();
        return Ok(NpDecision::Member(lambda));
    }
    let d = a.dim();
    let k = gens.len();
    // Columns: λ_1..λ_k, then slacks s_1..s_d.
    let mut rows = Vec::with_capacity(d + 1);
    let mut top = vec![BigRational::zero(); k + d];
    for v in top.iter_mut().take(k) {
        *v = BigRational::one();
    }
    rows.push(top);
    for t in 0..d {
        let mut row = vec![BigRational::zero(); k + d];
        for (j, g) in gens.iter().enumerate() {
            row[j] = q(g.coords()[t]);
        }
        row[k + t] = BigRational::one();
        rows.push(row);
    }
    let mut b = vec![BigRational::one()];
    b.extend(a.coords().iter().map(|&c| q(c)));
    match lp::feasibility(&rows, &b) {
        lp::Feasibility::Feasible(x) => Ok(NpDecision::Member(x[..k].to_vec())),
        lp::Feasibility::Infeasible(y) => {
            // yᵀA <= 0 on slack columns gives y_t <= 0; w = -y is the weight.
            let w: Vec<BigRational> = y[1..].iter().map(|v| -v).collect();
            Ok(NpDecision::Separated(primitive_integer(&w)))
        }
    }
}

/// Scale a nonnegative rational vector to the primitive integer vector on
/// its ray.
fn primitive_integer(w: &[BigRational]) -> Vec<u64> {
    let lcm = w.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = w.iter().map(|v| (v * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| {
            let v = if g.is_zero() { v.clone() } else { v / &g };
            u64::try_from(v).unwrap_or(u64::MAX)
        })
        .collect()
}

/// `x^a ∈ closure(I)`.
pub fn np_membership(i: &MonomialIdeal, a: &Exponent) -> Result<bool> {
    Ok(matches!(np_decide(i, a)?, NpDecision::Member(_)))
}

/// Halfspace `w · x >= c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<u64>,
    pub offset: u128,
}

/// Newton polyhedron of a nonzero monomial ideal.
#[derive(Debug, Clone)]
pub struct NewtonPolyhedron {
    ideal: MonomialIdeal,
}

/// Facet enumeration visits all `d`-subsets of points and rays; beyond this
/// many generators it is refused.
pub const MAX_FACET_GENERATORS: usize = 200;

impl NewtonPolyhedron {
    pub fn new(i: &MonomialIdeal) -> Result<Self> {
        if i.is_zero() {
            return Err(Error::ZeroIdeal("newton_polyhedron"));
        }
        Ok(Self { ideal: i.clone() })
    }

    pub fn contains(&self, a: &Exponent) -> Result<bool> {
        np_membership(&self.ideal, a)
    }

    /// Facet inequalities. Each facet is spanned by generators and
    /// coordinate rays; all candidate hyperplanes through `d` such objects
    /// with a nonnegative normal that support the polyhedron are kept.
    pub fn halfspaces(&self) -> Result<Vec<Halfspace>> {
        let gens = self.ideal.generators();
        if gens.len() > MAX_FACET_GENERATORS {
            return Err(Error::InvalidArgument(format!(
                "facet enumeration limited to {MAX_FACET_GENERATORS} generators, got {}",
                gens.len()
            )));
        }
        let d = self.ideal.dimension();
        let mut out: Vec<Halfspace> = Vec::new();
        for t in 1..=d.min(gens.len()) {
            for pts in subsets(gens.len(), t) {
                for rays in subsets(d, d - t) {
                    let Some(w) = normal(gens, &pts, &rays, d) else { continue };
                    let vals: Vec<u128> = gens.iter().map(|g| g.dot(&w)).collect::<Result<_>>()?;
                    let c = *vals.iter().min().unwrap();
                    if vals[pts[0]] != c {
                        continue;
                    }
                    let h = Halfspace { normal: w, offset: c };
                    if !out.contains(&h) {
                        out.push(h);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
        Ok(out)
    }

    pub fn contains_by_halfspaces(&self, a: &Exponent, hs: &[Halfspace]) -> Result<bool> {
        for h in hs {
            if a.dot(&h.normal)? < h.offset {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Primitive nonnegative normal of the hyperplane through the given points
/// containing the given ray directions, if it is unique and nonnegative.
fn normal(gens: &[Exponent], pts: &[usize], rays: &[usize], d: usize) -> Option<Vec<u64>> {
    let mut m: Vec<Vec<BigRational>> = Vec::new();
    let p0 = gens[pts[0]].coords();
    for &p in &pts[1..] {
        m.push(
            gens[p]
                .coords()
                .iter()
                .zip(p0)
                .map(|(a, b)| BigRational::from_integer(BigInt::from(*a) - BigInt::from(*b)))
                .collect(),
        );
    }
    for &r in rays {
        let mut row = vec![BigRational::zero(); d];
        row[r] = BigRational::one();
        m.push(row);
    }
    let null = nullspace(m, d)?;
    let sign = if null.iter().any(|v| v.is_negative()) {
        if null.iter().any(|v| v.is_positive()) {
            return None;
        }
        -BigRational::one()
    } else {
        BigRational::one()
    };
    let w: Vec<BigRational> = null.iter().map(|v| v * &sign).collect();
    Some(primitive_integer(&w))
}

/// The nullspace vector of a `(d-1) x d` system when the nullspace is a line.
fn nullspace(mut m: Vec<Vec<BigRational>>, d: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for v in m[row].iter_mut() {
            *v /= &pv;
        }
        let prow = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (v, pv) in other.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != d - 1 {
        return None;
    }
    let free = (0..d).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); d];
    v[free] = BigRational::one();
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -m[r][free].clone();
    }
    Some(v)
}

/// The integral closure of `I`: minimal lattice points of its Newton
/// polyhedron.
///
/// Minimal points lie in the box of generator maxima. For each prefix of the
/// first `d - 1` coordinates, the least admissible last coordinate is found
/// by bisection, membership being monotone in it.
pub fn integral_closure(i: &MonomialIdeal) -> Result<MonomialIdeal> {
    if i.is_zero() {
        return Err(Error::ZeroIdeal("integral_closure"));
    }
    let d = i.dimension();
    if d == 1 || i.generators().len() == 1 {
        return Ok(i.clone());
    }
    let bounds: Vec<u64> = (0..d).map(|t| i.generators().iter().map(|g| g.coords()[t]).max().unwrap()).collect();
    let mut found = Vec::new();
    let mut prefix = vec![0u64; d];
    loop {
        let top = bounds[d - 1];
        let at = |y: u64, prefix: &[u64]| {
            let mut v = prefix.to_vec();
            v[d - 1] = y;
            np_membership(i, &Exponent::new(v))
        };
        if at(top, &prefix)? {
            let (mut lo, mut hi) = (0u64, top);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if at(mid, &prefix)? {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let mut v = prefix.clone();
            v[d - 1] = lo;
            found.push(Exponent::new(v));
        }
        // Advance the prefix odometer over coordinates 0..d-1.
        let mut t = 0;
        loop {
            if t == d - 1 {
                return minimalize(found, i.context());
            }
            if prefix[t] < bounds[t] {
                prefix[t] += 1;
                break;
            }
            prefix[t] = 0;
            t += 1;
        }
    }
}
