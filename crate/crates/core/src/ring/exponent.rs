use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exponent vector of a monomial `x^a`.
///
/// Coordinates are `u64`; every operation that can grow a coordinate is
/// checked and reports [`Error::Overflow`] instead of wrapping.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u64>);

impl Exponent {
    pub fn new(coords: Vec<u64>) -> Self {
        Self(coords)
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn unit_vector(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }

    pub fn degree(&self) -> u128 {
        self.0.iter().map(|&c| c as u128).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `self` divides `other`, i.e. `self <= other` componentwise.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &Exponent) -> Result<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("exponent addition")))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn checked_scale(&self, r: u64) -> Result<Exponent> {
        self.0
            .iter()
            .map(|a| a.checked_mul(r).ok_or(Error::Overflow("exponent scaling")))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Componentwise maximum: the exponent of `lcm(x^a, x^b)`.
    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Componentwise `max(a - b, 0)`: generator of `(x^a) : x^b`.
    pub fn colon(&self, other: &Exponent) -> Exponent {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.saturating_sub(*b)).collect())
    }

    pub fn project(&self, vars: &[usize]) -> Exponent {
        Self(vars.iter().map(|&i| self.0[i]).collect())
    }

    pub fn with_coord(&self, i: usize, value: u64) -> Exponent {
        let mut v = self.0.clone();
        v[i] = value;
        Self(v)
    }

    /// Weighted degree `w . a`.
    pub fn dot(&self, weights: &[u64]) -> Result<u128> {
        let mut acc: u128 = 0;
        for (a, w) in self.0.iter().zip(weights) {
            let t = (*a as u128).checked_mul(*w as u128).ok_or(Error::Overflow("weighted degree"))?;
            acc = acc.checked_add(t).ok_or(Error::Overflow("weighted degree"))?;
        }
        Ok(acc)
    }

    /// Indices of the variables that occur in `x^a`.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| i)
    }
}

impl From<Vec<u64>> for Exponent {
    fn from(v: Vec<u64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u64; N]> for Exponent {
    fn from(v: [u64; N]) -> Self {
        Self(v.to_vec())
    }
}

/// Canonical order: total degree ascending, ties broken lexicographically
/// with larger leading exponents first (`x^2 < x*y < y^2`).
impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let mut v: Vec<Exponent> = vec![[0, 2].into(), [1, 1].into(), [3, 0].into(), [2, 0].into()];
        v.sort();
        assert_eq!(v, vec![[2, 0].into(), [1, 1].into(), [0, 2].into(), [3, 0].into()]);
    }

    #[test]
    fn overflow_is_reported() {
        let a: Exponent = [u64::MAX, 0].into();
        assert_eq!(a.checked_add(&[1, 0].into()), Err(Error::Overflow("exponent addition")));
        assert!(a.checked_scale(2).is_err());
        assert_eq!(a.dot(&[2, 0]).unwrap(), 2 * (u64::MAX as u128));
    }
}
