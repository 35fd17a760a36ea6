//! Text form of monomials (`x^2*y^3`, `1`) and ideals (`[x^2, x*y^3]`).

use std::sync::Arc;

use super::{minimalize, Exponent, MonomialIdeal, RingContext};
use crate::{Error, Result};

pub(super) fn format_monomial(names: &[String], e: &Exponent) -> String {
    let parts: Vec<String> = e
        .coords()
        .iter()
        .zip(names)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, n)| if c == 1 { n.clone() } else { format!("{n}^{c}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

pub(super) fn parse_monomial(ctx: &RingContext, s: &str) -> Result<Exponent> {
    let s = s.trim();
    let mut coords = vec![0u64; ctx.dimension()];
    if s == "1" {
        return Ok(Exponent::new(coords));
    }
    if s.is_empty() {
        return Err(Error::Parse("empty monomial".into()));
    }
    for factor in s.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e = e.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let i = ctx.index_of(name)?;
        coords[i] = coords[i].checked_add(exp).ok_or(Error::Overflow("monomial exponent"))?;
    }
    Ok(Exponent::new(coords))
}

pub(super) fn parse_ideal(ctx: &Arc<RingContext>, s: &str) -> Result<MonomialIdeal> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("ideal must be written as [g1, g2, ...], got `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(MonomialIdeal::zero(ctx));
    }
    let gens = inner.split(',').map(|g| parse_monomial(ctx, g)).collect::<Result<Vec<_>>>()?;
    minimalize(gens, ctx)
}
