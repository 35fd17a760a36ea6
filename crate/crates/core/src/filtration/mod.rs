//! Graded families `R = I_0 ⊇ I_1 ⊇ ...` with `I_m I_n ⊆ I_{m+n}`.

mod expr;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

pub use expr::{sigma, Expr};

use crate::ring::{minimalize, Exponent, MonomialIdeal, RingContext};
use crate::valuation::{ExactScalar, MonomialValuation};
use crate::{Error, Result};

/// How `I_n` is produced.
#[derive(Debug, Clone)]
pub enum FiltrationSpec {
    /// `I_n = base^n`.
    Power(MonomialIdeal),
    /// `I_n = ⋂ I(ν_i)_{ceil(n a_i)}`.
    DiscreteValued(Vec<(MonomialValuation, ExactScalar)>),
    /// `I_n` generated by monomials whose coordinates are expressions in `n`.
    Template(Vec<Vec<Expr>>),
    /// Explicit `I_1, ..., I_N`; evaluation past `N` is an error.
    Table(Vec<MonomialIdeal>),
    /// Subfiltration generated in degrees `<= level`.
    Truncation { parent: Filtration, level: u64 },
    /// Extension to the localization at the face prime on `vars`.
    Localized { parent: Filtration, vars: Vec<usize> },
}

struct Inner {
    ctx: Arc<RingContext>,
    spec: FiltrationSpec,
    memo: RwLock<HashMap<u64, MonomialIdeal>>,
}

/// A filtration with a thread-safe cache of evaluated members.
///
/// Cloning is cheap and clones share the cache. Entries are deterministic
/// functions of `n`, so concurrent writers store identical values.
#[derive(Clone)]
pub struct Filtration(Arc<Inner>);

impl fmt::Debug for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Filtration").field("spec", &self.0.spec).finish()
    }
}

impl Filtration {
    pub fn new(ctx: &Arc<RingContext>, spec: FiltrationSpec) -> Result<Self> {
        let d = ctx.dimension();
        let dim_check = |found: usize| {
            if found == d {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: d, found })
            }
        };
        match &spec {
            FiltrationSpec::Power(base) => dim_check(base.dimension())?,
            FiltrationSpec::DiscreteValued(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidArgument("discrete valued filtration needs a valuation".into()));
                }
                for (nu, a) in v {
                    dim_check(nu.dimension())?;
                    if !a.is_positive() {
                        return Err(Error::InvalidArgument(format!("multiplier {a} is not positive")));
                    }
                }
            }
            FiltrationSpec::Template(gens) => {
                for g in gens {
                    dim_check(g.len())?;
                }
            }
            FiltrationSpec::Table(t) => {
                for i in t {
                    dim_check(i.dimension())?;
                }
            }
            FiltrationSpec::Truncation { parent, level } => {
                dim_check(parent.dimension())?;
                if *level == 0 {
                    return Err(Error::InvalidArgument("truncation level must be positive".into()));
                }
            }
            FiltrationSpec::Localized { parent, vars } => {
                if vars.is_empty() {
                    return Err(Error::EmptyVariableSet);
                }
                let expected = parent.context().restrict(vars)?;
                if **ctx != *expected {
                    return Err(Error::InvalidArgument("localized context does not match the variable subset".into()));
                }
            }
        }
        Ok(Self(Arc::new(Inner { ctx: ctx.clone(), spec, memo: RwLock::new(HashMap::new()) })))
    }

    pub fn power(base: MonomialIdeal) -> Self {
        let ctx = base.context().clone();
        Self::new(&ctx, FiltrationSpec::Power(base)).expect("dimensions agree")
    }

    pub fn discrete_valued(ctx: &Arc<RingContext>, v: Vec<(MonomialValuation, ExactScalar)>) -> Result<Self> {
        Self::new(ctx, FiltrationSpec::DiscreteValued(v))
    }

    /// Template from per-coordinate expression strings.
    pub fn template(ctx: &Arc<RingContext>, gens: &[&[&str]]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| g.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, FiltrationSpec::Template(gens))
    }

    pub fn table(ctx: &Arc<RingContext>, ideals: Vec<MonomialIdeal>) -> Result<Self> {
        Self::new(ctx, FiltrationSpec::Table(ideals))
    }

    /// `I[i]`: the subfiltration generated by `I_1, ..., I_i`.
    pub fn truncate(&self, level: u64) -> Result<Self> {
        Self::new(&self.0.ctx, FiltrationSpec::Truncation { parent: self.clone(), level })
    }

    /// `n -> I_n R_p` for the face prime `p` on `vars`.
    pub fn localize(&self, vars: &[usize]) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::EmptyVariableSet);
        }
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        vars.dedup();
        if let Some(&bad) = vars.iter().find(|&&i| i >= self.dimension()) {
            return Err(Error::InvalidArgument(format!("variable index {bad} out of range")));
        }
        let ctx = self.0.ctx.restrict(&vars)?;
        Self::new(&ctx, FiltrationSpec::Localized { parent: self.clone(), vars })
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.0.ctx
    }

    pub fn dimension(&self) -> usize {
        self.0.ctx.dimension()
    }

    pub fn spec(&self) -> &FiltrationSpec {
        &self.0.spec
    }

    /// `I_n`.
    pub fn ideal_at(&self, n: u64) -> Result<MonomialIdeal> {
        if n == 0 {
            return Ok(MonomialIdeal::unit(&self.0.ctx));
        }
        if let Some(i) = self.0.memo.read().expect("memo lock").get(&n) {
            return Ok(i.clone());
        }
        let i = match &self.0.spec {
            FiltrationSpec::Truncation { parent, level } => self.truncation_at(parent, *level, n)?,
            _ => self.compute(n)?,
        };
        self.0.memo.write().expect("memo lock").insert(n, i.clone());
        Ok(i)
    }

    /// `I_n` recomputed from its definition without consulting this filtration's
    /// cache.
    pub fn ideal_at_uncached(&self, n: u64) -> Result<MonomialIdeal> {
        if n == 0 {
            return Ok(MonomialIdeal::unit(&self.0.ctx));
        }
        match &self.0.spec {
            FiltrationSpec::Truncation { parent, level } => {
                let fresh =
                    Filtration::new(&self.0.ctx, FiltrationSpec::Truncation { parent: parent.clone(), level: *level })?;
                fresh.ideal_at(n)
            }
            _ => self.compute(n),
        }
    }

    fn compute(&self, n: u64) -> Result<MonomialIdeal> {
        let ctx = &self.0.ctx;
        match &self.0.spec {
            FiltrationSpec::Power(base) => base.power(n),
            FiltrationSpec::DiscreteValued(v) => {
                let mut acc: Option<MonomialIdeal> = None;
                for (nu, a) in v {
                    let i = nu.ideal(ctx, a.ceil_mul_u64(n)?)?;
                    acc = Some(match acc {
                        None => i,
                        Some(prev) => prev.intersect(&i)?,
                    });
                }
                Ok(acc.expect("nonempty valuation list"))
            }
            FiltrationSpec::Template(gens) => {
                let pts = gens
                    .iter()
                    .map(|g| g.iter().map(|e| e.eval(n)).collect::<Result<Vec<_>>>().map(Exponent::new))
                    .collect::<Result<Vec<_>>>()?;
                minimalize(pts, ctx)
            }
            FiltrationSpec::Table(t) => {
                t.get((n - 1) as usize).cloned().ok_or(Error::TableRange { requested: n, available: t.len() as u64 })
            }
            FiltrationSpec::Localized { parent, vars } => parent.ideal_at(n)?.localize(vars),
            FiltrationSpec::Truncation { .. } => unreachable!("handled by truncation_at"),
        }
    }

    /// Fills the cache bottom-up with `I[i]_k = Σ_{j <= min(i,k)} I_j I[i]_{k-j}`.
    fn truncation_at(&self, parent: &Filtration, level: u64, n: u64) -> Result<MonomialIdeal> {
        if n <= level {
            return parent.ideal_at(n);
        }
        let start = {
            let memo = self.0.memo.read().expect("memo lock");
            (level + 1..n).rev().find(|k| memo.contains_key(k)).map_or(level + 1, |k| k + 1)
        };
        for k in start..=n {
            let mut acc = MonomialIdeal::zero(&self.0.ctx);
            for j in 1..=level.min(k) {
                let term = parent.ideal_at(j)?.product(&self.ideal_at(k - j)?)?;
                acc = acc.sum(&term)?;
            }
            if k == n {
                return Ok(acc);
            }
            self.0.memo.write().expect("memo lock").insert(k, acc);
        }
        unreachable!("loop returns at k = n")
    }

    /// `I_1, ..., I_{n_max}`. Members are evaluated in parallel unless the
    /// definition builds them recursively.
    pub fn ideals(&self, n_max: u64) -> Result<Vec<MonomialIdeal>> {
        if self.is_recursive() {
            (1..=n_max).map(|n| self.ideal_at(n)).collect()
        } else {
            (1..=n_max).into_par_iter().map(|n| self.ideal_at(n)).collect()
        }
    }

    fn is_recursive(&self) -> bool {
        match &self.0.spec {
            FiltrationSpec::Truncation { .. } => true,
            FiltrationSpec::Localized { parent, .. } => parent.is_recursive(),
            _ => false,
        }
    }

    /// First `(m, n)` with `m + n <= bound` and `I_m I_n ⊄ I_{m+n}`.
    pub fn validate(&self, bound: u64) -> Result<Option<(u64, u64)>> {
        for total in 2..=bound {
            let target = self.ideal_at(total)?;
            for m in 1..=total / 2 {
                let prod = self.ideal_at(m)?.product(&self.ideal_at(total - m)?)?;
                if !target.contains_ideal(&prod)? {
                    return Ok(Some((m, total - m)));
                }
            }
        }
        Ok(None)
    }

    /// `s(I) = dim R/I_1`.
    pub fn dimension_of_quotient(&self) -> Result<usize> {
        self.ideal_at(1)?.dim_quotient()
    }

    /// All multipliers `a` entering through `ceil(a n)`.
    pub fn ceil_multipliers(&self) -> Vec<ExactScalar> {
        let mut out = Vec::new();
        match &self.0.spec {
            FiltrationSpec::DiscreteValued(v) => out.extend(v.iter().map(|(_, a)| a.clone())),
            FiltrationSpec::Template(gens) => gens.iter().flatten().for_each(|e| e.ceil_multipliers(&mut out)),
            FiltrationSpec::Truncation { parent, .. } | FiltrationSpec::Localized { parent, .. } => {
                out = parent.ceil_multipliers()
            }
            FiltrationSpec::Power(_) | FiltrationSpec::Table(_) => {}
        }
        out
    }

    /// Discrete valued with only rational multipliers.
    pub fn is_q_divisorial(&self) -> bool {
        matches!(&self.0.spec, FiltrationSpec::DiscreteValued(v) if v.iter().all(|(_, a)| a.is_rational()))
    }
}
