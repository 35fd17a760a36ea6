//! Coordinate expressions of template filtrations.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := INT | 'n' ('^' INT)? | 'ceil(' SCALAR '*' 'n' ')' | 'sigma(n)'
//!         | 'table(' INT (',' INT)* ')' | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::valuation::ExactScalar;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(u64),
    /// `n^k`.
    Pow(u32),
    /// `ceil(a * n)`.
    CeilMul(ExactScalar),
    /// The step function of [`sigma`].
    Sigma,
    /// `table(t_1, ..., t_N)` evaluates to `t_n`; `n = 0` gives 0.
    Lookup(Vec<u64>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
}

/// A nondecreasing step function oscillating between `n/4` and `n/2`:
/// `floor(n/2)` on `[4^k, 2*4^k)` and `4^k - 1` on `[2*4^k, 4^(k+1))`,
/// raised to at least 1 for `n >= 1`.
pub fn sigma(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut p = 1u64;
    while p <= n / 4 {
        p *= 4;
    }
    let v = if n < 2 * p { n / 2 } else { p - 1 };
    v.max(1)
}

fn overflow() -> Error {
    Error::Overflow("template expression")
}

impl Expr {
    pub fn eval(&self, n: u64) -> Result<u64> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Pow(k) => n.checked_pow(*k).ok_or_else(overflow),
            Expr::CeilMul(a) => a.ceil_mul_u64(n),
            Expr::Sigma => Ok(sigma(n)),
            Expr::Lookup(t) => {
                if n == 0 {
                    return Ok(0);
                }
                t.get((n - 1) as usize).copied().ok_or(Error::TableRange { requested: n, available: t.len() as u64 })
            }
            Expr::Sum(v) => v.iter().try_fold(0u64, |acc, e| acc.checked_add(e.eval(n)?).ok_or_else(overflow)),
            Expr::Product(v) => v.iter().try_fold(1u64, |acc, e| acc.checked_mul(e.eval(n)?).ok_or_else(overflow)),
        }
    }

    /// `(slope, intercept)` with integer coefficients when the expression is
    /// exactly `slope * n + intercept` for every `n >= 0`.
    pub fn affine(&self) -> Option<(u64, u64)> {
        match self {
            Expr::Const(c) => Some((0, *c)),
            Expr::Pow(0) => Some((0, 1)),
            Expr::Pow(1) => Some((1, 0)),
            Expr::Pow(_) | Expr::Sigma | Expr::Lookup(_) => None,
            Expr::CeilMul(a) => {
                let r = a.as_rational()?;
                if r.denom().is_one() {
                    u64::try_from(r.numer()).ok().map(|s| (s, 0))
                } else {
                    None
                }
            }
            Expr::Sum(v) => v.iter().try_fold((0u64, 0u64), |(s, c), e| {
                let (s2, c2) = e.affine()?;
                Some((s.checked_add(s2)?, c.checked_add(c2)?))
            }),
            Expr::Product(v) => {
                let mut slope_part: Option<(u64, u64)> = None;
                let mut k = 1u64;
                for e in v {
                    let (s, c) = e.affine()?;
                    if s == 0 {
                        k = k.checked_mul(c)?;
                    } else if slope_part.is_none() {
                        slope_part = Some((s, c));
                    } else {
                        return None;
                    }
                }
                let (s, c) = slope_part.unwrap_or((0, 1));
                Some((s.checked_mul(k)?, c.checked_mul(k)?))
            }
        }
    }

    /// `(slope, intercept)` such that `eval(n) >= slope * n + intercept` for
    /// every `n >= 1`, with exact slope when the expression is linear.
    pub fn lower_linear_bound(&self) -> Option<(ExactScalar, BigRational)> {
        let q = |v: u64| BigRational::from_integer(BigInt::from(v));
        match self {
            Expr::Const(c) => Some((ExactScalar::integer(0), q(*c))),
            Expr::Pow(0) => Some((ExactScalar::integer(0), q(1))),
            // n^k >= n for n >= 1.
            Expr::Pow(_) => Some((ExactScalar::integer(1), BigRational::zero())),
            Expr::CeilMul(a) => Some((a.clone(), BigRational::zero())),
            // sigma(n) >= n/4 - 1 on every block.
            Expr::Sigma => Some((ExactScalar::rational(crate::rational::ratio(1, 4)), -BigRational::one())),
            Expr::Lookup(_) => None,
            Expr::Sum(v) => {
                let mut slope: Option<ExactScalar> = None;
                let mut c = BigRational::zero();
                for e in v {
                    let (s, c2) = e.lower_linear_bound()?;
                    c += c2;
                    slope = Some(match slope {
                        None => s,
                        Some(acc) => add_scalars(&acc, &s)?,
                    });
                }
                Some((slope.unwrap_or(ExactScalar::integer(0)), c))
            }
            Expr::Product(_) => {
                let (s, c) = self.affine()?;
                Some((ExactScalar::integer(s), q(c)))
            }
        }
    }

    pub fn ceil_multipliers(&self, out: &mut Vec<ExactScalar>) {
        match self {
            Expr::CeilMul(a) => out.push(a.clone()),
            Expr::Sum(v) | Expr::Product(v) => v.iter().for_each(|e| e.ceil_multipliers(out)),
            _ => {}
        }
    }

    pub fn parse(s: &str) -> Result<Expr> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

fn add_scalars(a: &ExactScalar, b: &ExactScalar) -> Option<ExactScalar> {
    match (a, b) {
        (ExactScalar::Rational(x), ExactScalar::Rational(y)) => Some(ExactScalar::Rational(x + y)),
        (ExactScalar::PiMultiple(x), ExactScalar::PiMultiple(y)) => Some(ExactScalar::pi_times(x + y)),
        (ExactScalar::Rational(x), other) | (other, ExactScalar::Rational(x)) if x.is_zero() => Some(other.clone()),
        _ => None,
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected an integer"));
        }
        let v = self.rest()[..len].parse().map_err(|_| self.error("integer out of range"))?;
        self.pos += len;
        Ok(v)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat("*") {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) })
    }

    fn factor(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("ceil(") {
            let start = self.pos;
            let close = self.rest().find(')').ok_or_else(|| self.error("unclosed `ceil(`"))?;
            let inner = self.src[start..start + close].trim();
            let scalar = inner
                .strip_suffix("*n")
                .or_else(|| inner.strip_prefix("n*"))
                .ok_or_else(|| self.error("ceil expects `ceil(a*n)`"))?;
            let a = ExactScalar::parse(scalar)?;
            if !a.is_positive() {
                return Err(self.error("ceil multiplier must be positive"));
            }
            self.pos = start + close + 1;
            return Ok(Expr::CeilMul(a));
        }
        if self.eat("sigma(") {
            self.expect("n")?;
            self.expect(")")?;
            return Ok(Expr::Sigma);
        }
        if self.eat("table(") {
            let mut v = vec![self.integer()?];
            while self.eat(",") {
                v.push(self.integer()?);
            }
            self.expect(")")?;
            return Ok(Expr::Lookup(v));
        }
        if self.eat("n") {
            if self.eat("^") {
                let k = self.integer()?;
                let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
                return Ok(Expr::Pow(k));
            }
            return Ok(Expr::Pow(1));
        }
        Ok(Expr::Const(self.integer()?))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Pow(1) => write!(f, "n"),
            Expr::Pow(k) => write!(f, "n^{k}"),
            Expr::CeilMul(a) => write!(f, "ceil({a}*n)"),
            Expr::Sigma => write!(f, "sigma(n)"),
            Expr::Lookup(t) => {
                let s: Vec<String> = t.iter().map(u64::to_string).collect();
                write!(f, "table({})", s.join(","))
            }
            Expr::Sum(v) => {
                let s: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", s.join("+"))
            }
            Expr::Product(v) => {
                let s: Vec<String> = v
                    .iter()
                    .map(|e| match e {
                        Expr::Sum(_) => format!("({e})"),
                        _ => e.to_string(),
                    })
                    .collect();
                write!(f, "{}", s.join("*"))
            }
        }
    }
}
