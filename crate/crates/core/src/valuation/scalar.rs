use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational;
use crate::{Error, Result};

/// Decimal expansion of π truncated after 320 fractional digits, so
/// `PI_DIGITS < π < PI_DIGITS + 10^-320`.
const PI_DIGITS: &str = "3\
14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196442881097566593344612847564823378678316527120190914564856692346034861045432664821339360726024914127372458700660631558817";
const PI_FRACTION_DIGITS: u32 = 320;

/// Initial working precision of interval refinement, in bits.
pub const INITIAL_BITS: u32 = 64;
/// Refinement gives up beyond this precision.
pub const MAX_BITS: u32 = 256;
const STEP_BITS: u32 = 32;

/// A positive real multiplier: a rational number or a rational multiple of π.
///
/// Irrational values are never rounded. They are enclosed in dyadic intervals
/// `[lo, hi]` derived from a stored expansion; every interval is a pure
/// function of its precision, so scalars are freely shared between threads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    /// `coeff * π`.
    PiMultiple(BigRational),
}

fn pi_truncation() -> &'static (BigInt, BigInt) {
    static CELL: OnceLock<(BigInt, BigInt)> = OnceLock::new();
    CELL.get_or_init(|| {
        let t: BigInt = PI_DIGITS.parse().expect("digit string");
        (t, num_traits::pow(BigInt::from(10), PI_FRACTION_DIGITS as usize))
    })
}

/// Dyadic enclosure `lo < π < hi` with denominators `2^bits`.
pub fn pi_interval(bits: u32) -> (BigRational, BigRational) {
    let (t, den) = pi_truncation();
    let scale = BigInt::one() << bits;
    let lo = (t * &scale).div_floor(den);
    let hi_num = (t + 1) * &scale;
    let hi = Integer::div_ceil(&hi_num, den);
    (BigRational::new(lo, scale.clone()), BigRational::new(hi, scale))
}

impl ExactScalar {
    pub fn rational(r: BigRational) -> Self {
        ExactScalar::Rational(r)
    }

    pub fn integer(v: u64) -> Self {
        ExactScalar::Rational(rational::from_u64(v))
    }

    pub fn pi() -> Self {
        ExactScalar::PiMultiple(BigRational::one())
    }

    pub fn pi_times(coeff: BigRational) -> Self {
        if coeff.is_zero() {
            ExactScalar::Rational(coeff)
        } else {
            ExactScalar::PiMultiple(coeff)
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactScalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            ExactScalar::PiMultiple(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExactScalar::Rational(r) | ExactScalar::PiMultiple(r) => r.is_positive(),
        }
    }

    /// `k * self`.
    pub fn scale(&self, k: &BigRational) -> Self {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(r * k),
            ExactScalar::PiMultiple(c) => ExactScalar::pi_times(c * k),
        }
    }

    /// Enclosure `lo <= self <= hi`, strict on both sides for irrationals.
    pub fn interval(&self, bits: u32) -> (BigRational, BigRational) {
        match self {
            ExactScalar::Rational(r) => (r.clone(), r.clone()),
            ExactScalar::PiMultiple(c) => {
                let (lo, hi) = pi_interval(bits);
                if c.is_negative() {
                    (c * hi, c * lo)
                } else {
                    (c * lo, c * hi)
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.interval(INITIAL_BITS);
        rational::to_f64(&((lo + hi) / BigInt::from(2)))
    }

    /// Certified `ceil(n * self)`.
    pub fn ceil_mul(&self, n: u64) -> Result<BigInt> {
        let nb = BigRational::from_integer(BigInt::from(n));
        match self {
            ExactScalar::Rational(r) => Ok((r * nb).ceil().to_integer()),
            ExactScalar::PiMultiple(_) => {
                if n == 0 {
                    return Ok(BigInt::zero());
                }
                let mut bits = INITIAL_BITS;
                loop {
                    let (lo, hi) = self.interval(bits);
                    let below = (&lo * &nb).floor().to_integer();
                    let above = (&hi * &nb).ceil().to_integer();
                    // n*self lies strictly inside (below, above); one unit
                    // apart pins the ceiling and rules out an integer value.
                    if &below + 1 == above {
                        return Ok(above);
                    }
                    if bits >= MAX_BITS {
                        return Err(Error::Certification { scalar: self.to_string(), n, bits });
                    }
                    bits = (bits + STEP_BITS).min(MAX_BITS);
                }
            }
        }
    }

    /// Certified `ceil(n * self)` as an exponent.
    pub fn ceil_mul_u64(&self, n: u64) -> Result<u64> {
        self.ceil_mul(n)?.to_u64().ok_or(Error::Overflow("ceil(n * a)"))
    }

    /// Exact comparison with a rational number.
    pub fn cmp_rational(&self, r: &BigRational) -> Result<Ordering> {
        match self {
            ExactScalar::Rational(a) => Ok(a.cmp(r)),
            ExactScalar::PiMultiple(_) => {
                let mut bits = INITIAL_BITS;
                loop {
                    let (lo, hi) = self.interval(bits);
                    if &hi < r {
                        return Ok(Ordering::Less);
                    }
                    if &lo > r {
                        return Ok(Ordering::Greater);
                    }
                    if bits >= 4 * MAX_BITS {
                        return Err(Error::Certification { scalar: self.to_string(), n: 1, bits });
                    }
                    bits += STEP_BITS;
                }
            }
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let src = s.trim();
        if src.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut coeff = BigRational::one();
        let mut pis = 0u32;
        let mut rest = src;
        let mut divide = false;
        loop {
            let end = rest.find(['*', '/']).unwrap_or(rest.len());
            let tok = rest[..end].trim();
            let value = if tok == "pi" {
                if divide {
                    return Err(Error::Parse(format!("cannot divide by pi in `{src}`")));
                }
                pis += 1;
                BigRational::one()
            } else {
                let v: BigInt =
                    tok.parse().map_err(|_| Error::Parse(format!("bad scalar token `{tok}` in `{src}`")))?;
                BigRational::from_integer(v)
            };
            if divide {
                if value.is_zero() {
                    return Err(Error::Parse(format!("division by zero in `{src}`")));
                }
                coeff /= value;
            } else {
                coeff *= value;
            }
            if end == rest.len() {
                break;
            }
            divide = rest.as_bytes()[end] == b'/';
            rest = &rest[end + 1..];
        }
        match pis {
            0 => Ok(ExactScalar::Rational(coeff)),
            1 => Ok(ExactScalar::pi_times(coeff)),
            _ => Err(Error::Parse(format!("powers of pi are not supported: `{src}`"))),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => write!(f, "{}", rational::to_string(r)),
            ExactScalar::PiMultiple(c) => {
                let p = c.numer();
                let q = c.denom();
                match (p.is_one(), q.is_one()) {
                    (true, true) => write!(f, "pi"),
                    (false, true) => write!(f, "{p}*pi"),
                    (true, false) => write!(f, "pi/{q}"),
                    (false, false) => write!(f, "{p}*pi/{q}"),
                }
            }
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ExactScalar::parse(&s).map_err(serde::de::Error::custom)
    }
}
