//! Exact rational scalars and a few numeric helpers shared across the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parses "p" or "p/q" (q > 0) with an optional leading minus sign.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if q <= BigInt::zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Formats as "p" or "p/q", matching the wire format used in all JSON output.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

pub fn rat_ceil(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Scales a rational vector to a coprime integer vector (same direction).
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.iter().map(|x| Rat::from_integer(x / &g)).collect()
}

const POW_PRECISION_BITS: u32 = 110;

/// base^p for base >= 0 and p = num/den in (0, 1].
///
/// Exact when p is an integer (p = 1); otherwise a rational approximation
/// with absolute error below 2^-100 (well past f64's 53 bits).
pub fn pow_rational(base: &Rat, p: &Rat) -> Result<Rat> {
    if base.is_negative() {
        return Err(Error::Domain("negative base in rational power".into()));
    }
    if base.is_zero() {
        return Ok(Rat::zero());
    }
    if p.denom().is_one() {
        let e = p
            .numer()
            .to_u32()
            .ok_or_else(|| Error::Domain("power exponent too large".into()))?;
        return Ok(pow_u32(base, e));
    }
    let e = p
        .numer()
        .to_u32()
        .ok_or_else(|| Error::Domain("power exponent too large".into()))?;
    let d = p
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Domain("power denominator too large".into()))?;
    let powered = pow_u32(base, e);
    nth_root(&powered, d, POW_PRECISION_BITS)
}

fn pow_u32(base: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Rounds to the grid of denominator 2^bits; keeps Newton iterates small.
fn round_bits(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = (x * Rat::from_integer(scale.clone())).floor().to_integer();
    Rat::new(scaled, scale)
}

/// d-th root of r > 0 by Newton iteration on rationals, |error| < 2^-bits.
fn nth_root(r: &Rat, d: u32, bits: u32) -> Result<Rat> {
    debug_assert!(r.is_positive() && d >= 2);
    let seed = rat_to_f64(r).powf(1.0 / d as f64);
    let mut x = f64_to_rat(seed.max(f64::MIN_POSITIVE))?;
    let work = bits + 16;
    let dr = Rat::from_integer(BigInt::from(d));
    // Newton doubles correct bits per step; the f64 seed gives ~50.
    for _ in 0..8 {
        let xd1 = pow_u32(&x, d - 1);
        let xd = &xd1 * &x;
        let step = (&xd - r) / (&dr * &xd1);
        x = round_bits(&(&x - step), work);
        if x.is_negative() || x.is_zero() {
            x = round_bits(&f64_to_rat(seed)?, work);
        }
    }
    Ok(x)
}

fn f64_to_rat(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite value {x}")))
}
