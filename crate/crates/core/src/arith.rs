//! Exact integer helpers shared by every counting formula.
//!
//! Small parameters (degrees, ramification indices, moduli) are `u64`; every
//! count is a [`Count`], which wraps an arbitrary-precision integer.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CountError, Result};

/// Default refusal threshold for the bit-length of any intermediate power.
pub const DEFAULT_MAX_BITS: u64 = 1 << 20;

/// A nonnegative count of arbitrary size.
///
/// Serializes as a decimal string so that consumers without big integers
/// never see a lossy number.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::from(1u32))
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<u32> for Count {
    fn from(v: u32) -> Self {
        Count(BigUint::from(v))
    }
}

impl PartialEq<u64> for Count {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Add for &Count {
    type Output = Count;
    fn add(self, rhs: &Count) -> Count {
        Count(&self.0 + &rhs.0)
    }
}

impl Mul for &Count {
    type Output = Count;
    fn mul(self, rhs: &Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl std::iter::Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Self {
        Count(iter.map(|c| c.0).sum())
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Count {
    type Err = CountError;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CountError::Domain(format!("not a decimal count: {s:?}")));
        }
        BigUint::from_str(s)
            .map(Count)
            .map_err(|e| CountError::Domain(e.to_string()))
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Resource limits for the closed-form evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest permitted bit-length of any power computed along the way.
    pub max_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

/// `n = p^s * h` with `gcd(h, p) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PValuation {
    pub s: u32,
    pub h: u64,
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CountError::Domain(format!("p must be prime, got {p}")))
    }
}

/// Prime factorization by trial division, ascending primes. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(q, _)| q).collect()
}

/// Totient for `n >= 1`.
pub(crate) fn phi(n: u64) -> u64 {
    debug_assert!(n >= 1);
    factorize(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<Count> {
    if n == 0 {
        return Err(CountError::Domain("euler_phi is undefined at 0".into()));
    }
    Ok(Count::from(phi(n)))
}

/// Splits `n` into its `p`-power and prime-to-`p` parts.
pub fn p_valuation(n: u64, p: u64) -> Result<PValuation> {
    require_prime(p)?;
    if n == 0 {
        return Err(CountError::Domain("p_valuation is undefined at 0".into()));
    }
    Ok(split_p(n, p))
}

pub(crate) fn split_p(mut n: u64, p: u64) -> PValuation {
    let mut s = 0;
    while n.is_multiple_of(p) {
        n /= p;
        s += 1;
    }
    PValuation { s, h: n }
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Every ordered factorization `n = d1 * d2`, ascending in `d1`.
pub fn divisor_pairs(n: u64) -> Vec<(u64, u64)> {
    divisors(n).into_iter().map(|d| (d, n / d)).collect()
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn order_mod(p: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 1;
    }
    let mut t = phi(modulus);
    for q in prime_divisors(t) {
        while t.is_multiple_of(q) && pow_mod(p, t / q, modulus) == 1 {
            t /= q;
        }
    }
    t
}

/// Multiplicative order of `p` modulo `modulus`; 1 for the trivial modulus.
pub fn mult_order(p: u64, modulus: u64) -> Result<Count> {
    if modulus == 0 {
        return Err(CountError::Domain("modulus must be positive".into()));
    }
    if p.gcd(&modulus) != 1 {
        return Err(CountError::Domain(format!(
            "gcd({p}, {modulus}) != 1, no multiplicative order"
        )));
    }
    Ok(Count::from(order_mod(p, modulus)))
}

/// Whether `h | p^exponent - 1`, decided through the multiplicative order of
/// `p` mod `h` so that `p^exponent` is never formed.
pub fn divides_p_power_minus_one(h: u64, p: u64, exponent: u64) -> Result<bool> {
    if h == 0 || p.gcd(&h) != 1 {
        return Err(CountError::Domain(format!(
            "need gcd(h, p) = 1 with h >= 1, got h = {h}, p = {p}"
        )));
    }
    Ok(exponent.is_multiple_of(order_mod(p, h)))
}

/// `gcd(k, p^exponent - 1)` for `k >= 1`, reducing modulo `k` first.
pub fn gcd_with_p_power_minus_one(k: u64, p: u64, exponent: u64) -> u64 {
    if k == 1 {
        return 1;
    }
    let r = pow_mod(p, exponent, k);
    let v = (r + k - 1) % k;
    k.gcd(&v)
}

/// `base^exp`, refusing when the result would exceed `limits.max_bits`.
pub fn pow_guarded(base: u64, exp: u128, limits: &Limits) -> Result<BigUint> {
    if base <= 1 || exp == 0 {
        return Ok(BigUint::from(if exp == 0 { 1u64 } else { base }));
    }
    // An estimate is enough here; the guard only has to stop runaway inputs.
    let bits = (exp as f64 * (base as f64).log2()).ceil();
    if bits > limits.max_bits as f64 {
        return Err(CountError::MagnitudeLimit {
            bits: bits.min(u64::MAX as f64) as u64,
            limit: limits.max_bits,
        });
    }
    let exp = u32::try_from(exp).map_err(|_| CountError::MagnitudeLimit {
        bits: bits as u64,
        limit: limits.max_bits,
    })?;
    Ok(BigUint::from(base).pow(exp))
}

pub(crate) fn checked_product(factors: &[u64]) -> Result<u64> {
    factors.iter().try_fold(1u64, |acc, &x| {
        acc.checked_mul(x)
            .ok_or_else(|| CountError::Domain(format!("product {factors:?} overflows u64")))
    })
}

/// Exact division of big integers, or a consistency fault naming `what`.
pub(crate) fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> Result<BigUint> {
    if den.is_zero() {
        return Err(CountError::Consistency(format!("{what}: division by zero")));
    }
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(CountError::Consistency(format!(
            "{what}: {num} is not divisible by {den}"
        )));
    }
    Ok(q)
}
