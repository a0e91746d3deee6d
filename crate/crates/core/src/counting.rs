//! Closed-form counts: the Krasner sum and count, the element counts
//! `Pi`, `Delta` and `psi`, and the number of cyclic extensions.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{
    checked_product, divides_p_power_minus_one, exact_div, gcd_with_p_power_minus_one, phi,
    pow_guarded, prime_divisors, require_prime, split_p, Count, Limits,
};
use crate::error::{CountError, Result};
use crate::profiles::CyclicBaseProfile;

/// Signature of [`delta_count`], so that the property suite can run the
/// evaluators against a substitute table.
pub type DeltaFn = fn(u64, u64, u32, u32, &Limits) -> Result<Count>;

/// Parameters of Krasner's count `N(K, e, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KrasnerQuery {
    pub p: u64,
    pub n0: u64,
    pub e: u64,
    pub f: u64,
}

/// The `s + 1` summands `p^i (p^{eps(i) N} - p^{eps(i-1) N})` of the
/// Krasner sum, in order of `i`.
///
/// `eps(i) N` is evaluated as `(N / p^i)(1 + p + ... + p^{i-1})`, which is
/// an integer whenever `p^s | N`.
pub fn sigma_krasner_terms(p: u64, n: u64, s: u32, limits: &Limits) -> Result<Vec<BigUint>> {
    require_prime(p)?;
    if n == 0 {
        return Err(CountError::Domain("N must be positive".into()));
    }
    let p_s = (p as u128).checked_pow(s);
    if p_s.is_none_or(|q| !(n as u128).is_multiple_of(q)) {
        return Err(CountError::Precondition(format!(
            "{p}^{s} does not divide N = {n}"
        )));
    }

    let mut terms = Vec::with_capacity(s as usize + 1);
    // p^{eps(i-1) N}; None encodes eps(-1) = -inf, i.e. a zero term.
    let mut prev_pow: Option<BigUint> = None;
    let mut p_i = 1u128;
    let mut geometric = 0u128;
    for _ in 0..=s {
        let exponent = (n as u128 / p_i) * geometric;
        let pow = pow_guarded(p, exponent, limits)?;
        let diff = match &prev_pow {
            None => pow.clone(),
            Some(prev) => &pow - prev,
        };
        terms.push(diff * BigUint::from(p_i));
        prev_pow = Some(pow);
        geometric += p_i;
        p_i *= p as u128;
    }
    Ok(terms)
}

/// The Krasner sum `Sigma_p(N, s)`.
pub fn sigma_krasner(p: u64, n: u64, s: u32, limits: &Limits) -> Result<Count> {
    Ok(Count::from(
        sigma_krasner_terms(p, n, s, limits)?
            .into_iter()
            .sum::<BigUint>(),
    ))
}

/// Krasner's number of extensions with ramification `e` and inertia `f`
/// inside a fixed algebraic closure.
pub fn krasner_count(q: &KrasnerQuery, limits: &Limits) -> Result<Count> {
    require_prime(q.p)?;
    if q.n0 == 0 || q.e == 0 || q.f == 0 {
        return Err(CountError::Domain("n0, e and f must be positive".into()));
    }
    let n = checked_product(&[q.n0, q.e, q.f])?;
    let s = split_p(q.e, q.p).s;
    let sigma = sigma_krasner(q.p, n, s, limits)?;
    Ok(Count::from(sigma.into_inner() * BigUint::from(q.e)))
}

/// Number of elements of order `p^s` in `C_{p^r}^m x C_{p^{min(xi, r)}}`
/// for any `r >= s`.
pub fn pi_count(p: u64, m: u64, s: u32, xi: u32, limits: &Limits) -> Result<Count> {
    if s == 0 {
        return Ok(Count::one());
    }
    let (m, s128) = (m as u128, s as u128);
    let hi = pow_guarded(p, m * s128 + xi.min(s) as u128, limits)?;
    let lo = pow_guarded(p, m * (s128 - 1) + xi.min(s - 1) as u128, limits)?;
    Ok(Count::from(hi - lo))
}

/// Increment of [`pi_count`] when `xi` steps from `i - 1` to `i` (and
/// `Pi(m, s, 0)` at `i = 0`), in closed form.
pub fn delta_count(p: u64, m: u64, s: u32, i: u32, limits: &Limits) -> Result<Count> {
    let (m, s128, i128) = (m as u128, s as u128, i as u128);
    let v = if i > s {
        BigUint::zero()
    } else if s == 0 {
        BigUint::one()
    } else if i == 0 {
        let pm = pow_guarded(p, m, limits)?;
        (pm - 1u32) * pow_guarded(p, m * (s128 - 1), limits)?
    } else if i < s {
        let pm = pow_guarded(p, m, limits)?;
        BigUint::from(p - 1) * (pm - 1u32) * pow_guarded(p, m * (s128 - 1) + i128 - 1, limits)?
    } else {
        BigUint::from(p - 1) * pow_guarded(p, m * s128 + s128 - 1, limits)?
    };
    Ok(Count::from(v))
}

/// Number of elements of order `u` in `C_u x C_v`.
///
/// Only `gcd(u, v)` matters, so callers holding a huge `v` may pass any
/// `v'` with the same gcd against `u`.
pub fn psi_count(u: u64, v: u64) -> Result<Count> {
    if u == 0 || v == 0 {
        return Err(CountError::Domain("psi needs u, v >= 1".into()));
    }
    let g = u.gcd(&v);
    let w = u / g;
    let mut num = BigUint::from(u) * BigUint::from(g);
    let mut den = BigUint::one();
    for l in prime_divisors(u) {
        let lb = BigUint::from(l);
        if w.is_multiple_of(l) {
            num *= &lb - 1u32;
            den *= lb;
        } else {
            num *= &lb * &lb - 1u32;
            den *= &lb * &lb;
        }
    }
    Ok(Count::from(exact_div(
        &num,
        &den,
        &format!("psi({u}, {v})"),
    )?))
}

/// Number of cyclic extensions of `F` of degree `e f` with ramification
/// `e` and inertia `f`.
pub fn cyclic_count_ef(
    field: &CyclicBaseProfile,
    e: u64,
    f: u64,
    limits: &Limits,
) -> Result<Count> {
    if e == 0 || f == 0 {
        return Err(CountError::Domain("e and f must be positive".into()));
    }
    let p = field.p;
    let d = checked_product(&[e, f])?;
    let split = split_p(e, p);
    if !divides_p_power_minus_one(split.h, p, field.f_abs)? {
        return Ok(Count::zero());
    }
    let pi = pi_count(p, field.m, split.s, field.xi, limits)?;
    let num =
        pi.into_inner() * BigUint::from(e) * BigUint::from(phi(split.h)) * BigUint::from(phi(f));
    let q = exact_div(
        &num,
        &BigUint::from(phi(d)),
        &format!("C(F, e={e}, f={f}) / phi({d})"),
    )?;
    Ok(Count::from(q))
}

/// Number of cyclic extensions of `F` of degree `d`.
pub fn cyclic_count_total(field: &CyclicBaseProfile, d: u64, limits: &Limits) -> Result<Count> {
    if d == 0 {
        return Err(CountError::Domain("d must be positive".into()));
    }
    let p = field.p;
    let split = split_p(d, p);
    let z = gcd_with_p_power_minus_one(split.h, p, field.f_abs);
    let psi = psi_count(split.h, z)?;
    let pi = pi_count(p, field.m + 1, split.s, field.xi, limits)?;
    let num = psi.into_inner() * pi.into_inner();
    let q = exact_div(
        &num,
        &BigUint::from(phi(d)),
        &format!("C(F, d={d}) / phi({d})"),
    )?;
    Ok(Count::from(q))
}
