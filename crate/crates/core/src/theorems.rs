//! Number of isomorphism classes of extensions of a base field, by
//! prescribed ramification and inertia or by degree.
//!
//! Both evaluators sum over towers `L / F / K` where `F` contains
//! `K(zeta_{p^i})`: level `i = 0` is the main term and each `i > 0` adds
//! the correction for the extra `p`-power roots of unity in `F`. Every
//! division is checked for exactness.
//!
//! Summands are produced in a fixed order (ascending `i`, then the divisor
//! tuple lexicographically) so that breakdowns are reproducible.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{
    checked_product, divides_p_power_minus_one, divisor_pairs, divisors, exact_div,
    gcd_with_p_power_minus_one, phi, split_p, Count, Limits,
};
use crate::counting::{delta_count, psi_count, sigma_krasner_terms, DeltaFn, KrasnerQuery};
use crate::error::{CountError, Result};
use crate::profiles::{validate, BaseFieldProfile};

/// One summand of an expanded count. Index fields not used by a given
/// formula are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    pub term: Count,
}

impl Summand {
    fn new(term: BigUint) -> Self {
        Summand {
            i: None,
            e1: None,
            f1: None,
            e2: None,
            f2: None,
            d: None,
            term: Count::from(term),
        }
    }
}

/// A count together with the summands it was assembled from:
/// `value = multiplier * sum(terms) / divisor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub value: Count,
    pub multiplier: u64,
    pub divisor: u64,
    pub terms: Vec<Summand>,
}

impl Expansion {
    fn assemble(terms: Vec<Summand>, multiplier: u64, divisor: u64, what: &str) -> Result<Self> {
        let total: BigUint = terms.iter().map(|t| t.term.as_biguint()).sum();
        let value = exact_div(
            &(total * BigUint::from(multiplier)),
            &BigUint::from(divisor),
            what,
        )?;
        Ok(Expansion {
            value: Count::from(value),
            multiplier,
            divisor,
            terms,
        })
    }
}

fn checked_profile(k: &BaseFieldProfile) -> Result<()> {
    validate(k).map_err(CountError::InvalidProfile)
}

/// Expanded form of Krasner's count: `e` times the Krasner sum terms.
pub fn expand_krasner(q: &KrasnerQuery, limits: &Limits) -> Result<Expansion> {
    if q.n0 == 0 || q.e == 0 || q.f == 0 {
        return Err(CountError::Domain("n0, e and f must be positive".into()));
    }
    let n = checked_product(&[q.n0, q.e, q.f])?;
    let s = crate::arith::p_valuation(q.e, q.p)?.s;
    let terms = sigma_krasner_terms(q.p, n, s, limits)?
        .into_iter()
        .enumerate()
        .map(|(i, t)| Summand {
            i: Some(i as u32),
            ..Summand::new(t)
        })
        .collect();
    Expansion::assemble(terms, q.e, 1, "Krasner count")
}

/// Expanded isomorphism-class count with ramification `e` and inertia `f`.
pub fn expand_iso_ef(k: &BaseFieldProfile, e: u64, f: u64, limits: &Limits) -> Result<Expansion> {
    expand_iso_ef_with(k, e, f, limits, delta_count)
}

pub(crate) fn expand_iso_ef_with(
    k: &BaseFieldProfile,
    e: u64,
    f: u64,
    limits: &Limits,
    delta: DeltaFn,
) -> Result<Expansion> {
    checked_profile(k)?;
    if e == 0 || f == 0 {
        return Err(CountError::Domain("e and f must be positive".into()));
    }
    let p = k.p;
    let s = split_p(e, p).s;
    k.require_depth(s)?;

    let mut terms = Vec::new();
    for i in 0..=s {
        let (e_i, f_i) = k.level(i).expect("depth checked");
        if !e.is_multiple_of(e_i) || !f.is_multiple_of(f_i) {
            continue;
        }
        let n_i = e_i * f_i;
        for (e1, e2) in divisor_pairs(e / e_i) {
            let s1 = split_p(e1, p).s;
            let split2 = split_p(e2, p);
            for (f1, f2) in divisor_pairs(f / f_i) {
                let inertia = checked_product(&[k.f0, f_i, f1])?;
                if !divides_p_power_minus_one(split2.h, p, inertia)? {
                    continue;
                }
                let n1 = checked_product(&[k.n0, n_i, e1, f1])?;
                let sigma: BigUint = sigma_krasner_terms(p, n1, s1, limits)?.into_iter().sum();
                let corr = delta(p, n1, split2.s, i, limits)?;
                let num = BigUint::from(phi(split2.h))
                    * BigUint::from(phi(f2))
                    * sigma
                    * corr.into_inner();
                let term = exact_div(
                    &num,
                    &BigUint::from(e_i),
                    &format!(
                        "I(K, e={e}, f={f}) summand i={i} e'={e1} f'={f1} divided by e^(i)={e_i}"
                    ),
                )?;
                terms.push(Summand {
                    i: Some(i),
                    e1: Some(e1),
                    f1: Some(f1),
                    e2: Some(e2),
                    f2: Some(f2),
                    ..Summand::new(term)
                });
            }
        }
    }
    Expansion::assemble(
        terms,
        1,
        f,
        &format!("I(K, e={e}, f={f}) final division by f"),
    )
}

/// Number of isomorphism classes of extensions of `k` with ramification `e`
/// and inertia `f`.
pub fn iso_count_ef(k: &BaseFieldProfile, e: u64, f: u64, limits: &Limits) -> Result<Count> {
    Ok(expand_iso_ef(k, e, f, limits)?.value)
}

/// Expanded isomorphism-class count over all extensions of degree `n`.
pub fn expand_iso_total(k: &BaseFieldProfile, n: u64, limits: &Limits) -> Result<Expansion> {
    expand_iso_total_with(k, n, limits, delta_count)
}

pub(crate) fn expand_iso_total_with(
    k: &BaseFieldProfile,
    n: u64,
    limits: &Limits,
    delta: DeltaFn,
) -> Result<Expansion> {
    checked_profile(k)?;
    if n == 0 {
        return Err(CountError::Domain("n must be positive".into()));
    }
    let p = k.p;
    let t = split_p(n, p).s;
    k.require_depth(t)?;

    let mut terms = Vec::new();
    for i in 0..=t {
        let (e_i, f_i) = k.level(i).expect("depth checked");
        let n_i = e_i * f_i;
        if !n.is_multiple_of(n_i) {
            continue;
        }
        let rest = n / n_i;
        for e1 in divisors(rest) {
            let s1 = split_p(e1, p).s;
            for f1 in divisors(rest / e1) {
                let d = rest / e1 / f1;
                let split_d = split_p(d, p);
                let inertia = checked_product(&[k.f0, f_i, f1])?;
                let z = gcd_with_p_power_minus_one(split_d.h, p, inertia);
                let psi = psi_count(split_d.h, z)?;
                let n1 = checked_product(&[k.n0, n_i, e1, f1])?;
                let sigma: BigUint = sigma_krasner_terms(p, n1, s1, limits)?.into_iter().sum();
                let corr = delta(p, n1 + 1, split_d.s, i, limits)?;
                let term = BigUint::from(e1) * psi.into_inner() * sigma * corr.into_inner();
                terms.push(Summand {
                    i: Some(i),
                    e1: Some(e1),
                    f1: Some(f1),
                    d: Some(d),
                    ..Summand::new(term)
                });
            }
        }
    }
    Expansion::assemble(terms, 1, n, &format!("I(K, n={n}) final division by n"))
}

/// Number of isomorphism classes of extensions of `k` of degree `n`.
pub fn iso_count_total(k: &BaseFieldProfile, n: u64, limits: &Limits) -> Result<Count> {
    Ok(expand_iso_total(k, n, limits)?.value)
}

fn tame_precondition(k: &BaseFieldProfile, e: u64, f: u64) -> Result<()> {
    checked_profile(k)?;
    if e == 0 || f == 0 {
        return Err(CountError::Domain("e and f must be positive".into()));
    }
    if e.is_multiple_of(k.p) {
        return Err(CountError::Precondition(format!(
            "p | e for tame: p = {}, e = {e}",
            k.p
        )));
    }
    Ok(())
}

/// Tame count as `(1/f) sum_{i=0}^{f-1} gcd(e, p^{f0 gcd(f, i)} - 1)`,
/// with `gcd(f, 0) = f`. One summand per `i`.
pub fn expand_tame_gcd_sum(k: &BaseFieldProfile, e: u64, f: u64) -> Result<Expansion> {
    tame_precondition(k, e, f)?;
    let terms = (0..f)
        .map(|i| {
            let g = num_integer::gcd(f, i);
            let exponent = checked_product(&[k.f0, g])?;
            Ok(Summand {
                i: Some(i as u32),
                ..Summand::new(BigUint::from(gcd_with_p_power_minus_one(e, k.p, exponent)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Expansion::assemble(terms, 1, f, &format!("tame I(K, e={e}, f={f})"))
}

/// Tame count as `(1/f) sum_{f' f'' = f} phi(f'') gcd(e, p^{f0 f'} - 1)`.
pub fn expand_tame_divisor_sum(k: &BaseFieldProfile, e: u64, f: u64) -> Result<Expansion> {
    tame_precondition(k, e, f)?;
    let terms = divisor_pairs(f)
        .into_iter()
        .map(|(f1, f2)| {
            let exponent = checked_product(&[k.f0, f1])?;
            let g = gcd_with_p_power_minus_one(e, k.p, exponent);
            Ok(Summand {
                f1: Some(f1),
                f2: Some(f2),
                ..Summand::new(BigUint::from(phi(f2)) * BigUint::from(g))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Expansion::assemble(terms, 1, f, &format!("tame I(K, e={e}, f={f})"))
}

/// Computes both tame forms and fails if they disagree.
pub fn tame_iso_count_checked(k: &BaseFieldProfile, e: u64, f: u64) -> Result<Count> {
    let a = expand_tame_gcd_sum(k, e, f)?.value;
    let b = expand_tame_divisor_sum(k, e, f)?.value;
    if a != b {
        return Err(CountError::Consistency(format!(
            "tame forms disagree at e={e}, f={f}: gcd sum {a}, divisor sum {b}"
        )));
    }
    Ok(a)
}

/// Isomorphism classes with tame ramification `e` (`p` does not divide `e`)
/// and inertia `f`. Debug builds cross-check against the divisor-sum form.
pub fn tame_iso_count(k: &BaseFieldProfile, e: u64, f: u64) -> Result<Count> {
    if cfg!(debug_assertions) {
        tame_iso_count_checked(k, e, f)
    } else {
        Ok(expand_tame_gcd_sum(k, e, f)?.value)
    }
}

/// Sum of `iso_count_ef` over all `e f = n`.
pub fn iso_count_split_sum(k: &BaseFieldProfile, n: u64, limits: &Limits) -> Result<Count> {
    let mut acc = BigUint::zero();
    for (e, f) in divisor_pairs(n) {
        acc += iso_count_ef(k, e, f, limits)?.into_inner();
    }
    Ok(Count::from(acc))
}
