//! Input model for base fields.
//!
//! A base field `K` is described by its absolute invariants over `Q_p` plus
//! the ramification and inertia of `K(zeta_{p^i})/K` for `i = 1..L`. For
//! general `K` the tower data cannot be recovered from `(p, e0, f0)`, so it
//! is part of the input; only `K = Q_p` has a built-in profile.

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, phi, require_prime};
use crate::error::{CountError, Result};

/// Ramification and inertia of `K(zeta_{p^i})/K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicDatum {
    pub i: u32,
    pub e: u64,
    pub f: u64,
}

impl CyclotomicDatum {
    pub fn degree(&self) -> u64 {
        self.e * self.f
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseFieldProfile {
    pub p: u64,
    pub e0: u64,
    pub f0: u64,
    pub n0: u64,
    /// Levels `1..=L`; level 0 is always the trivial datum and is not stored.
    pub cyclotomic: Vec<CyclotomicDatum>,
}

/// On-disk profile layout; `n0` is derived, never stored.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    p: u64,
    e0: u64,
    f0: u64,
    cyclotomic: Vec<CyclotomicDatum>,
}

impl BaseFieldProfile {
    /// Ramification and inertia at level `i`, with level 0 the trivial `(1, 1)`.
    pub fn level(&self, i: u32) -> Option<(u64, u64)> {
        if i == 0 {
            return Some((1, 1));
        }
        self.cyclotomic.get(i as usize - 1).map(|d| (d.e, d.f))
    }

    /// Deepest level present.
    pub fn depth(&self) -> u32 {
        self.cyclotomic.len() as u32
    }

    pub fn require_depth(&self, needed: u32) -> Result<()> {
        if self.depth() < needed {
            return Err(CountError::ProfileTooShort {
                needed,
                available: self.depth(),
            });
        }
        Ok(())
    }

    /// Parses the JSON profile format and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProfileFile = serde_json::from_str(text)
            .map_err(|e| CountError::InvalidProfile(vec![format!("malformed profile: {e}")]))?;
        let profile = BaseFieldProfile {
            p: file.p,
            e0: file.e0,
            f0: file.f0,
            n0: file.e0.saturating_mul(file.f0),
            cyclotomic: file.cyclotomic,
        };
        validate(&profile).map_err(CountError::InvalidProfile)?;
        Ok(profile)
    }

    pub fn to_json(&self) -> String {
        let file = ProfileFile {
            p: self.p,
            e0: self.e0,
            f0: self.f0,
            cyclotomic: self.cyclotomic.clone(),
        };
        serde_json::to_string(&file).expect("profile serializes")
    }
}

/// The profile of `Q_p` itself, carrying tower data through `max_level`.
///
/// `Q_p(zeta_{p^i})/Q_p` is totally ramified of degree `phi(p^i)`; for
/// `p = 2` this makes level 1 trivial.
pub fn qp_profile(p: u64, max_level: u32) -> Result<BaseFieldProfile> {
    require_prime(p)?;
    let mut cyclotomic = Vec::with_capacity(max_level as usize);
    let mut pi = 1u64;
    for i in 1..=max_level {
        pi = pi
            .checked_mul(p)
            .ok_or_else(|| CountError::Domain(format!("{p}^{i} overflows u64")))?;
        cyclotomic.push(CyclotomicDatum {
            i,
            e: phi(pi),
            f: 1,
        });
    }
    Ok(BaseFieldProfile {
        p,
        e0: 1,
        f0: 1,
        n0: 1,
        cyclotomic,
    })
}

/// The largest `i` with `zeta_{p^i}` in `K`, read off as the last level
/// whose extension degree is 1.
pub fn xi_of(profile: &BaseFieldProfile) -> Result<u32> {
    for (idx, d) in profile.cyclotomic.iter().enumerate() {
        if d.degree() != 1 {
            return Ok(idx as u32);
        }
    }
    Err(CountError::XiUndetermined {
        levels: profile.depth(),
    })
}

/// Checks every structural invariant and returns all violations found.
pub fn validate(profile: &BaseFieldProfile) -> Result<(), Vec<String>> {
    let mut errs = Vec::new();
    let p = profile.p;
    if !is_prime(p) {
        errs.push(format!("p = {p} is not prime"));
    }
    if profile.e0 == 0 || profile.f0 == 0 {
        errs.push(format!(
            "e0 and f0 must be positive, got e0 = {}, f0 = {}",
            profile.e0, profile.f0
        ));
    }
    if profile.e0.checked_mul(profile.f0) != Some(profile.n0) {
        errs.push(format!(
            "n0 = {} but e0 * f0 = {} * {}",
            profile.n0, profile.e0, profile.f0
        ));
    }

    let mut prev = (1u64, 1u64);
    let mut p_pow = 1u64;
    for (idx, d) in profile.cyclotomic.iter().enumerate() {
        let want = idx as u32 + 1;
        if d.i != want {
            errs.push(format!(
                "levels must be consecutive from 1: expected level {want}, found {}",
                d.i
            ));
        }
        if d.e == 0 || d.f == 0 {
            errs.push(format!("level {}: e and f must be positive", d.i));
            prev = (d.e.max(1), d.f.max(1));
            continue;
        }
        if d.e % prev.0 != 0 {
            errs.push(format!("e_{} ∤ e_{}", d.i.saturating_sub(1), d.i));
        }
        if d.f % prev.1 != 0 {
            errs.push(format!("f_{} ∤ f_{}", d.i.saturating_sub(1), d.i));
        }
        if is_prime(p) {
            if let Some(next) = p_pow.checked_mul(p) {
                p_pow = next;
                let unit_order = phi(p_pow);
                match d.e.checked_mul(d.f) {
                    Some(n) if unit_order.is_multiple_of(n) => {}
                    _ => errs.push(format!(
                        "n^({}) ∤ |units of Z/{}Z| = {}",
                        d.i, p_pow, unit_order
                    )),
                }
            }
        }
        prev = (d.e, d.f);
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// A field `F` as seen by the cyclic-extension counts: its degree over
/// `Q_p`, absolute inertia, and the exponent of its `p`-power roots of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicBaseProfile {
    pub p: u64,
    pub m: u64,
    pub f_abs: u64,
    pub xi: u32,
}

impl CyclicBaseProfile {
    pub fn new(p: u64, m: u64, f_abs: u64, xi: u32) -> Result<Self> {
        require_prime(p)?;
        if m == 0 || f_abs == 0 {
            return Err(CountError::Domain("m and f_abs must be positive".into()));
        }
        if !m.is_multiple_of(f_abs) {
            return Err(CountError::Domain(format!(
                "f_abs = {f_abs} does not divide m = {m}"
            )));
        }
        if p == 2 && xi == 0 {
            return Err(CountError::Domain(
                "xi >= 1 when p = 2 (-1 is a root of unity)".into(),
            ));
        }
        Ok(CyclicBaseProfile { p, m, f_abs, xi })
    }

    pub fn qp(p: u64) -> Result<Self> {
        Self::new(p, 1, 1, u32::from(p == 2))
    }

    pub fn from_base(profile: &BaseFieldProfile) -> Result<Self> {
        validate(profile).map_err(CountError::InvalidProfile)?;
        Self::new(profile.p, profile.n0, profile.f0, xi_of(profile)?)
    }
}
