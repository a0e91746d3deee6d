use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use padic_count::arith::p_valuation;
use padic_count::{qp_profile, BaseFieldProfile, CyclicBaseProfile};

use crate::output::FieldEcho;

/// Where the base field comes from.
#[derive(Debug, Clone)]
pub enum FieldSource {
    /// `Q_p`, with tower data generated to whatever depth the query needs.
    Qp(u64),
    /// A JSON profile file, used as given.
    Profile(PathBuf),
}

impl FieldSource {
    fn load(path: &Path) -> Result<BaseFieldProfile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading profile {}", path.display()))?;
        let profile = BaseFieldProfile::from_json(&text)
            .with_context(|| format!("loading profile {}", path.display()))?;
        Ok(profile)
    }

    fn echo(&self, profile: &BaseFieldProfile) -> FieldEcho {
        FieldEcho {
            source: match self {
                FieldSource::Qp(_) => "qp".to_string(),
                FieldSource::Profile(path) => path.display().to_string(),
            },
            p: profile.p,
            e0: profile.e0,
            f0: profile.f0,
        }
    }

    /// The base profile. For `Q_p` the tower reaches level `depth`.
    pub fn base(&self, depth: u32) -> Result<(BaseFieldProfile, FieldEcho)> {
        let profile = match self {
            FieldSource::Qp(p) => qp_profile(*p, depth)?,
            FieldSource::Profile(path) => Self::load(path)?,
        };
        let echo = self.echo(&profile);
        Ok((profile, echo))
    }

    pub fn cyclic(&self) -> Result<(CyclicBaseProfile, FieldEcho)> {
        match self {
            FieldSource::Qp(p) => {
                let field = CyclicBaseProfile::qp(*p)?;
                let profile = qp_profile(*p, 0)?;
                Ok((field, self.echo(&profile)))
            }
            FieldSource::Profile(path) => {
                let profile = Self::load(path)?;
                let field = CyclicBaseProfile::from_base(&profile)?;
                Ok((field, self.echo(&profile)))
            }
        }
    }

    pub fn prime(&self) -> Result<u64> {
        match self {
            FieldSource::Qp(p) => Ok(*p),
            FieldSource::Profile(path) => Ok(Self::load(path)?.p),
        }
    }
}

/// `v_p(x)`, the tower depth a query with ramification or degree `x` needs.
pub fn depth_for(p: u64, x: u64) -> Result<u32> {
    Ok(p_valuation(x, p)?.s)
}

/// Largest `s` with `p^s <= x`.
pub fn depth_up_to(p: u64, x: u64) -> u32 {
    let mut s = 0;
    let mut acc = p;
    while acc <= x {
        s += 1;
        match acc.checked_mul(p) {
            Some(next) => acc = next,
            None => break,
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_bounds() {
        assert_eq!(depth_up_to(2, 1), 0);
        assert_eq!(depth_up_to(2, 2), 1);
        assert_eq!(depth_up_to(2, 8), 3);
        assert_eq!(depth_up_to(3, 26), 2);
        assert_eq!(depth_up_to(2, u64::MAX), 63);
        assert_eq!(depth_for(3, 18).unwrap(), 2);
    }
}
