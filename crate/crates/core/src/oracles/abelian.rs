use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;

use crate::arith::{gcd_with_p_power_minus_one, split_p, Count};
use crate::error::{CountError, Result};
use crate::profiles::CyclicBaseProfile;

pub const DEFAULT_MAX_ABELIAN_ORDER: u64 = 100_000;

/// A direct product of cyclic groups `C_{n_1} x ... x C_{n_k}`.
///
/// Elements are coordinate tuples, encoded as mixed-radix integers with the
/// first factor least significant. Trivial factors `C_1` are allowed so that
/// a product can mirror a displayed decomposition slot by slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: u64,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        Self::with_cap(factors, DEFAULT_MAX_ABELIAN_ORDER)
    }

    pub fn with_cap(factors: Vec<u64>, cap: u64) -> Result<Self> {
        if factors.contains(&0) {
            return Err(CountError::Domain(
                "cyclic factor orders must be positive".into(),
            ));
        }
        let mut order = 1u64;
        for &n in &factors {
            order = match order.checked_mul(n) {
                Some(o) if o <= cap => o,
                _ => {
                    return Err(CountError::Resource(format!(
                        "group {factors:?} exceeds the order cap {cap}"
                    )))
                }
            };
        }
        Ok(AbelianGroup { factors, order })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    fn coords(&self, mut idx: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&n| {
                let x = idx % n;
                idx /= n;
                x
            })
            .collect()
    }

    fn encode(&self, coords: &[u64]) -> u64 {
        self.factors
            .iter()
            .zip(coords)
            .rev()
            .fold(0, |acc, (&n, &x)| acc * n + x)
    }

    fn element_order(&self, coords: &[u64]) -> u64 {
        self.factors
            .iter()
            .zip(coords)
            .fold(1u64, |acc, (&n, &x)| acc.lcm(&(n / n.gcd(&x))))
    }

    /// Map from element order to the number of elements of that order.
    pub fn order_histogram(&self) -> BTreeMap<u64, u64> {
        let mut hist = BTreeMap::new();
        let mut coords = vec![0u64; self.factors.len()];
        for _ in 0..self.order {
            *hist.entry(self.element_order(&coords)).or_insert(0) += 1;
            for (c, &n) in coords.iter_mut().zip(&self.factors) {
                *c += 1;
                if *c < n {
                    break;
                }
                *c = 0;
            }
        }
        hist
    }

    /// The cyclic subgroup generated by the element `coords`, as a sorted
    /// list of encoded elements.
    fn cyclic_subgroup(&self, coords: &[u64]) -> Vec<u64> {
        let mut cur = vec![0u64; coords.len()];
        let mut out = Vec::new();
        loop {
            out.push(self.encode(&cur));
            for ((c, &g), &n) in cur.iter_mut().zip(coords).zip(&self.factors) {
                *c = (*c + g) % n;
            }
            if cur.iter().all(|&c| c == 0) {
                break;
            }
        }
        out.sort_unstable();
        out
    }
}

/// Number of elements of order exactly `u`, by enumeration.
pub fn element_order_count(group: &AbelianGroup, u: u64) -> Count {
    Count::from(group.order_histogram().get(&u).copied().unwrap_or(0))
}

/// Number of cyclic subgroups `H` of order `d` with `|H ∩ B| = f`, where
/// `B` is the subgroup of elements supported on the masked factors.
///
/// Every element of order `d` is expanded into the subgroup it generates;
/// subgroups are deduplicated by their sorted element lists.
pub fn dual_cyclic_subgroup_count(
    group: &AbelianGroup,
    distinguished: &[bool],
    d: u64,
    f: u64,
) -> Result<Count> {
    let by_f = dual_cyclic_subgroup_counts(group, distinguished, d)?;
    Ok(Count::from(by_f.get(&f).copied().unwrap_or(0)))
}

/// Cyclic subgroups of order `d`, tallied by `|H ∩ B|`.
pub fn dual_cyclic_subgroup_counts(
    group: &AbelianGroup,
    distinguished: &[bool],
    d: u64,
) -> Result<BTreeMap<u64, u64>> {
    if distinguished.len() != group.factors().len() {
        return Err(CountError::Domain(format!(
            "mask has {} entries for {} factors",
            distinguished.len(),
            group.factors().len()
        )));
    }
    let in_b = |idx: u64| {
        group
            .coords(idx)
            .iter()
            .zip(distinguished)
            .all(|(&x, &keep)| keep || x == 0)
    };
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut by_f = BTreeMap::new();
    for idx in 0..group.order() {
        let c = group.coords(idx);
        if group.element_order(&c) != d {
            continue;
        }
        let h = group.cyclic_subgroup(&c);
        if seen.contains(&h) {
            continue;
        }
        let meet = h.iter().filter(|&&x| in_b(x)).count() as u64;
        *by_f.entry(meet).or_insert(0) += 1;
        seen.insert(h);
    }
    Ok(by_f)
}

/// The character group of `F^x / (F^x)^d` laid out as
/// `C_d x C_z x C_{p^r}^m x C_{p^{min(xi, r)}}`, with `d = p^r k` and
/// `z = gcd(k, p^{f_abs} - 1)`, together with the mask selecting the first
/// factor (the annihilator of the unit part).
pub fn dual_group_for(
    field: &CyclicBaseProfile,
    d: u64,
    cap: u64,
) -> Result<(AbelianGroup, Vec<bool>)> {
    if d == 0 {
        return Err(CountError::Domain("d must be positive".into()));
    }
    let p = field.p;
    let split = split_p(d, p);
    let z = gcd_with_p_power_minus_one(split.h, p, field.f_abs);
    let pr = p
        .checked_pow(split.s)
        .ok_or_else(|| CountError::Resource(format!("{p}^{} overflows", split.s)))?;
    let mut factors = vec![d, z];
    factors.extend(std::iter::repeat_n(pr, field.m as usize));
    factors.push(p.pow(field.xi.min(split.s)));
    let mut mask = vec![false; factors.len()];
    mask[0] = true;
    Ok((AbelianGroup::with_cap(factors, cap)?, mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::phi;

    #[test]
    fn order_count_examples() {
        let g = AbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(element_order_count(&g, 2), 3);
        let g = AbelianGroup::new(vec![4, 2]).unwrap();
        assert_eq!(element_order_count(&g, 4), 4);
        for n in 1..=40 {
            let g = AbelianGroup::new(vec![n]).unwrap();
            assert_eq!(element_order_count(&g, n), phi(n));
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            AbelianGroup::with_cap(vec![10, 10, 10], 999),
            Err(CountError::Resource(_))
        ));
        assert!(AbelianGroup::new(vec![3, 0]).is_err());
    }

    #[test]
    fn dual_count_examples_for_q2() {
        let g = AbelianGroup::new(vec![2, 2, 2]).unwrap();
        let mask = [true, false, false];
        assert_eq!(dual_cyclic_subgroup_count(&g, &mask, 2, 2).unwrap(), 1);
        assert_eq!(dual_cyclic_subgroup_count(&g, &mask, 2, 1).unwrap(), 6);
    }

    #[test]
    fn dual_trivial_subgroup() {
        for factors in [vec![1], vec![1, 3, 3], vec![1, 1, 2]] {
            let mask: Vec<bool> = (0..factors.len()).map(|i| i == 0).collect();
            let g = AbelianGroup::new(factors).unwrap();
            assert_eq!(dual_cyclic_subgroup_count(&g, &mask, 1, 1).unwrap(), 1);
        }
    }

    #[test]
    fn dual_group_layout() {
        let q2 = CyclicBaseProfile::qp(2).unwrap();
        let (g, mask) = dual_group_for(&q2, 2, DEFAULT_MAX_ABELIAN_ORDER).unwrap();
        assert_eq!(g.factors(), &[2, 1, 2, 2]);
        assert_eq!(mask, vec![true, false, false, false]);
        let q3 = CyclicBaseProfile::qp(3).unwrap();
        let (g, _) = dual_group_for(&q3, 6, DEFAULT_MAX_ABELIAN_ORDER).unwrap();
        // k = 2, z = gcd(2, 3 - 1) = 2, r = 1, xi = 0
        assert_eq!(g.factors(), &[6, 2, 3, 1]);
    }

    #[test]
    fn encoding_round_trips() {
        let g = AbelianGroup::new(vec![3, 4, 5]).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.encode(&g.coords(i)), i);
        }
    }
}
