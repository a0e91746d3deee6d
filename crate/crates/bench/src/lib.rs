//! Benchmark workloads.

use padic_count::oracles::{builtin_group, subgroups, GroupTable};
use padic_count::theorems::iso_count_total;
use padic_count::{qp_profile, Count, Limits};

/// `I(Q_p, n)` for every `n <= n_max`.
pub fn degree_totals(p: u64, n_max: u64) -> Vec<Count> {
    let mut depth = 0;
    while p.pow(depth + 1) <= n_max {
        depth += 1;
    }
    let k = qp_profile(p, depth).expect("p is prime");
    let lim = Limits::default();
    (1..=n_max)
        .map(|n| iso_count_total(&k, n, &lim).expect("within limits"))
        .collect()
}

pub fn table(name: &str, params: &[usize]) -> GroupTable {
    builtin_group(name, params).expect("builtin group")
}

/// Number of subgroups, the cost driver of the subgroup-lattice oracle.
pub fn subgroup_count(g: &GroupTable) -> usize {
    subgroups(g).expect("under the order cap").len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_sane() {
        assert_eq!(degree_totals(2, 4), [1u64, 7, 2, 59].map(Count::from));
        assert_eq!(subgroup_count(&table("symmetric", &[4])), 30);
    }
}
