//! Property suite tying every closed form to an independent route: brute
//! force over finite groups, a second algebraic form, or a consistency
//! identity between two evaluators.
//!
//! Each suite stops at its first counterexample and reports it.

use std::fmt;

use crate::arith::{divisor_pairs, divisors, Count, Limits};
use crate::counting::{
    cyclic_count_ef, cyclic_count_total, delta_count, krasner_count, pi_count, psi_count, DeltaFn,
    KrasnerQuery,
};
use crate::error::{CountError, Result};
use crate::oracles::{
    dual_cyclic_subgroup_counts, dual_group_for, lemma_check_with_cap, AbelianGroup, BuiltinGroup,
};
use crate::profiles::{qp_profile, CyclicBaseProfile};
use crate::theorems::{expand_iso_ef_with, expand_iso_total_with, tame_iso_count_checked};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Small,
    Full,
}

#[derive(Debug, Clone)]
pub struct SelfcheckConfig {
    pub max_abelian_order: u64,
    pub max_table_order: usize,
    pub grid: Grid,
    pub limits: Limits,
    /// Table used wherever a suite evaluates the correction terms.
    pub delta: DeltaFn,
}

impl Default for SelfcheckConfig {
    fn default() -> Self {
        SelfcheckConfig {
            // the full element-count grid reaches |C_27^3 x C_27| = 531441
            max_abelian_order: 1_000_000,
            max_table_order: crate::oracles::DEFAULT_MAX_TABLE_ORDER,
            grid: Grid::Full,
            limits: Limits::default(),
            delta: delta_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    /// Cases left out because an oracle group exceeded the order cap.
    pub skipped: usize,
    pub failure: Option<String>,
    /// What the suite ran over, when that is worth listing.
    pub coverage: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checks: 0,
            skipped: 0,
            failure: None,
            coverage: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Records one check; returns false once a failure has been recorded.
    fn check(&mut self, outcome: Result<Option<String>>) -> bool {
        self.checks += 1;
        match outcome {
            Ok(None) => true,
            Ok(Some(msg)) => {
                self.failure = Some(msg);
                false
            }
            Err(e) => {
                self.failure = Some(e.to_string());
                false
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {:<22} {} checks", self.name, self.checks)?,
            Some(msg) => write!(
                f,
                "FAIL {:<22} after {} checks: {msg}",
                self.name, self.checks
            )?,
        }
        if self.skipped > 0 {
            write!(f, " ({} skipped over the order cap)", self.skipped)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SelfcheckReport {
    pub suites: Vec<SuiteReport>,
}

impl SelfcheckReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn first_failure(&self) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| !s.passed())
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

fn mismatch(what: String, got: &Count, want: &Count) -> Option<String> {
    (got != want).then(|| format!("{what}: got {got}, expected {want}"))
}

/// Runs every suite. Brute-force oracles come first, so the first failure
/// points at the lowest-level ingredient that is wrong.
pub fn run(config: &SelfcheckConfig) -> SelfcheckReport {
    SelfcheckReport {
        suites: vec![
            lemma_suite(config),
            element_count_suite(config),
            delta_suite(config),
            dual_group_suite(config),
            theorem_suite(config),
            golden_suite(config),
        ],
    }
}

/// Hand-derived reference values.
pub fn golden_values(config: &SelfcheckConfig) -> Vec<(&'static str, Result<Count>, u64)> {
    let lim = &config.limits;
    let delta = config.delta;
    let krasner = |p, e, f| krasner_count(&KrasnerQuery { p, n0: 1, e, f }, lim);
    let iso_ef = |p, e, f| {
        let k = qp_profile(p, 4)?;
        Ok(expand_iso_ef_with(&k, e, f, lim, delta)?.value)
    };
    let iso_n = |p, n| {
        let k = qp_profile(p, 4)?;
        Ok(expand_iso_total_with(&k, n, lim, delta)?.value)
    };
    let cyc_ef = |p, e, f| cyclic_count_ef(&CyclicBaseProfile::qp(p)?, e, f, lim);
    let cyc_d = |p, d| cyclic_count_total(&CyclicBaseProfile::qp(p)?, d, lim);
    vec![
        ("N(Q_2, e=2, f=1)", krasner(2, 2, 1), 6),
        ("N(Q_3, e=3, f=1)", krasner(3, 3, 1), 21),
        ("I(Q_2, e=2, f=1)", iso_ef(2, 2, 1), 6),
        ("I(Q_3, e=3, f=1)", iso_ef(3, 3, 1), 9),
        ("I(Q_2, n=2)", iso_n(2, 2), 7),
        ("I(Q_3, n=3)", iso_n(3, 3), 10),
        ("I(Q_5, e=2, f=1)", iso_ef(5, 2, 1), 2),
        ("C(Q_2, e=2, f=1)", cyc_ef(2, 2, 1), 6),
        ("C(Q_2, d=2)", cyc_d(2, 2), 7),
        ("C(Q_3, d=3)", cyc_d(3, 3), 4),
    ]
}

pub fn golden_suite(config: &SelfcheckConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("golden values");
    for (name, got, want) in golden_values(config) {
        let outcome = got.map(|g| mismatch(name.to_string(), &g, &Count::from(want)));
        if !rep.check(outcome) {
            break;
        }
    }
    rep
}

/// Invariant-factor lists `d_1 | d_2 | ...` with at least two factors, all
/// `>= 2`, and product at most `max_order`.
fn noncyclic_abelian(max_order: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, product: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() >= 2 {
            out.push(prefix.clone());
        }
        let last = *prefix.last().unwrap_or(&1);
        let mut next = if prefix.is_empty() { 2 } else { last };
        while product * next <= max {
            if next % last == 0 {
                prefix.push(next);
                extend(prefix, product * next, max, out);
                prefix.pop();
            }
            next += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out.sort_by_key(|v| (v.iter().product::<usize>(), v.clone()));
    out
}

/// The groups the conjugacy-class identity is checked on, restricted to
/// order at most `max_order`.
pub fn lemma_groups(grid: Grid, max_order: usize) -> Vec<BuiltinGroup> {
    let (cyclic_max, abelian_max, dihedral_max) = match grid {
        Grid::Full => (24, 48, 12),
        Grid::Small => (12, 12, 6),
    };
    let mut groups: Vec<BuiltinGroup> = (1..=cyclic_max).map(BuiltinGroup::Cyclic).collect();
    groups.extend(
        noncyclic_abelian(abelian_max)
            .into_iter()
            .map(BuiltinGroup::Abelian),
    );
    groups.extend((3..=dihedral_max).map(BuiltinGroup::Dihedral));
    groups.push(BuiltinGroup::Quaternion8);
    groups.push(BuiltinGroup::Symmetric(3));
    if grid == Grid::Full {
        groups.push(BuiltinGroup::Symmetric(4));
        groups.push(BuiltinGroup::Alternating(4));
    }
    groups.retain(|g| g.order() <= max_order);
    groups
}

pub fn lemma_suite(config: &SelfcheckConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma (subgroups)");
    'groups: for group in lemma_groups(config.grid, config.max_table_order) {
        rep.coverage.push(group.to_string());
        let table = match group.table() {
            Ok(t) => t,
            Err(e) => {
                rep.check(Err(e));
                break;
            }
        };
        for n in divisors(table.order() as u64) {
            let outcome = lemma_check_with_cap(&table, n, config.max_table_order).map(|r| {
                (!r.equal).then(|| {
                    format!(
                        "{group}, index {n}: {} classes but (1/n) sum phi(d) T_n(C_d) = {} with T = {:?}",
                        r.lhs,
                        r.rhs,
                        r.chain_counts.iter().map(|(d, t)| (*d, t.to_string())).collect::<Vec<_>>()
                    )
                })
            });
            if !rep.check(outcome) {
                break 'groups;
            }
        }
    }
    rep
}

pub fn element_count_suite(config: &SelfcheckConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("element counts");
    let (primes, m_max, r_max, uv_max): (&[u64], u32, u32, u64) = match config.grid {
        Grid::Full => (&[2, 3], 3, 3, 30),
        Grid::Small => (&[2, 3], 2, 2, 12),
    };
    let cap = config.max_abelian_order;
    for &p in primes {
        for m in 1..=m_max {
            for r in 0..=r_max {
                for xi in 0..=r_max {
                    let mut factors = vec![p.pow(r); m as usize];
                    factors.push(p.pow(xi.min(r)));
                    let group = match AbelianGroup::with_cap(factors, cap) {
                        Ok(g) => g,
                        Err(CountError::Resource(_)) => {
                            rep.skipped += 1;
                            continue;
                        }
                        Err(e) => {
                            rep.check(Err(e));
                            return rep;
                        }
                    };
                    let hist = group.order_histogram();
                    for s in 0..=r {
                        let brute = Count::from(hist.get(&p.pow(s)).copied().unwrap_or(0));
                        let outcome = pi_count(p, m as u64, s, xi, &config.limits).map(|got| {
                            mismatch(
                                format!("Pi_{p}(m={m}, s={s}, xi={xi}) against r={r}"),
                                &got,
                                &brute,
                            )
                        });
                        if !rep.check(outcome) {
                            return rep;
                        }
                    }
                }
            }
        }
    }
    for u in 1..=uv_max {
        for v in 1..=uv_max {
            let group = match AbelianGroup::with_cap(vec![u, v], cap) {
                Ok(g) => g,
                Err(_) => {
                    rep.skipped += 1;
                    continue;
                }
            };
            let brute = Count::from(group.order_histogram().get(&u).copied().unwrap_or(0));
            let outcome =
                psi_count(u, v).map(|got| mismatch(format!("psi({u}, {v})"), &got, &brute));
            if !rep.check(outcome) {
                return rep;
            }
        }
    }
    rep
}

/// Partial sums of the correction table against `Pi` at the matching `xi`.
pub fn delta_suite(config: &SelfcheckConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("delta telescoping");
    let (primes, m_max, s_max): (&[u64], u64, u32) = match config.grid {
        Grid::Full => (&[2, 3, 5], 3, 3),
        Grid::Small => (&[2, 3], 2, 2),
    };
    let lim = &config.limits;
    for &p in primes {
        for m in 1..=m_max {
            for s in 0..=s_max {
                let mut acc = Count::zero();
                for j in 0..=s + 2 {
                    let outcome = (|| {
                        let row = (config.delta)(p, m, s, j, lim)?;
                        acc = &acc + &row;
                        let pi = pi_count(p, m, s, j, lim)?;
                        Ok((acc != pi).then(|| {
                            format!(
                                "Delta row p={p} m={m} s={s} i={j} (value {row}): partial sum {acc} != Pi_{p}({m}, {s}, {j}) = {pi}"
                            )
                        }))
                    })();
                    if !rep.check(outcome) {
                        return rep;
                    }
                }
            }
        }
    }
    rep
}

/// Cyclic counts against subgroup enumeration in the dual group, and the
/// split-by-ramification sum against the total.
pub fn dual_group_suite(config: &SelfcheckConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("dual group");
    let (m_max, d_max, decomp_max) = match config.grid {
        Grid::Full => (2u64, 12u64, 24u64),
        Grid::Small => (1, 6, 12),
    };
    let lim = &config.limits;
    let mut fields = Vec::new();
    for p in [2u64, 3] {
        for m in 1..=m_max {
            for f_abs in (1..=2).filter(|f| m % f == 0) {
                for xi in 0..=1 {
                    if let Ok(fld) = CyclicBaseProfile::new(p, m, f_abs, xi) {
                        fields.push(fld);
                    }
                }
            }
        }
    }
    for fld in &fields {
        for d in 1..=decomp_max {
            let outcome = (|| {
                let total = cyclic_count_total(fld, d, lim)?;
                let mut split = Count::zero();
                for (e, f) in divisor_pairs(d) {
                    split = &split + &cyclic_count_ef(fld, e, f, lim)?;
                }
                Ok(mismatch(
                    format!("sum_(ef={d}) C(F, e, f) for {fld:?}"),
                    &split,
                    &total,
                ))
            })();
            if !rep.check(outcome) {
                return rep;
            }
            if d > d_max {
                continue;
            }
            let (group, mask) = match dual_group_for(fld, d, config.max_abelian_order) {
                Ok(g) => g,
                Err(CountError::Resource(_)) => {
                    rep.skipped += 1;
                    continue;
                }
                Err(e) => {
                    rep.check(Err(e));
                    return rep;
                }
            };
            let by_f = match dual_cyclic_subgroup_counts(&group, &mask, d) {
                Ok(m) => m,
                Err(e) => {
                    rep.check(Err(e));
                    return rep;
                }
            };
            for (e, f) in divisor_pairs(d) {
                let brute = Count::from(by_f.get(&f).copied().unwrap_or(0));
                let outcome = cyclic_count_ef(fld, e, f, lim).map(|got| {
                    mismatch(
                        format!("C(F, e={e}, f={f}) for {fld:?} against the dual group"),
                        &got,
                        &brute,
                    )
                });
                if !rep.check(outcome) {
                    return rep;
                }
            }
            let brute_total = Count::from(by_f.values().sum::<u64>());
            let outcome = cyclic_count_total(fld, d, lim).map(|got| {
                mismatch(
                    format!("C(F, d={d}) for {fld:?} against the dual group"),
                    &got,
                    &brute_total,
                )
            });
            if !rep.check(outcome) {
                return rep;
            }
        }
    }
    rep
}

/// Degree totals against the ramification/inertia split, the tame closed
/// form against the general one, and the mass bounds against Krasner.
pub fn theorem_suite(config: &SelfcheckConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("theorem consistency");
    let (n_max, e_max, f_max) = match config.grid {
        Grid::Full => (12u64, 10u64, 6u64),
        Grid::Small => (6, 5, 3),
    };
    let lim = &config.limits;
    let delta = config.delta;

    let sandwich = |p: u64, e: u64, f: u64, iso: &Count| -> Result<Option<String>> {
        let n = krasner_count(&KrasnerQuery { p, n0: 1, e, f }, lim)?;
        let upper = iso * &Count::from(e * f);
        Ok((iso > &n || n > upper)
            .then(|| format!("mass bound fails for Q_{p}, e={e}, f={f}: I = {iso}, N = {n}")))
    };

    for p in [2u64, 3] {
        let k = match qp_profile(p, 4) {
            Ok(k) => k,
            Err(e) => {
                rep.check(Err(e));
                return rep;
            }
        };
        for n in 1..=n_max {
            let outcome = (|| {
                let total = expand_iso_total_with(&k, n, lim, delta)?.value;
                let mut split = Count::zero();
                for (e, f) in divisor_pairs(n) {
                    let iso = expand_iso_ef_with(&k, e, f, lim, delta)?.value;
                    if let Some(msg) = sandwich(p, e, f, &iso)? {
                        return Ok(Some(msg));
                    }
                    split = &split + &iso;
                }
                Ok(mismatch(
                    format!("I(Q_{p}, n={n}) against sum_(ef=n) I(Q_{p}, e, f)"),
                    &total,
                    &split,
                ))
            })();
            if !rep.check(outcome) {
                return rep;
            }
        }
    }

    for p in [3u64, 5, 7] {
        let k = match qp_profile(p, 1) {
            Ok(k) => k,
            Err(e) => {
                rep.check(Err(e));
                return rep;
            }
        };
        for e in (1..=e_max).filter(|e| e % p != 0) {
            for f in 1..=f_max {
                let outcome = (|| {
                    let tame = tame_iso_count_checked(&k, e, f)?;
                    let general = expand_iso_ef_with(&k, e, f, lim, delta)?.value;
                    if let Some(msg) = sandwich(p, e, f, &general)? {
                        return Ok(Some(msg));
                    }
                    Ok(mismatch(
                        format!("tame form against general form at Q_{p}, e={e}, f={f}"),
                        &tame,
                        &general,
                    ))
                })();
                if !rep.check(outcome) {
                    return rep;
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factor_lists() {
        let small = noncyclic_abelian(16);
        assert_eq!(
            small,
            vec![
                vec![2, 2],
                vec![2, 2, 2],
                vec![2, 4],
                vec![3, 3],
                vec![2, 6],
                vec![2, 2, 2, 2],
                vec![2, 2, 4],
                vec![2, 8],
                vec![4, 4],
            ]
        );
    }

    #[test]
    fn lemma_groups_respect_cap() {
        let names: Vec<String> = lemma_groups(Grid::Full, 6)
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert!(names.contains(&"symmetric(3)".to_string()));
        assert!(names.contains(&"cyclic(6)".to_string()));
        assert!(lemma_groups(Grid::Full, 6).iter().all(|g| g.order() <= 6));
    }

    #[test]
    fn small_grid_passes() {
        let cfg = SelfcheckConfig {
            grid: Grid::Small,
            ..SelfcheckConfig::default()
        };
        let report = run(&cfg);
        for s in &report.suites {
            assert!(s.passed(), "{s}");
            assert!(s.checks > 0, "{s}");
        }
    }
}
