use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::arith::{divisors, phi, Count};
use crate::error::{CountError, Result};

pub const DEFAULT_MAX_TABLE_ORDER: usize = 48;

/// Largest table any builtin constructor will produce.
const BUILTIN_ORDER_LIMIT: usize = 1024;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Builds a table from its rows, checking the group axioms.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(CountError::Domain(
                "a group has at least one element".into(),
            ));
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(CountError::Domain(
                "multiplication table is not square".into(),
            ));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        if table.iter().any(|&x| x >= order) {
            return Err(CountError::Domain("table entry out of range".into()));
        }
        let at = |a: usize, b: usize| table[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| CountError::Domain("no identity element".into()))?;

        let mut seen = vec![false; order];
        for a in 0..order {
            for (line, is_row) in [(a, true), (a, false)] {
                seen.iter_mut().for_each(|s| *s = false);
                for b in 0..order {
                    let v = if is_row { at(line, b) } else { at(b, line) };
                    if std::mem::replace(&mut seen[v], true) {
                        return Err(CountError::Domain(format!(
                            "{} {line} is not a permutation",
                            if is_row { "row" } else { "column" }
                        )));
                    }
                }
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(CountError::Domain(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(a, b) == identity)
                    .expect("latin square")
            })
            .collect();
        Ok(GroupTable {
            order,
            table,
            identity,
            inverse,
        })
    }

    pub fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        Self::from_rows(
            (0..order)
                .map(|a| (0..order).map(|b| mul(a, b)).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// The named groups the oracle suites run over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinGroup {
    Cyclic(usize),
    /// Direct product of cyclic groups of the given orders.
    Abelian(Vec<usize>),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Quaternion8,
    Symmetric(usize),
    Alternating(usize),
}

impl fmt::Display for BuiltinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            BuiltinGroup::Cyclic(n) => write!(f, "cyclic({n})"),
            BuiltinGroup::Abelian(v) => write!(f, "abelian({})", join(v)),
            BuiltinGroup::Dihedral(n) => write!(f, "dihedral({n})"),
            BuiltinGroup::Quaternion8 => write!(f, "quaternion8"),
            BuiltinGroup::Symmetric(k) => write!(f, "symmetric({k})"),
            BuiltinGroup::Alternating(k) => write!(f, "alternating({k})"),
        }
    }
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

impl BuiltinGroup {
    pub fn order(&self) -> usize {
        match self {
            BuiltinGroup::Cyclic(n) => *n,
            BuiltinGroup::Abelian(v) => v.iter().product(),
            BuiltinGroup::Dihedral(n) => 2 * n,
            BuiltinGroup::Quaternion8 => 8,
            BuiltinGroup::Symmetric(k) => factorial(*k),
            BuiltinGroup::Alternating(k) => (factorial(*k) / 2).max(1),
        }
    }

    pub fn table(&self) -> Result<GroupTable> {
        match self {
            BuiltinGroup::Alternating(k) if *k != 4 => {
                return Err(CountError::Domain(format!(
                    "alternating({k}) is not a builtin; only alternating(4)"
                )))
            }
            BuiltinGroup::Symmetric(k) if *k == 0 || *k > 4 => {
                return Err(CountError::Domain(format!(
                    "symmetric({k}) is not a builtin; need 1 <= k <= 4"
                )))
            }
            BuiltinGroup::Cyclic(0) | BuiltinGroup::Dihedral(0) => {
                return Err(CountError::Domain(format!("{self} has no elements")))
            }
            BuiltinGroup::Abelian(v) if v.contains(&0) => {
                return Err(CountError::Domain(format!("{self} has a zero factor")))
            }
            _ => {}
        }
        if self.order() > BUILTIN_ORDER_LIMIT {
            return Err(CountError::Resource(format!(
                "{self} has order {}, above the builtin cap {BUILTIN_ORDER_LIMIT}",
                self.order()
            )));
        }
        match self {
            BuiltinGroup::Cyclic(n) => GroupTable::from_fn(*n, |a, b| (a + b) % n),
            BuiltinGroup::Abelian(factors) => {
                let n = self.order();
                let split = |mut x: usize| {
                    factors
                        .iter()
                        .map(|&m| {
                            let c = x % m;
                            x /= m;
                            c
                        })
                        .collect::<Vec<_>>()
                };
                GroupTable::from_fn(n, |a, b| {
                    let (ca, cb) = (split(a), split(b));
                    factors
                        .iter()
                        .enumerate()
                        .rev()
                        .fold(0, |acc, (i, &m)| acc * m + (ca[i] + cb[i]) % m)
                })
            }
            BuiltinGroup::Dihedral(n) => {
                // index = b * n + a  <->  r^a s^b
                let n = *n;
                GroupTable::from_fn(2 * n, |x, y| {
                    let (a, b) = (x % n, x / n);
                    let (c, d) = (y % n, y / n);
                    let a2 = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                    ((b + d) % 2) * n + a2
                })
            }
            BuiltinGroup::Quaternion8 => {
                // index = 4 * sign + unit, units 1, i, j, k
                const UNIT: [[(usize, usize); 4]; 4] = [
                    [(0, 0), (0, 1), (0, 2), (0, 3)],
                    [(0, 1), (1, 0), (0, 3), (1, 2)],
                    [(0, 2), (1, 3), (1, 0), (0, 1)],
                    [(0, 3), (0, 2), (1, 1), (1, 0)],
                ];
                GroupTable::from_fn(8, |x, y| {
                    let (s, u) = UNIT[x % 4][y % 4];
                    4 * ((x / 4 + y / 4 + s) % 2) + u
                })
            }
            BuiltinGroup::Symmetric(k) => permutation_table(permutations(*k)),
            BuiltinGroup::Alternating(k) => permutation_table(
                permutations(*k)
                    .into_iter()
                    .filter(|p| is_even(p))
                    .collect(),
            ),
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn is_even(perm: &[usize]) -> bool {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    inversions % 2 == 0
}

/// Table of a set of permutations closed under composition, `(a b)(x) = a(b(x))`.
fn permutation_table(perms: Vec<Vec<usize>>) -> Result<GroupTable> {
    let index: std::collections::HashMap<Vec<usize>, usize> = perms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    GroupTable::from_fn(perms.len(), |a, b| {
        let composed: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
        index[&composed]
    })
}

/// Parses a builtin group name with parameters, e.g. `("dihedral", [4])`.
pub fn builtin_group(name: &str, params: &[usize]) -> Result<GroupTable> {
    let one = || match params {
        [n] => Ok(*n),
        _ => Err(CountError::Domain(format!(
            "{name} takes exactly one parameter"
        ))),
    };
    let g = match name {
        "cyclic" => BuiltinGroup::Cyclic(one()?),
        "abelian" => BuiltinGroup::Abelian(params.to_vec()),
        "dihedral" => BuiltinGroup::Dihedral(one()?),
        "quaternion8" if params.is_empty() => BuiltinGroup::Quaternion8,
        "symmetric" => BuiltinGroup::Symmetric(one()?),
        "alternating" => BuiltinGroup::Alternating(one()?),
        _ => {
            return Err(CountError::Domain(format!(
                "unknown builtin group {name}{params:?}"
            )))
        }
    };
    g.table()
}

/// Subset of group elements as a bitset over element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ElemSet(Vec<u64>);

impl ElemSet {
    fn empty(order: usize) -> Self {
        ElemSet(vec![0; order.div_ceil(64)])
    }

    fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / 64, 1u64 << (x % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    fn contains(&self, x: usize) -> bool {
        self.0[x / 64] & (1 << (x % 64)) != 0
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits & (1 << b) != 0)
                .map(move |b| w * 64 + b)
        })
    }
}

#[derive(Debug, Clone)]
struct Subgroup {
    elems: ElemSet,
    gens: Vec<usize>,
}

fn closure(g: &GroupTable, gens: &[usize]) -> ElemSet {
    let mut set = ElemSet::empty(g.order());
    set.insert(g.identity());
    let mut queue = vec![g.identity()];
    while let Some(x) = queue.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                queue.push(y);
            }
        }
    }
    set
}

fn subgroup_lattice(g: &GroupTable, cap: usize) -> Result<Vec<Subgroup>> {
    if g.order() > cap {
        return Err(CountError::Resource(format!(
            "group of order {} exceeds the subgroup enumeration cap {cap}",
            g.order()
        )));
    }
    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut all: Vec<Subgroup> = Vec::new();
    for x in 0..g.order() {
        let elems = closure(g, &[x]);
        if seen.insert(elems.clone()) {
            all.push(Subgroup {
                elems,
                gens: vec![x],
            });
        }
    }
    let mut frontier_start = 0;
    while frontier_start < all.len() {
        let frontier_end = all.len();
        for a in frontier_start..frontier_end {
            for b in 0..frontier_end {
                let (ha, hb) = (&all[a], &all[b]);
                if ha.elems.is_subset(&hb.elems) || hb.elems.is_subset(&ha.elems) {
                    continue;
                }
                let gens: Vec<usize> = ha.gens.iter().chain(&hb.gens).copied().collect();
                let elems = closure(g, &gens);
                if seen.insert(elems.clone()) {
                    all.push(Subgroup { elems, gens });
                }
            }
        }
        frontier_start = frontier_end;
    }
    all.sort_by(|a, b| {
        a.elems
            .len()
            .cmp(&b.elems.len())
            .then_with(|| a.elems.cmp(&b.elems))
    });
    Ok(all)
}

/// All subgroups of `g` as sorted element-index lists, ordered by size.
pub fn subgroups(g: &GroupTable) -> Result<Vec<Vec<usize>>> {
    subgroups_with_cap(g, DEFAULT_MAX_TABLE_ORDER)
}

pub fn subgroups_with_cap(g: &GroupTable, cap: usize) -> Result<Vec<Vec<usize>>> {
    Ok(subgroup_lattice(g, cap)?
        .into_iter()
        .map(|h| h.elems.iter().collect())
        .collect())
}

/// Both sides of the conjugacy-class counting identity for subgroups of
/// index `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub n: u64,
    /// Conjugacy classes of subgroups of index `n`.
    pub lhs: Count,
    /// `(1/n) sum_{d | n} phi(d) T_n(C_d)`.
    pub rhs: Count,
    /// `d -> T_n(C_d)`: chains `H ◁ J <= G` with `(G:H) = n` and `J/H ≅ C_d`.
    pub chain_counts: BTreeMap<u64, Count>,
    pub equal: bool,
}

fn conjugate(g: &GroupTable, x: usize, h: &ElemSet) -> ElemSet {
    let xi = g.inv(x);
    let mut out = ElemSet::empty(g.order());
    for y in h.iter() {
        out.insert(g.mul(g.mul(x, y), xi));
    }
    out
}

/// Smallest `k >= 1` with `x^k ∈ h`.
fn coset_order(g: &GroupTable, x: usize, h: &ElemSet) -> usize {
    let mut y = x;
    let mut k = 1;
    while !h.contains(y) {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

pub fn lemma_check(g: &GroupTable, n: u64) -> Result<LemmaReport> {
    lemma_check_with_cap(g, n, DEFAULT_MAX_TABLE_ORDER)
}

pub fn lemma_check_with_cap(g: &GroupTable, n: u64, cap: usize) -> Result<LemmaReport> {
    let order = g.order() as u64;
    if n == 0 || !order.is_multiple_of(n) {
        return Err(CountError::Domain(format!(
            "index {n} does not divide |G| = {order}"
        )));
    }
    let lattice = subgroup_lattice(g, cap)?;
    let h_size = (order / n) as usize;
    let index_n: Vec<&Subgroup> = lattice.iter().filter(|h| h.elems.len() == h_size).collect();

    let classes: HashSet<ElemSet> = index_n
        .iter()
        .map(|h| {
            (0..g.order())
                .map(|x| conjugate(g, x, &h.elems))
                .min()
                .expect("nonempty group")
        })
        .collect();

    let mut chain_counts: BTreeMap<u64, Count> = divisors(n)
        .into_iter()
        .map(|d| (d, Count::zero()))
        .collect();
    for h in &index_n {
        for j in &lattice {
            let j_size = j.elems.len();
            if j_size % h_size != 0 || !h.elems.is_subset(&j.elems) {
                continue;
            }
            let d = j_size / h_size;
            let normal = j.elems.iter().all(|x| conjugate(g, x, &h.elems) == h.elems);
            if !normal {
                continue;
            }
            if j.elems.iter().any(|x| coset_order(g, x, &h.elems) == d) {
                let slot = chain_counts.get_mut(&(d as u64)).expect("d divides n");
                *slot = &*slot + &Count::one();
            }
        }
    }

    let weighted: u64 = chain_counts
        .iter()
        .map(|(&d, t)| phi(d) * t.to_u64().expect("small count"))
        .sum();
    if !weighted.is_multiple_of(n) {
        return Err(CountError::Consistency(format!(
            "sum phi(d) T_n(C_d) = {weighted} is not divisible by n = {n}"
        )));
    }
    let lhs = Count::from(classes.len() as u64);
    let rhs = Count::from(weighted / n);
    Ok(LemmaReport {
        n,
        equal: lhs == rhs,
        lhs,
        rhs,
        chain_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> GroupTable {
        BuiltinGroup::Symmetric(3).table().unwrap()
    }

    #[test]
    fn rejects_non_groups() {
        assert!(GroupTable::from_rows(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::from_rows(vec![vec![0, 1]]).is_err());
        // x*y = x - y mod 3 is a quasigroup but has no identity
        assert!(GroupTable::from_fn(3, |a, b| (a + 3 - b) % 3).is_err());
        assert!(GroupTable::from_rows(vec![vec![0]]).is_ok());
    }

    #[test]
    fn builtin_orders() {
        let c4 = builtin_group("cyclic", &[4]).unwrap();
        let orders: Vec<usize> = (0..4).map(|x| c4.element_order(x)).collect();
        assert_eq!(orders, vec![1, 4, 2, 4]);
        assert_eq!(builtin_group("dihedral", &[4]).unwrap().order(), 8);
        assert_eq!(builtin_group("symmetric", &[4]).unwrap().order(), 24);
        assert_eq!(builtin_group("alternating", &[4]).unwrap().order(), 12);
        assert_eq!(builtin_group("quaternion8", &[]).unwrap().order(), 8);
        assert_eq!(builtin_group("abelian", &[2, 6]).unwrap().order(), 12);
        assert!(builtin_group("mathieu", &[11]).is_err());
        assert!(builtin_group("symmetric", &[5]).is_err());
        assert!(builtin_group("alternating", &[5]).is_err());
    }

    #[test]
    fn s3_structure() {
        let g = s3();
        let mut orders: Vec<usize> = (0..6).map(|x| g.element_order(x)).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        // non-abelian
        assert!((0..6).any(|a| (0..6).any(|b| g.mul(a, b) != g.mul(b, a))));
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = BuiltinGroup::Quaternion8.table().unwrap();
        let involutions = (0..8).filter(|&x| q.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 4).count(), 6);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(
            subgroups(&BuiltinGroup::Cyclic(6).table().unwrap())
                .unwrap()
                .len(),
            4
        );
        assert_eq!(subgroups(&s3()).unwrap().len(), 6);
        assert_eq!(
            subgroups(&BuiltinGroup::Cyclic(1).table().unwrap())
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            subgroups(&BuiltinGroup::Dihedral(4).table().unwrap())
                .unwrap()
                .len(),
            10
        );
        assert_eq!(
            subgroups(&BuiltinGroup::Quaternion8.table().unwrap())
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            subgroups(&BuiltinGroup::Alternating(4).table().unwrap())
                .unwrap()
                .len(),
            10
        );
        assert_eq!(
            subgroups(&BuiltinGroup::Symmetric(4).table().unwrap())
                .unwrap()
                .len(),
            30
        );
        assert_eq!(
            subgroups(&BuiltinGroup::Abelian(vec![2, 2, 2]).table().unwrap())
                .unwrap()
                .len(),
            16
        );
    }

    #[test]
    fn subgroup_cap() {
        let g = BuiltinGroup::Cyclic(50).table().unwrap();
        assert!(matches!(subgroups(&g), Err(CountError::Resource(_))));
        assert_eq!(subgroups_with_cap(&g, 64).unwrap().len(), 6);
    }

    #[test]
    fn lattice_is_closed() {
        for grp in [
            BuiltinGroup::Symmetric(4),
            BuiltinGroup::Dihedral(6),
            BuiltinGroup::Quaternion8,
            BuiltinGroup::Abelian(vec![2, 4]),
        ] {
            let g = grp.table().unwrap();
            let lattice = subgroup_lattice(&g, 48).unwrap();
            let sets: HashSet<ElemSet> = lattice.iter().map(|h| h.elems.clone()).collect();
            for h in &lattice {
                for x in 0..g.order() {
                    assert!(sets.contains(&conjugate(&g, x, &h.elems)), "{grp}");
                }
                for k in &lattice {
                    let gens: Vec<usize> = h.elems.iter().chain(k.elems.iter()).collect();
                    assert!(sets.contains(&closure(&g, &gens)), "{grp}");
                }
            }
        }
    }

    #[test]
    fn lemma_s3_index_2() {
        let r = lemma_check(&s3(), 2).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (Count::one(), Count::one()));
        assert_eq!(r.chain_counts[&1], 1);
        assert_eq!(r.chain_counts[&2], 1);
        assert!(r.equal);
    }

    #[test]
    fn lemma_s3_index_6() {
        let r = lemma_check(&s3(), 6).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, 1);
        let t: Vec<(u64, u64)> = r
            .chain_counts
            .iter()
            .map(|(&d, c)| (d, c.to_u64().unwrap()))
            .collect();
        assert_eq!(t, vec![(1, 1), (2, 3), (3, 1), (6, 0)]);
    }

    #[test]
    fn lemma_index_1() {
        for g in [
            s3(),
            BuiltinGroup::Quaternion8.table().unwrap(),
            BuiltinGroup::Cyclic(5).table().unwrap(),
        ] {
            let r = lemma_check(&g, 1).unwrap();
            assert_eq!(
                (r.lhs.to_u64(), r.rhs.to_u64(), r.equal),
                (Some(1), Some(1), true)
            );
        }
    }

    #[test]
    fn lemma_rejects_non_divisor() {
        assert!(matches!(lemma_check(&s3(), 4), Err(CountError::Domain(_))));
    }
}
