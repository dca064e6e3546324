//! Structural algorithms on finite groups: conjugacy classes, commutator
//! subgroups, abelian invariants, subgroup enumeration, brute-force
//! isomorphism testing. Everything here is desk scale and exact; subgroup
//! work is capped at `ANALYSIS_CAP` elements.

use std::collections::{HashMap, HashSet};

use super::{Elem, FiniteGroup, ANALYSIS_CAP};
use crate::error::{Error, Result};

/// Conjugacy class data: canonical representatives (least element code per
/// class, classes sorted by representative), sizes, and the class index of
/// every element.
#[derive(Debug, Clone)]
pub struct Classes {
    pub reps: Vec<Elem>,
    pub sizes: Vec<u64>,
    pub class_of: Vec<u32>,
}

impl Classes {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

/// A subgroup recorded as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub elems: Vec<Elem>,
    pub normal: bool,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    pub fn index_in(&self, g: &FiniteGroup) -> u64 {
        g.order() / self.order()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elems.binary_search(&x).is_ok()
    }
}

/// Elementary divisors `d_1 | d_2 | .. | d_r` of a finite abelian group,
/// in increasing divisibility order, all > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub divisors: Vec<u64>,
}

impl AbelianInvariants {
    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }
}

impl FiniteGroup {
    pub fn conjugacy_classes(&self) -> &Classes {
        self.inner.classes.get_or_init(|| {
            assert!(
                self.order() <= ANALYSIS_CAP,
                "class computation needs order <= 4096"
            );
            let n = self.order() as usize;
            let gens = self.generators().to_vec();
            let mut class_of = vec![u32::MAX; n];
            let mut reps = Vec::new();
            let mut sizes = Vec::new();
            for start in 0..n as u64 {
                if class_of[start as usize] != u32::MAX {
                    continue;
                }
                let id = reps.len() as u32;
                let mut frontier = vec![start];
                class_of[start as usize] = id;
                let mut size = 1u64;
                while let Some(x) = frontier.pop() {
                    for &g in &gens {
                        let y = self.conj(g, x);
                        if class_of[y as usize] == u32::MAX {
                            class_of[y as usize] = id;
                            size += 1;
                            frontier.push(y);
                        }
                    }
                }
                reps.push(start);
                sizes.push(size);
            }
            Classes {
                reps,
                sizes,
                class_of,
            }
        })
    }

    pub fn class_count(&self) -> usize {
        self.conjugacy_classes().count()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> &[Elem] {
        self.inner.center.get_or_init(|| {
            let gens = self.generators().to_vec();
            self.elements()
                .filter(|&x| gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
                .collect()
        })
    }

    /// The commutator subgroup, as a sorted element list.
    pub fn derived_subgroup(&self) -> &[Elem] {
        self.inner.derived.get_or_init(|| {
            let members: Vec<Elem> = self.elements().collect();
            derived_of(self, &members)
        })
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        let members: Vec<Elem> = self.elements().collect();
        abelian_invariants_of(self, &members)
    }
}

/// Closure of `seed` under multiplication: the subgroup it generates.
pub fn closure(g: &FiniteGroup, seed: &[Elem]) -> Vec<Elem> {
    let mut set = HashSet::new();
    set.insert(g.identity());
    let mut list = vec![g.identity()];
    let mut frontier = vec![g.identity()];
    let seed: Vec<Elem> = seed.to_vec();
    while let Some(x) = frontier.pop() {
        for &s in &seed {
            let y = g.mul(x, s);
            if set.insert(y) {
                list.push(y);
                frontier.push(y);
            }
        }
    }
    list.sort_unstable();
    list
}

/// A small generating set for the subgroup whose sorted element list is
/// `members`: greedily add elements not yet generated.
pub fn generators_of(g: &FiniteGroup, members: &[Elem]) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut have: Vec<Elem> = vec![g.identity()];
    for &x in members {
        if have.binary_search(&x).is_err() {
            gens.push(x);
            have = closure(g, &gens);
            if have.len() == members.len() {
                break;
            }
        }
    }
    gens
}

pub(crate) fn greedy_generators(g: &FiniteGroup) -> Vec<Elem> {
    let members: Vec<Elem> = g.elements().collect();
    generators_of(g, &members)
}

/// Closure of `seed` under multiplication and conjugation by `conj_gens`:
/// the normal closure inside the subgroup those generators generate.
pub fn normal_closure(g: &FiniteGroup, seed: &[Elem], conj_gens: &[Elem]) -> Vec<Elem> {
    let mut set: HashSet<Elem> = HashSet::new();
    set.insert(g.identity());
    let mut list = vec![g.identity()];
    let mut frontier: Vec<Elem> = Vec::new();
    for &s in seed {
        if set.insert(s) {
            list.push(s);
            frontier.push(s);
        }
    }
    let mut i = 0;
    while i < frontier.len() {
        let x = frontier[i];
        i += 1;
        // close under conjugation
        for &c in conj_gens {
            let y = g.conj(c, x);
            if set.insert(y) {
                list.push(y);
                frontier.push(y);
            }
        }
        // close under multiplication against everything so far
        let snapshot: Vec<Elem> = list.clone();
        for &y in &snapshot {
            for z in [g.mul(x, y), g.mul(y, x)] {
                if set.insert(z) {
                    list.push(z);
                    frontier.push(z);
                }
            }
        }
    }
    list.sort_unstable();
    list
}

/// Commutator subgroup of the subgroup with element list `members`.
pub fn derived_of(g: &FiniteGroup, members: &[Elem]) -> Vec<Elem> {
    let gens = generators_of(g, members);
    let mut seed = Vec::new();
    for &a in &gens {
        for &b in &gens {
            seed.push(g.commutator(a, b));
        }
    }
    normal_closure(g, &seed, &gens)
}

/// Coset labels of `normal` inside the subgroup `members` (both sorted):
/// returns (representatives in first-encounter order, label of each member).
/// The identity coset gets label 0 and representatives are coset minima.
pub fn coset_labels(
    g: &FiniteGroup,
    members: &[Elem],
    normal: &[Elem],
) -> (Vec<Elem>, HashMap<Elem, u32>) {
    let mut label: HashMap<Elem, u32> = HashMap::new();
    let mut reps = Vec::new();
    for &x in members {
        if label.contains_key(&x) {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &d in normal {
            label.insert(g.mul(x, d), id);
        }
    }
    (reps, label)
}

/// Multiplication oracle for a quotient subgroup/normal pair built from
/// `coset_labels` output.
pub struct QuotientMul<'a> {
    g: &'a FiniteGroup,
    reps: Vec<Elem>,
    label: HashMap<Elem, u32>,
}

impl<'a> QuotientMul<'a> {
    pub fn new(g: &'a FiniteGroup, members: &[Elem], normal: &[Elem]) -> QuotientMul<'a> {
        let (reps, label) = coset_labels(g, members, normal);
        QuotientMul { g, reps, label }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.label[&self.g.mul(self.reps[a as usize], self.reps[b as usize])]
    }

    pub fn rep(&self, a: u32) -> Elem {
        self.reps[a as usize]
    }

    pub fn label_of(&self, x: Elem) -> u32 {
        self.label[&x]
    }

    /// Materialises the quotient as a table group plus the projection map
    /// from parent element codes to quotient codes.
    pub fn as_table_group(&self, name: String) -> Result<(FiniteGroup, HashMap<Elem, u32>)> {
        let q = self.order();
        let mut mul = vec![0u32; q * q];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                mul[a as usize * q + b as usize] = self.mul(a, b);
            }
        }
        Ok((FiniteGroup::from_table(mul, name)?, self.label.clone()))
    }
}

/// Elementary divisors of the abelianization of the subgroup `members`.
pub fn abelian_invariants_of(g: &FiniteGroup, members: &[Elem]) -> AbelianInvariants {
    let derived = derived_of(g, members);
    let quot = QuotientMul::new(g, members, &derived);
    let q = quot.order() as u32;
    let mul = |a: u32, b: u32| quot.mul(a, b);
    let divisors = abelian_divisors(q, &mul);
    AbelianInvariants { divisors }
}

/// Elementary divisors (increasing divisibility, > 1) of an abstract finite
/// abelian group given by an order and a multiplication oracle on `0..order`
/// with identity 0.
pub fn abelian_divisors(order: u32, mul: &dyn Fn(u32, u32) -> u32) -> Vec<u64> {
    let basis = abelian_basis_abstract(order, mul);
    merge_prime_power_divisors(&basis.orders)
}

fn merge_prime_power_divisors(orders: &[u64]) -> Vec<u64> {
    // Group the prime-power orders by prime, sort each descending, then take
    // componentwise products to get the divisor chain.
    let mut by_prime: HashMap<u64, Vec<u64>> = HashMap::new();
    for &d in orders {
        let p = smallest_prime_factor(d);
        by_prime.entry(p).or_default().push(d);
    }
    let mut rows: Vec<Vec<u64>> = by_prime.into_values().collect();
    for row in rows.iter_mut() {
        row.sort_unstable_by(|a, b| b.cmp(a));
    }
    let rank = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for i in 0..rank {
        let mut d = 1;
        for row in &rows {
            if i < row.len() {
                d *= row[i];
            }
        }
        out.push(d);
    }
    out.reverse(); // increasing divisibility
    out
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n.max(2)
}

/// A basis of a finite abelian group: independent generators of prime-power
/// order whose cyclic spans give a direct-sum decomposition, plus the full
/// discrete-log table.
pub struct AbstractAbelianBasis {
    pub gens: Vec<u32>,
    pub orders: Vec<u64>,
    pub dlog: HashMap<u32, Vec<u64>>,
}

pub fn abelian_basis_abstract(order: u32, mul: &dyn Fn(u32, u32) -> u32) -> AbstractAbelianBasis {
    let pow = |mut x: u32, mut e: u64| -> u32 {
        let mut acc = 0u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, x);
            }
            x = mul(x, x);
            e >>= 1;
        }
        acc
    };
    let ord = |x: u32| -> u64 {
        let mut n = 1u64;
        let mut y = x;
        while y != 0 {
            y = mul(y, x);
            n += 1;
        }
        n
    };

    let mut gens: Vec<u32> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    // generated: element -> exponent vector over current basis
    let mut generated: HashMap<u32, Vec<u64>> = HashMap::new();
    generated.insert(0, Vec::new());

    while (generated.len() as u32) < order {
        // Element of maximal order in the quotient by the generated subgroup.
        let mut best: Option<(u32, u64)> = None;
        for x in 0..order {
            if generated.contains_key(&x) {
                continue;
            }
            // quotient order of x: least t with x^t generated; t divides ord(x)
            let full = ord(x);
            let t = (1..=full)
                .filter(|d| full % d == 0)
                .find(|&d| generated.contains_key(&pow(x, d)))
                .unwrap_or(full);
            if best.is_none_or(|(_, bd)| t > bd) {
                best = Some((x, t));
            }
        }
        let (gx, d) = best.expect("non-trivial quotient must have an element");
        // Adjust so the d-th power is the identity: x^d = prod gens^t_i with
        // d | t_i, replace x by x * prod gens^(-t_i/d).
        let h = pow(gx, d);
        let t = generated
            .get(&h)
            .expect("x^d lies in the generated subgroup")
            .clone();
        let mut adjusted = gx;
        for (i, &ti) in t.iter().enumerate() {
            assert_eq!(
                ti % d,
                0,
                "maximal-order basis step: exponent must be divisible"
            );
            let e = (orders[i] - ti / d % orders[i]) % orders[i];
            adjusted = mul(adjusted, pow(gens[i], e));
        }
        debug_assert_eq!(pow(adjusted, d), 0);
        gens.push(adjusted);
        orders.push(d);
        // extend the generated subgroup and dlog table
        let mut next: HashMap<u32, Vec<u64>> = HashMap::new();
        for (&e, vec) in &generated {
            let mut y = e;
            for j in 0..d {
                let mut v = vec.clone();
                v.push(j);
                next.insert(y, v);
                y = mul(y, adjusted);
            }
        }
        generated = next;
        assert_eq!(
            generated.len() as u64,
            orders.iter().product::<u64>(),
            "basis spans must be independent"
        );
    }
    AbstractAbelianBasis {
        gens,
        orders,
        dlog: generated,
    }
}

/// Basis and discrete logs for an abelian `FiniteGroup` (used for linear
/// character tables).
pub struct AbelianBasis {
    pub gens: Vec<Elem>,
    pub orders: Vec<u64>,
    pub dlog: HashMap<Elem, Vec<u64>>,
}

pub fn abelian_basis(g: &FiniteGroup) -> AbelianBasis {
    assert!(g.is_abelian(), "abelian_basis needs an abelian group");
    assert!(g.order() <= ANALYSIS_CAP);
    let order = g.order() as u32;
    let mul = |a: u32, b: u32| g.mul(a as u64, b as u64) as u32;
    let basis = abelian_basis_abstract(order, &mul);
    AbelianBasis {
        gens: basis.gens.iter().map(|&x| x as u64).collect(),
        orders: basis.orders,
        dlog: basis.dlog.into_iter().map(|(k, v)| (k as u64, v)).collect(),
    }
}

pub fn is_normal(g: &FiniteGroup, members: &[Elem]) -> bool {
    let sub_gens = generators_of(g, members);
    g.generators().iter().all(|&c| {
        sub_gens
            .iter()
            .all(|&s| members.binary_search(&g.conj(c, s)).is_ok())
    })
}

/// Maximal subgroups of an l-group: preimages of hyperplanes in the
/// Frattini quotient.
pub fn maximal_subgroups(g: &FiniteGroup, members: &[Elem]) -> Vec<Vec<Elem>> {
    let l = match g.prime() {
        Some(l) => l,
        None if members.len() == 1 => return Vec::new(),
        None => {
            // subgroup of an ambient non-l-group; get the prime from the size
            let p = smallest_prime_factor(members.len() as u64);
            assert!(
                is_power_of(members.len() as u64, p),
                "maximal subgroup enumeration needs an l-group"
            );
            p
        }
    };
    if members.len() == 1 {
        return Vec::new();
    }
    let gens = generators_of(g, members);
    let derived = derived_of(g, members);
    let mut seed: Vec<Elem> = derived.clone();
    for &x in &gens {
        seed.push(g.pow(x, l));
    }
    let frattini_seed = normal_closure(g, &seed, &gens);
    let quot = QuotientMul::new(g, members, &frattini_seed);
    let q = quot.order() as u32;
    let mul = |a: u32, b: u32| quot.mul(a, b);
    let basis = abelian_basis_abstract(q, &mul);
    let r = basis.gens.len();
    debug_assert!(basis.orders.iter().all(|&d| d == l));
    // Functionals F_l^r -> F_l up to scalar: first nonzero coefficient = 1.
    let mut out = Vec::new();
    let mut coeffs = vec![0u64; r];
    loop {
        // advance mixed-radix counter
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            coeffs[i] += 1;
            if coeffs[i] < l {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if coeffs.iter().rev().find(|&&c| c != 0) != Some(&1) {
            continue; // normalize the leading coefficient to 1
        }
        let mut sub: Vec<Elem> = members
            .iter()
            .copied()
            .filter(|&x| {
                let v = &basis.dlog[&quot.label_of(x)];
                let s: u64 = v.iter().zip(coeffs.iter()).map(|(&a, &c)| a * c % l).sum();
                s.is_multiple_of(l)
            })
            .collect();
        sub.sort_unstable();
        out.push(sub);
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 {
        if !n.is_multiple_of(p) {
            return false;
        }
        n /= p;
    }
    true
}

/// All subgroups of index at most `bound` (an l-power), each with its
/// normality flag, ordered by (index, element list).
pub fn subgroups_up_to_index(g: &FiniteGroup, bound: u64) -> Result<Vec<Subgroup>> {
    if g.order() > ANALYSIS_CAP {
        return Err(Error::CapExceeded {
            what: "subgroup enumeration",
            got: g.order(),
            cap: ANALYSIS_CAP,
        });
    }
    let all: Vec<Elem> = g.elements().collect();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut frontier = vec![all.clone()];
    seen.insert(all);
    let mut index = 1u64;
    while index < bound {
        let mut next = Vec::new();
        for sub in &frontier {
            for m in maximal_subgroups(g, sub) {
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        frontier = next;
        index *= match g.prime() {
            Some(l) => l,
            None => break,
        };
        if frontier.is_empty() {
            break;
        }
    }
    let mut out: Vec<Subgroup> = seen
        .into_iter()
        .map(|elems| {
            let normal = is_normal(g, &elems);
            Subgroup { elems, normal }
        })
        .collect();
    out.sort_by(|a, b| {
        b.elems
            .len()
            .cmp(&a.elems.len())
            .then(a.elems.cmp(&b.elems))
    });
    Ok(out)
}

/// Every subgroup of a small group (brute force; order <= 64).
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    assert!(g.order() <= 64, "full subgroup lattice is brute force only");
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let trivial = vec![g.identity()];
    seen.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(sub) = frontier.pop() {
        for x in g.elements() {
            if sub.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = generators_of(g, &sub);
            gens.push(x);
            let bigger = closure(g, &gens);
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Subgroup> = seen
        .into_iter()
        .map(|elems| {
            let normal = is_normal(g, &elems);
            Subgroup { elems, normal }
        })
        .collect();
    out.sort_by(|a, b| {
        b.elems
            .len()
            .cmp(&a.elems.len())
            .then(a.elems.cmp(&b.elems))
    });
    out
}

/// Builds a table group from a subgroup's element list; returns the group and
/// the list mapping new codes to parent codes. The identity stays at code 0.
pub fn subgroup_as_group(
    g: &FiniteGroup,
    members: &[Elem],
    name: String,
) -> Result<(FiniteGroup, Vec<Elem>)> {
    if members.len() as u64 == g.order() {
        // the whole group: keep its structural form
        return Ok((g.clone(), members.to_vec()));
    }
    let n = members.len();
    let index: HashMap<Elem, u32> = members
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as u32))
        .collect();
    if members.first() != Some(&g.identity()) {
        return Err(Error::NotSubgroup(
            "element list must be sorted and contain 0".into(),
        ));
    }
    let mut mul = vec![0u32; n * n];
    for (i, &x) in members.iter().enumerate() {
        for (j, &y) in members.iter().enumerate() {
            let z = g.mul(x, y);
            let Some(&k) = index.get(&z) else {
                return Err(Error::NotSubgroup(format!(
                    "{} * {} leaves the element set",
                    g.describe(x),
                    g.describe(y)
                )));
            };
            mul[i * n + j] = k;
        }
    }
    Ok((FiniteGroup::from_table(mul, name)?, members.to_vec()))
}

/// Exhaustive isomorphism test for groups of order at most 64.
pub fn is_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    if a.order() != b.order() {
        return false;
    }
    assert!(a.order() <= 64, "isomorphism testing is brute force only");
    // cheap invariant: multiset of element orders
    let mut oa: Vec<u64> = a.elements().map(|x| a.element_order(x)).collect();
    let mut ob: Vec<u64> = b.elements().map(|x| b.element_order(x)).collect();
    oa.sort_unstable();
    ob.sort_unstable();
    if oa != ob {
        return false;
    }
    let gens = generators_of(a, &a.elements().collect::<Vec<_>>());
    let mut images: Vec<Elem> = Vec::new();
    extend_iso(a, b, &gens, &mut images)
}

fn extend_iso(a: &FiniteGroup, b: &FiniteGroup, gens: &[Elem], images: &mut Vec<Elem>) -> bool {
    if images.len() == gens.len() {
        return check_hom_bijective(a, b, gens, images);
    }
    let next = gens[images.len()];
    let target_order = a.element_order(next);
    for cand in b.elements() {
        if b.element_order(cand) != target_order {
            continue;
        }
        images.push(cand);
        if partial_hom_consistent(a, b, &gens[..images.len()], images)
            && extend_iso(a, b, gens, images)
        {
            return true;
        }
        images.pop();
    }
    false
}

fn partial_hom_map(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
) -> Option<HashMap<Elem, Elem>> {
    let mut map: HashMap<Elem, Elem> = HashMap::new();
    map.insert(a.identity(), b.identity());
    let mut frontier = vec![a.identity()];
    while let Some(x) = frontier.pop() {
        let mx = map[&x];
        for (&g, &mg) in gens.iter().zip(images.iter()) {
            let y = a.mul(x, g);
            let my = b.mul(mx, mg);
            match map.get(&y) {
                Some(&prev) if prev != my => return None,
                Some(_) => {}
                None => {
                    map.insert(y, my);
                    frontier.push(y);
                }
            }
        }
    }
    Some(map)
}

fn partial_hom_consistent(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
) -> bool {
    partial_hom_map(a, b, gens, images).is_some()
}

fn check_hom_bijective(a: &FiniteGroup, b: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> bool {
    match partial_hom_map(a, b, gens, images) {
        None => false,
        Some(map) => {
            if map.len() as u64 != a.order() {
                return false;
            }
            let values: HashSet<Elem> = map.values().copied().collect();
            values.len() as u64 == b.order()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::build::build_group;
    use super::*;

    #[test]
    fn cyclic_classes_are_singletons() {
        let g = build_group("cyclic(4)").unwrap();
        let c = g.conjugacy_classes();
        assert_eq!(c.count(), 4);
        assert!(c.sizes.iter().all(|&s| s == 1));
    }

    #[test]
    fn wreath_c2_c2_classes() {
        let g = build_group("wreath(c2,c2)").unwrap();
        let c = g.conjugacy_classes();
        let mut sizes = c.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn heisenberg_classes_brute_force() {
        let g = build_group("heisenberg(2,1)").unwrap();
        assert_eq!(g.class_count(), 5);
        let g = build_group("heisenberg(2,2)").unwrap();
        assert_eq!(g.class_count(), 22);
    }

    #[test]
    fn class_equation() {
        for spec in ["wreath(c2,c2)", "heisenberg(2,2)", "wreath(c3,c3)"] {
            let g = build_group(spec).unwrap();
            let c = g.conjugacy_classes();
            assert_eq!(c.sizes.iter().sum::<u64>(), g.order());
            assert!(c.sizes.iter().all(|&s| g.order() % s == 0));
        }
    }

    #[test]
    fn centers_of_l_groups_nontrivial() {
        for spec in [
            "wreath(c2,c2)",
            "heisenberg(2,2)",
            "wreath(c3,c3)",
            "cyclic(8)",
        ] {
            let g = build_group(spec).unwrap();
            assert!(g.center().len() > 1, "{spec}");
        }
    }

    #[test]
    fn abelianizations() {
        let g = build_group("cyclic(4)").unwrap();
        assert_eq!(g.abelianization().divisors, vec![4]);
        let g = build_group("wreath(c2,c2)").unwrap();
        assert_eq!(g.abelianization().divisors, vec![2, 2]);
        for k in [1u32, 2] {
            let g = build_group(&format!("heisenberg(2,{k})")).unwrap();
            let d = 1u64 << k;
            assert_eq!(g.abelianization().divisors, vec![d, d], "k={k}");
        }
    }

    #[test]
    fn abelianization_order_divides() {
        for spec in [
            "wreath(c2,c2)",
            "heisenberg(2,2)",
            "semidirect(c2,torus(2,2,2))",
        ] {
            let g = build_group(spec).unwrap();
            let ab = g.abelianization().order();
            assert_eq!(g.order() % ab, 0);
            let abelian = g.class_count() as u64 == g.order();
            assert_eq!(ab == g.order(), abelian);
        }
    }

    #[test]
    fn subgroups_of_cyclic_8() {
        let g = build_group("cyclic(8)").unwrap();
        let subs = subgroups_up_to_index(&g, 4).unwrap();
        let orders: Vec<u64> = subs.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![8, 4, 2]);
        assert!(subs.iter().all(|s| s.normal));
    }

    #[test]
    fn maximal_subgroups_of_d4() {
        let g = build_group("wreath(c2,c2)").unwrap();
        let subs = subgroups_up_to_index(&g, 2).unwrap();
        assert_eq!(subs.len(), 4); // whole group + three maximals
        assert_eq!(subs.iter().filter(|s| s.index_in(&g) == 2).count(), 3);
    }

    #[test]
    fn index_one_is_whole_group() {
        let g = build_group("heisenberg(2,1)").unwrap();
        let subs = subgroups_up_to_index(&g, 1).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 8);
    }

    #[test]
    fn d4_all_subgroups_count() {
        // D_4 has 10 subgroups, 8 of them normal (all but the two pairs of
        // non-central reflections, which form 2 conjugate pairs = 4 subgroups,
        // leaving 6 normal).
        let g = build_group("wreath(c2,c2)").unwrap();
        let subs = all_subgroups(&g);
        assert_eq!(subs.len(), 10);
        assert_eq!(subs.iter().filter(|s| s.normal).count(), 6);
    }

    #[test]
    fn sylow_symmetric_2_2_is_wreath() {
        let a = build_group("sylow_symmetric(2,2)").unwrap();
        let b = build_group("wreath(c2,c2)").unwrap();
        assert!(is_isomorphic(&a, &b));
        let c = build_group("cyclic(8)").unwrap();
        assert!(!is_isomorphic(&a, &c));
    }

    #[test]
    fn abelian_basis_of_torus() {
        let g = build_group("product(cyclic(4),cyclic(2))").unwrap();
        let basis = abelian_basis(&g);
        let mut orders = basis.orders.clone();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 4]);
        assert_eq!(basis.dlog.len(), 8);
    }
}
