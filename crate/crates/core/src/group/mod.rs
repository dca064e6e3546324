//! Finite groups with two element representations behind one interface:
//! explicit multiplication tables, and structural forms (cyclic, products,
//! wreath products, permutation-by-torus semidirect products, Heisenberg
//! quotients) whose elements are mixed-radix codes multiplied in place.
//! Semidirect families never expand a table; memory stays flat.

mod analysis;
mod build;

pub use analysis::{
    abelian_basis, abelian_basis_abstract, abelian_divisors, abelian_invariants_of, all_subgroups,
    closure, coset_labels, derived_of, generators_of, is_isomorphic, is_normal, maximal_subgroups,
    normal_closure, subgroup_as_group, subgroups_up_to_index, AbelianBasis, AbelianInvariants,
    AbstractAbelianBasis, Classes, QuotientMul, Subgroup,
};
pub use build::{
    build_from_expr, build_group, build_group_capped, parse_expr, torus_group, Arg, Expr,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::perm::{lcm, Perm};

pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;
pub const ANALYSIS_CAP: u64 = 1 << 12;

/// Element handle: a dense code in `[0, order)`. Code 0 is the identity.
pub type Elem = u64;

#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupInner>,
}

pub(crate) struct GroupInner {
    kind: GroupKind,
    order: u64,
    prime: Option<u64>,
    name: String,
    gens: OnceLock<Vec<Elem>>,
    classes: OnceLock<Classes>,
    center: OnceLock<Vec<Elem>>,
    derived: OnceLock<Vec<Elem>>,
    exponent: OnceLock<u64>,
}

pub(crate) enum GroupKind {
    Cyclic(u64),
    Product(FiniteGroup, FiniteGroup),
    /// `C_l` wreath `base`: pairs `(c, f)` with `c` in `C_l`, `f` in `base^l`.
    Wreath {
        l: u64,
        base: FiniteGroup,
    },
    /// `Q ⋉ (Z/m)^n` for a permutation group `Q` on `n` points, `m = l^k`.
    Semidirect {
        perms: PermGroupData,
        modulus: u64,
        rank: usize,
    },
    /// Upper unitriangular 3x3 matrices over `Z/m`, elements `(a, b, c)`.
    Heisenberg {
        modulus: u64,
    },
    Table(TableData),
}

pub(crate) struct TableData {
    pub order: usize,
    pub mul: Vec<u32>,
    pub inv: Vec<u32>,
}

pub(crate) struct PermGroupData {
    pub perms: Vec<Perm>,
    pub index: HashMap<Vec<u32>, usize>,
    pub n: usize,
}

impl PermGroupData {
    /// Closes `gens` to a full permutation group, sorted with the identity first.
    pub fn generate(n: usize, gens: &[Perm]) -> PermGroupData {
        let mut set: Vec<Perm> = vec![Perm::identity(n)];
        let mut frontier = vec![Perm::identity(n)];
        let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
        seen.insert(Perm::identity(n).images().to_vec(), ());
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q = g.compose(&p);
                if seen.insert(q.images().to_vec(), ()).is_none() {
                    set.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        set.sort();
        let index = set
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images().to_vec(), i))
            .collect();
        PermGroupData {
            perms: set,
            index,
            n,
        }
    }

    pub fn lookup(&self, p: &Perm) -> usize {
        self.index[p.images()]
    }
}

impl FiniteGroup {
    pub(crate) fn from_kind(kind: GroupKind, name: String) -> FiniteGroup {
        let order = match &kind {
            GroupKind::Cyclic(m) => *m,
            GroupKind::Product(a, b) => a.order() * b.order(),
            GroupKind::Wreath { l, base } => l * base.order().pow(*l as u32),
            GroupKind::Semidirect {
                perms,
                modulus,
                rank,
            } => perms.perms.len() as u64 * modulus.pow(*rank as u32),
            GroupKind::Heisenberg { modulus } => modulus.pow(3),
            GroupKind::Table(t) => t.order as u64,
        };
        let prime = prime_power_base(order);
        FiniteGroup {
            inner: Arc::new(GroupInner {
                kind,
                order,
                prime,
                name,
                gens: OnceLock::new(),
                classes: OnceLock::new(),
                center: OnceLock::new(),
                derived: OnceLock::new(),
                exponent: OnceLock::new(),
            }),
        }
    }

    /// Builds a table group from an explicit multiplication table.
    /// `mul[i * order + j]` is the product of elements `i` and `j`;
    /// index 0 must be the identity.
    pub fn from_table(mul: Vec<u32>, name: String) -> Result<FiniteGroup> {
        let order = (mul.len() as f64).sqrt().round() as usize;
        if order * order != mul.len() {
            return Err(Error::InvalidParam(
                "multiplication table is not square".into(),
            ));
        }
        let mut inv = vec![u32::MAX; order];
        for i in 0..order {
            if mul[i * order] != i as u32 || mul[i] != i as u32 {
                return Err(Error::InvalidParam(
                    "index 0 is not a two-sided identity".into(),
                ));
            }
            for j in 0..order {
                if mul[i * order + j] == 0 {
                    inv[i] = j as u32;
                }
            }
        }
        if inv.contains(&u32::MAX) {
            return Err(Error::InvalidParam("an element has no inverse".into()));
        }
        Ok(FiniteGroup::from_kind(
            GroupKind::Table(TableData { order, mul, inv }),
            name,
        ))
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    /// `Some(l)` when the order is a power of the prime `l` (and > 1).
    pub fn prime(&self) -> Option<u64> {
        self.inner.prime
    }

    pub fn is_l_group(&self, l: u64) -> bool {
        self.inner.prime == Some(l) || self.order() == 1
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.order
    }

    pub fn generators(&self) -> &[Elem] {
        self.inner.gens.get_or_init(|| match &self.inner.kind {
            GroupKind::Table(_) => analysis::greedy_generators(self),
            kind => structural_generators(kind, self.inner.order),
        })
    }

    pub(crate) fn same_group(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.inner.order && b < self.inner.order);
        match &self.inner.kind {
            GroupKind::Cyclic(m) => (a + b) % m,
            GroupKind::Product(x, y) => {
                let nb = y.order();
                x.mul(a / nb, b / nb) * nb + y.mul(a % nb, b % nb)
            }
            GroupKind::Wreath { l, base } => {
                let (c1, f1) = wreath_decode(*l, base.order(), a);
                let (c2, f2) = wreath_decode(*l, base.order(), b);
                let l = *l as usize;
                let c = (c1 + c2) % l as u64;
                // (c1,f1)(c2,f2) = (c1+c2, f1 . (c1 . f2)), (c.f)(i) = f(i - c).
                let f: Vec<Elem> = (0..l)
                    .map(|i| {
                        let j = (i + l - c1 as usize) % l;
                        base.mul(f1[i], f2[j])
                    })
                    .collect();
                wreath_encode(l as u64, base.order(), c, &f)
            }
            GroupKind::Semidirect {
                perms,
                modulus,
                rank,
            } => {
                let (q1, v1) = semidirect_decode(perms, *modulus, *rank, a);
                let (q2, v2) = semidirect_decode(perms, *modulus, *rank, b);
                let q = perms.lookup(&perms.perms[q1].compose(&perms.perms[q2]));
                // v = v1 + q1 . v2 with (q.v)[q(i)] = v[i].
                let p1 = &perms.perms[q1];
                let mut v = v1;
                for (i, &x) in v2.iter().enumerate() {
                    let t = &mut v[p1.apply(i)];
                    *t = (*t + x) % *modulus;
                }
                semidirect_encode(*modulus, *rank, q, &v)
            }
            GroupKind::Heisenberg { modulus } => {
                let m = *modulus;
                let (a1, b1, c1) = (a / (m * m), a / m % m, a % m);
                let (a2, b2, c2) = (b / (m * m), b / m % m, b % m);
                let aa = (a1 + a2) % m;
                let bb = (b1 + b2) % m;
                let cc = (c1 + c2 + a1 * b2) % m;
                (aa * m + bb) * m + cc
            }
            GroupKind::Table(t) => t.mul[a as usize * t.order + b as usize] as u64,
        }
    }

    pub fn inv(&self, a: Elem) -> Elem {
        match &self.inner.kind {
            GroupKind::Cyclic(m) => (m - a) % m,
            GroupKind::Product(x, y) => {
                let nb = y.order();
                x.inv(a / nb) * nb + y.inv(a % nb)
            }
            GroupKind::Wreath { l, base } => {
                let (c, f) = wreath_decode(*l, base.order(), a);
                let l = *l as usize;
                let ci = (l as u64 - c) % l as u64;
                // (c,f)^-1 = (-c, g) with g(j) = f(j + c)^-1.
                let g: Vec<Elem> = (0..l).map(|j| base.inv(f[(j + c as usize) % l])).collect();
                wreath_encode(l as u64, base.order(), ci, &g)
            }
            GroupKind::Semidirect {
                perms,
                modulus,
                rank,
            } => {
                let (q, v) = semidirect_decode(perms, *modulus, *rank, a);
                let pinv = perms.perms[q].inverse();
                let qi = perms.lookup(&pinv);
                // (q,v)^-1 = (q^-1, -(q^-1 . v)).
                let mut w = vec![0u64; *rank];
                for (i, &x) in v.iter().enumerate() {
                    w[pinv.apply(i)] = (*modulus - x) % *modulus;
                }
                semidirect_encode(*modulus, *rank, qi, &w)
            }
            GroupKind::Heisenberg { modulus } => {
                let m = *modulus;
                let (a1, b1, c1) = (a / (m * m), a / m % m, a % m);
                let aa = (m - a1) % m;
                let bb = (m - b1) % m;
                let cc = ((a1 * b1) % m + m - c1) % m;
                (aa * m + bb) * m + cc
            }
            GroupKind::Table(t) => t.inv[a as usize] as u64,
        }
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let mut acc = self.identity();
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn element_order(&self, a: Elem) -> u64 {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// lcm of all element orders (cached).
    pub fn exponent(&self) -> u64 {
        *self.inner.exponent.get_or_init(|| {
            let mut e = 1;
            for g in self.elements() {
                e = lcm(e, self.element_order(g));
            }
            e
        })
    }

    /// The canonical permutation action, where one exists: cyclic groups
    /// rotate their own order, wreath products act imprimitively on
    /// `l * (base points)`, products act on disjoint unions, semidirect
    /// groups project to their permutation part.
    pub fn perm_action(&self) -> Option<(usize, Vec<Perm>)> {
        match &self.inner.kind {
            GroupKind::Cyclic(m) => {
                let n = *m as usize;
                Some((
                    n,
                    self.elements()
                        .map(|a| Perm::rotation(n, a as usize))
                        .collect(),
                ))
            }
            GroupKind::Product(x, y) => {
                let (nx, px) = x.perm_action()?;
                let (ny, py) = y.perm_action()?;
                let n = nx + ny;
                let perms = self
                    .elements()
                    .map(|a| {
                        let (ax, ay) = (a / y.order(), a % y.order());
                        let mut images = Vec::with_capacity(n);
                        images.extend(px[ax as usize].images().iter().copied());
                        images.extend(py[ay as usize].images().iter().map(|&i| i + nx as u32));
                        Perm::from_images(images).unwrap()
                    })
                    .collect();
                Some((n, perms))
            }
            GroupKind::Wreath { l, base } => {
                let (nb, pb) = base.perm_action()?;
                let lu = *l as usize;
                let n = lu * nb;
                let perms = self
                    .elements()
                    .map(|a| {
                        let (c, f) = wreath_decode(*l, base.order(), a);
                        let mut images = vec![0u32; n];
                        // (c,f) . (block i, y) = (block i+c, f(i+c) . y)
                        for i in 0..lu {
                            let ti = (i + c as usize) % lu;
                            let pf = &pb[f[ti] as usize];
                            for y in 0..nb {
                                images[i * nb + y] = (ti * nb + pf.apply(y)) as u32;
                            }
                        }
                        Perm::from_images(images).unwrap()
                    })
                    .collect();
                Some((n, perms))
            }
            GroupKind::Semidirect {
                perms,
                modulus,
                rank,
            } => {
                let out = self
                    .elements()
                    .map(|a| {
                        let (q, _) = semidirect_decode(perms, *modulus, *rank, a);
                        perms.perms[q].clone()
                    })
                    .collect();
                Some((*rank, out))
            }
            _ => None,
        }
    }

    /// Monomial form `(sigma, v)` for torus-semidirect groups.
    pub fn monomial_form(&self, a: Elem) -> Option<(Perm, Vec<u64>)> {
        match &self.inner.kind {
            GroupKind::Semidirect {
                perms,
                modulus,
                rank,
            } => {
                let (q, v) = semidirect_decode(perms, *modulus, *rank, a);
                Some((perms.perms[q].clone(), v))
            }
            _ => None,
        }
    }

    /// `(l, base)` for wreath products `C_l wr base`.
    pub fn wreath_params(&self) -> Option<(u64, &FiniteGroup)> {
        match &self.inner.kind {
            GroupKind::Wreath { l, base } => Some((*l, base)),
            _ => None,
        }
    }

    /// Decodes `(c, f)` for wreath product elements.
    pub fn wreath_form(&self, a: Elem) -> Option<(u64, Vec<Elem>)> {
        match &self.inner.kind {
            GroupKind::Wreath { l, base } => Some(wreath_decode(*l, base.order(), a)),
            _ => None,
        }
    }

    /// The two factors of a direct product group.
    pub fn product_parts(&self) -> Option<(FiniteGroup, FiniteGroup)> {
        match &self.inner.kind {
            GroupKind::Product(a, b) => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    /// `(modulus, rank)` of the torus part for semidirect groups.
    pub fn semidirect_params(&self) -> Option<(u64, usize)> {
        match &self.inner.kind {
            GroupKind::Semidirect { modulus, rank, .. } => Some((*modulus, *rank)),
            _ => None,
        }
    }

    /// The abelian-normal/complement split for semidirect and Heisenberg
    /// groups: (torus or (a, 0, c)-plane, point complement), both sorted.
    pub fn split_data(&self) -> Option<(Vec<Elem>, Vec<Elem>)> {
        match &self.inner.kind {
            GroupKind::Semidirect {
                perms,
                modulus,
                rank,
            } => {
                if *modulus == 1 {
                    return None;
                }
                let block = modulus.pow(*rank as u32);
                let normal: Vec<Elem> = (0..block).collect();
                let comp: Vec<Elem> = (0..perms.perms.len() as u64).map(|q| q * block).collect();
                Some((normal, comp))
            }
            GroupKind::Heisenberg { modulus } => {
                let m = *modulus;
                let mut normal: Vec<Elem> = (0..m)
                    .flat_map(|a| (0..m).map(move |c| a * m * m + c))
                    .collect();
                normal.sort_unstable();
                let comp: Vec<Elem> = (0..m).map(|b| b * m).collect();
                Some((normal, comp))
            }
            _ => None,
        }
    }

    pub fn describe(&self, a: Elem) -> String {
        match &self.inner.kind {
            GroupKind::Cyclic(_) => format!("{a}"),
            GroupKind::Product(x, y) => {
                let nb = y.order();
                format!("({}, {})", x.describe(a / nb), y.describe(a % nb))
            }
            GroupKind::Wreath { l, base } => {
                let (c, f) = wreath_decode(*l, base.order(), a);
                let parts: Vec<String> = f.iter().map(|&x| base.describe(x)).collect();
                format!("({c}; {})", parts.join(", "))
            }
            GroupKind::Semidirect {
                perms,
                modulus,
                rank,
            } => {
                let (q, v) = semidirect_decode(perms, *modulus, *rank, a);
                format!("({}; {:?})", perms.perms[q], v)
            }
            GroupKind::Heisenberg { modulus } => {
                let m = *modulus;
                format!("({}, {}, {})", a / (m * m), a / m % m, a % m)
            }
            GroupKind::Table(_) => format!("g{a}"),
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.inner.name, self.inner.order)
    }
}

fn wreath_decode(l: u64, base_order: u64, code: Elem) -> (u64, Vec<Elem>) {
    let block = base_order.pow(l as u32);
    let c = code / block;
    let mut rest = code % block;
    let mut f = vec![0u64; l as usize];
    for i in (0..l as usize).rev() {
        f[i] = rest % base_order;
        rest /= base_order;
    }
    (c, f)
}

fn wreath_encode(l: u64, base_order: u64, c: u64, f: &[Elem]) -> Elem {
    let mut code = c;
    for i in 0..l as usize {
        code = code * base_order + f[i];
    }
    code
}

fn semidirect_decode(
    _perms: &PermGroupData,
    modulus: u64,
    rank: usize,
    code: Elem,
) -> (usize, Vec<u64>) {
    let block = modulus.pow(rank as u32);
    let q = (code / block) as usize;
    let mut rest = code % block;
    let mut v = vec![0u64; rank];
    for i in (0..rank).rev() {
        v[i] = rest % modulus;
        rest /= modulus;
    }
    (q, v)
}

fn semidirect_encode(modulus: u64, rank: usize, q: usize, v: &[u64]) -> Elem {
    let mut code = q as u64;
    for i in 0..rank {
        code = code * modulus + v[i];
    }
    code
}

fn prime_power_base(order: u64) -> Option<u64> {
    if order <= 1 {
        return None;
    }
    let mut n = order;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            return if n == 1 { Some(p) } else { None };
        }
        p += 1;
    }
    Some(n)
}

fn structural_generators(kind: &GroupKind, order: u64) -> Vec<Elem> {
    match kind {
        GroupKind::Cyclic(m) => {
            if *m == 1 {
                vec![]
            } else {
                vec![1]
            }
        }
        GroupKind::Product(x, y) => {
            let nb = y.order();
            let mut gens: Vec<Elem> = x.generators().iter().map(|&g| g * nb).collect();
            gens.extend(y.generators().iter().copied());
            gens
        }
        GroupKind::Wreath { l, base } => {
            let block = base.order().pow(*l as u32);
            let mut gens = vec![block]; // the rotation (1; e, .., e)
                                        // base generators in slot 0
            for &g in base.generators() {
                gens.push(g * base.order().pow(*l as u32 - 1));
            }
            gens
        }
        GroupKind::Semidirect {
            perms,
            modulus,
            rank,
        } => {
            let block = modulus.pow(*rank as u32);
            let mut gens = Vec::new();
            for q in 1..perms.perms.len() {
                gens.push(q as u64 * block);
            }
            // one torus unit vector per coordinate
            for i in 0..*rank {
                gens.push(modulus.pow((*rank - 1 - i) as u32));
            }
            gens
        }
        GroupKind::Heisenberg { modulus } => {
            let m = *modulus;
            vec![m * m, m, 1]
        }
        GroupKind::Table(_) => unreachable!("table groups use greedy generators"),
    }
    .into_iter()
    .filter(|&g| g != 0 && g < order)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::build::build_group;
    use super::*;

    fn check_group_axioms(g: &FiniteGroup) {
        assert!(g.order() <= 512, "axiom check is exhaustive; keep it small");
        for a in g.elements() {
            assert_eq!(g.mul(a, 0), a);
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.mul(g.inv(a), a), 0);
        }
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements().step_by(3) {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_small_constructors() {
        for spec in [
            "cyclic(8)",
            "product(cyclic(2),cyclic(3))",
            "wreath(c2,c2)",
            "wreath(c3,c3)",
            "sylow_symmetric(2,2)",
            "semidirect(c2,torus(2,2,2))",
            "heisenberg(2,1)",
            "heisenberg(2,2)",
            "heisenberg(3,1)",
        ] {
            let g = build_group(spec).unwrap();
            check_group_axioms(&g);
        }
    }

    #[test]
    fn wreath_order_formula() {
        let g = build_group("wreath(c2,c2)").unwrap();
        assert_eq!(g.order(), 8); // l * |K|^l = 2 * 4
        let g = build_group("wreath(c3,c3)").unwrap();
        assert_eq!(g.order(), 81);
        let g = build_group("wreath(c2,cyclic(4))").unwrap();
        assert_eq!(g.order(), 32);
    }

    #[test]
    fn generators_generate() {
        for spec in [
            "wreath(c2,c2)",
            "heisenberg(2,2)",
            "semidirect(c2,torus(2,2,2))",
        ] {
            let g = build_group(spec).unwrap();
            let sub = analysis::closure(&g, g.generators());
            assert_eq!(sub.len() as u64, g.order(), "{spec}");
        }
    }

    #[test]
    fn perm_action_is_homomorphism() {
        let g = build_group("sylow_symmetric(2,2)").unwrap();
        let (n, perms) = g.perm_action().unwrap();
        assert_eq!(n, 4);
        for a in g.elements() {
            for b in g.elements() {
                let lhs = &perms[g.mul(a, b) as usize];
                let rhs = perms[a as usize].compose(&perms[b as usize]);
                assert_eq!(lhs, &rhs);
            }
        }
    }

    #[test]
    fn heisenberg_is_unitriangular_matrices() {
        // Compare against 3x3 upper unitriangular matrix multiplication mod 2.
        let g = build_group("heisenberg(2,1)").unwrap();
        assert_eq!(g.order(), 8);
        let decode = |x: u64| [x / 4, x / 2 % 2, x % 2]; // (a, b, c)
        for x in g.elements() {
            for y in g.elements() {
                let [a1, b1, c1] = decode(x);
                let [a2, b2, c2] = decode(y);
                // [[1,a,c],[0,1,b],[0,0,1]] product
                let a = (a1 + a2) % 2;
                let b = (b1 + b2) % 2;
                let c = (c1 + c2 + a1 * b2) % 2;
                assert_eq!(g.mul(x, y), (a * 2 + b) * 2 + c);
            }
        }
    }
}
