//! The level-indexed root ring: `F_l[u]/(u^(l^k))` at level k, with
//! `u_k = u_(k+1)^l`, its n-fold tensor powers carrying the coordinate
//! permutation action, l-th roots by exponent transport, invariant bases by
//! orbit sums, and the two ideal-identity engines built on them.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::fp::FpSpace;
use crate::perm::Perm;
use crate::repring::RepRing;

const MAX_VARS: usize = 8;
const ENUM_CAP: u128 = 1 << 16;

/// A truncated polynomial over `F_l` in `n` variables at a level: exponents
/// per variable below `l^level`, packed one byte per variable. Canonical
/// form uses the minimal level (all exponents divisible by l get pushed
/// down). `TensorElem` with `n = 1` plays the role of the univariate ring.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElem {
    pub l: u64,
    pub n: usize,
    pub level: u32,
    terms: BTreeMap<u64, u64>,
}

pub type RootElem = TensorElem;

fn pack(exps: &[u64]) -> u64 {
    let mut code = 0u64;
    for (i, &e) in exps.iter().enumerate() {
        debug_assert!(e < 256);
        code |= e << (8 * i);
    }
    code
}

fn unpack(code: u64, n: usize) -> Vec<u64> {
    (0..n).map(|i| (code >> (8 * i)) & 0xff).collect()
}

impl TensorElem {
    pub fn zero(l: u64, n: usize, level: u32) -> TensorElem {
        assert!(n <= MAX_VARS && l.pow(level) <= 256);
        TensorElem {
            l,
            n,
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(l: u64, n: usize, level: u32) -> TensorElem {
        TensorElem::constant(l, n, level, 1)
    }

    pub fn constant(l: u64, n: usize, level: u32, c: u64) -> TensorElem {
        let mut t = TensorElem::zero(l, n, level);
        if !c.is_multiple_of(l) {
            t.terms.insert(0, c % l);
        }
        t
    }

    pub fn monomial(l: u64, level: u32, exps: &[u64], coeff: u64) -> TensorElem {
        let mut t = TensorElem::zero(l, exps.len(), level);
        assert!(exps.iter().all(|&e| e < l.pow(level)));
        if !coeff.is_multiple_of(l) {
            t.terms.insert(pack(exps), coeff % l);
        }
        t
    }

    /// The variable `u_i` at the given level.
    pub fn variable(l: u64, n: usize, level: u32, i: usize) -> TensorElem {
        let mut exps = vec![0u64; n];
        exps[i] = 1;
        TensorElem::monomial(l, level, &exps, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u64>, u64)> + '_ {
        self.terms
            .iter()
            .map(|(&code, &c)| (unpack(code, self.n), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at all variables zero (a ring homomorphism to F_l).
    pub fn augmentation(&self) -> u64 {
        self.terms.get(&0).copied().unwrap_or(0)
    }

    /// Minimal-level canonical form.
    pub fn normalized(&self) -> TensorElem {
        let mut out = self.clone();
        while out.level > 0
            && out
                .terms
                .keys()
                .all(|&code| unpack(code, out.n).iter().all(|&e| e % out.l == 0))
        {
            let l = out.l;
            let n = out.n;
            let terms = out
                .terms
                .iter()
                .map(|(&code, &c)| {
                    let down: Vec<u64> = unpack(code, n).iter().map(|&e| e / l).collect();
                    (pack(&down), c)
                })
                .collect();
            out = TensorElem {
                l,
                n,
                level: out.level - 1,
                terms,
            };
        }
        out
    }

    /// Re-expresses at a higher level: exponents scale by `l^(target-level)`.
    pub fn lift_to(&self, target: u32) -> TensorElem {
        assert!(target >= self.level);
        assert!(self.l.pow(target) <= 256, "exponents must stay byte-packed");
        let factor = self.l.pow(target - self.level);
        let terms = self
            .terms
            .iter()
            .map(|(&code, &c)| {
                let up: Vec<u64> = unpack(code, self.n).iter().map(|&e| e * factor).collect();
                (pack(&up), c)
            })
            .collect();
        TensorElem {
            l: self.l,
            n: self.n,
            level: target,
            terms,
        }
    }

    fn common_level(a: &TensorElem, b: &TensorElem) -> (TensorElem, TensorElem) {
        assert_eq!(a.l, b.l);
        assert_eq!(a.n, b.n);
        let level = a.level.max(b.level);
        (a.lift_to(level), b.lift_to(level))
    }

    pub fn add(&self, other: &TensorElem) -> TensorElem {
        let (a, mut b) = TensorElem::common_level(self, other);
        let l = a.l;
        let mut terms = a.terms;
        for (code, c) in std::mem::take(&mut b.terms) {
            let e = terms.entry(code).or_insert(0);
            *e = (*e + c) % l;
            if *e == 0 {
                terms.remove(&code);
            }
        }
        TensorElem {
            l,
            n: a.n,
            level: a.level,
            terms,
        }
    }

    pub fn neg(&self) -> TensorElem {
        self.scale(self.l - 1)
    }

    pub fn sub(&self, other: &TensorElem) -> TensorElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u64) -> TensorElem {
        let k = k % self.l;
        if k == 0 {
            return TensorElem::zero(self.l, self.n, self.level);
        }
        let terms = self
            .terms
            .iter()
            .map(|(&code, &c)| (code, c * k % self.l))
            .collect();
        TensorElem {
            l: self.l,
            n: self.n,
            level: self.level,
            terms,
        }
    }

    pub fn mul(&self, other: &TensorElem) -> TensorElem {
        let (a, b) = TensorElem::common_level(self, other);
        let l = a.l;
        let bound = l.pow(a.level);
        let mut terms: BTreeMap<u64, u64> = BTreeMap::new();
        for (&ca, &xa) in &a.terms {
            let ea = unpack(ca, a.n);
            'pair: for (&cb, &xb) in &b.terms {
                let eb = unpack(cb, a.n);
                let mut e = vec![0u64; a.n];
                for i in 0..a.n {
                    e[i] = ea[i] + eb[i];
                    if e[i] >= bound {
                        continue 'pair; // truncated: u^(l^level) = 0
                    }
                }
                let code = pack(&e);
                let entry = terms.entry(code).or_insert(0);
                *entry = (*entry + xa * xb) % l;
                if *entry == 0 {
                    terms.remove(&code);
                }
            }
        }
        TensorElem {
            l,
            n: a.n,
            level: a.level,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> TensorElem {
        let mut acc = TensorElem::one(self.l, self.n, self.level);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The l-th root one level up: the same terms, since over `F_l`
    /// `(sum a_E u_(k+1)^E)^l = sum a_E u_(k+1)^(lE) = sum a_E u_k^E`.
    pub fn lth_root(&self) -> TensorElem {
        assert!(
            self.l.pow(self.level + 1) <= 256,
            "root needs level headroom"
        );
        TensorElem {
            l: self.l,
            n: self.n,
            level: self.level + 1,
            terms: self.terms.clone(),
        }
    }

    /// Coordinate permutation: variable `i` moves to `perm(i)`.
    pub fn apply_perm(&self, perm: &Perm) -> TensorElem {
        assert_eq!(perm.degree(), self.n);
        let terms = self
            .terms
            .iter()
            .map(|(&code, &c)| {
                let e = unpack(code, self.n);
                (pack(&perm.act_on_vec(&e)), c)
            })
            .collect();
        TensorElem {
            l: self.l,
            n: self.n,
            level: self.level,
            terms,
        }
    }

    pub fn is_invariant(&self, perms: &[Perm]) -> bool {
        perms.iter().all(|p| self.apply_perm(p) == *self)
    }

    /// Dense coordinates over the level-k monomial basis.
    pub fn dense(&self, level: u32) -> Vec<u64> {
        let lifted = self.lift_to(level);
        let bound = self.l.pow(level);
        let dim = (bound as u128).pow(self.n as u32) as usize;
        let mut out = vec![0u64; dim];
        for (exps, c) in lifted.terms() {
            let idx = exps.iter().fold(0u64, |acc, &e| acc * bound + e);
            out[idx as usize] = c;
        }
        out
    }

    pub fn from_dense(l: u64, n: usize, level: u32, coords: &[u64]) -> TensorElem {
        let bound = l.pow(level);
        let mut t = TensorElem::zero(l, n, level);
        for (idx, &c) in coords.iter().enumerate() {
            if c % l == 0 {
                continue;
            }
            let mut e = vec![0u64; n];
            let mut x = idx as u64;
            for i in (0..n).rev() {
                e[i] = x % bound;
                x /= bound;
            }
            t.terms.insert(pack(&e), c % l);
        }
        t
    }
}

impl std::fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    write!(f, "*u{}^{}", i + 1, ei)?;
                }
            }
        }
        write!(f, " @lvl{}", self.level)
    }
}

/// Orbit sums of monomials: a basis of the invariant subring of the level-k
/// truncation under a permutation group.
pub fn orbit_sum_basis(l: u64, n: usize, level: u32, perms: &[Perm]) -> Result<Vec<TensorElem>> {
    let bound = l.pow(level);
    let count = (bound as u128).pow(n as u32);
    if count > ENUM_CAP {
        return Err(Error::CapExceeded {
            what: "monomial enumeration",
            got: count.min(u64::MAX as u128) as u64,
            cap: ENUM_CAP as u64,
        });
    }
    let decode = |idx: u64| -> Vec<u64> {
        let mut e = vec![0u64; n];
        let mut x = idx;
        for i in (0..n).rev() {
            e[i] = x % bound;
            x /= bound;
        }
        e
    };
    let encode = |e: &[u64]| e.iter().fold(0u64, |acc, &x| acc * bound + x);
    let mut seen = vec![false; count as usize];
    let mut basis = Vec::new();
    for start in 0..count as u64 {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start as usize] = true;
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            let e = decode(x);
            for p in perms {
                let y = encode(&p.act_on_vec(&e));
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                    frontier.push(y);
                }
            }
        }
        let mut sum = TensorElem::zero(l, n, level);
        for idx in orbit {
            sum = sum.add(&TensorElem::monomial(l, level, &decode(idx), 1));
        }
        basis.push(sum);
    }
    Ok(basis)
}

/// Closes a generator list to a full permutation group, identity first.
pub fn perm_group(n: usize, gens: &[Perm]) -> Vec<Perm> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let id = Perm::identity(n);
    seen.insert(id.images().to_vec());
    let mut list = vec![id.clone()];
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if seen.insert(q.images().to_vec()) {
                list.push(q.clone());
                frontier.push(q);
            }
        }
    }
    list.sort();
    list
}

fn perm_set(perms: &[Perm]) -> HashSet<Vec<u32>> {
    perms.iter().map(|p| p.images().to_vec()).collect()
}

/// Refines an inclusion of l-groups into steps each normal of index l.
pub fn refine_chain(small: &[Perm], big: &[Perm], l: u64) -> Result<Vec<Vec<Perm>>> {
    let big_set = perm_set(big);
    for p in small {
        if !big_set.contains(p.images()) {
            return Err(Error::NotSubgroup("chain members must be nested".into()));
        }
    }
    let mut chain = vec![small.to_vec()];
    let mut current = small.to_vec();
    while current.len() < big.len() {
        let cur_set = perm_set(&current);
        let normalizer: Vec<Perm> = big
            .iter()
            .filter(|g| {
                current
                    .iter()
                    .all(|h| cur_set.contains(g.compose(h).compose(&g.inverse()).images()))
            })
            .cloned()
            .collect();
        // an element of order l in normalizer/current
        let mut step: Option<Perm> = None;
        for x in &normalizer {
            if cur_set.contains(x.images()) {
                continue;
            }
            let mut j = 1u64;
            let mut p = x.clone();
            while !cur_set.contains(p.images()) {
                p = x.compose(&p);
                j += 1;
            }
            if !j.is_multiple_of(l) {
                continue;
            }
            let candidate = x.pow(j / l);
            if !cur_set.contains(candidate.images()) {
                step = Some(candidate);
                break;
            }
        }
        let x = step.ok_or_else(|| {
            Error::InvalidParam("chain refinement stalled; inputs must be l-groups".into())
        })?;
        let mut gens: Vec<Perm> = current.clone();
        gens.push(x);
        let next = perm_group(big[0].degree(), &gens);
        if next.len() != current.len() * l as usize {
            return Err(Error::InvalidParam(
                "refinement step must have index l".into(),
            ));
        }
        chain.push(next.clone());
        current = next;
    }
    Ok(chain)
}

/// One index-l step of the constructive ideal identity.
pub struct WitnessStep {
    pub root: TensorElem,
    pub symmetric: Vec<TensorElem>,
}

/// The full expression of `b` as a combination of big-group invariants with
/// zero augmentation times small-group invariants.
pub struct GeneralWitness {
    pub pairs: Vec<(TensorElem, TensorElem)>,
    pub steps: Vec<WitnessStep>,
    pub level_used: u32,
}

/// For `b` in the augmentation ideal of the `small`-invariants, build and
/// verify the identity `b = sum_i (-1)^(i+1) c_i root^(l-i)` along each
/// index-l step of the refined chain up to `big`, composing the steps into
/// an expression of `b` over the big-group invariants. Exact at every step.
pub fn theorem_general_witness(
    b: &TensorElem,
    small: &[Perm],
    big: &[Perm],
) -> Result<GeneralWitness> {
    let l = b.l;
    if b.augmentation() != 0 {
        return Err(Error::InvalidParam(
            "witness input needs augmentation zero".into(),
        ));
    }
    if !b.is_invariant(small) {
        return Err(Error::InvalidParam(
            "witness input must be invariant".into(),
        ));
    }
    let chain = refine_chain(small, big, l)?;
    let mut steps = Vec::new();
    let mut pairs: Vec<(TensorElem, TensorElem)> =
        vec![(b.clone(), TensorElem::one(l, b.n, b.level))];
    for w in 1..chain.len() {
        let small_grp = &chain[w - 1];
        let big_grp = &chain[w];
        let mut next_pairs: Vec<(TensorElem, TensorElem)> = Vec::new();
        for (factor, cofactor) in pairs {
            if factor.is_zero() {
                continue;
            }
            let step = index_l_step(&factor, big_grp, small_grp, l)?;
            for (i, c_i) in step.symmetric.iter().enumerate() {
                let sign = if (i + 1) % 2 == 1 { 1 } else { l - 1 };
                let power = step.root.pow((l as usize - 1 - i) as u32);
                let new_cof = power.mul(&cofactor).scale(sign);
                next_pairs.push((c_i.clone(), new_cof));
            }
            steps.push(step);
        }
        pairs = next_pairs;
    }
    let level_used = pairs
        .iter()
        .map(|(f, c)| f.level.max(c.level))
        .max()
        .unwrap_or(b.level);
    let mut total = TensorElem::zero(l, b.n, level_used);
    for (factor, cofactor) in &pairs {
        if factor.augmentation() != 0 || !factor.is_invariant(big) {
            return Err(Error::InvalidParam(
                "witness factor must be a big-group invariant with zero augmentation".into(),
            ));
        }
        if !cofactor.is_invariant(small) {
            return Err(Error::InvalidParam(
                "witness cofactor must stay invariant".into(),
            ));
        }
        total = total.add(&factor.mul(cofactor));
    }
    if total.normalized() != b.normalized() {
        return Err(Error::InvalidParam(
            "witness identity failed to verify".into(),
        ));
    }
    Ok(GeneralWitness {
        pairs,
        steps,
        level_used,
    })
}

fn index_l_step(
    b: &TensorElem,
    big_grp: &[Perm],
    small_grp: &[Perm],
    l: u64,
) -> Result<WitnessStep> {
    let root = b.lth_root();
    debug_assert_eq!(root.pow(l as u32).normalized(), b.normalized());
    let small_set = perm_set(small_grp);
    let gamma = big_grp
        .iter()
        .find(|p| !small_set.contains(p.images()))
        .ok_or_else(|| Error::InvalidParam("index-l step needs a proper inclusion".into()))?;
    let conjugates: Vec<TensorElem> = (0..l).map(|j| root.apply_perm(&gamma.pow(j))).collect();
    // elementary symmetric functions of the conjugates
    let mut es: Vec<TensorElem> = vec![TensorElem::one(l, b.n, root.level)];
    for r in &conjugates {
        let mut next = Vec::with_capacity(es.len() + 1);
        next.push(es[0].clone());
        for i in 1..=es.len() {
            let tail = if i < es.len() {
                es[i].clone()
            } else {
                TensorElem::zero(l, b.n, root.level)
            };
            next.push(tail.add(&es[i - 1].mul(r)));
        }
        es = next;
    }
    let symmetric: Vec<TensorElem> = es[1..].to_vec();
    for c in &symmetric {
        if c.augmentation() != 0 {
            return Err(Error::InvalidParam(
                "symmetric functions keep augmentation zero".into(),
            ));
        }
        if !c.is_invariant(big_grp) {
            return Err(Error::InvalidParam(
                "symmetric functions must be invariant".into(),
            ));
        }
    }
    let mut rhs = TensorElem::zero(l, b.n, root.level);
    for (i, c_i) in symmetric.iter().enumerate() {
        let sign = if (i + 1) % 2 == 1 { 1 } else { l - 1 };
        rhs = rhs.add(&c_i.mul(&root.pow((l as usize - 1 - i) as u32)).scale(sign));
    }
    if rhs.normalized() != b.normalized() {
        return Err(Error::InvalidParam("index-l identity failed".into()));
    }
    Ok(WitnessStep { root, symmetric })
}

/// A finite-dimensional augmented `F_l`-algebra in structure-constant form.
pub struct FlAlgebra {
    pub l: u64,
    pub dim: usize,
    pub one: Vec<u64>,
    pub aug: Vec<u64>,
    structure: Vec<Vec<Vec<u64>>>,
}

impl FlAlgebra {
    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let l = self.l;
        let mut out = vec![0u64; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi % l == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj % l == 0 {
                    continue;
                }
                for (k, &c) in self.structure[i][j].iter().enumerate() {
                    out[k] = (out[k] + xi * yj % l * c) % l;
                }
            }
        }
        out
    }

    pub fn augmentation(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(self.aug.iter())
            .map(|(&a, &d)| a * d % self.l)
            .sum::<u64>()
            % self.l
    }

    pub fn augmentation_ideal(&self) -> FpSpace {
        let rows: Vec<Vec<u64>> = self.aug.iter().map(|&d| vec![d]).collect();
        FpSpace::kernel(self.l, self.dim, &rows)
    }

    pub fn ideal_mul(&self, a: &FpSpace, b: &FpSpace) -> FpSpace {
        let mut out = FpSpace::empty(self.l, self.dim);
        for x in a.rows() {
            for y in b.rows() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn ideal_closure(&self, gens: &FpSpace) -> FpSpace {
        let mut out = gens.clone();
        loop {
            let mut grew = false;
            let rows = out.rows().to_vec();
            for x in &rows {
                for e in 0..self.dim {
                    let mut unit = vec![0u64; self.dim];
                    unit[e] = 1;
                    if out.insert(self.mul(x, &unit)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return out;
            }
        }
    }

    pub fn nilpotency_index(&self, ideal: &FpSpace, bound: u32) -> Option<u32> {
        if ideal.is_zero() {
            return Some(1);
        }
        let mut acc = ideal.clone();
        let mut prev = acc.rank();
        for m in 2..=bound {
            acc = self.ideal_mul(&acc, ideal);
            if acc.is_zero() {
                return Some(m);
            }
            if acc.rank() == prev {
                return None;
            }
            prev = acc.rank();
        }
        None
    }

    pub fn element_pow(&self, x: &[u64], e: u64) -> Vec<u64> {
        let mut acc = self.one.clone();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// The mod-l reduction of a representation ring.
    pub fn from_repring(ring: &RepRing, l: u64) -> FlAlgebra {
        let dim = ring.dim;
        let structure: Vec<Vec<Vec<u64>>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let mut unit_i = vec![0i64; dim];
                        unit_i[i] = 1;
                        let mut unit_j = vec![0i64; dim];
                        unit_j[j] = 1;
                        ring.mul_int(&unit_i, &unit_j)
                            .iter()
                            .map(|&c| c.rem_euclid(l as i64) as u64)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let one_int = ring.one();
        FlAlgebra {
            l,
            dim,
            one: one_int
                .iter()
                .map(|&c| c.rem_euclid(l as i64) as u64)
                .collect(),
            aug: ring
                .degrees
                .iter()
                .map(|&d| d.rem_euclid(l as i64) as u64)
                .collect(),
            structure,
        }
    }

    /// The invariant subring of the level-k tensor truncation under a
    /// permutation group, in its orbit-sum basis.
    pub fn invariant_subring(
        l: u64,
        n: usize,
        level: u32,
        perms: &[Perm],
    ) -> Result<(FlAlgebra, Vec<TensorElem>)> {
        let basis = orbit_sum_basis(l, n, level, perms)?;
        let dim = basis.len();
        // invariants have constant coefficients on orbits, so coordinates
        // are read off at each orbit's first monomial
        let lead: Vec<Vec<u64>> = basis
            .iter()
            .map(|b| b.terms().next().expect("orbit sums are nonzero").0)
            .collect();
        let coords = |x: &TensorElem| -> Vec<u64> {
            let mut out = vec![0u64; dim];
            for (i, leader) in lead.iter().enumerate() {
                out[i] = x
                    .terms()
                    .find(|(e, _)| e == leader)
                    .map(|(_, c)| c)
                    .unwrap_or(0);
            }
            out
        };
        let structure: Vec<Vec<Vec<u64>>> = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| {
                        let prod = x.mul(y);
                        let c = coords(&prod);
                        let mut rebuilt = TensorElem::zero(l, n, level);
                        for (k, &ck) in c.iter().enumerate() {
                            rebuilt = rebuilt.add(&basis[k].scale(ck));
                        }
                        assert!(
                            rebuilt == prod,
                            "invariant products decompose over orbit sums"
                        );
                        c
                    })
                    .collect()
            })
            .collect();
        let one_elem = TensorElem::one(l, n, level);
        let one = coords(&one_elem);
        let aug: Vec<u64> = basis.iter().map(|b| b.augmentation()).collect();
        Ok((
            FlAlgebra {
                l,
                dim,
                one,
                aug,
                structure,
            },
            basis,
        ))
    }
}

/// A commuting square of augmented algebras over the invariant truncations:
/// `pi: R -> B^G` and `pi': R' -> B^G'` surjective, `f: R' -> R`, with
/// `B^G'` included in `B^G` coordinatewise.
pub struct AugmentedSquare {
    pub l: u64,
    pub r: FlAlgebra,
    pub r_prime: FlAlgebra,
    /// rows: images in R of the basis of R'
    pub f: Vec<Vec<u64>>,
    /// rows: dense tensor coordinates of the basis images
    pub pi: Vec<Vec<u64>>,
    pub pi_prime: Vec<Vec<u64>>,
    pub bg: FpSpace,
    pub bg_prime: FpSpace,
}

#[derive(Debug)]
pub struct MainDiagramReport {
    /// minimal exponent with `ker(pi)^N = 0`
    pub kernel_exponent: u32,
    /// the l-power the nilpotency argument guarantees (first l-power > N)
    pub m_formula: u64,
    /// least l-power whose spanning-set power certificate verifies
    pub m_verified: u64,
    /// least l-power with the full ideal-power containment
    pub m_full: u64,
}

/// Finds and certifies exponents M with `I_R^M` inside `f(I_R') . R`: the
/// spanning-set certificate checks `x^M` for a basis of `I_R` (additively
/// exhaustive for l-power M since powering is additive in characteristic l);
/// the full route computes `I_R^M` and tests containment outright.
pub fn maindiagram_exponent(square: &AugmentedSquare, bound: u64) -> Result<MainDiagramReport> {
    let l = square.l;
    let pi_image = FpSpace::from_rows(l, square.pi[0].len(), square.pi.iter().cloned());
    if pi_image != square.bg {
        return Err(Error::InvalidParam(
            "pi must surject onto the G-invariants".into(),
        ));
    }
    let pip_image =
        FpSpace::from_rows(l, square.pi_prime[0].len(), square.pi_prime.iter().cloned());
    if pip_image != square.bg_prime {
        return Err(Error::InvalidParam(
            "pi' must surject onto the G'-invariants".into(),
        ));
    }
    for (i, row) in square.f.iter().enumerate() {
        let mut lhs = vec![0u64; square.pi[0].len()];
        for (j, &c) in row.iter().enumerate() {
            for (t, &p) in square.pi[j].iter().enumerate() {
                lhs[t] = (lhs[t] + c * p) % l;
            }
        }
        if lhs != square.pi_prime[i] {
            return Err(Error::InvalidParam("square does not commute".into()));
        }
    }
    let kernel = FpSpace::kernel(l, square.r.dim, &square.pi);
    let kernel_exponent = square
        .r
        .nilpotency_index(&kernel, 64)
        .ok_or_else(|| Error::InvalidParam("kernel of pi must be nilpotent".into()))?;
    let mut m_formula = 1u64;
    while m_formula <= kernel_exponent as u64 {
        m_formula *= l;
    }
    // target ideal f(I_R') . R
    let i_r_prime = square.r_prime.augmentation_ideal();
    let mut image_gens = FpSpace::empty(l, square.r.dim);
    for row in i_r_prime.rows() {
        let mut img = vec![0u64; square.r.dim];
        for (j, &c) in row.iter().enumerate() {
            for (t, &x) in square.f[j].iter().enumerate() {
                img[t] = (img[t] + c * x) % l;
            }
        }
        image_gens.insert(img);
    }
    let target = square.r.ideal_closure(&image_gens);
    let i_r = square.r.augmentation_ideal();
    let mut m_verified = None;
    let mut m_full = None;
    let mut m = 1u64;
    while m <= bound {
        if m_verified.is_none()
            && i_r
                .rows()
                .iter()
                .all(|x| target.contains(&square.r.element_pow(x, m)))
        {
            m_verified = Some(m);
        }
        if m_full.is_none() {
            let mut power = FpSpace::full(l, square.r.dim);
            for _ in 0..m {
                power = square.r.ideal_mul(&power, &i_r);
            }
            if target.contains_space(&power) {
                m_full = Some(m);
            }
        }
        if m_verified.is_some() && m_full.is_some() {
            break;
        }
        m *= l;
    }
    match (m_verified, m_full) {
        (Some(v), Some(fm)) => Ok(MainDiagramReport {
            kernel_exponent,
            m_formula,
            m_verified: v,
            m_full: fm,
        }),
        _ => Err(Error::BoundExhausted {
            what: "no l-power exponent certified".into(),
            bound,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym2() -> Vec<Perm> {
        perm_group(2, &[Perm::transposition(2, 0, 1)])
    }

    fn trivial_grp(n: usize) -> Vec<Perm> {
        vec![Perm::identity(n)]
    }

    #[test]
    fn root_examples() {
        // u_1 -> u_2 with u_2^2 = u_1 (l = 2)
        let u1 = TensorElem::variable(2, 1, 1, 0);
        let r = u1.lth_root();
        assert_eq!(r.level, 2);
        assert_eq!(r.pow(2).normalized(), u1.normalized());
        // 1 + u_1 -> 1 + u_2
        let x = TensorElem::one(2, 1, 1).add(&u1);
        let rx = x.lth_root();
        assert_eq!(rx.pow(2).normalized(), x.normalized());
        // u_{1,1} u_{1,2} -> u_{2,1} u_{2,2}, swap-invariant
        let m = TensorElem::monomial(2, 1, &[1, 1], 1);
        let rm = m.lth_root();
        assert!(rm.is_invariant(&sym2()));
        assert_eq!(rm.pow(2).normalized(), m.normalized());
    }

    #[test]
    fn root_commutes_with_action() {
        let swap = Perm::transposition(2, 0, 1);
        let x = TensorElem::monomial(2, 1, &[1, 0], 1).add(&TensorElem::monomial(2, 1, &[1, 1], 1));
        assert_eq!(
            x.lth_root().apply_perm(&swap),
            x.apply_perm(&swap).lth_root()
        );
    }

    #[test]
    fn frobenius_injective_on_bounded_exponents() {
        // distinct level-(k+1) elements with exponents < l^k have distinct
        // l-th powers, so the constructed root is the unique one there
        let a = TensorElem::monomial(2, 2, &[1, 0], 1);
        let b = TensorElem::monomial(2, 2, &[0, 1], 1);
        assert_ne!(a.pow(2), b.pow(2));
        let x = TensorElem::monomial(2, 1, &[1, 1], 1);
        assert_eq!(x.lth_root().pow(2).normalized(), x.normalized());
    }

    #[test]
    fn orbit_basis_counts() {
        let basis = orbit_sum_basis(2, 2, 1, &sym2()).unwrap();
        assert_eq!(basis.len(), 3);
        // Burnside: (l^(2k) + l^k) / 2 orbits for the swap on two variables
        for k in 1..=2u32 {
            let basis = orbit_sum_basis(2, 2, k, &sym2()).unwrap();
            let expect = ((1u64 << (2 * k)) + (1 << k)) / 2;
            assert_eq!(basis.len() as u64, expect);
        }
        let basis = orbit_sum_basis(2, 2, 1, &trivial_grp(2)).unwrap();
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn witness_matches_worked_example() {
        // l = 2, n = 2, trivial < S_2, b = u_{1,1}: root u_{2,1};
        // c_1 = u_{2,1} + u_{2,2}, c_2 = u_{2,1} u_{2,2}; b = c_1 root - c_2
        let b = TensorElem::monomial(2, 1, &[1, 0], 1);
        let w = theorem_general_witness(&b, &trivial_grp(2), &sym2()).unwrap();
        assert_eq!(w.steps.len(), 1);
        let step = &w.steps[0];
        let expect_c1 =
            TensorElem::monomial(2, 2, &[1, 0], 1).add(&TensorElem::monomial(2, 2, &[0, 1], 1));
        let expect_c2 = TensorElem::monomial(2, 2, &[1, 1], 1);
        assert_eq!(step.symmetric[0], expect_c1);
        assert_eq!(step.symmetric[1], expect_c2);
        let rebuilt = step.symmetric[0].mul(&step.root).sub(&step.symmetric[1]);
        assert_eq!(rebuilt.normalized(), b.normalized());
    }

    #[test]
    fn witness_on_already_invariant_input() {
        let b = TensorElem::monomial(2, 1, &[1, 0], 1).add(&TensorElem::monomial(2, 1, &[0, 1], 1));
        let w = theorem_general_witness(&b, &sym2(), &sym2()).unwrap();
        assert_eq!(w.pairs.len(), 1);
        let w2 = theorem_general_witness(&b, &trivial_grp(2), &sym2()).unwrap();
        assert!(!w2.pairs.is_empty());
    }

    #[test]
    fn witness_zero_input() {
        let z = TensorElem::zero(3, 3, 1);
        let rot = perm_group(3, &[Perm::rotation(3, 1)]);
        let w = theorem_general_witness(&z, &trivial_grp(3), &rot).unwrap();
        let mut total = TensorElem::zero(3, 3, w.level_used);
        for (f, c) in &w.pairs {
            total = total.add(&f.mul(c));
        }
        assert!(total.is_zero());
    }

    #[test]
    fn witness_l3_cycle() {
        let rot = Perm::rotation(3, 1);
        let g = perm_group(3, &[rot]);
        let b = TensorElem::monomial(3, 1, &[1, 0, 0], 2);
        let w = theorem_general_witness(&b, &trivial_grp(3), &g).unwrap();
        let mut total = TensorElem::zero(3, 3, w.level_used);
        for (f, c) in &w.pairs {
            assert_eq!(f.augmentation(), 0);
            assert!(f.is_invariant(&g));
            total = total.add(&f.mul(c));
        }
        assert_eq!(total.normalized(), b.normalized());
    }

    #[test]
    fn refine_chain_steps() {
        let chain = refine_chain(&trivial_grp(2), &sym2(), 2).unwrap();
        assert_eq!(chain.len(), 2);
        let v = perm_group(
            4,
            &[
                Perm::from_images(vec![1, 0, 3, 2]).unwrap(),
                Perm::from_images(vec![2, 3, 0, 1]).unwrap(),
            ],
        );
        let chain = refine_chain(&trivial_grp(4), &v, 2).unwrap();
        assert_eq!(chain.len(), 3);
        for w in 1..chain.len() {
            assert_eq!(chain[w].len(), 2 * chain[w - 1].len());
        }
    }

    #[test]
    fn invariant_subring_algebra() {
        let (alg, basis) = FlAlgebra::invariant_subring(2, 2, 1, &sym2()).unwrap();
        assert_eq!(alg.dim, 3);
        // (u1 + u2)^2 = 0 at level 1
        let s = basis.iter().position(|b| b.term_count() == 2).unwrap();
        let mut x = vec![0u64; 3];
        x[s] = 1;
        assert!(alg.mul(&x, &x).iter().all(|&c| c == 0));
        // I = <u1+u2, u1u2>: every pairwise product dies at level 1
        let i = alg.augmentation_ideal();
        assert_eq!(i.rank(), 2);
        assert_eq!(alg.nilpotency_index(&i, 10), Some(2));
    }
}
