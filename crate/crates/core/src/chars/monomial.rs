//! Monomial matrix representations: one nonzero root-of-unity entry per row
//! and column. Every irreducible of the constructor l-groups is realised in
//! this form, which makes traces, inductions and the truncated symmetric
//! power exactly computable.

use std::collections::HashMap;

use super::{induce_values, Character};
use crate::bar::TruncatedBar;
use crate::cyc::{Cyc, CycAccumulator};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::perm::{lcm, Perm};

/// The matrix `D(diag) P(perm)`: basis vector `e_j` maps to
/// `zeta^diag[perm(j)] * e_perm(j)`, exponents at a fixed root order.
#[derive(Clone, PartialEq, Eq)]
pub struct MonoMat {
    pub perm: Perm,
    pub diag: Vec<u32>,
}

impl MonoMat {
    pub fn identity(dim: usize) -> MonoMat {
        MonoMat {
            perm: Perm::identity(dim),
            diag: vec![0; dim],
        }
    }

    /// Product at root order `n`: `D(a)P(a) . D(b)P(b) = D(a + Pa.b) P(ab)`.
    pub fn mul(&self, other: &MonoMat, n: u32) -> MonoMat {
        let moved = self.perm.act_on_vec(&other.diag);
        let diag = self
            .diag
            .iter()
            .zip(moved.iter())
            .map(|(&x, &y)| (x + y) % n)
            .collect();
        MonoMat {
            perm: self.perm.compose(&other.perm),
            diag,
        }
    }

    pub fn scale_exponents(&self, factor: u32) -> MonoMat {
        MonoMat {
            perm: self.perm.clone(),
            diag: self.diag.iter().map(|&d| d * factor).collect(),
        }
    }

    /// Trace: the sum of diagonal entries over fixed points of the
    /// permutation part.
    pub fn trace(&self, order: u32) -> Cyc {
        let mut acc = Cyc::zero(order);
        for i in self.perm.fixed_points() {
            acc = acc.add(&Cyc::root(order, self.diag[i] as i64));
        }
        acc
    }

    pub fn tensor(&self, other: &MonoMat, n: u32) -> MonoMat {
        let da = self.diag.len();
        let db = other.diag.len();
        let mut images = vec![0u32; da * db];
        let mut diag = vec![0u32; da * db];
        for i in 0..da {
            for j in 0..db {
                images[i * db + j] = (self.perm.apply(i) * db + other.perm.apply(j)) as u32;
                diag[i * db + j] = (self.diag[i] + other.diag[j]) % n;
            }
        }
        MonoMat {
            perm: Perm::from_images(images).unwrap(),
            diag,
        }
    }
}

/// A monomial representation of a finite group: one `MonoMat` per element,
/// entries in the `root_order`-th roots of unity.
#[derive(Clone)]
pub struct MonomialRep {
    pub group: FiniteGroup,
    pub root_order: u32,
    pub dim: usize,
    pub mats: Vec<MonoMat>,
}

impl MonomialRep {
    pub fn mat(&self, g: Elem) -> &MonoMat {
        &self.mats[g as usize]
    }

    /// Checks `M(g h) = M(g) M(h)` for every generator `g` and element `h`,
    /// which forces the law for all pairs.
    pub fn verify_homomorphism(&self) -> Result<()> {
        if self.mats.len() as u64 != self.group.order() {
            return Err(Error::DimensionMismatch("one matrix per element".into()));
        }
        for &g in self.group.generators() {
            for h in self.group.elements() {
                let prod = self.mat(g).mul(self.mat(h), self.root_order);
                if &prod != self.mat(self.group.mul(g, h)) {
                    return Err(Error::InvalidParam(format!(
                        "matrix law fails at ({}, {})",
                        self.group.describe(g),
                        self.group.describe(h)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn character(&self) -> Character {
        let classes = self.group.conjugacy_classes();
        let values = classes
            .reps
            .iter()
            .map(|&r| self.mat(r).trace(self.root_order))
            .collect();
        Character {
            group: self.group.clone(),
            order: self.root_order,
            values,
        }
    }

    /// Lifts entries to a larger root order (scales exponents).
    pub fn lift_root_order(&self, order: u32) -> MonomialRep {
        assert_eq!(order % self.root_order, 0);
        let factor = order / self.root_order;
        MonomialRep {
            group: self.group.clone(),
            root_order: order,
            dim: self.dim,
            mats: self
                .mats
                .iter()
                .map(|m| m.scale_exponents(factor))
                .collect(),
        }
    }

    pub fn tensor(&self, other: &MonomialRep) -> MonomialRep {
        assert!(self.group.same_group(&other.group));
        let n = lcm(self.root_order as u64, other.root_order as u64) as u32;
        let a = self.lift_root_order(n);
        let b = other.lift_root_order(n);
        MonomialRep {
            group: self.group.clone(),
            root_order: n,
            dim: a.dim * b.dim,
            mats: a
                .mats
                .iter()
                .zip(b.mats.iter())
                .map(|(x, y)| x.tensor(y, n))
                .collect(),
        }
    }

    /// Multiplies every matrix by the scalar `zeta^(twist(g))`.
    pub fn twist(&self, twist: impl Fn(Elem) -> u32) -> MonomialRep {
        let n = self.root_order;
        let mats = self
            .group
            .elements()
            .map(|g| {
                let m = self.mat(g);
                let t = twist(g) % n;
                MonoMat {
                    perm: m.perm.clone(),
                    diag: m.diag.iter().map(|&d| (d + t) % n).collect(),
                }
            })
            .collect();
        MonomialRep {
            group: self.group.clone(),
            root_order: n,
            dim: self.dim,
            mats,
        }
    }

    /// True when the permutation parts act transitively on the basis lines.
    pub fn transitive(&self) -> bool {
        let mut reached = vec![false; self.dim];
        if self.dim == 0 {
            return true;
        }
        reached[0] = true;
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for &g in self.group.generators() {
                let j = self.mat(g).perm.apply(i);
                if !reached[j] {
                    reached[j] = true;
                    frontier.push(j);
                }
            }
        }
        reached.into_iter().all(|r| r)
    }
}

/// Induction of a monomial representation of the subgroup `members` (the
/// matrices given on parent codes by `sub_mat`) up to `g`. The new basis is
/// (coset, inner index) with cosets represented by their least elements.
pub fn induce_monomial(
    g: &FiniteGroup,
    members: &[Elem],
    sub_dim: usize,
    root_order: u32,
    sub_mat: &dyn Fn(Elem) -> MonoMat,
) -> Result<MonomialRep> {
    let mut coset_of: HashMap<Elem, usize> = HashMap::new();
    let mut reps: Vec<Elem> = Vec::new();
    for x in g.elements() {
        if coset_of.contains_key(&x) {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for &h in members {
            coset_of.insert(g.mul(x, h), idx);
        }
    }
    let index = reps.len();
    let dim = index * sub_dim;
    let mut mats = Vec::with_capacity(g.order() as usize);
    for x in g.elements() {
        let mut images = vec![0u32; dim];
        let mut diag = vec![0u32; dim];
        for (a, &ta) in reps.iter().enumerate() {
            let y = g.mul(x, ta);
            let b = coset_of[&y];
            let h = g.mul(g.inv(reps[b]), y);
            if members.binary_search(&h).is_err() {
                return Err(Error::NotSubgroup(
                    "coset arithmetic left the subgroup".into(),
                ));
            }
            let mh = sub_mat(h);
            for j in 0..sub_dim {
                let i = mh.perm.apply(j);
                images[a * sub_dim + j] = (b * sub_dim + i) as u32;
                diag[b * sub_dim + i] = mh.diag[i];
            }
        }
        let perm = Perm::from_images(images)
            .ok_or_else(|| Error::InvalidParam("induced matrices must be monomial".into()))?;
        mats.push(MonoMat { perm, diag });
    }
    let rep = MonomialRep {
        group: g.clone(),
        root_order,
        dim,
        mats,
    };
    rep.verify_homomorphism()?;
    Ok(rep)
}

/// The level-s monomial representation attached to an affine representation:
/// permutation parts pass through, translation coordinates become diagonal
/// `l^s`-th roots of unity.
pub fn bar_to_monomial(bar: &TruncatedBar, s: u32) -> Result<MonomialRep> {
    if s > bar.level {
        return Err(Error::LevelTooSmall {
            have: bar.level,
            need: s,
        });
    }
    let root_order = bar.l.pow(s) as u32;
    let m = root_order as u64;
    let mats = bar
        .source
        .elements()
        .map(|g| {
            let (p, v) = bar.image(g);
            MonoMat {
                perm: p.clone(),
                diag: v.iter().map(|&x| (x % m) as u32).collect(),
            }
        })
        .collect();
    let rep = MonomialRep {
        group: bar.source.clone(),
        root_order,
        dim: bar.rank,
        mats,
    };
    rep.verify_homomorphism()?;
    Ok(rep)
}

/// Character of the truncated symmetric power `S[V]/(b^l for basis b)`: the
/// basis is the set of exponent patterns `B -> {0..l-1}`; an element
/// contributes on the patterns fixed by its permutation part, with
/// multiplier the product of its diagonal entries raised to the pattern.
/// Patterns are enumerated directly.
pub fn t_l(rep: &MonomialRep, l: u64) -> Result<Character> {
    let n = rep.dim as u32;
    let total = (l as u128).pow(n);
    if total > (1u128 << 16) {
        return Err(Error::CapExceeded {
            what: "monomial enumeration",
            got: total.min(u64::MAX as u128) as u64,
            cap: 1 << 16,
        });
    }
    let count = total as u64;
    let order = rep.root_order;
    let classes = rep.group.conjugacy_classes();
    let values: Vec<Cyc> = classes
        .reps
        .iter()
        .map(|&g| {
            let m = rep.mat(g);
            let mut acc = CycAccumulator::new(order);
            for code in 0..count {
                let mut e = vec![0u64; n as usize];
                let mut c = code;
                for i in (0..n as usize).rev() {
                    e[i] = c % l;
                    c /= l;
                }
                let fixed = (0..n as usize).all(|i| e[m.perm.apply(i)] == e[i]);
                if fixed {
                    let exp: u64 = (0..n as usize)
                        .map(|i| e[i] * m.diag[i] as u64 % order as u64)
                        .sum();
                    acc.add(&Cyc::root(order, (exp % order as u64) as i64), 1);
                }
            }
            acc.finish()
        })
        .collect();
    let chi = Character {
        group: rep.group.clone(),
        order,
        values,
    };
    assert_eq!(
        chi.degree(),
        (l as i64).pow(n),
        "truncated power has degree l^dim"
    );
    Ok(chi)
}

/// Verification record for the two induction identities a monomial
/// representation satisfies relative to the stabilizer of its first basis
/// line: the induced trivial character is the permutation character of the
/// sigma-parts, and the induced diagonal character is the trace character.
pub struct IdentityCheck {
    pub transitive: bool,
    pub permutation_residual_zero: bool,
    pub induced_residual_zero: bool,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.transitive && self.permutation_residual_zero && self.induced_residual_zero
    }
}

pub fn permutation_identity_check(rep: &MonomialRep) -> Result<IdentityCheck> {
    if !rep.transitive() {
        return Ok(IdentityCheck {
            transitive: false,
            permutation_residual_zero: false,
            induced_residual_zero: false,
        });
    }
    let g = &rep.group;
    // stabilizer of the first basis line
    let members: Vec<Elem> = g
        .elements()
        .filter(|&x| rep.mat(x).perm.apply(0) == 0)
        .collect();
    let perm_char = Character::permutation(g, |x| rep.mat(x).perm.fixed_points().len() as i64);
    let ind_trivial = induce_values(g, &members, 1, &|_| Cyc::one(1));
    let permutation_residual_zero = ind_trivial.sub(&perm_char).is_zero();
    let order = rep.root_order;
    let ind_diag = induce_values(g, &members, order, &|h| {
        Cyc::root(order, rep.mat(h).diag[0] as i64)
    });
    let induced_residual_zero = ind_diag.sub(&rep.character()).is_zero();
    Ok(IdentityCheck {
        transitive: true,
        permutation_residual_zero,
        induced_residual_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    #[test]
    fn monomat_multiplication_matches_matrices() {
        // multiply two 3x3 monomial matrices over zeta_4 by brute force
        let n = 4u32;
        let a = MonoMat {
            perm: Perm::rotation(3, 1),
            diag: vec![1, 2, 3],
        };
        let b = MonoMat {
            perm: Perm::transposition(3, 0, 1),
            diag: vec![3, 0, 1],
        };
        let c = a.mul(&b, n);
        // dense complex-free check: entry (i, j) nonzero iff i = perm(j),
        // with exponent diag[i]; compose densely over exponent arithmetic
        let dense = |m: &MonoMat| -> Vec<Vec<Option<u32>>> {
            let d = m.diag.len();
            let mut out = vec![vec![None; d]; d];
            for j in 0..d {
                let i = m.perm.apply(j);
                out[i][j] = Some(m.diag[i]);
            }
            out
        };
        let da = dense(&a);
        let db = dense(&b);
        let dc = dense(&c);
        for i in 0..3 {
            for j in 0..3 {
                let mut expect: Option<u32> = None;
                for k in 0..3 {
                    if let (Some(x), Some(y)) = (da[i][k], db[k][j]) {
                        assert!(expect.is_none(), "monomial product stays monomial");
                        expect = Some((x + y) % n);
                    }
                }
                assert_eq!(dc[i][j], expect, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn bar_monomial_examples() {
        // rank-1 translation of Z/8 at s = 1: the parity character
        let g = build_group("cyclic(8)").unwrap();
        let values: Vec<u64> = (0..8).collect();
        let bar = TruncatedBar::translation(&g, 2, 3, &values).unwrap();
        let rep = bar_to_monomial(&bar, 1).unwrap();
        assert_eq!(rep.dim, 1);
        let chi = rep.character();
        for x in 0..8u64 {
            let expect = if x % 2 == 0 { 1 } else { -1 };
            assert!(chi.value_at(x).equals(&Cyc::integer(2, expect)));
        }
        // s = 0: the trivial character of a 1-dim space
        let rep0 = bar_to_monomial(&bar, 0).unwrap();
        assert_eq!(rep0.root_order, 1);
        assert!(rep0.character().value_at(3).equals(&Cyc::one(1)));
    }

    #[test]
    fn t_l_examples() {
        // dim 1, linear character, l = 2: T_2 = 1 + chi
        let g = build_group("cyclic(2)").unwrap();
        let bar = TruncatedBar::translation(&g, 2, 1, &[0, 1]).unwrap();
        let rep = bar_to_monomial(&bar, 1).unwrap();
        let t = t_l(&rep, 2).unwrap();
        assert_eq!(t.degree(), 2);
        assert!(t.value_at(1).is_zero()); // 1 + (-1)
                                          // dim 2 swap with trivial entries: degree 4, value 2 at the swap
        let swap = crate::perm::Perm::transposition(2, 0, 1);
        let bar2 = TruncatedBar::from_generator_images(&g, 2, 1, 2, &[(swap, vec![0, 0])]).unwrap();
        let rep2 = bar_to_monomial(&bar2, 1).unwrap();
        let t2 = t_l(&rep2, 2).unwrap();
        assert_eq!(t2.degree(), 4);
        assert!(t2.value_at(1).equals(&Cyc::integer(2, 2)));
        // dim 2, l = 3, trivial group: degree 9 constant
        let triv = build_group("cyclic(1)").unwrap();
        let bar3 = TruncatedBar::from_generator_images(&triv, 3, 1, 2, &[]).unwrap();
        let rep3 = bar_to_monomial(&bar3, 1).unwrap();
        let t3 = t_l(&rep3, 3).unwrap();
        assert_eq!(t3.degree(), 9);
        assert!(t3.value_at(0).equals(&Cyc::integer(3, 9)));
    }

    #[test]
    fn swap_rep_identity_check() {
        // rank-2 swap representation of C_2: permutation character (2, 0)
        let g = build_group("cyclic(2)").unwrap();
        let swap = crate::perm::Perm::transposition(2, 0, 1);
        let bar = TruncatedBar::from_generator_images(&g, 2, 1, 2, &[(swap, vec![0, 0])]).unwrap();
        let rep = bar_to_monomial(&bar, 1).unwrap();
        let check = permutation_identity_check(&rep).unwrap();
        assert!(check.passed());
    }

    #[test]
    fn degree_one_identity_check() {
        let g = build_group("cyclic(4)").unwrap();
        let bar = TruncatedBar::translation(&g, 2, 2, &[0, 1, 2, 3]).unwrap();
        let rep = bar_to_monomial(&bar, 2).unwrap();
        let check = permutation_identity_check(&rep).unwrap();
        assert!(check.passed());
    }
}
