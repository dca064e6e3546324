//! Exact character theory: class functions with cyclotomic-integer values,
//! Frobenius induction, restriction, inflation, tensor products, and the
//! irreducible tables of the constructor groups.

mod monomial;
mod table;

pub use monomial::{
    bar_to_monomial, permutation_identity_check, t_l, IdentityCheck, MonoMat, MonomialRep,
};
pub use table::{irr_table, monomialize, IrrTable, Irrep};

use crate::cyc::{Cyc, CycAccumulator};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, QuotientMul};
use crate::perm::lcm;

/// A class function with exact values in `Z[zeta_order]`, one value per
/// conjugacy class in the canonical class order of the group.
#[derive(Clone)]
pub struct Character {
    pub group: FiniteGroup,
    pub order: u32,
    pub values: Vec<Cyc>,
}

impl Character {
    pub fn from_values(group: &FiniteGroup, order: u32, values: Vec<Cyc>) -> Character {
        assert_eq!(values.len(), group.class_count());
        Character {
            group: group.clone(),
            order,
            values,
        }
    }

    pub fn trivial(group: &FiniteGroup) -> Character {
        let n = group.class_count();
        Character {
            group: group.clone(),
            order: 1,
            values: (0..n).map(|_| Cyc::one(1)).collect(),
        }
    }

    /// A class function from a per-element fixed-point count.
    pub fn permutation(group: &FiniteGroup, fixed_points: impl Fn(Elem) -> i64) -> Character {
        let classes = group.conjugacy_classes();
        let values = classes
            .reps
            .iter()
            .map(|&r| Cyc::integer(1, fixed_points(r)))
            .collect();
        Character {
            group: group.clone(),
            order: 1,
            values,
        }
    }

    pub fn value_at(&self, g: Elem) -> &Cyc {
        let c = self.group.conjugacy_classes().class_of[g as usize] as usize;
        &self.values[c]
    }

    pub fn degree(&self) -> i64 {
        self.values[0]
            .as_integer()
            .expect("degrees are rational integers")
    }

    pub fn tensor(&self, other: &Character) -> Character {
        assert!(self.group.same_group(&other.group));
        let order = lcm(self.order as u64, other.order as u64) as u32;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.mul(b))
            .collect();
        Character {
            group: self.group.clone(),
            order,
            values,
        }
    }

    pub fn add(&self, other: &Character) -> Character {
        assert!(self.group.same_group(&other.group));
        let order = lcm(self.order as u64, other.order as u64) as u32;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        Character {
            group: self.group.clone(),
            order,
            values,
        }
    }

    pub fn sub(&self, other: &Character) -> Character {
        assert!(self.group.same_group(&other.group));
        let order = lcm(self.order as u64, other.order as u64) as u32;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        Character {
            group: self.group.clone(),
            order,
            values,
        }
    }

    pub fn scale(&self, k: i64) -> Character {
        Character {
            group: self.group.clone(),
            order: self.order,
            values: self.values.iter().map(|v| v.scale(k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Canonical key for deduplication and deterministic sorting.
    pub fn canonical_key(&self) -> Vec<Vec<(u32, i64)>> {
        let order = self.order.max(1);
        self.values
            .iter()
            .map(|v| v.lift_order(order).canonical_key())
            .collect()
    }
}

/// Exact inner product `<a, b> = (1/|G|) sum sizes * a * conj(b)`; the sum
/// must come out divisible for genuine characters.
pub fn inner_product(a: &Character, b: &Character) -> i64 {
    assert!(a.group.same_group(&b.group));
    let g = &a.group;
    let classes = g.conjugacy_classes();
    let order = lcm(a.order.max(1) as u64, b.order.max(1) as u64) as u32;
    let mut acc = CycAccumulator::new(order);
    for (i, &size) in classes.sizes.iter().enumerate() {
        let x = a.values[i].lift_order(order);
        let y = b.values[i].lift_order(order);
        acc.add_times_conj(&x, &y, size as i64);
    }
    let total = acc.finish();
    let n = total
        .as_integer()
        .unwrap_or_else(|| panic!("character inner product must be rational: {total:?}"));
    assert_eq!(
        n.rem_euclid(g.order() as i64),
        0,
        "inner product must divide out |G|"
    );
    n / g.order() as i64
}

/// Frobenius induction from the subgroup with element list `members`;
/// `value` gives the subgroup character on parent element codes.
pub fn induce_values(
    g: &FiniteGroup,
    members: &[Elem],
    order: u32,
    value: &dyn Fn(Elem) -> Cyc,
) -> Character {
    let classes = g.conjugacy_classes();
    let h_order = members.len() as i64;
    let values: Vec<Cyc> = classes
        .reps
        .iter()
        .map(|&rep| {
            let mut acc = CycAccumulator::new(order);
            for x in g.elements() {
                let y = g.mul(g.mul(g.inv(x), rep), x);
                if members.binary_search(&y).is_ok() {
                    acc.add(&value(y).lift_order(order), 1);
                }
            }
            div_exact(&acc.finish(), h_order)
        })
        .collect();
    Character {
        group: g.clone(),
        order,
        values,
    }
}

fn div_exact(x: &Cyc, k: i64) -> Cyc {
    let r = x.reduced();
    let mut out = Cyc::zero(r.order());
    for &(e, c) in r.terms() {
        assert_eq!(c % k, 0, "induced values must be algebraic integers");
        out = out.add(&Cyc::root(r.order(), e as i64).scale(c / k));
    }
    out
}

/// Induction of a character of a subgroup-as-group along its embedding.
pub fn induce_character(
    g: &FiniteGroup,
    members: &[Elem],
    sub: &FiniteGroup,
    embed: &[Elem],
    chi: &Character,
) -> Character {
    assert!(chi.group.same_group(sub));
    let lookup: std::collections::HashMap<Elem, Elem> = embed
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u64))
        .collect();
    induce_values(g, members, chi.order.max(1), &|y| {
        chi.value_at(lookup[&y]).clone()
    })
}

/// Restriction to a subgroup-as-group.
pub fn restrict_character(chi: &Character, sub: &FiniteGroup, embed: &[Elem]) -> Character {
    let classes = sub.conjugacy_classes();
    let values = classes
        .reps
        .iter()
        .map(|&r| chi.value_at(embed[r as usize]).clone())
        .collect();
    Character {
        group: sub.clone(),
        order: chi.order,
        values,
    }
}

/// Inflation along a quotient map given by coset labels.
pub fn inflate_character(
    g: &FiniteGroup,
    quotient: &QuotientMul,
    qgroup: &FiniteGroup,
    chi: &Character,
) -> Character {
    assert!(chi.group.same_group(qgroup));
    let classes = g.conjugacy_classes();
    let values = classes
        .reps
        .iter()
        .map(|&r| chi.value_at(quotient.label_of(r) as u64).clone())
        .collect();
    Character {
        group: g.clone(),
        order: chi.order,
        values,
    }
}

/// Multiplicities of a class function over an irreducible table. Errors if
/// the integer multiplicities do not reconstruct the function exactly.
pub fn decompose(chi: &Character, table: &IrrTable) -> Result<Vec<i64>> {
    let mut coeffs = Vec::with_capacity(table.irreps.len());
    let mut rebuilt = Character::trivial(&chi.group).scale(0);
    for irr in &table.irreps {
        let m = inner_product(chi, &irr.character);
        coeffs.push(m);
        if m != 0 {
            rebuilt = rebuilt.add(&irr.character.scale(m));
        }
    }
    if !chi.sub(&rebuilt).is_zero() {
        return Err(Error::InvalidParam(
            "class function is not an integer combination of the table".into(),
        ));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    #[test]
    fn trivial_inner_product() {
        let g = build_group("wreath(c2,c2)").unwrap();
        let one = Character::trivial(&g);
        assert_eq!(inner_product(&one, &one), 1);
        assert_eq!(one.degree(), 1);
    }

    #[test]
    fn permutation_character_contains_trivial() {
        let g = build_group("cyclic(6)").unwrap();
        let reg = Character::permutation(&g, |x| if x == 0 { 6 } else { 0 });
        let one = Character::trivial(&g);
        assert_eq!(inner_product(&reg, &one), 1);
        assert_eq!(inner_product(&reg, &reg), 6);
    }

    #[test]
    fn induced_trivial_is_permutation_character() {
        // induction of the trivial character counts fixed cosets
        let g = build_group("wreath(c2,c2)").unwrap();
        let subs = crate::group::subgroups_up_to_index(&g, 2).unwrap();
        let h = &subs.iter().find(|s| s.index_in(&g) == 2).unwrap().elems;
        let ind = induce_values(&g, h, 1, &|_| Cyc::one(1));
        assert_eq!(ind.degree(), 2);
        for (i, &rep) in g.conjugacy_classes().reps.iter().enumerate() {
            let count = g
                .elements()
                .filter(|&x| h.binary_search(&g.mul(g.mul(g.inv(x), rep), x)).is_ok())
                .count() as i64;
            assert!(ind.values[i].equals(&Cyc::integer(1, count / h.len() as i64)));
        }
    }
}
