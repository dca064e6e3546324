//! Irreducible character tables, realised as monomial representations.
//!
//! Construction routes by constructor: abelian groups from their basis,
//! direct products by tensoring, wreath products `C_l wr K` from the orbit
//! basis on `Irr(K)^l` (extensions of constant tuples, inductions of
//! l-orbits), split torus semidirect products and Heisenberg quotients by
//! the little-group method, and plain table groups by the induced-linear
//! search that Blichfeldt guarantees to exhaust l-groups.

use std::collections::{HashMap, HashSet};

use super::monomial::{induce_monomial, MonoMat, MonomialRep};
use super::{induce_values, inner_product, Character};
use crate::cyc::Cyc;
use crate::error::{Error, Result};
use crate::group::{
    abelian_basis, abelian_basis_abstract, derived_of, generators_of, subgroup_as_group,
    subgroups_up_to_index, Elem, FiniteGroup, QuotientMul,
};
use crate::perm::{lcm, Perm};

#[derive(Clone)]
pub struct Irrep {
    pub character: Character,
    pub rep: MonomialRep,
}

pub struct IrrTable {
    pub group: FiniteGroup,
    /// Common root-of-unity order of all entries (the group exponent).
    pub order: u32,
    pub irreps: Vec<Irrep>,
}

impl IrrTable {
    pub fn degrees(&self) -> Vec<i64> {
        self.irreps.iter().map(|i| i.character.degree()).collect()
    }

    /// For a table of linear characters of an abelian group (each verified
    /// multiplicative at construction), row and column orthogonality both
    /// reduce exactly to character sums: products of table characters are
    /// table characters, so `<chi_a, chi_b>` is `(1/|G|) sum_g chi_d(g)` for
    /// the quotient character `d`, and the column sums are sums over the
    /// whole dual at a fixed element. Checking every `sum_g chi(g)` and
    /// every `sum_chi chi(g)` against `|G| delta` covers all pairs.
    fn verify_abelian(&self) -> Result<()> {
        let g = &self.group;
        let n = g.order() as i64;
        let mut scratch = crate::cyc::DenseScratch::new(self.order);
        let one = Cyc::one(self.order);
        // distinctness of the characters (injective dual): multiplicative
        // characters are determined by their values on generators
        let gens = g.generators();
        let mut keys: Vec<Vec<Vec<(u32, i64)>>> = self
            .irreps
            .iter()
            .map(|i| {
                gens.iter()
                    .map(|&x| {
                        i.character
                            .value_at(x)
                            .lift_order(self.order)
                            .canonical_key()
                    })
                    .collect()
            })
            .collect();
        keys.sort();
        keys.dedup();
        if keys.len() != self.irreps.len() {
            return Err(Error::InvalidParam(
                "characters must be pairwise distinct".into(),
            ));
        }
        for (k, irr) in self.irreps.iter().enumerate() {
            scratch.clear();
            let trivial = irr.character.values.iter().all(|v| v.equals(&one));
            for v in &irr.character.values {
                scratch.add_times_conj(&v.lift_order(self.order), &one, 1);
            }
            if !scratch.equals_integer(if trivial { n } else { 0 }) {
                return Err(Error::InvalidParam(format!(
                    "character sum fails at row {k}"
                )));
            }
        }
        for c in 0..g.class_count() {
            scratch.clear();
            for irr in &self.irreps {
                scratch.add_times_conj(&irr.character.values[c].lift_order(self.order), &one, 1);
            }
            let identity_class = self.group.conjugacy_classes().reps[c] == 0;
            if !scratch.equals_integer(if identity_class { n } else { 0 }) {
                return Err(Error::InvalidParam(format!("dual sum fails at class {c}")));
            }
        }
        Ok(())
    }

    fn is_linear_abelian(&self) -> bool {
        self.group.is_abelian() && self.irreps.iter().all(|i| i.character.degree() == 1)
    }

    /// Row orthonormality: `<chi_i, chi_j> = delta_ij`, exact.
    pub fn verify_orthonormal(&self) -> Result<()> {
        if self.is_linear_abelian() {
            return self.verify_abelian();
        }
        let classes = self.group.conjugacy_classes();
        let lifted: Vec<Vec<Cyc>> = self
            .irreps
            .iter()
            .map(|irr| {
                irr.character
                    .values
                    .iter()
                    .map(|v| v.lift_order(self.order))
                    .collect()
            })
            .collect();
        let mut scratch = crate::cyc::DenseScratch::new(self.order);
        for i in 0..self.irreps.len() {
            for j in i..self.irreps.len() {
                scratch.clear();
                for (c, &size) in classes.sizes.iter().enumerate() {
                    scratch.add_times_conj(&lifted[i][c], &lifted[j][c], size as i64);
                }
                let want = if i == j { self.group.order() as i64 } else { 0 };
                if !scratch.equals_integer(want) {
                    return Err(Error::InvalidParam(format!(
                        "row orthogonality fails at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Column orthogonality: `sum_chi chi(g) conj(chi(h)) = delta |C(g)|`.
    pub fn verify_columns(&self) -> Result<()> {
        if self.is_linear_abelian() {
            return self.verify_abelian();
        }
        let classes = self.group.conjugacy_classes();
        let n = classes.count();
        // lift all values once; the per-entry accumulator keeps this linear
        // in the number of sparse terms
        let lifted: Vec<Vec<Cyc>> = self
            .irreps
            .iter()
            .map(|irr| {
                irr.character
                    .values
                    .iter()
                    .map(|v| v.lift_order(self.order))
                    .collect()
            })
            .collect();
        let mut scratch = crate::cyc::DenseScratch::new(self.order);
        for a in 0..n {
            for b in a..n {
                scratch.clear();
                for row in &lifted {
                    scratch.add_times_conj(&row[a], &row[b], 1);
                }
                let want = if a == b {
                    (self.group.order() / classes.sizes[a]) as i64
                } else {
                    0
                };
                if !scratch.equals_integer(want) {
                    return Err(Error::InvalidParam(format!(
                        "column orthogonality fails at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn finish(group: &FiniteGroup, order: u32, irreps: Vec<Irrep>) -> Result<IrrTable> {
        let sum: i64 = irreps.iter().map(|i| i.character.degree().pow(2)).sum();
        if sum != group.order() as i64 || irreps.len() != group.class_count() {
            return Err(Error::InvalidParam(format!(
                "table of {} is incomplete: {} irreducibles, degree square sum {}",
                group.name(),
                irreps.len(),
                sum
            )));
        }
        Ok(IrrTable {
            group: group.clone(),
            order,
            irreps,
        })
    }
}

/// The complete irreducible table of a supported group.
pub fn irr_table(g: &FiniteGroup) -> Result<IrrTable> {
    let order = g.exponent() as u32;
    if g.order() == 1 {
        let irr = Irrep {
            character: Character::trivial(g),
            rep: MonomialRep {
                group: g.clone(),
                root_order: 1,
                dim: 1,
                mats: vec![MonoMat::identity(1)],
            },
        };
        return IrrTable::finish(g, 1, vec![irr]);
    }
    if g.is_abelian() {
        return abelian_table(g, order);
    }
    if let Some((l, base)) = g.wreath_params() {
        let base = base.clone();
        return wreath_table(g, order, l, &base);
    }
    if let Some((a, b)) = product_parts(g) {
        return product_table(g, order, &a, &b);
    }
    if g.split_data().is_some() {
        return little_group_table(g, order);
    }
    generic_table(g, order)
}

fn product_parts(g: &FiniteGroup) -> Option<(FiniteGroup, FiniteGroup)> {
    // exposed through the perm-action free structure: rebuild from the name
    // is brittle, so use a dedicated accessor
    g.product_parts()
}

fn abelian_table(g: &FiniteGroup, order: u32) -> Result<IrrTable> {
    let basis = abelian_basis(g);
    let n = order as u64;
    let count: u64 = basis.orders.iter().product();
    assert_eq!(count, g.order());
    let mut irreps = Vec::with_capacity(count as usize);
    for code in 0..count {
        // dual tuple in mixed radix over the basis orders
        let mut j = vec![0u64; basis.orders.len()];
        let mut c = code;
        for (i, &d) in basis.orders.iter().enumerate().rev() {
            j[i] = c % d;
            c /= d;
        }
        let exponent = |x: Elem| -> u32 {
            let coords = &basis.dlog[&x];
            let e: u64 = coords
                .iter()
                .zip(j.iter().zip(basis.orders.iter()))
                .map(|(&x_i, (&j_i, &d_i))| x_i % d_i * j_i % d_i * (n / d_i) % n)
                .sum::<u64>()
                % n;
            e as u32
        };
        let mats: Vec<MonoMat> = g
            .elements()
            .map(|x| MonoMat {
                perm: Perm::identity(1),
                diag: vec![exponent(x)],
            })
            .collect();
        let rep = MonomialRep {
            group: g.clone(),
            root_order: order,
            dim: 1,
            mats,
        };
        rep.verify_homomorphism()?;
        irreps.push(Irrep {
            character: rep.character(),
            rep,
        });
    }
    IrrTable::finish(g, order, irreps)
}

fn product_table(
    g: &FiniteGroup,
    order: u32,
    a: &FiniteGroup,
    b: &FiniteGroup,
) -> Result<IrrTable> {
    let ta = irr_table(a)?;
    let tb = irr_table(b)?;
    let fa = order / ta.order;
    let fb = order / tb.order;
    assert_eq!(order % ta.order, 0);
    assert_eq!(order % tb.order, 0);
    let nb = b.order();
    let mut irreps = Vec::new();
    for ia in &ta.irreps {
        for ib in &tb.irreps {
            let mats: Vec<MonoMat> = g
                .elements()
                .map(|x| {
                    let ma = ia.rep.mat(x / nb).scale_exponents(fa);
                    let mb = ib.rep.mat(x % nb).scale_exponents(fb);
                    ma.tensor(&mb, order)
                })
                .collect();
            let rep = MonomialRep {
                group: g.clone(),
                root_order: order,
                dim: ia.rep.dim * ib.rep.dim,
                mats,
            };
            rep.verify_homomorphism()?;
            irreps.push(Irrep {
                character: rep.character(),
                rep,
            });
        }
    }
    IrrTable::finish(g, order, irreps)
}

fn wreath_table(g: &FiniteGroup, order: u32, l: u64, base: &FiniteGroup) -> Result<IrrTable> {
    let tb = irr_table(base)?;
    let r = tb.irreps.len() as u64;
    let lu = l as usize;
    let factor = order / tb.order;
    assert_eq!(
        order % tb.order,
        0,
        "base exponent divides the wreath exponent"
    );
    assert_eq!(order as u64 % l, 0, "l divides the wreath exponent");
    let base_mat =
        |t: usize, k: Elem| -> MonoMat { tb.irreps[t].rep.mat(k).scale_exponents(factor) };

    // orbits of the cyclic shift on Irr(base)^l, tuples as mixed-radix codes
    let tuple_count = r.pow(l as u32);
    let decode = |code: u64| -> Vec<usize> {
        let mut t = vec![0usize; lu];
        let mut c = code;
        for i in (0..lu).rev() {
            t[i] = (c % r) as usize;
            c /= r;
        }
        t
    };
    let encode = |t: &[usize]| -> u64 { t.iter().fold(0u64, |acc, &d| acc * r + d as u64) };

    let mut constants: Vec<usize> = Vec::new();
    let mut orbit_reps: Vec<Vec<usize>> = Vec::new();
    for code in 0..tuple_count {
        let t = decode(code);
        // rotations (c.t)_i = t_(i-c)
        let mut min_code = code;
        let mut size = 1;
        for c in 1..lu {
            let rotated: Vec<usize> = (0..lu).map(|i| t[(i + lu - c) % lu]).collect();
            let rc = encode(&rotated);
            if rc != code {
                size = lu;
            }
            min_code = min_code.min(rc);
        }
        if min_code != code {
            continue;
        }
        if size == 1 {
            constants.push(t[0]);
        } else {
            orbit_reps.push(t);
        }
    }

    let mut irreps = Vec::new();
    // constant tuples: the tensor-power extension, twisted by Irr(C_l)
    for &t in &constants {
        let d = tb.irreps[t].rep.dim;
        let big_dim = d.pow(l as u32);
        // slot permutation matrices for the cyclic part
        let slot_perm = |c: u64| -> Perm {
            let mut images = vec![0u32; big_dim];
            for idx in 0..big_dim {
                // decode multi-index, shift slots by c
                let mut ji = vec![0usize; lu];
                let mut x = idx;
                for i in (0..lu).rev() {
                    ji[i] = x % d;
                    x /= d;
                }
                let shifted: Vec<usize> = (0..lu).map(|i| ji[(i + lu - c as usize) % lu]).collect();
                let target = shifted.iter().fold(0usize, |acc, &j| acc * d + j);
                images[idx] = target as u32;
            }
            Perm::from_images(images).unwrap()
        };
        let block_mat = |f: &[Elem]| -> MonoMat {
            let mut m = base_mat(t, f[0]);
            for &fi in &f[1..] {
                m = m.tensor(&base_mat(t, fi), order);
            }
            m
        };
        for twist in 0..l {
            let mats: Vec<MonoMat> = g
                .elements()
                .map(|x| {
                    let (c, f) = g.wreath_form(x).unwrap();
                    let m0 = block_mat(&f);
                    let mc = MonoMat {
                        perm: slot_perm(c),
                        diag: vec![0; big_dim],
                    };
                    let mut m = m0.mul(&mc, order);
                    let scalar =
                        (order as u64 / l * twist % order as u64 * c % order as u64) as u32;
                    for e in m.diag.iter_mut() {
                        *e = (*e + scalar) % order;
                    }
                    m
                })
                .collect();
            let rep = MonomialRep {
                group: g.clone(),
                root_order: order,
                dim: big_dim,
                mats,
            };
            rep.verify_homomorphism()?;
            irreps.push(Irrep {
                character: rep.character(),
                rep,
            });
        }
    }
    // l-orbits: induce the outer tensor product from the base block
    let block = base.order().pow(l as u32);
    let members: Vec<Elem> = (0..block).collect();
    for t in &orbit_reps {
        let dim: usize = t.iter().map(|&ti| tb.irreps[ti].rep.dim).product();
        let sub_mat = |h: Elem| -> MonoMat {
            let (c, f) = g.wreath_form(h).unwrap();
            debug_assert_eq!(c, 0);
            let mut m = base_mat(t[0], f[0]);
            for i in 1..lu {
                m = m.tensor(&base_mat(t[i], f[i]), order);
            }
            m
        };
        let rep = induce_monomial(g, &members, dim, order, &sub_mat)?;
        irreps.push(Irrep {
            character: rep.character(),
            rep,
        });
    }
    IrrTable::finish(g, order, irreps)
}

fn little_group_table(g: &FiniteGroup, order: u32) -> Result<IrrTable> {
    let (normal, comp) = g.split_data().expect("split data present");
    let (a_group, a_embed) = subgroup_as_group(g, &normal, format!("normal<{}", g.name()))?;
    let a_index: HashMap<Elem, Elem> = a_embed
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u64))
        .collect();
    let basis = abelian_basis(&a_group);
    let d_orders = basis.orders.clone();
    let n_a: u64 = d_orders.iter().fold(1, |acc, &d| lcm(acc, d));
    let dual_count: u64 = d_orders.iter().product();
    assert_eq!(dual_count, a_group.order());
    let decode_dual = |code: u64| -> Vec<u64> {
        let mut j = vec![0u64; d_orders.len()];
        let mut c = code;
        for (i, &d) in d_orders.iter().enumerate().rev() {
            j[i] = c % d;
            c /= d;
        }
        j
    };
    let encode_dual = |j: &[u64]| -> u64 {
        j.iter()
            .zip(d_orders.iter())
            .fold(0u64, |acc, (&ji, &d)| acc * d + ji)
    };
    // character exponent of dual j at the A-code x, at order n_a
    let dual_exp = |j: &[u64], x: Elem| -> u64 {
        basis.dlog[&x]
            .iter()
            .zip(j.iter().zip(d_orders.iter()))
            .map(|(&x_i, (&j_i, &d_i))| x_i * j_i % d_i * (n_a / d_i) % n_a)
            .sum::<u64>()
            % n_a
    };
    // comp action on duals: (q . j) evaluated via chi(q^-1 b_i q)
    let comp_gens = generators_of(g, &comp);
    let act = |q: Elem, code: u64| -> u64 {
        let j = decode_dual(code);
        let qinv = g.inv(q);
        let mut out = vec![0u64; d_orders.len()];
        for (i, &d_i) in d_orders.iter().enumerate() {
            let b_parent = a_embed[basis.gens[i] as usize];
            let conj = g.mul(g.mul(qinv, b_parent), q);
            let e = dual_exp(&j, a_index[&conj]);
            assert_eq!(e % (n_a / d_i), 0, "conjugated character keeps its order");
            out[i] = e / (n_a / d_i) % d_i;
        }
        encode_dual(&out)
    };

    // orbit decomposition of the dual
    let mut seen = vec![false; dual_count as usize];
    let mut irreps = Vec::new();
    for start in 0..dual_count {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start as usize] = true;
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for &q in &comp_gens {
                let y = act(q, x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                    frontier.push(y);
                }
            }
        }
        let j = decode_dual(start);
        // stabilizer inside the complement
        let stab: Vec<Elem> = comp
            .iter()
            .copied()
            .filter(|&q| act(q, start) == start)
            .collect();
        // P = stab . A with its decomposition map
        let mut p_members: Vec<Elem> = Vec::new();
        let mut decomp: HashMap<Elem, (Elem, Elem)> = HashMap::new();
        for &q in &stab {
            for &a in &normal {
                let p = g.mul(q, a);
                decomp.insert(p, (q, a));
                p_members.push(p);
            }
        }
        p_members.sort_unstable();
        let (stab_group, stab_embed) = subgroup_as_group(g, &stab, format!("stab<{}", g.name()))?;
        let stab_index: HashMap<Elem, Elem> = stab_embed
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i as u64))
            .collect();
        let stab_table = irr_table(&stab_group)?;
        let lift = order as u64 / n_a;
        assert_eq!(order as u64 % n_a, 0);
        for psi in &stab_table.irreps {
            let psi_factor = order / psi.rep.root_order;
            let dim = psi.rep.dim;
            let p_mat = |p: Elem| -> MonoMat {
                let (q, a) = decomp[&p];
                let mut m = psi.rep.mat(stab_index[&q]).scale_exponents(psi_factor);
                let scalar = (dual_exp(&j, a_index[&a]) * lift % order as u64) as u32;
                for e in m.diag.iter_mut() {
                    *e = (*e + scalar) % order;
                }
                m
            };
            let rep = induce_monomial(g, &p_members, dim, order, &p_mat)?;
            irreps.push(Irrep {
                character: rep.character(),
                rep,
            });
        }
    }
    IrrTable::finish(g, order, irreps)
}

/// Induced-from-linear search for table groups of prime-power order.
fn generic_table(g: &FiniteGroup, order: u32) -> Result<IrrTable> {
    if g.order() > 128 {
        return Err(Error::CapExceeded {
            what: "brute-force irreducible search",
            got: g.order(),
            cap: 128,
        });
    }
    let l = g.prime().ok_or_else(|| {
        Error::Unsupported(format!(
            "{} is not of prime-power order; no table route",
            g.name()
        ))
    })?;
    let mut irreps: Vec<Irrep> = Vec::new();
    let mut seen: HashSet<Vec<Vec<(u32, i64)>>> = HashSet::new();
    let mut sum = 0i64;
    let target = g.order() as i64;
    let mut index = 1u64;
    while sum < target {
        if index * index > g.order() {
            return Err(Error::InvalidParam(format!(
                "irreducible search exhausted degrees for {}",
                g.name()
            )));
        }
        for sub in subgroups_up_to_index(g, index)? {
            if sub.index_in(g) != index {
                continue;
            }
            for lam in linear_characters(g, &sub.elems, order) {
                let chi =
                    induce_values(g, &sub.elems, order, &|h| Cyc::root(order, lam[&h] as i64));
                if inner_product(&chi, &chi) != 1 {
                    continue;
                }
                if !seen.insert(chi.canonical_key()) {
                    continue;
                }
                let rep = induce_monomial(g, &sub.elems, 1, order, &|h| MonoMat {
                    perm: Perm::identity(1),
                    diag: vec![lam[&h]],
                })?;
                sum += chi.degree().pow(2);
                irreps.push(Irrep {
                    character: chi,
                    rep,
                });
            }
        }
        index *= l;
    }
    irreps.sort_by(|a, b| {
        (a.character.degree(), a.character.canonical_key())
            .cmp(&(b.character.degree(), b.character.canonical_key()))
    });
    IrrTable::finish(g, order, irreps)
}

/// All linear characters of the subgroup `members`, as exponent maps on
/// parent codes at root order `order`, in a deterministic dual order.
pub fn linear_characters(g: &FiniteGroup, members: &[Elem], order: u32) -> Vec<HashMap<Elem, u32>> {
    let derived = derived_of(g, members);
    let quot = QuotientMul::new(g, members, &derived);
    let q = quot.order() as u32;
    let mul = |a: u32, b: u32| quot.mul(a, b);
    let basis = abelian_basis_abstract(q, &mul);
    let n = order as u64;
    let count: u64 = basis.orders.iter().product();
    let mut out = Vec::with_capacity(count as usize);
    for code in 0..count {
        let mut j = vec![0u64; basis.orders.len()];
        let mut c = code;
        for (i, &d) in basis.orders.iter().enumerate().rev() {
            j[i] = c % d;
            c /= d;
        }
        let map: HashMap<Elem, u32> = members
            .iter()
            .map(|&x| {
                let coords = &basis.dlog[&quot.label_of(x)];
                let e: u64 = coords
                    .iter()
                    .zip(j.iter().zip(basis.orders.iter()))
                    .map(|(&x_i, (&j_i, &d_i))| x_i * j_i % d_i * (n / d_i) % n)
                    .sum::<u64>()
                    % n;
                (x, e as u32)
            })
            .collect();
        out.push(map);
    }
    out
}

/// Blichfeldt realization: a subgroup and a linear character of it inducing
/// the given irreducible, found by searching subgroups of index = degree in
/// canonical order and re-verifying the induction identity exactly.
pub struct Monomialization {
    pub members: Vec<Elem>,
    pub linear: HashMap<Elem, u32>,
    pub order: u32,
}

pub fn monomialize(g: &FiniteGroup, chi: &Character) -> Result<Monomialization> {
    let order = chi.order.max(1);
    let degree = chi.degree();
    if degree < 1 {
        return Err(Error::InvalidParam(
            "characters have positive degree".into(),
        ));
    }
    for sub in subgroups_up_to_index(g, degree as u64)? {
        if sub.index_in(g) != degree as u64 {
            continue;
        }
        for lam in linear_characters(g, &sub.elems, order) {
            let ind = induce_values(g, &sub.elems, order, &|h| Cyc::root(order, lam[&h] as i64));
            if ind.sub(chi).is_zero() {
                return Ok(Monomialization {
                    members: sub.elems.clone(),
                    linear: lam,
                    order,
                });
            }
        }
    }
    Err(Error::InvalidParam(format!(
        "no monomial realization of a degree-{degree} irreducible in {}",
        g.name()
    )))
}
