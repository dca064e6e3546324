//! Coordinate-subspace combinatorics: orbits of a permutation image on
//! size-i subsets with stabilizers, block splittings of monomial
//! representations, the multiplier systems of truncated-power classes, and
//! the window-product membership criterion in `(l) + I_G . R[H]`.

use std::collections::HashMap;

use crate::bar::TruncatedBar;
use crate::chars::{bar_to_monomial, inner_product, restrict_character, t_l, MonoMat, MonomialRep};
use crate::error::{Error, Result};
use crate::fp::{FpSpace, ZLattice};
use crate::group::{subgroup_as_group, Elem, FiniteGroup};
use crate::perm::Perm;
use crate::repring::{l_ideal_generators, RepRing};

const SUBSET_CAP: u64 = 1 << 16;

/// One orbit of the permutation image on subsets of fixed cardinality.
#[derive(Debug, Clone)]
pub struct CoordinateOrbit {
    pub n: usize,
    pub cardinality: usize,
    /// all subsets in the orbit, each sorted; the first is the
    /// lexicographically least representative
    pub subsets: Vec<Vec<usize>>,
    /// permutations fixing the representative setwise
    pub stabilizer_perms: Vec<Perm>,
}

impl CoordinateOrbit {
    pub fn representative(&self) -> &[usize] {
        &self.subsets[0]
    }

    pub fn size(&self) -> usize {
        self.subsets.len()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut out = 1u64;
    for i in 0..k.min(n - k) {
        out = out * (n - i) / (i + 1);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Complete orbit decomposition of the group given by the permutation list
/// `perms` on cardinality-i subsets of `{0..n-1}`, deterministic order.
pub fn orbits_on_subsets(perms: &[Perm], cardinality: usize) -> Result<Vec<CoordinateOrbit>> {
    let n = perms.first().map(Perm::degree).unwrap_or(0);
    if binomial(n as u64, cardinality as u64) > SUBSET_CAP {
        return Err(Error::CapExceeded {
            what: "subset enumeration",
            got: binomial(n as u64, cardinality as u64),
            cap: SUBSET_CAP,
        });
    }
    let subsets = combinations(n, cardinality);
    let index: HashMap<Vec<usize>, usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let mut seen = vec![false; subsets.len()];
    let mut orbits = Vec::new();
    for start in 0..subsets.len() {
        if seen[start] {
            continue;
        }
        let mut orbit_ids = vec![start];
        seen[start] = true;
        let mut frontier = vec![start];
        while let Some(s) = frontier.pop() {
            for p in perms {
                let moved = p.act_on_set(&subsets[s]);
                let t = index[&moved];
                if !seen[t] {
                    seen[t] = true;
                    orbit_ids.push(t);
                    frontier.push(t);
                }
            }
        }
        orbit_ids.sort_unstable();
        let rep = subsets[orbit_ids[0]].clone();
        let stabilizer_perms: Vec<Perm> = perms
            .iter()
            .filter(|p| p.act_on_set(&rep) == rep)
            .cloned()
            .collect();
        orbits.push(CoordinateOrbit {
            n,
            cardinality,
            subsets: orbit_ids.iter().map(|&i| subsets[i].clone()).collect(),
            stabilizer_perms,
        });
    }
    Ok(orbits)
}

/// The block decomposition of a monomial representation over the subgroup
/// stabilising a coordinate subset: `sigma` on the subset, `tau` on its
/// complement.
pub struct SplitRep {
    pub stabilizer: FiniteGroup,
    pub embed: Vec<Elem>,
    pub sigma: MonomialRep,
    pub tau: MonomialRep,
}

pub fn split_rep(rep: &MonomialRep, subset: &[usize]) -> Result<SplitRep> {
    let g = &rep.group;
    let inside: Vec<usize> = subset.to_vec();
    let outside: Vec<usize> = (0..rep.dim)
        .filter(|i| inside.binary_search(i).is_err())
        .collect();
    let members: Vec<Elem> = g
        .elements()
        .filter(|&x| rep.mat(x).perm.act_on_set(&inside) == inside)
        .collect();
    let (stabilizer, embed) = subgroup_as_group(g, &members, format!("stab<{}", g.name()))?;
    let restrict_block = |points: &[usize]| -> Result<MonomialRep> {
        let mats: Vec<MonoMat> = embed
            .iter()
            .map(|&parent| {
                let m = rep.mat(parent);
                let perm = m
                    .perm
                    .restrict_to(points)
                    .ok_or_else(|| Error::InvalidParam("subset is not stabilized".into()))?;
                let diag = points.iter().map(|&p| m.diag[p]).collect();
                Ok(MonoMat { perm, diag })
            })
            .collect::<Result<_>>()?;
        let block = MonomialRep {
            group: stabilizer.clone(),
            root_order: rep.root_order,
            dim: points.len(),
            mats,
        };
        block.verify_homomorphism()?;
        Ok(block)
    };
    let sigma = restrict_block(&inside)?;
    let tau = restrict_block(&outside)?;
    let restricted = restrict_character(&rep.character(), &stabilizer, &embed);
    let sum = sigma.character().add(&tau.character());
    if !restricted.sub(&sum).is_zero() {
        return Err(Error::InvalidParam("block characters must add up".into()));
    }
    Ok(SplitRep {
        stabilizer,
        embed,
        sigma,
        tau,
    })
}

/// The multiplier system of one coordinate orbit: classes of the truncated
/// powers of the level-s blocks in the stabilizer's representation ring,
/// with the ambient restriction data for the membership criterion.
pub struct IndSystem {
    pub l: u64,
    pub cardinality: usize,
    pub host: FiniteGroup,
    pub host_embed: Vec<Elem>,
    pub host_ring: RepRing,
    /// integer coordinates of `t_l(sigma_s)` for s = 1..levels
    pub multipliers: Vec<Vec<i64>>,
    /// restrictions of the ambient augmentation-ideal generators
    pub ambient_ideal_gens: Vec<Vec<i64>>,
}

pub fn ind_system(
    bar: &TruncatedBar,
    ambient_ring: &RepRing,
    orbit: &CoordinateOrbit,
    length: u32,
) -> Result<IndSystem> {
    let l = bar.l;
    let levels = length.min(bar.level).max(1);
    let full = bar_to_monomial(bar, bar.level)?;
    let split = split_rep(&full, orbit.representative())?;
    let host = split.stabilizer.clone();
    let host_embed = split.embed.clone();
    let host_ring = RepRing::new(&host)?;
    let points: Vec<usize> = orbit.representative().to_vec();
    let mut multipliers = Vec::new();
    for s in 1..=levels {
        let level_rep = bar_to_monomial(&bar.reduce_level(s)?, s)?;
        // the level-s block over the same host group
        let mats: Vec<MonoMat> = host_embed
            .iter()
            .map(|&parent| {
                let m = level_rep.mat(parent);
                let perm = m
                    .perm
                    .restrict_to(&points)
                    .ok_or_else(|| Error::InvalidParam("subset is not stabilized".into()))?;
                let diag = points.iter().map(|&p| m.diag[p]).collect();
                Ok(MonoMat { perm, diag })
            })
            .collect::<Result<_>>()?;
        let sigma_s = MonomialRep {
            group: host.clone(),
            root_order: level_rep.root_order,
            dim: points.len(),
            mats,
        };
        sigma_s.verify_homomorphism()?;
        let t = t_l(&sigma_s, l)?;
        // the class is a pullback from the block image: constant on cosets
        // of the block kernel
        let kernel: Vec<Elem> = host
            .elements()
            .filter(|&x| {
                let m = sigma_s.mat(x);
                m.perm.is_identity() && m.diag.iter().all(|&d| d == 0)
            })
            .collect();
        for &k in &kernel {
            for x in host.elements() {
                let y = host.mul(x, k);
                if !t.value_at(x).equals(t.value_at(y)) {
                    return Err(Error::InvalidParam(
                        "multiplier class must be a pullback from the block image".into(),
                    ));
                }
            }
        }
        let coords = host_ring.element_of(&t)?;
        let aug = host_ring.augmentation(&coords);
        assert_eq!(
            aug,
            (l as i64).pow(orbit.cardinality as u32),
            "truncated powers have augmentation l^i"
        );
        multipliers.push(coords);
    }
    let trivial_host = host_ring.element_of(&crate::chars::Character::trivial(&host))?;
    let ambient_ideal_gens: Vec<Vec<i64>> = ambient_ring
        .table
        .irreps
        .iter()
        .map(|irr| {
            let res = restrict_character(&irr.character, &host, &host_embed);
            let coords: Vec<i64> = host_ring
                .table
                .irreps
                .iter()
                .map(|lam| inner_product(&res, &lam.character))
                .collect();
            let d = irr.character.degree();
            coords
                .iter()
                .zip(trivial_host.iter())
                .map(|(&c, &t)| c - d * t)
                .collect()
        })
        .collect();
    Ok(IndSystem {
        l,
        cardinality: orbit.cardinality,
        host,
        host_embed,
        host_ring,
        multipliers,
        ambient_ideal_gens,
    })
}

/// Result of the window-product scan.
#[derive(Debug)]
pub struct TrivialityReport {
    /// least window length M whose cyclic products all lie in
    /// `(l) + I_G . R[H]`
    pub window_length: u64,
    /// every multiplier individually lies in `(l) + I_[R[H]]`
    pub each_multiplier_in_l_plus_i: bool,
}

/// Scans cyclic window products of the multiplier sequence for membership in
/// `(l) + I_G . R[H]`, in exact integer arithmetic with an F_l cross-check.
pub fn ind_triviality_check(sys: &IndSystem, bound: u64) -> Result<TrivialityReport> {
    let ring = &sys.host_ring;
    let l = sys.l;
    let dim = ring.dim;
    // (l) + I_G . R[H] as an integer lattice; the Hermite route is a
    // cross-check and only feasible at small dimension (coefficients grow),
    // while membership in a lattice containing (l) reduces exactly mod l.
    let lattice = (dim <= 12).then(|| {
        let mut gens: Vec<Vec<i64>> = l_ideal_generators(ring, l);
        for g in &sys.ambient_ideal_gens {
            for k in 0..dim {
                let mut unit = vec![0i64; dim];
                unit[k] = 1;
                gens.push(ring.mul_int(g, &unit));
            }
        }
        ZLattice::new(dim, gens)
    });
    // the same ideal mod l
    let fl_ideal = {
        let mut out = FpSpace::empty(l, dim);
        for g in &sys.ambient_ideal_gens {
            out.insert(g.iter().map(|&c| c.rem_euclid(l as i64) as u64).collect());
        }
        loop {
            let mut grew = false;
            let rows = out.rows().to_vec();
            for x in &rows {
                for e in 0..dim {
                    let xi: Vec<i64> = x.iter().map(|&c| c as i64).collect();
                    let mut unit = vec![0i64; dim];
                    unit[e] = 1;
                    let prod: Vec<u64> = ring
                        .mul_int(&xi, &unit)
                        .iter()
                        .map(|&c| c.rem_euclid(l as i64) as u64)
                        .collect();
                    if out.insert(prod) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break out;
            }
        }
    };
    let member = |x: &[i64]| -> bool {
        let reduced: Vec<u64> = x.iter().map(|&c| c.rem_euclid(l as i64) as u64).collect();
        let in_fl = fl_ideal.contains(&reduced);
        if let Some(lat) = &lattice {
            assert_eq!(
                lat.contains(x),
                in_fl,
                "integer and mod-l membership routes must agree"
            );
        }
        in_fl
    };
    let each = sys
        .multipliers
        .iter()
        .all(|r| ring.augmentation(r).rem_euclid(l as i64) == 0);
    let len = sys.multipliers.len() as u64;
    let mut m = 1u64;
    while m <= bound {
        let mut all_in = true;
        for start in 0..len {
            let mut prod = ring.one();
            for w in 0..m {
                let idx = ((start + w) % len) as usize;
                prod = ring.mul_int(&prod, &sys.multipliers[idx]);
            }
            if !member(&prod) {
                all_in = false;
                break;
            }
        }
        if all_in {
            return Ok(TrivialityReport {
                window_length: m,
                each_multiplier_in_l_plus_i: each,
            });
        }
        m += 1;
    }
    Err(Error::BoundExhausted {
        what: "window products never enter the ideal".into(),
        bound,
    })
}
