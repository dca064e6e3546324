//! Named verification suites: each claim exercises one verified statement
//! of the library against pinned expectations and returns a deterministic
//! detail string. The CLI runs suites and serializes reports; the
//! acceptance tests assert every claim passes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bar::{
    c_obstruction, construct_principal_bar, freeness_level_bound, norm_vector, orbit_sums,
    principal_kernel, product_bar, AffineElement, ConstructOutcome, FreenessOutcome,
    PrincipalOutcome, TruncatedBar,
};
use crate::chars::{
    bar_to_monomial, induce_values, inner_product, irr_table, monomialize,
    permutation_identity_check, restrict_character,
};
use crate::cyc::Cyc;
use crate::error::{Error, Result};
use crate::filtration::{binomial, ind_system, ind_triviality_check, orbits_on_subsets, split_rep};
use crate::fp::FpSpace;
use crate::group::{build_group, subgroup_as_group, subgroups_up_to_index, Elem};
use crate::perm::{all_perms, Perm};
use crate::repring::{hat_restriction_injective, restriction_image_check, sylow_subgroup, RepRing};
use crate::rootring::{
    maindiagram_exponent, orbit_sum_basis, perm_group, theorem_general_witness, AugmentedSquare,
    FlAlgebra, TensorElem,
};
use crate::tower::{
    free_abelian_tower, heisenberg_even_subgroup, heisenberg_tower, subgroup_tower, ttf_scan,
};

pub const SUITE_NAMES: &[&str] = &[
    "ttf",
    "bar-lemmas",
    "wreath-chars",
    "ideal-nilpotency",
    "sylow-invariants",
    "root-witness",
    "maindiagram",
    "filtration",
    "ind-triviality",
    "all",
];

/// Constructor l-groups used by the character-table integrity claims; all
/// orders at most 512, covering every constructor family.
pub const TABLE_CORPUS: &[&str] = &[
    "cyclic(2)",
    "cyclic(4)",
    "cyclic(8)",
    "cyclic(16)",
    "cyclic(512)",
    "cyclic(3)",
    "cyclic(9)",
    "cyclic(243)",
    "product(c2,c2)",
    "product(c4,c4)",
    "product(c2,product(c4,c8))",
    "torus(2,2,2)",
    "torus(3,1,3)",
    "wreath(c2,c2)",
    "wreath(c2,cyclic(4))",
    "wreath(c2,product(c2,c2))",
    "wreath(c2,cyclic(8))",
    "wreath(c2,cyclic(16))",
    "wreath(c3,c3)",
    "sylow_symmetric(2,2)",
    "sylow_symmetric(2,3)",
    "sylow_symmetric(3,2)",
    "semidirect(c2,torus(2,2,2))",
    "semidirect(sylow_symmetric(2,2),torus(2,1,4))",
    "semidirect(c3,torus(3,1,3))",
    "semidirect(perm((1 2)(3 4)),torus(2,2,4))",
    "heisenberg(2,1)",
    "heisenberg(2,2)",
    "heisenberg(2,3)",
    "heisenberg(3,1)",
];

/// Groups of order at most 128 for the monomialization claim.
pub fn small_corpus() -> Vec<&'static str> {
    TABLE_CORPUS
        .iter()
        .copied()
        .filter(|spec| build_group(spec).map(|g| g.order() <= 128).unwrap_or(false))
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimRecord {
    pub claim: String,
    /// the mathematical statement checked, or "plumbing"
    pub statement: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub parameters: BTreeMap<String, u64>,
    pub seed: u64,
    pub records: Vec<ClaimRecord>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let mark = if r.status == Status::Pass {
                "pass"
            } else {
                "FAIL"
            };
            out.push_str(&format!("[{mark}] {}: {}\n", r.claim, r.detail));
        }
        let passed = self
            .records
            .iter()
            .filter(|r| r.status == Status::Pass)
            .count();
        out.push_str(&format!(
            "suite {}: {passed}/{} claims passed\n",
            self.suite,
            self.records.len()
        ));
        out
    }
}

#[derive(Clone)]
pub struct SuiteParams {
    pub seed: u64,
    pub jobs: usize,
    pub overrides: BTreeMap<String, u64>,
}

impl Default for SuiteParams {
    fn default() -> SuiteParams {
        SuiteParams {
            seed: 1,
            jobs: 1,
            overrides: BTreeMap::new(),
        }
    }
}

impl SuiteParams {
    fn get(&self, key: &str, default: u64) -> u64 {
        self.overrides.get(key).copied().unwrap_or(default)
    }
}

struct Claim {
    id: String,
    statement: String,
    run: Box<dyn Fn() -> Result<String> + Send + Sync>,
}

fn claim(
    id: impl Into<String>,
    statement: impl Into<String>,
    run: impl Fn() -> Result<String> + Send + Sync + 'static,
) -> Claim {
    Claim {
        id: id.into(),
        statement: statement.into(),
        run: Box::new(run),
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Report> {
    let claims = claims_for(name, params)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?;
    use rayon::prelude::*;
    let records: Vec<ClaimRecord> = pool.install(|| {
        claims
            .par_iter()
            .map(|c| {
                let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (c.run)()));
                let (status, detail) = match outcome {
                    Ok(Ok(detail)) => (Status::Pass, detail),
                    Ok(Err(e)) => (Status::Fail, format!("{e}")),
                    Err(panic) => {
                        let msg = panic
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panicked".into());
                        (Status::Fail, format!("panic: {msg}"))
                    }
                };
                ClaimRecord {
                    claim: c.id.clone(),
                    statement: c.statement.clone(),
                    status,
                    detail,
                }
            })
            .collect()
    });
    Ok(Report {
        suite: name.to_string(),
        parameters: params.overrides.clone(),
        seed: params.seed,
        records,
    })
}

fn claims_for(name: &str, params: &SuiteParams) -> Result<Vec<Claim>> {
    match name {
        "ttf" => Ok(ttf_claims(params)),
        "bar-lemmas" => Ok(bar_claims(params)),
        "wreath-chars" => Ok(wreath_char_claims(params)),
        "ideal-nilpotency" => Ok(ideal_claims(params)),
        "sylow-invariants" => Ok(sylow_claims(params)),
        "root-witness" => Ok(root_witness_claims(params)),
        "maindiagram" => Ok(maindiagram_claims(params)),
        "filtration" => Ok(filtration_claims(params)),
        "ind-triviality" => Ok(ind_triviality_claims(params)),
        "all" => {
            let mut out = Vec::new();
            for n in SUITE_NAMES.iter().filter(|&&n| n != "all") {
                out.extend(claims_for(n, params)?);
            }
            Ok(out)
        }
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::InvalidParam(msg.into())
}

// ---------------------------------------------------------------- ttf

fn ttf_claims(params: &SuiteParams) -> Vec<Claim> {
    // the pinned expectations need at least four levels: shorter windows
    // still contain divisor values passed through by the growing factors
    let depth = (params.get("depth", 4) as usize).max(4);
    let index_bound = params.get("index_bound", 2);
    let mut out = Vec::new();
    out.push(claim(
        "ttf/heisenberg-persistent-factor",
        "the even-top-middle subgroup of the Heisenberg tower keeps a bounded \
         elementary divisor 2 at every scanned level",
        move || {
            let t = heisenberg_tower(2, depth)?;
            let reports = ttf_scan(&t, index_bound, depth)?;
            let m = 1u64 << depth;
            let even = heisenberg_even_subgroup(&t.levels[depth - 1], m);
            let subs = subgroups_up_to_index(&t.levels[depth - 1], index_bound)?;
            let pos = subs
                .iter()
                .position(|s| s.elems == even)
                .ok_or_else(|| fail("even subgroup not scanned"))?;
            let report = &reports[pos];
            if report.persistent != vec![2] {
                return Err(fail(format!("persistent factors {:?}", report.persistent)));
            }
            for (k, inv) in report.per_level.iter().enumerate().skip(1) {
                let kk = (k + 1) as u32;
                let mut expect = vec![2u64, 1 << (kk - 1), 1 << kk];
                expect.sort_unstable();
                if inv.divisors != expect {
                    return Err(fail(format!("level {kk} invariants {:?}", inv.divisors)));
                }
            }
            Ok(format!(
                "index-2 subgroup reports persistent divisor 2 with invariants {:?}",
                report
                    .per_level
                    .iter()
                    .map(|i| i.divisors.clone())
                    .collect::<Vec<_>>()
            ))
        },
    ));
    out.push(claim(
        "ttf/free-abelian-no-persistent-factors",
        "free abelian towers of rank at most 3 show no bounded elementary \
         divisors in any scanned subgroup",
        move || {
            let mut scanned = 0;
            for rank in 1..=3usize {
                let t = free_abelian_tower(2, rank, depth)?;
                let reports = ttf_scan(&t, index_bound, depth)?;
                scanned += reports.len();
                for r in &reports {
                    if !r.persistent.is_empty() {
                        return Err(fail(format!(
                            "rank {rank} index {} persistent {:?}",
                            r.index, r.persistent
                        )));
                    }
                }
            }
            Ok(format!(
                "{scanned} subgroup towers scanned, none persistent"
            ))
        },
    ));
    out.push(claim(
        "ttf/persistent-factor-stable-across-depths",
        "deepening the Heisenberg scan never loses the stable factor 2",
        move || {
            for d in 2..=depth {
                let t = heisenberg_tower(2, d)?;
                let m = 1u64 << d;
                let even = heisenberg_even_subgroup(&t.levels[d - 1], m);
                let st = subgroup_tower(&t, &even)?;
                let inv: Vec<_> = st
                    .levels
                    .iter()
                    .enumerate()
                    .map(|(k, ms)| crate::group::abelian_invariants_of(&t.levels[k], ms))
                    .collect();
                let p = crate::tower::persistent_factors(2, &inv);
                if !p.contains(&2) {
                    return Err(fail(format!("depth {d}: persistent {:?}", p)));
                }
            }
            Ok(format!("factor 2 reported at every depth 2..={depth}"))
        },
    ));
    out
}

// ---------------------------------------------------------- bar lemmas

fn bar_claims(params: &SuiteParams) -> Vec<Claim> {
    let span = params.get("entry_span", 2) as i64;
    let max_n = params.get("n", 4) as usize;
    let mut out = Vec::new();
    out.push(claim(
        "bar-lemmas/torsion-three-way-agreement",
        "norm vector vanishes iff all cycle sums vanish iff the affine \
         fixed-point system solves over the integers (exhaustive)",
        move || {
            let mut checked = 0u64;
            for n in 1..=max_n {
                for sigma in all_perms(n) {
                    let width = (2 * span + 1) as u64;
                    for code in 0..width.pow(n as u32) {
                        let mut f = Vec::with_capacity(n);
                        let mut c = code;
                        for _ in 0..n {
                            f.push((c % width) as i64 - span);
                            c /= width;
                        }
                        let a = AffineElement {
                            perm: sigma.clone(),
                            f: f.clone(),
                        };
                        let norm_zero = norm_vector(&a).iter().all(|&x| x == 0);
                        let sums_zero = orbit_sums(&sigma, &f).iter().all(|&s| s == 0);
                        let solvable =
                            crate::bar::fixed_point_witness_integer(&sigma, &f).is_some();
                        if norm_zero != sums_zero || sums_zero != solvable {
                            return Err(fail(format!("disagreement at {sigma:?} {f:?}")));
                        }
                        checked += 1;
                    }
                }
            }
            Ok(format!("{checked} triples agree"))
        },
    ));
    out.push(claim(
        "bar-lemmas/fixed-point-level-reduction",
        "a fixed-point witness at level k reduces to one at level k-1",
        || {
            for sigma in all_perms(2) {
                for f0 in 0..8u64 {
                    for f1 in 0..8u64 {
                        if crate::bar::fixed_point_witness(&sigma, &[f0, f1], 8).is_some()
                            && crate::bar::fixed_point_witness(&sigma, &[f0 % 4, f1 % 4], 4)
                                .is_none()
                        {
                            return Err(fail(format!("reduction failed at {sigma:?}")));
                        }
                    }
                }
            }
            Ok("all level-3 witnesses reduce to level 2".into())
        },
    ));
    out.push(claim(
        "bar-lemmas/order-l-lift-obstruction",
        "the lift obstruction vanishes exactly when an order-l lift exists, \
         independent of the chosen lift",
        || {
            let h = build_group("cyclic(4)")?;
            let phi: Vec<u64> = (0..4).map(|x| x % 2).collect();
            let ob = c_obstruction(&h, &phi, 2)?;
            if ob.is_zero || !ob.lift_independent {
                return Err(fail("the order-4 extension must obstruct"));
            }
            let h = build_group("product(c2,c2)")?;
            let phi: Vec<u64> = (0..4).map(|x| x / 2).collect();
            let ob = c_obstruction(&h, &phi, 2)?;
            if !ob.is_zero || ob.order_l_lift.is_none() {
                return Err(fail("split extensions must have order-l lifts"));
            }
            let h = build_group("cyclic(9)")?;
            let phi: Vec<u64> = (0..9).map(|x| x % 3).collect();
            let ob = c_obstruction(&h, &phi, 3)?;
            if ob.is_zero {
                return Err(fail("the order-9 extension must obstruct"));
            }
            Ok("obstruction classes match order-l lifts on the fixtures".into())
        },
    ));
    out.push(claim(
        "bar-lemmas/freeness-levels",
        "translation actions are free from level 1, swap-with-translation is \
         free at every level, pure permutation parts never act freely",
        || {
            let g = build_group("cyclic(8)")?;
            let bar = TruncatedBar::translation(&g, 2, 3, &(0..8).collect::<Vec<_>>())?;
            if freeness_level_bound(&bar, 3)? != FreenessOutcome::FreeFrom(1) {
                return Err(fail("translations must be free from level 1"));
            }
            let g = build_group("cyclic(16)")?;
            let swap = Perm::transposition(2, 0, 1);
            let bar =
                TruncatedBar::from_generator_images(&g, 2, 3, 2, &[(swap.clone(), vec![1, 0])])?;
            if freeness_level_bound(&bar, 3)? != FreenessOutcome::FreeFrom(1) {
                return Err(fail("swap-and-translate must be free"));
            }
            let g = build_group("cyclic(2)")?;
            let bar = TruncatedBar::from_generator_images(&g, 2, 3, 2, &[(swap, vec![0, 0])])?;
            if freeness_level_bound(&bar, 3)? != FreenessOutcome::NotFreeWithin(3) {
                return Err(fail("a pure swap fixes the diagonal"));
            }
            Ok("freeness levels match on the three fixtures".into())
        },
    ));
    out.push(claim(
        "bar-lemmas/products-of-principal",
        "a product of representations with uniform stabilizers has the \
         intersection kernel, and induction restricts to translations",
        || {
            let g = build_group("cyclic(2)")?;
            let a = TruncatedBar::translation(&g, 2, 1, &[0, 1])?;
            let p = product_bar(&a, &a)?;
            match principal_kernel(&p) {
                PrincipalOutcome::Principal { kernel } => {
                    if kernel != vec![0] {
                        return Err(fail("free times free must stay free"));
                    }
                }
                _ => return Err(fail("product of principal must be principal")),
            }
            let d4 = build_group("wreath(c2,c2)")?;
            let subs = subgroups_up_to_index(&d4, 2)?;
            let h = subs
                .iter()
                .find(|s| s.index_in(&d4) == 2)
                .ok_or_else(|| fail("maximal subgroups exist"))?;
            let values: std::collections::HashMap<Elem, u64> =
                h.elems.iter().map(|&x| (x, 0)).collect();
            let od = crate::bar::OneDimBar {
                l: 2,
                level: 1,
                values,
            };
            let ind = crate::bar::induce_bar(&d4, &h.elems, &od)?;
            if !crate::bar::restricts_to_translations(&ind, &h.elems) {
                return Err(fail(
                    "induction from a normal subgroup restricts to translations",
                ));
            }
            Ok("kernel intersection and translation restriction verified".into())
        },
    ));
    out.push(claim(
        "bar-lemmas/principal-construction",
        "the recursive construction reaches kernels inside the target for \
         free abelian towers and reports the lift obstruction on the \
         Heisenberg tower",
        || {
            let t = free_abelian_tower(2, 1, 3)?;
            let g = t.top();
            let g0: Vec<Elem> = g.elements().filter(|&x| x % 2 == 0).collect();
            match construct_principal_bar(&t, &g0, 3)? {
                ConstructOutcome::Built(bar) => match principal_kernel(&bar) {
                    PrincipalOutcome::Principal { kernel } => {
                        if kernel.iter().any(|x| g0.binary_search(x).is_err()) {
                            return Err(fail("kernel escapes the target"));
                        }
                    }
                    _ => return Err(fail("translation representation must be principal")),
                },
                _ => return Err(fail("no obstruction on the free tower")),
            }
            let t = heisenberg_tower(2, 3)?;
            let g = t.top();
            let m = 8u64;
            let g0: Vec<Elem> = g
                .elements()
                .filter(|&code| (code / (m * m)).is_multiple_of(2) && (code % m).is_multiple_of(2))
                .collect();
            match construct_principal_bar(&t, &g0, 3)? {
                ConstructOutcome::LiftObstruction { factor, .. } => {
                    if factor != 4 {
                        return Err(fail(format!(
                            "expected the bounded component 4, got {factor}"
                        )));
                    }
                }
                _ => return Err(fail("level-3 lift must be obstructed")),
            }
            match construct_principal_bar(&t, &g0, 2)? {
                ConstructOutcome::Built(_) => {}
                _ => return Err(fail("level-2 lift exists")),
            }
            Ok("construction certifies level 2 and refuses level 3 on the fixture".into())
        },
    ));
    out
}

// ------------------------------------------------------- wreath chars

fn wreath_char_claims(params: &SuiteParams) -> Vec<Claim> {
    let _ = params;
    let mut out = Vec::new();
    for spec in TABLE_CORPUS {
        out.push(claim(
            format!("wreath-chars/table-integrity/{spec}"),
            "irreducible table is orthonormal in rows and columns with \
             degree squares summing to the group order",
            move || {
                let g = build_group(spec)?;
                let t = irr_table(&g)?;
                t.verify_orthonormal()?;
                t.verify_columns()?;
                let sum: i64 = t.degrees().iter().map(|d| d * d).sum();
                if sum != g.order() as i64 {
                    return Err(fail(format!("degree squares sum to {sum}")));
                }
                if *spec == "wreath(c2,c2)" && t.irreps.len() != 5 {
                    return Err(fail("the orbit count 1 + 2*2 gives five irreducibles"));
                }
                Ok(format!(
                    "{} irreducibles, order {}",
                    t.irreps.len(),
                    g.order()
                ))
            },
        ));
    }
    out.push(claim(
        "wreath-chars/blichfeldt-monomialization",
        "every irreducible of every corpus l-group of order at most 128 is \
         induced from a linear character of a subgroup, re-verified exactly",
        || {
            let mut total = 0;
            for spec in small_corpus() {
                let g = build_group(spec)?;
                let t = irr_table(&g)?;
                for irr in &t.irreps {
                    let m = monomialize(&g, &irr.character)?;
                    let ind = induce_values(&g, &m.members, m.order, &|h| {
                        Cyc::root(m.order, m.linear[&h] as i64)
                    });
                    if !ind.sub(&irr.character).is_zero() {
                        return Err(fail(format!("re-induction mismatch in {spec}")));
                    }
                    total += 1;
                }
            }
            Ok(format!("{total} irreducibles monomialized"))
        },
    ));
    out.push(claim(
        "wreath-chars/permutation-identities",
        "for every irreducible monomial representation of the order-8 wreath \
         and level-1 Heisenberg groups, the induced-trivial and \
         induced-diagonal identities have zero residual",
        || {
            for spec in ["wreath(c2,c2)", "heisenberg(2,1)"] {
                let g = build_group(spec)?;
                let t = irr_table(&g)?;
                for irr in &t.irreps {
                    let check = permutation_identity_check(&irr.rep)?;
                    if !check.passed() {
                        return Err(fail(format!(
                            "residuals nonzero for a degree-{} irreducible of {spec}",
                            irr.character.degree()
                        )));
                    }
                }
            }
            Ok("all residuals vanish".into())
        },
    ));
    out.push(claim(
        "wreath-chars/frobenius-reciprocity",
        "induction and restriction are adjoint on the corpus subgroup triples",
        || {
            let mut checked = 0;
            for spec in [
                "wreath(c2,c2)",
                "heisenberg(2,2)",
                "semidirect(c2,torus(2,2,2))",
            ] {
                let g = build_group(spec)?;
                let t = irr_table(&g)?;
                let subs = subgroups_up_to_index(&g, 2)?;
                for sub in subs.iter().filter(|s| s.index_in(&g) == 2) {
                    let (h, embed) = subgroup_as_group(&g, &sub.elems, "h".into())?;
                    let th = irr_table(&h)?;
                    for chi in th.irreps.iter().take(3) {
                        let ind = crate::chars::induce_character(
                            &g,
                            &sub.elems,
                            &h,
                            &embed,
                            &chi.character,
                        );
                        for psi in t.irreps.iter() {
                            let lhs = inner_product(&ind, &psi.character);
                            let res = restrict_character(&psi.character, &h, &embed);
                            let rhs = inner_product(&chi.character, &res);
                            if lhs != rhs {
                                return Err(fail(format!("reciprocity fails in {spec}")));
                            }
                            checked += 1;
                        }
                    }
                }
            }
            Ok(format!("{checked} pairings agree"))
        },
    ));
    out
}

// --------------------------------------------------- ideal nilpotency

fn ideal_claims(params: &SuiteParams) -> Vec<Claim> {
    let _ = params;
    let mut out = Vec::new();
    let cyclic_cases: &[(&str, u64, u64, u32)] = &[
        ("wreath(c2,c2)", 2, 4, 2),
        ("wreath(c2,cyclic(4))", 2, 16, 2),
        ("wreath(c3,c3)", 3, 27, 3),
    ];
    for &(spec, l, block, bound) in cyclic_cases {
        out.push(claim(
            format!("ideal-nilpotency/wreath-restriction/{spec}"),
            "restriction to the base block surjects onto the cyclic-invariant \
             subring and its kernel has trivial l-th power",
            move || {
                let g = build_group(spec)?;
                let ring = RepRing::new(&g)?;
                let members: Vec<Elem> = (0..block).collect();
                let check = restriction_image_check(&ring, l, &members, bound + 2)?;
                if !check.image_equals_invariants {
                    return Err(fail(format!(
                        "image rank {} vs invariants rank {}",
                        check.image_rank, check.invariants_rank
                    )));
                }
                match check.kernel_nilpotency {
                    Some(m) if m as u64 <= bound as u64 => Ok(format!(
                        "image = invariants (rank {}), kernel dimension {} with index {m}",
                        check.image_rank, check.kernel_dim
                    )),
                    other => Err(fail(format!("kernel nilpotency {other:?} exceeds {bound}"))),
                }
            },
        ));
    }
    out.push(claim(
        "ideal-nilpotency/cyclic-ring-indices",
        "augmentation ideals of small cyclic mod-l rings have the pinned \
         nilpotency indices",
        || {
            let expect: &[(&str, u64, Option<u32>)] = &[
                ("cyclic(1)", 2, Some(1)),
                ("cyclic(2)", 2, Some(2)),
                ("cyclic(4)", 2, Some(4)),
                ("cyclic(3)", 3, Some(3)),
                ("cyclic(3)", 2, None), // idempotent splitting: never nilpotent
            ];
            for &(spec, l, want) in expect {
                let ring = RepRing::new(&build_group(spec)?)?;
                let i = ring.augmentation_ideal(l);
                let got = ring.nilpotency_index(l, &i, 16);
                if got != want {
                    return Err(fail(format!("{spec} at l={l}: {got:?} vs {want:?}")));
                }
            }
            Ok("indices 1, 2, 4, 3 and the non-nilpotent split case".into())
        },
    ));
    out.push(claim(
        "ideal-nilpotency/completion-identity-for-l-groups",
        "the stabilized power of the augmentation ideal is zero for every \
         corpus l-group, so completion changes nothing",
        || {
            let mut count = 0;
            for spec in small_corpus() {
                let g = build_group(spec)?;
                let Some(l) = g.prime() else { continue };
                let ring = RepRing::new(&g)?;
                if !ring.completion(l).is_identity() {
                    return Err(fail(format!("{spec} has a nonzero stable power")));
                }
                count += 1;
            }
            Ok(format!("{count} l-groups have identity completions"))
        },
    ));
    out.push(claim(
        "ideal-nilpotency/completion-prime-to-l",
        "completing the order-3 cyclic ring at l = 2 collapses it to the \
         ground field, and the order-6 product keeps exactly its 2-part",
        || {
            let ring = RepRing::new(&build_group("cyclic(3)")?)?;
            let c = ring.completion(2);
            if c.is_identity() || c.quotient_dim != 1 {
                return Err(fail(format!("quotient dimension {}", c.quotient_dim)));
            }
            let ring = RepRing::new(&build_group("product(c2,c3)")?)?;
            let c = ring.completion(2);
            if c.quotient_dim != 2 {
                return Err(fail(format!("mixed quotient dimension {}", c.quotient_dim)));
            }
            Ok("dimensions 1 and 2 as pinned".into())
        },
    ));
    out.push(claim(
        "ideal-nilpotency/hat-restriction-injective",
        "the completed restriction to the 2-Sylow subgroup of the order-6 \
         product is injective",
        || {
            let g = build_group("product(c2,c3)")?;
            let ring = RepRing::new(&g)?;
            let sylow = sylow_subgroup(&g, 2);
            if !hat_restriction_injective(&ring, 2, &sylow)? {
                return Err(fail("completed restriction has a kernel"));
            }
            Ok("preimage of the stable power equals the stable power".into())
        },
    ));
    out
}

// ------------------------------------------------------------- sylow

fn sylow_claims(params: &SuiteParams) -> Vec<Claim> {
    let _ = params;
    vec![claim(
        "sylow-invariants/iterated-wreath-on-torus",
        "restriction to the rank-4 torus surjects onto the invariant subring \
         and the kernel nilpotency index is at most 4",
        || {
            let g = build_group("semidirect(sylow_symmetric(2,2),torus(2,1,4))")?;
            let ring = RepRing::new(&g)?;
            let members: Vec<Elem> = (0..16).collect();
            let check = restriction_image_check(&ring, 2, &members, 8)?;
            if !check.image_equals_invariants {
                return Err(fail(format!(
                    "image rank {} vs invariants rank {}",
                    check.image_rank, check.invariants_rank
                )));
            }
            match check.kernel_nilpotency {
                Some(m) if m <= 4 => Ok(format!(
                    "image = invariants (rank {}), kernel dimension {} with index {m} <= 4",
                    check.image_rank, check.kernel_dim
                )),
                other => Err(fail(format!("kernel nilpotency {other:?} exceeds 4"))),
            }
        },
    )]
}

// ------------------------------------------------------ root witness

struct WitnessConfig {
    l: u64,
    n: usize,
    level: u32,
    small: Vec<Perm>,
    big: Vec<Perm>,
}

fn witness_configs() -> Vec<WitnessConfig> {
    let mut out = Vec::new();
    for level in 1..=3u32 {
        out.push(WitnessConfig {
            l: 2,
            n: 1,
            level,
            small: vec![Perm::identity(1)],
            big: vec![Perm::identity(1)],
        });
        out.push(WitnessConfig {
            l: 2,
            n: 2,
            level,
            small: vec![Perm::identity(2)],
            big: perm_group(2, &[Perm::transposition(2, 0, 1)]),
        });
        out.push(WitnessConfig {
            l: 3,
            n: 3,
            level,
            small: vec![Perm::identity(3)],
            big: perm_group(3, &[Perm::rotation(3, 1)]),
        });
    }
    for level in 1..=2u32 {
        out.push(WitnessConfig {
            l: 2,
            n: 3,
            level,
            small: vec![Perm::identity(3)],
            big: perm_group(3, &[Perm::transposition(3, 0, 1)]),
        });
        let v4 = perm_group(
            4,
            &[
                Perm::from_images(vec![1, 0, 3, 2]).unwrap(),
                Perm::from_images(vec![2, 3, 0, 1]).unwrap(),
            ],
        );
        out.push(WitnessConfig {
            l: 2,
            n: 4,
            level,
            small: vec![Perm::identity(4)],
            big: v4.clone(),
        });
        out.push(WitnessConfig {
            l: 2,
            n: 4,
            level,
            small: perm_group(4, &[Perm::from_images(vec![1, 0, 3, 2]).unwrap()]),
            big: v4,
        });
    }
    out
}

/// A random augmentation-zero invariant: an F_l combination of orbit sums of
/// nonconstant monomials, with an occasional product thrown in.
fn random_invariant(rng: &mut ChaCha8Rng, cfg: &WitnessConfig) -> TensorElem {
    let bound = cfg.l.pow(cfg.level);
    let mut acc = TensorElem::zero(cfg.l, cfg.n, cfg.level);
    let pieces = rng.gen_range(1..=3);
    for _ in 0..pieces {
        let mut exps = vec![0u64; cfg.n];
        loop {
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..bound);
            }
            if exps.iter().any(|&e| e > 0) {
                break;
            }
        }
        let mono = TensorElem::monomial(cfg.l, cfg.level, &exps, rng.gen_range(1..cfg.l));
        let mut orbit_sum = TensorElem::zero(cfg.l, cfg.n, cfg.level);
        let mut seen: Vec<TensorElem> = Vec::new();
        for p in &cfg.small {
            let moved = mono.apply_perm(p);
            if !seen.contains(&moved) {
                orbit_sum = orbit_sum.add(&moved);
                seen.push(moved);
            }
        }
        if rng.gen_bool(0.3) && !acc.is_zero() {
            acc = acc.mul(&orbit_sum);
        } else {
            acc = acc.add(&orbit_sum);
        }
    }
    let c = acc.augmentation();
    acc.sub(&TensorElem::constant(cfg.l, cfg.n, cfg.level, c))
}

fn root_witness_claims(params: &SuiteParams) -> Vec<Claim> {
    let seed = params.seed;
    let count = params.get("count", 108);
    let mut out = Vec::new();
    out.push(claim(
        "root-witness/constructive-identities",
        "random invariant elements with zero augmentation decompose exactly \
         through roots and elementary symmetric functions along the chain",
        move || {
            let configs = witness_configs();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut done = 0u64;
            let per = count / configs.len() as u64 + 1;
            for cfg in &configs {
                for _ in 0..per {
                    let b = random_invariant(&mut rng, cfg);
                    let w = theorem_general_witness(&b, &cfg.small, &cfg.big)?;
                    for (factor, _) in &w.pairs {
                        if factor.augmentation() != 0 {
                            return Err(fail("factor with nonzero augmentation"));
                        }
                    }
                    done += 1;
                }
            }
            if done < count {
                return Err(fail(format!("only {done} samples")));
            }
            Ok(format!("{done} witnesses verified exactly"))
        },
    ));
    out.push(claim(
        "root-witness/root-properties",
        "l-th roots power back exactly and commute with the coordinate \
         action on random samples",
        move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
            let configs = witness_configs();
            for cfg in &configs {
                for _ in 0..10 {
                    let x = random_invariant(&mut rng, cfg);
                    let r = x.lth_root();
                    if r.pow(cfg.l as u32).normalized() != x.normalized() {
                        return Err(fail("root does not power back"));
                    }
                    for p in &cfg.big {
                        if x.apply_perm(p).lth_root() != x.lth_root().apply_perm(p) {
                            return Err(fail("root does not commute with the action"));
                        }
                    }
                }
            }
            Ok("roots verified on 10 samples per configuration".into())
        },
    ));
    out.push(claim(
        "root-witness/orbit-basis-counts",
        "orbit sums give one basis element per orbit, matching the Burnside \
         count for the swap action",
        || {
            for k in 1..=2u32 {
                let basis =
                    orbit_sum_basis(2, 2, k, &perm_group(2, &[Perm::transposition(2, 0, 1)]))?;
                let expect = ((1u64 << (2 * k)) + (1 << k)) / 2;
                if basis.len() as u64 != expect {
                    return Err(fail(format!("level {k}: {} orbits", basis.len())));
                }
            }
            let trivial = orbit_sum_basis(2, 2, 1, &[Perm::identity(2)])?;
            if trivial.len() != 4 {
                return Err(fail("the trivial group keeps all monomials"));
            }
            Ok("orbit counts match".into())
        },
    ));
    out
}

// ------------------------------------------------------- maindiagram

/// The identity square on the swap-invariant subring at level 1.
fn identity_square(l: u64) -> Result<AugmentedSquare> {
    let perms = perm_group(2, &[Perm::transposition(2, 0, 1)]);
    let (alg, basis) = FlAlgebra::invariant_subring(l, 2, 1, &perms)?;
    let dim = alg.dim;
    let pi: Vec<Vec<u64>> = basis.iter().map(|b| b.dense(1)).collect();
    let bg = FpSpace::from_rows(l, pi[0].len(), pi.iter().cloned());
    let f: Vec<Vec<u64>> = (0..dim)
        .map(|i| {
            let mut row = vec![0u64; dim];
            row[i] = 1;
            row
        })
        .collect();
    let (alg2, _) = FlAlgebra::invariant_subring(l, 2, 1, &perms)?;
    Ok(AugmentedSquare {
        l,
        r: alg,
        r_prime: alg2,
        f,
        pi: pi.clone(),
        pi_prime: pi.clone(),
        bg: bg.clone(),
        bg_prime: bg,
    })
}

/// The wreath square: R' is the mod-2 ring of the order-8 wreath group
/// restricting onto the swap invariants of the level-1 truncation, R the
/// ring of its torus block mapping isomorphically onto the truncation.
pub fn wreath_square() -> Result<AugmentedSquare> {
    let l = 2u64;
    let g = build_group("wreath(c2,c2)")?;
    let block: Vec<Elem> = (0..4).collect();
    let (torus, embed) = subgroup_as_group(&g, &block, "block".into())?;
    let torus_ring = RepRing::new(&torus)?;
    let r = FlAlgebra::from_repring(&torus_ring, l);
    let ring_prime = RepRing::new(&g)?;
    let r_prime = FlAlgebra::from_repring(&ring_prime, l);
    // pi: a linear character with exponents s_i on the unit vectors maps to
    // prod (1 + u_i)^(s_i)
    let unit_parent: Vec<Elem> = vec![2, 1]; // (1,0) and (0,1) in the block
    let units: Vec<Elem> = unit_parent
        .iter()
        .map(|p| embed.iter().position(|&e| e == *p).unwrap() as Elem)
        .collect();
    let pi: Vec<Vec<u64>> = torus_ring
        .table
        .irreps
        .iter()
        .map(|irr| {
            let mut poly = TensorElem::one(l, 2, 1);
            for (i, &u) in units.iter().enumerate() {
                let s = if irr.character.value_at(u).equals(&Cyc::one(1)) {
                    0
                } else {
                    1
                };
                let factor = TensorElem::one(l, 2, 1).add(&TensorElem::variable(l, 2, 1, i));
                for _ in 0..s {
                    poly = poly.mul(&factor);
                }
            }
            poly.dense(1)
        })
        .collect();
    let f: Vec<Vec<u64>> = ring_prime
        .table
        .irreps
        .iter()
        .map(|irr| {
            let res = restrict_character(&irr.character, &torus, &embed);
            torus_ring
                .table
                .irreps
                .iter()
                .map(|lam| inner_product(&res, &lam.character).rem_euclid(l as i64) as u64)
                .collect()
        })
        .collect();
    let dimb = pi[0].len();
    let pi_prime: Vec<Vec<u64>> = f
        .iter()
        .map(|row| {
            let mut out = vec![0u64; dimb];
            for (j, &c) in row.iter().enumerate() {
                for (t, &p) in pi[j].iter().enumerate() {
                    out[t] = (out[t] + c * p) % l;
                }
            }
            out
        })
        .collect();
    let bg = FpSpace::full(l, dimb);
    let swap_group = perm_group(2, &[Perm::transposition(2, 0, 1)]);
    let invariants = orbit_sum_basis(l, 2, 1, &swap_group)?;
    let bg_prime = FpSpace::from_rows(l, dimb, invariants.iter().map(|b| b.dense(1)));
    Ok(AugmentedSquare {
        l,
        r,
        r_prime,
        f,
        pi,
        pi_prime,
        bg,
        bg_prime,
    })
}

fn maindiagram_claims(params: &SuiteParams) -> Vec<Claim> {
    let bound = params.get("bound", 16);
    let mut out = Vec::new();
    out.push(claim(
        "maindiagram/identity-square",
        "with zero kernel the exponent 1 already verifies, while the \
         nilpotency argument guarantees the first l-power",
        move || {
            let square = identity_square(2)?;
            let report = maindiagram_exponent(&square, bound)?;
            if report.kernel_exponent != 1 || report.m_verified != 1 || report.m_formula != 2 {
                return Err(fail(format!("{report:?}")));
            }
            Ok(format!(
                "kernel exponent 1, guaranteed exponent {}, verified exponent {}",
                report.m_formula, report.m_verified
            ))
        },
    ));
    out.push(claim(
        "maindiagram/wreath-square",
        "the order-8 wreath square certifies an exponent at most 2 by \
         spanning-set membership, exactly",
        move || {
            let square = wreath_square()?;
            let report = maindiagram_exponent(&square, bound)?;
            if report.m_verified > 2 || report.m_full > 2 {
                return Err(fail(format!("{report:?}")));
            }
            Ok(format!(
                "kernel exponent {}, verified exponent {}, full containment at {}",
                report.kernel_exponent, report.m_verified, report.m_full
            ))
        },
    ));
    out
}

// -------------------------------------------------------- filtration

fn filtration_claims(params: &SuiteParams) -> Vec<Claim> {
    let _ = params;
    let mut out = Vec::new();
    out.push(claim(
        "filtration/orbit-decomposition",
        "orbit sizes on cardinality-i subsets sum to the binomial count and \
         each size times its stabilizer order is the group order",
        || {
            let image = perm_group(
                4,
                &[
                    Perm::from_images(vec![1, 0, 3, 2]).unwrap(),
                    Perm::from_images(vec![2, 3, 0, 1]).unwrap(),
                ],
            );
            for i in 0..=4usize {
                let orbits = orbits_on_subsets(&image, i)?;
                let total: usize = orbits.iter().map(|o| o.size()).sum();
                if total as u64 != binomial(4, i as u64) {
                    return Err(fail(format!("cardinality {i}: total {total}")));
                }
                for o in &orbits {
                    if o.size() * o.stabilizer_perms.len() != image.len() {
                        return Err(fail("orbit-stabilizer mismatch"));
                    }
                }
            }
            let singletons = orbits_on_subsets(&image, 1)?;
            if singletons.len() != 1 {
                return Err(fail("the transitive image has one singleton orbit"));
            }
            Ok("orbit decompositions verified for all cardinalities".into())
        },
    ));
    out.push(claim(
        "filtration/split-additivity",
        "restricting a monomial representation to a subset stabilizer splits \
         it into blocks whose characters add to the restriction",
        || {
            let g = build_group("semidirect(perm((1 2)(3 4)),torus(2,1,4))")?;
            let bar = TruncatedBar::tautological(&g, 2, 1)?;
            let rep = bar_to_monomial(&bar, 1)?;
            for subset in [vec![0usize, 1], vec![0], vec![]] {
                let split = split_rep(&rep, &subset)?;
                let restricted =
                    restrict_character(&rep.character(), &split.stabilizer, &split.embed);
                let sum = split.sigma.character().add(&split.tau.character());
                if !restricted.sub(&sum).is_zero() {
                    return Err(fail(format!("subset {subset:?}")));
                }
            }
            Ok("characters add exactly on the three subsets".into())
        },
    ));
    out
}

// ---------------------------------------------------- ind triviality

/// Affine representation corpus for the window-product criterion.
fn bar_corpus() -> Result<Vec<(String, TruncatedBar)>> {
    let mut out = Vec::new();
    let g = build_group("semidirect(c2,torus(2,2,2))")?;
    out.push((
        "swap-torus-2".to_string(),
        TruncatedBar::tautological(&g, 2, 2)?,
    ));
    let g = build_group("semidirect(sylow_symmetric(2,2),torus(2,1,4))")?;
    out.push((
        "sylow-torus-4".to_string(),
        TruncatedBar::tautological(&g, 2, 1)?,
    ));
    let g = build_group("semidirect(perm((1 2)(3 4)),torus(2,1,4))")?;
    out.push((
        "double-swap-torus-4".to_string(),
        TruncatedBar::tautological(&g, 2, 1)?,
    ));
    let g = build_group("semidirect(c3,torus(3,1,3))")?;
    out.push((
        "rotation-torus-3".to_string(),
        TruncatedBar::tautological(&g, 3, 1)?,
    ));
    let g = build_group("cyclic(16)")?;
    let swap = Perm::transposition(2, 0, 1);
    out.push((
        "swap-translation-2".to_string(),
        TruncatedBar::from_generator_images(&g, 2, 3, 2, &[(swap, vec![1, 0])])?,
    ));
    Ok(out)
}

fn ind_triviality_claims(params: &SuiteParams) -> Vec<Claim> {
    let bound = params.get("bound", 4);
    vec![claim(
        "ind-triviality/window-products",
        "for every coordinate orbit of every corpus representation, some \
         window length at most 4 puts all cyclic multiplier products in \
         (l) + I_G . R[H], and each multiplier lies in (l) + I individually",
        move || {
            let mut systems = 0;
            let mut max_window = 0;
            for (name, bar) in bar_corpus()? {
                let ring = RepRing::new(&bar.source)?;
                let gen_perms: Vec<Perm> = bar
                    .source
                    .generators()
                    .iter()
                    .map(|&g| bar.image(g).0.clone())
                    .collect();
                let image = perm_group(bar.rank, &gen_perms);
                for i in 1..=bar.rank {
                    for orbit in orbits_on_subsets(&image, i)? {
                        let sys = ind_system(&bar, &ring, &orbit, bar.level)?;
                        let report = ind_triviality_check(&sys, bound)?;
                        if !report.each_multiplier_in_l_plus_i {
                            return Err(fail(format!("{name}: multiplier outside (l) + I")));
                        }
                        if report.window_length > bound {
                            return Err(fail(format!("{name}: window {}", report.window_length)));
                        }
                        max_window = max_window.max(report.window_length);
                        systems += 1;
                    }
                }
            }
            Ok(format!(
                "{systems} systems certified, largest window length {max_window}"
            ))
        },
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_registry_rejects_unknown() {
        assert!(run_suite("nope", &SuiteParams::default()).is_err());
    }

    #[test]
    fn filtration_suite_passes() {
        let report = run_suite("filtration", &SuiteParams::default()).unwrap();
        assert!(report.all_passed(), "{}", report.summary());
    }

    #[test]
    fn maindiagram_suite_passes() {
        let report = run_suite("maindiagram", &SuiteParams::default()).unwrap();
        assert!(report.all_passed(), "{}", report.summary());
    }

    #[test]
    fn reports_are_deterministic() {
        let params = SuiteParams {
            seed: 7,
            jobs: 2,
            overrides: BTreeMap::new(),
        };
        let a = run_suite("filtration", &params).unwrap();
        let b = run_suite("filtration", &params).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
