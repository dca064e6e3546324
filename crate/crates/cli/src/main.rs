//! `prolrep`: build groups and towers from spec strings, run the named
//! verification suites, and dump character tables, subset orbits, and
//! root-ring witness expressions as JSON or plain text.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use prolrep_core::chars::irr_table;
use prolrep_core::filtration::orbits_on_subsets;
use prolrep_core::group::build_group;
use prolrep_core::perm::Perm;
use prolrep_core::rootring::{perm_group, theorem_general_witness, TensorElem};
use prolrep_core::suites::{run_suite, SuiteParams, SUITE_NAMES};

#[derive(Parser)]
#[command(
    name = "prolrep",
    about = "exact verification suites for towers of finite l-groups",
    after_help = "COMMAND is a suite name (ttf, bar-lemmas, wreath-chars, \
                  ideal-nilpotency, sylow-invariants, root-witness, maindiagram, \
                  filtration, ind-triviality, all), or one of: chartab <group>, \
                  orbits <perm-group>, witness."
)]
struct Cli {
    /// suite name, `chartab`, `orbits`, or `witness`
    command: String,

    /// argument for chartab/orbits (a constructor expression)
    spec: Option<String>,

    /// key=value parameter file, one entry per line, `#` comments
    #[arg(long)]
    config: Option<PathBuf>,

    /// parameter override, repeatable (e.g. --param depth=4)
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,

    /// write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,

    /// claim-level parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// seed recorded in every report and used for randomized claims
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn parse_kv(line: &str) -> Option<(String, u64)> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return None;
    }
    let (k, v) = line.split_once('=')?;
    Some((k.trim().to_string(), v.trim().parse().ok()?))
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut overrides: BTreeMap<String, u64> = BTreeMap::new();
    if let Some(path) = &cli.config {
        match std::fs::read_to_string(path) {
            Ok(text) => {
                for line in text.lines() {
                    if let Some((k, v)) = parse_kv(line) {
                        overrides.insert(k, v);
                    }
                }
            }
            Err(e) => return usage_error(&format!("cannot read config: {e}")),
        }
    }
    for p in &cli.params {
        match parse_kv(p) {
            Some((k, v)) => {
                overrides.insert(k, v);
            }
            None => return usage_error(&format!("bad --param `{p}`, expected key=value")),
        }
    }
    let params = SuiteParams {
        seed: cli.seed,
        jobs: cli.jobs,
        overrides,
    };

    match cli.command.as_str() {
        "chartab" => {
            let Some(spec) = &cli.spec else {
                return usage_error("chartab needs a group expression");
            };
            match chartab(spec) {
                Ok(value) => emit(&cli, value),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        "orbits" => {
            let Some(spec) = &cli.spec else {
                return usage_error("orbits needs a permutation group expression");
            };
            match orbits(spec, &params) {
                Ok(value) => emit(&cli, value),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        "witness" => match witness(&params) {
            Ok(value) => emit(&cli, value),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        suite if SUITE_NAMES.contains(&suite) => {
            let report = match run_suite(suite, &params) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            print!("{}", report.summary());
            if let Some(path) = &cli.json {
                let text = serde_json::to_string_pretty(&report).expect("reports serialize");
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        other => usage_error(&format!(
            "unknown command `{other}`; suites are {}",
            SUITE_NAMES.join(", ")
        )),
    }
}

fn emit(cli: &Cli, value: serde_json::Value) -> ExitCode {
    let pretty = serde_json::to_string_pretty(&value).expect("values serialize");
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, &pretty) {
            eprintln!("error writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    // tolerate closed pipes (e.g. `prolrep chartab .. | head`)
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{pretty}");
    ExitCode::SUCCESS
}

/// JSON character table: class representatives as element words, values as
/// canonical cyclotomic coefficient vectors at the table's root order.
fn chartab(spec: &str) -> prolrep_core::Result<serde_json::Value> {
    let g = build_group(spec)?;
    let table = irr_table(&g)?;
    let classes = g.conjugacy_classes();
    let reps: Vec<String> = classes.reps.iter().map(|&r| g.describe(r)).collect();
    let rows: Vec<serde_json::Value> = table
        .irreps
        .iter()
        .enumerate()
        .map(|(i, irr)| {
            let values: Vec<serde_json::Value> = irr
                .character
                .values
                .iter()
                .map(|v| {
                    let key = v.lift_order(table.order).canonical_key();
                    json!(key)
                })
                .collect();
            json!({
                "index": i,
                "degree": irr.character.degree(),
                "values": values,
            })
        })
        .collect();
    Ok(json!({
        "group": g.name(),
        "order": g.order(),
        "root_order": table.order,
        "class_representatives": reps,
        "class_sizes": classes.sizes,
        "irreducibles": rows,
    }))
}

/// JSON orbit report of a permutation group on cardinality-i subsets.
fn orbits(spec: &str, params: &SuiteParams) -> prolrep_core::Result<serde_json::Value> {
    let g = build_group(spec)?;
    let (n, perms) = g.perm_action().ok_or_else(|| {
        prolrep_core::Error::Unsupported(format!("{} has no permutation action", g.name()))
    })?;
    let group = perm_group(n, &perms);
    let i = params.overrides.get("i").copied().unwrap_or(1) as usize;
    let orbits = orbits_on_subsets(&group, i)?;
    let list: Vec<serde_json::Value> = orbits
        .iter()
        .map(|o| {
            json!({
                "representative": o.representative().iter().map(|p| p + 1).collect::<Vec<_>>(),
                "size": o.size(),
                "stabilizer_order": o.stabilizer_perms.len(),
                "subsets": o.subsets.iter()
                    .map(|s| s.iter().map(|p| p + 1).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "group": g.name(),
        "points": n,
        "cardinality": i,
        "orbit_count": orbits.len(),
        "orbits": list,
    }))
}

/// JSON witness record: a seeded random invariant with zero augmentation and
/// its full decomposition, polynomials spelled out term by term.
fn witness(params: &SuiteParams) -> prolrep_core::Result<serde_json::Value> {
    let l = params.overrides.get("l").copied().unwrap_or(2);
    let n = params.overrides.get("n").copied().unwrap_or(2) as usize;
    let level = params.overrides.get("level").copied().unwrap_or(1) as u32;
    if !(l == 2 || l == 3) || !(1..=4).contains(&n) {
        return Err(prolrep_core::Error::InvalidParam(
            "witness needs l in {2,3}, n in 1..=4".into(),
        ));
    }
    let small = vec![Perm::identity(n)];
    // the chain group must be an l-group inside the symmetric group
    let big = if l == 2 && n >= 2 {
        perm_group(n, &[Perm::transposition(n, 0, 1)])
    } else if l == 3 && n >= 3 {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images[0] = 1;
        images[1] = 2;
        images[2] = 0;
        perm_group(n, &[Perm::from_images(images).unwrap()])
    } else {
        small.clone()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let b = random_poly(&mut rng, l, n, level);
    let w = theorem_general_witness(&b, &small, &big)?;
    let poly_json = |p: &TensorElem| -> serde_json::Value {
        let terms: Vec<serde_json::Value> = p
            .terms()
            .map(|(e, c)| json!({"exponents": e, "coeff": c}))
            .collect();
        json!({"level": p.level, "terms": terms})
    };
    let steps: Vec<serde_json::Value> = w
        .steps
        .iter()
        .map(|s| {
            json!({
                "root": poly_json(&s.root),
                "symmetric_functions": s.symmetric.iter().map(&poly_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let pairs: Vec<serde_json::Value> = w
        .pairs
        .iter()
        .map(|(f, c)| json!({"invariant_factor": poly_json(f), "cofactor": poly_json(c)}))
        .collect();
    Ok(json!({
        "l": l,
        "variables": n,
        "level": level,
        "seed": params.seed,
        "element": poly_json(&b),
        "steps": steps,
        "expression": pairs,
        "level_used": w.level_used,
    }))
}

fn random_poly(rng: &mut ChaCha8Rng, l: u64, n: usize, level: u32) -> TensorElem {
    use rand::Rng;
    let bound = l.pow(level);
    let mut acc = TensorElem::zero(l, n, level);
    for _ in 0..3 {
        let mut exps = vec![0u64; n];
        loop {
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..bound);
            }
            if exps.iter().any(|&e| e > 0) {
                break;
            }
        }
        acc = acc.add(&TensorElem::monomial(l, level, &exps, rng.gen_range(1..l)));
    }
    let c = acc.augmentation();
    acc.sub(&TensorElem::constant(l, n, level, c))
}
