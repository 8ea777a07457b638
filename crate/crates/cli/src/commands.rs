use std::fs;
use std::path::Path;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use tatetorsor::detline::{check_symmetry, DetTheory, SymmetryOutcome};
use tatetorsor::dimtorsor::{mu_eval, AbelianGroup, DimTheory, RelDimTheory};
use tatetorsor::exactcat::grid_from_subspaces;
use tatetorsor::exactlin::{Field, Subspace};
use tatetorsor::simptors::{
    check_mult_torsor, classify_torsor, cohomology, gerbe_to_torsor, iso_decide, Cochain, GerbeRep, MultTorsorRep,
    SimplicialSet,
};
use tatetorsor::swald::{enumerate_s_skeleton, DEFAULT_BUDGET};
use tatetorsor::tate::random::matrix;
use tatetorsor::tate::{check_tate_ses, Lattice, LaurentMatrix, TateSes};
use tatetorsor::verify::{self, SUITES};

use crate::report::Report;
use crate::{Cli, Command};

pub const DEFAULT_SEED: u64 = 7;
const DEFAULT_TRIALS: usize = 200;

type Res<T> = Result<T, String>;

fn read(path: &str) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn load_lattice(path: &str) -> Res<Lattice> {
    Lattice::from_lat(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn load_lmx(path: &str) -> Res<LaurentMatrix> {
    LaurentMatrix::from_lmx(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn load_ses(i: &str, j: &str) -> Res<TateSes> {
    check_tate_ses(&load_lmx(i)?, &load_lmx(j)?).map_err(|e| format!("not a short exact sequence: {e}"))
}

/// A `.sset` path, or one of the builtin complexes when no such file exists.
fn load_complex(arg: &str) -> Res<SimplicialSet> {
    if Path::new(arg).exists() {
        return SimplicialSet::from_sset(&read(arg)?).map_err(|e| format!("{arg}: {e}"));
    }
    SimplicialSet::builtin(arg).ok_or_else(|| format!("{arg}: no such file or builtin complex"))
}

fn load_cochain(complex: &SimplicialSet, path: &str) -> Res<Cochain> {
    Cochain::from_coch(complex, &read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn field(cli: &Cli, default: &str) -> Res<Field> {
    cli.field.as_deref().unwrap_or(default).parse().map_err(|e| format!("--field: {e}"))
}

fn group(cli: &Cli) -> Res<AbelianGroup> {
    cli.group.as_deref().unwrap_or("Z").parse().map_err(|e| format!("--group: {e}"))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Index { .. } => "index",
        Command::Meet { .. } => "meet",
        Command::Join { .. } => "join",
        Command::Lift { .. } => "lift",
        Command::Project { .. } => "project",
        Command::SesCheck { .. } => "ses-check",
        Command::MuEval { .. } => "mu-eval",
        Command::DetSymmetry { .. } => "det-symmetry",
        Command::Cohomology { .. } => "cohomology",
        Command::Classify { .. } => "classify",
        Command::GerbeTorsor { .. } => "gerbe-torsor",
        Command::SEnumerate { .. } => "s-enumerate",
        Command::Verify { .. } => "verify",
    }
}

pub fn run(cli: &Cli) -> Report {
    let name = command_name(&cli.command);
    dispatch(cli, name).unwrap_or_else(|e| Report::usage(name, e))
}

fn lattice_report(name: &str, l: &Lattice) -> Report {
    let lat = l.to_lat();
    Report::new(name, true, json!({ "lat": lat }), lat)
}

fn dispatch(cli: &Cli, name: &str) -> Res<Report> {
    match &cli.command {
        Command::Index { a, b } => {
            let n = load_lattice(a)?.relative_index(&load_lattice(b)?).map_err(|e| e.to_string())?;
            Ok(Report::new(name, true, json!(n), format!("{n}\n")))
        }
        Command::Meet { a, b } => {
            let l = load_lattice(a)?.meet(&load_lattice(b)?).map_err(|e| e.to_string())?;
            Ok(lattice_report(name, &l))
        }
        Command::Join { a, b } => {
            let l = load_lattice(a)?.join(&load_lattice(b)?).map_err(|e| e.to_string())?;
            Ok(lattice_report(name, &l))
        }
        Command::Lift { i, j, u } => {
            let l = load_ses(i, j)?.lift(&load_lattice(u)?).map_err(|e| e.to_string())?;
            Ok(lattice_report(name, &l))
        }
        Command::Project { i, j, u } => {
            let l = load_ses(i, j)?.project(&load_lattice(u)?).map_err(|e| e.to_string())?;
            Ok(lattice_report(name, &l))
        }
        Command::SesCheck { i, j } => {
            let (mi, mj) = (load_lmx(i)?, load_lmx(j)?);
            Ok(match check_tate_ses(&mi, &mj) {
                Ok(s) => {
                    let ranks = [s.source().rank, s.middle().rank, s.quotient().rank];
                    Report::new(name, true, json!({ "ranks": ranks }), format!("exact: ranks {ranks:?}\n"))
                }
                Err(e) => {
                    let msg = e.to_string();
                    Report::new(name, false, json!({ "diagnosis": msg }), format!("not exact: {msg}\n"))
                }
            })
        }
        Command::MuEval { i, j, u } => {
            let ses = load_ses(i, j)?;
            let g = group(cli)?;
            let chi = if cli.group.is_some() { DimTheory::new(g.one()) } else { DimTheory::universal() };
            let d1 =
                RelDimTheory::standard(chi.clone(), ses.source(), chi.group().zero()).map_err(|e| e.to_string())?;
            let d2 =
                RelDimTheory::standard(chi.clone(), ses.quotient(), chi.group().zero()).map_err(|e| e.to_string())?;
            let v = mu_eval(&ses, &d1, &d2, &load_lattice(u)?).map_err(|e| e.to_string())?;
            Ok(Report::new(
                name,
                true,
                json!({ "group": chi.group().to_string(), "value": v.coords() }),
                format!("{v}\n"),
            ))
        }
        Command::DetSymmetry { theory, max_dim } => det_symmetry(cli, name, theory, *max_dim),
        Command::Cohomology { complex } => {
            let c = load_complex(complex)?;
            let g = group(cli)?;
            let n = cli.degree.ok_or("--degree is required")?;
            let h = cohomology(&c, n, &g).map_err(|e| e.to_string())?.group();
            Ok(Report::new(
                name,
                true,
                json!({ "degree": n, "coefficients": g.to_string(), "group": h.to_string(), "factors": h.factors() }),
                format!("{h}\n"),
            ))
        }
        Command::Classify { complex, alpha, other } => classify(cli, name, complex, alpha, other.as_deref()),
        Command::GerbeTorsor { complex, beta } => {
            let c = load_complex(complex)?;
            let beta = load_cochain(&c, beta)?;
            let gerbe = GerbeRep::new(c.clone(), beta).map_err(|e| e.to_string())?;
            if !gerbe.is_valid() {
                let d = gerbe.beta.coboundary(&c).to_coch(&c);
                return Ok(Report::new(
                    name,
                    false,
                    json!({ "reason": "beta is not a cocycle", "coboundary": { "coch": d } }),
                    format!("not a gerbe: the coboundary of beta is nonzero\n{d}"),
                ));
            }
            let t = gerbe_to_torsor(&gerbe).map_err(|e| e.to_string())?;
            torsor_report(name, &t)
        }
        Command::SEnumerate { dim, levels } => {
            let f = field(cli, "F2")?;
            let sk = enumerate_s_skeleton(f, *dim, *levels, cli.budget.unwrap_or(DEFAULT_BUDGET))
                .map_err(|e| e.to_string())?;
            let ids = sk.identity_violations();
            let entries = sk.entry_violations();
            let pass = ids.is_empty() && entries.is_empty();
            let witnesses: Vec<String> =
                ids.iter().take(10).map(|(n, k, w)| format!("level {n} object {k}: {w}")).collect();
            let counts = sk.counts();
            Ok(Report::new(
                name,
                pass,
                json!({
                    "field": f.to_string(),
                    "dim": dim,
                    "counts": counts,
                    "identity_violations": ids.len(),
                    "entry_violations": entries.len(),
                    "witnesses": witnesses,
                }),
                format!(
                    "counts per level {counts:?}\nsimplicial identities: {}\n",
                    if pass { "hold".to_string() } else { format!("{} violations", ids.len() + entries.len()) }
                ),
            ))
        }
        Command::Verify { suite } => {
            let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);
            let f = cli.field.as_ref().map(|_| field(cli, "F2")).transpose()?;
            let r = verify::run_suite(suite, trials, cli.seed, f)
                .ok_or_else(|| format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", ")))?;
            let mut text = format!(
                "{}: {} ({} checks, {} failures, seed {})\n",
                r.name,
                if r.passed() { "pass" } else { "fail" },
                r.trials,
                r.failure_count,
                r.seed
            );
            for w in &r.failures {
                text.push_str(&format!("  {}\n", w.replace('\n', "\n  ")));
            }
            Ok(Report::new(
                name,
                r.passed(),
                json!({
                    "suite": r.name,
                    "seed": r.seed,
                    "checks": r.trials,
                    "failures": r.failure_count,
                    "witnesses": r.failures,
                }),
                text,
            ))
        }
    }
}

fn outcome_json(o: &SymmetryOutcome) -> Value {
    json!({ "instance": o.instance, "got": o.got.to_string(), "want": o.want.to_string() })
}

fn det_symmetry(cli: &Cli, name: &str, theory: &str, max_dim: usize) -> Res<Report> {
    let theory = match theory {
        "graded" => DetTheory::Graded,
        "ungraded" => DetTheory::Ungraded,
        "sign-fault" => DetTheory::SignFault,
        other => return Err(format!("unknown theory `{other}`")),
    };
    let f = field(cli, "F2")?;
    let pairs: Vec<(usize, usize)> = (0..=max_dim).flat_map(|a| (0..=max_dim).map(move |b| (a, b))).collect();
    let mut grids = if f.characteristic() == 0 { vec![] } else { verify::all_subspace_grids(f, max_dim) };
    let mut rng = StdRng::seed_from_u64(cli.seed);
    for k in 0..cli.trials.unwrap_or(0) {
        let n = k % (max_dim + 1);
        let a = Subspace::from_matrix(&matrix(f, n, n, &mut rng));
        let b = Subspace::from_matrix(&matrix(f, n, n, &mut rng));
        grids.push(grid_from_subspaces(&a, &b).map_err(|e| e.to_string())?);
    }
    let rep = check_symmetry(theory, f, &pairs, &grids);
    let pass = rep.pair_pass() && rep.grid_pass();
    let failure = rep.first_failure().map(outcome_json).unwrap_or(Value::Null);
    let mut text = format!(
        "{} over {f}: pair criterion {}, grid criterion {} ({} pairs, {} grids)\n",
        theory.name(),
        verdict(rep.pair_pass()),
        verdict(rep.grid_pass()),
        rep.pairs.len(),
        rep.grids.len()
    );
    if let Some(o) = rep.first_failure() {
        text.push_str(&format!("first failure: {} gives {} instead of {}\n", o.instance, o.got, o.want));
    }
    Ok(Report::new(
        name,
        pass,
        json!({
            "theory": theory.name(),
            "field": f.to_string(),
            "pairs": rep.pairs.len(),
            "grids": rep.grids.len(),
            "pair_pass": rep.pair_pass(),
            "grid_pass": rep.grid_pass(),
            "criteria_agree": rep.criteria_agree(),
            "first_failure": failure,
        }),
        text,
    ))
}

fn verdict(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn torsor_report(name: &str, t: &MultTorsorRep) -> Res<Report> {
    let c = t.complex();
    let check = check_mult_torsor(t).map_err(|e| e.to_string())?;
    let alpha = t.alpha().to_coch(c);
    if !check.passed() {
        let violations: Vec<Value> = check
            .violations
            .iter()
            .map(|(s, e, o)| json!({ "simplex": s, "even": e.coords(), "odd": o.coords() }))
            .collect();
        let (s, e, o) = &check.violations[0];
        return Ok(Report::new(
            name,
            false,
            json!({ "degree": t.degree(), "alpha": { "coch": alpha }, "violations": violations }),
            format!("not a multiplicative torsor: on {s} the even composite is {e} and the odd one {o}\n"),
        ));
    }
    let class = classify_torsor(t).map_err(|e| e.to_string())?;
    let h = cohomology(c, t.degree() + 1, t.group()).map_err(|e| e.to_string())?.group();
    Ok(Report::new(
        name,
        true,
        json!({
            "degree": t.degree(),
            "checked": check.checked,
            "cohomology": h.to_string(),
            "class": class.coords(),
            "alpha": { "coch": alpha },
        }),
        format!(
            "multiplicative torsor of degree {} ({} checks)\nclass {class} in {h}\n{alpha}",
            t.degree(),
            check.checked
        ),
    ))
}

fn torsor(c: &SimplicialSet, alpha: Cochain, degree: Option<usize>) -> Res<MultTorsorRep> {
    let n = match degree {
        Some(n) => n,
        None => alpha.degree().checked_sub(1).ok_or("a cocycle of degree 0 defines no torsor")?,
    };
    MultTorsorRep::new(c.clone(), n, alpha).map_err(|e| e.to_string())
}

fn classify(cli: &Cli, name: &str, complex: &str, alpha: &str, other: Option<&str>) -> Res<Report> {
    let c = load_complex(complex)?;
    let t = torsor(&c, load_cochain(&c, alpha)?, cli.degree)?;
    let Some(other) = other else {
        return torsor_report(name, &t);
    };
    let t2 = torsor(&c, load_cochain(&c, other)?, cli.degree)?;
    for x in [&t, &t2] {
        let r = torsor_report(name, x)?;
        if r.outcome.exit_code() != 0 {
            return Ok(r);
        }
    }
    Ok(match iso_decide(&t, &t2).map_err(|e| e.to_string())? {
        Some(x) => {
            let coch = x.to_coch(&c);
            Report::new(
                name,
                true,
                json!({ "isomorphic": true, "transporter": { "coch": coch } }),
                format!("isomorphic via\n{coch}"),
            )
        }
        None => {
            let (a, b) =
                (classify_torsor(&t).map_err(|e| e.to_string())?, classify_torsor(&t2).map_err(|e| e.to_string())?);
            Report::new(
                name,
                true,
                json!({ "isomorphic": false, "classes": [a.coords(), b.coords()] }),
                format!("not isomorphic: classes {a} and {b}\n"),
            )
        }
    })
}
