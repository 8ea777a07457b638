//! Seeded verification suites. Each one exercises a family of invariants and
//! collects human-readable witnesses for whatever fails.

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::detline::{check_symmetry, DetTheory, SymmetryReport};
use crate::dimtorsor::AbelianGroup;
use crate::exactcat::{
    check_ses, coimage_factorization, complete_grid_3x3, connecting_iso, enumerate_maps, enumerate_subspaces,
    epi_mono_factorize, grid_from_subspaces, pullback_admissible_monos, FdSpace, Grid3x3, LinMap,
};
use crate::exactlin::{Field, Subspace};
use crate::simptors::{
    check_mult_torsor, classify_torsor, coboundary, cohomology, evaluate_even_odd, gerbe_to_torsor, iso_decide,
    street_boundaries, symbolic_even_odd, Cochain, GerbeRep, MultTorsorRep, SimplicialSet,
};
use crate::swald::{check_naturality, dim_theory, enumerate_s_skeleton, DEFAULT_BUDGET};
use crate::tate::random::{lattice, matrix, Filtration};
use crate::tate::{Lattice, LaurentMatrix, LaurentPoly, TateSpace};

const MAX_WITNESSES: usize = 20;

pub const SUITES: &[&str] =
    &["index", "cocycle", "mu", "aic", "grid", "det-symmetry", "cohomology", "classify", "pasting", "swald", "gerbe"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    pub failure_count: usize,
    /// The first few failures.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str, seed: u64) -> Self {
        SuiteReport { name: name.to_string(), seed, trials: 0, failure_count: 0, failures: vec![] }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.fail(witness());
        }
    }

    fn fail(&mut self, witness: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(witness);
        }
    }
}

fn f(p: u64) -> Field {
    Field::prime(p).expect("prime")
}

/// Run a suite by name. `trials` scales the randomized suites; `field`
/// overrides the default field where one applies.
pub fn run_suite(name: &str, trials: usize, seed: u64, field: Option<Field>) -> Option<SuiteReport> {
    Some(match name {
        "index" => index_suite(trials, seed),
        "cocycle" => {
            let fields = field.map_or(vec![f(2), f(5)], |x| vec![x]);
            let mut r = SuiteReport::new("cocycle", seed);
            for (k, fl) in fields.into_iter().enumerate() {
                merge(&mut r, cocycle_suite(fl, trials, seed.wrapping_add(k as u64)));
            }
            r
        }
        "mu" => mu_suite(trials, seed),
        "aic" => aic_suite(field.unwrap_or(f(2)), 3),
        "grid" => grid_suite(field.unwrap_or(f(2)), 3),
        "det-symmetry" => det_symmetry_suite(trials, seed).0,
        "cohomology" => cohomology_suite(),
        "classify" => classify_suite(),
        "pasting" => pasting_suite(),
        "swald" => swald_suite(seed),
        "gerbe" => gerbe_suite(seed),
        _ => return None,
    })
}

fn merge(into: &mut SuiteReport, other: SuiteReport) {
    into.trials += other.trials;
    let extra = other.failure_count - other.failures.len();
    for w in other.failures {
        into.fail(w);
    }
    into.failure_count += extra;
}

/// `[⊕ t^{-aᵢ}O : Oⁿ] = Σ aᵢ`, with the lattice built from its monomial
/// generators.
pub fn index_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut r = SuiteReport::new("index", seed);
    let fields = [f(2), f(5), Field::Rationals];
    for t in 0..trials {
        let field = fields[t % fields.len()];
        let n = rng.gen_range(1..=4);
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let space = TateSpace::new(field, n);
        let hi = a.iter().map(|x| -x).max().unwrap_or(0);
        let mut gens: Vec<Vec<LaurentPoly>> = vec![vec![]; n];
        for (i, &ai) in a.iter().enumerate() {
            for e in -ai..hi {
                for (row, g) in gens.iter_mut().enumerate() {
                    g.push(if row == i { LaurentPoly::t_pow(field, e) } else { LaurentPoly::zero(field) });
                }
            }
        }
        let cols = gens[0].len();
        let got = LaurentMatrix::from_rows(field, cols, gens)
            .and_then(|m| Lattice::span_plus(space, &m, hi))
            .and_then(|l| l.relative_index(&Lattice::standard(space, 0)));
        let want: i64 = a.iter().sum();
        r.check(got.as_ref().ok() == Some(&want), || format!("{field} a={a:?}: got {got:?}, want {want}"));
    }
    r
}

/// Index cocycle and antisymmetry on random triples; modular law
/// `dim(a/a∩b) = dim(a+b/b)` with meet and join bounds on random pairs.
pub fn cocycle_suite(field: Field, trials: usize, seed: u64) -> SuiteReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut r = SuiteReport::new("cocycle", seed);
    for _ in 0..trials {
        let space = TateSpace::new(field, rng.gen_range(1..=3));
        let [a, b, c] = [0; 3].map(|_| lattice(space, -3, 3, &mut rng));
        let idx = |x: &Lattice, y: &Lattice| x.relative_index(y).expect("same space");
        r.check(idx(&a, &b) + idx(&b, &c) == idx(&a, &c), || format!("cocycle fails on\n{a}\n{b}\n{c}"));
        r.check(idx(&a, &b) == -idx(&b, &a), || format!("antisymmetry fails on\n{a}\n{b}"));
        let meet = a.meet(&b).expect("same space");
        let join = a.join(&b).expect("same space");
        let bounds = a.contains(&meet).unwrap()
            && b.contains(&meet).unwrap()
            && join.contains(&a).unwrap()
            && join.contains(&b).unwrap();
        r.check(bounds && idx(&a, &meet) == idx(&join, &b), || format!("modular law fails on\n{a}\n{b}"));
    }
    r
}

/// On random twisted filtrations `X₁ ↪ X₂ ↪ X₃`: additivity of the index
/// along lift/project, and agreement of the two routes to `U₂₁`.
pub fn mu_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut r = SuiteReport::new("mu", seed);
    let fields = [f(2), f(5)];
    for t in 0..trials {
        let field = fields[t % 2];
        let n3 = rng.gen_range(1..=3);
        let n2 = rng.gen_range(0..=n3);
        let n1 = rng.gen_range(0..=n2);
        let fl = Filtration::random(field, [n1, n2, n3], 2, &mut rng);
        let u = lattice(fl.top(), -2, 2, &mut rng);
        let u0 = lattice(fl.top(), -2, 2, &mut rng);
        let outcome = (|| -> Result<(bool, bool), crate::tate::TateError> {
            let mut exact = true;
            for s in [&fl.s13, &fl.s23] {
                let whole = u.relative_index(&u0)?;
                let parts =
                    s.lift(&u)?.relative_index(&s.lift(&u0)?)? + s.project(&u)?.relative_index(&s.project(&u0)?)?;
                exact &= whole == parts;
            }
            let u2 = fl.s23.lift(&u)?;
            let v = fl.s13.project(&u)?;
            let assoc = fl.s12.lift(&u2)? == fl.s13.lift(&u)?
                && fl.s12.project(&u2)? == fl.sq.lift(&v)?
                && fl.s23.project(&u)? == fl.sq.project(&v)?;
            Ok((exact, assoc))
        })();
        match outcome {
            Ok((exact, assoc)) => {
                r.check(exact, || format!("{field} ranks {:?}: index not additive for\n{u}", [n1, n2, n3]));
                r.check(assoc, || format!("{field} ranks {:?}: U21 routes differ for\n{u}", [n1, n2, n3]));
            }
            Err(e) => r.check(false, || format!("{field} ranks {:?}: {e}", [n1, n2, n3])),
        }
    }
    r
}

/// Every composite `e ∘ m` of a mono and an epi between spaces of dimension
/// at most `max_dim` factors as epi then mono through its echelon image,
/// and the image and coimage factorizations are joined by a unique iso.
pub fn aic_suite(field: Field, max_dim: usize) -> SuiteReport {
    let mut r = SuiteReport::new("aic", 0);
    let sp = |d| FdSpace::new(field, d);
    let mut seen: HashSet<LinMap> = HashSet::new();
    for b in 0..=max_dim {
        for a in 0..=b {
            let monos: Vec<LinMap> = enumerate_maps(sp(a), sp(b)).into_iter().filter(LinMap::is_mono).collect();
            for c in 0..=b {
                let epis: Vec<LinMap> = enumerate_maps(sp(b), sp(c)).into_iter().filter(LinMap::is_epi).collect();
                for m in &monos {
                    for e in &epis {
                        let f = e.after(m).expect("composable");
                        if !seen.insert(f.clone()) {
                            continue;
                        }
                        let fact = match epi_mono_factorize(&f, m, e) {
                            Ok(x) => x,
                            Err(err) => {
                                r.check(false, || format!("{f:?}: {err}"));
                                continue;
                            }
                        };
                        let ok = fact.e.is_epi()
                            && fact.m.is_mono()
                            && fact.m.after(&fact.e).ok() == Some(f.clone())
                            && fact.m.image() == f.image()
                            && fact.middle.dim == f.rank();
                        let unique = matches!(connecting_iso(&fact, &coimage_factorization(&f)), Some((_, 0)));
                        r.check(ok && unique, || format!("factorization of {:?}", f.matrix));
                    }
                }
            }
        }
    }
    r
}

fn grid_ok(g: &Grid3x3) -> bool {
    g.rows.iter().chain(&g.cols).all(|s| check_ses(s.i(), s.j()).is_ok()) && g.commutes()
}

/// Every cartesian square of monos into `kⁿ`, `n ≤ max_dim`, completes to a
/// grid with exact rows and columns, compatibly with transposition.
pub fn grid_suite(field: Field, max_dim: usize) -> SuiteReport {
    let mut r = SuiteReport::new("grid", 0);
    for n in 0..=max_dim {
        let target = FdSpace::new(field, n);
        let monos: Vec<LinMap> = (0..=n)
            .flat_map(|k| enumerate_maps(FdSpace::new(field, k), target).into_iter().filter(LinMap::is_mono))
            .collect();
        for c in &monos {
            for d in &monos {
                let pb = pullback_admissible_monos(c, d).expect("monos");
                let g = complete_grid_3x3(&pb.into1, &pb.into2, c, d);
                let t = complete_grid_3x3(&pb.into2, &pb.into1, d, c);
                let ok = match (&g, &t) {
                    (Ok(g), Ok(t)) => grid_ok(g) && *t == g.transpose(),
                    _ => false,
                };
                r.check(ok, || format!("grid from {:?} and {:?}", c.matrix, d.matrix));
            }
        }
    }
    r
}

/// All grids from pairs of subspaces of `kⁿ`, `n ≤ max_dim`.
pub fn all_subspace_grids(field: Field, max_dim: usize) -> Vec<Grid3x3> {
    let mut out = Vec::new();
    for n in 0..=max_dim {
        let subs = enumerate_subspaces(field, n);
        for a in &subs {
            for b in &subs {
                out.push(grid_from_subspaces(a, b).expect("subspaces"));
            }
        }
    }
    out
}

fn random_subspace<R: Rng>(field: Field, n: usize, rng: &mut R) -> Subspace {
    let r = rng.gen_range(0..=n);
    Subspace::from_matrix(&matrix(field, r, n, rng))
}

/// Reports of both symmetry criteria: graded and ungraded theories,
/// exhaustively over F₂ in dimensions ≤ 2 and on `trials` random instances
/// over F₅. Passing means graded is symmetric everywhere, ungraded fails over
/// F₅ with `−1` against `1` on `(k, k)`, and the criteria agree each time.
pub fn det_symmetry_suite(trials: usize, seed: u64) -> (SuiteReport, Vec<(Field, SymmetryReport)>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut r = SuiteReport::new("det-symmetry", seed);
    let f2 = f(2);
    let f5 = f(5);
    let small_pairs: Vec<(usize, usize)> = (0..=2).flat_map(|a| (0..=2).map(move |b| (a, b))).collect();
    let f2_grids = all_subspace_grids(f2, 2);
    let mut f5_pairs = vec![(1, 1)];
    let mut f5_grids = Vec::new();
    for _ in 0..trials {
        f5_pairs.push((rng.gen_range(0..=3), rng.gen_range(0..=3)));
        let n = rng.gen_range(0..=4);
        f5_grids.push(
            grid_from_subspaces(&random_subspace(f5, n, &mut rng), &random_subspace(f5, n, &mut rng)).expect("grid"),
        );
    }
    let mut reports = Vec::new();
    for theory in [DetTheory::Graded, DetTheory::Ungraded] {
        reports.push((f2, check_symmetry(theory, f2, &small_pairs, &f2_grids)));
        reports.push((f5, check_symmetry(theory, f5, &f5_pairs, &f5_grids)));
    }
    for (field, rep) in &reports {
        let tag = format!("{} over {field}", rep.theory.name());
        r.check(rep.criteria_agree(), || {
            format!("{tag}: pair criterion {} but grid criterion {}", rep.pair_pass(), rep.grid_pass())
        });
        let expect_symmetric = rep.theory == DetTheory::Graded || *field == f2;
        r.check(rep.pair_pass() == expect_symmetric, || {
            format!("{tag}: unexpected pair verdict {:?}", rep.first_failure())
        });
        if !expect_symmetric {
            let kk = &rep.pairs[0];
            r.check(kk.got == f5.from_i64(-1) && kk.want == f5.one(), || {
                format!("{tag}: (k,k) gives {} vs {}", kk.got, kk.want)
            });
        }
    }
    (r, reports)
}

/// Cohomology of the standard small complexes against known answers.
pub fn cohomology_suite() -> SuiteReport {
    let mut r = SuiteReport::new("cohomology", 0);
    let z = AbelianGroup::integers();
    let z2 = AbelianGroup::cyclic(2);
    let cases: Vec<(&str, SimplicialSet, usize, &AbelianGroup, Vec<u64>)> = vec![
        ("circle", SimplicialSet::circle(), 1, &z, vec![0]),
        ("sphere2", SimplicialSet::boundary(3), 2, &z, vec![0]),
        ("torus", SimplicialSet::torus(), 2, &z, vec![0]),
        ("torus", SimplicialSet::torus(), 1, &z, vec![0, 0]),
        ("rp2", SimplicialSet::projective_plane(), 2, &z2, vec![2]),
        ("rp2", SimplicialSet::projective_plane(), 2, &z, vec![2]),
        ("rp2", SimplicialSet::projective_plane(), 1, &z, vec![]),
        ("simplex2", SimplicialSet::standard(2), 1, &z, vec![]),
        ("simplex2", SimplicialSet::standard(2), 2, &z, vec![]),
    ];
    for (name, c, n, g, want) in cases {
        let got = cohomology(&c, n, g).map(|h| h.group().factors().to_vec());
        r.check(got.as_ref().ok() == Some(&want), || format!("H^{n}({name}, {g}) = {got:?}, want {want:?}"));
    }
    r
}

/// Degree-1 `ℤ/2`-torsors on the projective plane: enumerate all cochains,
/// group them by `iso_decide` and compare with `classify_torsor` and `|H²|`.
pub fn classify_suite() -> SuiteReport {
    let mut r = SuiteReport::new("classify", 0);
    let c = SimplicialSet::projective_plane();
    let g = AbelianGroup::cyclic(2);
    let m = c.count(2);
    let torsors: Vec<MultTorsorRep> = (0u32..1 << m)
        .map(|mask| {
            let ints: Vec<Vec<i64>> = (0..m).map(|i| vec![i64::from((mask >> i) & 1)]).collect();
            MultTorsorRep::new(c.clone(), 1, Cochain::from_ints(&c, 2, &g, &ints).expect("cochain")).expect("torsor")
        })
        .filter(|t| check_mult_torsor(t).map(|x| x.passed()).unwrap_or(false))
        .collect();
    let mut classes: Vec<(&MultTorsorRep, crate::dimtorsor::GroupElem)> = Vec::new();
    for t in &torsors {
        let class = match classify_torsor(t) {
            Ok(x) => x,
            Err(e) => {
                r.check(false, || e.to_string());
                continue;
            }
        };
        let mut matched = false;
        for (rep, rep_class) in &classes {
            let iso = iso_decide(t, rep).ok().flatten().is_some();
            r.check(iso == (class == *rep_class), || format!("iso {iso} but classes {class} / {rep_class}"));
            matched |= iso;
        }
        if !matched {
            classes.push((t, class));
        }
    }
    let order = cohomology(&c, 2, &g).map(|h| h.group().order());
    r.check(order == Ok(Some(classes.len() as u64)), || format!("{} iso classes, |H²| = {order:?}", classes.len()));
    r
}

/// `E_τ − O_τ = (δα)(τ)` symbolically for degrees 0–2 on every test complex,
/// the Street balance, and equal shapes of `E` and `O`.
pub fn pasting_suite() -> SuiteReport {
    let mut r = SuiteReport::new("pasting", 0);
    for (name, c) in SimplicialSet::test_complexes() {
        for n in 0..=2 {
            let delta = coboundary(&c, n + 1);
            for tau in 0..c.count(n + 2) {
                match symbolic_even_odd(&c, n, tau) {
                    Ok((e, o)) => {
                        let ok =
                            (0..c.count(n + 1)).all(|s| num_bigint::BigInt::from(e[s] - o[s]) == *delta.get(tau, s));
                        r.check(ok, || format!("{name}: E - O differs from the coboundary on {}", c.name(n + 2, tau)));
                    }
                    Err(err) => r.check(false, || format!("{name}: {err}")),
                }
            }
        }
        for d in 2..=c.dim() {
            for k in 0..c.count(d) {
                let ok = street_boundaries(&c, d, k).map(|s| s.balanced()).unwrap_or(false);
                r.check(ok, || format!("{name}: Street decomposition unbalanced on {}", c.name(d, k)));
            }
        }
    }
    r
}

/// The S-construction checks: identities over F₂ with `D = 2`, `N = 4`,
/// dimension and graded determinant as torsors, the injected sign fault over
/// F₃ with `D = 3`, and sampled naturality of `λ`.
pub fn swald_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("swald", seed);
    let sk = match enumerate_s_skeleton(f(2), 2, 4, DEFAULT_BUDGET) {
        Ok(s) => s,
        Err(e) => {
            r.check(false, || e.to_string());
            return r;
        }
    };
    let ids = sk.identity_violations();
    r.check(ids.is_empty(), || format!("simplicial identities fail: {:?}", &ids[..ids.len().min(5)]));
    r.check(sk.entry_violations().is_empty(), || "an enumerated object is not a valid array".into());
    r.check(sk.level(0).len() == 1, || "S_0 is not a point".into());
    match sk.verify_dim_theory(&dim_theory()) {
        Ok(rep) => r.check(rep.passed(), || format!("dim fails on {}", rep.witnesses[0])),
        Err(e) => r.check(false, || e.to_string()),
    }
    let det = sk.verify_det_theory(DetTheory::Graded);
    r.check(det.passed(), || format!("graded det fails on {}", det.witnesses[0]));
    match enumerate_s_skeleton(f(3), 3, 3, DEFAULT_BUDGET) {
        Ok(sk3) => {
            let good = sk3.verify_det_theory(DetTheory::Graded);
            r.check(good.passed(), || format!("graded det over F3 fails on {}", good.witnesses[0]));
            let bad = sk3.verify_det_theory(DetTheory::SignFault);
            r.check(!bad.passed(), || "the injected sign fault went unnoticed".into());
            let mut rng = StdRng::seed_from_u64(seed);
            let unnatural = check_naturality(DetTheory::Graded, &sk3, 200, &mut rng);
            r.check(unnatural.is_empty(), || format!("lambda not natural at {}", unnatural[0]));
        }
        Err(e) => r.check(false, || e.to_string()),
    }
    r
}

/// A corpus of gerbes: every `ℤ/2` 3-cochain on the 3-sphere, random
/// coboundaries on `Δ⁴` and `∂Δ⁴`, and the generator of `H³(S³, ℤ/3)`.
pub fn gerbe_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("gerbe", seed);
    for (g, beta, coboundary_expected, complex) in gerbe_corpus(seed) {
        let gerbe = GerbeRep::new(complex.clone(), beta).expect("degree 3");
        let t = match gerbe_to_torsor(&gerbe) {
            Ok(t) => t,
            Err(e) => {
                r.check(false, || format!("valid gerbe rejected: {e}"));
                continue;
            }
        };
        r.check(check_mult_torsor(&t).map(|x| x.passed()).unwrap_or(false), || "torsor fails E = O".into());
        let zero = classify_torsor(&t).map(|c| c.is_zero());
        if coboundary_expected {
            r.check(zero == Ok(true), || format!("coboundary in {g} classifies to {zero:?}"));
        }
        for tau in 0..complex.count(4) {
            r.check(evaluate_even_odd(&t, tau).is_ok(), || "E and O have different shapes".into());
        }
    }
    let s3 = SimplicialSet::boundary(4);
    let z3 = AbelianGroup::cyclic(3);
    let mut gen = Cochain::zero(&s3, 3, &z3);
    gen.set(0, z3.elem(&[1]).expect("Z/3"));
    let t = gerbe_to_torsor(&GerbeRep::new(s3, gen).expect("degree 3")).expect("valid");
    r.check(classify_torsor(&t).map(|c| !c.is_zero()).unwrap_or(false), || {
        "generator of H^3 classifies to zero".into()
    });
    let d4 = SimplicialSet::standard(4);
    let mut bad = Cochain::zero(&d4, 3, &z3);
    bad.set(0, z3.elem(&[1]).expect("Z/3"));
    r.check(gerbe_to_torsor(&GerbeRep::new(d4, bad).expect("degree 3")).is_err(), || "invalid gerbe accepted".into());
    r
}

/// `(group, beta, is a known coboundary, complex)` for the gerbe corpus.
pub fn gerbe_corpus(seed: u64) -> Vec<(AbelianGroup, Cochain, bool, SimplicialSet)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let s3 = SimplicialSet::boundary(4);
    let z2 = AbelianGroup::cyclic(2);
    let m = s3.count(3);
    for mask in 0u32..1 << m {
        let ints: Vec<Vec<i64>> = (0..m).map(|i| vec![i64::from((mask >> i) & 1)]).collect();
        out.push((z2.clone(), Cochain::from_ints(&s3, 3, &z2, &ints).expect("cochain"), mask == 0, s3.clone()));
    }
    for g in [AbelianGroup::integers(), AbelianGroup::cyclic(3), "Z+Z/2".parse().expect("group")] {
        for c in [SimplicialSet::standard(4), SimplicialSet::boundary(4)] {
            for _ in 0..5 {
                let ints: Vec<Vec<i64>> =
                    (0..c.count(2)).map(|_| g.factors().iter().map(|_| rng.gen_range(-4..=4)).collect()).collect();
                let y = Cochain::from_ints(&c, 2, &g, &ints).expect("cochain");
                out.push((g.clone(), y.coboundary(&c), true, c.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for name in ["index", "cocycle", "mu", "cohomology", "classify", "pasting", "gerbe"] {
            let r = run_suite(name, 20, 1, None).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures);
            assert!(r.trials > 0);
        }
        assert!(run_suite("nope", 1, 1, None).is_none());
    }

    #[test]
    fn failures_are_capped() {
        let mut r = SuiteReport::new("x", 0);
        for _ in 0..30 {
            r.check(false, || "w".into());
        }
        assert_eq!((r.failure_count, r.failures.len(), r.trials), (30, MAX_WITNESSES, 30));
    }
}
