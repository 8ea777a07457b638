//! A truncated Waldhausen S-construction over `Vect₀(F_q)`.
//!
//! An object of `S_n` is stored on the nose as a flag
//! `0 = V₀ ⊆ V₁ ⊆ … ⊆ V_n = kᵐ`; the entry `a_{ij}` is the subquotient
//! `V_j / V_i` with its canonical basis, so the choice of quotients is
//! rigidified by the echelon form. Faces `∂ᵢ` for `0 < i < n` drop `V_i`,
//! `∂₀` divides by `V₁` and `∂_n` passes to `V_{n−1}` in echelon coordinates.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::detline::DetTheory;
use crate::dimtorsor::{AbelianGroup, DimTheory};
use crate::exactcat::{check_ses, enumerate_matrices, enumerate_subspaces, CatError, FdSpace, LinMap};
use crate::exactlin::{Field, Matrix, Scalar, Subquotient, Subspace};
use crate::simptors::{check_mult_torsor, Cochain, MultTorsorRep, SimpError, SimplicialSet, DIM_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwaldError {
    #[error("map {0} of the filtration is not a monomorphism")]
    NotMono(usize),
    #[error("filtration maps do not compose (map {0})")]
    Shape(usize),
    #[error("a_{i}{j} -> a_{i}{k} -> a_{j}{k} is not exact: {source}")]
    NotExact { i: usize, j: usize, k: usize, source: CatError },
    #[error("structure maps out of a_{0}{1} do not compose coherently")]
    Incoherent(usize, usize),
    #[error("index {index} out of range for S_{n}")]
    Index { index: usize, n: usize },
    #[error("skeleton needs {needed} objects, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("level cap {0} outside 0..={DIM_CAP}")]
    Level(usize),
    #[error("enumeration is only available over finite fields")]
    InfiniteField,
    #[error("face of an enumerated object is missing from the skeleton")]
    NotClosed,
    #[error(transparent)]
    Simp(#[from] SimpError),
}

/// An object of `S_n(Vect₀)`: a flag ending in the whole ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SObject {
    field: Field,
    chain: Vec<Subspace>,
}

impl SObject {
    /// The basepoint of `S₀`.
    pub fn point(field: Field) -> Self {
        SObject { field, chain: vec![Subspace::zero(field, 0)] }
    }

    /// From `0 ⊆ V₁ ⊆ … ⊆ V_{n−1} ⊆ kᵐ`, given as the middle subspaces.
    pub fn from_flag(field: Field, m: usize, middle: &[Subspace]) -> Result<Self, SwaldError> {
        let mut chain = vec![Subspace::zero(field, m)];
        chain.extend(middle.iter().cloned());
        chain.push(Subspace::full(field, m));
        for (k, w) in chain.windows(2).enumerate() {
            if w[1].ambient_dim() != m || w[0].ambient_dim() != m || !w[1].contains(&w[0]) {
                return Err(SwaldError::NotMono(k));
            }
        }
        let x = SObject { field, chain };
        x.validate()?;
        Ok(x)
    }

    /// From admissible monos `a₁ ↪ a₂ ↪ … ↪ a_n`, with the quotients
    /// `a_{ij}` taken in canonical coordinates.
    pub fn from_monos(first: FdSpace, monos: &[LinMap]) -> Result<Self, SwaldError> {
        let field = first.field;
        let mut source = first;
        let mut comps: Vec<Matrix> = vec![Matrix::identity(field, first.dim)];
        for (k, f) in monos.iter().enumerate() {
            if f.source != source {
                return Err(SwaldError::Shape(k));
            }
            if !f.is_mono() {
                return Err(SwaldError::NotMono(k));
            }
            for c in comps.iter_mut() {
                *c = f.matrix.mul(c).map_err(|_| SwaldError::Shape(k))?;
            }
            comps.push(Matrix::identity(field, f.target.dim));
            source = f.target;
        }
        let m = source.dim;
        let middle: Vec<Subspace> = comps[..comps.len() - 1].iter().map(Subspace::image).collect();
        Self::from_flag(field, m, &middle)
    }

    pub fn level(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.chain[0].ambient_dim()
    }

    pub fn flag(&self) -> &[Subspace] {
        &self.chain
    }

    /// `a_{ij} = V_j / V_i`.
    pub fn entry(&self, i: usize, j: usize) -> Subquotient {
        Subquotient::new(self.chain[j].clone(), self.chain[i].clone()).expect("flag")
    }

    pub fn entry_dim(&self, i: usize, j: usize) -> usize {
        self.chain[j].dim() - self.chain[i].dim()
    }

    /// `φ: a_{ij} → a_{kl}` for `i ≤ k`, `j ≤ l`.
    pub fn phi(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> LinMap {
        let src = self.entry(i, j);
        let dst = self.entry(k, l);
        let cols: Vec<Vec<Scalar>> =
            (0..src.dim()).map(|r| dst.coords(src.reps().row(r)).expect("V_j lies in V_l")).collect();
        LinMap::from_matrix(Matrix::from_columns(self.field, dst.dim(), &cols))
    }

    /// Every `a_{ij} ↪ a_{ik} ↠ a_{jk}` is exact and the `φ`s compose.
    pub fn validate(&self) -> Result<(), SwaldError> {
        let n = self.level();
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    check_ses(&self.phi((i, j), (i, k)), &self.phi((i, k), (j, k)))
                        .map_err(|source| SwaldError::NotExact { i, j, k, source })?;
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
        for &p in &pairs {
            for &q in pairs.iter().filter(|q| q.0 >= p.0 && q.1 >= p.1) {
                for &r in pairs.iter().filter(|r| r.0 >= q.0 && r.1 >= q.1) {
                    let two = self.phi(q, r).after(&self.phi(p, q)).expect("shapes");
                    if two != self.phi(p, r) {
                        return Err(SwaldError::Incoherent(p.0, p.1));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn face(&self, i: usize) -> Result<SObject, SwaldError> {
        let n = self.level();
        if n == 0 || i > n {
            return Err(SwaldError::Index { index: i, n });
        }
        let chain = if i == 0 {
            let q = self.entry(0, n).clone();
            let q = Subquotient::new(q.top().clone(), self.chain[1].clone()).expect("flag");
            self.chain[1..].iter().map(|v| push_forward(self.field, v, q.dim(), |x| q.coords(x))).collect()
        } else if i == n {
            let top = &self.chain[n - 1];
            self.chain[..n].iter().map(|v| push_forward(self.field, v, top.dim(), |x| top.coords(x))).collect()
        } else {
            let mut c = self.chain.clone();
            c.remove(i);
            c
        };
        Ok(SObject { field: self.field, chain })
    }

    pub fn degeneracy(&self, i: usize) -> Result<SObject, SwaldError> {
        let n = self.level();
        if i > n {
            return Err(SwaldError::Index { index: i, n });
        }
        let mut chain = self.chain.clone();
        chain.insert(i, self.chain[i].clone());
        Ok(SObject { field: self.field, chain })
    }

    /// `λ(a₀₁ ↪ a₀₂ ↠ a₁₂)` for a level-2 object.
    pub fn lambda(&self, theory: DetTheory) -> Scalar {
        assert_eq!(self.level(), 2);
        theory.lambda_nested(&self.chain[0], &self.chain[1], &self.chain[2])
    }
}

fn push_forward<F>(field: Field, v: &Subspace, dim: usize, coords: F) -> Subspace
where
    F: Fn(&[Scalar]) -> Option<Vec<Scalar>>,
{
    let rows: Vec<Vec<Scalar>> = (0..v.dim()).map(|r| coords(v.basis().row(r)).expect("inside")).collect();
    Subspace::from_vectors(field, dim, &rows).expect("shape")
}

impl fmt::Display for SObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{} in k^{}:", self.level(), self.ambient())?;
        for v in &self.chain[1..self.level().max(1)] {
            let rows: Vec<String> = v
                .basis()
                .row_vecs()
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            write!(f, " [{}]", rows.join("; "))?;
        }
        Ok(())
    }
}

/// `[n choose k]_q`.
pub fn gaussian_binomial(q: u128, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Number of level-`n` objects with ambient dimension at most `d`, by
/// counting flags with Gaussian binomials.
pub fn level_count(q: u128, d: usize, n: usize) -> u128 {
    fn chains(q: u128, top: usize, steps: usize) -> u128 {
        if steps == 0 {
            return 1;
        }
        (0..=top).map(|k| gaussian_binomial(q, top, k) * chains(q, k, steps - 1)).sum()
    }
    if n == 0 {
        return 1;
    }
    (0..=d).map(|m| chains(q, m, n - 1)).sum()
}

pub const DEFAULT_BUDGET: u128 = 200_000;

/// All objects of `S_0 … S_N` with entries of dimension at most `D`, with
/// face and degeneracy incidence by index.
#[derive(Clone, Debug)]
pub struct SSkeleton {
    field: Field,
    dim_cap: usize,
    levels: Vec<Vec<SObject>>,
    faces: Vec<Vec<Vec<usize>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
}

pub fn enumerate_s_skeleton(field: Field, d: usize, n: usize, budget: u128) -> Result<SSkeleton, SwaldError> {
    let q = u128::from(field.characteristic());
    if q == 0 {
        return Err(SwaldError::InfiniteField);
    }
    if n > DIM_CAP {
        return Err(SwaldError::Level(n));
    }
    let needed: u128 = (0..=n).map(|k| level_count(q, d, k)).sum();
    if needed > budget {
        return Err(SwaldError::Budget { needed, budget });
    }
    let subspaces: Vec<Vec<Subspace>> = (0..=d).map(|m| enumerate_subspaces(field, m)).collect();
    let mut levels = vec![vec![SObject::point(field)]];
    for level in 1..=n {
        let mut objs = Vec::new();
        for (m, subs) in subspaces.iter().enumerate() {
            let mut flags: Vec<Vec<Subspace>> = vec![vec![]];
            for _ in 1..level {
                flags = flags
                    .into_iter()
                    .flat_map(|f| {
                        let floor = f.last().cloned().unwrap_or_else(|| Subspace::zero(field, m));
                        subs.iter()
                            .filter(move |s| s.contains(&floor))
                            .map(move |s| {
                                let mut g = f.clone();
                                g.push(s.clone());
                                g
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
            }
            for f in flags {
                let mut chain = vec![Subspace::zero(field, m)];
                chain.extend(f);
                chain.push(Subspace::full(field, m));
                objs.push(SObject { field, chain });
            }
        }
        levels.push(objs);
    }
    let index: Vec<HashMap<&SObject, usize>> =
        levels.iter().map(|l| l.iter().enumerate().map(|(k, x)| (x, k)).collect()).collect();
    let find = |lvl: usize, x: &SObject| index[lvl].get(x).copied().ok_or(SwaldError::NotClosed);
    let mut faces = vec![vec![]];
    let mut degeneracies = Vec::new();
    for (lvl, objs) in levels.iter().enumerate() {
        if lvl > 0 {
            faces.push(
                objs.iter()
                    .map(|x| (0..=lvl).map(|i| find(lvl - 1, &x.face(i)?)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        if lvl < n {
            degeneracies.push(
                objs.iter()
                    .map(|x| (0..=lvl).map(|i| find(lvl + 1, &x.degeneracy(i)?)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
    }
    Ok(SSkeleton { field, dim_cap: d, levels, faces, degeneracies })
}

/// Result of checking a theory against every object of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryReport {
    pub theory: String,
    pub checked: usize,
    pub witnesses: Vec<SObject>,
}

impl TheoryReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

impl SSkeleton {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn level_cap(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[SObject] {
        &self.levels[n]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn face(&self, n: usize, k: usize, i: usize) -> usize {
        self.faces[n][k][i]
    }

    pub fn degeneracy(&self, n: usize, k: usize, i: usize) -> usize {
        self.degeneracies[n][k][i]
    }

    /// Violations of the simplicial identities among stored incidences,
    /// as `(level, object, description)`.
    pub fn identity_violations(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        let top = self.level_cap();
        for n in 0..=top {
            for k in 0..self.levels[n].len() {
                let mut bad = |what: String| out.push((n, k, what));
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            if self.face(n - 1, self.face(n, k, j), i) != self.face(n - 1, self.face(n, k, i), j - 1) {
                                bad(format!("d{i} d{j}"));
                            }
                        }
                    }
                }
                if n + 1 < top {
                    for i in 0..=n {
                        for j in i..=n {
                            let lhs = self.degeneracy(n + 1, self.degeneracy(n, k, j), i);
                            let rhs = self.degeneracy(n + 1, self.degeneracy(n, k, i), j + 1);
                            if lhs != rhs {
                                bad(format!("s{i} s{j}"));
                            }
                        }
                    }
                }
                if n < top {
                    for j in 0..=n {
                        let s = self.degeneracy(n, k, j);
                        for i in 0..=n + 1 {
                            let lhs = self.face(n + 1, s, i);
                            let rhs = if i == j || i == j + 1 {
                                Some(k)
                            } else if n == 0 {
                                None
                            } else if i < j {
                                Some(self.degeneracy(n - 1, self.face(n, k, i), j - 1))
                            } else {
                                Some(self.degeneracy(n - 1, self.face(n, k, i - 1), j))
                            };
                            if rhs.is_some_and(|r| r != lhs) {
                                bad(format!("d{i} s{j}"));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Objects whose entries do not have the dimensions `dim V_j − dim V_i`,
    /// or whose structure maps fail to be exact and coherent.
    pub fn entry_violations(&self) -> Vec<SObject> {
        self.levels.iter().flatten().filter(|x| x.validate().is_err()).cloned().collect()
    }

    /// The skeleton as a Δ-complex, with simplices named `x<level>_<index>`.
    pub fn to_simplicial_set(&self) -> Result<SimplicialSet, SwaldError> {
        let name = |n: usize, k: usize| format!("x{n}_{k}");
        let raw = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, objs)| {
                (0..objs.len())
                    .map(|k| {
                        let fs =
                            if n == 0 { vec![] } else { self.faces[n][k].iter().map(|&f| name(n - 1, f)).collect() };
                        (name(n, k), fs)
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialSet::new(raw)?)
    }

    /// A dimension theory is a 0-multiplicative torsor: `χ(a₀₂) = χ(a₀₁) + χ(a₁₂)`
    /// on every level-2 object, evaluated by pasting on the skeleton.
    pub fn verify_dim_theory(&self, chi: &DimTheory) -> Result<TheoryReport, SwaldError> {
        let complex = self.to_simplicial_set()?;
        let values = self.levels[1].iter().map(|x| chi.eval(x.entry_dim(0, 1) as i64)).collect::<Vec<_>>();
        let alpha = if values.is_empty() {
            Cochain::zero(&complex, 1, chi.group())
        } else {
            Cochain::new(&complex, 1, values)?
        };
        let report = check_mult_torsor(&MultTorsorRep::new(complex.clone(), 0, alpha)?)?;
        let witnesses = report
            .violations
            .iter()
            .map(|(name, _, _)| {
                let (_, k) = complex.lookup(name).expect("named by the skeleton");
                self.levels[2][k].clone()
            })
            .collect();
        Ok(TheoryReport { theory: format!("dim in {}", chi.group()), checked: report.checked, witnesses })
    }

    /// A determinantal theory is a 1-multiplicative torsor: on every level-3
    /// object the two ways of building `det a₀₃` from `a₀₁, a₁₂, a₂₃` agree,
    /// `λ(∂₂)·λ(∂₀) = λ(∂₁)·λ(∂₃)`.
    pub fn verify_det_theory(&self, theory: DetTheory) -> TheoryReport {
        let lambdas: Vec<Scalar> = self.levels.get(2).map_or(vec![], |l| l.iter().map(|x| x.lambda(theory)).collect());
        let empty = Vec::new();
        let top = self.levels.get(3).unwrap_or(&empty);
        let witnesses = top
            .iter()
            .enumerate()
            .filter(|&(k, _)| {
                let f = |i| &lambdas[self.faces[3][k][i]];
                f(2) * f(0) != f(1) * f(3)
            })
            .map(|(_, x)| x.clone())
            .collect();
        TheoryReport { theory: format!("{} det", theory.name()), checked: top.len(), witnesses }
    }
}

/// Naturality of `λ` under isomorphisms of level-2 arrays induced by random
/// `g ∈ GL(kᵐ)`: `λ(gx)·det(g|a₀₁)·det(g|a₁₂) = det(g)·λ(x)`. Returns the
/// objects where it fails among `samples` random pairs.
pub fn check_naturality<R: Rng>(theory: DetTheory, skeleton: &SSkeleton, samples: usize, rng: &mut R) -> Vec<SObject> {
    let objs = skeleton.level(2);
    let field = skeleton.field();
    let mut bad = Vec::new();
    if objs.is_empty() {
        return bad;
    }
    let elements = field.elements().expect("finite field");
    for _ in 0..samples {
        let x = &objs[rng.gen_range(0..objs.len())];
        let m = x.ambient();
        let g = loop {
            let rows: Vec<Vec<Scalar>> =
                (0..m).map(|_| (0..m).map(|_| elements[rng.gen_range(0..elements.len())].clone()).collect()).collect();
            let g = Matrix::from_rows(field, m, rows).expect("square");
            if g.rank() == m {
                break g;
            }
        };
        let v1 = &x.flag()[1];
        let gv1 = v1.map(&g);
        let y = SObject::from_flag(field, m, std::slice::from_ref(&gv1)).expect("image flag");
        let sub_cols: Vec<Vec<Scalar>> =
            (0..v1.dim()).map(|r| gv1.coords(&g.apply(v1.basis().row(r))).expect("g V1")).collect();
        let qx = x.entry(1, 2);
        let qy = y.entry(1, 2);
        let quot_cols: Vec<Vec<Scalar>> =
            (0..qx.dim()).map(|r| qy.coords(&g.apply(qx.reps().row(r))).expect("ambient")).collect();
        let d01 = Matrix::from_columns(field, v1.dim(), &sub_cols).determinant().expect("square");
        let d12 = Matrix::from_columns(field, qx.dim(), &quot_cols).determinant().expect("square");
        let lhs = &(&y.lambda(theory) * &d01) * &d12;
        let rhs = &g.determinant().expect("square") * &x.lambda(theory);
        if lhs != rhs {
            bad.push(x.clone());
        }
    }
    bad
}

/// Number of admissible sequences `kᵃ ↪ k^b ↠ kᶜ` with `b ≤ d`, counted by
/// brute force over all matrix pairs and divided by `|GL_a|·|GL_c|`. Each
/// rigidified level-2 object accounts for exactly one such orbit.
pub fn count_ses_orbits(field: Field, d: usize) -> u128 {
    let q = u128::from(field.characteristic());
    let gl = |n: usize| (0..n).map(|i| q.pow(n as u32) - q.pow(i as u32)).product::<u128>();
    let mut total = 0u128;
    for b in 0..=d {
        for a in 0..=b {
            let c = b - a;
            let is = enumerate_matrices(field, b, a);
            let js = enumerate_matrices(field, c, b);
            let mut n = 0u128;
            for i in &is {
                for j in &js {
                    if check_ses(&LinMap::from_matrix(i.clone()), &LinMap::from_matrix(j.clone())).is_ok() {
                        n += 1;
                    }
                }
            }
            total += n / (gl(a) * gl(c));
        }
    }
    total
}

/// Dimension theory used in the torsor check: `χ = dim` with values in ℤ.
pub fn dim_theory() -> DimTheory {
    DimTheory::new(AbelianGroup::integers().one())
}
