//! The exact category of finite-dimensional vector spaces: admissible
//! sequences, intersections and common quotients, epi-mono factorization and
//! 3×3 grids.
//!
//! Admissible monos and epis here are exactly the injective and surjective
//! maps, but every check goes through [`check_ses`] so the lattice model can
//! reuse the same vocabulary.

use std::fmt;

use crate::exactlin::{Field, LinError, Matrix, Scalar, Subquotient, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FdSpace {
    pub dim: usize,
    pub field: Field,
}

impl FdSpace {
    pub fn new(field: Field, dim: usize) -> Self {
        FdSpace { dim, field }
    }
}

/// A linear map; the matrix has `target.dim` rows and `source.dim` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinMap {
    pub source: FdSpace,
    pub target: FdSpace,
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("maps are over different fields")]
    FieldMismatch,
    #[error("map is not injective")]
    NotInjective,
    #[error("map is not surjective")]
    NotSurjective,
    #[error("not a short exact sequence: {0}")]
    NotExact(SesDiagnosis),
    #[error("composite of the witnesses differs from the given map")]
    WitnessMismatch,
    #[error("square is not cartesian: {0}")]
    NotCartesian(String),
    #[error(transparent)]
    Lin(#[from] LinError),
}

impl LinMap {
    pub fn new(source: FdSpace, target: FdSpace, matrix: Matrix) -> Result<Self, CatError> {
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(CatError::Shape(format!(
                "{}x{} matrix for a map {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.dim,
                target.dim
            )));
        }
        if source.field != target.field || matrix.field() != source.field {
            return Err(CatError::FieldMismatch);
        }
        Ok(LinMap { source, target, matrix })
    }

    pub fn from_matrix(matrix: Matrix) -> Self {
        let f = matrix.field();
        LinMap { source: FdSpace::new(f, matrix.cols()), target: FdSpace::new(f, matrix.rows()), matrix }
    }

    pub fn identity(space: FdSpace) -> Self {
        Self::from_matrix(Matrix::identity(space.field, space.dim))
    }

    pub fn zero(source: FdSpace, target: FdSpace) -> Self {
        Self::from_matrix(Matrix::zeros(source.field, target.dim, source.dim))
    }

    pub fn field(&self) -> Field {
        self.source.field
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_mono(&self) -> bool {
        self.rank() == self.source.dim
    }

    pub fn is_epi(&self) -> bool {
        self.rank() == self.target.dim
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &LinMap) -> Result<LinMap, CatError> {
        if first.target != self.source {
            return Err(CatError::Shape("maps are not composable".into()));
        }
        Ok(LinMap { source: first.source, target: self.target, matrix: self.matrix.mul(&first.matrix)? })
    }

    pub fn image(&self) -> Subspace {
        Subspace::image(&self.matrix)
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::kernel(&self.matrix)
    }
}

/// Why a pair of maps fails to be an admissible short exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SesDiagnosis {
    NotMono,
    NotEpi,
    CompositeNonzero,
    InexactAtMiddle,
}

impl fmt::Display for SesDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SesDiagnosis::NotMono => "not-mono",
            SesDiagnosis::NotEpi => "not-epi",
            SesDiagnosis::CompositeNonzero => "composite-nonzero",
            SesDiagnosis::InexactAtMiddle => "inexact-at-middle",
        })
    }
}

/// A validated admissible short exact sequence `a' ↪ a ↠ a''`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ses {
    i: LinMap,
    j: LinMap,
}

impl Ses {
    pub fn i(&self) -> &LinMap {
        &self.i
    }

    pub fn j(&self) -> &LinMap {
        &self.j
    }

    pub fn sub(&self) -> FdSpace {
        self.i.source
    }

    pub fn middle(&self) -> FdSpace {
        self.i.target
    }

    pub fn quotient(&self) -> FdSpace {
        self.j.target
    }

    /// The standard split sequence `k^a ↪ k^(a+b) ↠ k^b`.
    pub fn split(field: Field, a: usize, b: usize) -> Ses {
        let n = a + b;
        let mut i = Matrix::zeros(field, n, a);
        for k in 0..a {
            i.set(k, k, field.one());
        }
        let mut j = Matrix::zeros(field, b, n);
        for k in 0..b {
            j.set(k, a + k, field.one());
        }
        Ses { i: LinMap::from_matrix(i), j: LinMap::from_matrix(j) }
    }
}

/// Validate `i`, `j` as an admissible short exact sequence.
pub fn check_ses(i: &LinMap, j: &LinMap) -> Result<Ses, CatError> {
    if i.target != j.source {
        return Err(CatError::Shape(format!(
            "target of i has dim {} but source of j has dim {}",
            i.target.dim, j.source.dim
        )));
    }
    if i.field() != j.field() {
        return Err(CatError::FieldMismatch);
    }
    let diag = if !i.is_mono() {
        Some(SesDiagnosis::NotMono)
    } else if !j.is_epi() {
        Some(SesDiagnosis::NotEpi)
    } else if !j.after(i)?.matrix.is_zero() {
        Some(SesDiagnosis::CompositeNonzero)
    } else if j.source.dim - j.rank() != i.source.dim {
        Some(SesDiagnosis::InexactAtMiddle)
    } else {
        None
    };
    match diag {
        Some(d) => Err(CatError::NotExact(d)),
        None => Ok(Ses { i: i.clone(), j: j.clone() }),
    }
}

/// Matrix sending basis vector `k` of the source to `f(k)`.
fn map_by_columns(field: Field, source_dim: usize, target_dim: usize, f: impl Fn(usize) -> Vec<Scalar>) -> LinMap {
    let cols: Vec<Vec<Scalar>> = (0..source_dim).map(f).collect();
    LinMap::from_matrix(Matrix::from_columns(field, target_dim, &cols))
}

/// Inclusion of a subspace, using its echelon basis as coordinates.
pub fn inclusion(s: &Subspace) -> LinMap {
    let b = s.basis();
    map_by_columns(s.field(), s.dim(), s.ambient_dim(), |k| b.row(k).to_vec())
}

/// Projection of the ambient space of `top` onto `top / bottom` when `top` is everything.
pub fn quotient_map(q: &Subquotient) -> LinMap {
    let n = q.top().ambient_dim();
    let f = q.top().field();
    map_by_columns(f, n, q.dim(), |k| {
        let mut e = vec![f.zero(); n];
        e[k] = f.one();
        q.coords(&e).expect("ambient quotient")
    })
}

/// The pullback `p` of two monos with a common target, with its two legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub p: FdSpace,
    pub into1: LinMap,
    pub into2: LinMap,
}

pub fn pullback_admissible_monos(m1: &LinMap, m2: &LinMap) -> Result<Pullback, CatError> {
    if m1.target != m2.target {
        return Err(CatError::Shape("monos have different targets".into()));
    }
    if !m1.is_mono() || !m2.is_mono() {
        return Err(CatError::NotInjective);
    }
    let meet = m1.image().meet(&m2.image())?;
    let f = m1.field();
    let leg = |m: &LinMap| {
        map_by_columns(f, meet.dim(), m.source.dim, |k| m.matrix.solve(meet.basis().row(k)).expect("in image"))
    };
    Ok(Pullback { p: FdSpace::new(f, meet.dim()), into1: leg(m1), into2: leg(m2) })
}

/// The pushout `q` of two epis with a common source, with its two legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub q: FdSpace,
    pub from1: LinMap,
    pub from2: LinMap,
}

pub fn pushout_admissible_epis(e1: &LinMap, e2: &LinMap) -> Result<Pushout, CatError> {
    if e1.source != e2.source {
        return Err(CatError::Shape("epis have different sources".into()));
    }
    if !e1.is_epi() || !e2.is_epi() {
        return Err(CatError::NotSurjective);
    }
    let f = e1.field();
    let n = e1.source.dim;
    let k = e1.kernel().join(&e2.kernel())?;
    let sq = Subquotient::new(Subspace::full(f, n), k)?;
    let leg = |e: &LinMap| {
        map_by_columns(f, e.target.dim, sq.dim(), |c| {
            let mut unit = vec![f.zero(); e.target.dim];
            unit[c] = f.one();
            let pre = e.matrix.solve(&unit).expect("surjective");
            sq.coords(&pre).expect("ambient")
        })
    };
    Ok(Pushout { q: FdSpace::new(f, sq.dim()), from1: leg(e1), from2: leg(e2) })
}

/// `f = m ∘ e` with `e` epi and `m` mono.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub middle: FdSpace,
    pub e: LinMap,
    pub m: LinMap,
}

/// Factor a map presented as mono-then-epi through its image, whose echelon
/// basis makes the middle object canonical.
pub fn epi_mono_factorize(f: &LinMap, witness_mono: &LinMap, witness_epi: &LinMap) -> Result<Factorization, CatError> {
    if !witness_mono.is_mono() {
        return Err(CatError::NotInjective);
    }
    if !witness_epi.is_epi() {
        return Err(CatError::NotSurjective);
    }
    if witness_epi.after(witness_mono)? != *f {
        return Err(CatError::WitnessMismatch);
    }
    Ok(image_factorization(f))
}

pub fn image_factorization(f: &LinMap) -> Factorization {
    let img = f.image();
    let m = inclusion(&img);
    let field = f.field();
    let e = map_by_columns(field, f.source.dim, img.dim(), |k| img.coords(&f.matrix.column(k)).expect("in image"));
    Factorization { middle: FdSpace::new(field, img.dim()), e, m }
}

/// The factorization through the coimage `source / ker f`.
pub fn coimage_factorization(f: &LinMap) -> Factorization {
    let field = f.field();
    let n = f.source.dim;
    let sq = Subquotient::new(Subspace::full(field, n), f.kernel()).expect("nested");
    let e = quotient_map(&sq);
    let reps = sq.reps().clone();
    let m = map_by_columns(field, sq.dim(), f.target.dim, |k| f.matrix.apply(reps.row(k)));
    Factorization { middle: FdSpace::new(field, sq.dim()), e, m }
}

/// The isomorphism `φ` with `φ ∘ a.e = b.e` and `b.m ∘ φ = a.m`, together with
/// the dimension of the solution space of `φ ∘ a.e = b.e` (zero means unique).
pub fn connecting_iso(a: &Factorization, b: &Factorization) -> Option<(LinMap, usize)> {
    if a.middle.dim != b.middle.dim || a.e.source != b.e.source || a.m.target != b.m.target {
        return None;
    }
    let r = a.middle.dim;
    let field = a.e.field();
    // vec(φ) ↦ φ·a.e, as a linear system in the r*r unknowns of φ
    let n = a.e.source.dim;
    let mut sys = Matrix::zeros(field, r * n, r * r);
    let mut rhs = Vec::with_capacity(r * n);
    for i in 0..r {
        for c in 0..n {
            for k in 0..r {
                sys.set(i * n + c, i * r + k, a.e.matrix.get(k, c).clone());
            }
            rhs.push(b.e.matrix.get(i, c).clone());
        }
    }
    let free = r * r - sys.rank();
    let sol = sys.solve(&rhs)?;
    let mut phi = Matrix::zeros(field, r, r);
    for i in 0..r {
        for k in 0..r {
            phi.set(i, k, sol[i * r + k].clone());
        }
    }
    let phi = LinMap::from_matrix(phi);
    if !phi.is_iso() || b.m.after(&phi).ok()? != a.m {
        return None;
    }
    Some((phi, free))
}

/// A 3×3 grid of spaces whose rows and columns are short exact sequences.
///
/// `spaces[r][c]` uses the layout
/// ```text
/// x¹₁ ↪ x¹ ↠ x¹₂
///  ↓     ↓     ↓
/// x₁  ↪ x  ↠ x₂
///  ↓     ↓     ↓
/// x²₁ ↪ x² ↠ x²₂
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid3x3 {
    pub spaces: [[FdSpace; 3]; 3],
    pub rows: [Ses; 3],
    pub cols: [Ses; 3],
}

impl Grid3x3 {
    pub fn transpose(&self) -> Grid3x3 {
        let mut spaces = self.spaces;
        for (r, row) in spaces.iter_mut().enumerate() {
            for (c, s) in row.iter_mut().enumerate() {
                *s = self.spaces[c][r];
            }
        }
        Grid3x3 { spaces, rows: self.cols.clone(), cols: self.rows.clone() }
    }

    /// All four small squares commute.
    pub fn commutes(&self) -> bool {
        let r = &self.rows;
        let c = &self.cols;
        // each square: (row r, first map) then (col) equals (col) then (row r+1)
        let sq = |a: &LinMap, b: &LinMap, x: &LinMap, y: &LinMap| match (b.after(a), y.after(x)) {
            (Ok(p), Ok(q)) => p == q,
            _ => false,
        };
        sq(&r[0].i, &c[1].i, &c[0].i, &r[1].i)
            && sq(&r[0].j, &c[2].i, &c[1].i, &r[1].j)
            && sq(&r[1].i, &c[1].j, &c[0].j, &r[2].i)
            && sq(&r[1].j, &c[2].j, &c[1].j, &r[2].j)
    }
}

/// Complete a cartesian square of monos
/// ```text
/// x¹₁ -a-> x¹
///  b        c
///  v        v
/// x₁  -d-> x
/// ```
/// to the full 3×3 grid of quotients.
pub fn complete_grid_3x3(a: &LinMap, b: &LinMap, c: &LinMap, d: &LinMap) -> Result<Grid3x3, CatError> {
    for m in [a, b, c, d] {
        if !m.is_mono() {
            return Err(CatError::NotInjective);
        }
    }
    if c.after(a)? != d.after(b)? {
        return Err(CatError::NotCartesian("square does not commute".into()));
    }
    let field = c.field();
    let n = c.target.dim;
    let s1 = c.image();
    let s2 = d.image();
    let s11 = s1.meet(&s2)?;
    if c.after(a)?.rank() != s11.dim() {
        return Err(CatError::NotCartesian(format!(
            "corner has dim {} but the intersection has dim {}",
            a.source.dim,
            s11.dim()
        )));
    }
    let full = Subspace::full(field, n);
    let x12 = Subquotient::new(s1.clone(), s11.clone())?;
    let x21 = Subquotient::new(s2.clone(), s11)?;
    let x2_ = Subquotient::new(full.clone(), s1.clone())?; // x²
    let x_2 = Subquotient::new(full.clone(), s2.clone())?; // x₂
    let x22 = Subquotient::new(full, s1.join(&s2)?)?;

    // map from a quotient (via its representatives) or an abstract space (via an embedding) into another quotient
    let via_reps = |from: &Subquotient, to: &Subquotient| {
        let reps = from.reps().clone();
        map_by_columns(field, from.dim(), to.dim(), |k| to.coords(reps.row(k)).expect("compatible"))
    };
    let via_embed = |emb: &LinMap, to: &Subquotient| {
        map_by_columns(field, emb.source.dim, to.dim(), |k| to.coords(&emb.matrix.column(k)).expect("compatible"))
    };

    let top = check_ses(a, &via_embed(c, &x12))?;
    let mid = check_ses(d, &quotient_map(&x_2))?;
    let bot = check_ses(&via_reps(&x21, &x2_), &via_reps(&x2_, &x22))?;
    let left = check_ses(b, &via_embed(d, &x21))?;
    let center = check_ses(c, &quotient_map(&x2_))?;
    let right = check_ses(&via_reps(&x12, &x_2), &via_reps(&x_2, &x22))?;

    let sp = |dim| FdSpace::new(field, dim);
    let spaces = [
        [a.source, c.source, sp(x12.dim())],
        [d.source, c.target, sp(x_2.dim())],
        [sp(x21.dim()), sp(x2_.dim()), sp(x22.dim())],
    ];
    let g = Grid3x3 { spaces, rows: [top, mid, bot], cols: [left, center, right] };
    debug_assert!(g.commutes());
    Ok(g)
}

/// Complete the grid from two subspaces of a common ambient space, with
/// their echelon bases as coordinates.
pub fn grid_from_subspaces(x_upper: &Subspace, x_lower: &Subspace) -> Result<Grid3x3, CatError> {
    let meet = x_upper.meet(x_lower)?;
    let c = inclusion(x_upper);
    let d = inclusion(x_lower);
    let field = x_upper.field();
    let leg = |s: &Subspace| {
        map_by_columns(field, meet.dim(), s.dim(), |k| s.coords(meet.basis().row(k)).expect("contained"))
    };
    complete_grid_3x3(&leg(x_upper), &leg(x_lower), &c, &d)
}

/// Every matrix of the given shape over a small prime field.
pub fn enumerate_matrices(field: Field, rows: usize, cols: usize) -> Vec<Matrix> {
    let elems = field.elements().expect("finite field");
    let q = elems.len();
    let cells = rows * cols;
    let total = q.checked_pow(cells as u32).expect("enumeration too large");
    (0..total)
        .map(|mut code| {
            let mut m = Matrix::zeros(field, rows, cols);
            for k in 0..cells {
                m.set(k / cols.max(1), k % cols.max(1), elems[code % q].clone());
                code /= q;
            }
            m
        })
        .collect()
}

pub fn enumerate_maps(source: FdSpace, target: FdSpace) -> Vec<LinMap> {
    enumerate_matrices(source.field, target.dim, source.dim).into_iter().map(LinMap::from_matrix).collect()
}

/// Every subspace of `k^n` over a small prime field.
pub fn enumerate_subspaces(field: Field, n: usize) -> Vec<Subspace> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for r in 0..=n {
        for m in enumerate_matrices(field, r, n) {
            let s = Subspace::from_matrix(&m);
            if s.dim() == r && seen.insert(format!("{:?}", s.basis())) {
                out.push(s);
            }
        }
    }
    out
}

/// Check that the commuting square
/// ```text
/// A -h1-> B
/// v1      v2
/// C -h2-> D
/// ```
/// is cartesian by enumerating cones from spaces of dimension up to
/// `max_test_dim`. Returns the number of cones checked.
pub fn verify_cartesian(
    h1: &LinMap,
    v1: &LinMap,
    v2: &LinMap,
    h2: &LinMap,
    max_test_dim: usize,
) -> Result<usize, String> {
    let field = h1.field();
    let mut count = 0;
    for t in 0..=max_test_dim {
        let tsp = FdSpace::new(field, t);
        let us = enumerate_maps(tsp, h1.source);
        for f in enumerate_maps(tsp, h1.target) {
            let vf = v2.after(&f).map_err(|e| e.to_string())?;
            for g in enumerate_maps(tsp, v1.target) {
                if vf != h2.after(&g).map_err(|e| e.to_string())? {
                    continue;
                }
                count += 1;
                let n = us.iter().filter(|u| h1.after(u).unwrap() == f && v1.after(u).unwrap() == g).count();
                if n != 1 {
                    return Err(format!("cone from dim {t} factors {n} times"));
                }
            }
        }
    }
    Ok(count)
}

/// Dual of [`verify_cartesian`]: the square is cocartesian, checked on
/// cocones into spaces of dimension up to `max_test_dim`.
pub fn verify_cocartesian(
    h1: &LinMap,
    v1: &LinMap,
    v2: &LinMap,
    h2: &LinMap,
    max_test_dim: usize,
) -> Result<usize, String> {
    let field = h1.field();
    let mut count = 0;
    for t in 0..=max_test_dim {
        let tsp = FdSpace::new(field, t);
        let us = enumerate_maps(h2.target, tsp);
        for f in enumerate_maps(h1.target, tsp) {
            let fh = f.after(h1).map_err(|e| e.to_string())?;
            for g in enumerate_maps(v1.target, tsp) {
                if fh != g.after(v1).map_err(|e| e.to_string())? {
                    continue;
                }
                count += 1;
                let n = us.iter().filter(|u| u.after(v2).unwrap() == f && u.after(h2).unwrap() == g).count();
                if n != 1 {
                    return Err(format!("cocone into dim {t} factors {n} times"));
                }
            }
        }
    }
    Ok(count)
}

pub fn verify_pullback_universal(
    m1: &LinMap,
    m2: &LinMap,
    pb: &Pullback,
    max_test_dim: usize,
) -> Result<usize, String> {
    verify_cartesian(&pb.into1, &pb.into2, m1, m2, max_test_dim)
}

pub fn verify_pushout_universal(e1: &LinMap, e2: &LinMap, po: &Pushout, max_test_dim: usize) -> Result<usize, String> {
    verify_cocartesian(e1, e2, &po.from1, &po.from2, max_test_dim)
}

/// Pullback of two arbitrary maps with a common target, as the kernel of
/// `[f1 | -f2]` on the direct sum of their sources.
pub fn pullback(f1: &LinMap, f2: &LinMap) -> Result<Pullback, CatError> {
    if f1.target != f2.target {
        return Err(CatError::Shape("maps have different targets".into()));
    }
    let field = f1.field();
    let (b, c) = (f1.source.dim, f2.source.dim);
    let joint = f1.matrix.hstack(&f2.matrix.scale(&-field.one()))?;
    let k = Subspace::kernel(&joint);
    let leg =
        |off: usize, dim: usize| map_by_columns(field, k.dim(), dim, |r| k.basis().row(r)[off..off + dim].to_vec());
    Ok(Pullback { p: FdSpace::new(field, k.dim()), into1: leg(0, b), into2: leg(b, c) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn m(f: Field, rows: &[&[i64]]) -> LinMap {
        LinMap::from_matrix(Matrix::from_i64(f, rows))
    }

    #[test]
    fn ses_examples() {
        let f = f2();
        let split = Ses::split(f, 1, 1);
        assert!(check_ses(split.i(), split.j()).is_ok());
        let i = m(f, &[&[1], &[0]]);
        let j = m(f, &[&[1, 0]]);
        assert_eq!(check_ses(&i, &j), Err(CatError::NotExact(SesDiagnosis::CompositeNonzero)));
        let i3 = m(f, &[&[1], &[0], &[0]]);
        let j3 = m(f, &[&[0, 0, 1]]);
        assert_eq!(check_ses(&i3, &j3), Err(CatError::NotExact(SesDiagnosis::InexactAtMiddle)));
        assert!(matches!(check_ses(&i3, &j), Err(CatError::Shape(_))));
    }

    #[test]
    fn pullback_examples() {
        let f = f2();
        let a = inclusion(&Subspace::coordinate(f, 3, &[0, 1]));
        let b = inclusion(&Subspace::coordinate(f, 3, &[1, 2]));
        let pb = pullback_admissible_monos(&a, &b).unwrap();
        assert_eq!(pb.p.dim, 1);
        assert_eq!(a.after(&pb.into1).unwrap().image(), Subspace::coordinate(f, 3, &[1]));
        assert!(verify_pullback_universal(&a, &b, &pb, 1).is_ok());
        let z = inclusion(&Subspace::zero(f, 3));
        assert_eq!(pullback_admissible_monos(&z, &a).unwrap().p.dim, 0);
        let same = pullback_admissible_monos(&a, &a).unwrap();
        assert!(same.into1.is_iso() && same.into2.is_iso());
        let not_mono = m(f, &[&[1, 1], &[0, 0], &[0, 0]]);
        assert_eq!(pullback_admissible_monos(&not_mono, &a), Err(CatError::NotInjective));
    }

    #[test]
    fn pushout_examples() {
        let f = f2();
        let p1 = m(f, &[&[1, 0]]);
        let p2 = m(f, &[&[0, 1]]);
        let po = pushout_admissible_epis(&p1, &p2).unwrap();
        assert_eq!(po.q.dim, 0);
        assert!(verify_pushout_universal(&p1, &p2, &po, 1).is_ok());
        let id = LinMap::identity(FdSpace::new(f, 2));
        let po2 = pushout_admissible_epis(&p1, &id).unwrap();
        assert_eq!(po2.q.dim, 1);
        let po3 = pushout_admissible_epis(&p1, &p1).unwrap();
        assert!(po3.from1.is_iso());
    }

    #[test]
    fn factorization_examples() {
        let f = f2();
        let id = LinMap::identity(FdSpace::new(f, 1));
        let fac = epi_mono_factorize(&id, &id, &id).unwrap();
        assert!(fac.e.is_iso() && fac.m.is_iso());

        let mono = m(f, &[&[1], &[0]]);
        let kill = m(f, &[&[0, 1]]);
        let zero = kill.after(&mono).unwrap();
        let fac = epi_mono_factorize(&zero, &mono, &kill).unwrap();
        assert_eq!(fac.middle.dim, 0);

        let f3 = Field::prime(3).unwrap();
        let mono = m(f3, &[&[1], &[0]]);
        let sum = m(f3, &[&[1, 1]]);
        let fmap = sum.after(&mono).unwrap();
        let fac = epi_mono_factorize(&fmap, &mono, &sum).unwrap();
        assert_eq!(fac.middle.dim, 1);
        assert_eq!(fac.m.after(&fac.e).unwrap(), fmap);
        let id3 = LinMap::identity(FdSpace::new(f3, 1));
        assert_eq!(epi_mono_factorize(&id3, &mono, &m(f3, &[&[0, 1]])), Err(CatError::WitnessMismatch));
    }

    #[test]
    fn factorizations_connect_uniquely_by_enumeration() {
        let f = f2();
        let fmap = m(f, &[&[1, 1, 0], &[0, 0, 0], &[1, 1, 0]]);
        let canon = image_factorization(&fmap);
        let r = canon.middle.dim;
        // every factorization through k^r, found by brute force
        for e in enumerate_maps(fmap.source, canon.middle).into_iter().filter(LinMap::is_epi) {
            for mm in enumerate_maps(canon.middle, fmap.target).into_iter().filter(LinMap::is_mono) {
                if mm.after(&e).unwrap() != fmap {
                    continue;
                }
                let other = Factorization { middle: canon.middle, e: e.clone(), m: mm.clone() };
                let isos: Vec<_> = enumerate_maps(canon.middle, canon.middle)
                    .into_iter()
                    .filter(|p| p.after(&canon.e).unwrap() == e && mm.after(p).unwrap() == canon.m)
                    .collect();
                assert_eq!(isos.len(), 1);
                let (phi, free) = connecting_iso(&canon, &other).unwrap();
                assert_eq!(free, 0);
                assert_eq!(phi, isos[0]);
            }
        }
        assert_eq!(r, 1);
    }

    #[test]
    fn grid_examples() {
        let f = f2();
        let g = grid_from_subspaces(&Subspace::coordinate(f, 2, &[0]), &Subspace::coordinate(f, 2, &[1])).unwrap();
        let dims: Vec<usize> = g.spaces.iter().flatten().map(|s| s.dim).collect();
        assert_eq!(dims, vec![0, 1, 1, 1, 2, 1, 1, 1, 0]);
        assert!(g.commutes());

        let zero = grid_from_subspaces(&Subspace::zero(f, 0), &Subspace::zero(f, 0)).unwrap();
        assert!(zero.spaces.iter().flatten().all(|s| s.dim == 0));

        // left column degenerate: x¹₁ = x₁
        let x1 = Subspace::coordinate(f, 3, &[0]);
        let xu = Subspace::coordinate(f, 3, &[0, 1]);
        let g = grid_from_subspaces(&xu, &x1).unwrap();
        assert_eq!(g.spaces[2][0].dim, 0);
        assert!(g.rows[2].j().is_iso());
        assert_eq!(g.cols[2].sub().dim, 1);
    }

    #[test]
    fn grid_rejects_non_cartesian() {
        let f = f2();
        let zero_corner = LinMap::zero(FdSpace::new(f, 0), FdSpace::new(f, 1));
        let c = m(f, &[&[1], &[0]]);
        let res = complete_grid_3x3(&zero_corner, &zero_corner, &c, &c);
        assert!(matches!(res, Err(CatError::NotCartesian(_))));
    }

    #[test]
    fn grid_transposes() {
        let f = f2();
        let a = Subspace::from_vectors(f, 3, &[vec![f.one(), f.one(), f.zero()]]).unwrap();
        let b = Subspace::coordinate(f, 3, &[1, 2]);
        let g = grid_from_subspaces(&a, &b).unwrap();
        let t = grid_from_subspaces(&b, &a).unwrap();
        assert_eq!(g.transpose(), t);
    }

    #[test]
    fn mono_pulled_back_along_epi_is_bicartesian() {
        let f = f2();
        let d = FdSpace::new(f, 2);
        for bdim in 2..=3 {
            let b = FdSpace::new(f, bdim);
            for e in enumerate_maps(b, d).into_iter().filter(LinMap::is_epi).step_by(3) {
                for cdim in 0..=2 {
                    let c = FdSpace::new(f, cdim);
                    for mono in enumerate_maps(c, d).into_iter().filter(LinMap::is_mono) {
                        let pb = pullback(&e, &mono).unwrap();
                        assert!(pb.into1.is_mono() && pb.into2.is_epi());
                        assert!(verify_cartesian(&pb.into1, &pb.into2, &e, &mono, 1).is_ok());
                        assert!(verify_cocartesian(&pb.into1, &pb.into2, &e, &mono, 1).is_ok());
                    }
                }
            }
        }
    }
}
