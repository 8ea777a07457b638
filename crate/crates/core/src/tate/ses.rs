use std::fmt;

use crate::exactcat::{check_ses, LinMap, Ses};
use crate::exactlin::{Field, Matrix, Scalar, Subquotient};

use super::lattice::{Lattice, TateSpace};
use super::laurent::LaurentMatrix;
use super::TateError;

/// Why a pair of Laurent matrices is not an admissible short exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TateDiagnosis {
    NotMono,
    NotEpi,
    CompositeNonzero,
    InexactAtMiddle,
}

impl fmt::Display for TateDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TateDiagnosis::NotMono => "rank-deficient mono",
            TateDiagnosis::NotEpi => "rank-deficient epi",
            TateDiagnosis::CompositeNonzero => "composite-nonzero",
            TateDiagnosis::InexactAtMiddle => "inexact-at-middle",
        })
    }
}

/// `X' ↪ X ↠ X''` given by `i` (`b×a`) and `j` (`c×b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateSes {
    i: LaurentMatrix,
    j: LaurentMatrix,
    /// minimal entry valuations of `i` and `j`
    vi: i64,
    vj: i64,
    /// valuation bounds of a left inverse of `i` and a right inverse of `j`
    v_left: i64,
    v_right: i64,
}

/// Best valuation bound `min val(B)` over the inverses `adj(M_S)/det(M_S)`
/// of the nonsingular maximal square minors `M_S`, choosing rows
/// (`by_rows`) or columns.
fn inverse_valuation(m: &LaurentMatrix, by_rows: bool) -> Option<i64> {
    let (n, k) = if by_rows { (m.rows(), m.cols()) } else { (m.cols(), m.rows()) };
    if k == 0 {
        return Some(0);
    }
    let all: Vec<usize> = (0..k).collect();
    let mut best: Option<i64> = None;
    for subset in subsets(n, k) {
        let minor = if by_rows { m.select(&subset, &all) } else { m.select(&all, &subset) };
        let det = minor.determinant().expect("square");
        let Some(vd) = det.valuation() else { continue };
        let adj = minor.adjugate().expect("square");
        let v = adj.valuation().expect("adjugate of an invertible matrix is nonzero") - vd;
        best = Some(best.map_or(v, |b| b.max(v)));
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            if n - s < k - cur.len() {
                break;
            }
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Validate `i`, `j` as an admissible short exact sequence of Tate spaces:
/// ranks over `k(t)` are full, `j·i = 0`, and the ranks add up.
pub fn check_tate_ses(i: &LaurentMatrix, j: &LaurentMatrix) -> Result<TateSes, TateError> {
    if j.cols() != i.rows() {
        return Err(TateError::Shape(format!("i is {}x{} but j is {}x{}", i.rows(), i.cols(), j.rows(), j.cols())));
    }
    if i.field() != j.field() {
        return Err(TateError::FieldMismatch);
    }
    let (a, b, c) = (i.cols(), i.rows(), j.rows());
    let diag = if i.rank() != a {
        Some(TateDiagnosis::NotMono)
    } else if j.rank() != c {
        Some(TateDiagnosis::NotEpi)
    } else if !j.mul(i)?.is_zero() {
        Some(TateDiagnosis::CompositeNonzero)
    } else if a + c != b {
        Some(TateDiagnosis::InexactAtMiddle)
    } else {
        None
    };
    if let Some(d) = diag {
        return Err(TateError::NotExact(d));
    }
    Ok(TateSes {
        vi: i.valuation().unwrap_or(0),
        vj: j.valuation().unwrap_or(0),
        v_left: inverse_valuation(i, true).expect("full column rank"),
        v_right: inverse_valuation(j, false).expect("full row rank"),
        i: i.clone(),
        j: j.clone(),
    })
}

impl TateSes {
    /// The coordinate split `k((t))^a ↪ k((t))^(a+c) ↠ k((t))^c`.
    pub fn split(field: Field, a: usize, c: usize) -> TateSes {
        let n = a + c;
        check_tate_ses(
            &LaurentMatrix::coordinate_inclusion(field, n, a),
            &LaurentMatrix::coordinate_projection(field, n, a),
        )
        .expect("coordinate split is exact")
    }

    pub fn i(&self) -> &LaurentMatrix {
        &self.i
    }

    pub fn j(&self) -> &LaurentMatrix {
        &self.j
    }

    pub fn source(&self) -> TateSpace {
        TateSpace::new(self.i.field(), self.i.cols())
    }

    pub fn middle(&self) -> TateSpace {
        TateSpace::new(self.i.field(), self.i.rows())
    }

    pub fn quotient(&self) -> TateSpace {
        TateSpace::new(self.i.field(), self.j.rows())
    }

    fn check_middle(&self, u: &Lattice) -> Result<(), TateError> {
        if u.space() != self.middle() {
            return Err(TateError::SpaceMismatch);
        }
        Ok(())
    }

    /// `i⁻¹(u) = u ∩ X'`.
    pub fn lift(&self, u: &Lattice) -> Result<Lattice, TateError> {
        self.check_middle(u)?;
        let src = self.source();
        if src.rank == 0 {
            return Ok(Lattice::standard(src, 0));
        }
        // i⁻¹(t^lo O) ⊆ t^(lo + v_left) O and i(t^(hi - vi) O) ⊆ t^hi O ⊆ u
        let lo = u.lo() + self.v_left;
        let hi = u.hi() - self.vi;
        let tlo = u.lo().min(lo + self.vi);
        let w = window_matrix(&self.i, lo, hi, tlo, u.hi())?;
        let target = u.in_window(tlo, u.hi());
        Ok(Lattice::from_subspace(src, lo, hi, target.preimage(&w)))
    }

    /// `j(u)`.
    pub fn project(&self, u: &Lattice) -> Result<Lattice, TateError> {
        self.check_middle(u)?;
        let tgt = self.quotient();
        if tgt.rank == 0 {
            return Ok(Lattice::standard(tgt, 0));
        }
        // j(t^lo O) ⊆ t^(lo + vj) O and t^(hi - v_right) O ⊆ j(t^hi O)
        let lo = u.lo() + self.vj;
        let hi = u.hi() - self.v_right;
        let shi = u.hi().max(hi - self.vj);
        let w = window_matrix(&self.j, u.lo(), shi, lo, hi)?;
        let gens = u.in_window(u.lo(), shi);
        Ok(Lattice::from_subspace(tgt, lo, hi, gens.map(&w)))
    }
}

/// Matrix of `m` from the window `[slo, shi)` of its source to the window
/// `[tlo, thi)` of its target; exponents `>= thi` are dropped.
pub fn window_matrix(m: &LaurentMatrix, slo: i64, shi: i64, tlo: i64, thi: i64) -> Result<Matrix, TateError> {
    let (rows, cols) = (m.rows(), m.cols());
    let f = m.field();
    let tlen = (thi - tlo).max(0) as usize * rows;
    let slen = (shi - slo).max(0) as usize * cols;
    let mut w = Matrix::zeros(f, tlen, slen);
    for e in slo..shi {
        for k in 0..cols {
            let sc = (e - slo) as usize * cols + k;
            for r in 0..rows {
                for (d, c) in m.get(r, k).terms() {
                    let te = e + d;
                    if te >= thi {
                        continue;
                    }
                    if te < tlo {
                        return Err(TateError::Window(format!("exponent {te} below window start {tlo}")));
                    }
                    w.set((te - tlo) as usize * rows + r, sc, c.clone());
                }
            }
        }
    }
    Ok(w)
}

/// Re-express a window vector from `[lo, hi)` in `[nlo, nhi)`, dropping
/// exponents `>= nhi`. Fails if the vector is nonzero below `nlo`.
pub fn rewindow(v: &[Scalar], field: Field, n: usize, lo: i64, nlo: i64, nhi: i64) -> Result<Vec<Scalar>, TateError> {
    let mut out = vec![field.zero(); (nhi - nlo).max(0) as usize * n];
    for (idx, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let e = lo + (idx / n) as i64;
        if e >= nhi {
            continue;
        }
        if e < nlo {
            return Err(TateError::Window(format!("exponent {e} below window start {nlo}")));
        }
        out[(e - nlo) as usize * n + idx % n] = x.clone();
    }
    Ok(out)
}

/// The finite-dimensional quotient `big / small` of nested lattices, with
/// the canonical complement basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeQuotient {
    space: TateSpace,
    lo: i64,
    hi: i64,
    sq: Subquotient,
}

impl LatticeQuotient {
    pub fn new(big: &Lattice, small: &Lattice) -> Result<Self, TateError> {
        if !big.contains(small)? {
            return Err(TateError::NotNested);
        }
        let lo = big.lo().min(small.lo());
        let hi = big.hi().max(small.hi());
        let sq = Subquotient::new(big.in_window(lo, hi), small.in_window(lo, hi))?;
        Ok(LatticeQuotient { space: big.space(), lo, hi, sq })
    }

    pub fn dim(&self) -> usize {
        self.sq.dim()
    }

    pub fn space(&self) -> TateSpace {
        self.space
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// Representatives of the basis, as vectors in [`Self::window`].
    pub fn reps(&self) -> &Matrix {
        self.sq.reps()
    }

    /// Coordinates of the class of a vector of `big` given in the window `[lo, hi)`.
    pub fn coords(&self, v: &[Scalar], lo: i64) -> Result<Vec<Scalar>, TateError> {
        let w = rewindow(v, self.space.field, self.space.rank, lo, self.lo, self.hi)?;
        self.sq.coords(&w).ok_or(TateError::NotNested)
    }

    /// The map `self -> other` induced by the identity of the ambient space
    /// (requires `big ⊆ other.big` and `small ⊆ other.small`).
    pub fn map_to(&self, other: &LatticeQuotient) -> Result<LinMap, TateError> {
        let cols = (0..self.dim()).map(|r| other.coords(self.reps().row(r), self.lo)).collect::<Result<Vec<_>, _>>()?;
        Ok(LinMap::from_matrix(Matrix::from_columns(self.space.field, other.dim(), &cols)))
    }

    /// The map `self -> other` induced by the Laurent matrix `m`.
    pub fn map_along(&self, m: &LaurentMatrix, other: &LatticeQuotient) -> Result<LinMap, TateError> {
        let tlo = other.lo.min(self.lo + m.valuation().unwrap_or(0));
        let w = window_matrix(m, self.lo, self.hi, tlo, other.hi)?;
        let cols =
            (0..self.dim()).map(|r| other.coords(&w.apply(self.reps().row(r)), tlo)).collect::<Result<Vec<_>, _>>()?;
        Ok(LinMap::from_matrix(Matrix::from_columns(self.space.field, other.dim(), &cols)))
    }
}

/// The grid attached to a sequence `X' ↪ X ↠ X''` and lattices `U₁ ⊆ U₂` of `X`:
/// rows `U'ₖ ↪ Uₖ ↠ U''ₖ` and the finite bottom row
/// `U'₂/U'₁ ↪ U₂/U₁ ↠ U''₂/U''₁`.
#[derive(Clone, Debug)]
pub struct LatticeGrid {
    pub row1: [Lattice; 3],
    pub row2: [Lattice; 3],
    pub quotients: [LatticeQuotient; 3],
    pub bottom: Ses,
}

/// Build the grid from pairs `(U'₁, U₁)` and `(U'₂, U₂)`, checking that
/// `U'ₖ = Uₖ ∩ X'` and `U₁ ⊆ U₂`.
pub fn lattice_grid(
    ses: &TateSes,
    p1: (&Lattice, &Lattice),
    p2: (&Lattice, &Lattice),
) -> Result<LatticeGrid, TateError> {
    let (u1p, u1) = p1;
    let (u2p, u2) = p2;
    if !u2.contains(u1)? {
        return Err(TateError::Precondition("U₁ is not contained in U₂".into()));
    }
    if ses.lift(u1)? != *u1p {
        return Err(TateError::Precondition("U'₁ is not the pullback of U₁".into()));
    }
    if ses.lift(u2)? != *u2p {
        return Err(TateError::Precondition("U'₂ is not the pullback of U₂".into()));
    }
    let u1pp = ses.project(u1)?;
    let u2pp = ses.project(u2)?;
    let qp = LatticeQuotient::new(u2p, u1p)?;
    let q = LatticeQuotient::new(u2, u1)?;
    let qpp = LatticeQuotient::new(&u2pp, &u1pp)?;
    let ib = qp.map_along(ses.i(), &q)?;
    let jb = q.map_along(ses.j(), &qpp)?;
    let bottom = check_ses(&ib, &jb).map_err(|e| TateError::Precondition(format!("bottom row: {e}")))?;
    Ok(LatticeGrid {
        row1: [u1p.clone(), u1.clone(), u1pp],
        row2: [u2p.clone(), u2.clone(), u2pp],
        quotients: [qp, q, qpp],
        bottom,
    })
}

/// The grid for `U₁ ⊆ U₂`, computing the pullbacks.
pub fn lattice_grid_from(ses: &TateSes, u1: &Lattice, u2: &Lattice) -> Result<LatticeGrid, TateError> {
    let u1p = ses.lift(u1)?;
    let u2p = ses.lift(u2)?;
    lattice_grid(ses, (&u1p, u1), (&u2p, u2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tate::LaurentPoly;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn sp(n: usize) -> TateSpace {
        TateSpace::new(f5(), n)
    }

    #[test]
    fn ses_examples() {
        let f = f5();
        assert!(check_tate_ses(
            &LaurentMatrix::coordinate_inclusion(f, 2, 1),
            &LaurentMatrix::coordinate_projection(f, 2, 1)
        )
        .is_ok());
        let t = LaurentMatrix::diag_t_pow(f, &[1]);
        assert!(check_tate_ses(&t, &LaurentMatrix::zeros(f, 0, 1)).is_ok());
        let i = LaurentMatrix::coordinate_inclusion(f, 2, 1);
        let j = LaurentMatrix::coordinate_projection(f, 2, 0).select(&[0], &[0, 1]);
        assert_eq!(check_tate_ses(&i, &j), Err(TateError::NotExact(TateDiagnosis::CompositeNonzero)));
    }

    #[test]
    fn lift_and_project_examples() {
        let f = f5();
        let s = TateSes::split(f, 1, 1);
        let u = Lattice::diagonal(sp(2), &[-1, 2]);
        assert_eq!(s.lift(&u).unwrap(), Lattice::standard(sp(1), -1));
        assert_eq!(s.project(&u).unwrap(), Lattice::standard(sp(1), 2));

        let t = check_tate_ses(&LaurentMatrix::diag_t_pow(f, &[1]), &LaurentMatrix::zeros(f, 0, 1)).unwrap();
        assert_eq!(t.lift(&Lattice::standard(sp(1), 0)).unwrap(), Lattice::standard(sp(1), -1));
        assert_eq!(t.project(&Lattice::standard(sp(1), 0)).unwrap(), Lattice::standard(sp(0), 0));

        let tj = check_tate_ses(&LaurentMatrix::zeros(f, 1, 0), &LaurentMatrix::diag_t_pow(f, &[1])).unwrap();
        assert_eq!(tj.project(&Lattice::standard(sp(1), 0)).unwrap(), Lattice::standard(sp(1), 1));

        let id = check_tate_ses(&LaurentMatrix::identity(f, 2), &LaurentMatrix::zeros(f, 0, 2)).unwrap();
        let v = Lattice::diagonal(sp(2), &[0, 3]);
        assert_eq!(id.lift(&v).unwrap(), v);
    }

    #[test]
    fn twisted_lift_project_index_is_additive() {
        let f = f5();
        // X' = k((t)) embedded as (1, t^-1 + 2), quotient by (t^-1 + 2, -1)
        let a = LaurentPoly::parse(f, "1*t^-1+2*t^0").unwrap();
        let i = LaurentMatrix::from_rows(f, 1, vec![vec![LaurentPoly::one(f)], vec![a.clone()]]).unwrap();
        let j = LaurentMatrix::from_rows(f, 2, vec![vec![a, LaurentPoly::one(f).neg()]]).unwrap();
        let s = check_tate_ses(&i, &j).unwrap();
        let u0 = Lattice::standard(sp(2), 0);
        for u in [Lattice::diagonal(sp(2), &[-2, 1]), Lattice::diagonal(sp(2), &[3, -1]), Lattice::standard(sp(2), 4)] {
            let lhs = u.relative_index(&u0).unwrap();
            let rhs = s.lift(&u).unwrap().relative_index(&s.lift(&u0).unwrap()).unwrap()
                + s.project(&u).unwrap().relative_index(&s.project(&u0).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn grid_examples() {
        let f = f5();
        let s = TateSes::split(f, 1, 1);
        let u1 = Lattice::standard(sp(2), 1);
        let u2 = Lattice::standard(sp(2), 0);
        let g = lattice_grid_from(&s, &u1, &u2).unwrap();
        assert_eq!((g.bottom.sub().dim, g.bottom.middle().dim, g.bottom.quotient().dim), (1, 2, 1));

        let same = lattice_grid_from(&s, &u2, &u2).unwrap();
        assert_eq!(same.bottom.middle().dim, 0);

        let shifted = lattice_grid_from(&s, &u1.shift(3), &u2.shift(3)).unwrap();
        assert_eq!(shifted.bottom.middle().dim, g.bottom.middle().dim);

        let wrong = Lattice::standard(sp(1), 7);
        assert!(matches!(
            lattice_grid(&s, (&wrong, &u1), (&s.lift(&u2).unwrap(), &u2)),
            Err(TateError::Precondition(_))
        ));
    }
}
