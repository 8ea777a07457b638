use super::field::{Field, Scalar};
use super::matrix::Matrix;
use super::LinError;

/// A subspace of `k^n`, stored by its reduced row echelon basis.
///
/// Two subspaces are equal exactly when their data is equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let (r, piv) = m.rref();
        let basis = r.select_rows(&(0..piv.len()).collect::<Vec<_>>());
        Subspace { ambient: m.cols(), basis, pivots: piv }
    }

    pub fn from_vectors(field: Field, ambient: usize, vs: &[Vec<Scalar>]) -> Result<Self, LinError> {
        Ok(Self::from_matrix(&Matrix::from_rows(field, ambient, vs.to_vec())?))
    }

    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient), pivots: vec![] }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(field: Field, ambient: usize, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Self::from_matrix(&Matrix::from_rows(field, ambient, rows).expect("shape"))
    }

    /// Image of the linear map given by `m` (columns span the image).
    pub fn image(m: &Matrix) -> Self {
        Self::from_matrix(&m.transpose())
    }

    /// Kernel of the linear map `m`.
    pub fn kernel(m: &Matrix) -> Self {
        Self::from_matrix(&m.kernel_basis())
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && (0..other.dim()).all(|r| self.contains_vector(other.basis.row(r)))
    }

    /// `v` minus its component along the echelon basis: the canonical coset representative.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = w[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    w[j] = &w[j] - &(&c * b);
                }
            }
        }
        w
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinError> {
        if self.ambient != other.ambient {
            return Err(LinError::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.field() != other.field() {
            return Err(LinError::FieldMismatch);
        }
        Ok(())
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.check_ambient(other)?;
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// The annihilator under the standard pairing.
    pub fn perp(&self) -> Subspace {
        Self::kernel(&self.basis)
    }

    pub fn meet(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.check_ambient(other)?;
        let s = self.perp().join(&other.perp())?;
        Ok(s.perp())
    }

    pub fn meet_join(&self, other: &Subspace) -> Result<(Subspace, Subspace), LinError> {
        Ok((self.meet(other)?, self.join(other)?))
    }

    /// Image of this subspace under `m` (a map `k^ambient -> k^rows`).
    pub fn map(&self, m: &Matrix) -> Subspace {
        let imgs: Vec<Vec<Scalar>> = (0..self.dim()).map(|r| m.apply(self.basis.row(r))).collect();
        Subspace::from_vectors(self.field(), m.rows(), &imgs).expect("shape")
    }

    /// Preimage of this subspace under `m` (a map `k^cols -> k^ambient`).
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        // x in preimage iff perp-basis * m * x = 0
        let p = self.perp();
        Subspace::kernel(&p.basis.mul(m).expect("shape"))
    }
}

/// A subquotient `top / bottom` with a canonical basis of complement representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    top: Subspace,
    bottom: Subspace,
    reps: Matrix,
    rep_pivots: Vec<usize>,
}

impl Subquotient {
    pub fn new(top: Subspace, bottom: Subspace) -> Result<Self, LinError> {
        top.check_ambient(&bottom)?;
        if !top.contains(&bottom) {
            return Err(LinError::NotNested);
        }
        let reduced: Vec<Vec<Scalar>> = (0..top.dim()).map(|r| bottom.reduce(top.basis.row(r))).collect();
        let s = Subspace::from_vectors(top.field(), top.ambient, &reduced)?;
        Ok(Subquotient { reps: s.basis.clone(), rep_pivots: s.pivots.clone(), top, bottom })
    }

    pub fn dim(&self) -> usize {
        self.reps.rows()
    }

    pub fn top(&self) -> &Subspace {
        &self.top
    }

    pub fn bottom(&self) -> &Subspace {
        &self.bottom
    }

    /// Representatives in `top` of the canonical basis of the quotient.
    pub fn reps(&self) -> &Matrix {
        &self.reps
    }

    /// Coordinates of the class of `v` (which must lie in `top`).
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.top.contains_vector(v) {
            return None;
        }
        let w = self.bottom.reduce(v);
        Some(self.rep_pivots.iter().map(|&p| w[p].clone()).collect())
    }

    /// The vector of `top` represented by coordinates `c`.
    pub fn lift(&self, c: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(c.len(), self.dim());
        let f = self.top.field();
        let mut v = vec![f.zero(); self.top.ambient];
        for (i, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, b) in self.reps.row(i).iter().enumerate() {
                v[j] = &v[j] + &(x * b);
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn meet_and_join_of_coordinate_planes() {
        let a = Subspace::coordinate(f2(), 3, &[0, 1]);
        let b = Subspace::coordinate(f2(), 3, &[1, 2]);
        let (m, j) = a.meet_join(&b).unwrap();
        assert_eq!(m, Subspace::coordinate(f2(), 3, &[1]));
        assert_eq!(j, Subspace::full(f2(), 3));
        let z = Subspace::zero(f2(), 3);
        assert_eq!(z.meet_join(&b).unwrap(), (z.clone(), b.clone()));
        assert_eq!(a.meet_join(&a).unwrap(), (a.clone(), a.clone()));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(f2(), 2);
        let b = Subspace::full(f2(), 3);
        assert!(a.meet(&b).is_err());
    }

    #[test]
    fn subquotient_coordinates() {
        let q = Field::Rationals;
        let top = Subspace::full(q, 3);
        let bottom = Subspace::from_vectors(q, 3, &[vec![q.one(), q.one(), q.zero()]]).unwrap();
        let sq = Subquotient::new(top, bottom).unwrap();
        assert_eq!(sq.dim(), 2);
        let v = vec![q.from_i64(1), q.from_i64(1), q.from_i64(5)];
        // v is congruent to 5 e3 modulo (1,1,0)
        let c = sq.coords(&v).unwrap();
        let back = sq.lift(&c);
        assert_eq!(sq.coords(&back).unwrap(), c);
        assert!(sq.bottom().contains_vector(&v.iter().zip(&back).map(|(a, b)| a - b).collect::<Vec<_>>()));
    }

    #[test]
    fn preimage_and_map() {
        let f = f2();
        // projection k^3 -> k^2 dropping the last coordinate
        let p = Matrix::from_i64(f, &[&[1, 0, 0], &[0, 1, 0]]);
        let line = Subspace::coordinate(f, 2, &[0]);
        assert_eq!(line.preimage(&p), Subspace::coordinate(f, 3, &[0, 2]));
        assert_eq!(Subspace::full(f, 3).map(&p), Subspace::full(f, 2));
    }
}
