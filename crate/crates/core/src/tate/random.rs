//! Seeded random generators for lattices, automorphisms and filtrations.

use rand::Rng;

use crate::exactlin::{Field, Matrix, Scalar};

use super::{check_tate_ses, Lattice, LaurentMatrix, LaurentPoly, TateSes, TateSpace};

pub fn scalar<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        Field::Rationals => field.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn nonzero_scalar<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    loop {
        let s = scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn matrix<R: Rng>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let rows = (0..rows).map(|_| (0..cols).map(|_| scalar(field, rng)).collect()).collect();
    Matrix::from_rows(field, cols, rows).expect("shape")
}

/// A random lattice with bounds inside `[lo_min, hi_max]`.
pub fn lattice<R: Rng>(space: TateSpace, lo_min: i64, hi_max: i64, rng: &mut R) -> Lattice {
    let lo = rng.gen_range(lo_min..=hi_max);
    let hi = rng.gen_range(lo..=hi_max);
    let len = (hi - lo) as usize * space.rank;
    let r = rng.gen_range(0..=len);
    Lattice::normalize(space, lo, hi, &matrix(space.field, r, len, rng)).expect("valid window")
}

/// A random `(A, A⁻¹)` over `k[t, t⁻¹]`: a diagonal `c·t^e` factor and a few
/// elementary factors `1 + c·t^e·E_ij`, with `e ∈ [-spread, spread]`.
pub fn automorphism<R: Rng>(
    field: Field,
    n: usize,
    spread: i64,
    steps: usize,
    rng: &mut R,
) -> (LaurentMatrix, LaurentMatrix) {
    let mut a = LaurentMatrix::zeros(field, n, n);
    let mut inv = LaurentMatrix::zeros(field, n, n);
    for k in 0..n {
        let c = nonzero_scalar(field, rng);
        let e = rng.gen_range(-spread..=spread);
        inv.set(k, k, LaurentPoly::monomial(c.inv().expect("nonzero"), -e));
        a.set(k, k, LaurentPoly::monomial(c, e));
    }
    if n < 2 {
        return (a, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = nonzero_scalar(field, rng);
        let e = rng.gen_range(-spread..=spread);
        let mut el = LaurentMatrix::identity(field, n);
        el.set(i, j, LaurentPoly::monomial(c.clone(), e));
        let mut el_inv = LaurentMatrix::identity(field, n);
        el_inv.set(i, j, LaurentPoly::monomial(-c, e));
        a = a.mul(&el).expect("square");
        inv = el_inv.mul(&inv).expect("square");
    }
    (a, inv)
}

/// A filtration `X₁ ↪ X₂ ↪ X₃` with all the sequences relating its quotients.
#[derive(Clone, Debug)]
pub struct Filtration {
    /// `X₁ ↪ X₂ ↠ X₂/X₁`
    pub s12: TateSes,
    /// `X₂ ↪ X₃ ↠ X₃/X₂`
    pub s23: TateSes,
    /// `X₁ ↪ X₃ ↠ X₃/X₁`
    pub s13: TateSes,
    /// `X₂/X₁ ↪ X₃/X₁ ↠ X₃/X₂`
    pub sq: TateSes,
}

impl Filtration {
    /// Coordinate splits twisted by random automorphisms of all six spaces,
    /// chosen so that every square of the filtration commutes on the nose.
    pub fn random<R: Rng>(field: Field, ranks: [usize; 3], spread: i64, rng: &mut R) -> Filtration {
        let [n1, n2, n3] = ranks;
        assert!(n1 <= n2 && n2 <= n3);
        let mut aut = |n| automorphism(field, n, spread, 2, rng);
        let (_, a1i) = aut(n1);
        let (a2, a2i) = aut(n2);
        let (a3, a3i) = aut(n3);
        let (c2, c2i) = aut(n2 - n1);
        let (c3, _) = aut(n3 - n2);
        let (d, di) = aut(n3 - n1);
        let incl = |n, a| LaurentMatrix::coordinate_inclusion(field, n, a);
        let proj = |n, a| LaurentMatrix::coordinate_projection(field, n, a);
        let prod = |ms: &[&LaurentMatrix]| ms[1..].iter().fold(ms[0].clone(), |acc, m| acc.mul(m).expect("composable"));
        let ses = |i: LaurentMatrix, j: LaurentMatrix| check_tate_ses(&i, &j).expect("twisted split is exact");
        Filtration {
            s12: ses(prod(&[&a2, &incl(n2, n1), &a1i]), prod(&[&c2, &proj(n2, n1), &a2i])),
            s23: ses(prod(&[&a3, &incl(n3, n2), &a2i]), prod(&[&c3, &proj(n3, n2), &a3i])),
            s13: ses(prod(&[&a3, &incl(n3, n1), &a1i]), prod(&[&d, &proj(n3, n1), &a3i])),
            sq: ses(prod(&[&d, &incl(n3 - n1, n2 - n1), &c2i]), prod(&[&c3, &proj(n3 - n1, n2 - n1), &di])),
        }
    }

    pub fn top(&self) -> TateSpace {
        self.s23.middle()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn automorphisms_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..4 {
            let (a, b) = automorphism(Field::Prime(5), n, 2, 3, &mut rng);
            assert_eq!(a.mul(&b).unwrap(), LaurentMatrix::identity(Field::Prime(5), n));
        }
    }

    #[test]
    fn filtration_quotients_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Field::Prime(2);
        for _ in 0..30 {
            let fl = Filtration::random(f, [1, 2, 3], 2, &mut rng);
            let u = lattice(fl.top(), -2, 2, &mut rng);
            let u2 = fl.s23.lift(&u).unwrap();
            let u1 = fl.s12.lift(&u2).unwrap();
            let u21 = fl.s12.project(&u2).unwrap();
            let v = fl.s13.project(&u).unwrap();
            assert_eq!(u1, fl.s13.lift(&u).unwrap());
            assert_eq!(u21, fl.sq.lift(&v).unwrap());
            assert_eq!(fl.s23.project(&u).unwrap(), fl.sq.project(&v).unwrap());
        }
    }
}
