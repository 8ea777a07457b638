use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{SimpError, SimplicialSet};
use crate::dimtorsor::{AbelianGroup, GroupElem};
use crate::exactlin::{integer_solve, snf_with_transforms, IntMatrix};

/// A `G`-valued cochain of degree `n`, one value per `n`-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    group: AbelianGroup,
    values: Vec<GroupElem>,
}

impl Cochain {
    pub fn zero(complex: &SimplicialSet, degree: usize, group: &AbelianGroup) -> Self {
        Cochain { degree, group: group.clone(), values: vec![group.zero(); complex.count(degree)] }
    }

    pub fn new(complex: &SimplicialSet, degree: usize, values: Vec<GroupElem>) -> Result<Self, SimpError> {
        if values.len() != complex.count(degree) {
            return Err(SimpError::Incompatible(format!(
                "{} values for {} simplices of dimension {degree}",
                values.len(),
                complex.count(degree)
            )));
        }
        let group = match values.first() {
            Some(v) => v.group().clone(),
            None => return Err(SimpError::Incompatible("empty cochain needs a group; use Cochain::zero".into())),
        };
        if values.iter().any(|v| *v.group() != group) {
            return Err(SimpError::Incompatible("values in different groups".into()));
        }
        Ok(Cochain { degree, group, values })
    }

    pub fn from_ints(
        complex: &SimplicialSet,
        degree: usize,
        group: &AbelianGroup,
        ints: &[Vec<i64>],
    ) -> Result<Self, SimpError> {
        let values = ints.iter().map(|c| group.elem(c)).collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Ok(Self::zero(complex, degree, group));
        }
        Self::new(complex, degree, values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[GroupElem] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &GroupElem {
        &self.values[k]
    }

    pub fn set(&mut self, k: usize, v: GroupElem) {
        assert_eq!(*v.group(), self.group);
        self.values[k] = v;
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, SimpError> {
        self.compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect();
        Ok(Cochain { values, ..self.clone() })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain, SimpError> {
        self.compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.sub(b)).collect();
        Ok(Cochain { values, ..self.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(GroupElem::is_zero)
    }

    fn compatible(&self, other: &Cochain) -> Result<(), SimpError> {
        if self.degree != other.degree || self.group != other.group || self.values.len() != other.values.len() {
            return Err(SimpError::Incompatible("cochains differ in degree, group or complex".into()));
        }
        Ok(())
    }

    /// `(δc)(τ) = Σᵢ (−1)ⁱ c(∂ᵢτ)`.
    pub fn coboundary(&self, complex: &SimplicialSet) -> Cochain {
        let d = self.degree + 1;
        let values = (0..complex.count(d))
            .map(|k| {
                complex.faces(d, k).iter().enumerate().fold(self.group.zero(), |acc, (i, &f)| {
                    let v = &self.values[f];
                    if i % 2 == 0 {
                        acc.add(v)
                    } else {
                        acc.sub(v)
                    }
                })
            })
            .collect();
        Cochain { degree: d, group: self.group.clone(), values }
    }

    /// Parse the `.coch` format: `group <G>`, optionally `degree <n>`, then
    /// `value <simplex> <c1,c2,…>`. Missing simplices take the value zero.
    pub fn from_coch(complex: &SimplicialSet, text: &str) -> Result<Self, SimpError> {
        let mut group: Option<AbelianGroup> = None;
        let mut degree: Option<usize> = None;
        let mut entries: Vec<(usize, usize, Vec<i64>, usize)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SimpError::Parse { line: ln + 1, msg };
            let (key, rest) = line.split_once(char::is_whitespace).ok_or_else(|| err(format!("bad line `{line}`")))?;
            match key {
                "group" => {
                    group = Some(rest.trim().parse().map_err(|e: crate::dimtorsor::DimError| err(e.to_string()))?)
                }
                "degree" => degree = Some(rest.trim().parse().map_err(|_| err("bad degree".into()))?),
                "value" => {
                    let mut it = rest.split_whitespace();
                    let id = it.next().ok_or_else(|| err("missing simplex".into()))?;
                    let coords = it.next().ok_or_else(|| err("missing value".into()))?;
                    let (d, k) = complex.lookup(id).ok_or_else(|| SimpError::Unknown(id.into()))?;
                    let c = coords
                        .split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| err(format!("bad coordinates `{coords}`")))?;
                    entries.push((d, k, c, ln + 1));
                }
                _ => return Err(err(format!("unknown keyword `{key}`"))),
            }
        }
        let group = group.ok_or(SimpError::Parse { line: 0, msg: "missing `group` header".into() })?;
        let degree = match (degree, entries.first()) {
            (Some(d), _) => d,
            (None, Some(e)) => e.0,
            (None, None) => return Err(SimpError::Parse { line: 0, msg: "cannot infer degree".into() }),
        };
        let mut c = Cochain::zero(complex, degree, &group);
        for (d, k, coords, line) in entries {
            if d != degree {
                return Err(SimpError::WrongDimension(complex.name(d, k).into(), d, degree));
            }
            c.values[k] = group.elem(&coords).map_err(|e| SimpError::Parse { line, msg: e.to_string() })?;
        }
        Ok(c)
    }

    pub fn to_coch(&self, complex: &SimplicialSet) -> String {
        let mut out = format!("group {}\ndegree {}\n", self.group, self.degree);
        for (k, v) in self.values.iter().enumerate() {
            let coords: Vec<String> = v.coords().iter().map(i64::to_string).collect();
            let _ = writeln!(out, "value {} {}", complex.name(self.degree, k), coords.join(","));
        }
        out
    }
}

/// Integer matrix of `δ: Cⁿ → Cⁿ⁺¹`.
pub fn coboundary(complex: &SimplicialSet, n: usize) -> IntMatrix {
    let rows = complex.count(n + 1);
    let cols = complex.count(n);
    let mut m = IntMatrix::zeros(rows, cols);
    for k in 0..rows {
        for (i, &f) in complex.faces(n + 1, k).iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let v = m.get(k, f) + BigInt::from(sign);
            m.set(k, f, v);
        }
    }
    m
}

/// `Hⁿ(Σ, ℤ/d)` (with `d = 0` meaning `ℤ`) as a quotient of a lattice of
/// integer cocycle lifts.
#[derive(Clone, Debug)]
struct CyclicPart {
    modulus: u64,
    /// Basis of `{x : δx ≡ 0 mod d}` as `Q·diag(scales)` restricted to `cols`.
    q: IntMatrix,
    q_inv: IntMatrix,
    cols: Vec<usize>,
    scales: Vec<BigInt>,
    /// Coordinates of a cocycle in that basis, transformed by `p2`.
    p2: IntMatrix,
    p2_inv: IntMatrix,
    /// Invariant factors of the relations (all `z` of them, 0 for free).
    orders: Vec<BigInt>,
    prev: IntMatrix,
}

impl CyclicPart {
    fn new(complex: &SimplicialSet, n: usize, d: u64) -> Self {
        let delta = coboundary(complex, n);
        let m = complex.count(n);
        let dm = BigInt::from(d);
        let s = snf_with_transforms(&delta);
        let mut cols = Vec::new();
        let mut scales = Vec::new();
        for i in 0..m {
            if i < s.rank() {
                if d == 0 {
                    continue;
                }
                scales.push(&dm / dm.gcd(&s.factors[i]));
            } else {
                scales.push(BigInt::one());
            }
            cols.push(i);
        }
        let prev = if n == 0 { IntMatrix::zeros(m, 0) } else { coboundary(complex, n - 1) };
        let mut part = CyclicPart {
            modulus: d,
            q: s.q.clone(),
            q_inv: s.q_inv.clone(),
            cols,
            scales,
            p2: IntMatrix::identity(0),
            p2_inv: IntMatrix::identity(0),
            orders: vec![],
            prev: prev.clone(),
        };
        let mut relations: Vec<Vec<BigInt>> = (0..prev.cols()).map(|c| prev.column(c)).collect();
        if d > 0 {
            for j in 0..m {
                let mut e = vec![BigInt::zero(); m];
                e[j] = dm.clone();
                relations.push(e);
            }
        }
        let z = part.cols.len();
        let rel_coords: Vec<Vec<BigInt>> =
            relations.iter().map(|r| part.lattice_coords(r).expect("relations are cocycles")).collect();
        let c = IntMatrix::from_columns(z, &rel_coords);
        let s2 = snf_with_transforms(&c);
        let mut orders = s2.factors.clone();
        orders.resize(z, BigInt::zero());
        part.p2 = s2.p;
        part.p2_inv = s2.p_inv;
        part.orders = orders;
        part
    }

    /// Coordinates of an integer lift in the cocycle lattice basis.
    fn lattice_coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.q_inv.apply(x);
        let kept: std::collections::HashSet<usize> = self.cols.iter().copied().collect();
        for (i, v) in y.iter().enumerate() {
            if !kept.contains(&i) && !v.is_zero() {
                return None;
            }
        }
        self.cols
            .iter()
            .zip(&self.scales)
            .map(|(&i, s)| {
                let (qt, r) = y[i].div_rem(s);
                r.is_zero().then_some(qt)
            })
            .collect()
    }

    /// Indices of the nontrivial summands.
    fn summands(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.orders.len()).filter(|&i| !self.orders[i].is_one())
    }

    fn invariant_factors(&self) -> Vec<u64> {
        self.summands().map(|i| self.orders[i].to_u64().expect("small order")).collect()
    }

    fn class(&self, x: &[BigInt]) -> Option<Vec<i64>> {
        let c = self.lattice_coords(x)?;
        let w = self.p2.apply(&c);
        Some(
            self.summands()
                .map(|i| {
                    let o = &self.orders[i];
                    let v = if o.is_zero() { w[i].clone() } else { w[i].mod_floor(o) };
                    v.to_i64().expect("small class coordinate")
                })
                .collect(),
        )
    }

    fn representative(&self, summand: usize) -> Vec<BigInt> {
        let z = self.cols.len();
        let mut e = vec![BigInt::zero(); z];
        e[summand] = BigInt::one();
        let c = self.p2_inv.apply(&e);
        let mut y = vec![BigInt::zero(); self.q.rows()];
        for ((&i, s), ci) in self.cols.iter().zip(&self.scales).zip(&c) {
            y[i] = s * ci;
        }
        let x = self.q.apply(&y);
        if self.modulus == 0 {
            x
        } else {
            let d = BigInt::from(self.modulus);
            x.into_iter().map(|v| v.mod_floor(&d)).collect()
        }
    }

    /// Some `y` with `δy ≡ b (mod d)`.
    fn solve_coboundary(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let k = self.prev.cols();
        if self.modulus == 0 {
            return integer_solve(&self.prev, b);
        }
        let m = self.prev.rows();
        let mut di = IntMatrix::zeros(m, m);
        for j in 0..m {
            di.set(j, j, BigInt::from(self.modulus));
        }
        let sol = integer_solve(&self.prev.hstack(&di), b)?;
        let d = BigInt::from(self.modulus);
        Some(sol[..k].iter().map(|v| v.mod_floor(&d)).collect())
    }
}

/// `Hⁿ(Σ, G)` with enough data to compute classes and transporters.
#[derive(Clone, Debug)]
pub struct Cohomology {
    degree: usize,
    coeffs: AbelianGroup,
    parts: Vec<CyclicPart>,
}

impl Cohomology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &AbelianGroup {
        &self.coeffs
    }

    /// The group as invariant factors (0 for a copy of ℤ).
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::new(self.parts.iter().flat_map(CyclicPart::invariant_factors).collect()).expect("no unit factors")
    }

    /// Coordinates of the class of a cocycle in [`Self::group`].
    pub fn class(&self, c: &Cochain) -> Result<GroupElem, SimpError> {
        if c.degree != self.degree || c.group != self.coeffs {
            return Err(SimpError::Incompatible("cochain does not match the cohomology group".into()));
        }
        let mut coords = Vec::new();
        for (f, part) in self.parts.iter().enumerate() {
            let x: Vec<BigInt> = c.values.iter().map(|v| BigInt::from(v.coords()[f])).collect();
            coords.extend(part.class(&x).ok_or_else(|| SimpError::NotCocycle(format!("{c:?}")))?);
        }
        Ok(self.group().elem(&coords)?)
    }

    /// Cocycles representing the generators of [`Self::group`], in order.
    pub fn representatives(&self, complex: &SimplicialSet) -> Vec<Cochain> {
        let mut out = Vec::new();
        let nf = self.parts.len();
        for (f, part) in self.parts.iter().enumerate() {
            for i in part.summands() {
                let x = part.representative(i);
                let values = x
                    .iter()
                    .map(|v| {
                        let mut coords = vec![0i64; nf];
                        coords[f] = v.to_i64().expect("small");
                        self.coeffs.elem(&coords).expect("rank")
                    })
                    .collect::<Vec<_>>();
                let c = if values.is_empty() {
                    Cochain::zero(complex, self.degree, &self.coeffs)
                } else {
                    Cochain::new(complex, self.degree, values).expect("shape")
                };
                out.push(c);
            }
        }
        out
    }

    /// Some `y` of degree `n−1` with `δy = c`, if `c` is a coboundary.
    pub fn transporter(&self, complex: &SimplicialSet, c: &Cochain) -> Option<Cochain> {
        if self.degree == 0 {
            return c.is_zero().then(|| Cochain::zero(complex, 0, &self.coeffs));
        }
        let k = complex.count(self.degree - 1);
        let mut coords = vec![vec![0i64; self.parts.len()]; k];
        for (f, part) in self.parts.iter().enumerate() {
            let b: Vec<BigInt> = c.values.iter().map(|v| BigInt::from(v.coords()[f])).collect();
            let y = part.solve_coboundary(&b)?;
            for (slot, v) in coords.iter_mut().zip(y) {
                slot[f] = v.to_i64()?;
            }
        }
        let y = Cochain::from_ints(complex, self.degree - 1, &self.coeffs, &coords).ok()?;
        (y.coboundary(complex) == *c).then_some(y)
    }
}

/// `Hⁿ(Σ, G)` via Smith normal forms, one cyclic factor of `G` at a time.
/// Degrees up to `DIM_CAP − 1` are supported.
pub fn cohomology(complex: &SimplicialSet, n: usize, g: &AbelianGroup) -> Result<Cohomology, SimpError> {
    if n + 1 > super::DIM_CAP {
        return Err(SimpError::Degree(n));
    }
    let parts = g.factors().iter().map(|&d| CyclicPart::new(complex, n, d)).collect();
    Ok(Cohomology { degree: n, coeffs: g.clone(), parts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> AbelianGroup {
        AbelianGroup::integers()
    }

    fn h(c: &SimplicialSet, n: usize, g: &AbelianGroup) -> Vec<u64> {
        cohomology(c, n, g).unwrap().group().factors().to_vec()
    }

    #[test]
    fn cohomology_examples() {
        let circle = SimplicialSet::circle();
        assert_eq!(h(&circle, 0, &z()), vec![0]);
        assert_eq!(h(&circle, 1, &z()), vec![0]);
        assert_eq!(h(&SimplicialSet::boundary(3), 2, &z()), vec![0]);
        assert_eq!(h(&SimplicialSet::boundary(3), 1, &z()), Vec::<u64>::new());
        for n in 1..4 {
            assert!(h(&SimplicialSet::standard(3), n, &z()).is_empty());
        }
        let torus = SimplicialSet::torus();
        assert_eq!(h(&torus, 1, &z()), vec![0, 0]);
        assert_eq!(h(&torus, 2, &z()), vec![0]);
        let rp2 = SimplicialSet::projective_plane();
        assert_eq!(h(&rp2, 2, &AbelianGroup::cyclic(2)), vec![2]);
        assert_eq!(h(&rp2, 1, &AbelianGroup::cyclic(2)), vec![2]);
        assert_eq!(h(&rp2, 2, &z()), vec![2]);
        assert!(h(&rp2, 1, &z()).is_empty());
        assert_eq!(h(&SimplicialSet::boundary(4), 3, &AbelianGroup::cyclic(3)), vec![3]);
        assert!(cohomology(&rp2, 7, &z()).is_err());
    }

    #[test]
    fn coboundary_squares_to_zero() {
        for (_, c) in SimplicialSet::test_complexes() {
            for n in 0..c.dim().saturating_sub(1) {
                let prod = coboundary(&c, n + 1).mul(&coboundary(&c, n));
                assert!((0..prod.rows()).all(|r| (0..prod.cols()).all(|k| prod.get(r, k).is_zero())));
            }
        }
    }

    #[test]
    fn classes_and_transporters() {
        let torus = SimplicialSet::torus();
        let hz = cohomology(&torus, 2, &z()).unwrap();
        let gen = &hz.representatives(&torus)[0];
        assert_eq!(hz.class(gen).unwrap().coords(), &[1]);
        let u = Cochain::from_ints(&torus, 2, &z(), &[vec![1], vec![0]]).unwrap();
        assert_eq!(hz.class(&u).unwrap().coords()[0].abs(), 1);
        let cob = Cochain::from_ints(&torus, 1, &z(), &[vec![2], vec![0], vec![1]]).unwrap().coboundary(&torus);
        assert!(hz.class(&cob).unwrap().is_zero());
        let t = hz.transporter(&torus, &cob).unwrap();
        assert_eq!(t.coboundary(&torus), cob);
        assert!(hz.transporter(&torus, &u).is_none());
    }

    #[test]
    fn coch_round_trip() {
        let rp2 = SimplicialSet::projective_plane();
        let c = Cochain::from_ints(&rp2, 2, &AbelianGroup::cyclic(2), &[vec![1], vec![0]]).unwrap();
        assert_eq!(Cochain::from_coch(&rp2, &c.to_coch(&rp2)).unwrap(), c);
        let parsed = Cochain::from_coch(&rp2, "group Z/2\nvalue T2 3\n").unwrap();
        assert_eq!(parsed.value(1).coords(), &[1]);
        assert!(Cochain::from_coch(&rp2, "group Z/2\nvalue T9 1\n").is_err());
    }
}
