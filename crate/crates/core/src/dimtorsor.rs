//! Dimensional theories and the torsor of relative dimension functions on a
//! Sato Grassmannian.
//!
//! `K₀` of finite-dimensional vector spaces is `ℤ`, so a dimensional theory
//! `χ` is determined by `χ(k)`. A relative theory `d` on `Γ(X)` is stored by
//! an anchor lattice and its value; since all lattices are commensurable,
//! `d(L) = d(B) + [L : B]·χ(k)` recovers the whole function.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

use crate::tate::{random, Lattice, TateError, TateSes, TateSpace};

#[derive(Debug, Error)]
pub enum DimError {
    #[error("bad group presentation `{0}`")]
    Parse(String),
    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(AbelianGroup, AbelianGroup),
    #[error("space mismatch")]
    SpaceMismatch,
    #[error("homomorphism does not respect relations: {0}")]
    IllDefinedHom(String),
    #[error("relative dimension axiom fails: d({v}) - d({u}) = {got}, expected {want}")]
    Verification { u: String, v: String, got: String, want: String },
    #[error(transparent)]
    Tate(#[from] TateError),
}

/// `⊕ ℤ/dᵢ`, with `dᵢ = 0` standing for a copy of `ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, DimError> {
        if factors.contains(&1) {
            return Err(DimError::Parse(format!("{factors:?}: factor 1 is trivial")));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn integers() -> Self {
        AbelianGroup { factors: vec![0] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            AbelianGroup { factors: vec![] }
        } else {
            AbelianGroup { factors: vec![n] }
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &d| (d != 0).then(|| acc * d))
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem { group: self.clone(), coords: vec![0; self.rank()] }
    }

    pub fn elem(&self, coords: &[i64]) -> Result<GroupElem, DimError> {
        if coords.len() != self.rank() {
            return Err(DimError::Parse(format!("{} coordinates for {self}", coords.len())));
        }
        Ok(GroupElem::reduced(self.clone(), coords.to_vec()))
    }

    /// The generator `(1, 0, …, 0)`; the only generator when the group is cyclic.
    pub fn one(&self) -> GroupElem {
        let mut c = vec![0; self.rank()];
        if let Some(x) = c.first_mut() {
            *x = 1;
        }
        GroupElem::reduced(self.clone(), c)
    }

    /// All elements, when the group is finite.
    pub fn elements(&self) -> Option<Vec<GroupElem>> {
        self.order()?;
        let mut out = vec![vec![]];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|c: Vec<i64>| {
                    (0..d as i64).map(move |x| {
                        let mut c = c.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(|c| GroupElem { group: self.clone(), coords: c }).collect())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|&d| if d == 0 { "Z".into() } else { format!("Z/{d}") }).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for AbelianGroup {
    type Err = DimError;

    fn from_str(s: &str) -> Result<Self, DimError> {
        let s = s.trim();
        if s == "0" {
            return Ok(AbelianGroup { factors: vec![] });
        }
        let mut factors = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            match part.strip_prefix("Z") {
                Some("") => factors.push(0),
                Some(rest) => {
                    let d = rest
                        .strip_prefix('/')
                        .and_then(|n| n.trim().parse::<u64>().ok())
                        .ok_or_else(|| DimError::Parse(s.into()))?;
                    match d {
                        0 => factors.push(0),
                        1 => {}
                        d => factors.push(d),
                    }
                }
                None => return Err(DimError::Parse(s.into())),
            }
        }
        Ok(AbelianGroup { factors })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    group: AbelianGroup,
    coords: Vec<i64>,
}

impl GroupElem {
    fn reduced(group: AbelianGroup, mut coords: Vec<i64>) -> Self {
        for (c, &d) in coords.iter_mut().zip(&group.factors) {
            if d != 0 {
                *c = c.rem_euclid(d as i64);
            }
        }
        GroupElem { group, coords }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElem) -> GroupElem {
        assert_eq!(self.group, other.group, "group mismatch");
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        GroupElem::reduced(self.group.clone(), c)
    }

    pub fn neg(&self) -> GroupElem {
        GroupElem::reduced(self.group.clone(), self.coords.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, other: &GroupElem) -> GroupElem {
        self.add(&other.neg())
    }

    pub fn times(&self, k: i64) -> GroupElem {
        GroupElem::reduced(self.group.clone(), self.coords.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords.as_slice() {
            [] => f.write_str("0"),
            [c] => write!(f, "{c}"),
            cs => {
                let parts: Vec<String> = cs.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// A homomorphism `⊕ ℤ/dⱼ → ⊕ ℤ/hᵢ` given by an integer matrix acting on
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: AbelianGroup,
    target: AbelianGroup,
    matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    /// Rejects matrices that do not send each relation `dⱼ·eⱼ = 0` to zero.
    pub fn new(source: AbelianGroup, target: AbelianGroup, matrix: Vec<Vec<i64>>) -> Result<Self, DimError> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(DimError::IllDefinedHom(format!("matrix shape does not fit {source} -> {target}")));
        }
        for (j, &d) in source.factors.iter().enumerate() {
            if d == 0 {
                continue;
            }
            for (i, &h) in target.factors.iter().enumerate() {
                let image = d as i64 * matrix[i][j];
                let killed = if h == 0 { image == 0 } else { image.rem_euclid(h as i64) == 0 };
                if !killed {
                    return Err(DimError::IllDefinedHom(format!(
                        "generator {j} of order {d} maps to {} in factor {i} of {target}",
                        matrix[i][j]
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        let n = g.rank();
        let matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        GroupHom { source: g.clone(), target: g.clone(), matrix }
    }

    pub fn source(&self) -> &AbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &AbelianGroup {
        &self.target
    }

    pub fn apply(&self, g: &GroupElem) -> Result<GroupElem, DimError> {
        if g.group != self.source {
            return Err(DimError::GroupMismatch(g.group.clone(), self.source.clone()));
        }
        let c = self.matrix.iter().map(|row| row.iter().zip(&g.coords).map(|(m, x)| m * x).sum()).collect();
        Ok(GroupElem::reduced(self.target.clone(), c))
    }
}

/// An additive function on finite-dimensional spaces: `χ(a) = dim(a)·χ(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTheory {
    generator_image: GroupElem,
}

impl DimTheory {
    pub fn new(generator_image: GroupElem) -> Self {
        DimTheory { generator_image }
    }

    /// The universal theory `dim: K₀ → ℤ`.
    pub fn universal() -> Self {
        DimTheory { generator_image: AbelianGroup::integers().one() }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.generator_image.group
    }

    pub fn generator_image(&self) -> &GroupElem {
        &self.generator_image
    }

    /// `χ` of a space of dimension `dim`; negative dimensions evaluate virtual
    /// differences.
    pub fn eval(&self, dim: i64) -> GroupElem {
        self.generator_image.times(dim)
    }
}

/// A `χ`-relative dimension theory on `Γ(X)`.
#[derive(Clone, Debug)]
pub struct RelDimTheory {
    chi: DimTheory,
    base: Lattice,
    base_value: GroupElem,
}

impl RelDimTheory {
    pub fn new(chi: DimTheory, base: Lattice, base_value: GroupElem) -> Result<Self, DimError> {
        if base_value.group != *chi.group() {
            return Err(DimError::GroupMismatch(base_value.group, chi.group().clone()));
        }
        Ok(RelDimTheory { chi, base, base_value })
    }

    /// The theory taking the value `value` on `Oⁿ`.
    pub fn standard(chi: DimTheory, space: TateSpace, value: GroupElem) -> Result<Self, DimError> {
        Self::new(chi, Lattice::standard(space, 0), value)
    }

    pub fn chi(&self) -> &DimTheory {
        &self.chi
    }

    pub fn space(&self) -> TateSpace {
        self.base.space()
    }

    pub fn base(&self) -> &Lattice {
        &self.base
    }

    pub fn base_value(&self) -> &GroupElem {
        &self.base_value
    }

    pub fn eval(&self, l: &Lattice) -> Result<GroupElem, DimError> {
        if l.space() != self.space() {
            return Err(DimError::SpaceMismatch);
        }
        Ok(self.base_value.add(&self.chi.eval(l.relative_index(&self.base)?)))
    }

    /// The same function anchored at another lattice.
    pub fn reanchor(&self, l: &Lattice) -> Result<Self, DimError> {
        Ok(RelDimTheory { chi: self.chi.clone(), base: l.clone(), base_value: self.eval(l)? })
    }

    /// `g + d`.
    pub fn act(&self, g: &GroupElem) -> Result<Self, DimError> {
        if g.group != *self.chi.group() {
            return Err(DimError::GroupMismatch(g.group.clone(), self.chi.group().clone()));
        }
        Ok(RelDimTheory { base_value: self.base_value.add(g), ..self.clone() })
    }

    fn compatible(&self, other: &RelDimTheory) -> Result<(), DimError> {
        if self.chi != other.chi {
            return Err(DimError::GroupMismatch(self.chi.group().clone(), other.chi.group().clone()));
        }
        if self.space() != other.space() {
            return Err(DimError::SpaceMismatch);
        }
        Ok(())
    }
}

impl PartialEq for RelDimTheory {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other).is_ok() && other.eval(&self.base).map(|v| v == self.base_value).unwrap_or(false)
    }
}

/// The unique `g` with `d1 = g + d2`.
pub fn torsor_difference(d1: &RelDimTheory, d2: &RelDimTheory) -> Result<GroupElem, DimError> {
    d1.compatible(d2)?;
    Ok(d1.base_value.sub(&d2.eval(&d1.base)?))
}

/// `d'(U ∩ X') + d''(U/(U ∩ X'))`, evaluated directly.
pub fn mu_eval(ses: &TateSes, d1: &RelDimTheory, d2: &RelDimTheory, u: &Lattice) -> Result<GroupElem, DimError> {
    if d1.chi != d2.chi {
        return Err(DimError::GroupMismatch(d1.chi.group().clone(), d2.chi.group().clone()));
    }
    if d1.space() != ses.source() || d2.space() != ses.quotient() || u.space() != ses.middle() {
        return Err(DimError::SpaceMismatch);
    }
    Ok(d1.eval(&ses.lift(u)?)?.add(&d2.eval(&ses.project(u)?)?))
}

const MU_SAMPLES: usize = 8;

/// The theory `μ(d', d'')` on the middle term, anchored at `Oⁿ`. Before
/// returning, the relative dimension axiom is checked on a seeded sample of
/// nested pairs.
pub fn mu_combine(ses: &TateSes, d1: &RelDimTheory, d2: &RelDimTheory) -> Result<RelDimTheory, DimError> {
    let x = ses.middle();
    let base = Lattice::standard(x, 0);
    let value = mu_eval(ses, d1, d2, &base)?;
    let mut rng = StdRng::seed_from_u64(0x6d75);
    for _ in 0..MU_SAMPLES {
        let u = random::lattice(x, -2, 2, &mut rng);
        let v = u.join(&random::lattice(x, -2, 2, &mut rng))?;
        let (du, dv) = (mu_eval(ses, d1, d2, &u)?, mu_eval(ses, d1, d2, &v)?);
        let got = dv.sub(&du);
        let want = d1.chi.eval(v.relative_index(&u)?);
        if got != want {
            return Err(DimError::Verification {
                u: u.to_string(),
                v: v.to_string(),
                got: got.to_string(),
                want: want.to_string(),
            });
        }
    }
    RelDimTheory::new(d1.chi.clone(), base, value)
}

/// `φ_* d`: post-compose both `χ` and `d` with `φ`.
pub fn pushout_along(hom: &GroupHom, d: &RelDimTheory) -> Result<RelDimTheory, DimError> {
    let chi = DimTheory::new(hom.apply(d.chi.generator_image())?);
    RelDimTheory::new(chi, d.base.clone(), hom.apply(&d.base_value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    fn z() -> AbelianGroup {
        AbelianGroup::integers()
    }

    fn std_theory(space: TateSpace, v: i64) -> RelDimTheory {
        RelDimTheory::standard(DimTheory::universal(), space, z().elem(&[v]).unwrap()).unwrap()
    }

    #[test]
    fn group_parsing() {
        assert_eq!("Z".parse::<AbelianGroup>().unwrap().factors(), &[0]);
        assert_eq!("Z+Z/2".parse::<AbelianGroup>().unwrap().factors(), &[0, 2]);
        assert_eq!("Z/6".parse::<AbelianGroup>().unwrap().to_string(), "Z/6");
        assert_eq!("0".parse::<AbelianGroup>().unwrap().order(), Some(1));
        assert!("Q".parse::<AbelianGroup>().is_err());
        assert!("Z/".parse::<AbelianGroup>().is_err());
        assert_eq!("Z/2+Z/3".parse::<AbelianGroup>().unwrap().elements().unwrap().len(), 6);
    }

    #[test]
    fn eval_examples() {
        let x = TateSpace::new(Field::Prime(2), 1);
        let d = std_theory(x, 0);
        assert_eq!(d.eval(d.base()).unwrap(), z().zero());
        assert_eq!(d.eval(&Lattice::standard(x, -2)).unwrap().coords(), &[2]);
        let z3 = AbelianGroup::cyclic(3);
        let d3 = RelDimTheory::standard(DimTheory::new(z3.one()), x, z3.zero()).unwrap();
        assert_eq!(d3.eval(&Lattice::standard(x, -5)).unwrap().coords(), &[2]);
        let other = TateSpace::new(Field::Prime(2), 2);
        assert!(matches!(d.eval(&Lattice::standard(other, 0)), Err(DimError::SpaceMismatch)));
    }

    #[test]
    fn reanchoring_preserves_the_function() {
        let x = TateSpace::new(Field::Prime(3), 2);
        let d = std_theory(x, 4);
        let e = d.reanchor(&Lattice::diagonal(x, &[-3, 1])).unwrap();
        for a in -2..3 {
            let l = Lattice::diagonal(x, &[a, 1 - a]);
            assert_eq!(d.eval(&l).unwrap(), e.eval(&l).unwrap());
        }
        assert_eq!(d, e);
    }

    #[test]
    fn difference_examples() {
        let x = TateSpace::new(Field::Prime(2), 1);
        assert!(torsor_difference(&std_theory(x, 1), &std_theory(x, 1)).unwrap().is_zero());
        assert_eq!(torsor_difference(&std_theory(x, 4), &std_theory(x, 1)).unwrap().coords(), &[3]);
        let d2 = RelDimTheory::new(DimTheory::universal(), Lattice::standard(x, -1), z().zero()).unwrap();
        assert_eq!(torsor_difference(&std_theory(x, 0), &d2).unwrap().coords(), &[1]);
    }

    #[test]
    fn mu_examples() {
        let f = Field::Prime(2);
        let ses = TateSes::split(f, 1, 1);
        let x1 = TateSpace::new(f, 1);
        let x = ses.middle();
        let d = mu_combine(&ses, &std_theory(x1, 0), &std_theory(x1, 0)).unwrap();
        assert!(d.eval(&Lattice::diagonal(x, &[-1, 1])).unwrap().is_zero());
        assert!(d.eval(&Lattice::standard(x, 0)).unwrap().is_zero());
        let d = mu_combine(&ses, &std_theory(x1, 5), &std_theory(x1, -3)).unwrap();
        assert_eq!(d.eval(&Lattice::standard(x, 0)).unwrap().coords(), &[2]);
    }

    #[test]
    fn pushout_examples() {
        let x = TateSpace::new(Field::Prime(2), 1);
        let d = std_theory(x, 3);
        assert_eq!(pushout_along(&GroupHom::identity(&z()), &d).unwrap(), d);
        let double = GroupHom::new(z(), z(), vec![vec![2]]).unwrap();
        assert_eq!(pushout_along(&double, &d).unwrap().base_value().coords(), &[6]);
        let reduce = GroupHom::new(z(), AbelianGroup::cyclic(2), vec![vec![1]]).unwrap();
        let e = pushout_along(&reduce, &d).unwrap();
        assert_eq!(e.base_value().coords(), &[1]);
        let l = Lattice::standard(x, -3);
        assert_eq!(e.eval(&l).unwrap(), reduce.apply(&d.eval(&l).unwrap()).unwrap());
        assert!(GroupHom::new(AbelianGroup::cyclic(2), z(), vec![vec![1]]).is_err());
        assert!(GroupHom::new(AbelianGroup::cyclic(4), AbelianGroup::cyclic(2), vec![vec![1]]).is_ok());
        assert!(GroupHom::new(AbelianGroup::cyclic(3), AbelianGroup::cyclic(6), vec![vec![1]]).is_err());
    }

    #[test]
    fn action_is_free() {
        let x = TateSpace::new(Field::Prime(2), 1);
        let g = AbelianGroup::cyclic(4);
        let d = RelDimTheory::standard(DimTheory::new(g.one()), x, g.zero()).unwrap();
        for h in g.elements().unwrap() {
            let e = d.act(&h).unwrap();
            assert_eq!(e == d, h.is_zero());
            assert_eq!(torsor_difference(&e, &d).unwrap(), h);
        }
    }
}
