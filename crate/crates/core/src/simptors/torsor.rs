use super::{cohomology, Cochain, SimpError, SimplicialSet};
use crate::dimtorsor::{AbelianGroup, GroupElem};

/// A torsor morphism in trivialized form: translation by `value` from
/// `⊗ T_dom` to `⊗ T_cod`. Factors are simplex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub value: GroupElem,
}

/// Result of pasting a sequence of steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub value: GroupElem,
}

impl Composite {
    fn sorted(mut self) -> Self {
        self.dom.sort_unstable();
        self.cod.sort_unstable();
        self
    }
}

/// Paste steps in application order: each step consumes the factors of its
/// domain present in the current object, tensors the composite's domain with
/// the missing ones, and appends its codomain.
pub fn paste(group: &AbelianGroup, steps: &[Step]) -> Composite {
    let mut dom = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut value = group.zero();
    for s in steps {
        for f in &s.dom {
            match current.iter().position(|x| x == f) {
                Some(p) => {
                    current.remove(p);
                }
                None => dom.push(*f),
            }
        }
        current.extend(&s.cod);
        value = value.add(&s.value);
    }
    Composite { dom, cod: current, value }.sorted()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// The Street decomposition of a simplex, as sorted multisets of indices of
/// faces (first order) or faces of faces (second order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreetBoundaries {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub plus_plus: Vec<usize>,
    pub plus_minus: Vec<usize>,
    pub minus_plus: Vec<usize>,
    pub minus_minus: Vec<usize>,
}

impl StreetBoundaries {
    /// `∂₊₊ ⊎ ∂₋₋ = ∂₊₋ ⊎ ∂₋₊`.
    pub fn balanced(&self) -> bool {
        let mut a = [self.plus_plus.clone(), self.minus_minus.clone()].concat();
        let mut b = [self.plus_minus.clone(), self.minus_plus.clone()].concat();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

fn parity_faces(complex: &SimplicialSet, d: usize, k: usize, parity: usize) -> Vec<usize> {
    complex.faces(d, k).iter().enumerate().filter(|(i, _)| i % 2 == parity).map(|(_, &f)| f).collect()
}

pub fn street_boundaries(complex: &SimplicialSet, d: usize, k: usize) -> Result<StreetBoundaries, SimpError> {
    if d < 2 {
        return Err(SimpError::WrongDimension(complex.name(d, k).into(), d, 2));
    }
    let second = |outer: usize, inner: usize| {
        sorted(
            parity_faces(complex, d, k, outer)
                .into_iter()
                .flat_map(|f| parity_faces(complex, d - 1, f, inner))
                .collect(),
        )
    };
    Ok(StreetBoundaries {
        plus: sorted(parity_faces(complex, d, k, 0)),
        minus: sorted(parity_faces(complex, d, k, 1)),
        plus_plus: second(0, 0),
        plus_minus: second(1, 0),
        minus_plus: second(0, 1),
        minus_minus: second(1, 1),
    })
}

/// A degree-`n` multiplicative `G`-torsor with every `T_ρ` identified with
/// `G` by its anchor. `alpha(σ)` is the translation representing
/// `α_σ: ⊗ T_{∂₂ᵢσ} → ⊗ T_{∂₂ᵢ₊₁σ}` in those coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTorsorRep {
    complex: SimplicialSet,
    degree: usize,
    anchors: Cochain,
    alpha: Cochain,
}

impl MultTorsorRep {
    pub fn new(complex: SimplicialSet, degree: usize, alpha: Cochain) -> Result<Self, SimpError> {
        if alpha.degree() != degree + 1 {
            return Err(SimpError::WrongDimension("alpha".into(), alpha.degree(), degree + 1));
        }
        if degree + 2 > super::DIM_CAP {
            return Err(SimpError::Degree(degree));
        }
        let anchors = Cochain::zero(&complex, degree, alpha.group());
        Ok(MultTorsorRep { complex, degree, anchors, alpha })
    }

    pub fn complex(&self) -> &SimplicialSet {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &AbelianGroup {
        self.alpha.group()
    }

    pub fn anchors(&self) -> &Cochain {
        &self.anchors
    }

    pub fn alpha(&self) -> &Cochain {
        &self.alpha
    }

    /// The same torsor seen through different base points.
    pub fn reanchor(&self, anchors: &Cochain) -> Result<Self, SimpError> {
        let shift = anchors.sub(&self.anchors)?;
        Ok(MultTorsorRep {
            complex: self.complex.clone(),
            degree: self.degree,
            anchors: anchors.clone(),
            alpha: self.alpha.add(&shift.coboundary(&self.complex))?,
        })
    }

    fn step(&self, sigma: usize) -> Step {
        let d = self.degree + 1;
        Step {
            dom: parity_faces(&self.complex, d, sigma, 0),
            cod: parity_faces(&self.complex, d, sigma, 1),
            value: self.alpha.value(sigma).clone(),
        }
    }
}

fn even_odd_steps(complex: &SimplicialSet, d: usize, tau: usize) -> (Vec<usize>, Vec<usize>) {
    let faces = complex.faces(d, tau);
    let even = (0..faces.len()).step_by(2).map(|i| faces[i]).collect();
    let odd = (1..faces.len()).step_by(2).rev().map(|i| faces[i]).collect();
    (even, odd)
}

/// `(E_τ, O_τ)` for an `(n+2)`-simplex `τ`, computed by pasting. Fails if the
/// two composites do not have the same source and target.
pub fn evaluate_even_odd(t: &MultTorsorRep, tau: usize) -> Result<(Composite, Composite), SimpError> {
    let d = t.degree + 2;
    if tau >= t.complex.count(d) {
        return Err(SimpError::Unknown(format!("{d}-simplex #{tau}")));
    }
    let (even, odd) = even_odd_steps(&t.complex, d, tau);
    let e = paste(t.group(), &even.iter().map(|&s| t.step(s)).collect::<Vec<_>>());
    let o = paste(t.group(), &odd.iter().map(|&s| t.step(s)).collect::<Vec<_>>());
    if e.dom != o.dom || e.cod != o.cod {
        return Err(SimpError::Incompatible(format!("E and O differ in shape on `{}`", t.complex.name(d, tau))));
    }
    Ok((e, o))
}

/// `E_τ` and `O_τ` as formal sums over the `(n+1)`-simplices.
pub fn symbolic_even_odd(
    complex: &SimplicialSet,
    degree: usize,
    tau: usize,
) -> Result<(Vec<i64>, Vec<i64>), SimpError> {
    let m = complex.count(degree + 1);
    let free = AbelianGroup::new(vec![0; m])?;
    let mut values = Vec::with_capacity(m);
    for s in 0..m {
        let mut e = vec![0; m];
        e[s] = 1;
        values.push(free.elem(&e)?);
    }
    let alpha =
        if m == 0 { Cochain::zero(complex, degree + 1, &free) } else { Cochain::new(complex, degree + 1, values)? };
    let t = MultTorsorRep::new(complex.clone(), degree, alpha)?;
    let (e, o) = evaluate_even_odd(&t, tau)?;
    Ok((e.value.coords().to_vec(), o.value.coords().to_vec()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorReport {
    /// `(τ, E_τ, O_τ)` for each violated cocycle condition.
    pub violations: Vec<(String, GroupElem, GroupElem)>,
    pub checked: usize,
}

impl TorsorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_mult_torsor(t: &MultTorsorRep) -> Result<TorsorReport, SimpError> {
    let d = t.degree + 2;
    let mut violations = Vec::new();
    for tau in 0..t.complex.count(d) {
        let (e, o) = evaluate_even_odd(t, tau)?;
        if e.value != o.value {
            violations.push((t.complex.name(d, tau).to_string(), e.value, o.value));
        }
    }
    Ok(TorsorReport { violations, checked: t.complex.count(d) })
}

/// Coordinates of the class of `t` in `H^{n+1}(Σ, G)`.
pub fn classify_torsor(t: &MultTorsorRep) -> Result<GroupElem, SimpError> {
    if !check_mult_torsor(t)?.passed() {
        return Err(SimpError::NotCocycle("alpha violates E = O".into()));
    }
    cohomology(&t.complex, t.degree + 1, t.group())?.class(&t.alpha)
}

/// A family `x_ρ ∈ G` of translations `T₁,ρ → T₂,ρ` commuting with the α's,
/// i.e. with `δx = alpha₁ − alpha₂`, if one exists.
pub fn iso_decide(t1: &MultTorsorRep, t2: &MultTorsorRep) -> Result<Option<Cochain>, SimpError> {
    if t1.complex != t2.complex || t1.degree != t2.degree || t1.group() != t2.group() {
        return Err(SimpError::Incompatible("torsors over different data".into()));
    }
    let diff = t1.alpha.sub(&t2.alpha)?;
    let h = cohomology(&t1.complex, t1.degree + 1, t1.group())?;
    Ok(h.transporter(&t1.complex, &diff))
}

/// A multiplicative `G`-gerbe with trivialized gerbes and equivalences; what
/// remains is the 2-morphism `β_τ` on each 3-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerbeRep {
    pub complex: SimplicialSet,
    pub beta: Cochain,
}

impl GerbeRep {
    pub fn new(complex: SimplicialSet, beta: Cochain) -> Result<Self, SimpError> {
        if beta.degree() != 3 {
            return Err(SimpError::WrongDimension("beta".into(), beta.degree(), 3));
        }
        Ok(GerbeRep { complex, beta })
    }

    /// `β_{∂₄υ}·β_{∂₂υ}·β_{∂₀υ} = β_{∂₁υ}·β_{∂₃υ}` on every 4-simplex.
    pub fn is_valid(&self) -> bool {
        self.beta.coboundary(&self.complex).is_zero()
    }
}

/// The degree-2 torsor `T_σ = Hom(α_σ(x₀ ⊗ x₂), x₁)` with `β` acting between
/// the pasted composites. Trivialized, `T_σ` is `G` and `α_τ` is `β_τ`.
pub fn gerbe_to_torsor(g: &GerbeRep) -> Result<MultTorsorRep, SimpError> {
    if !g.is_valid() {
        return Err(SimpError::NotCocycle("beta fails the 4-simplex condition".into()));
    }
    MultTorsorRep::new(g.complex.clone(), 2, g.beta.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cochain(c: &SimplicialSet, n: usize, g: &AbelianGroup, rng: &mut ChaCha8Rng) -> Cochain {
        let ints: Vec<Vec<i64>> =
            (0..c.count(n)).map(|_| g.factors().iter().map(|_| rng.gen_range(-3..=3)).collect()).collect();
        Cochain::from_ints(c, n, g, &ints).unwrap()
    }

    #[test]
    fn street_decomposition() {
        let d2 = SimplicialSet::standard(2);
        let s = street_boundaries(&d2, 2, 0).unwrap();
        let names = |v: &[usize]| v.iter().map(|&k| d2.name(1, k).to_string()).collect::<Vec<_>>();
        assert_eq!(names(&s.plus), vec!["01", "12"]);
        assert_eq!(names(&s.minus), vec!["02"]);
        for (_, c) in SimplicialSet::test_complexes() {
            for d in 2..=c.dim() {
                for k in 0..c.count(d) {
                    assert!(street_boundaries(&c, d, k).unwrap().balanced());
                }
            }
        }
        let d3 = SimplicialSet::standard(3);
        let s = street_boundaries(&d3, 3, 0).unwrap();
        assert_ne!(s.plus_plus, s.minus_minus);
        assert!(street_boundaries(&d3, 1, 0).is_err());
    }

    #[test]
    fn pasting_rule() {
        let g = AbelianGroup::cyclic(5);
        let f = Step { dom: vec![0], cod: vec![1, 2], value: g.elem(&[1]).unwrap() };
        let h = Step { dom: vec![1, 3], cod: vec![4], value: g.elem(&[3]).unwrap() };
        let c = paste(&g, &[f, h]);
        assert_eq!((c.dom, c.cod, c.value.coords()[0]), (vec![0, 3], vec![2, 4], 4));
        assert!(paste(&g, &[]).value.is_zero());
    }

    #[test]
    fn even_minus_odd_is_coboundary() {
        for (_, c) in SimplicialSet::test_complexes() {
            for n in 0..=2 {
                let delta = super::super::coboundary(&c, n + 1);
                for tau in 0..c.count(n + 2) {
                    let (e, o) = symbolic_even_odd(&c, n, tau).unwrap();
                    for s in 0..c.count(n + 1) {
                        assert_eq!(num_bigint::BigInt::from(e[s] - o[s]), *delta.get(tau, s));
                    }
                }
            }
        }
    }

    #[test]
    fn cocycle_condition_and_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = AbelianGroup::integers();
        let c = SimplicialSet::standard(4);
        for n in 0..=2 {
            let zero = MultTorsorRep::new(c.clone(), n, Cochain::zero(&c, n + 1, &z)).unwrap();
            assert!(check_mult_torsor(&zero).unwrap().passed());
            let cob = random_cochain(&c, n, &z, &mut rng).coboundary(&c);
            assert!(check_mult_torsor(&MultTorsorRep::new(c.clone(), n, cob).unwrap()).unwrap().passed());
            let mut bad = Cochain::zero(&c, n + 1, &z);
            bad.set(0, z.elem(&[1]).unwrap());
            let report = check_mult_torsor(&MultTorsorRep::new(c.clone(), n, bad).unwrap()).unwrap();
            assert!(!report.violations.is_empty());
            for (_, e, o) in &report.violations {
                assert_ne!(e, o);
            }
        }
    }

    #[test]
    fn degree_zero_is_additivity() {
        let c = SimplicialSet::standard(2);
        let z = AbelianGroup::integers();
        // chi(01) + chi(12) = chi(02) for dimensions 2, 3, 5.
        let alpha = Cochain::from_ints(&c, 1, &z, &[vec![2], vec![5], vec![3]]).unwrap();
        let t = MultTorsorRep::new(c.clone(), 0, alpha).unwrap();
        let (e, o) = evaluate_even_odd(&t, 0).unwrap();
        assert_eq!((e.value.coords()[0], o.value.coords()[0]), (5, 5));
    }

    #[test]
    fn classification_and_anchor_independence() {
        let torus = SimplicialSet::torus();
        let z = AbelianGroup::integers();
        let gen = Cochain::from_ints(&torus, 2, &z, &[vec![1], vec![0]]).unwrap();
        let t = MultTorsorRep::new(torus.clone(), 1, gen).unwrap();
        assert_eq!(classify_torsor(&t).unwrap().coords()[0].abs(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let anchors = random_cochain(&torus, 1, &z, &mut rng);
            let moved = t.reanchor(&anchors).unwrap();
            assert_eq!(classify_torsor(&moved).unwrap(), classify_torsor(&t).unwrap());
            let x = iso_decide(&moved, &t).unwrap().unwrap();
            assert_eq!(x.coboundary(&torus), moved.alpha().sub(t.alpha()).unwrap());
        }
        let zero = MultTorsorRep::new(torus.clone(), 1, Cochain::zero(&torus, 2, &z)).unwrap();
        assert!(classify_torsor(&zero).unwrap().is_zero());
        assert!(iso_decide(&t, &zero).unwrap().is_none());
    }

    #[test]
    fn iso_classes_match_cohomology_exhaustively() {
        let g = AbelianGroup::cyclic(2);
        for (name, c) in SimplicialSet::test_complexes() {
            for n in 0..c.dim().min(3) {
                let m = c.count(n + 1);
                if m > 10 {
                    continue;
                }
                let cocycles: Vec<MultTorsorRep> = (0u32..1 << m)
                    .map(|mask| {
                        let ints: Vec<Vec<i64>> = (0..m).map(|i| vec![i64::from((mask >> i) & 1)]).collect();
                        MultTorsorRep::new(c.clone(), n, Cochain::from_ints(&c, n + 1, &g, &ints).unwrap()).unwrap()
                    })
                    .filter(|t| check_mult_torsor(t).unwrap().passed())
                    .collect();
                let mut reps: Vec<&MultTorsorRep> = Vec::new();
                for t in &cocycles {
                    let known = reps.iter().find(|r| iso_decide(t, r).unwrap().is_some());
                    match known {
                        Some(r) => assert_eq!(classify_torsor(t).unwrap(), classify_torsor(r).unwrap()),
                        None => {
                            for r in &reps {
                                assert_ne!(classify_torsor(t).unwrap(), classify_torsor(r).unwrap());
                            }
                            reps.push(t);
                        }
                    }
                }
                let h = cohomology(&c, n + 1, &g).unwrap().group();
                assert_eq!(reps.len() as u64, h.order().unwrap(), "{name} degree {n}");
            }
        }
    }

    #[test]
    fn gerbes() {
        let g = AbelianGroup::cyclic(3);
        let s3 = SimplicialSet::boundary(4);
        let trivial = GerbeRep::new(s3.clone(), Cochain::zero(&s3, 3, &g)).unwrap();
        assert!(classify_torsor(&gerbe_to_torsor(&trivial).unwrap()).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d4 = SimplicialSet::standard(4);
        let cob = GerbeRep::new(d4.clone(), random_cochain(&d4, 2, &g, &mut rng).coboundary(&d4)).unwrap();
        let t = gerbe_to_torsor(&cob).unwrap();
        assert!(check_mult_torsor(&t).unwrap().passed());
        assert!(classify_torsor(&t).unwrap().is_zero());
        let mut beta = Cochain::zero(&s3, 3, &g);
        beta.set(0, g.elem(&[1]).unwrap());
        let t = gerbe_to_torsor(&GerbeRep::new(s3.clone(), beta).unwrap()).unwrap();
        assert!(check_mult_torsor(&t).unwrap().passed());
        assert!(!classify_torsor(&t).unwrap().is_zero());
        let mut bad = Cochain::zero(&d4, 3, &g);
        bad.set(0, g.elem(&[1]).unwrap());
        assert!(gerbe_to_torsor(&GerbeRep::new(d4, bad).unwrap()).is_err());
    }
}
