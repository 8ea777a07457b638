use std::collections::HashMap;
use std::fmt::Write as _;

use super::SimpError;

/// Highest simplex dimension accepted.
pub const DIM_CAP: usize = 5;

/// A finite Δ-complex: named simplices in each dimension with face maps
/// `∂ᵢ: Σₙ → Σₙ₋₁` satisfying `∂ᵢ∂ⱼ = ∂ⱼ₋₁∂ᵢ` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    names: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
    index: HashMap<String, (usize, usize)>,
}

impl SimplicialSet {
    /// Validate raw data: `simplices[d]` lists `(name, face names)` of the
    /// `d`-simplices, with `d + 1` faces for `d > 0`.
    pub fn new(simplices: Vec<Vec<(String, Vec<String>)>>) -> Result<Self, SimpError> {
        if simplices.len() > DIM_CAP + 1 {
            return Err(SimpError::TooDeep(simplices.len() - 1));
        }
        let mut index = HashMap::new();
        for (d, level) in simplices.iter().enumerate() {
            for (k, (name, _)) in level.iter().enumerate() {
                if index.insert(name.clone(), (d, k)).is_some() {
                    return Err(SimpError::Parse { line: 0, msg: format!("duplicate simplex `{name}`") });
                }
            }
        }
        let mut names = Vec::new();
        let mut faces = Vec::new();
        for (d, level) in simplices.into_iter().enumerate() {
            let mut lvl_names = Vec::new();
            let mut lvl_faces = Vec::new();
            for (name, fs) in level {
                let expected = if d == 0 { 0 } else { d + 1 };
                if fs.len() != expected {
                    return Err(SimpError::WrongDimension(name, fs.len().saturating_sub(1), d));
                }
                let ids = fs
                    .iter()
                    .map(|f| match index.get(f) {
                        Some(&(fd, k)) if fd + 1 == d => Ok(k),
                        Some(&(fd, _)) => Err(SimpError::WrongDimension(f.clone(), fd, d - 1)),
                        None => Err(SimpError::Dangling { simplex: name.clone(), face: f.clone() }),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                lvl_names.push(name);
                lvl_faces.push(ids);
            }
            names.push(lvl_names);
            faces.push(lvl_faces);
        }
        let s = SimplicialSet { names, faces, index };
        s.check_identities()?;
        Ok(s)
    }

    fn check_identities(&self) -> Result<(), SimpError> {
        for d in 2..self.names.len() {
            for k in 0..self.count(d) {
                for j in 1..=d {
                    for i in 0..j {
                        let a = self.face(d - 1, self.face(d, k, j), i);
                        let b = self.face(d - 1, self.face(d, k, i), j - 1);
                        if a != b {
                            return Err(SimpError::Identity { simplex: self.names[d][k].clone(), i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Top dimension (−1 encoded as 0 for the empty complex).
    pub fn dim(&self) -> usize {
        self.names.len().saturating_sub(1)
    }

    pub fn count(&self, d: usize) -> usize {
        self.names.get(d).map_or(0, Vec::len)
    }

    pub fn name(&self, d: usize, k: usize) -> &str {
        &self.names[d][k]
    }

    pub fn names(&self, d: usize) -> &[String] {
        self.names.get(d).map_or(&[], Vec::as_slice)
    }

    /// `∂ᵢ` of the `k`-th `d`-simplex, as an index among `(d−1)`-simplices.
    pub fn face(&self, d: usize, k: usize, i: usize) -> usize {
        self.faces[d][k][i]
    }

    pub fn faces(&self, d: usize, k: usize) -> &[usize] {
        &self.faces[d][k]
    }

    pub fn lookup(&self, name: &str) -> Option<(usize, usize)> {
        self.index.get(name).copied()
    }

    /// Parse the `.sset` format: `simplex <dim> <id> [faces <id_0> … <id_dim>]`.
    pub fn from_sset(text: &str) -> Result<Self, SimpError> {
        let mut levels: Vec<Vec<(String, Vec<String>)>> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| SimpError::Parse { line: ln + 1, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] != "simplex" || toks.len() < 3 {
                return Err(err("expected `simplex <dim> <id> [faces ...]`"));
            }
            let d: usize = toks[1].parse().map_err(|_| err("bad dimension"))?;
            if d > DIM_CAP {
                return Err(SimpError::TooDeep(d));
            }
            let faces = match toks.get(3) {
                None => vec![],
                Some(&"faces") => toks[4..].iter().map(|s| s.to_string()).collect(),
                Some(_) => return Err(err("expected `faces`")),
            };
            if d > 0 && faces.len() != d + 1 {
                return Err(err(&format!("a {d}-simplex needs {} faces", d + 1)));
            }
            if d == 0 && !faces.is_empty() {
                return Err(err("vertices have no faces"));
            }
            if levels.len() <= d {
                levels.resize(d + 1, Vec::new());
            }
            levels[d].push((toks[2].to_string(), faces));
        }
        Self::new(levels)
    }

    pub fn to_sset(&self) -> String {
        let mut out = String::new();
        for d in 0..self.names.len() {
            for k in 0..self.count(d) {
                let _ = write!(out, "simplex {d} {}", self.names[d][k]);
                if d > 0 {
                    out.push_str(" faces");
                    for &f in &self.faces[d][k] {
                        let _ = write!(out, " {}", self.names[d - 1][f]);
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    fn from_vertex_sets(sets: Vec<Vec<usize>>) -> Self {
        let name = |s: &[usize]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("");
        let top = sets.iter().map(Vec::len).max().unwrap_or(0);
        let mut levels: Vec<Vec<(String, Vec<String>)>> = vec![Vec::new(); top];
        for s in &sets {
            let faces = if s.len() == 1 {
                vec![]
            } else {
                (0..s.len())
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        name(&f)
                    })
                    .collect()
            };
            levels[s.len() - 1].push((name(s), faces));
        }
        Self::new(levels).expect("ordered simplicial complex")
    }

    fn subsets(n: usize, include_full: bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << (n + 1)) {
            if !include_full && mask == (1 << (n + 1)) - 1 {
                continue;
            }
            out.push((0..=n).filter(|v| mask & (1 << v) != 0).collect());
        }
        out.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
        out
    }

    /// The standard simplex `Δⁿ`; vertices are named `0, …, n`.
    pub fn standard(n: usize) -> Self {
        Self::from_vertex_sets(Self::subsets(n, true))
    }

    /// `∂Δⁿ`, a simplicial `(n−1)`-sphere.
    pub fn boundary(n: usize) -> Self {
        Self::from_vertex_sets(Self::subsets(n, false))
    }

    /// The triangle boundary: a circle with three vertices and three edges.
    pub fn circle() -> Self {
        Self::boundary(2)
    }

    /// One vertex, edges `a, b, c`, triangles `U = (a, c, b)` and `L = (b, c, a)`.
    pub fn torus() -> Self {
        let s = |x: &str| x.to_string();
        let e = |n: &str| (s(n), vec![s("v"), s("v")]);
        Self::new(vec![
            vec![(s("v"), vec![])],
            vec![e("a"), e("b"), e("c")],
            vec![(s("U"), vec![s("a"), s("c"), s("b")]), (s("L"), vec![s("b"), s("c"), s("a")])],
        ])
        .expect("torus")
    }

    /// Vertices `v, w`; edges `a, b: v → w`, `c: w → w`; triangles
    /// `T1 = (c, b, a)` and `T2 = (c, a, b)`.
    pub fn projective_plane() -> Self {
        let s = |x: &str| x.to_string();
        Self::new(vec![
            vec![(s("v"), vec![]), (s("w"), vec![])],
            vec![(s("a"), vec![s("w"), s("v")]), (s("b"), vec![s("w"), s("v")]), (s("c"), vec![s("w"), s("w")])],
            vec![(s("T1"), vec![s("c"), s("b"), s("a")]), (s("T2"), vec![s("c"), s("a"), s("b")])],
        ])
        .expect("projective plane")
    }

    /// A complex by name: `circle`, `torus`, `rp2`, `simplex<n>`, `sphere<n>`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "circle" => Some(Self::circle()),
            "torus" => Some(Self::torus()),
            "rp2" => Some(Self::projective_plane()),
            _ => {
                if let Some(n) = name.strip_prefix("simplex").and_then(|n| n.parse::<usize>().ok()) {
                    (n <= DIM_CAP).then(|| Self::standard(n))
                } else if let Some(n) = name.strip_prefix("sphere").and_then(|n| n.parse::<usize>().ok()) {
                    (1..DIM_CAP).contains(&n).then(|| Self::boundary(n + 1))
                } else {
                    None
                }
            }
        }
    }

    /// All builtin test complexes.
    pub fn test_complexes() -> Vec<(&'static str, Self)> {
        vec![
            ("circle", Self::circle()),
            ("sphere2", Self::boundary(3)),
            ("sphere3", Self::boundary(4)),
            ("simplex2", Self::standard(2)),
            ("simplex3", Self::standard(3)),
            ("simplex4", Self::standard(4)),
            ("torus", Self::torus()),
            ("rp2", Self::projective_plane()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_and_boundary_counts() {
        let d3 = SimplicialSet::standard(3);
        assert_eq!((0..=3).map(|d| d3.count(d)).collect::<Vec<_>>(), vec![4, 6, 4, 1]);
        let s = SimplicialSet::boundary(4);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.count(3), 5);
        assert_eq!(s.name(1, 0), "01");
        assert_eq!(s.name(0, s.face(1, 0, 0)), "1");
    }

    #[test]
    fn validation_examples() {
        assert!(SimplicialSet::from_sset(&SimplicialSet::standard(2).to_sset()).is_ok());
        let corrupted = SimplicialSet::standard(2).to_sset().replace("faces 12 02 01", "faces 12 01 01");
        match SimplicialSet::from_sset(&corrupted) {
            Err(SimpError::Identity { i, j, .. }) => assert_eq!((i, j), (0, 1)),
            other => panic!("unexpected {other:?}"),
        }
        SimplicialSet::torus();
        SimplicialSet::projective_plane();
        assert!(matches!(
            SimplicialSet::from_sset("simplex 0 v\nsimplex 1 e faces v x\n"),
            Err(SimpError::Dangling { .. })
        ));
        assert!(matches!(SimplicialSet::from_sset("simplex 1 e faces"), Err(SimpError::Parse { line: 1, .. })));
    }

    #[test]
    fn round_trip() {
        for (_, c) in SimplicialSet::test_complexes() {
            assert_eq!(SimplicialSet::from_sset(&c.to_sset()).unwrap(), c);
        }
    }
}
