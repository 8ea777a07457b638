use std::fmt;

use crate::exactlin::{Field, Matrix, Scalar, Subspace};

use super::laurent::{header_value, parse_header, LaurentMatrix};
use super::TateError;

/// The Tate space `k((t))^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TateSpace {
    pub rank: usize,
    pub field: Field,
}

impl TateSpace {
    /// Rank zero is allowed: it is the target of the sequence `X ≅ X ↠ 0`.
    pub fn new(field: Field, rank: usize) -> Self {
        TateSpace { rank, field }
    }
}

/// A lattice `L` with `t^hi O^n ⊆ L ⊆ t^lo O^n`, stored as the subspace
/// `L / t^hi O^n` of the window `t^lo O^n / t^hi O^n`.
///
/// Window coordinates are the monomials `t^e u_i`, ordered by `e` and then `i`,
/// so `t^e u_i` sits at index `(e - lo) * n + i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    space: TateSpace,
    lo: i64,
    hi: i64,
    sub: Subspace,
}

fn window_len(space: TateSpace, lo: i64, hi: i64) -> usize {
    (hi - lo) as usize * space.rank
}

impl Lattice {
    /// Build and normalize. `basis` rows are vectors in window coordinates.
    pub fn normalize(space: TateSpace, lo: i64, hi: i64, basis: &Matrix) -> Result<Lattice, TateError> {
        if lo > hi {
            return Err(TateError::Bounds(lo, hi));
        }
        let len = window_len(space, lo, hi);
        if basis.cols() != len {
            return Err(TateError::Shape(format!(
                "basis vectors have {} coordinates but the window has {len}",
                basis.cols()
            )));
        }
        if basis.field() != space.field {
            return Err(TateError::FieldMismatch);
        }
        Ok(Self::from_subspace(space, lo, hi, Subspace::from_matrix(basis)))
    }

    pub(crate) fn from_subspace(space: TateSpace, mut lo: i64, mut hi: i64, mut sub: Subspace) -> Lattice {
        let n = space.rank;
        let f = space.field;
        if n == 0 {
            return Lattice { space, lo: 0, hi: 0, sub: Subspace::zero(f, 0) };
        }
        // lower hi while the top block t^{hi-1} u_* lies in L
        while hi > lo {
            let base = (hi - 1 - lo) as usize * n;
            let full_block = (0..n).all(|i| {
                let mut e = vec![f.zero(); sub.ambient_dim()];
                e[base + i] = f.one();
                sub.contains_vector(&e)
            });
            if !full_block {
                break;
            }
            let keep: Vec<usize> = (0..base).collect();
            sub = Subspace::from_matrix(&sub.basis().select_cols(&keep));
            hi -= 1;
        }
        // raise lo while every vector vanishes on the bottom block
        while hi > lo {
            let b = sub.basis();
            let zero_block = (0..b.rows()).all(|r| (0..n).all(|i| b.get(r, i).is_zero()));
            if !zero_block {
                break;
            }
            let keep: Vec<usize> = (n..sub.ambient_dim()).collect();
            sub = Subspace::from_matrix(&b.select_cols(&keep));
            lo += 1;
        }
        Lattice { space, lo, hi, sub }
    }

    /// `t^a O^n`.
    pub fn standard(space: TateSpace, a: i64) -> Lattice {
        Self::from_subspace(space, a, a, Subspace::zero(space.field, 0))
    }

    /// `⊕ t^{a_i} O`.
    pub fn diagonal(space: TateSpace, exps: &[i64]) -> Lattice {
        assert_eq!(exps.len(), space.rank);
        if exps.is_empty() {
            return Self::standard(space, 0);
        }
        let lo = *exps.iter().min().unwrap();
        let hi = *exps.iter().max().unwrap();
        let n = space.rank;
        let mut idx = Vec::new();
        for e in lo..hi {
            for (i, &a) in exps.iter().enumerate() {
                if a <= e {
                    idx.push((e - lo) as usize * n + i);
                }
            }
        }
        let sub = Subspace::coordinate(space.field, window_len(space, lo, hi), &idx);
        Self::from_subspace(space, lo, hi, sub)
    }

    /// The lattice spanned by the columns of `m` (as elements of `k((t))^n`)
    /// together with `t^hi O^n`. Terms of exponent `>= hi` are dropped.
    pub fn span_plus(space: TateSpace, gens: &LaurentMatrix, hi: i64) -> Result<Lattice, TateError> {
        if gens.rows() != space.rank {
            return Err(TateError::Shape("generator length differs from rank".into()));
        }
        let lo = gens.valuation().unwrap_or(hi).min(hi);
        let len = window_len(space, lo, hi);
        let n = space.rank;
        let f = space.field;
        let mut rows = Vec::new();
        for c in 0..gens.cols() {
            let mut v = vec![f.zero(); len];
            for i in 0..n {
                for (e, s) in gens.get(i, c).terms() {
                    if e < hi {
                        v[(e - lo) as usize * n + i] = s.clone();
                    }
                }
            }
            rows.push(v);
        }
        let m = Matrix::from_rows(f, len, rows)?;
        Self::normalize(space, lo, hi, &m)
    }

    pub fn space(&self) -> TateSpace {
        self.space
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    /// `L / t^hi O^n` re-expressed in the wider window `[lo, hi)`.
    pub fn in_window(&self, lo: i64, hi: i64) -> Subspace {
        assert!(lo <= self.lo && self.hi <= hi, "window does not contain the lattice bounds");
        let n = self.space.rank;
        let f = self.space.field;
        let len = window_len(self.space, lo, hi);
        let off = (self.lo - lo) as usize * n;
        let mut rows = Vec::new();
        let b = self.sub.basis();
        for r in 0..b.rows() {
            let mut v = vec![f.zero(); len];
            for (c, x) in b.row(r).iter().enumerate() {
                v[off + c] = x.clone();
            }
            rows.push(v);
        }
        let top = (self.hi - lo) as usize * n;
        for k in top..len {
            let mut v = vec![f.zero(); len];
            v[k] = f.one();
            rows.push(v);
        }
        Subspace::from_vectors(f, len, &rows).expect("shape")
    }

    fn check_space(&self, other: &Lattice) -> Result<(), TateError> {
        if self.space != other.space {
            return Err(TateError::SpaceMismatch);
        }
        Ok(())
    }

    fn common(&self, other: &Lattice) -> (i64, i64, Subspace, Subspace) {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        (lo, hi, self.in_window(lo, hi), other.in_window(lo, hi))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Lattice) -> Result<bool, TateError> {
        self.check_space(other)?;
        let (_, _, a, b) = self.common(other);
        Ok(a.contains(&b))
    }

    pub fn meet(&self, other: &Lattice) -> Result<Lattice, TateError> {
        self.check_space(other)?;
        let (lo, hi, a, b) = self.common(other);
        Ok(Self::from_subspace(self.space, lo, hi, a.meet(&b)?))
    }

    pub fn join(&self, other: &Lattice) -> Result<Lattice, TateError> {
        self.check_space(other)?;
        let (lo, hi, a, b) = self.common(other);
        Ok(Self::from_subspace(self.space, lo, hi, a.join(&b)?))
    }

    /// `dim(self / self∩other) - dim(other / self∩other)`.
    pub fn relative_index(&self, other: &Lattice) -> Result<i64, TateError> {
        self.check_space(other)?;
        let (_, _, a, b) = self.common(other);
        Ok(a.dim() as i64 - b.dim() as i64)
    }

    /// `t^k L`.
    pub fn shift(&self, k: i64) -> Lattice {
        if self.space.rank == 0 {
            return self.clone();
        }
        Lattice { space: self.space, lo: self.lo + k, hi: self.hi + k, sub: self.sub.clone() }
    }

    /// A monomial `t^e u_i` in the window `[lo, hi)` of this space.
    pub fn monomial_vector(space: TateSpace, lo: i64, hi: i64, e: i64, i: usize) -> Vec<Scalar> {
        let f = space.field;
        let mut v = vec![f.zero(); window_len(space, lo, hi)];
        v[(e - lo) as usize * space.rank + i] = f.one();
        v
    }

    /// Render as a `.lat` document.
    pub fn to_lat(&self) -> String {
        let mut s =
            format!("tate rank={} field={}\nbounds lo={} hi={}\n", self.space.rank, self.space.field, self.lo, self.hi);
        let b = self.sub.basis();
        for r in 0..b.rows() {
            let row: Vec<String> = b.row(r).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_lat(text: &str) -> Result<Lattice, TateError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| TateError::Parse("empty .lat input".into()))?;
        let kv = parse_header(header, "tate")?;
        let rank: usize = header_value(&kv, "rank")?;
        let field: Field = kv
            .get("field")
            .ok_or_else(|| TateError::Parse("missing field= in header".into()))?
            .parse()
            .map_err(|e| TateError::Parse(format!("{e}")))?;
        let (_, bounds) = lines.next().ok_or_else(|| TateError::Parse("missing bounds line".into()))?;
        let kv = parse_header(bounds, "bounds")?;
        let lo: i64 = header_value(&kv, "lo")?;
        let hi: i64 = header_value(&kv, "hi")?;
        if lo > hi {
            return Err(TateError::Bounds(lo, hi));
        }
        let space = TateSpace::new(field, rank);
        let len = window_len(space, lo, hi);
        let mut rows = Vec::new();
        for (line_no, line) in lines {
            let row = line
                .split(',')
                .enumerate()
                .map(|(col, tok)| {
                    field.parse_scalar(tok).map_err(|_| {
                        TateError::Parse(format!("line {line_no}, entry {}: bad scalar `{}`", col + 1, tok.trim()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != len {
                return Err(TateError::Parse(format!("line {line_no}: {} entries, window has {len}", row.len())));
            }
            rows.push(row);
        }
        let m = Matrix::from_rows(field, len, rows)?;
        Self::normalize(space, lo, hi, &m)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_lat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize) -> TateSpace {
        TateSpace::new(Field::prime(2).unwrap(), n)
    }

    #[test]
    fn normalization_examples() {
        let s = sp(1);
        let o = Lattice::normalize(s, 0, 0, &Matrix::zeros(s.field, 0, 0)).unwrap();
        assert_eq!((o.lo(), o.hi(), o.sub().dim()), (0, 0, 0));
        // t^{-1}O with slack bounds: the window [-3, 2) has monomials t^-3..t^1
        let rows: Vec<Vec<Scalar>> = (-1..2).map(|e| Lattice::monomial_vector(s, -3, 2, e, 0)).collect();
        let m = Matrix::from_rows(s.field, 5, rows).unwrap();
        let l = Lattice::normalize(s, -3, 2, &m).unwrap();
        assert_eq!((l.lo(), l.hi()), (-1, -1));
        assert_eq!(l, Lattice::standard(s, -1));
        let full = Matrix::identity(s.field, 2);
        let l2 = Lattice::normalize(s, -1, 1, &full).unwrap();
        assert_eq!((l2.lo(), l2.hi(), l2.sub().dim()), (-1, -1, 0));
    }

    #[test]
    fn containment_examples() {
        let s = sp(2);
        let l = Lattice::diagonal(s, &[-1, 2]);
        assert!(l.contains(&l).unwrap());
        let s1 = sp(1);
        assert!(Lattice::standard(s1, -1).contains(&Lattice::standard(s1, 1)).unwrap());
        // span{(t^-1, t^-1)} + tO^2 does not contain O^2
        let f = s.field;
        let v = vec![f.one(), f.one(), f.zero(), f.zero()];
        let a = Lattice::normalize(s, -1, 1, &Matrix::from_rows(f, 4, vec![v]).unwrap()).unwrap();
        assert!(!a.contains(&Lattice::standard(s, 0)).unwrap());
    }

    #[test]
    fn meet_join_index_examples() {
        let s = sp(2);
        let a = Lattice::diagonal(s, &[-1, 0]);
        let b = Lattice::diagonal(s, &[0, -1]);
        assert_eq!(a.meet(&b).unwrap(), Lattice::standard(s, 0));
        assert_eq!(a.join(&b).unwrap(), Lattice::standard(s, -1));
        let deep = Lattice::standard(s, 5);
        assert_eq!(a.meet(&deep).unwrap(), deep);
        assert_eq!(a.join(&deep).unwrap(), a);
        let s1 = sp(1);
        assert_eq!(Lattice::standard(s1, -2).relative_index(&Lattice::standard(s1, 0)).unwrap(), 2);
        assert_eq!(a.relative_index(&a).unwrap(), 0);
        assert_eq!(Lattice::diagonal(s, &[0, 1]).relative_index(&Lattice::diagonal(s, &[-1, 0])).unwrap(), -2);
    }

    #[test]
    fn lat_round_trip_and_errors() {
        let s = sp(2);
        let f = s.field;
        let v = vec![f.one(), f.one(), f.zero(), f.one()];
        let a = Lattice::normalize(s, -1, 1, &Matrix::from_rows(f, 4, vec![v]).unwrap()).unwrap();
        assert_eq!(Lattice::from_lat(&a.to_lat()).unwrap(), a);
        let bad = "tate rank=1 field=F2\nbounds lo=0 hi=1\n1,x\n";
        match Lattice::from_lat(bad) {
            Err(TateError::Parse(msg)) => assert!(msg.contains("line 3"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Lattice::from_lat("tate rank=1 field=F2\nbounds lo=2 hi=1\n").is_err());
    }

    #[test]
    fn rank_zero_lattice() {
        let z = TateSpace::new(Field::Rationals, 0);
        let l = Lattice::standard(z, 7);
        assert_eq!((l.lo(), l.hi()), (0, 0));
        assert_eq!(l.relative_index(&Lattice::standard(z, -3)).unwrap(), 0);
    }
}
