//! Integer matrices and Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_i64_cols(cols, rows)
    }

    pub fn from_i64_cols(cols: usize, rows: &[&[i64]]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in integer product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum()).collect()
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for k in 0..self.cols {
            let v = self.get(src, k) * c;
            self.data[dst * self.cols + k] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for k in 0..self.rows {
            let v = self.get(k, src) * c;
            self.data[k * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for k in 0..self.cols {
            let v = -self.get(r, k);
            self.set(r, k, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for k in 0..self.rows {
            let v = -self.get(k, c);
            self.set(k, c, v);
        }
    }
}

/// Result of a Smith decomposition `p * a * q = d`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
    /// Nonzero diagonal entries of `d`, each dividing the next.
    pub factors: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

struct State {
    a: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl State {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.p_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.q_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row(dst, src, c);
        self.p.add_row(dst, src, c);
        self.p_inv.add_col(src, dst, &-c);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col(dst, src, c);
        self.q.add_col(dst, src, c);
        self.q_inv.add_row(src, dst, &-c);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.p.negate_row(r);
        self.p_inv.negate_col(r);
    }
}

/// Smith normal form together with unimodular transforms.
pub fn snf_with_transforms(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = State {
        a: m.clone(),
        p: IntMatrix::identity(rows),
        p_inv: IntMatrix::identity(rows),
        q: IntMatrix::identity(cols),
        q_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = s.a.get(r, c);
                if !v.is_zero() && best.is_none_or(|(br, bc)| v.abs() < s.a.get(br, bc).abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        s.swap_rows(t, br);
        s.swap_cols(t, bc);
        loop {
            let piv = s.a.get(t, t).clone();
            let mut dirty = false;
            for r in t + 1..rows {
                let v = s.a.get(r, t).clone();
                if !v.is_zero() {
                    let qt = v.div_floor(&piv);
                    s.add_row(r, t, &-qt);
                    if !s.a.get(r, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                let v = s.a.get(t, c).clone();
                if !v.is_zero() {
                    let qt = v.div_floor(&piv);
                    s.add_col(c, t, &-qt);
                    if !s.a.get(t, c).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // move the new smallest entry of row/column t into the pivot
                let mut best = (t, t);
                for r in t + 1..rows {
                    let v = s.a.get(r, t);
                    if !v.is_zero() && v.abs() < s.a.get(best.0, best.1).abs() {
                        best = (r, t);
                    }
                }
                for c in t + 1..cols {
                    let v = s.a.get(t, c);
                    if !v.is_zero() && v.abs() < s.a.get(best.0, best.1).abs() {
                        best = (t, c);
                    }
                }
                s.swap_rows(t, best.0);
                s.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the trailing block
            let piv = s.a.get(t, t).clone();
            let bad = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !s.a.get(r, c).is_multiple_of(&piv));
            match bad {
                Some((r, _)) => s.add_row(t, r, &BigInt::one()),
                None => break,
            }
        }
        if s.a.get(t, t).is_negative() {
            s.negate_row(t);
        }
        t += 1;
    }
    let factors = (0..rows.min(cols)).map(|i| s.a.get(i, i).clone()).take_while(|v| !v.is_zero()).collect();
    Smith { d: s.a, p: s.p, p_inv: s.p_inv, q: s.q, q_inv: s.q_inv, factors }
}

/// Invariant factors and rank.
pub fn smith_normal_form(m: &IntMatrix) -> (Vec<BigInt>, usize) {
    let s = snf_with_transforms(m);
    let r = s.rank();
    (s.factors, r)
}

/// Basis (as columns) of the integer kernel of `m`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = snf_with_transforms(m);
    (s.rank()..m.cols).map(|c| s.q.column(c)).collect()
}

/// Some integer `x` with `m x = b`, if one exists.
pub fn integer_solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = snf_with_transforms(m);
    let pb = s.p.apply(b);
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, v) in pb.iter().enumerate() {
        if i < s.rank() {
            let (q, r) = v.div_rem(&s.factors[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !v.is_zero() {
            return None;
        }
    }
    Some(s.q.apply(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)), (ints(&[1, 1, 1]), 3));
        assert_eq!(smith_normal_form(&IntMatrix::from_i64(&[&[2, 0], &[0, 4]])), (ints(&[2, 4]), 2));
        assert_eq!(smith_normal_form(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]])), (ints(&[2, 4]), 2));
    }

    #[test]
    fn transforms_are_consistent() {
        let m = IntMatrix::from_i64(&[&[4, 6, 2], &[2, 8, 10], &[6, 4, -2], &[0, 0, 0]]);
        let s = snf_with_transforms(&m);
        assert_eq!(s.p.mul(&m).mul(&s.q), s.d);
        assert_eq!(s.p.mul(&s.p_inv), IntMatrix::identity(4));
        assert_eq!(s.q.mul(&s.q_inv), IntMatrix::identity(3));
        for w in s.factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn divisibility_repair() {
        // diag(2,3) has Smith form diag(1,6)
        assert_eq!(smith_normal_form(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])).0, ints(&[1, 6]));
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_i64(&[&[2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(m.apply(v), ints(&[0]));
        }
        assert!(integer_solve(&m, &ints(&[3])).is_none());
        let x = integer_solve(&m, &ints(&[10])).unwrap();
        assert_eq!(m.apply(&x), ints(&[10]));
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(smith_normal_form(&IntMatrix::zeros(0, 3)), (vec![], 0));
        assert_eq!(integer_kernel(&IntMatrix::zeros(0, 2)).len(), 2);
    }
}
