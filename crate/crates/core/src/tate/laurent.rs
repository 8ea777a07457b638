use std::collections::BTreeMap;
use std::fmt;

use crate::exactlin::{Field, Matrix, Scalar};

use super::TateError;

/// A Laurent polynomial `Σ c_e t^e` with finitely many nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: Field,
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero(field: Field) -> Self {
        LaurentPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::monomial(field.one(), 0)
    }

    pub fn monomial(c: Scalar, e: i64) -> Self {
        let mut p = Self::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// `t^e`.
    pub fn t_pow(field: Field, e: i64) -> Self {
        Self::monomial(field.one(), e)
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut p = Self::zero(field);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Lowest exponent, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(*e, c);
        }
        p
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                p.add_term(e1 + e2, &(c1 * c2));
            }
        }
        p
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.field);
        }
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// `self / d` when the quotient is again a Laurent polynomial.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dv = d.valuation()?;
        let Some(av) = self.valuation() else {
            return Some(Self::zero(self.field));
        };
        // as polynomials with nonzero constant term, t does not divide the divisor
        let mut r = self.shift(-av);
        let dn = d.shift(-dv);
        let dd = dn.degree().expect("nonzero");
        let lc_inv = dn.coeff(dd).inv().expect("nonzero leading coefficient");
        let mut q = Self::zero(self.field);
        while let Some(rd) = r.degree() {
            if rd < dd {
                return None;
            }
            let c = &r.coeff(rd) * &lc_inv;
            let term = Self::monomial(c, rd - dd);
            r = r.sub(&term.mul(&dn));
            q = q.add(&term);
        }
        Some(q.shift(av - dv))
    }

    pub fn parse(field: Field, s: &str) -> Result<Self, TateError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(field));
        }
        let mut p = Self::zero(field);
        for raw in s.split('+') {
            let term = raw.trim();
            let bad = |why: &str| TateError::Parse(format!("bad Laurent term `{term}`: {why}"));
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (coef, mono) = match term.split_once('*') {
                Some((c, m)) => (c.trim(), Some(m.trim())),
                None if term.contains('t') => match term.strip_prefix('-') {
                    Some(rest) => ("-1", Some(rest.trim())),
                    None => ("1", Some(term)),
                },
                None => (term, None),
            };
            let c = field.parse_scalar(coef).map_err(|_| bad("coefficient"))?;
            let e = match mono {
                None => 0,
                Some("t") => 1,
                Some(m) => m
                    .strip_prefix("t^")
                    .ok_or_else(|| bad("expected t^<exponent>"))?
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| bad("exponent"))?,
            };
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}*t^{e}")).collect();
        f.write_str(&parts.join("+"))
    }
}

/// A matrix of Laurent polynomials, read as a `k((t))`-linear map `k((t))^cols -> k((t))^rows`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, field, data: vec![LaurentPoly::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(field));
        }
        m
    }

    /// `diag(t^{e_0}, t^{e_1}, …)`.
    pub fn diag_t_pow(field: Field, exps: &[i64]) -> Self {
        let mut m = Self::zeros(field, exps.len(), exps.len());
        for (i, &e) in exps.iter().enumerate() {
            m.set(i, i, LaurentPoly::t_pow(field, e));
        }
        m
    }

    pub fn from_constant(m: &Matrix) -> Self {
        let mut out = Self::zeros(m.field(), m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r, c, LaurentPoly::monomial(m.get(r, c).clone(), 0));
            }
        }
        out
    }

    /// The inclusion of the first `a` coordinates into `n`.
    pub fn coordinate_inclusion(field: Field, n: usize, a: usize) -> Self {
        let mut m = Self::zeros(field, n, a);
        for k in 0..a {
            m.set(k, k, LaurentPoly::one(field));
        }
        m
    }

    /// The projection of `n` coordinates onto the last `n - a`.
    pub fn coordinate_projection(field: Field, n: usize, a: usize) -> Self {
        let mut m = Self::zeros(field, n - a, n);
        for k in 0..n - a {
            m.set(k, a + k, LaurentPoly::one(field));
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<LaurentPoly>>) -> Result<Self, TateError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(TateError::Shape(format!("row of length {} where {} expected", row.len(), cols)));
            }
            data.extend(row);
        }
        if data.iter().any(|p| p.field() != field) {
            return Err(TateError::FieldMismatch);
        }
        Ok(LaurentMatrix { rows: r, cols, field, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: LaurentPoly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TateError> {
        if self.cols != other.rows {
            return Err(TateError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(TateError::FieldMismatch);
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = LaurentPoly::zero(self.field);
                for k in 0..self.cols {
                    let (a, b) = (self.get(r, k), other.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Minimal valuation over nonzero entries; `None` for the zero matrix.
    pub fn valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(LaurentPoly::valuation).min()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    /// Fraction-free (Bareiss) elimination; returns the rank over `k(t)` and,
    /// for square input, the determinant.
    fn bareiss(&self) -> (usize, LaurentPoly) {
        let mut a: Vec<Vec<LaurentPoly>> =
            (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect()).collect();
        let mut prev = LaurentPoly::one(self.field);
        let mut sign_flip = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                sign_flip = !sign_flip;
            }
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let num = a[r][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[r][j]));
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][c] = LaurentPoly::zero(self.field);
            }
            prev = a[r][c].clone();
            r += 1;
        }
        let det = if self.rows == self.cols && r == self.rows {
            if self.rows == 0 {
                LaurentPoly::one(self.field)
            } else if sign_flip {
                prev.neg()
            } else {
                prev
            }
        } else {
            LaurentPoly::zero(self.field)
        };
        (r, det)
    }

    /// Rank over the rational function field `k(t)`.
    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    pub fn determinant(&self) -> Result<LaurentPoly, TateError> {
        if self.rows != self.cols {
            return Err(TateError::Shape("determinant of a non-square matrix".into()));
        }
        Ok(self.bareiss().1)
    }

    /// Adjugate, so that `adj · m = det · I`.
    pub fn adjugate(&self) -> Result<Self, TateError> {
        if self.rows != self.cols {
            return Err(TateError::Shape("adjugate of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut adj = Self::zeros(self.field, n, n);
        if n == 1 {
            adj.set(0, 0, LaurentPoly::one(self.field));
            return Ok(adj);
        }
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = self.select(&rows, &cols).bareiss().1;
                let cof = if (i + j) % 2 == 1 { minor.neg() } else { minor };
                adj.set(j, i, cof);
            }
        }
        Ok(adj)
    }

    pub fn parse_entries(field: Field, rows: usize, cols: usize, entries: &[&str]) -> Result<Self, TateError> {
        if entries.len() != rows * cols {
            return Err(TateError::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let data = entries.iter().map(|s| LaurentPoly::parse(field, s)).collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentMatrix { rows, cols, field, data })
    }

    /// Render as an `.lmx` document.
    pub fn to_lmx(&self) -> String {
        let mut s = format!("lmx rows={} cols={} field={}\n", self.rows, self.cols, self.field);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse an `.lmx` document: a header line then whitespace-separated
    /// entries in row-major order.
    pub fn from_lmx(text: &str) -> Result<Self, TateError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| TateError::Parse("empty .lmx input".into()))?;
        let kv = parse_header(header, "lmx")?;
        let rows: usize = header_value(&kv, "rows")?;
        let cols: usize = header_value(&kv, "cols")?;
        let field: Field = kv
            .get("field")
            .ok_or_else(|| TateError::Parse("missing field= in header".into()))?
            .parse()
            .map_err(|e| TateError::Parse(format!("{e}")))?;
        let entries: Vec<&str> = lines.flat_map(str::split_whitespace).collect();
        Self::parse_entries(field, rows, cols, &entries)
    }
}

pub(crate) fn parse_header<'a>(line: &'a str, tag: &str) -> Result<BTreeMap<&'a str, &'a str>, TateError> {
    let mut words = line.split_whitespace();
    if words.next() != Some(tag) {
        return Err(TateError::Parse(format!("expected header starting with `{tag}`, got `{line}`")));
    }
    words.map(|w| w.split_once('=').ok_or_else(|| TateError::Parse(format!("expected key=value, got `{w}`")))).collect()
}

pub(crate) fn header_value<T: std::str::FromStr>(kv: &BTreeMap<&str, &str>, key: &str) -> Result<T, TateError> {
    kv.get(key)
        .ok_or_else(|| TateError::Parse(format!("missing {key}= in header")))?
        .parse()
        .map_err(|_| TateError::Parse(format!("bad value for {key}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn lp(s: &str) -> LaurentPoly {
        LaurentPoly::parse(q(), s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = lp("3*t^-2 + -1*t^0 + 2*t^1");
        assert_eq!(p.to_string(), "3*t^-2+-1*t^0+2*t^1");
        assert_eq!(lp(&p.to_string()), p);
        assert_eq!(lp("t"), LaurentPoly::t_pow(q(), 1));
        assert_eq!(lp("-t^3"), LaurentPoly::monomial(q().from_i64(-1), 3));
        assert!(lp("0").is_zero());
        assert!(LaurentPoly::parse(q(), "2*t^x").is_err());
    }

    #[test]
    fn exact_division() {
        let a = lp("1*t^-1 + 1*t^0");
        let b = lp("1*t^0 + -1*t^1");
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(lp("1*t^0 + 1*t^2").div_exact(&lp("1*t^0 + 1*t^1")).is_none());
    }

    #[test]
    fn rank_and_determinant() {
        let f = q();
        let m = LaurentMatrix::parse_entries(f, 2, 2, &["1*t^1", "1*t^0", "1*t^2", "1*t^1"]).unwrap();
        assert_eq!(m.rank(), 1);
        let m2 = LaurentMatrix::parse_entries(f, 2, 2, &["1*t^1", "1*t^0", "1*t^0", "1*t^-1+1*t^0"]).unwrap();
        assert_eq!(m2.determinant().unwrap(), lp("1*t^1"));
        let adj = m2.adjugate().unwrap();
        let det = m2.determinant().unwrap();
        let prod = adj.mul(&m2).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let want = if r == c { det.clone() } else { LaurentPoly::zero(f) };
                assert_eq!(prod.get(r, c), &want);
            }
        }
    }

    #[test]
    fn lmx_round_trip() {
        let f = Field::prime(5).unwrap();
        let m = LaurentMatrix::parse_entries(f, 1, 2, &["2*t^-1+1*t^3", "0"]).unwrap();
        assert_eq!(LaurentMatrix::from_lmx(&m.to_lmx()).unwrap(), m);
    }
}
