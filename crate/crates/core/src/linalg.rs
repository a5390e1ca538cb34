//! Exact integer and rational matrices.
//!
//! Everything here works over [`BigInt`] / [`BigRational`]; there is no
//! floating point anywhere in this module. Matrices act on column vectors,
//! so column `j` of a matrix is the image of the `j`-th basis vector.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("entry count {len} does not match shape {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape { rows, cols, len: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(n * m);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), m, "ragged rows");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Self { rows: n, cols: m, entries }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[BigInt]>>(nrows: usize, cols: &[C]) -> Self {
        let mut out = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), nrows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                out.set(i, j, x.clone());
            }
        }
        out
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// `c * identity`.
    pub fn scalar(n: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * k).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Smallest `k >= 1` with `self^k = I`, searching up to `limit`.
    pub fn multiplicative_order(&self, limit: usize) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let id = Self::identity(self.rows);
        let mut p = self.clone();
        for k in 1..=limit {
            if p == id {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Exact inverse over the rationals.
    pub fn rational_inverse(&self) -> Result<RatMatrix, LinalgError> {
        self.to_rational().inverse()
    }

    /// Smith normal form `U * self * V = D`.
    ///
    /// Pivot: the nonzero entry of least absolute value in the active block,
    /// ties broken by lowest `(row, col)`. Diagonal entries come out
    /// nonnegative, each dividing the next, zeros last.
    pub fn smith_normal_form(&self) -> SmithDecomposition {
        let mut calc = SnfCalc::new(self);
        calc.run();
        calc.finish()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{} ", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.entries[idx] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

/// Output of [`IntMatrix::smith_normal_form`].
impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows()).map(|r| self.row(r).iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `d`, all positive.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors different from 1, i.e. the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct SnfCalc {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl SnfCalc {
    fn new(m: &IntMatrix) -> Self {
        Self {
            a: (0..m.rows).map(|r| m.row(r).to_vec()).collect(),
            u: identity_rows(m.rows),
            v: identity_rows(m.cols),
            rows: m.rows,
            cols: m.cols,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            for row in &mut self.v {
                row.swap(i, j);
            }
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let t = &self.a[j][c] * k;
            self.a[i][c] += t;
        }
        for c in 0..self.rows {
            let t = &self.u[j][c] * k;
            self.u[i][c] += t;
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let t = &self.a[r][j] * k;
            self.a[r][i] += t;
        }
        for r in 0..self.cols {
            let t = &self.v[r][j] * k;
            self.v[r][i] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        for x in &mut self.u[i] {
            *x = -&*x;
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.rows {
            for c in t..self.cols {
                let x = &self.a[r][c];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if self.a[br][bc].abs() <= x.abs() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let Some((pr, pc)) = self.find_pivot(t) else { break };
            self.swap_rows(t, pr);
            self.swap_cols(t, pc);

            let mut dirty = false;
            for r in t + 1..self.rows {
                if self.a[r][t].is_zero() {
                    continue;
                }
                let q = self.a[r][t].div_floor(&self.a[t][t]);
                self.add_row(r, t, &-q);
                dirty |= !self.a[r][t].is_zero();
            }
            for c in t + 1..self.cols {
                if self.a[t][c].is_zero() {
                    continue;
                }
                let q = self.a[t][c].div_floor(&self.a[t][t]);
                self.add_col(c, t, &-q);
                dirty |= !self.a[t][c].is_zero();
            }
            if dirty {
                // a smaller remainder appeared; pick a new pivot for this step
                continue;
            }

            // pivot must divide the rest of the active block
            let p = self.a[t][t].clone();
            let bad = (t + 1..self.rows).find(|&r| (t + 1..self.cols).any(|c| !self.a[r][c].is_multiple_of(&p)));
            if let Some(r) = bad {
                self.add_row(t, r, &BigInt::one());
                continue;
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }

    fn finish(self) -> SmithDecomposition {
        let flat = |m: Vec<Vec<BigInt>>, r: usize, c: usize| {
            IntMatrix::from_vec(r, c, m.into_iter().flatten().collect()).expect("shape")
        };
        let n = self.rows.min(self.cols);
        let invariant_factors = (0..n).map(|i| self.a[i][i].clone()).filter(|x| !x.is_zero()).collect();
        SmithDecomposition {
            d: flat(self.a, self.rows, self.cols),
            u: flat(self.u, self.rows, self.rows),
            v: flat(self.v, self.cols, self.cols),
            invariant_factors,
        }
    }
}

/// Dense matrix of exact rationals; entries are kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * k).collect() }
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LinalgError::Singular)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
        Ok(RatMatrix { rows: n, cols: n, entries: inv.into_iter().flatten().collect() })
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let s = (0..self.cols).fold(BigRational::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j));
                out.set(i, j, s);
            }
        }
        out
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix{}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Integer basis (as columns) of `{x : m x = 0}`. The lattice is saturated.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = m.smith_normal_form();
    let r = snf.rank();
    let n = m.cols();
    let cols: Vec<Vec<BigInt>> = (r..n).map(|c| snf.v.column(c)).collect();
    IntMatrix::from_columns(n, &cols)
}

/// Coordinates of `x` in the basis given by the columns of `basis`, if `x`
/// lies in their integer span.
pub fn integer_coordinates(basis: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = basis.smith_normal_form();
    // basis = U^-1 D V^-1, so basis * y = x  <=>  D (V^-1 y) = U x
    let ux = snf.u.apply(x);
    let k = basis.cols();
    let mut z = vec![BigInt::zero(); k];
    for (i, val) in ux.iter().enumerate() {
        match snf.invariant_factors.get(i) {
            Some(d) => {
                if !val.is_multiple_of(d) {
                    return None;
                }
                z[i] = val / d;
            }
            None => {
                if !val.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.v.apply(&z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &IntMatrix) -> SmithDecomposition {
        let s = m.smith_normal_form();
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn snf_small_examples() {
        let s = check_snf(&IntMatrix::from_rows(&[[1, -2], [-2, 1]]));
        assert_eq!(s.invariant_factors, big(&[1, 3]));

        let s = check_snf(&IntMatrix::identity(4));
        assert_eq!(s.invariant_factors, big(&[1, 1, 1, 1]));

        let s = check_snf(&IntMatrix::from_rows(&[[1, 0, 3], [0, 4, 0], [3, 0, 1]]));
        assert_eq!(s.invariant_factors, big(&[1, 4, 8]));
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let s = check_snf(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12]]));
        assert_eq!(s.invariant_factors, big(&[2, 6]));
        let s = check_snf(&IntMatrix::zeros(2, 3));
        assert!(s.invariant_factors.is_empty());
        let s = check_snf(&IntMatrix::from_rows(&[[0, 0], [0, 5]]));
        assert_eq!(s.invariant_factors, big(&[5]));
        assert_eq!(s.d.get(1, 1), &BigInt::zero());
    }

    #[test]
    fn snf_is_deterministic() {
        let m = IntMatrix::from_rows(&[[6, 4, 2], [3, 9, 1], [0, 2, 8]]);
        assert_eq!(m.smith_normal_form(), m.smith_normal_form());
    }

    #[test]
    fn determinant_examples() {
        let hb = IntMatrix::from_rows(&[[1, -2, 0], [0, 1, -2], [-2, 0, 1]]);
        assert_eq!(hb.determinant().unwrap(), BigInt::from(-7));
        assert_eq!(IntMatrix::identity(5).determinant().unwrap(), BigInt::one());
        let u3 = IntMatrix::from_rows(&[[1, 0, 3], [0, 4, 0], [3, 0, 1]]);
        assert_eq!(u3.determinant().unwrap(), BigInt::from(-32));
        let pivot_swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(pivot_swap.determinant().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::zeros(2, 3).determinant(), Err(LinalgError::NonSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn rational_inverse_examples() {
        let m = IntMatrix::from_rows(&[[1, -2], [-2, 1]]);
        let inv = m.rational_inverse().unwrap();
        let third = BigRational::new(BigInt::from(-1), BigInt::from(3));
        let expected = IntMatrix::from_rows(&[[1, 2], [2, 1]]).to_rational().scale(&third);
        assert_eq!(inv, expected);

        assert_eq!(IntMatrix::identity(3).rational_inverse().unwrap(), RatMatrix::identity(3));

        let scalar = IntMatrix::scalar(3, 1 - 5);
        let quarter = BigRational::new(BigInt::from(-1), BigInt::from(4));
        assert_eq!(scalar.rational_inverse().unwrap(), RatMatrix::identity(3).scale(&quarter));

        let singular = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(singular.rational_inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn kernel_and_coordinates() {
        let m = IntMatrix::from_rows(&[[1, -1, 0]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).entries().iter().all(Zero::is_zero));
        let x = big(&[3, 3, -7]);
        let y = integer_coordinates(&k, &x).unwrap();
        assert_eq!(k.apply(&y), x);
        assert!(integer_coordinates(&k, &big(&[1, 0, 0])).is_none());

        let none = IntMatrix::zeros(0, 3);
        assert_eq!(integer_kernel(&none), IntMatrix::identity(3));
    }

    #[test]
    fn order_of_cyclic_shift() {
        let shift = IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        assert_eq!(shift.multiplicative_order(10), Some(3));
        assert_eq!(IntMatrix::scalar(2, 2).multiplicative_order(10), None);
    }

    #[test]
    fn shape_is_checked() {
        assert!(IntMatrix::from_vec(2, 2, big(&[1, 2, 3])).is_err());
    }
}
