use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::function::RationalFunction;
use super::poly::Polynomial;
use super::DEGREE_CAP;
use crate::error::{Error, Result};

/// Dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut m = QMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                m[(a, b)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Row-echelon reduction in place; returns pivot count and the sign of
    /// the row permutation.
    fn eliminate(&mut self) -> (usize, bool) {
        let mut rank = 0;
        let mut flipped = false;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != rank {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, rank * self.cols + c);
                }
                flipped = !flipped;
            }
            let inv = self[(rank, col)].recip();
            for r in rank + 1..self.rows {
                let f = &self[(r, col)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = &f * &self[(rank, c)];
                    self[(r, c)] -= v;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank, flipped)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0
    }

    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let (rank, flipped) = m.eliminate();
        if rank < self.rows {
            return BigRational::zero();
        }
        let d = (0..self.rows).fold(BigRational::one(), |acc, k| acc * &m[(k, k)]);
        if flipped {
            -d
        } else {
            d
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = BigRational;
    fn index(&self, (r, c): (usize, usize)) -> &BigRational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigRational {
        &mut self.data[r * self.cols + c]
    }
}

/// Dense matrix over the field of rational functions in `z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RationalFunction>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![RationalFunction::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = RationalFunction::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invariant("ragged matrix rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &RationalFunction)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, f)| ((k / self.cols.max(1), k % self.cols.max(1)), f))
    }

    pub fn row(&self, r: usize) -> &[RationalFunction] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<RationalFunction> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    /// Rows and columns given by 0-based indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut m = RatMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                m[(a, b)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &RatMatrix,
        f: impl Fn(&RationalFunction, &RationalFunction) -> RationalFunction,
    ) -> RatMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = RatMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = RationalFunction::zero();
                for k in 0..self.cols {
                    let (a, b) = (&self[(r, k)], &other[(k, c)]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                m[(r, c)] = acc;
            }
        }
        m
    }

    pub fn scale(&self, f: &RationalFunction) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RationalFunction::is_zero)
    }

    pub fn max_degree(&self) -> usize {
        self.data
            .iter()
            .map(RationalFunction::max_degree)
            .max()
            .unwrap_or(0)
    }

    /// Value at `x`, or `None` if `x` is a pole of some entry.
    pub fn eval(&self, x: &BigRational) -> Option<QMatrix> {
        let mut m = QMatrix::zeros(self.rows, self.cols);
        for (k, f) in self.data.iter().enumerate() {
            m.data[k] = f.eval(x)?;
        }
        Some(m)
    }

    /// Clears denominators row by row. Returns the polynomial rows and, per
    /// row, the common denominator that was multiplied in.
    fn polynomial_rows(&self) -> (Vec<Vec<Polynomial>>, Vec<Polynomial>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let l = row
                .iter()
                .fold(Polynomial::one(), |acc, f| Polynomial::lcm(&acc, f.den()));
            rows.push(
                row.iter()
                    .map(|f| f.num() * &l.exact_div(f.den()))
                    .collect(),
            );
            scales.push(l);
        }
        (rows, scales)
    }

    /// Determinant by fraction-free (Bareiss) elimination over `Q[z]`.
    pub fn determinant(&self) -> Result<RationalFunction> {
        if !self.is_square() {
            return Err(Error::Precondition(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RationalFunction::one());
        }
        let (mut m, scales) = self.polynomial_rows();
        let mut prev = Polynomial::one();
        let mut negate = false;
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(RationalFunction::zero());
                };
                m.swap(k, p);
                negate = !negate;
            }
            bareiss_step(&mut m, k, k + 1..n, k + 1..n, &prev)?;
            prev = m[k][k].clone();
        }
        let det = if negate {
            -&m[n - 1][n - 1]
        } else {
            m[n - 1][n - 1].clone()
        };
        let scale = scales.iter().fold(Polynomial::one(), |acc, s| &acc * s);
        RationalFunction::new(det, scale)
    }

    /// Rank over the rational-function field (normal rank).
    pub fn normal_rank(&self) -> Result<usize> {
        let (mut m, _) = self.polynomial_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = Polynomial::one();
        for k in 0..rows.min(cols) {
            let pivot = (k..rows)
                .flat_map(|r| (k..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !m[r][c].is_zero());
            let Some((pr, pc)) = pivot else {
                return Ok(k);
            };
            m.swap(k, pr);
            for row in m.iter_mut() {
                row.swap(k, pc);
            }
            bareiss_step(&mut m, k, k + 1..rows, k + 1..cols, &prev)?;
            prev = m[k][k].clone();
        }
        Ok(rows.min(cols))
    }

    /// Gauss-Jordan inverse over the rational-function field.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::Precondition("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for k in 0..n {
            let p = (k..n)
                .filter(|&r| !a[(r, k)].is_zero())
                .min_by_key(|&r| a[(r, k)].max_degree())
                .ok_or(Error::Singular)?;
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let piv = a[(k, k)].recip()?;
            a.scale_row(k, &piv);
            inv.scale_row(k, &piv);
            for r in 0..n {
                if r == k || a[(r, k)].is_zero() {
                    continue;
                }
                let f = a[(r, k)].clone();
                a.axpy_row(r, k, &f);
                inv.axpy_row(r, k, &f);
            }
            check_degree(inv.max_degree())?;
        }
        Ok(inv)
    }

    /// Transposed cofactor matrix.
    pub fn adjugate(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::Precondition(
                "adjugate of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut adj = RatMatrix::zeros(n, n);
        if n == 1 {
            adj[(0, 0)] = RationalFunction::one();
            return Ok(adj);
        }
        for i in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            for j in 0..n {
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = self.submatrix(&rows, &cols).determinant()?;
                adj[(j, i)] = if (i + j) % 2 == 0 { minor } else { -minor };
            }
        }
        Ok(adj)
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> Result<(RatMatrix, Vec<usize>)> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(row, p);
            let piv = a[(row, col)].recip()?;
            a.scale_row(row, &piv);
            for r in 0..self.rows {
                if r != row && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.axpy_row(r, row, &f);
                }
            }
            check_degree(a.max_degree())?;
            pivots.push(col);
            row += 1;
        }
        Ok((a, pivots))
    }

    /// Basis of the right kernel, one vector per free column in increasing
    /// column order.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<RationalFunction>>> {
        let (r, pivots) = self.rref()?;
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        Ok(free
            .map(|f| {
                let mut v = vec![RationalFunction::zero(); self.cols];
                v[f] = RationalFunction::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect())
    }

    /// Entrywise limit as `z → ∞`.
    pub fn limit_at_infinity(&self) -> Result<QMatrix> {
        let mut m = QMatrix::zeros(self.rows, self.cols);
        for ((r, c), f) in self.entries() {
            m[(r, c)] = f.limit_at_infinity().ok_or(Error::ImproperEntry {
                row: r + 1,
                col: c + 1,
            })?;
        }
        Ok(m)
    }

    /// Rank lower bound from evaluation at `points` random integers in
    /// `[-10^6, 10^6]` that avoid every pole. Equal to the normal rank with
    /// high probability.
    pub fn sampled_rank<R: Rng>(&self, rng: &mut R, points: usize) -> usize {
        let mut best = 0;
        let mut tried = 0;
        while tried < points {
            let x =
                BigRational::from_integer(BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)));
            if let Some(m) = self.eval(&x) {
                best = best.max(m.rank());
                tried += 1;
            }
        }
        best
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, f: &RationalFunction) {
        for c in 0..self.cols {
            let v = &self[(r, c)] * f;
            self[(r, c)] = v;
        }
    }

    /// `row[target] -= f * row[source]`.
    fn axpy_row(&mut self, target: usize, source: usize, f: &RationalFunction) {
        for c in 0..self.cols {
            if self[(source, c)].is_zero() {
                continue;
            }
            let v = &self[(target, c)] - &(f * &self[(source, c)]);
            self[(target, c)] = v;
        }
    }
}

fn check_degree(d: usize) -> Result<()> {
    if d > DEGREE_CAP {
        Err(Error::DegreeOverflow {
            degree: d,
            cap: DEGREE_CAP,
        })
    } else {
        Ok(())
    }
}

/// One Bareiss update with pivot `m[k][k]`; every division is exact.
fn bareiss_step(
    m: &mut [Vec<Polynomial>],
    k: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
    prev: &Polynomial,
) -> Result<()> {
    let (top, rest) = m.split_at_mut(k + 1);
    let pivot_row = &top[k];
    for row in rest.iter_mut().take(rows.len()) {
        let lead = row[k].clone();
        for c in cols.clone() {
            let v = &(&pivot_row[k] * &row[c]) - &(&lead * &pivot_row[c]);
            let v = if prev.is_one() { v } else { v.exact_div(prev) };
            check_degree(v.degree().unwrap_or(0))?;
            row[c] = v;
        }
        row[k] = Polynomial::zero();
    }
    Ok(())
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = RationalFunction;
    fn index(&self, (r, c): (usize, usize)) -> &RationalFunction {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut RationalFunction {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
