//! Exact scalars and dense matrices.
//!
//! Column-vector convention: a map `V -> W` is a `dim W x dim V` matrix and
//! `g ∘ f` is `g * f`. Tensor products are Kronecker products with the left
//! factor most significant, so the basis vector `e_i ⊗ e_j` of `V ⊗ W` has
//! index `i * dim W + j`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Witness;

/// The ground field: the rationals or a prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Accepts `Q`, `rational`, `F7`, `GF(7)` or a bare prime `7`.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix('p'))
            .unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Invalid(format!("unrecognised field `{s}`")))?;
        Field::prime(p)
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if p >= 1 << 32 {
            return Err(Error::Invalid(format!("prime {p} too large")));
        }
        Ok(Field::Prime(p))
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("F{p}"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp(0, p),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp(n.rem_euclid(p as i64) as u64, p),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.div(&d).expect("denominator vanishes in this field")
    }

    /// Parses `n`, `-n` or `p/q` (rationals) and integers reduced mod p.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let t = s.trim();
        let bad = || Error::Invalid(format!("bad scalar `{s}` for field {}", self.name()));
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match *self {
            Field::Rational => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u64().unwrap()
                };
                let n = Scalar::Fp(reduce(&num), p);
                let d = Scalar::Fp(reduce(&den), p);
                n.div(&d).ok_or_else(bad)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// A field element. Prime-field elements carry their modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64, u64),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp(v, p) => Scalar::Fp(pow_mod(*v, p - 2, *p), *p),
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: u64) -> Scalar {
        let mut r = self.field().one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// `p/q` or `n` for rationals, the least non-negative residue otherwise.
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp(v, _) => v.to_string(),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalars from different fields: {} and {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => Scalar::Fp((a + b) % p, *p),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => Scalar::Fp((a + p - b) % p, *p),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((p - a) % p, *p),
        }
    }
}

impl Scalar {
    fn add_assign_ref(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => *a = (*a + b) % *p,
            _ => mismatch(self, rhs),
        }
    }
}

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(format!("{} entry in a {} matrix", bad.field(), field)));
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let conv = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Matrix::from_rows(field, conv).expect("ragged integer rows")
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Column vector with a single `1` at `index`.
    pub fn unit_vector(field: Field, n: usize, index: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, 1);
        m.set(index, 0, field.one());
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        self.data[r * self.cols + c].add_assign_ref(v);
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|s| !s.is_zero()).count()
    }

    /// First entry where `self` and `other` differ; shapes are compared first.
    pub fn first_difference(&self, other: &Matrix) -> Option<Witness> {
        if self.shape() != other.shape() {
            return Some(Witness {
                row: usize::MAX,
                col: usize::MAX,
                lhs: format!("shape {}x{}", self.rows, self.cols),
                rhs: format!("shape {}x{}", other.rows, other.cols),
            });
        }
        self.data.iter().zip(&other.data).position(|(a, b)| a != b).map(|k| Witness {
            row: k / self.cols,
            col: k % self.cols,
            lhs: self.data[k].to_text(),
            rhs: other.data[k].to_text(),
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "add")?;
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "sub")?;
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &Matrix, op: &str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{op}: {} vs {}", self.field, other.field)));
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// `self * other`, skipping zero entries of `self`.
    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("matmul: {} vs {}", self.field, other.field)));
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "matmul: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j].add_assign_ref(&(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "kron across fields");
        let (r2, c2) = other.shape();
        let mut out = Matrix::zeros(self.field, self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * r2 + k, j * c2 + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(blocks: &[&Matrix]) -> Result<Matrix> {
        let first = blocks.first().ok_or_else(|| Error::ShapeMismatch("hstack of nothing".into()))?;
        let rows = first.rows;
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::ShapeMismatch("hstack: row counts differ".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(first.field, rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        Ok(out)
    }

    pub fn vstack(blocks: &[&Matrix]) -> Result<Matrix> {
        let first = blocks.first().ok_or_else(|| Error::ShapeMismatch("vstack of nothing".into()))?;
        let cols = first.cols;
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::ShapeMismatch("vstack: column counts differ".into()));
        }
        let mut data = Vec::new();
        for b in blocks {
            data.extend(b.data.iter().cloned());
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        Ok(Matrix { field: first.field, rows, cols, data })
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, start: usize, count: usize) -> Matrix {
        Matrix::from_fn(self.field, self.rows, count, |i, j| self.get(i, start + j).clone())
    }

    /// Rows `start..start+count` as a new matrix.
    pub fn row_block(&self, start: usize, count: usize) -> Matrix {
        Matrix::from_fn(self.field, count, self.cols, |i, j| self.get(start + i, j).clone())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            let pivot_row: Vec<Scalar> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    if !pivot_row[j].is_zero() {
                        let v = m.get(i, j) - &(&f * &pivot_row[j]);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(self.field, n)])?;
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular(format!("{n}x{n} matrix of rank {}", self.rank())));
        }
        Ok(r.columns(n, n))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    /// Panics on a shape mismatch; use [`matmul`] for a checked product.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-&self.field.one())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_text).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.try_mul(b)
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kron(b)
}

pub fn kron_all(field: Field, ms: &[&Matrix]) -> Matrix {
    ms.iter().fold(Matrix::identity(field, 1), |acc, m| acc.kron(m))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn check_perm(n: usize, sigma: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::ShapeMismatch(format!("permutation of length {} for {n} factors", sigma.len())));
    }
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::Invalid(format!("{sigma:?} is not a permutation")));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Index map of the factor permutation: factor `i` of the source lands at
/// position `sigma[i]` of the target. Returns target dims and, for every
/// source index, the target index.
fn perm_index_map(dims: &[usize], sigma: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    check_perm(dims.len(), sigma)?;
    let mut tdims = vec![0; dims.len()];
    for (i, &s) in sigma.iter().enumerate() {
        tdims[s] = dims[i];
    }
    let ss = strides(dims);
    let ts = strides(&tdims);
    let total: usize = dims.iter().product();
    let map = (0..total)
        .map(|src| {
            let mut t = 0;
            for i in 0..dims.len() {
                let digit = (src / ss[i]) % dims[i];
                t += digit * ts[sigma[i]];
            }
            t
        })
        .collect();
    Ok((tdims, map))
}

/// Permutation matrix `P_σ` on `V_0 ⊗ … ⊗ V_{n-1}`: factor `i` of the source
/// lands at position `sigma[i]` of the target.
pub fn permute_factors(field: Field, dims: &[usize], sigma: &[usize]) -> Result<Matrix> {
    let (_, map) = perm_index_map(dims, sigma)?;
    let n = map.len();
    let mut p = Matrix::zeros(field, n, n);
    for (src, &t) in map.iter().enumerate() {
        p.set(t, src, field.one());
    }
    Ok(p)
}

/// `P_σ * m` without forming `P_σ`.
pub fn permute_row_factors(m: &Matrix, dims: &[usize], sigma: &[usize]) -> Result<Matrix> {
    let (_, map) = perm_index_map(dims, sigma)?;
    if map.len() != m.rows {
        return Err(Error::ShapeMismatch(format!("{} rows vs factor dims {dims:?}", m.rows)));
    }
    let mut out = Matrix::zeros(m.field, m.rows, m.cols);
    for (src, &t) in map.iter().enumerate() {
        for j in 0..m.cols {
            out.data[t * m.cols + j] = m.data[src * m.cols + j].clone();
        }
    }
    Ok(out)
}

/// `m * P_σ` without forming `P_σ`; `dims` are the source dims of `P_σ`.
pub fn permute_col_factors(m: &Matrix, dims: &[usize], sigma: &[usize]) -> Result<Matrix> {
    let (tdims, _) = perm_index_map(dims, sigma)?;
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    Ok(permute_row_factors(&m.transpose(), &tdims, &inv)?.transpose())
}

/// `(I ⊗ op ⊗ I) * m`, where the rows of `m` split as `dims` and `op` acts on
/// factor `pos`.
pub fn apply_on_factor(m: &Matrix, dims: &[usize], pos: usize, op: &Matrix) -> Result<Matrix> {
    let total: usize = dims.iter().product();
    if total != m.rows || pos >= dims.len() || op.cols != dims[pos] {
        return Err(Error::ShapeMismatch(format!(
            "apply {}x{} on factor {pos} of {dims:?} ({} rows)",
            op.rows, op.cols, m.rows
        )));
    }
    let before: usize = dims[..pos].iter().product();
    let after: usize = dims[pos + 1..].iter().product();
    let q = dims[pos];
    let p = op.rows;
    let mut op_cols: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); q];
    for i in 0..p {
        for k in 0..q {
            let v = op.get(i, k);
            if !v.is_zero() {
                op_cols[k].push((i, v));
            }
        }
    }
    let mut out = Matrix::zeros(m.field, before * p * after, m.cols);
    for a in 0..before {
        for k in 0..q {
            if op_cols[k].is_empty() {
                continue;
            }
            for b in 0..after {
                let r = (a * q + k) * after + b;
                for j in 0..m.cols {
                    let v = m.get(r, j);
                    if v.is_zero() {
                        continue;
                    }
                    for &(i, o) in &op_cols[k] {
                        out.add_at((a * p + i) * after + b, j, &(o * v));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Basis of the null space, one vector per column.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let (r, piv) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !piv.contains(c)).collect();
    let mut k = Matrix::zeros(m.field, m.cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k.set(f, j, m.field.one());
        for (row, &p) in piv.iter().enumerate() {
            k.set(p, j, -r.get(row, f));
        }
    }
    k
}

/// Basis of the column space, as columns of `m` selected by pivots.
pub fn image_basis(m: &Matrix) -> Matrix {
    let (_, piv) = m.rref();
    let cols: Vec<Matrix> = piv.iter().map(|&c| m.columns(c, 1)).collect();
    if cols.is_empty() {
        return Matrix::zeros(m.field, m.rows, 0);
    }
    Matrix::hstack(&cols.iter().collect::<Vec<_>>()).unwrap()
}

/// Cokernel of `m: k^c -> k^r`: a surjection `proj` with `proj * m = 0` and a
/// section with `proj * section = I`. `proj` is in reduced row echelon form.
pub fn cokernel(m: &Matrix) -> (Matrix, Matrix) {
    let left = kernel_basis(&m.transpose()).transpose();
    let (proj, piv) = left.rref();
    let k = piv.len();
    let proj = proj.row_block(0, k);
    let mut section = Matrix::zeros(m.field, m.rows, k);
    for (j, &p) in piv.iter().enumerate() {
        section.set(p, j, m.field.one());
    }
    (proj, section)
}

/// A particular solution `X` of `a * X = b` (free variables set to zero).
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows != b.rows {
        return Err(Error::ShapeMismatch(format!("solve: {} rows vs {} rows", a.rows, b.rows)));
    }
    let n = a.cols;
    let aug = Matrix::hstack(&[a, b])?;
    let (r, piv) = aug.rref();
    if let Some(&p) = piv.iter().find(|&&p| p >= n) {
        return Err(Error::Inconsistent(format!("right-hand side column {} not in the image", p - n)));
    }
    let mut x = Matrix::zeros(a.field, n, b.cols);
    for (row, &p) in piv.iter().enumerate() {
        for j in 0..b.cols {
            x.set(p, j, r.get(row, n + j).clone());
        }
    }
    Ok(x)
}

/// `X` with `X * a = b`.
pub fn solve_left(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    Ok(solve(&a.transpose(), &b.transpose())?.transpose())
}
