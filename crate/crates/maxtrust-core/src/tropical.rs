//! Max-plus (tropical) scalars, vectors and dense matrices.
//!
//! The carrier set is R ∪ {ε} with ε = -inf. Addition is the maximum,
//! a ⊕ b = max(a, b), and multiplication is conventional addition,
//! a ⊗ b = a + b. The ⊕-identity is ε (absorbing under ⊗) and the
//! ⊗-identity is e = 0. Both operations are commutative and associative,
//! ⊕ is idempotent, and ⊗ distributes over ⊕, so matrix algebra carries
//! over by substituting the two operations into the usual formulas.
//!
//! ε is a sentinel meaning "no entry", not a number that arithmetic may
//! produce: every operation branches on it explicitly, and combining two
//! finite values always yields a finite value. IEEE -inf backs the sentinel
//! for storage and comparisons only.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Range};

/// Scalar of the max-plus semiring: a finite `f64` or ε.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct TropicalScalar(f64);

impl TropicalScalar {
    /// ε, the ⊕-identity and ⊗-absorbing element.
    pub const EPSILON: TropicalScalar = TropicalScalar(f64::NEG_INFINITY);

    /// e = 0, the ⊗-identity.
    pub const IDENTITY: TropicalScalar = TropicalScalar(0.0);

    /// Wraps a finite value. Panics on NaN or ±inf: non-finite floats must
    /// never masquerade as trust scores, and ε is only created explicitly.
    pub fn finite(value: f64) -> TropicalScalar {
        assert!(value.is_finite(), "tropical scalar must be finite, got {value}");
        TropicalScalar(value)
    }

    pub fn is_epsilon(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Raw backing value; ε reads as -inf.
    pub fn raw(self) -> f64 {
        self.0
    }

    pub fn as_finite(self) -> Option<f64> {
        if self.is_finite() {
            Some(self.0)
        } else {
            None
        }
    }

    /// a ⊕ b = max(a, b). ε is neutral.
    pub fn oplus(self, rhs: TropicalScalar) -> TropicalScalar {
        if self.is_epsilon() {
            return rhs;
        }
        if rhs.is_epsilon() {
            return self;
        }
        if self.0 >= rhs.0 {
            self
        } else {
            rhs
        }
    }

    /// a ⊗ b = a + b. ε absorbs.
    pub fn otimes(self, rhs: TropicalScalar) -> TropicalScalar {
        if self.is_epsilon() || rhs.is_epsilon() {
            return TropicalScalar::EPSILON;
        }
        let sum = self.0 + rhs.0;
        debug_assert!(sum.is_finite(), "finite ⊗ finite overflowed: {} + {}", self.0, rhs.0);
        TropicalScalar(sum)
    }

    /// k-fold ⊗-power, a^{⊗k} = k·a. The empty product is e, so x^{⊗0} = e
    /// even for x = ε.
    pub fn otimes_pow(self, k: usize) -> TropicalScalar {
        if k == 0 {
            return TropicalScalar::IDENTITY;
        }
        if self.is_epsilon() {
            return TropicalScalar::EPSILON;
        }
        TropicalScalar(self.0 * k as f64)
    }

    /// ⊗-inverse, a^{⊗-1} = -a. Panics on ε, which has no inverse.
    pub fn otimes_inv(self) -> TropicalScalar {
        assert!(self.is_finite(), "ε has no ⊗-inverse");
        TropicalScalar(-self.0)
    }
}

impl Add for TropicalScalar {
    type Output = TropicalScalar;
    fn add(self, rhs: TropicalScalar) -> TropicalScalar {
        self.oplus(rhs)
    }
}

impl Mul for TropicalScalar {
    type Output = TropicalScalar;
    fn mul(self, rhs: TropicalScalar) -> TropicalScalar {
        self.otimes(rhs)
    }
}

impl fmt::Display for TropicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_epsilon() {
            write!(f, "eps")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for TropicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense max-plus vector.
#[derive(Clone, PartialEq)]
pub struct TropicalVector {
    entries: Vec<TropicalScalar>,
}

impl TropicalVector {
    pub fn from_entries(entries: Vec<TropicalScalar>) -> TropicalVector {
        TropicalVector { entries }
    }

    /// Vector of finite values.
    pub fn finite(values: &[f64]) -> TropicalVector {
        TropicalVector {
            entries: values.iter().map(|&v| TropicalScalar::finite(v)).collect(),
        }
    }

    /// All-ε vector.
    pub fn epsilon(n: usize) -> TropicalVector {
        TropicalVector { entries: vec![TropicalScalar::EPSILON; n] }
    }

    /// All-e vector, the usual regular start for power iterations.
    pub fn identity(n: usize) -> TropicalVector {
        TropicalVector { entries: vec![TropicalScalar::IDENTITY; n] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> TropicalScalar {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, v: TropicalScalar) {
        self.entries[i] = v;
    }

    pub fn entries(&self) -> &[TropicalScalar] {
        &self.entries
    }

    pub fn iter(&self) -> core::slice::Iter<'_, TropicalScalar> {
        self.entries.iter()
    }

    /// True when at least one entry is finite.
    pub fn is_admissible(&self) -> bool {
        self.entries.iter().any(|e| e.is_finite())
    }

    /// True when every entry is finite (a regular start vector).
    pub fn is_regular(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    /// Entrywise ⊕.
    pub fn oplus(&self, rhs: &TropicalVector) -> TropicalVector {
        assert_eq!(self.len(), rhs.len(), "⊕ of vectors of different lengths");
        TropicalVector {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a.oplus(b))
                .collect(),
        }
    }

    /// Scales every entry by c, i.e. adds c to the finite ones.
    pub fn otimes_scalar(&self, c: TropicalScalar) -> TropicalVector {
        TropicalVector { entries: self.entries.iter().map(|&a| a.otimes(c)).collect() }
    }
}

impl fmt::Display for TropicalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for TropicalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shape mismatch in a matrix or vector operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeError {
    pub op: &'static str,
    pub lhs: (usize, usize),
    pub rhs: (usize, usize),
}

impl fmt::Display for ShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: incompatible shapes {}x{} and {}x{}",
            self.op, self.lhs.0, self.lhs.1, self.rhs.0, self.rhs.1
        )
    }
}

impl core::error::Error for ShapeError {}

/// Dense row-major max-plus matrix.
#[derive(Clone, PartialEq)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TropicalScalar>,
}

impl TropicalMatrix {
    /// The zero matrix ℰ (all entries ε).
    pub fn epsilon(rows: usize, cols: usize) -> TropicalMatrix {
        TropicalMatrix { rows, cols, data: vec![TropicalScalar::EPSILON; rows * cols] }
    }

    /// The identity E_n: e on the diagonal, ε elsewhere.
    pub fn identity(n: usize) -> TropicalMatrix {
        let mut m = TropicalMatrix::epsilon(n, n);
        for i in 0..n {
            m.set(i, i, TropicalScalar::IDENTITY);
        }
        m
    }

    /// Builds from rows of raw values, mapping -inf to ε. Panics on NaN or
    /// +inf and on ragged rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> TropicalMatrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = TropicalMatrix::epsilon(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                if v != f64::NEG_INFINITY {
                    m.set(i, j, TropicalScalar::finite(v));
                }
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TropicalScalar) -> TropicalMatrix {
        let mut m = TropicalMatrix::epsilon(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
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

    pub fn get(&self, i: usize, j: usize) -> TropicalScalar {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TropicalScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[TropicalScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix product with ⊕ as sum and ⊗ as product:
    /// (A ⊗ B)_ij = ⊕_k A_ik ⊗ B_kj.
    pub fn mat_mul(&self, rhs: &TropicalMatrix) -> Result<TropicalMatrix, ShapeError> {
        if self.cols != rhs.rows {
            return Err(ShapeError {
                op: "mat_mul",
                lhs: (self.rows, self.cols),
                rhs: (rhs.rows, rhs.cols),
            });
        }
        let mut out = TropicalMatrix::epsilon(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = TropicalScalar::EPSILON;
                for k in 0..self.cols {
                    acc = acc.oplus(self.get(i, k).otimes(rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// (A ⊗ v)_i = ⊕_j A_ij ⊗ v_j.
    pub fn mat_vec(&self, v: &TropicalVector) -> Result<TropicalVector, ShapeError> {
        if self.cols != v.len() {
            return Err(ShapeError {
                op: "mat_vec",
                lhs: (self.rows, self.cols),
                rhs: (v.len(), 1),
            });
        }
        let mut out = TropicalVector::epsilon(self.rows);
        for i in 0..self.rows {
            let mut acc = TropicalScalar::EPSILON;
            for j in 0..self.cols {
                acc = acc.oplus(self.get(i, j).otimes(v.get(j)));
            }
            out.set(i, acc);
        }
        Ok(out)
    }

    /// k-th ⊗-power of a square matrix; A^{⊗0} = E_n.
    pub fn mat_pow(&self, k: usize) -> Result<TropicalMatrix, ShapeError> {
        if !self.is_square() {
            return Err(ShapeError {
                op: "mat_pow",
                lhs: (self.rows, self.cols),
                rhs: (self.rows, self.cols),
            });
        }
        let mut out = TropicalMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mat_mul(self)?;
        }
        Ok(out)
    }

    /// ⊕ over the diagonal; ε for ℰ-diagonals and for the empty matrix.
    pub fn trace(&self) -> TropicalScalar {
        let n = self.rows.min(self.cols);
        let mut acc = TropicalScalar::EPSILON;
        for i in 0..n {
            acc = acc.oplus(self.get(i, i));
        }
        acc
    }

    pub fn transpose(&self) -> TropicalMatrix {
        TropicalMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Copies the block at the given row and column ranges.
    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> TropicalMatrix {
        assert!(rows.end <= self.rows && cols.end <= self.cols, "submatrix out of range");
        let (r0, c0) = (rows.start, cols.start);
        TropicalMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j))
    }

    /// True when some entry of the block is finite.
    pub fn block_is_coupled(&self, rows: Range<usize>, cols: Range<usize>) -> bool {
        for i in rows {
            for j in cols.clone() {
                if self.get(i, j).is_finite() {
                    return true;
                }
            }
        }
        false
    }

    /// Row indices with no finite entry. Empty means the matrix is regular.
    pub fn irregular_rows(&self) -> Vec<usize> {
        (0..self.rows)
            .filter(|&i| self.row(i).iter().all(|e| e.is_epsilon()))
            .collect()
    }
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} max-plus matrix:", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

/// Renders a finite value or the reserved token `eps`; inverse of
/// [`parse_scalar_token`]. Finite values use the shortest representation
/// that round-trips bit-exactly.
pub fn scalar_token(s: TropicalScalar) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let _ = write!(out, "{s}");
    out
}

/// Parses `eps` or a finite float; rejects NaN and ±inf spellings.
pub fn parse_scalar_token(tok: &str) -> Option<TropicalScalar> {
    if tok == "eps" {
        return Some(TropicalScalar::EPSILON);
    }
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(TropicalScalar::finite(v)),
        _ => None,
    }
}
