//! Exact-rational dense matrix backend.
//!
//! Objects are words of named factors, morphisms are dense matrices of
//! arbitrary-precision rationals. Tensor factors index row-major with the
//! leftmost factor most significant, which pins the Kronecker layout and the
//! braiding permutation bit-exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scalar of the backend: an exact rational number.
pub type Scalar = BigRational;

/// Build a scalar from an integer pair.
pub fn rat(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integer scalar.
pub fn int(num: i64) -> Scalar {
    BigRational::from(BigInt::from(num))
}

/// Parse a rational from `"p/q"` or `"p"` form.
pub fn parse_rat(text: &str) -> Result<Scalar, MatError> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| MatError::BadRational(text.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| MatError::BadRational(text.to_string()))?;
    if den.is_zero() {
        return Err(MatError::BadRational(text.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// Format a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rat(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("dimension mismatch in {op}: {lhs} vs {rhs}")]
    DimMismatch { op: &'static str, lhs: usize, rhs: usize },
    #[error("matrix shape {rows}x{cols} does not match object dimensions {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("morphism is not idempotent")]
    NotIdempotent,
    #[error("morphism is not square")]
    NotSquare,
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
}

/// One named tensor factor of an object word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

impl Factor {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Factor { label: label.into(), dim }
    }
}

/// An object of the matrix category: a word of named factors.
///
/// The empty word is the monoidal unit `I` and has total dimension one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MatObject {
    pub factors: Vec<Factor>,
}

impl MatObject {
    /// The monoidal unit.
    pub fn unit() -> Self {
        MatObject { factors: Vec::new() }
    }

    pub fn single(label: impl Into<String>, dim: usize) -> Self {
        MatObject { factors: vec![Factor::new(label, dim)] }
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        MatObject { factors }
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Concatenate factor words.
    pub fn tensor(&self, other: &MatObject) -> MatObject {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        MatObject { factors }
    }

    /// The n-fold tensor power of this word.
    pub fn pow(&self, n: usize) -> MatObject {
        let mut factors = Vec::with_capacity(self.factors.len() * n);
        for _ in 0..n {
            factors.extend(self.factors.iter().cloned());
        }
        MatObject { factors }
    }

    /// Tensor a list of words together.
    pub fn concat(words: &[MatObject]) -> MatObject {
        let mut out = MatObject::unit();
        for w in words {
            out = out.tensor(w);
        }
        out
    }

    /// A short human-readable name, used when deriving labels for split objects.
    pub fn display_label(&self) -> String {
        if self.factors.is_empty() {
            "I".to_string()
        } else {
            self.factors
                .iter()
                .map(|f| f.label.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// A morphism of the matrix category: domain and codomain words plus a dense
/// matrix of shape `cod.total_dim() x dom.total_dim()` in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatMorphism {
    pub dom: MatObject,
    pub cod: MatObject,
    data: Vec<Scalar>,
}

impl MatMorphism {
    pub fn new(dom: MatObject, cod: MatObject, data: Vec<Scalar>) -> Result<Self, MatError> {
        let rows = cod.total_dim();
        let cols = dom.total_dim();
        if data.len() != rows * cols {
            return Err(MatError::ShapeMismatch {
                rows: if cols == 0 { 0 } else { data.len() / cols },
                cols,
                expected_rows: rows,
                expected_cols: cols,
            });
        }
        Ok(MatMorphism { dom, cod, data })
    }

    pub fn from_rows(dom: MatObject, cod: MatObject, rows: Vec<Vec<Scalar>>) -> Result<Self, MatError> {
        let expected_rows = cod.total_dim();
        let expected_cols = dom.total_dim();
        if rows.len() != expected_rows || rows.iter().any(|r| r.len() != expected_cols) {
            return Err(MatError::ShapeMismatch {
                rows: rows.len(),
                cols: rows.first().map_or(0, |r| r.len()),
                expected_rows,
                expected_cols,
            });
        }
        Ok(MatMorphism {
            dom,
            cod,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer entries.
    pub fn from_int_rows(dom: MatObject, cod: MatObject, rows: &[&[i64]]) -> Result<Self, MatError> {
        MatMorphism::from_rows(
            dom,
            cod,
            rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.cod.total_dim()
    }

    pub fn cols(&self) -> usize {
        self.dom.total_dim()
    }

    pub fn at(&self, row: usize, col: usize) -> &Scalar {
        &self.data[row * self.cols() + col]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn identity(obj: &MatObject) -> Self {
        let n = obj.total_dim();
        let mut data = vec![Scalar::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Scalar::one();
        }
        MatMorphism { dom: obj.clone(), cod: obj.clone(), data }
    }

    pub fn zero(dom: MatObject, cod: MatObject) -> Self {
        let len = dom.total_dim() * cod.total_dim();
        MatMorphism { dom, cod, data: vec![Scalar::zero(); len] }
    }

    /// The endomorphism of `I` given by a scalar.
    pub fn scalar(value: Scalar) -> Self {
        MatMorphism { dom: MatObject::unit(), cod: MatObject::unit(), data: vec![value] }
    }

    pub fn scale(&self, value: &Scalar) -> Self {
        let data = self.data.iter().map(|x| x * value).collect();
        MatMorphism { dom: self.dom.clone(), cod: self.cod.clone(), data }
    }

    pub fn is_identity(&self) -> bool {
        if self.rows() != self.cols() {
            return false;
        }
        let n = self.rows();
        self.data.iter().enumerate().all(|(idx, v)| {
            if idx / n == idx % n { v.is_one() } else { v.is_zero() }
        })
    }

    pub fn is_zero_morphism(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Entry-wise equality within `tol`; used by the float escape hatch.
    pub fn approx_eq(&self, other: &MatMorphism, tol: &Scalar) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self
                .data
                .iter()
                .zip(other.data.iter())
                .all(|(a, b)| (a - b).abs() <= *tol)
    }

    /// The rank of the underlying matrix, by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        rref(self.rows(), self.cols(), self.data.clone()).pivots.len()
    }

    /// Exact inverse, if the matrix is square and nonsingular.
    pub fn inverse(&self) -> Option<MatMorphism> {
        if self.rows() != self.cols() {
            return None;
        }
        let n = self.rows();
        // Augment with the identity and reduce.
        let mut data = vec![Scalar::zero(); n * 2 * n];
        for i in 0..n {
            for j in 0..n {
                data[i * 2 * n + j] = self.data[i * n + j].clone();
            }
            data[i * 2 * n + n + i] = Scalar::one();
        }
        let red = rref(n, 2 * n, data);
        if red.pivots.len() != n || red.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut out = vec![Scalar::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = red.data[i * 2 * n + n + j].clone();
            }
        }
        Some(MatMorphism { dom: self.cod.clone(), cod: self.dom.clone(), data: out })
    }
}

/// Composite `g∘f` (apply `f` first). Requires `f.cod` and `g.dom` to have
/// equal total dimension.
pub fn mat_compose(g: &MatMorphism, f: &MatMorphism) -> Result<MatMorphism, MatError> {
    if f.rows() != g.cols() {
        return Err(MatError::DimMismatch { op: "compose", lhs: g.cols(), rhs: f.rows() });
    }
    let m = g.rows();
    let k = g.cols();
    let n = f.cols();
    let mut data = vec![Scalar::zero(); m * n];
    for i in 0..m {
        for p in 0..k {
            let gv = &g.data[i * k + p];
            if gv.is_zero() {
                continue;
            }
            for j in 0..n {
                let fv = &f.data[p * n + j];
                if !fv.is_zero() {
                    let term = gv * fv;
                    data[i * n + j] += term;
                }
            }
        }
    }
    Ok(MatMorphism { dom: f.dom.clone(), cod: g.cod.clone(), data })
}

/// Compose a chain right-to-left: `chain(&[h, g, f]) = h∘g∘f`.
pub fn mat_chain(parts: &[&MatMorphism]) -> Result<MatMorphism, MatError> {
    let mut it = parts.iter().rev();
    let first = it.next().expect("empty composition chain");
    let mut acc = (*first).clone();
    for part in it {
        acc = mat_compose(part, &acc)?;
    }
    Ok(acc)
}

/// Tensor (Kronecker) product; domain and codomain words concatenate.
pub fn mat_tensor(f: &MatMorphism, g: &MatMorphism) -> MatMorphism {
    let (fr, fc) = (f.rows(), f.cols());
    let (gr, gc) = (g.rows(), g.cols());
    let rows = fr * gr;
    let cols = fc * gc;
    let mut data = vec![Scalar::zero(); rows * cols];
    for fi in 0..fr {
        for fj in 0..fc {
            let fv = &f.data[fi * fc + fj];
            if fv.is_zero() {
                continue;
            }
            for gi in 0..gr {
                for gj in 0..gc {
                    let gv = &g.data[gi * gc + gj];
                    if !gv.is_zero() {
                        data[(fi * gr + gi) * cols + (fj * gc + gj)] = fv * gv;
                    }
                }
            }
        }
    }
    MatMorphism {
        dom: f.dom.tensor(&g.dom),
        cod: f.cod.tensor(&g.cod),
        data,
    }
}

/// Tensor a list of morphisms together; the empty list gives `1_I`.
pub fn mat_tensor_all(parts: &[MatMorphism]) -> MatMorphism {
    let mut acc = MatMorphism::identity(&MatObject::unit());
    for p in parts {
        acc = mat_tensor(&acc, p);
    }
    acc
}

/// The symmetric braiding `c_{A,B}: A⊗B → B⊗A` as a permutation matrix.
pub fn braiding(a: &MatObject, b: &MatObject) -> MatMorphism {
    let da = a.total_dim();
    let db = b.total_dim();
    let n = da * db;
    let mut data = vec![Scalar::zero(); n * n];
    for i in 0..da {
        for j in 0..db {
            let col = i * db + j;
            let row = j * da + i;
            data[row * n + col] = Scalar::one();
        }
    }
    MatMorphism { dom: a.tensor(b), cod: b.tensor(a), data }
}

struct Reduced {
    data: Vec<Scalar>,
    pivots: Vec<usize>,
}

/// Reduced row echelon form by exact Gaussian elimination with
/// first-nonzero pivoting; deterministic for a given input.
fn rref(rows: usize, cols: usize, mut data: Vec<Scalar>) -> Reduced {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot_row = (row..rows).find(|&r| !data[r * cols + col].is_zero());
        let Some(pr) = pivot_row else { continue };
        if pr != row {
            for c in 0..cols {
                data.swap(row * cols + c, pr * cols + c);
            }
        }
        let inv = {
            let p = &data[row * cols + col];
            Scalar::one() / p.clone()
        };
        for c in col..cols {
            let v = &data[row * cols + c] * &inv;
            data[row * cols + c] = v;
        }
        for r in 0..rows {
            if r == row || data[r * cols + col].is_zero() {
                continue;
            }
            let factor = data[r * cols + col].clone();
            for c in col..cols {
                let sub = &factor * &data[row * cols + c];
                data[r * cols + c] -= sub;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Reduced { data, pivots }
}

/// Split an exact idempotent `e` as `e = s∘r` with `r∘s = 1` on an object of
/// dimension `rank(e)`, by exact rank factorization.
pub fn split_idempotent(e: &MatMorphism) -> Result<(MatMorphism, MatMorphism), MatError> {
    if e.rows() != e.cols() {
        return Err(MatError::NotSquare);
    }
    let ee = mat_compose(e, e)?;
    if ee != *e {
        return Err(MatError::NotIdempotent);
    }
    let d = e.rows();
    let red = rref(d, d, e.data.clone());
    let k = red.pivots.len();
    let image = MatObject::single(format!("split({})", e.dom.display_label()), k);
    // Section: the pivot columns of e itself.
    let mut s_data = vec![Scalar::zero(); d * k];
    for (sc, &col) in red.pivots.iter().enumerate() {
        for r in 0..d {
            s_data[r * k + sc] = e.data[r * d + col].clone();
        }
    }
    // Retraction: the nonzero rows of the reduced form.
    let mut r_data = vec![Scalar::zero(); k * d];
    for rr in 0..k {
        for c in 0..d {
            r_data[rr * d + c] = red.data[rr * d + c].clone();
        }
    }
    let section = MatMorphism { dom: image.clone(), cod: e.dom.clone(), data: s_data };
    let retraction = MatMorphism { dom: e.dom.clone(), cod: image, data: r_data };
    Ok((retraction, section))
}
