use crate::algebra::field::{Fe, Field};
use crate::error::{Error, Result};

/// Column vector over a field.
pub type Vector = Vec<Fe>;

/// Dense row-major matrix over a field. Group elements are always square.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Fe::ONE;
        }
        m
    }

    pub fn scalar(n: usize, c: Fe) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diagonal(diag: &[Fe]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to basis vector `images[j]`.
    pub fn permutation(images: &[usize]) -> Self {
        let n = images.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in images.iter().enumerate() {
            m.data[i * n + j] = Fe::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                m.data[i * c + j] = x;
            }
        }
        Ok(m)
    }

    /// Convenience constructor for prime-field matrices from signed integers.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Self::from_rows(rows).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { Fe::ONE } else { Fe::ZERO })
            })
    }

    /// Some(c) if this is the scalar matrix c*I.
    pub fn scalar_value(&self) -> Option<Fe> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0);
        let ok = (0..self.rows).all(|i| {
            (0..self.cols).all(|j| self.get(i, j) == if i == j { c } else { Fe::ZERO })
        });
        ok.then_some(c)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diag(&self) -> Vec<Fe> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn trace(&self, f: &Field) -> Fe {
        (0..self.rows).fold(Fe::ZERO, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, f: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(f, other))
    }

    pub fn apply(&self, f: &Field, v: &[Fe]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn try_apply(&self, f: &Field, v: &[Fe]) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!("{}x{} applied to length {}", self.rows, self.cols, v.len())));
        }
        Ok(self.apply(f, v))
    }

    pub fn add(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &Field, c: Fe) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                let x = self.get(r, j);
                self.set(r, j, f.mul(x, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right null space {v : M v = 0}.
    pub fn nullspace(&self, f: &Field) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[fc] = Fe::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Inverse by Gauss-Jordan elimination on [M | I].
    pub fn inverse(&self, f: &Field) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn det(&self, f: &Field) -> Fe {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Fe::ZERO;
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    /// True iff some t in the field is a root of det(M - tI).
    pub fn has_eigenvalue(&self, f: &Field) -> bool {
        let n = self.rows;
        f.elements().any(|t| {
            let mut shifted = self.clone();
            for i in 0..n {
                let d = f.sub(shifted.get(i, i), t);
                shifted.set(i, i, d);
            }
            shifted.rank(f) < n
        })
    }

    /// Conjugate `self^g = g^-1 * self * g`.
    pub fn conjugate_by(&self, f: &Field, g: &Matrix, g_inv: &Matrix) -> Matrix {
        g_inv.mul(f, &self.mul(f, g))
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Matrix {
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative order of an invertible matrix (naive repeated multiplication).
    pub fn order(&self, f: &Field) -> u64 {
        let mut k = 1u64;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = cur.mul(f, self);
            k += 1;
        }
        k
    }

    /// Restriction of an invariant subspace action: columns of `basis` span a subspace U with
    /// M U <= U; returns the matrix of M|U in that basis, or None if U is not invariant.
    pub fn restrict(&self, f: &Field, basis: &[Vector]) -> Option<Matrix> {
        let k = basis.len();
        let b = Matrix::from_columns(basis).ok()?;
        let mut cols = Vec::with_capacity(k);
        for v in basis {
            cols.push(solve_in_span(f, &b, &self.apply(f, v))?);
        }
        Matrix::from_columns(&cols).ok()
    }
}

/// Coordinates c with B c = target, if target is in the column span of B (columns independent).
pub fn solve_in_span(f: &Field, b: &Matrix, target: &[Fe]) -> Option<Vector> {
    let (n, k) = (b.rows(), b.cols());
    let mut aug = Matrix::zeros(n, k + 1);
    for i in 0..n {
        for j in 0..k {
            aug.set(i, j, b.get(i, j));
        }
        aug.set(i, k, target[i]);
    }
    let pivots = aug.rref(f);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Fe::ZERO; k];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = aug.get(r, k);
    }
    Some(c)
}

pub fn vec_add(f: &Field, a: &[Fe], b: &[Fe]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_scale(f: &Field, c: Fe, a: &[Fe]) -> Vector {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn vec_is_zero(a: &[Fe]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Unit vector e_i of length n.
pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Fe::ZERO; n];
    v[i] = Fe::ONE;
    v
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub fn normalize_projective(f: &Field, v: &[Fe]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(&lead) => vec_scale(f, f.inv(lead).expect("nonzero"), v),
    }
}

/// All vectors of F^n in code order (vector index = little-endian base-q digits).
pub fn all_vectors(f: &Field, n: usize) -> impl Iterator<Item = Vector> + '_ {
    let q = f.order() as u64;
    let total = q.pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % q) as u32;
                code /= q;
                Fe(d)
            })
            .collect()
    })
}

/// Row-echelon basis of the span of the given vectors.
pub fn span_basis(f: &Field, vecs: &[Vector]) -> Vec<Vector> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(vecs.to_vec()).expect("equal lengths");
    let r = m.rref(f).len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}
