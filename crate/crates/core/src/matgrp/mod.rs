//! Matrix groups over GF(p^a): enumeration, stabilizers, restriction to
//! invariant subspaces, and the Fitting-structure data used by the base
//! constructions.

mod fitting;
mod normalizer;

pub use fitting::{
    detect_structure, monomial_basis, monomial_decompose, monomial_permutation, nonmonomial_basis,
    FittingStructure,
};
pub use normalizer::normalizer_in_gl;

use serde::{Deserialize, Serialize};

use crate::algebra::matrix::{solve_in_span, span_basis};
use crate::algebra::{Fe, Field, Matrix, Vector};
use crate::error::{Error, Result};
use crate::group::{Group, GroupOps};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatOps {
    pub field: Field,
    pub dim: usize,
}

impl GroupOps for MatOps {
    type Elem = Matrix;

    fn identity(&self) -> Matrix {
        Matrix::identity(self.dim)
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.mul(&self.field, b)
    }

    fn inv(&self, a: &Matrix) -> Matrix {
        a.inverse(&self.field).expect("group elements are invertible")
    }

    fn is_identity(&self, a: &Matrix) -> bool {
        a.is_identity()
    }
}

pub type MatGroup = Group<MatOps>;

/// Group generated by invertible `dim x dim` matrices over `field`.
pub fn mat_group(field: &Field, dim: usize, gens: Vec<Matrix>) -> Result<MatGroup> {
    for g in &gens {
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::Dimension(format!("generator is {}x{}, expected {dim}x{dim}", g.rows(), g.cols())));
        }
        if !g.is_invertible(field) {
            return Err(Error::Singular);
        }
    }
    Ok(Group::new(MatOps { field: field.clone(), dim }, gens))
}

pub fn field_of(g: &MatGroup) -> &Field {
    &g.ops().field
}

pub fn dim_of(g: &MatGroup) -> usize {
    g.ops().dim
}

/// `{h : h x = x}`.
pub fn vector_stabilizer(g: &MatGroup, x: &[Fe]) -> MatGroup {
    let f = field_of(g);
    g.subgroup_where(|h| h.apply(f, x) == x)
}

/// `C_G(x) ∩ C_G(y)`.
pub fn pair_stabilizer(g: &MatGroup, x: &[Fe], y: &[Fe]) -> MatGroup {
    let f = field_of(g);
    g.subgroup_where(|h| h.apply(f, x) == x && h.apply(f, y) == y)
}

/// Size of the orbit `G·x`, from the stabilizer order.
pub fn orbit_size(g: &MatGroup, x: &[Fe]) -> usize {
    g.order() / vector_stabilizer(g, x).order()
}

/// The orbit `G·x` by breadth-first search over the generators.
pub fn orbit(g: &MatGroup, x: &[Fe]) -> Vec<Vector> {
    let f = field_of(g);
    let mut seen = std::collections::BTreeSet::from([x.to_vec()]);
    let mut queue = vec![x.to_vec()];
    while let Some(v) = queue.pop() {
        for gen in g.gens() {
            let w = gen.apply(f, &v);
            if seen.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn fitting_subgroup(g: &MatGroup) -> MatGroup {
    g.fitting_subgroup()
}

/// `g` with every scalar matrix adjoined (not enumerated).
pub fn with_scalars(g: &MatGroup) -> MatGroup {
    let f = field_of(g);
    let mut gens = g.gens().to_vec();
    if f.order() > 2 {
        gens.push(Matrix::scalar(dim_of(g), f.alpha()));
    }
    Group::new(g.ops().clone(), gens)
}

/// Row-echelon basis of the smallest `G`-invariant subspace containing `vecs`.
pub fn submodule_closure(g: &MatGroup, vecs: &[Vector]) -> Vec<Vector> {
    let f = field_of(g);
    let mut basis = span_basis(f, vecs);
    loop {
        let mut all = basis.clone();
        for v in &basis {
            for gen in g.gens() {
                all.push(gen.apply(f, v));
            }
        }
        let next = span_basis(f, &all);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

/// True iff every generator maps the span of `basis` into itself.
pub fn is_invariant(g: &MatGroup, basis: &[Vector]) -> bool {
    let f = field_of(g);
    if basis.is_empty() {
        return true;
    }
    let b = Matrix::from_columns(basis).expect("equal lengths");
    g.gens().iter().all(|gen| basis.iter().all(|v| solve_in_span(f, &b, &gen.apply(f, v)).is_some()))
}

/// Matrix of `h` restricted to the invariant subspace with the given basis.
pub fn restrict_matrix(f: &Field, h: &Matrix, basis: &[Vector]) -> Result<Matrix> {
    h.restrict(f, basis).ok_or_else(|| Error::Precondition("subspace is not invariant".into()))
}

/// The action of `g` on an invariant subspace, in the coordinates of `basis`
/// (enumerated; may have a kernel).
pub fn restrict_group(g: &MatGroup, basis: &[Vector], cap: usize) -> Result<MatGroup> {
    let f = field_of(g);
    let gens = g.gens().iter().map(|h| restrict_matrix(f, h, basis)).collect::<Result<Vec<_>>>()?;
    Group::enumerated(MatOps { field: f.clone(), dim: basis.len() }, gens, cap)
}

/// `P^-1 g P` for every generator, where the columns of `P` are `basis`.
pub fn in_basis(g: &MatGroup, basis: &[Vector]) -> Result<MatGroup> {
    let f = field_of(g);
    let p = Matrix::from_columns(basis)?;
    let p_inv = p.inverse(f)?;
    let conj = |h: &Matrix| h.conjugate_by(f, &p, &p_inv);
    let gens = g.gens().iter().map(conj).collect();
    let out = Group::new(g.ops().clone(), gens);
    if g.is_enumerated() {
        out.enumerate(g.order())
    } else {
        Ok(out)
    }
}

/// Coordinates of `v` in `basis` (columns independent).
pub fn coordinates(f: &Field, basis: &[Vector], v: &[Fe]) -> Result<Vector> {
    let b = Matrix::from_columns(basis)?;
    solve_in_span(f, &b, v).ok_or_else(|| Error::Precondition("vector is not in the span".into()))
}

/// `Σ c_i basis_i`.
pub fn combine(f: &Field, basis: &[Vector], coeffs: &[Fe]) -> Vector {
    let n = basis.first().map_or(0, |b| b.len());
    let mut out = vec![Fe::ZERO; n];
    for (b, &c) in basis.iter().zip(coeffs) {
        for (o, &x) in out.iter_mut().zip(b) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

/// A field element in JSON: an integer (prime fields) or a coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Coeffs(Vec<u32>),
}

impl Entry {
    pub fn to_fe(&self, f: &Field) -> Result<Fe> {
        match self {
            Entry::Int(i) if f.degree() == 1 => Ok(f.from_int(*i)),
            Entry::Int(_) => Err(Error::Input("extension field entries must be coefficient lists".into())),
            Entry::Coeffs(c) if c.len() <= f.degree() as usize => {
                let mut c = c.clone();
                c.resize(f.degree() as usize, 0);
                f.from_coeffs(&c)
            }
            Entry::Coeffs(c) => f.from_coeffs(c),
        }
    }

    /// Integers over prime fields, coefficient lists otherwise.
    pub fn from_fe(f: &Field, x: Fe) -> Self {
        if f.degree() == 1 {
            return Entry::Int(x.0 as i64);
        }
        let mut c = f.coeffs(x);
        while c.len() > 1 && c.last() == Some(&0) {
            c.pop();
        }
        Entry::Coeffs(c)
    }
}

pub fn vector_from_entries(f: &Field, v: &[Entry]) -> Result<Vector> {
    v.iter().map(|e| e.to_fe(f)).collect()
}

pub fn vector_to_entries(f: &Field, v: &[Fe]) -> Vec<Entry> {
    v.iter().map(|&x| Entry::from_fe(f, x)).collect()
}

pub fn matrix_to_entries(f: &Field, m: &Matrix) -> Vec<Vec<Entry>> {
    m.to_rows().iter().map(|r| vector_to_entries(f, r)).collect()
}

pub fn matrix_from_entries(f: &Field, rows: &[Vec<Entry>]) -> Result<Matrix> {
    Matrix::from_rows(rows.iter().map(|r| vector_from_entries(f, r)).collect::<Result<Vec<_>>>()?)
}

/// JSON shape `{"p": p, "a": a, "dim": n, "generators": [matrix, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatGroupSpec {
    pub p: u32,
    pub a: u32,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<Entry>>>,
}

impl MatGroupSpec {
    pub fn build(&self) -> Result<MatGroup> {
        let f = Field::new(self.p, self.a)?;
        let gens = self.generators.iter().map(|m| matrix_from_entries(&f, m)).collect::<Result<Vec<_>>>()?;
        mat_group(&f, self.dim, gens)
    }

    pub fn from_group(g: &MatGroup) -> Self {
        let f = field_of(g);
        MatGroupSpec {
            p: f.p(),
            a: f.degree(),
            dim: dim_of(g),
            generators: g.gens().iter().map(|m| matrix_to_entries(f, m)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::unit;

    fn gf(p: u32) -> Field {
        Field::new(p, 1).unwrap()
    }

    #[test]
    fn scalar_group_stabilizers() {
        let f = gf(5);
        let g = mat_group(&f, 1, vec![Matrix::scalar(1, f.alpha())]).unwrap().enumerate(100).unwrap();
        assert_eq!(g.order(), 4);
        assert!(vector_stabilizer(&g, &[Fe::ONE]).is_trivial());
        assert_eq!(vector_stabilizer(&g, &[Fe::ZERO]).order(), 4);
        assert_eq!(orbit(&g, &[Fe::ONE]).len(), 4);
        assert_eq!(orbit_size(&g, &[Fe::ONE]), 4);
    }

    #[test]
    fn fitting_of_s3_over_gf7() {
        let f = gf(7);
        // S3 permuting the coordinates of the sum-zero plane, as 2x2 matrices
        let r = Matrix::from_ints(&f, &[&[0, -1], &[1, -1]]);
        let s = Matrix::from_ints(&f, &[&[0, 1], &[1, 0]]);
        let g = mat_group(&f, 2, vec![r.clone(), s]).unwrap().enumerate(100).unwrap();
        assert_eq!(g.order(), 6);
        let fit = fitting_subgroup(&g);
        assert_eq!(fit.order(), 3);
        assert!(fit.contains(&r));
        let ab = mat_group(&f, 2, vec![Matrix::from_ints(&f, &[&[2, 0], &[0, 3]])]).unwrap().enumerate(100).unwrap();
        assert_eq!(fitting_subgroup(&ab).order(), ab.order());
    }

    #[test]
    fn rejects_bad_generators() {
        let f = gf(5);
        assert_eq!(mat_group(&f, 2, vec![Matrix::zeros(2, 2)]).unwrap_err(), Error::Singular);
        assert!(mat_group(&f, 2, vec![Matrix::identity(3)]).is_err());
    }

    #[test]
    fn restriction_and_closure() {
        let f = gf(5);
        let g = mat_group(&f, 2, vec![Matrix::from_ints(&f, &[&[2, 1], &[0, 3]])]).unwrap();
        let sub = submodule_closure(&g, &[unit(2, 0)]);
        assert_eq!(sub.len(), 1);
        assert!(is_invariant(&g, &sub));
        let r = restrict_group(&g.enumerate(100).unwrap(), &sub, 100).unwrap();
        assert_eq!(r.order(), 4);
        assert_eq!(submodule_closure(&g, &[unit(2, 1)]).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let f = Field::new(3, 2).unwrap();
        let g = mat_group(&f, 2, vec![Matrix::scalar(2, f.alpha())]).unwrap();
        let spec = MatGroupSpec::from_group(&g);
        let text = serde_json::to_string(&spec).unwrap();
        let back: MatGroupSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap().gens(), g.gens());
        let ints: MatGroupSpec = serde_json::from_str(r#"{"p":5,"a":1,"dim":1,"generators":[[[2]]]}"#).unwrap();
        assert_eq!(ints.build().unwrap().gens()[0].get(0, 0), Fe(2));
    }
}
