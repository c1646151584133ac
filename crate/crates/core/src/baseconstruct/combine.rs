//! Reductions: invariant subspaces, systems of imprimitivity and field extensions.

use std::collections::BTreeSet;

use crate::algebra::matrix::{all_vectors, normalize_projective, span_basis, unit};
use crate::algebra::{Fe, Field, Matrix, Vector};
use crate::error::{Error, Result};
use crate::group::GroupOps;
use crate::matgrp::{combine, coordinates, dim_of, field_of, mat_group, submodule_closure, MatGroup};

/// Basis of the commuting algebra `End_G(V)`.
fn endomorphisms(g: &MatGroup) -> Vec<Matrix> {
    let f = field_of(g);
    let n = dim_of(g);
    let mut rows = Vec::new();
    for h in g.gens() {
        for i in 0..n {
            for j in 0..n {
                // (M h - h M)[i][j] = 0 in the unknowns M[a][b] at a * n + b
                let mut row = vec![Fe::ZERO; n * n];
                for k in 0..n {
                    row[i * n + k] = f.add(row[i * n + k], h.get(k, j));
                    row[k * n + j] = f.sub(row[k * n + j], h.get(i, k));
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return (0..n * n).map(|c| Matrix::from_rows(unit_rows(n, c)).unwrap()).collect();
    }
    let sys = Matrix::from_rows(rows).unwrap();
    sys.nullspace(f).into_iter().map(|v| Matrix::from_rows(v.chunks(n).map(<[Fe]>::to_vec).collect()).unwrap()).collect()
}

fn unit_rows(n: usize, c: usize) -> Vec<Vec<Fe>> {
    let v = unit(n * n, c);
    v.chunks(n).map(<[Fe]>::to_vec).collect()
}

const END_BUDGET: u64 = 20000;

/// A proper nonzero invariant subspace. Kernels of singular endomorphisms come
/// first; for `p ∤ |G|` a commuting algebra without zero divisors means `V` is
/// irreducible. Otherwise the least vector whose cyclic submodule is proper.
pub(crate) fn invariant_subspace(g: &MatGroup) -> Option<Vec<Vector>> {
    let f = field_of(g);
    let n = dim_of(g);
    let ends = endomorphisms(g);
    let k = ends.len() as u32;
    let small = (f.order() as u64).checked_pow(k).is_some_and(|s| s <= END_BUDGET);
    if k > 1 && small {
        for c in all_vectors(f, ends.len()).skip(1) {
            let mut m = Matrix::zeros(n, n);
            for (e, &ci) in ends.iter().zip(&c) {
                m = m.add(f, &e.scale(f, ci));
            }
            let ker = m.nullspace(f);
            if !ker.is_empty() {
                return Some(ker);
            }
        }
    }
    let coprime = g.order() % f.p() as usize != 0;
    if coprime && (k == 1 || small) {
        return None;
    }
    let mut tried: BTreeSet<Vector> = BTreeSet::new();
    for v in all_vectors(f, n).skip(1) {
        let v = normalize_projective(f, &v);
        if !tried.insert(v.clone()) {
            continue;
        }
        let sub = submodule_closure(g, &[v]);
        if sub.len() < n {
            return Some(sub);
        }
    }
    None
}

/// A `G`-invariant complement of `v1`, by averaging a projection over `G`.
/// Needs `p ∤ |G|`.
pub(crate) fn invariant_complement(g: &MatGroup, v1: &[Vector]) -> Result<Vec<Vector>> {
    let f = field_of(g);
    let n = dim_of(g);
    let order = g.order() as i64;
    let inv_order = f.inv(f.from_int(order)).map_err(|_| Error::NotCoprime { p: f.p(), order: g.order() })?;
    let mut full: Vec<Vector> = v1.to_vec();
    for i in 0..n {
        let mut cand = full.clone();
        cand.push(unit(n, i));
        if span_basis(f, &cand).len() == cand.len() {
            full = cand;
        }
    }
    let b = Matrix::from_columns(&full)?;
    let bi = b.inverse(f)?;
    let mut d = vec![Fe::ZERO; n];
    for x in d.iter_mut().take(v1.len()) {
        *x = Fe::ONE;
    }
    let p0 = b.mul(f, &Matrix::diagonal(&d)).mul(f, &bi);
    let mut avg = Matrix::zeros(n, n);
    for h in g.elements() {
        let hi = g.ops().inv(h);
        avg = avg.add(f, &h.mul(f, &p0).mul(f, &hi));
    }
    let proj = avg.scale(f, inv_order);
    let kernel = proj.nullspace(f);
    if kernel.len() + v1.len() != n {
        return Err(Error::Structure("projection average has the wrong rank".into()));
    }
    Ok(span_basis(f, &kernel))
}

/// Reduced row-echelon bases of all `d`-dimensional subspaces of `GF(q)^n`,
/// in order of pivot sets and then free entries; at most `budget` of them.
fn subspaces(f: &Field, n: usize, d: usize, budget: usize) -> Vec<Vec<Vector>> {
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for assign in all_vectors(f, free.len()) {
            let mut rows: Vec<Vector> = (0..d).map(|r| unit(n, pivots[r])).collect();
            for (&(r, c), &x) in free.iter().zip(&assign) {
                rows[r][c] = x;
            }
            out.push(rows);
            if out.len() >= budget {
                return out;
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - d + i {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn image_space(f: &Field, h: &Matrix, basis: &[Vector]) -> Vec<Vector> {
    span_basis(f, &basis.iter().map(|v| h.apply(f, v)).collect::<Vec<_>>())
}

/// Subspace budget for the block search.
pub(crate) const BLOCK_BUDGET: usize = 200_000;

/// A system of imprimitivity `V = V_1 ⊕ … ⊕ V_k` (k ≥ 2) permuted transitively,
/// with blocks of the smallest possible dimension.
pub(crate) fn block_system(g: &MatGroup) -> Option<Vec<Vec<Vector>>> {
    let f = field_of(g);
    let n = dim_of(g);
    for d in (1..n).filter(|d| n % d == 0) {
        for u in subspaces(f, n, d, BLOCK_BUDGET) {
            let mut orbit = vec![u.clone()];
            let mut i = 0;
            let mut ok = true;
            while i < orbit.len() && ok {
                for h in g.gens() {
                    let w = image_space(f, h, &orbit[i]);
                    if !orbit.contains(&w) {
                        orbit.push(w);
                        if orbit.len() > n / d {
                            ok = false;
                            break;
                        }
                    }
                }
                i += 1;
            }
            if !ok || orbit.len() != n / d {
                continue;
            }
            let all: Vec<Vector> = orbit.concat();
            if span_basis(f, &all).len() == n {
                return Some(orbit);
            }
        }
    }
    None
}

/// Index of the block `h(V_i)`.
pub(crate) fn block_image(f: &Field, h: &Matrix, blocks: &[Vec<Vector>], i: usize) -> usize {
    let w = image_space(f, h, &blocks[i]);
    blocks.iter().position(|b| *b == w).expect("blocks are permuted")
}

/// The linear span of an abelian normal subgroup, realized as a field
/// `K = GF(p^d)`: `images[γ]` is the matrix of multiplication by `γ`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    pub field: Field,
    pub images: Vec<Matrix>,
}

impl FieldEmbedding {
    /// `K` = the field of `g` itself acting by scalars.
    pub fn scalars(f: &Field, n: usize) -> Self {
        FieldEmbedding { field: f.clone(), images: f.elements().map(|c| Matrix::scalar(n, c)).collect() }
    }

    pub fn matrix(&self, gamma: Fe) -> &Matrix {
        &self.images[gamma.0 as usize]
    }

    pub fn degree(&self) -> u32 {
        self.field.degree()
    }
}

/// Largest field spanned by an abelian normal subgroup of `g`, if its degree
/// exceeds 1. Only prime base fields are handled.
pub(crate) fn field_extension(g: &MatGroup) -> Result<Option<FieldEmbedding>> {
    let f = field_of(g);
    let n = dim_of(g);
    if f.degree() != 1 {
        return Ok(None);
    }
    let p = f.p();
    let mut best: Option<FieldEmbedding> = None;
    let mut seen_spans: BTreeSet<Vec<Vector>> = BTreeSet::new();
    for class in g.classes_in(g) {
        if class[0].scalar_value().is_some() {
            continue;
        }
        let ncl = g.normal_closure(&class[..1]);
        if !ncl.is_abelian() {
            continue;
        }
        let flat: Vec<Vector> = ncl.elements().iter().map(|m| m.to_rows().concat()).collect();
        let span = span_basis(f, &flat);
        let d = span.len();
        if d <= 1 || n % d != 0 || best.as_ref().is_some_and(|b| b.degree() as usize >= d) {
            continue;
        }
        if (p as u64).pow(d as u32) > 1 << 16 || !seen_spans.insert(span.clone()) {
            continue;
        }
        let mats: Vec<Matrix> = all_vectors(f, d)
            .map(|c| {
                let v = combine(f, &span, &c);
                Matrix::from_rows(v.chunks(n).map(|r| r.to_vec()).collect()).expect("square")
            })
            .collect();
        if !mats.iter().skip(1).all(|m| m.is_invertible(f)) {
            continue;
        }
        let k = Field::new(p, d as u32)?;
        let modulus = k.modulus().to_vec();
        let root = mats.iter().find(|t| {
            let mut acc = Matrix::zeros(n, n);
            let mut pw = Matrix::identity(n);
            for &c in &modulus {
                acc = acc.add(f, &pw.scale(f, Fe(c)));
                pw = pw.mul(f, t);
            }
            acc == Matrix::zeros(n, n)
        });
        let Some(t) = root else { continue };
        let powers: Vec<Matrix> = (0..d).map(|i| t.pow(f, i as u64)).collect();
        let images = k
            .elements()
            .map(|gamma| {
                let mut acc = Matrix::zeros(n, n);
                for (c, pw) in k.coeffs(gamma).into_iter().zip(&powers) {
                    acc = acc.add(f, &pw.scale(f, Fe(c)));
                }
                acc
            })
            .collect();
        best = Some(FieldEmbedding { field: k, images });
    }
    Ok(best)
}

/// `K`-basis `b_1..b_m` of `V` and the matching `GF(p)`-basis `γ_k b_j`.
pub(crate) fn k_basis(emb: &FieldEmbedding, n: usize) -> (Vec<Vector>, Vec<Vector>) {
    let d = emb.degree() as usize;
    let k = &emb.field;
    let powers: Vec<&Matrix> = (0..d).map(|i| emb.matrix(k.from_coeffs(&unit_coeffs(d, i)).unwrap())).collect();
    let base = base_field_of(emb);
    let mut kb: Vec<Vector> = Vec::new();
    let mut pb: Vec<Vector> = Vec::new();
    for i in 0..n {
        let v = unit(n, i);
        let mut cand = pb.clone();
        cand.push(v.clone());
        if span_basis(&base, &cand).len() == cand.len() {
            kb.push(v.clone());
            for t in &powers {
                pb.push(t.apply(&base, &v));
            }
        }
        if pb.len() == n {
            break;
        }
    }
    (kb, pb)
}

fn unit_coeffs(d: usize, i: usize) -> Vec<u32> {
    let mut c = vec![0; d];
    c[i] = 1;
    c
}

fn base_field_of(emb: &FieldEmbedding) -> Field {
    Field::new(emb.field.p(), 1).expect("prime")
}

/// `C_G(A)` rewritten as `K`-linear maps on the `K`-basis.
pub(crate) fn as_k_group(c: &MatGroup, emb: &FieldEmbedding, kb: &[Vector], pb: &[Vector]) -> Result<MatGroup> {
    let f = field_of(c);
    let k = &emb.field;
    let d = emb.degree() as usize;
    let m = kb.len();
    let to_k = |h: &Matrix| -> Result<Matrix> {
        let mut cols = Vec::with_capacity(m);
        for b in kb {
            let coords = coordinates(f, pb, &h.apply(f, b))?;
            let col: Vector = coords
                .chunks(d)
                .map(|ch| k.from_coeffs(&ch.iter().map(|x| x.0).collect::<Vec<_>>()))
                .collect::<Result<_>>()?;
            cols.push(col);
        }
        Matrix::from_columns(&cols)
    };
    let gens = c.gens().iter().map(to_k).collect::<Result<Vec<_>>>()?;
    let cap = c.order() + 1;
    mat_group(k, m, gens)?.enumerate(cap)
}

/// `Σ γ_i b_i` for a `K`-vector `γ`.
pub(crate) fn from_k_vector(emb: &FieldEmbedding, kb: &[Vector], v: &[Fe]) -> Vector {
    let base = base_field_of(emb);
    let n = kb[0].len();
    let mut out = vec![Fe::ZERO; n];
    for (b, &gamma) in kb.iter().zip(v) {
        let w = emb.matrix(gamma).apply(&base, b);
        out = crate::algebra::matrix::vec_add(&base, &out, &w);
    }
    out
}

/// Elements commuting with every multiplication map of `K`.
pub(crate) fn k_linear_part(g: &MatGroup, emb: &FieldEmbedding) -> MatGroup {
    let f = field_of(g);
    let gens: Vec<&Matrix> = (0..emb.degree() as usize)
        .map(|i| emb.matrix(emb.field.from_coeffs(&unit_coeffs(emb.degree() as usize, i)).unwrap()))
        .collect();
    g.subgroup_where(|h| gens.iter().all(|t| h.mul(f, t) == t.mul(f, h)))
}
