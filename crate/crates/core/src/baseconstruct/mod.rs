//! Two-element bases `x, y` with `C_G(x) ∩ C_G(y) = 1`.
//!
//! [`find_base`] reduces to irreducible, then primitive pieces, runs the
//! matching construction, and certifies every result by enumerating the
//! pointwise stabilizer. [`find_base_fallback`] is the exhaustive search.

mod combine;
mod monomial;

pub use combine::FieldEmbedding;

use crate::algebra::matrix::{all_vectors, vec_add};
use crate::algebra::{field::gcd, Fe, Field, Matrix, Vector};
use crate::error::{Error, Result};
use crate::matgrp::{
    combine as combine_coords, detect_structure, dim_of, field_of, in_basis, mat_group, pair_stabilizer,
    restrict_group, vector_stabilizer, with_scalars, MatGroup,
};
use crate::partitions::regular_coloring;
use crate::permgrp::{perm_group, Perm};

use combine::{
    as_k_group, block_image, block_system, field_extension, from_k_vector, invariant_complement, invariant_subspace,
    k_basis, k_linear_part,
};
use monomial::{base_nonmonomial, monomial_pair, structure_in_basis};

/// Outcome of one γ-shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    pub field_order: u32,
    /// Number of `γ` with `C_G(x) ∩ C_G(y + γx) ≠ 1`.
    pub bad: usize,
    /// `(|K| - 1)/(p - 1)`.
    pub bound: usize,
    pub gamma: Fe,
}

#[derive(Clone, Debug)]
pub struct BasePair {
    pub x: Vector,
    pub y: Vector,
    /// The elements of `C_G(x) ∩ C_G(y)`.
    pub certificate: Vec<Matrix>,
    pub path: String,
    pub gamma: Vec<GammaReport>,
}

impl BasePair {
    pub fn certificate_order(&self) -> usize {
        self.certificate.len()
    }

    pub fn is_verified(&self) -> bool {
        self.certificate.len() == 1 && self.certificate[0].is_identity()
    }
}

/// `C_G(x) ∩ C_G(y)` as an element list.
pub fn certify(g: &MatGroup, x: &[Fe], y: &[Fe]) -> Vec<Matrix> {
    pair_stabilizer(g, x, y).elements().to_vec()
}

fn pair(g: &MatGroup, x: Vector, y: Vector, path: impl Into<String>, gamma: Vec<GammaReport>) -> BasePair {
    let certificate = certify(g, &x, &y);
    BasePair { x, y, certificate, path: path.into(), gamma }
}

fn is_coprime(g: &MatGroup) -> bool {
    gcd(g.order() as u64, field_of(g).p() as u64) == 1
}

/// Replaces `y` by `y + γx` for the first `γ ∈ K` (code order) that makes the
/// pair a base of `g`, given that it is one for `c`.
pub fn gamma_shift(
    g: &MatGroup,
    c: &MatGroup,
    x: &[Fe],
    y: &[Fe],
    emb: &FieldEmbedding,
) -> Result<(Fe, BasePair, GammaReport)> {
    let f = field_of(g);
    if !pair_stabilizer(c, x, y).is_trivial() {
        return Err(Error::Precondition("the pair is not a base of C".into()));
    }
    let index = g.order() / c.order();
    if !c.is_subgroup_of(g) || !g.normalizes(c) || emb.degree() as usize % index != 0 {
        return Err(Error::Precondition("G/C does not embed in Gal(K)".into()));
    }
    let cx = vector_stabilizer(g, x);
    let mut first: Option<(Fe, Vector)> = None;
    let mut bad = 0;
    for gamma in emb.field.elements() {
        let shifted = vec_add(f, y, &emb.matrix(gamma).apply(f, x));
        if cx.elements().iter().all(|h| h.is_identity() || h.apply(f, &shifted) != shifted) {
            first.get_or_insert((gamma, shifted));
        } else {
            bad += 1;
        }
    }
    let k = emb.field.order() as usize;
    let report = GammaReport { field_order: k as u32, bad, bound: (k - 1) / (f.p() as usize - 1), gamma: Fe::ZERO };
    let (gamma, shifted) = first.ok_or_else(|| Error::Construction { path: "gamma-shift".into(), order: 0 })?;
    let report = GammaReport { gamma, ..report };
    let bp = pair(g, x.to_vec(), shifted, "gamma-shift", vec![report.clone()]);
    Ok((gamma, bp, report))
}

/// A base of `g`, from the constructions where they apply and from the
/// exhaustive search otherwise.
pub fn find_base(g: &MatGroup, cap: usize) -> Result<BasePair> {
    let g = g.enumerate(cap)?;
    solve(&g, cap)
}

/// Exhaustive search: `x` then `y` by Hamming weight, then code order.
pub fn find_base_fallback(g: &MatGroup, cap: usize) -> Result<BasePair> {
    let g = g.enumerate(cap)?;
    let f = field_of(&g);
    let n = dim_of(&g);
    if g.is_trivial() {
        return Ok(pair(&g, vec![Fe::ZERO; n], vec![Fe::ZERO; n], "trivial", vec![]));
    }
    let mut vecs: Vec<Vector> = all_vectors(f, n).collect();
    vecs.sort_by_key(|v| v.iter().filter(|c| !c.is_zero()).count());
    for x in &vecs {
        let cx = vector_stabilizer(&g, x);
        if cx.order() == g.order() {
            continue;
        }
        if cx.is_trivial() {
            return Ok(pair(&g, x.clone(), vec![Fe::ZERO; n], "fallback", vec![]));
        }
        for y in &vecs {
            if cx.elements().iter().all(|h| h.is_identity() || h.apply(f, y) != *y) {
                return Ok(pair(&g, x.clone(), y.clone(), "fallback", vec![]));
            }
        }
    }
    Err(Error::NoBase)
}

/// Accepts a constructed pair or decides between a hard failure and the fallback.
fn accept(g: &MatGroup, bp: BasePair, cap: usize) -> Result<BasePair> {
    if bp.is_verified() {
        Ok(bp)
    } else if is_coprime(g) {
        Err(Error::Construction { order: bp.certificate_order(), path: bp.path })
    } else {
        find_base_fallback(g, cap)
    }
}

fn solve(g: &MatGroup, cap: usize) -> Result<BasePair> {
    let f = field_of(g);
    let n = dim_of(g);
    if g.is_trivial() {
        return Ok(pair(g, vec![Fe::ZERO; n], vec![Fe::ZERO; n], "trivial", vec![]));
    }
    if n == 1 {
        return Ok(pair(g, vec![Fe::ONE], vec![Fe::ZERO], "thm-mon-e1", vec![]));
    }
    if let Some(v1) = invariant_subspace(g) {
        if !is_coprime(g) {
            return find_base_fallback(g, cap);
        }
        let v2 = invariant_complement(g, &v1)?;
        let bp = combine_direct_sum(g, &v1, &v2, cap)?;
        return accept(g, bp, cap);
    }
    if let Some(bp) = constructive(g, cap)? {
        return accept(g, bp, cap);
    }
    if let Some(emb) = field_extension(g)? {
        let bp = extension(g, &emb, cap)?;
        return accept(g, bp, cap);
    }
    if f.p() > 2 {
        if let Some(blocks) = block_system(g) {
            let bp = combine_imprimitive(g, &blocks, cap)?;
            return accept(g, bp, cap);
        }
    }
    find_base_fallback(g, cap)
}

/// `V = V_1 ⊕ V_2` with both summands invariant: `(x_1 + x_2, y_1 + y_2)`.
pub fn combine_direct_sum(g: &MatGroup, v1: &[Vector], v2: &[Vector], cap: usize) -> Result<BasePair> {
    let f = field_of(g);
    let mut parts = Vec::new();
    for basis in [v1, v2] {
        let sub = restrict_group(g, basis, cap)?;
        let bp = solve(&sub, cap)?;
        parts.push((combine_coords(f, basis, &bp.x), combine_coords(f, basis, &bp.y), bp));
    }
    let x = vec_add(f, &parts[0].0, &parts[1].0);
    let y = vec_add(f, &parts[0].1, &parts[1].1);
    let path = format!("direct-sum[{},{}]", parts[0].2.path, parts[1].2.path);
    let gamma = parts.iter().flat_map(|p| p.2.gamma.clone()).collect();
    Ok(pair(g, x, y, path, gamma))
}

/// Blocks `V_1..V_k` permuted transitively: solve on `V_1` for its stabilizer,
/// transport by coset representatives and add `a_i x_i` for a regular coloring
/// `a` of the block action.
pub fn combine_imprimitive(g: &MatGroup, blocks: &[Vec<Vector>], cap: usize) -> Result<BasePair> {
    let f = field_of(g);
    let k = blocks.len();
    let stab = g.subgroup_where(|h| block_image(f, h, blocks, 0) == 0);
    let inner = solve(&restrict_group(&stab, &blocks[0], cap)?, cap)?;
    let x1 = combine_coords(f, &blocks[0], &inner.x);
    let y1 = combine_coords(f, &blocks[0], &inner.y);
    // coset representatives g_i with g_i V_1 = V_i
    let mut reps: Vec<Option<Matrix>> = vec![None; k];
    reps[0] = Some(Matrix::identity(dim_of(g)));
    let mut queue = vec![0];
    while let Some(i) = queue.pop() {
        let gi = reps[i].clone().expect("visited");
        for h in g.gens() {
            let j = block_image(f, h, blocks, i);
            if reps[j].is_none() {
                reps[j] = Some(h.mul(f, &gi));
                queue.push(j);
            }
        }
    }
    let perms = g
        .gens()
        .iter()
        .map(|h| Perm::new((0..k).map(|i| block_image(f, h, blocks, i)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let action = perm_group(k, perms)?.enumerate(cap)?;
    let coloring = regular_coloring(&action, f.p())?;
    let mut x = vec![Fe::ZERO; dim_of(g)];
    let mut y = x.clone();
    for (i, gi) in reps.iter().enumerate() {
        let gi = gi.as_ref().ok_or(Error::NotTransitive)?;
        let xi = gi.apply(f, &x1);
        let a = f.from_int(coloring.colors[i] as i64);
        x = vec_add(f, &x, &xi);
        y = vec_add(f, &y, &gi.apply(f, &y1));
        y = vec_add(f, &y, &crate::algebra::matrix::vec_scale(f, a, &xi));
    }
    Ok(pair(g, x, y, format!("imprimitive[{}]", inner.path), inner.gamma))
}

/// `C = C_G(A)` is `K`-linear; solve over `K`, then γ-shift back to `G`.
fn extension(g: &MatGroup, emb: &FieldEmbedding, cap: usize) -> Result<BasePair> {
    let n = dim_of(g);
    let c = k_linear_part(g, emb);
    let (kb, pb) = k_basis(emb, n);
    let ck = as_k_group(&c, emb, &kb, &pb)?;
    let inner = solve(&ck, cap)?;
    if !inner.is_verified() {
        return Ok(BasePair { path: format!("gamma-shift/{}", inner.path), ..inner });
    }
    let x = from_k_vector(emb, &kb, &inner.x);
    let y = from_k_vector(emb, &kb, &inner.y);
    let (_, mut bp, _) = gamma_shift(g, &c, &x, &y, emb)?;
    bp.path = format!("gamma-shift/{}", inner.path);
    bp.gamma.extend(inner.gamma);
    Ok(bp)
}

/// The constructions on a recognized Fitting structure, run on `G·Z` in the
/// adapted basis. `None` when no structure is recognized.
fn constructive(g: &MatGroup, cap: usize) -> Result<Option<BasePair>> {
    let f = field_of(g);
    let fs = match detect_structure(g, cap) {
        Ok(fs) => fs,
        Err(Error::TooLarge { cap }) => return Err(Error::TooLarge { cap }),
        Err(_) => return Ok(None),
    };
    let gz = with_scalars(g).enumerate(cap)?;
    let gb = in_basis(&gz, &fs.basis)?;
    let fsb = structure_in_basis(&fs)?;
    let cand = if fs.monomial { monomial_pair(&gb, &fsb, cap) } else { base_nonmonomial(&gb, &fsb, cap) };
    let cand = match cand {
        Ok(c) => c,
        Err(e @ Error::Construction { .. }) if is_coprime(g) => return Err(e),
        Err(Error::TooLarge { cap }) => return Err(Error::TooLarge { cap }),
        Err(_) => return Ok(None),
    };
    let x = combine_coords(f, &fs.basis, &cand.x);
    let y = combine_coords(f, &fs.basis, &cand.y);
    let bp = pair(g, x, y, cand.path, vec![]);
    if !bp.is_verified() {
        return Ok(Some(bp));
    }
    // A = scalars: C_G(A) = G and the shift is by γ = 0
    let (_, shifted, report) = gamma_shift(g, g, &bp.x, &bp.y, &FieldEmbedding::scalars(f, dim_of(g)))?;
    Ok(Some(BasePair { gamma: vec![report], path: bp.path, ..shifted }))
}

/// The group of `field` matrices generated by `gens`, enumerated.
pub fn group_of(field: &Field, dim: usize, gens: Vec<Matrix>, cap: usize) -> Result<MatGroup> {
    mat_group(field, dim, gens)?.enumerate(cap)
}

#[cfg(test)]
mod tests;
