use crate::algebra::{Fe, Field, Matrix};
use crate::error::{Error, Result};
use crate::group::{small_generating_set, Group, GroupOps};

use super::{with_scalars, MatGroup, MatOps};

fn flatten(m: &Matrix) -> Vec<Fe> {
    m.to_rows().concat()
}

fn unflatten(v: &[Fe], n: usize) -> Matrix {
    Matrix::from_rows(v.chunks(n).map(|c| c.to_vec()).collect()).expect("square")
}

/// Solutions `N` inside the span of `basis` with `N f = g N`.
fn refine(field: &Field, basis: &[Matrix], f: &Matrix, g: &Matrix) -> Vec<Matrix> {
    let n = f.rows();
    if basis.is_empty() {
        return Vec::new();
    }
    // column l of the system is vec(B_l f - g B_l)
    let cols: Vec<Vec<Fe>> = basis
        .iter()
        .map(|b| {
            let lhs = b.mul(field, f);
            let rhs = g.mul(field, b);
            flatten(&lhs.add(field, &rhs.scale(field, field.neg(Fe::ONE))))
        })
        .collect();
    let system = Matrix::from_columns(&cols).expect("equal lengths");
    system
        .nullspace(field)
        .into_iter()
        .map(|c| {
            let mut acc = vec![Fe::ZERO; n * n];
            for (b, &coef) in basis.iter().zip(&c) {
                if !coef.is_zero() {
                    for (a, x) in acc.iter_mut().zip(flatten(b)) {
                        *a = field.add(*a, field.mul(coef, x));
                    }
                }
            }
            unflatten(&acc, n)
        })
        .collect()
}

struct Search<'a> {
    field: &'a Field,
    ops: &'a MatOps,
    gens: Vec<Matrix>,
    candidates: Vec<Vec<Matrix>>,
    found: Group<MatOps>,
    cap: usize,
}

impl Search<'_> {
    fn run(&mut self, level: usize, images: &mut Vec<Matrix>, space: Vec<Matrix>) -> Result<()> {
        if level == self.gens.len() {
            if space.len() == 1 && space[0].is_invertible(self.field) && !self.found.contains(&space[0]) {
                let mut gens = self.found.gens().to_vec();
                gens.push(space[0].clone());
                self.found = Group::enumerated(self.ops.clone(), gens, self.cap)?;
            }
            return Ok(());
        }
        for k in 0..self.candidates[level].len() {
            let g = self.candidates[level][k].clone();
            let consistent = (0..level).all(|j| {
                self.ops.commutator(&images[j], &g) == self.ops.commutator(&self.gens[j], &self.gens[level])
            });
            if !consistent {
                continue;
            }
            let next = refine(self.field, &space, &self.gens[level], &g);
            if next.is_empty() {
                continue;
            }
            images.push(g);
            self.run(level + 1, images, next)?;
            images.pop();
        }
        Ok(())
    }
}

/// `N_{GL(e,q)}(F)` for an absolutely irreducible `F`; the scalars are adjoined
/// to `F` first. Each automorphism candidate (images of generators with matching
/// order, trace and commutators) is tested by solving `n f = g n`.
pub fn normalizer_in_gl(f_group: &MatGroup, cap: usize) -> Result<MatGroup> {
    let ops = f_group.ops().clone();
    let field = ops.field.clone();
    let fz = with_scalars(f_group).enumerate(cap)?;
    let non_scalar: Vec<Matrix> = fz.elements().iter().filter(|m| m.scalar_value().is_none()).cloned().collect();
    // generators modulo scalars
    let mut gens = Vec::new();
    let mut span = Group::enumerated(ops.clone(), with_scalars(&Group::new(ops.clone(), vec![])).gens().to_vec(), cap)?;
    for m in small_generating_set(&ops, &non_scalar) {
        if !span.contains(&m) {
            gens.push(m);
            let mut all = span.gens().to_vec();
            all.push(gens.last().unwrap().clone());
            span = Group::enumerated(ops.clone(), all, cap)?;
        }
    }
    if span.order() != fz.order() {
        return Err(Error::Structure("generators do not span F".into()));
    }
    let candidates = gens
        .iter()
        .map(|g| {
            let (tr, ord) = (g.trace(&field), ops.elem_order(g));
            fz.elements().iter().filter(|h| h.trace(&field) == tr && ops.elem_order(h) == ord).cloned().collect()
        })
        .collect();
    let dim = ops.dim;
    let space: Vec<Matrix> = (0..dim * dim)
        .map(|k| {
            let mut m = Matrix::zeros(dim, dim);
            m.set(k / dim, k % dim, Fe::ONE);
            m
        })
        .collect();
    let mut search = Search { field: &field, ops: &ops, gens, candidates, found: fz, cap };
    search.run(0, &mut Vec::new(), space)?;
    Ok(search.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::mat_group;

    #[test]
    fn normalizer_of_dihedral_over_gf5() {
        let f = Field::new(5, 1).unwrap();
        let d = Matrix::from_ints(&f, &[&[1, 0], &[0, -1]]);
        let s = Matrix::from_ints(&f, &[&[0, 1], &[1, 0]]);
        let fg = mat_group(&f, 2, vec![d, s]).unwrap();
        let n = normalizer_in_gl(&fg, 10_000).unwrap();
        // Z4 * D8 has order 16, and the normalizer induces S3 on it
        assert_eq!(n.order(), 96);
        assert!(n.is_solvable());
    }
}
