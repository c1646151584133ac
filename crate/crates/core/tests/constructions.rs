mod common;

use common::*;
use grpbase::algebra::{Fe, Field, Matrix, Vector};
use grpbase::baseconstruct::find_base;
use grpbase::matgrp::{
    detect_structure, in_basis, mat_group, monomial_decompose, vector_stabilizer, with_scalars, MatGroup,
};

fn span_contains(f: &Field, basis: &[Vector], v: &[Fe]) -> bool {
    let b = Matrix::from_columns(basis).unwrap();
    grpbase::algebra::matrix::solve_in_span(f, &b, v).is_some()
}

/// `F ⋊ GL(2,3)` in `GL(9,7)`, the linear maps of `Z_3^2` acting on indices.
fn e9_over_gf7() -> MatGroup {
    let f = Field::new(7, 1).unwrap();
    let mut gens = monomial_f(&f, 9).gens().to_vec();
    for a in [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 0], [0, 1]]] {
        let images: Vec<usize> = (0..9)
            .map(|i| {
                let (d0, d1) = (i % 3, i / 3);
                let e0 = (a[0][0] * d0 + a[0][1] * d1) % 3;
                let e1 = (a[1][0] * d0 + a[1][1] * d1) % 3;
                e0 + 3 * e1
            })
            .collect();
        gens.push(Matrix::permutation(&images));
    }
    mat_group(&f, 9, gens).unwrap().enumerate(CAP).unwrap()
}

#[test]
fn e9_uses_the_three_power_branch() {
    let g = e9_over_gf7();
    assert_eq!(g.order(), 6 * 81 * 48);
    let bp = find_base(&g, CAP).unwrap();
    assert_eq!(bp.path, "thm-mon-eneq2k");
    assert!(bp.is_verified());
}

#[test]
fn e6_mixed_characteristic() {
    let f = Field::new(7, 1).unwrap();
    let n = normalizer(&f, 6);
    assert!(is_coprime(n.order(), 7));
    let bp = find_base(&n, CAP).unwrap();
    assert_eq!(bp.path, "thm-mon-eneq2k");
    assert!(bp.is_verified());
}

#[test]
fn e8_stabilizer_of_x0_fixes_both_halves() {
    let g = two_group_e8_gf3();
    let f = Field::new(3, 1).unwrap();
    let bp = find_base(&g, CAP).unwrap();
    assert_eq!(bp.path, "thm-mon-2k");
    let u = detect_structure(&g, CAP).unwrap().basis;
    let (v1, v2) = u.split_at(4);
    // x0 lies in V' = <u1..u4>
    assert!(span_contains(&f, v1, &bp.x));
    for h in vector_stabilizer(&g, &bp.x).elements() {
        assert!(v1.iter().all(|v| span_contains(&f, v1, &h.apply(&f, v))));
        assert!(v2.iter().all(|v| span_contains(&f, v2, &h.apply(&f, v))));
    }
}

/// Elements of `C_G(u1)` with nontrivial diagonal part have at most `3e/4`
/// diagonal entries equal to 1.
fn check_diagonal_ones(g: &MatGroup) {
    let fs = detect_structure(g, CAP).unwrap();
    assert!(fs.monomial);
    let f = fs.field.clone();
    let e = fs.e;
    let gb = in_basis(&with_scalars(g).enumerate(CAP).unwrap(), &fs.basis).unwrap();
    let u1 = grpbase::algebra::matrix::unit(e, 0);
    for h in vector_stabilizer(&gb, &u1).elements() {
        let (delta, _) = monomial_decompose(&f, h).unwrap();
        if delta.is_identity() {
            continue;
        }
        let ones = delta.diag().iter().filter(|&&c| c == Fe::ONE).count();
        assert!(ones <= 3 * e / 4, "{ones} ones for e = {e}");
    }
}

#[test]
fn diagonal_ones_bound() {
    check_diagonal_ones(&normalizer(&Field::new(7, 1).unwrap(), 3));
    check_diagonal_ones(&normalizer(&Field::new(7, 1).unwrap(), 4));
    check_diagonal_ones(&normalizer(&Field::new(5, 1).unwrap(), 4));
    check_diagonal_ones(&two_group_e8_gf3());
}

#[test]
fn normalizer_orders() {
    // |N| = |A| |E/Z| |N/F|; N/F is all of Sp(2,r) except for e = 2 over GF(7)
    // (no fourth root of unity) and e = 4 over GF(7) (a subgroup of order 72)
    let cases = [(5, 2, 4 * 4 * 6), (7, 2, 6 * 4 * 2), (7, 3, 6 * 9 * 24), (13, 3, 12 * 9 * 24), (7, 4, 6 * 16 * 72)];
    for (q, e, order) in cases {
        let n = normalizer(&Field::new(q, 1).unwrap(), e);
        assert_eq!(n.order(), order, "e = {e}, q = {q}");
        assert!(n.is_solvable());
    }
}
