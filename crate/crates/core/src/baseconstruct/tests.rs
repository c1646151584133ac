use super::*;
use crate::algebra::matrix::unit;
use crate::matgrp::{normalizer_in_gl, orbit_size};

fn ints(f: &Field, v: &[i64]) -> Vector {
    v.iter().map(|&c| f.from_int(c)).collect()
}

/// Multiplication by `α` and the Frobenius of `GF(p^d)`, over `GF(p)` in the basis `1, x, …`.
fn gamma_l1(p: u32, d: u32) -> (Field, Field, Matrix, Matrix) {
    let k = Field::new(p, d).unwrap();
    let f = Field::new(p, 1).unwrap();
    let powers: Vec<Fe> = (0..d).map(|i| Fe(p.pow(i))).collect();
    let col = |z: Fe| -> Vector { k.coeffs(z).into_iter().map(Fe).collect() };
    let mult = Matrix::from_columns(&powers.iter().map(|&b| col(k.mul(k.alpha(), b))).collect::<Vec<_>>()).unwrap();
    let frob = Matrix::from_columns(&powers.iter().map(|&b| col(k.pow(b, p as i64).unwrap())).collect::<Vec<_>>()).unwrap();
    (k, f, mult, frob)
}

fn gl45_f(f: &Field) -> MatGroup {
    let d1 = Matrix::diagonal(&[Fe(1), Fe(1), Fe(4), Fe(4)]);
    let d2 = Matrix::diagonal(&[Fe(1), Fe(4), Fe(1), Fe(4)]);
    let s1 = Matrix::permutation(&[1, 0, 3, 2]);
    let s2 = Matrix::permutation(&[2, 3, 0, 1]);
    mat_group(f, 4, vec![Matrix::scalar(4, f.alpha()), d1, d2, s1, s2]).unwrap()
}

#[test]
fn trivial_group() {
    let f = Field::new(5, 1).unwrap();
    let g = mat_group(&f, 3, vec![]).unwrap();
    let bp = find_base(&g, 100).unwrap();
    assert_eq!((bp.x, bp.y, bp.path.as_str()), (vec![Fe::ZERO; 3], vec![Fe::ZERO; 3], "trivial"));
}

#[test]
fn gl45_normalizer_takes_the_constant_pair() {
    let f = Field::new(5, 1).unwrap();
    let n = normalizer_in_gl(&gl45_f(&f), 100_000).unwrap();
    let x = ints(&f, &[1, 1, 2, 0]);
    let y = ints(&f, &[0, 1, 1, 2]);
    assert_eq!(certify(&n, &x, &y).len(), 1);
    let bp = find_base(&n, 100_000).unwrap();
    assert_eq!(bp.path, "thm-mon-gl45");
    assert!(bp.is_verified());
    // the same constants in the adapted basis u_1..u_4
    let u = detect_structure(&n, 100_000).unwrap().basis;
    assert_eq!(bp.x, combine_coords(&f, &u, &x));
    assert_eq!(bp.y, combine_coords(&f, &u, &y));
}

#[test]
fn e3_over_gf7() {
    let f = Field::new(7, 1).unwrap();
    let d = Matrix::diagonal(&[Fe(1), Fe(2), Fe(4)]);
    let s = Matrix::permutation(&[1, 2, 0]);
    let n = normalizer_in_gl(&mat_group(&f, 3, vec![d, s]).unwrap(), 100_000).unwrap();
    let bp = find_base(&n, 100_000).unwrap();
    assert_eq!(bp.path, "thm-mon-eneq2k");
    assert!(bp.is_verified());
    assert_eq!(bp.gamma.len(), 1);
    assert_eq!(bp.gamma[0].gamma, Fe::ZERO);
}

#[test]
fn quaternion_over_gf7() {
    let f = Field::new(7, 1).unwrap();
    let i = Matrix::from_ints(&f, &[&[0, -1], &[1, 0]]);
    let j = Matrix::from_ints(&f, &[&[2, 3], &[3, -2]]);
    let n = normalizer_in_gl(&mat_group(&f, 2, vec![i, j]).unwrap(), 100_000).unwrap();
    let bp = find_base(&n, 100_000).unwrap();
    assert_eq!(bp.path, "thm-nonmon");
    assert!(bp.is_verified());
}

#[test]
fn gamma_shift_on_gamma_l_1_9() {
    let (k, f, mult, frob) = gamma_l1(3, 2);
    let g = group_of(&f, 2, vec![mult.clone(), frob], 1000).unwrap();
    let c = group_of(&f, 2, vec![mult], 1000).unwrap();
    assert_eq!((g.order(), c.order()), (16, 8));
    let emb = FieldEmbedding { field: k.clone(), images: k.elements().map(|z| mult_matrix(&k, z)).collect() };
    let x = unit(2, 0);
    let y = vec![Fe::ZERO; 2];
    let (gamma, bp, report) = gamma_shift(&g, &c, &x, &y, &emb).unwrap();
    assert!(bp.is_verified());
    assert!(!k.prime_subfield().contains(&gamma));
    // oracle: γ is bad iff some nontrivial element fixes both 1 and γ
    let bad = k.elements().filter(|&z| k.pow(z, 3).unwrap() == z).count();
    assert_eq!(report.bad, bad);
    assert!(report.bad <= report.bound);
    assert_eq!(report.bound, 4);
}

fn mult_matrix(k: &Field, z: Fe) -> Matrix {
    let d = k.degree();
    let p = k.p();
    let cols: Vec<Vector> =
        (0..d).map(|i| k.coeffs(k.mul(z, Fe(p.pow(i)))).into_iter().map(Fe).collect()).collect();
    Matrix::from_columns(&cols).unwrap()
}

#[test]
fn gamma_l_extension_path() {
    for (p, d) in [(2, 3), (2, 5), (5, 3)] {
        let (_, f, mult, frob) = gamma_l1(p, d);
        let g = group_of(&f, d as usize, vec![mult, frob], 10_000).unwrap();
        let bp = find_base(&g, 10_000).unwrap();
        assert!(bp.path.starts_with("gamma-shift/"), "{}", bp.path);
        assert!(bp.is_verified());
        let r = &bp.gamma[0];
        assert!(r.bad <= r.bound, "{r:?}");
    }
}

#[test]
fn direct_sum_of_two_lines() {
    let f = Field::new(5, 1).unwrap();
    let a = f.alpha();
    let g = group_of(&f, 2, vec![Matrix::diagonal(&[a, Fe::ONE]), Matrix::diagonal(&[Fe::ONE, a])], 100).unwrap();
    assert_eq!(g.order(), 16);
    let bp = find_base(&g, 100).unwrap();
    assert!(bp.path.starts_with("direct-sum["), "{}", bp.path);
    assert!(bp.is_verified());
}

#[test]
fn swapped_lines_over_gf5() {
    let f = Field::new(5, 1).unwrap();
    let g = group_of(
        &f,
        2,
        vec![Matrix::diagonal(&[f.alpha(), Fe::ONE]), Matrix::permutation(&[1, 0])],
        1000,
    )
    .unwrap();
    assert_eq!(g.order(), 32);
    let blocks = vec![vec![unit(2, 0)], vec![unit(2, 1)]];
    let bp = combine_imprimitive(&g, &blocks, 1000).unwrap();
    assert!(bp.is_verified());
    assert!(bp.path.starts_with("imprimitive["));
    let fb = find_base_fallback(&g, 1000).unwrap();
    assert!(fb.is_verified());
}

#[test]
fn fallback_orders_by_weight() {
    let f = Field::new(7, 1).unwrap();
    let g = group_of(&f, 2, vec![Matrix::permutation(&[1, 0])], 100).unwrap();
    let bp = find_base_fallback(&g, 100).unwrap();
    assert_eq!(bp.x, unit(2, 0));
    assert!(bp.is_verified());
    let order = g.order() as f64;
    assert!(orbit_size(&g, &bp.x).max(orbit_size(&g, &bp.y)) as f64 >= order.sqrt());
}

#[test]
fn nontrivial_input_pair_is_rejected_by_gamma_shift() {
    let f = Field::new(5, 1).unwrap();
    let g = group_of(&f, 2, vec![Matrix::diagonal(&[f.alpha(), Fe::ONE])], 100).unwrap();
    let zero = vec![Fe::ZERO; 2];
    let err = gamma_shift(&g, &g, &zero, &zero, &FieldEmbedding::scalars(&f, 2)).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}
