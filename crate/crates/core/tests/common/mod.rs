#![allow(dead_code)]

use grpbase::algebra::{Fe, Field, Matrix, Vector};
use grpbase::group::{Group, GroupOps};
use grpbase::matgrp::{mat_group, normalizer_in_gl, MatGroup};
use grpbase::permgrp::{perm_group, Perm, PermGroup};
use rand::Rng;

pub const CAP: usize = 2_000_000;

/// Prime factorization of `e` as `[(r, m)]`, ascending.
pub fn factor(mut e: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut r = 2;
    while e > 1 {
        let mut m = 0;
        while e % r == 0 {
            e /= r;
            m += 1;
        }
        if m > 0 {
            out.push((r, m));
        }
        r += 1;
    }
    out
}

/// Mixed-radix digits of `idx` with one digit per prime factor copy.
fn radices(e: usize) -> Vec<usize> {
    factor(e).into_iter().flat_map(|(r, m)| std::iter::repeat(r).take(m as usize)).collect()
}

fn digits(mut idx: usize, rad: &[usize]) -> Vec<usize> {
    rad.iter()
        .map(|&r| {
            let d = idx % r;
            idx /= r;
            d
        })
        .collect()
}

fn undigits(d: &[usize], rad: &[usize]) -> usize {
    d.iter().zip(rad).rev().fold(0, |acc, (&x, &r)| acc * r + x)
}

/// `F = A·E` in monomial form: scalars, diagonal characters and translations of
/// the index group `⊕ Z_r`.
pub fn monomial_f(f: &Field, e: usize) -> MatGroup {
    let rad = radices(e);
    let mut gens = vec![Matrix::scalar(e, f.alpha())];
    for (k, &r) in rad.iter().enumerate() {
        let q1 = (f.order() - 1) as i64;
        let omega = f.alpha_pow(q1 / r as i64);
        let diag: Vec<Fe> =
            (0..e).map(|i| f.pow(omega, digits(i, &rad)[k] as i64).unwrap()).collect();
        gens.push(Matrix::diagonal(&diag));
        let images: Vec<usize> = (0..e)
            .map(|i| {
                let mut d = digits(i, &rad);
                d[k] = (d[k] + 1) % r;
                undigits(&d, &rad)
            })
            .collect();
        gens.push(Matrix::permutation(&images));
    }
    mat_group(f, e, gens).unwrap()
}

pub fn normalizer(f: &Field, e: usize) -> MatGroup {
    normalizer_in_gl(&monomial_f(f, e), CAP).unwrap()
}

/// The quaternion group `Q_8` in `GL(2, 7)`.
pub fn quaternion_gf7() -> (Field, Matrix, Matrix) {
    let f = Field::new(7, 1).unwrap();
    let i = Matrix::from_ints(&f, &[&[0, -1], &[1, 0]]);
    let j = Matrix::from_ints(&f, &[&[2, 3], &[3, -2]]);
    (f, i, j)
}

fn kron(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out.set(i * m + k, j * m + l, f.mul(a.get(i, j), b.get(k, l)));
                }
            }
        }
    }
    out
}

/// `A·Q_8` over `GF(7)` (`e = 2`, non-monomial).
pub fn quaternion_e2() -> MatGroup {
    let (f, i, j) = quaternion_gf7();
    normalizer_in_gl(&mat_group(&f, 2, vec![i, j]).unwrap(), CAP).unwrap()
}

/// `Q_8 ∘ D_8` over `GF(7)` (`e = 4`, non-monomial), extended by a Sylow
/// 2-subgroup of its normalizer.
pub fn quaternion_e4() -> MatGroup {
    let (f, i, j) = quaternion_gf7();
    let one2 = Matrix::identity(2);
    let d = Matrix::diagonal(&[Fe(1), f.from_int(-1)]);
    let s = Matrix::permutation(&[1, 0]);
    let gens = vec![kron(&f, &i, &one2), kron(&f, &j, &one2), kron(&f, &one2, &d), kron(&f, &one2, &s)];
    let fg = mat_group(&f, 4, gens).unwrap();
    normalizer_in_gl(&fg, CAP).unwrap().sylow(2)
}

/// A 2-group in `GL(8, 3)` normalizing the monomial `F`: `F`, the unitriangular
/// linear maps of the index space `GF(2)^3` as permutation matrices, and the sign
/// changes `(-1)^{s_i s_j}`.
pub fn two_group_e8_gf3() -> MatGroup {
    let f = Field::new(3, 1).unwrap();
    let e = 8;
    let mut gens = monomial_f(&f, e).gens().to_vec();
    let bits = |i: usize, k: usize| (i >> k) & 1;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        // s_b += s_a
        let images: Vec<usize> = (0..e).map(|i| i ^ (bits(i, a) << b)).collect();
        gens.push(Matrix::permutation(&images));
        let diag: Vec<Fe> = (0..e).map(|i| if bits(i, a) & bits(i, b) == 1 { f.from_int(-1) } else { Fe::ONE }).collect();
        gens.push(Matrix::diagonal(&diag));
    }
    mat_group(&f, e, gens).unwrap().enumerate(CAP).unwrap()
}

/// Multiplication by `α` and the Frobenius of `GF(p^d)` over `GF(p)`.
pub fn gamma_l1(p: u32, d: u32) -> MatGroup {
    let k = Field::new(p, d).unwrap();
    let f = Field::new(p, 1).unwrap();
    let powers: Vec<Fe> = (0..d).map(|i| Fe(p.pow(i))).collect();
    let col = |z: Fe| -> Vector { k.coeffs(z).into_iter().map(Fe).collect() };
    let mult = Matrix::from_columns(&powers.iter().map(|&b| col(k.mul(k.alpha(), b))).collect::<Vec<_>>()).unwrap();
    let frob =
        Matrix::from_columns(&powers.iter().map(|&b| col(k.pow(b, p as i64).unwrap())).collect::<Vec<_>>()).unwrap();
    mat_group(&f, d as usize, vec![mult, frob]).unwrap().enumerate(CAP).unwrap()
}

pub fn is_coprime(order: usize, p: u32) -> bool {
    order % p as usize != 0
}

/// A random subgroup of `g` generated by at most three random elements.
pub fn random_subgroup<O: GroupOps>(g: &Group<O>, rng: &mut impl Rng) -> Group<O> {
    let k = rng.gen_range(1..=3);
    let gens = (0..k).map(|_| g.elements()[rng.gen_range(0..g.order())].clone()).collect();
    g.subgroup(gens)
}

pub fn gl(f: &Field, n: usize) -> MatGroup {
    // elementary matrices and a primitive diagonal generate GL(n, q)
    let mut gens = vec![Matrix::diagonal(&std::iter::once(f.alpha()).chain(std::iter::repeat(Fe::ONE).take(n - 1)).collect::<Vec<_>>())];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Matrix::identity(n);
                m.set(i, j, Fe::ONE);
                gens.push(m);
            }
        }
    }
    mat_group(f, n, gens).unwrap().enumerate(CAP).unwrap()
}

/// A random permutation of `0..n` with one of a few small cycle types.
pub fn random_small_perm(n: usize, rng: &mut impl Rng) -> Perm {
    let types: &[&[usize]] = &[&[2], &[2, 2], &[3], &[4], &[2, 2, 2], &[5], &[4, 2], &[7]];
    let shape = loop {
        let t = types[rng.gen_range(0..types.len())];
        if t.iter().sum::<usize>() <= n {
            break t;
        }
    };
    let mut pts: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let j = rng.gen_range(i..n);
        pts.swap(i, j);
    }
    let mut images: Vec<usize> = (0..n).collect();
    let mut at = 0;
    for &len in shape {
        for w in 0..len {
            images[pts[at + w]] = pts[at + (w + 1) % len];
        }
        at += len;
    }
    Perm::new(images).unwrap()
}

pub fn perm_group_of(n: usize, gens: Vec<Perm>) -> PermGroup {
    perm_group(n, gens).unwrap()
}
