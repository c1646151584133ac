//! Base pairs for primitive groups with a recognized Fitting structure, in the
//! coordinates of the adapted basis (`u_i = unit(i)`).

use crate::algebra::matrix::unit;
use crate::algebra::{Fe, Field, Matrix, Vector};
use crate::error::{Error, Result};
use crate::matgrp::{
    dim_of, field_of, monomial_permutation, pair_stabilizer, restrict_group, vector_stabilizer, FittingStructure,
    MatGroup,
};
use crate::partitions::{affine_partition, mixed_char_partition, AffineSpace};
use crate::permgrp::{perm_group, Perm, SetPartition};

/// A candidate pair in basis coordinates with its path tag.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub x: Vector,
    pub y: Vector,
    pub path: &'static str,
}

fn sum_of(f: &Field, e: usize, terms: &[(usize, Fe)]) -> Vector {
    let mut v = vec![Fe::ZERO; e];
    for &(i, c) in terms {
        v[i] = f.add(v[i], c);
    }
    v
}

fn stab_order(g: &MatGroup, x: &[Fe], y: &[Fe]) -> usize {
    pair_stabilizer(g, x, y).order()
}

/// `π(C_G(u_1))` as a permutation group on basis indices.
fn pi_of_stabilizer(g: &MatGroup) -> Result<crate::permgrp::PermGroup> {
    let e = dim_of(g);
    let c = vector_stabilizer(g, &unit(e, 0));
    let mut perms: Vec<Perm> = Vec::new();
    for h in c.elements() {
        let images = monomial_permutation(h).ok_or_else(|| Error::Structure("C_G(u1) is not monomial".into()))?;
        perms.push(Perm::new(images)?);
    }
    perms.sort();
    perms.dedup();
    perm_group(e, perms)?.enumerate(c.order() + 1)
}

fn part_terms(part: &SetPartition, k: usize, c: Fe) -> Vec<(usize, Fe)> {
    part.parts().get(k).map_or_else(Vec::new, |p| p.iter().map(|&i| (i, c)).collect())
}

/// Monomial, `e` not a power of 2: `x = u_1`, `y` from a regular partition of `S`.
pub(crate) fn base_mon_general(g: &MatGroup, fs: &FittingStructure) -> Result<Candidate> {
    let f = field_of(g);
    let e = fs.orbit_len();
    let alpha = f.alpha();
    let x = unit(e, 0);
    if e == 3 {
        let y = sum_of(f, e, &[(1, alpha), (2, Fe::ONE)]);
        return Ok(Candidate { x, y, path: "thm-mon-eneq2k" });
    }
    let pi = pi_of_stabilizer(g)?;
    let part = if fs.shape.len() == 1 {
        let (r, m) = fs.shape[0];
        let space = AffineSpace::new(r as u32, m)?;
        affine_partition(&space, Some(&pi))?.partition
    } else {
        let spaces = fs.shape.iter().map(|&(r, m)| AffineSpace::new(r as u32, m)).collect::<Result<Vec<_>>>()?;
        mixed_char_partition(&spaces, Some(&pi))?
    };
    let terms = if fs.shape.len() == 1 && fs.shape[0].0 == 3 {
        // Ω2 = {e_1} gets α, Ω3 gets 0, Ω4 gets 1
        let mut t = part_terms(&part, 1, alpha);
        t.extend(part_terms(&part, 3, Fe::ONE));
        t
    } else {
        part_terms(&part, 2, Fe::ONE)
    };
    Ok(Candidate { x, y: sum_of(f, e, &terms), path: "thm-mon-eneq2k" })
}

pub(crate) fn base_e2(f: &Field) -> Candidate {
    let _ = f;
    Candidate { x: unit(2, 0), y: unit(2, 1), path: "thm-mon-e2" }
}

/// `e = 4` over `GF(3^k)`: the first pair, and after relabelling by the
/// witness' fixed point, the two alternatives.
pub(crate) fn base_e4_3k(g: &MatGroup) -> Result<Candidate> {
    let f = field_of(g);
    let one = Fe::ONE;
    let path = "thm-mon-gl43";
    let x1 = sum_of(f, 4, &[(1, one), (2, one), (3, one)]);
    let y1 = unit(4, 0);
    let cert = pair_stabilizer(g, &x1, &y1);
    if cert.is_trivial() {
        return Ok(Candidate { x: x1, y: y1, path });
    }
    if cert.order() != 2 {
        return Err(Error::Construction { path: path.into(), order: cert.order() });
    }
    let g0 = cert.elements().iter().find(|h| !h.is_identity()).expect("order 2");
    let fixed = (1..4).find(|&k| g0.apply(f, &unit(4, k)) == unit(4, k));
    let k = fixed.ok_or_else(|| Error::Construction { path: path.into(), order: 2 })?;
    // relabel: swap indices 1 and k
    let relabel = |i: usize| if i == 1 { k } else if i == k { 1 } else { i };
    let minus = f.neg(one);
    let x2 = sum_of(f, 4, &[(relabel(0), one), (relabel(1), one), (relabel(3), one)]);
    let y2 = sum_of(f, 4, &[(relabel(0), one), (relabel(2), one)]);
    if stab_order(g, &x2, &y2) == 1 {
        return Ok(Candidate { x: x2, y: y2, path });
    }
    let x3 = sum_of(f, 4, &[(relabel(0), one), (relabel(1), one), (relabel(3), minus)]);
    Ok(Candidate { x: x3, y: y2, path })
}

pub(crate) fn base_e4_gf5(f: &Field) -> Candidate {
    let (one, two) = (Fe::ONE, f.from_int(2));
    Candidate {
        x: sum_of(f, 4, &[(0, one), (1, one), (2, two)]),
        y: sum_of(f, 4, &[(1, one), (2, one), (3, two)]),
        path: "thm-mon-gl45",
    }
}

pub(crate) fn base_e4_general(f: &Field) -> Result<Candidate> {
    let a = f.alpha();
    Ok(Candidate {
        x: sum_of(f, 4, &[(1, Fe::ONE), (2, a), (3, f.inv(a)?)]),
        y: unit(4, 0),
        path: "thm-mon-gl47",
    })
}

fn base_e4(g: &MatGroup) -> Result<Candidate> {
    let f = field_of(g);
    match f.order() {
        3 | 9 => base_e4_3k(g),
        5 => Ok(base_e4_gf5(f)),
        _ => base_e4_general(f),
    }
}

/// `e = 2^k ≥ 8`: solve on `V' = <u_1..u_4>`, then color `u_5..u_e`.
pub(crate) fn base_mon_2power(g: &MatGroup, cap: usize) -> Result<Candidate> {
    let f = field_of(g);
    let e = dim_of(g);
    let k = e.trailing_zeros();
    let vprime: Vec<Vector> = (0..4).map(|i| unit(e, i)).collect();
    let nv = g.subgroup_where(|h| (0..4).all(|i| h.apply(f, &vprime[i])[4..].iter().all(|c| c.is_zero())));
    let restricted = restrict_group(&nv, &vprime, cap)?;
    let inner = base_e4(&restricted)?;
    let embed = |v: &[Fe]| {
        let mut out = vec![Fe::ZERO; e];
        out[..4].copy_from_slice(v);
        out
    };
    let x = embed(&inner.x);
    let mut y = embed(&inner.y);
    if e == 16 {
        let (s, t) = (4, 8);
        for (i, c) in y.iter_mut().enumerate().skip(4) {
            *c = if i == s {
                Fe::ZERO
            } else if i == t {
                f.neg(Fe::ONE)
            } else {
                Fe::ONE
            };
        }
    } else {
        let space = AffineSpace::new(2, k)?;
        let part = affine_partition(&space, None)?.partition;
        // Ω1..Ω3 = {0}, {e1}, {e2} lie in V'; Ω4 gets 0 and Ω5 outside V' gets 1
        for &i in part.parts()[4].iter().filter(|&&i| i >= 4) {
            y[i] = Fe::ONE;
        }
    }
    Ok(Candidate { x, y, path: "thm-mon-2k" })
}

/// Dispatch over the monomial constructions (`g` in basis coordinates).
pub(crate) fn monomial_pair(g: &MatGroup, fs: &FittingStructure, cap: usize) -> Result<Candidate> {
    let e = fs.orbit_len();
    let f = field_of(g);
    if e == 1 {
        return Ok(Candidate { x: unit(1, 0), y: vec![Fe::ZERO], path: "thm-mon-e1" });
    }
    if !e.is_power_of_two() {
        return base_mon_general(g, fs);
    }
    match e {
        2 => Ok(base_e2(f)),
        4 => base_e4(g),
        _ => base_mon_2power(g, cap),
    }
}

/// Non-monomial case: basis `u_1, v_1, u_2, v_2, …`; solve on `V_1 = <u_i>` first.
pub(crate) fn base_nonmonomial(g: &MatGroup, fs: &FittingStructure, cap: usize) -> Result<Candidate> {
    let f = field_of(g);
    let e = fs.e;
    let half = e / 2;
    let v1_basis: Vec<Vector> = (0..half).map(|i| unit(e, 2 * i)).collect();
    let n1 = g.subgroup_where(|h| v1_basis.iter().all(|v| h.apply(f, v).iter().skip(1).step_by(2).all(|c| c.is_zero())));
    let g1 = restrict_group(&n1, &v1_basis, cap)?;
    let restrict = |m: &Matrix| m.restrict(f, &v1_basis).ok_or_else(|| Error::Structure("V1 is not D-invariant".into()));
    let fs1 = FittingStructure {
        field: f.clone(),
        e: half,
        a_order: fs.a_order,
        shape: half_shape(&fs.shape),
        gen_primes: fs.gen_primes.clone(),
        d0_gens: fs.d0_gens.iter().map(restrict).collect::<Result<_>>()?,
        s_gens: fs.s_gens.iter().map(restrict).collect::<Result<_>>()?,
        q_gens: None,
        monomial: true,
        basis: (0..half).map(|i| unit(half, i)).collect(),
        pairing: None,
        fitting: g1.clone(),
    };
    let inner = monomial_pair(&g1, &fs1, cap)?;
    let lift = |v: &[Fe]| {
        let mut out = vec![Fe::ZERO; e];
        for (i, &c) in v.iter().enumerate() {
            out[2 * i] = c;
        }
        out
    };
    let (x1, y1) = (lift(&inner.x), lift(&inner.y));
    let v1 = unit(e, 1);
    let plus = |a: &[Fe], b: &[Fe]| crate::algebra::matrix::vec_add(f, a, b);
    let (x, y) = if half >= 4 && half.is_power_of_two() { (plus(&v1, &x1), y1) } else { (x1, plus(&v1, &y1)) };
    Ok(Candidate { x, y, path: "thm-nonmon" })
}

fn half_shape(shape: &[(u64, u32)]) -> Vec<(u64, u32)> {
    shape
        .iter()
        .filter_map(|&(r, m)| match (r, m) {
            (2, 1) => None,
            (2, m) => Some((2, m - 1)),
            other => Some(other),
        })
        .collect()
}

/// The structure with every matrix written in the adapted basis.
pub(crate) fn structure_in_basis(fs: &FittingStructure) -> Result<FittingStructure> {
    let f = &fs.field;
    let p = Matrix::from_columns(&fs.basis)?;
    let pi = p.inverse(f)?;
    let conj = |m: &Matrix| m.conjugate_by(f, &p, &pi);
    let mut out = fs.clone();
    out.d0_gens = fs.d0_gens.iter().map(conj).collect();
    out.s_gens = fs.s_gens.iter().map(conj).collect();
    out.q_gens = fs.q_gens.as_ref().map(|(i, j)| (conj(i), conj(j)));
    out.basis = (0..fs.e).map(|i| unit(fs.e, i)).collect();
    Ok(out)
}
