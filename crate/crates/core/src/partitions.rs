//! Regular partitions of affine spaces and regular colorings of solvable
//! permutation groups.
//!
//! Points of `GF(q)^n` are indexed by `Σ c_i q^i` (so `e_1` is index 1, `e_2` is
//! index `q`, and index 0 is the zero vector).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::field::{is_prime, prime_factors};
use crate::error::{Error, Result};
use crate::group::{Group, GroupOps};
use crate::permgrp::{
    action_on_blocks, coloring_stabilizer, fixed_point_of_stabilizer, is_regular_partition,
    minimal_blocks, orbits, perm_group, restrict_to, setwise_stabilizer, Perm, PermGroup, PermOps, SetPartition,
};

/// `GF(q)^n` with `q` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSpace {
    pub q: u32,
    pub n: u32,
}

impl AffineSpace {
    pub fn new(q: u32, n: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if n == 0 {
            return Err(Error::Dimension("affine space of dimension 0".into()));
        }
        let size = (q as u64).checked_pow(n).filter(|&s| s <= 1 << 20);
        if size.is_none() {
            return Err(Error::Input(format!("{q}^{n} points is too many")));
        }
        Ok(AffineSpace { q, n })
    }

    pub fn size(&self) -> usize {
        (self.q as usize).pow(self.n)
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u32> {
        let q = self.q as usize;
        (0..self.n)
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[u32]) -> usize {
        coords.iter().rev().fold(0, |acc, &c| acc * self.q as usize + (c % self.q) as usize)
    }

    /// Index of `e_i`, `i` counted from 1.
    pub fn e(&self, i: u32) -> usize {
        (self.q as usize).pow(i - 1)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.coords(a), self.coords(b));
        self.index(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.q).collect::<Vec<_>>())
    }

    pub fn scale(&self, c: u32, a: usize) -> usize {
        self.index(&self.coords(a).iter().map(|u| (u * c) % self.q).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: usize) -> usize {
        self.scale(self.q - 1, a)
    }

    /// Sum of `coeffs[i] * basis[i]`.
    pub fn combine(&self, basis: &[usize], coeffs: &[u32]) -> usize {
        basis.iter().zip(coeffs).fold(0, |acc, (&b, &c)| self.add(acc, self.scale(c, b)))
    }

    /// Translation `v -> v + t` as a permutation.
    pub fn translation(&self, t: usize) -> Perm {
        Perm::new((0..self.size()).map(|v| self.add(v, t)).collect()).expect("translation is a bijection")
    }

    /// Affine map `v -> A v + b`, `A` given by its columns (images of `e_i`).
    pub fn affine_map(&self, columns: &[usize], b: usize) -> Result<Perm> {
        let images = (0..self.size()).map(|v| self.add(self.combine(columns, &self.coords(v)), b)).collect();
        Perm::new(images).map_err(|_| Error::Singular)
    }

    /// `W ⋊ H` where `H` is generated by the linear maps with the given columns.
    pub fn affine_group(&self, linear_gens: &[Vec<usize>]) -> Result<PermGroup> {
        let mut gens: Vec<Perm> = (1..=self.n).map(|i| self.translation(self.e(i))).collect();
        for cols in linear_gens {
            gens.push(self.affine_map(cols, 0)?);
        }
        perm_group(self.size(), gens)
    }

    /// Generators (as column lists) of `GL(n, q)`: a primitive scalar on `e_1` and
    /// the elementary transvections.
    pub fn gl_generators(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let basis: Vec<usize> = (1..=n).map(|i| self.e(i)).collect();
        let mut out = Vec::new();
        let prim = (2..self.q).find(|&g| {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = x * g % self.q;
                k += 1;
            }
            k == self.q - 1
        });
        if let Some(g) = prim {
            let mut cols = basis.clone();
            cols[0] = self.scale(g, basis[0]);
            out.push(cols);
        }
        for i in 0..n as usize {
            for j in 0..n as usize {
                if i != j {
                    let mut cols = basis.clone();
                    cols[j] = self.add(basis[j], basis[i]);
                    out.push(cols);
                }
            }
        }
        out
    }

    /// The full affine group `AGL(n, q)` (not enumerated).
    pub fn agl(&self) -> Result<PermGroup> {
        self.affine_group(&self.gl_generators())
    }
}

/// A nonidentity affine map `v -> A v + b` of the whole `AGL(n, q)` fixing every
/// part of `part`, found by backtracking over the images of `0, e_1, .., e_n`.
pub fn agl_partition_witness(space: &AffineSpace, part: &SetPartition) -> Option<Perm> {
    let size = space.size();
    if part.degree() != size {
        return Some(Perm::identity(part.degree()));
    }
    let mut part_of = vec![0usize; size];
    for (i, p) in part.parts().iter().enumerate() {
        for &x in p {
            part_of[x] = i;
        }
    }
    let n = space.n as usize;
    let q = space.q as usize;
    // points whose highest nonzero coordinate is k, for each k
    let mut layer: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..size {
        let top = space.coords(v).iter().rposition(|&c| c != 0).unwrap();
        layer[top].push(v);
    }
    struct Search<'a> {
        space: &'a AffineSpace,
        part_of: Vec<usize>,
        layer: Vec<Vec<usize>>,
        q: usize,
    }
    impl Search<'_> {
        fn go(&self, b: usize, cols: &mut Vec<usize>, span: &mut Vec<bool>) -> Option<Vec<usize>> {
            let k = cols.len();
            let n = self.space.n as usize;
            if k == n {
                let identity = b == 0 && (0..n).all(|i| cols[i] == self.space.e(i as u32 + 1));
                return if identity { None } else { Some(cols.clone()) };
            }
            for c in 1..span.len() {
                if span[c] {
                    continue;
                }
                cols.push(c);
                let ok = self.layer[k].iter().all(|&v| {
                    let coords = self.space.coords(v);
                    let img = self.space.add(self.space.combine(cols, &coords[..=k]), b);
                    self.part_of[img] == self.part_of[v]
                });
                if ok {
                    let old: Vec<usize> = (0..span.len()).filter(|&x| span[x]).collect();
                    for &s in &old {
                        for t in 1..self.q as u32 {
                            span[self.space.add(s, self.space.scale(t, c))] = true;
                        }
                    }
                    if let Some(w) = self.go(b, cols, span) {
                        return Some(w);
                    }
                    for x in span.iter_mut() {
                        *x = false;
                    }
                    for s in old {
                        span[s] = true;
                    }
                }
                cols.pop();
            }
            None
        }
    }
    let search = Search { space, part_of, layer, q };
    for b in 0..size {
        if search.part_of[b] != search.part_of[0] {
            continue;
        }
        let mut span = vec![false; size];
        span[0] = true;
        if let Some(cols) = search.go(b, &mut Vec::with_capacity(n), &mut span) {
            return space.affine_map(&cols, b).ok();
        }
    }
    None
}

/// Which of the nine affine constructions produced a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffineCase {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    Case7,
    Case8,
    Case9,
}

impl AffineCase {
    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePartition {
    pub case: AffineCase,
    pub partition: SetPartition,
}

fn parts_from(size: usize, listed: Vec<Vec<usize>>) -> Result<SetPartition> {
    let mut used = vec![false; size];
    let mut parts: Vec<BTreeSet<usize>> = Vec::new();
    for l in listed {
        let set: BTreeSet<usize> = l.into_iter().collect();
        for &x in &set {
            if used[x] {
                return Err(Error::InvalidPartition(format!("point {x} listed twice")));
            }
            used[x] = true;
        }
        parts.push(set);
    }
    let rest: BTreeSet<usize> = (0..size).filter(|&x| !used[x]).collect();
    if !rest.is_empty() {
        parts.push(rest);
    }
    SetPartition::new(size, parts)
}

/// `{e_1, 2e_1, e_2, .., e_n, e_1+e_2, .., e_{n-1}+e_n}` (Case 3) or without
/// `e_1, 2e_1` (Case 4).
fn chain_set(s: &AffineSpace, basis: &[usize], from: usize) -> Vec<usize> {
    let n = basis.len();
    let mut v: Vec<usize> = basis[from..].to_vec();
    for i in 0..n - 1 {
        v.push(s.add(basis[i], basis[i + 1]));
    }
    v
}

/// Case 9 second part: `e_3..e_n`, consecutive sums from `e_3`, and the two cross terms.
fn case9_set(s: &AffineSpace, basis: &[usize], cross: (usize, usize)) -> Vec<usize> {
    let mut v: Vec<usize> = basis[2..].to_vec();
    for i in 2..basis.len() - 1 {
        v.push(s.add(basis[i], basis[i + 1]));
    }
    v.push(cross.0);
    v.push(cross.1);
    v
}

fn check_group(space: &AffineSpace, g: Option<&PermGroup>) -> Result<()> {
    if let Some(g) = g {
        if g.ops().degree != space.size() {
            return Err(Error::Dimension(format!(
                "group of degree {} on a space of {} points",
                g.ops().degree,
                space.size()
            )));
        }
        if !g.is_enumerated() {
            return Err(Error::Precondition("group must be enumerated".into()));
        }
    }
    Ok(())
}

/// The regular partition of `GF(q)^n` for the given case selection.
///
/// When `q = 2`, a group is supplied and `3 ∤ |g|`, the group-dependent Cases 7–9
/// are used (this includes `n = 2`, taking precedence over Case 1). Otherwise the
/// shape depends on `(n, q)` only.
pub fn affine_partition(space: &AffineSpace, g: Option<&PermGroup>) -> Result<AffinePartition> {
    check_group(space, g)?;
    let (q, n) = (space.q, space.n);
    let size = space.size();
    let basis: Vec<usize> = (1..=n).map(|i| space.e(i)).collect();
    if let Some(g) = g.filter(|g| q == 2 && n >= 2 && g.order() % 3 != 0) {
        return match n {
            2 => case7(space, g),
            3 => case8(space, g),
            _ => case9(space, g),
        };
    }
    let (case, listed) = if size <= 4 {
        (AffineCase::Case1, (0..size).map(|x| vec![x]).collect())
    } else if n == 1 && q >= 5 {
        (AffineCase::Case2, vec![vec![0], vec![basis[0]]])
    } else if q >= 5 {
        let mut omega2 = vec![basis[0], space.scale(2, basis[0])];
        omega2.extend(chain_set(space, &basis, 1));
        (AffineCase::Case3, vec![vec![0], omega2])
    } else if q == 3 {
        (AffineCase::Case4, vec![vec![0], vec![basis[0]], chain_set(space, &basis, 1)])
    } else if n == 3 {
        (AffineCase::Case5, vec![vec![0], vec![basis[0]], vec![basis[1]], vec![basis[2]]])
    } else {
        let cross = (space.add(basis[2], basis[1]), space.add(basis[n as usize - 1], basis[0]));
        (AffineCase::Case6, vec![vec![0], vec![basis[0]], vec![basis[1]], case9_set(space, &basis, cross)])
    };
    Ok(AffinePartition { case, partition: parts_from(size, listed)? })
}

fn verified(space: &AffineSpace, g: &PermGroup, case: AffineCase, listed: Vec<Vec<usize>>) -> Option<AffinePartition> {
    let partition = parts_from(space.size(), listed).ok()?;
    is_regular_partition(g, &partition).ok()?;
    Some(AffinePartition { case, partition })
}

fn case7(space: &AffineSpace, g: &PermGroup) -> Result<AffinePartition> {
    let nonzero: BTreeSet<usize> = (1..4).collect();
    let f = fixed_point_of_stabilizer(g, &nonzero)?;
    let other = (1..4).find(|&x| x != f).unwrap();
    verified(space, g, AffineCase::Case7, vec![vec![0], vec![other]])
        .ok_or_else(|| Error::Construction { path: "affine case 7".into(), order: 0 })
}

fn case8(space: &AffineSpace, g: &PermGroup) -> Result<AffinePartition> {
    let (e1, e2) = (space.e(1), space.e(2));
    let omega1 = vec![e1, e2, space.add(e1, e2)];
    for x in 1..space.size() {
        if omega1.contains(&x) {
            continue;
        }
        if let Some(p) = verified(space, g, AffineCase::Case8, vec![omega1.clone(), vec![0, x]]) {
            return Ok(p);
        }
    }
    // unitriangular template, tried in every ordered basis
    let size = space.size();
    for b1 in 1..size {
        for b2 in 1..size {
            for b3 in 1..size {
                let cols = [b1, b2, b3];
                if space.affine_map(&cols, 0).is_err() {
                    continue;
                }
                let listed = vec![vec![b1, b3, space.add(b1, b3)], vec![b2, space.add(b2, b3)]];
                if let Some(p) = verified(space, g, AffineCase::Case8, listed) {
                    return Ok(p);
                }
            }
        }
    }
    Err(Error::Construction { path: "affine case 8".into(), order: 0 })
}

fn case9(space: &AffineSpace, g: &PermGroup) -> Result<AffinePartition> {
    let n = space.n as usize;
    let (e1, e2) = (space.e(1), space.e(2));
    let omega1: BTreeSet<usize> = [e1, e2, space.add(e1, e2)].into();
    let f = fixed_point_of_stabilizer(g, &omega1)?;
    let other = *omega1.iter().find(|&&x| x != f).unwrap();
    let mut basis = vec![f, other];
    basis.extend((3..=space.n).map(|i| space.e(i)));
    let o1: Vec<usize> = omega1.iter().copied().collect();
    let stated = (space.add(basis[2], basis[1]), space.add(basis[n - 1], basis[0]));
    if let Some(p) = verified(space, g, AffineCase::Case9, vec![o1.clone(), case9_set(space, &basis, stated)]) {
        return Ok(p);
    }
    // perturb the two cross terms over sums of two basis vectors
    let mut sums = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            sums.push(space.add(basis[i], basis[j]));
        }
    }
    for &a in &sums {
        for &b in &sums {
            if a >= b {
                continue;
            }
            let listed = vec![o1.clone(), case9_set(space, &basis, (a, b))];
            let distinct = listed[1].iter().collect::<BTreeSet<_>>().len() == listed[1].len();
            if !distinct || listed[1].iter().any(|x| omega1.contains(x)) {
                continue;
            }
            if let Some(p) = verified(space, g, AffineCase::Case9, listed) {
                return Ok(p);
            }
        }
    }
    Err(Error::Construction { path: "affine case 9".into(), order: 0 })
}

/// Size facts used when the partition is consumed elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionProperties {
    /// First part whose size no other part shares (absent in Case 1).
    pub unique_size_part: Option<usize>,
    /// Whether the case's designated small part satisfies `|Ω| < |W|/4`.
    pub large_part_ok: bool,
}

pub fn partition_properties(part: &SetPartition, case: AffineCase) -> PartitionProperties {
    let sizes = part.sizes();
    let unique_size_part = if case == AffineCase::Case1 {
        None
    } else {
        (0..sizes.len()).find(|&i| sizes.iter().filter(|&&s| s == sizes[i]).count() == 1)
    };
    let w = part.degree();
    let small = |i: usize, extra: usize| sizes.get(i).map_or(false, |&s| 4 * (s + extra) < w);
    let large_part_ok = match case {
        AffineCase::Case1 => false,
        AffineCase::Case2 | AffineCase::Case3 | AffineCase::Case7 | AffineCase::Case8 | AffineCase::Case9 => {
            small(1, 0)
        }
        AffineCase::Case4 => small(2, 2),
        AffineCase::Case5 | AffineCase::Case6 => small(3, 0),
    };
    PartitionProperties { unique_size_part, large_part_ok }
}

/// A coloring of `{0, .., n-1}` by residues mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub p: u32,
    pub colors: Vec<u32>,
}

impl Coloring {
    pub fn distinct_colors(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }
}

/// A coloring whose stabilizer in `g` is trivial.
pub fn regular_coloring(g: &PermGroup, p: u32) -> Result<Coloring> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Precondition(format!("p = {p} must be an odd prime")));
    }
    if !g.is_enumerated() {
        return Err(Error::Precondition("group must be enumerated".into()));
    }
    if g.order() % p as usize == 0 {
        return Err(Error::NotCoprime { p, order: g.order() });
    }
    let n = g.ops().degree;
    let mut colors = vec![0u32; n];
    for orbit in orbits(g) {
        let local = restrict_to(g, &orbit)?;
        let c = transitive_coloring(&local, p)?;
        for (i, &x) in orbit.iter().enumerate() {
            colors[x] = c[i];
        }
    }
    let stab = coloring_stabilizer(g, &colors);
    if !stab.is_trivial() {
        return Err(Error::Construction { path: "regular_coloring".into(), order: stab.order() });
    }
    Ok(Coloring { p, colors })
}

fn transitive_coloring(g: &PermGroup, p: u32) -> Result<Vec<u32>> {
    let n = g.ops().degree;
    if n == 1 {
        return Ok(vec![0]);
    }
    let blocks = minimal_blocks(g)?;
    if blocks.len() == n {
        let ap = primitive_partition(g)?;
        let mut colors = vec![0u32; n];
        for (i, part) in ap.partition.parts().iter().enumerate() {
            for &x in part {
                colors[x] = i as u32;
            }
        }
        return Ok(colors);
    }
    let (image, _) = action_on_blocks(g, &blocks)?;
    let a = transitive_coloring(&image, p)?;
    let delta1: Vec<usize> = blocks.parts()[0].iter().copied().collect();
    let h1 = setwise_stabilizer(g, &blocks.parts()[0]);
    let local = restrict_to(&h1, &delta1)?;
    let ap = primitive_partition(&local)?;
    // colors on Δ1 (local indices) as a function of the anchor a_i
    let props = partition_properties(&ap.partition, ap.case);
    let local_colors = |anchor: u32| -> Vec<u32> {
        let m = delta1.len();
        let mut c = vec![0u32; m];
        match props.unique_size_part {
            None => {
                for (j, part) in ap.partition.parts().iter().enumerate() {
                    for &x in part {
                        c[x] = (j as u32 + anchor) % p;
                    }
                }
            }
            Some(u) => {
                let mut order: Vec<usize> = (0..ap.partition.len()).filter(|&j| j != u).collect();
                order.sort_by_key(|&j| ap.partition.parts()[j].len());
                let mut free = (0..p).filter(|&r| r != anchor);
                for &x in &ap.partition.parts()[u] {
                    c[x] = anchor;
                }
                for j in order {
                    let col = free.next().expect("at most p parts");
                    for &x in &ap.partition.parts()[j] {
                        c[x] = col;
                    }
                }
            }
        }
        c
    };
    let reps = block_transversal(g, &blocks);
    let mut colors = vec![0u32; n];
    for (i, rep) in reps.iter().enumerate() {
        let lc = local_colors(a[i]);
        for (j, &x) in delta1.iter().enumerate() {
            colors[rep.apply(x)] = lc[j];
        }
    }
    Ok(colors)
}

/// For each block `Δ_i`, an element mapping `Δ_0` onto it.
fn block_transversal(g: &PermGroup, blocks: &SetPartition) -> Vec<Perm> {
    let k = blocks.len();
    let mut reps: Vec<Option<Perm>> = vec![None; k];
    reps[0] = Some(g.ops().identity());
    let mut queue = vec![0usize];
    while let Some(i) = queue.pop() {
        let r = reps[i].clone().unwrap();
        let x = *blocks.parts()[i].iter().next().unwrap();
        for gen in g.gens() {
            let j = blocks.part_of(gen.apply(x));
            if reps[j].is_none() {
                reps[j] = Some(gen.compose(&r));
                queue.push(j);
            }
        }
    }
    reps.into_iter().map(|r| r.expect("transitive on blocks")).collect()
}

/// Realizes a primitive solvable group as an affine group and returns its affine
/// partition pulled back to the original points.
pub fn primitive_partition(g: &PermGroup) -> Result<AffinePartition> {
    let n = g.ops().degree;
    let series = g.derived_series();
    let t = series.iter().rev().find(|h| !h.is_trivial()).ok_or(Error::NotAffine)?;
    let primes = prime_factors(t.order() as u64);
    if t.order() != n || primes.len() != 1 || !t.is_abelian() {
        return Err(Error::NotAffine);
    }
    let q = primes[0];
    if t.elements().iter().any(|x| t.ops().elem_order(x) > q) {
        return Err(Error::NotAffine);
    }
    // basis of T
    let mut basis: Vec<Perm> = Vec::new();
    let mut span = t.subgroup(Vec::new());
    for x in t.elements() {
        if !span.contains(x) {
            basis.push(x.clone());
            span = t.subgroup(basis.clone());
        }
    }
    let space = AffineSpace::new(q as u32, basis.len() as u32)?;
    let ops = PermOps { degree: n };
    let to_point: Vec<usize> = (0..n)
        .map(|idx| {
            let c = space.coords(idx);
            let mut pt = 0usize;
            for (b, &ci) in basis.iter().zip(&c) {
                pt = ops.pow(b, ci as u64).apply(pt);
            }
            pt
        })
        .collect();
    let mut to_index = vec![0usize; n];
    for (idx, &pt) in to_point.iter().enumerate() {
        to_index[pt] = idx;
    }
    let translate = |h: &Perm| Perm::new((0..n).map(|idx| to_index[h.apply(to_point[idx])]).collect());
    let gens = g.gens().iter().map(translate).collect::<Result<Vec<_>>>()?;
    let affine = Group::enumerated(PermOps { degree: n }, gens, g.order().max(1))?;
    let ap = affine_partition(&space, Some(&affine))?;
    let partition = ap.partition.mapped(&to_point, n)?;
    Ok(AffinePartition { case: ap.case, partition })
}

/// Points of `W_1 ⊕ .. ⊕ W_k`: index `i_1 + |W_1| i_2 + |W_1||W_2| i_3 + ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSum {
    pub spaces: Vec<AffineSpace>,
}

impl DirectSum {
    pub fn new(spaces: Vec<AffineSpace>) -> Self {
        DirectSum { spaces }
    }

    pub fn size(&self) -> usize {
        self.spaces.iter().map(|s| s.size()).product()
    }

    /// Embeds point `x` of summand `i`.
    pub fn embed(&self, i: usize, x: usize) -> usize {
        let stride: usize = self.spaces[..i].iter().map(|s| s.size()).product();
        x * stride
    }

    pub fn components(&self, mut v: usize) -> Vec<usize> {
        self.spaces
            .iter()
            .map(|s| {
                let c = v % s.size();
                v /= s.size();
                c
            })
            .collect()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.components(a), self.components(b));
        let mut stride = 1;
        let mut out = 0;
        for (i, s) in self.spaces.iter().enumerate() {
            out += s.add(x[i], y[i]) * stride;
            stride *= s.size();
        }
        out
    }

    /// All translations as generators.
    pub fn translations(&self) -> Vec<Perm> {
        let mut gens = Vec::new();
        for (i, s) in self.spaces.iter().enumerate() {
            for j in 1..=s.n {
                let t = self.embed(i, s.e(j));
                gens.push(Perm::new((0..self.size()).map(|v| self.add(v, t)).collect()).unwrap());
            }
        }
        gens
    }

    /// Lifts a permutation of summand `i` to the direct sum.
    pub fn lift(&self, i: usize, h: &Perm) -> Perm {
        let images = (0..self.size())
            .map(|v| {
                let mut c = self.components(v);
                c[i] = h.apply(c[i]);
                let mut stride = 1;
                let mut out = 0;
                for (j, s) in self.spaces.iter().enumerate() {
                    out += c[j] * stride;
                    stride *= s.size();
                }
                out
            })
            .collect();
        Perm::new(images).unwrap()
    }
}

/// The `Ω_i*` piece inside one summand of a mixed-characteristic sum.
fn mixed_piece(s: &AffineSpace) -> Vec<usize> {
    let basis: Vec<usize> = (1..=s.n).map(|i| s.e(i)).collect();
    let size = s.size();
    if size <= 3 {
        vec![basis[0]]
    } else if size == 4 {
        vec![basis[1]]
    } else if s.q >= 5 {
        if s.n == 1 {
            vec![basis[0]]
        } else {
            let mut v = vec![basis[0], s.scale(2, basis[0])];
            v.extend(chain_set(s, &basis, 1));
            v
        }
    } else if s.q == 3 {
        chain_set(s, &basis, 1)
    } else if s.n == 3 {
        vec![basis[2]]
    } else {
        let n = basis.len();
        case9_set(s, &basis, (s.add(basis[2], basis[1]), s.add(basis[n - 1], basis[0])))
    }
}

/// Three-part regular partition `{0}, Ω_2, rest` of a direct sum of spaces in
/// distinct characteristics, with `|Ω_2| < |W|/4`.
pub fn mixed_char_partition(spaces: &[AffineSpace], g: Option<&PermGroup>) -> Result<SetPartition> {
    if spaces.len() < 2 {
        return Err(Error::Precondition("need at least two summands".into()));
    }
    if spaces.windows(2).any(|w| w[0].q >= w[1].q) {
        return Err(Error::Precondition("primes must be distinct and increasing".into()));
    }
    let ds = DirectSum::new(spaces.to_vec());
    let size = ds.size();
    if let Some(g) = g {
        if g.ops().degree != size {
            return Err(Error::Dimension(format!("group of degree {} on {size} points", g.ops().degree)));
        }
    }
    let e = |i: usize, j: u32| ds.embed(i, spaces[i].e(j));
    let mut omega2: Vec<usize> = Vec::new();
    if spaces.iter().all(|s| s.n <= 2) {
        omega2.push((0..spaces.len()).fold(0, |acc, i| ds.add(acc, e(i, 1))));
        for (j, s) in spaces.iter().enumerate() {
            if s.n == 2 {
                omega2.push(e(j, 2));
            }
        }
    } else {
        let (a, b) = (e(0, 1), e(1, 1));
        omega2.push(ds.add(a, b));
        if spaces[0].q == 2 && spaces[0].n >= 3 {
            omega2.push(ds.add(a, ds.add(b, b)));
            omega2.push(ds.add(e(0, 2), b));
        }
        for (i, s) in spaces.iter().enumerate() {
            omega2.extend(mixed_piece(s).into_iter().map(|x| ds.embed(i, x)));
        }
    }
    let part = parts_from(size, vec![vec![0], omega2.clone()])?;
    if 4 * omega2.len() >= size {
        return Err(Error::Construction { path: "mixed_char_partition size bound".into(), order: omega2.len() });
    }
    if let Some(g) = g {
        if g.is_enumerated() {
            let stab = partition_stabilizer(g, &part);
            if !stab.is_trivial() {
                return Err(Error::Construction { path: "mixed_char_partition".into(), order: stab.order() });
            }
        }
    }
    Ok(part)
}

/// Elements fixing every part setwise.
pub fn partition_stabilizer(g: &PermGroup, part: &SetPartition) -> PermGroup {
    g.subgroup_where(|h| part.parts().iter().all(|p| h.maps_set_to_itself(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u32, n: u32) -> AffineSpace {
        AffineSpace::new(q, n).unwrap()
    }

    fn parts(p: &SetPartition) -> Vec<Vec<usize>> {
        p.parts().iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn point_model() {
        let s = sp(3, 2);
        assert_eq!(s.size(), 9);
        assert_eq!((s.e(1), s.e(2)), (1, 3));
        assert_eq!(s.coords(7), vec![1, 2]);
        assert_eq!(s.index(&[1, 2]), 7);
        assert_eq!(s.add(s.e(1), s.e(2)), 4);
        assert_eq!(s.neg(1), 2);
        assert!(AffineSpace::new(4, 2).is_err());
    }

    #[test]
    fn case2_line_over_gf5() {
        let ap = affine_partition(&sp(5, 1), None).unwrap();
        assert_eq!(ap.case, AffineCase::Case2);
        assert_eq!(parts(&ap.partition), vec![vec![0], vec![1], vec![2, 3, 4]]);
        let props = partition_properties(&ap.partition, ap.case);
        assert_eq!(props.unique_size_part, Some(2));
        assert!(props.large_part_ok);
    }

    #[test]
    fn case4_plane_over_gf3() {
        let s = sp(3, 2);
        let ap = affine_partition(&s, None).unwrap();
        assert_eq!(ap.case, AffineCase::Case4);
        // {0}, {e1}, {e2, e1+e2}, rest
        assert_eq!(parts(&ap.partition), vec![vec![0], vec![1], vec![3, 4], vec![2, 5, 6, 7, 8]]);
        assert!(!partition_properties(&ap.partition, ap.case).large_part_ok);
        assert!(agl_partition_witness(&s, &ap.partition).is_none());
    }

    #[test]
    fn case3_plane_over_gf5() {
        let s = sp(5, 2);
        let ap = affine_partition(&s, None).unwrap();
        assert_eq!(ap.case, AffineCase::Case3);
        assert_eq!(ap.partition.sizes(), vec![1, 4, 20]);
        assert!(partition_properties(&ap.partition, ap.case).large_part_ok);
        assert!(agl_partition_witness(&s, &ap.partition).is_none());
    }

    #[test]
    fn case7_with_translations() {
        let s = sp(2, 2);
        let g = s.affine_group(&[]).unwrap().enumerate(100).unwrap();
        assert_eq!(g.order(), 4);
        let ap = affine_partition(&s, Some(&g)).unwrap();
        assert_eq!(ap.case, AffineCase::Case7);
        assert_eq!(ap.partition.len(), 3);
        assert!(is_regular_partition(&g, &ap.partition).is_ok());
    }

    #[test]
    fn agl_witness_matches_enumeration() {
        // the backtracking search agrees with brute force over AGL(2,3)
        let s = sp(3, 2);
        let agl = s.agl().unwrap().enumerate(1000).unwrap();
        assert_eq!(agl.order(), 432);
        let bad = SetPartition::from_vecs(9, vec![vec![0], (1..9).collect()]).unwrap();
        let w = agl_partition_witness(&s, &bad).unwrap();
        assert!(agl.contains(&w) && !w.is_identity());
        assert!(is_regular_partition(&agl, &bad).is_err());
        let good = affine_partition(&s, None).unwrap().partition;
        assert!(is_regular_partition(&agl, &good).is_ok());
    }

    #[test]
    fn trivial_cases_are_singletons() {
        for (q, n) in [(2, 1), (3, 1), (2, 2)] {
            let ap = affine_partition(&sp(q, n), None).unwrap();
            assert_eq!(ap.case, AffineCase::Case1);
            assert_eq!(ap.partition.len(), sp(q, n).size());
            let props = partition_properties(&ap.partition, ap.case);
            assert_eq!(props, PartitionProperties { unique_size_part: None, large_part_ok: false });
        }
    }

    /// Exhaustive oracle: is there any coloring with trivial stabilizer?
    fn exists_regular_coloring(g: &PermGroup, p: u32) -> bool {
        let n = g.ops().degree;
        (0..(p as usize).pow(n as u32)).any(|mut code| {
            let colors: Vec<u32> = (0..n)
                .map(|_| {
                    let c = (code % p as usize) as u32;
                    code /= p as usize;
                    c
                })
                .collect();
            coloring_stabilizer(g, &colors).is_trivial()
        })
    }

    fn group(n: usize, cycles: &[&[&[usize]]]) -> PermGroup {
        let gens = cycles.iter().map(|c| Perm::from_cycles(n, c).unwrap()).collect();
        perm_group(n, gens).unwrap().enumerate(10_000).unwrap()
    }

    #[test]
    fn colorings() {
        let triv = group(3, &[]);
        assert_eq!(regular_coloring(&triv, 3).unwrap().colors, vec![0, 0, 0]);

        let s3 = group(3, &[&[&[0, 1]], &[&[0, 1, 2]]]);
        let c = regular_coloring(&s3, 5).unwrap();
        assert_eq!(c.distinct_colors(), 3);
        assert!(coloring_stabilizer(&s3, &c.colors).is_trivial());

        let c4 = group(4, &[&[&[0, 1, 2, 3]]]);
        assert!(exists_regular_coloring(&c4, 3));
        let c = regular_coloring(&c4, 3).unwrap();
        assert!(coloring_stabilizer(&c4, &c.colors).is_trivial());
        assert!(c.colors.iter().all(|&x| x < 3));

        assert!(matches!(regular_coloring(&s3, 3), Err(Error::NotCoprime { .. })));
        assert!(regular_coloring(&s3, 2).is_err());
    }

    #[test]
    fn imprimitive_wreath() {
        // C2 wr C2 = D4 on 4 points, and C2 wr C4 on 8 points
        let d4 = group(4, &[&[&[0, 1, 2, 3]], &[&[1, 3]]]);
        let c = regular_coloring(&d4, 3).unwrap();
        assert!(coloring_stabilizer(&d4, &c.colors).is_trivial());
        let w = group(8, &[&[&[0, 1]], &[&[0, 2, 4, 6], &[1, 3, 5, 7]]]);
        assert_eq!(w.order(), 64);
        let c = regular_coloring(&w, 3).unwrap();
        assert!(coloring_stabilizer(&w, &c.colors).is_trivial());
    }

    #[test]
    fn primitive_affine_groups_are_recognized() {
        let s = sp(5, 1);
        let agl = s.agl().unwrap().enumerate(100).unwrap();
        let ap = primitive_partition(&agl).unwrap();
        assert_eq!(ap.case, AffineCase::Case2);
        assert!(is_regular_partition(&agl, &ap.partition).is_ok());
        let a5 = group(5, &[&[&[0, 1, 2]], &[&[0, 1, 2, 3, 4]]]);
        assert_eq!(primitive_partition(&a5).unwrap_err(), Error::NotAffine);
    }

    #[test]
    fn mixed_characteristic() {
        let spaces = [sp(2, 1), sp(3, 1)];
        let ds = DirectSum::new(spaces.to_vec());
        let g = perm_group(6, ds.translations()).unwrap().enumerate(100).unwrap();
        assert_eq!(g.order(), 6);
        let part = mixed_char_partition(&spaces, Some(&g)).unwrap();
        assert_eq!(part.sizes(), vec![1, 1, 4]);
        assert!(is_regular_partition(&g, &part).is_ok());

        let part = mixed_char_partition(&[sp(2, 3), sp(3, 1)], None).unwrap();
        assert_eq!(part.parts()[1].len(), 5);

        assert!(mixed_char_partition(&[sp(3, 1), sp(2, 1)], None).is_err());
        assert!(mixed_char_partition(&[sp(3, 1)], None).is_err());
    }
}
