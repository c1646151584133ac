//! Recognition of the extraspecial-over-cyclic Fitting shape and the
//! distinguished bases it induces.

use std::collections::{BTreeSet, HashSet};

use crate::algebra::field::prime_factors;
use crate::algebra::matrix::{all_vectors, normalize_projective, unit};
use crate::algebra::{Fe, Field, Matrix, Vector};
use crate::error::{Error, Result};
use crate::group::{Group, GroupOps};

use super::{dim_of, field_of, with_scalars, MatGroup};

/// `F = A·E` together with a monomial (or paired) basis adapted to it.
///
/// `d0_gens[k]` and `s_gens[k]` form a hyperbolic pair for the prime
/// `gen_primes[k]`; generators are listed by ascending prime. Basis vector
/// `u_i` is `s^c(u_1)` where `i = Σ_r offset_r · Σ_j c_{r,j} r^j`.
#[derive(Clone, Debug)]
pub struct FittingStructure {
    pub field: Field,
    pub e: usize,
    pub a_order: usize,
    pub shape: Vec<(u64, u32)>,
    pub gen_primes: Vec<u64>,
    pub d0_gens: Vec<Matrix>,
    pub s_gens: Vec<Matrix>,
    pub q_gens: Option<(Matrix, Matrix)>,
    pub monomial: bool,
    pub basis: Vec<Vector>,
    pub pairing: Option<Vec<(usize, usize)>>,
    pub fitting: MatGroup,
}

impl FittingStructure {
    /// Number of basis vectors in a monomial orbit: `e` or `e/2`.
    pub fn orbit_len(&self) -> usize {
        if self.monomial {
            self.e
        } else {
            self.e / 2
        }
    }

    /// Exponent vectors of the `S` generators for orbit index `idx`.
    pub fn exponents(&self, mut idx: usize) -> Vec<u64> {
        self.gen_primes
            .iter()
            .map(|&r| {
                let c = idx as u64 % r;
                idx /= r as usize;
                c
            })
            .collect()
    }

    /// The element `Π s_k^{c_k}` of `S`.
    pub fn s_element(&self, idx: usize) -> Matrix {
        let f = &self.field;
        let mut m = Matrix::identity(self.e);
        for (s, c) in self.s_gens.iter().zip(self.exponents(idx)) {
            m = m.mul(f, &s.pow(f, c));
        }
        m
    }
}

/// Projective representative: scaled so the first nonzero entry is 1.
pub(crate) fn canonical(f: &Field, m: &Matrix) -> Matrix {
    let lead = m.to_rows().concat().into_iter().find(|x| !x.is_zero()).expect("invertible");
    m.scale(f, f.inv(lead).expect("nonzero"))
}

fn commute_mod_scalars(f: &Field, a: &Matrix, b: &Matrix) -> bool {
    canonical(f, &a.mul(f, b)) == canonical(f, &b.mul(f, a))
}

fn is_square_scalar(f: &Field, m: &Matrix) -> Option<bool> {
    m.scalar_value().map(|l| f.is_square(l))
}

/// Key ordering vectors by their little-endian code (the order of `all_vectors`).
pub(crate) fn code_key(v: &[Fe]) -> Vec<Fe> {
    v.iter().rev().copied().collect()
}

fn factor(mut e: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for r in prime_factors(e) {
        let mut k = 0;
        while e % r == 0 {
            e /= r;
            k += 1;
        }
        out.push((r, k));
    }
    out
}

/// Closure of a set of cosets (canonical reps) of scalars under multiplication.
fn coset_closure(f: &Field, start: &BTreeSet<Matrix>, add: &[Matrix], limit: usize) -> Option<BTreeSet<Matrix>> {
    let mut set = start.clone();
    let mut frontier: Vec<Matrix> = add.iter().filter(|m| !set.contains(*m)).cloned().collect();
    for m in &frontier {
        set.insert(m.clone());
    }
    while let Some(m) = frontier.pop() {
        let current: Vec<Matrix> = set.iter().cloned().collect();
        for c in current {
            let p = canonical(f, &c.mul(f, &m));
            if set.insert(p.clone()) {
                if set.len() > limit {
                    return None;
                }
                frontier.push(p);
            }
        }
    }
    Some(set)
}

struct ESearch<'a> {
    field: &'a Field,
    classes: Vec<Vec<Matrix>>,
    compat: Vec<Vec<bool>>,
    candidates: HashSet<Matrix>,
    target: usize,
    seen: HashSet<Vec<Matrix>>,
}

impl ESearch<'_> {
    fn nondegenerate(&self, set: &BTreeSet<Matrix>) -> bool {
        set.iter().all(|a| a.is_identity() || set.iter().any(|b| !commute_reps(self.field, a, b)))
    }

    fn dfs(&mut self, set: BTreeSet<Matrix>, chosen: Vec<usize>) -> Option<BTreeSet<Matrix>> {
        if set.len() == self.target {
            return self.nondegenerate(&set).then_some(set);
        }
        let key: Vec<Matrix> = set.iter().cloned().collect();
        if !self.seen.insert(key) {
            return None;
        }
        for c in chosen.last().map_or(0, |&l| l + 1)..self.classes.len() {
            if set.contains(&self.classes[c][0]) || !chosen.iter().all(|&d| self.compat[c][d]) {
                continue;
            }
            let Some(next) = coset_closure(self.field, &set, &self.classes[c], self.target) else {
                continue;
            };
            if !next.iter().all(|m| m.is_identity() || self.candidates.contains(m)) {
                continue;
            }
            if self.target % next.len() != 0 {
                continue;
            }
            let mut ch = chosen.clone();
            ch.push(c);
            if let Some(found) = self.dfs(next, ch) {
                return Some(found);
            }
        }
        None
    }
}

/// Exact commutation; well defined on scalar cosets.
fn commute_reps(f: &Field, a: &Matrix, b: &Matrix) -> bool {
    a.mul(f, b) == b.mul(f, a)
}

/// Smallest `c` (in field order) with `(c·t)^r = 1`.
fn rescale_to_order(f: &Field, t: &Matrix, r: u64) -> Option<Matrix> {
    let lam = t.pow(f, r).scalar_value()?;
    f.elements().skip(1).find(|&c| f.pow(c, r as i64).map_or(false, |cr| f.mul(cr, lam) == Fe::ONE)).map(|c| t.scale(f, c))
}

fn rescale_quaternion(f: &Field, t: &Matrix) -> Option<Matrix> {
    let lam = t.mul(f, t).scalar_value()?;
    let minus_one = f.neg(Fe::ONE);
    f.elements().skip(1).find(|&c| f.mul(f.mul(c, c), lam) == minus_one).map(|c| t.scale(f, c))
}

/// Symplectic basis of the `r`-part of `E/Z`: hyperbolic pairs `(x, y)` with
/// singular members when `r = 2`, plus a trailing anisotropic pair if any.
type Symplectic = (Vec<(Matrix, Matrix)>, Option<(Matrix, Matrix)>);

fn symplectic_basis(f: &Field, part: &[Matrix], r: u64) -> Result<Symplectic> {
    let singular = |m: &Matrix| r != 2 || is_square_scalar(f, &m.mul(f, m)) == Some(true);
    let mut w: Vec<Matrix> = part.iter().filter(|m| !m.is_identity()).cloned().collect();
    // diagonal, then monomial, then the rest: keeps given coordinates when they are adapted
    w.sort_by_key(|m| {
        let shape = if m.is_diagonal() { 0 } else if monomial_permutation(m).is_some() { 1 } else { 2 };
        (shape, m.clone())
    });
    let mut pairs = Vec::new();
    while !w.is_empty() {
        let Some(x) = w.iter().find(|m| singular(m)).cloned() else {
            if r == 2 && w.len() == 3 {
                let i = w[0].clone();
                let j = w.iter().find(|m| !commute_reps(f, &i, m)).cloned();
                if let Some(j) = j {
                    return Ok((pairs, Some((i, j))));
                }
            }
            return Err(Error::Structure("anisotropic part larger than a quaternion pair".into()));
        };
        let Some(mut y) = w.iter().find(|m| !commute_reps(f, &x, m)).cloned() else {
            return Err(Error::Structure("degenerate commutator pairing".into()));
        };
        if !singular(&y) {
            y = canonical(f, &y.mul(f, &x));
        }
        w.retain(|m| commute_reps(f, m, &x) && commute_reps(f, m, &y));
        pairs.push((x, y));
    }
    Ok((pairs, None))
}

/// Recognizes `F = A·P_1···P_k` inside `G·Z` and builds the adapted basis.
///
/// Searches for a normal subgroup `E·Z` of the Fitting subgroup of `G·Z` with
/// `|E·Z / Z| = e²`, abelian modulo scalars with a nondegenerate commutator
/// pairing; its non-scalar elements have trace 0 and `t^rad(e)` scalar.
pub fn detect_structure(g: &MatGroup, cap: usize) -> Result<FittingStructure> {
    let f = field_of(g).clone();
    let e = dim_of(g);
    let q = f.order() as u64;
    let shape = factor(e as u64);
    if shape.iter().any(|&(r, _)| (q - 1) % r != 0) {
        return Err(Error::Structure("field lacks the required roots of unity".into()));
    }
    let rad: u64 = shape.iter().map(|&(r, _)| r).product();
    let gz = with_scalars(g).enumerate(cap)?;
    let ops = gz.ops().clone();
    let fit = gz.fitting_subgroup();
    let candidates: HashSet<Matrix> = fit
        .elements()
        .iter()
        .filter(|m| m.scalar_value().is_none() && m.trace(&f).is_zero() && m.pow(&f, rad).scalar_value().is_some())
        .map(|m| canonical(&f, m))
        .collect();
    let mut classes: Vec<Vec<Matrix>> = Vec::new();
    let mut placed: HashSet<Matrix> = HashSet::new();
    let mut sorted: Vec<&Matrix> = candidates.iter().collect();
    sorted.sort();
    let inverses: Vec<Matrix> = gz.gens().iter().map(|h| ops.inv(h)).collect();
    for c in sorted {
        if placed.contains(c) {
            continue;
        }
        let mut class = vec![c.clone()];
        placed.insert(c.clone());
        let mut i = 0;
        while i < class.len() {
            for (h, hi) in gz.gens().iter().zip(&inverses) {
                let d = canonical(&f, &class[i].conjugate_by(&f, h, hi));
                if placed.insert(d.clone()) {
                    class.push(d);
                }
            }
            i += 1;
        }
        class.sort();
        if class.len() < e * e && class.iter().all(|a| class.iter().all(|b| commute_mod_scalars(&f, a, b))) {
            classes.push(class);
        }
    }
    classes.sort_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])));
    let compat: Vec<Vec<bool>> = classes
        .iter()
        .map(|a| classes.iter().map(|b| b.iter().all(|m| commute_mod_scalars(&f, &a[0], m))).collect())
        .collect();
    let mut search = ESearch {
        field: &f,
        classes,
        compat,
        candidates,
        target: e * e,
        seen: HashSet::new(),
    };
    let start = BTreeSet::from([Matrix::identity(e)]);
    let cosets = search.dfs(start, Vec::new()).ok_or_else(|| Error::Structure("no normal extraspecial-type subgroup".into()))?;
    let cosets: Vec<Matrix> = cosets.into_iter().collect();

    let mut gen_primes = Vec::new();
    let mut d0 = Vec::new();
    let mut s = Vec::new();
    let mut q_gens = None;
    for &(r, m) in &shape {
        let part: Vec<Matrix> = cosets.iter().filter(|t| t.pow(&f, r).scalar_value().is_some()).cloned().collect();
        if part.len() as u64 != r.pow(2 * m) {
            return Err(Error::Structure(format!("{r}-part of E/Z has the wrong order")));
        }
        let (pairs, aniso) = symplectic_basis(&f, &part, r)?;
        for (x, y) in pairs {
            let bad = || Error::Structure("generator cannot be rescaled to prime order".into());
            d0.push(rescale_to_order(&f, &x, r).ok_or_else(bad)?);
            s.push(rescale_to_order(&f, &y, r).ok_or_else(bad)?);
            gen_primes.push(r);
        }
        if let Some((i, j)) = aniso {
            let bad = || Error::Structure("quaternion pair cannot be normalized".into());
            q_gens = Some((rescale_quaternion(&f, &i).ok_or_else(bad)?, rescale_quaternion(&f, &j).ok_or_else(bad)?));
        }
    }
    let mut fit_gens: Vec<Matrix> = d0.iter().chain(&s).cloned().collect();
    if let Some((i, j)) = &q_gens {
        fit_gens.push(i.clone());
        fit_gens.push(j.clone());
    }
    let fitting = with_scalars(&Group::new(ops.clone(), fit_gens)).enumerate(cap)?;
    let mut fs = FittingStructure {
        field: f.clone(),
        e,
        a_order: (q - 1) as usize,
        shape,
        gen_primes,
        d0_gens: d0,
        s_gens: s,
        monomial: q_gens.is_none(),
        q_gens,
        basis: Vec::new(),
        pairing: None,
        fitting,
    };
    let u1 = if fs.monomial {
        fs.basis = monomial_basis(&fs)?;
        fs.basis[0].clone()
    } else {
        let (basis, pairing) = nonmonomial_basis(&fs)?;
        fs.basis = basis;
        fs.pairing = Some(pairing);
        fs.basis[0].clone()
    };
    // fix D0 = C_D(u_1)
    for x in &mut fs.d0_gens {
        let img = x.apply(&f, &u1);
        let k = u1.iter().position(|c| !c.is_zero()).expect("nonzero");
        let lam = f.mul(img[k], f.inv(u1[k])?);
        *x = x.scale(&f, f.inv(lam)?);
    }
    check_characters(&fs)?;
    Ok(fs)
}

/// Common eigenspaces of commuting diagonalizable matrices, each as a basis.
fn common_eigenspaces(f: &Field, e: usize, mats: &[Matrix]) -> Vec<Vec<Vector>> {
    let mut spaces = vec![(0..e).map(|i| unit(e, i)).collect::<Vec<_>>()];
    for m in mats {
        let mut next = Vec::new();
        for sp in spaces {
            let Some(restricted) = m.restrict(f, &sp) else { continue };
            let k = sp.len();
            for lam in f.elements().skip(1) {
                let shifted = restricted.add(f, &Matrix::scalar(k, f.neg(lam)));
                let kernel = shifted.nullspace(f);
                if kernel.is_empty() {
                    continue;
                }
                let vecs: Vec<Vector> = kernel.iter().map(|c| super::combine(f, &sp, c)).collect();
                next.push(vecs);
            }
        }
        spaces = next;
    }
    spaces
}

/// Least nonzero vector of the span, normalized, in code order.
fn least_vector(f: &Field, basis: &[Vector]) -> Vector {
    all_vectors(f, basis.len())
        .skip(1)
        .map(|c| normalize_projective(f, &super::combine(f, basis, &c)))
        .min_by_key(|v| code_key(v))
        .expect("nonempty span")
}

fn first_eigenvector(fs: &FittingStructure, dim: usize) -> Result<Vector> {
    let spaces = common_eigenspaces(&fs.field, fs.e, &fs.d0_gens);
    spaces
        .iter()
        .filter(|s| s.len() == dim)
        .map(|s| least_vector(&fs.field, s))
        .min_by_key(|v| code_key(v))
        .ok_or_else(|| Error::Structure("no common eigenvector of D".into()))
}

/// `u_1, …, u_e` with `u_1` the least common eigenvector of `D` and
/// `u_i = s_i(u_1)` in the index order of [`FittingStructure::s_element`].
pub fn monomial_basis(fs: &FittingStructure) -> Result<Vec<Vector>> {
    if !fs.monomial {
        return Err(Error::Precondition("structure is not monomial".into()));
    }
    let u1 = first_eigenvector(fs, 1)?;
    let basis: Vec<Vector> = (0..fs.e).map(|i| fs.s_element(i).apply(&fs.field, &u1)).collect();
    if Matrix::from_columns(&basis)?.rank(&fs.field) != fs.e {
        return Err(Error::Structure("S-orbit of u_1 is not a basis".into()));
    }
    Ok(basis)
}

/// Basis `u_1, v_1, u_2, v_2, …` with `v_1 = i·u_1` for the first quaternion
/// generator and `(u_k, v_k) = s(u_1, v_1)`; the pairing lists index pairs.
pub fn nonmonomial_basis(fs: &FittingStructure) -> Result<(Vec<Vector>, Vec<(usize, usize)>)> {
    let (i, _) = fs.q_gens.as_ref().ok_or_else(|| Error::Precondition("structure is monomial".into()))?;
    let f = &fs.field;
    let u1 = first_eigenvector(fs, 2)?;
    let v1 = i.apply(f, &u1);
    let half = fs.e / 2;
    let mut basis = Vec::with_capacity(fs.e);
    for k in 0..half {
        let s = fs.s_element(k);
        basis.push(s.apply(f, &u1));
        basis.push(s.apply(f, &v1));
    }
    if Matrix::from_columns(&basis)?.rank(f) != fs.e {
        return Err(Error::Structure("W_i are not two-dimensional".into()));
    }
    Ok((basis, (0..half).map(|k| (2 * k, 2 * k + 1)).collect()))
}

/// In basis coordinates: pairwise distinct `D0` characters on the `u_i` and
/// balanced roots of unity on every generator's diagonal.
fn check_characters(fs: &FittingStructure) -> Result<()> {
    let f = &fs.field;
    let p = Matrix::from_columns(&fs.basis)?;
    let pi = p.inverse(f)?;
    let diags: Vec<Vec<Fe>> = fs.d0_gens.iter().map(|d| d.conjugate_by(f, &p, &pi).diag()).collect();
    let step = if fs.monomial { 1 } else { 2 };
    let chars: HashSet<Vec<Fe>> = (0..fs.e).step_by(step).map(|i| diags.iter().map(|d| d[i]).collect()).collect();
    if chars.len() != fs.orbit_len() {
        return Err(Error::Structure("D0 characters are not pairwise distinct".into()));
    }
    for d in &diags {
        let mut counts = std::collections::BTreeMap::new();
        for x in d {
            *counts.entry(*x).or_insert(0usize) += 1;
        }
        let first = *counts.values().next().unwrap();
        if counts.values().any(|&c| c != first) {
            return Err(Error::Structure("roots of unity are unbalanced on a D0 diagonal".into()));
        }
    }
    Ok(())
}

/// `g = δ·π` for a matrix monomial in the given coordinates (`g` already
/// written in the basis). Returns `(δ, π)` with `π` a 0/1 permutation matrix.
pub fn monomial_decompose(f: &Field, g: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = g.rows();
    let mut images = vec![0; n];
    let mut diag = vec![Fe::ZERO; n];
    for j in 0..n {
        let col = g.column(j);
        let nz: Vec<usize> = (0..n).filter(|&i| !col[i].is_zero()).collect();
        if nz.len() != 1 {
            return Err(Error::Precondition("matrix is not monomial".into()));
        }
        images[j] = nz[0];
        diag[nz[0]] = col[nz[0]];
    }
    if images.iter().collect::<HashSet<_>>().len() != n {
        return Err(Error::Precondition("matrix is not monomial".into()));
    }
    let _ = f;
    Ok((Matrix::diagonal(&diag), Matrix::permutation(&images)))
}

/// Permutation of basis indices induced by a monomial matrix (in basis coordinates).
pub fn monomial_permutation(g: &Matrix) -> Option<Vec<usize>> {
    let n = g.rows();
    let mut images = vec![0; n];
    for (j, img) in images.iter_mut().enumerate() {
        let mut nz = (0..n).filter(|&i| !g.get(i, j).is_zero());
        *img = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
    }
    Some(images)
}
