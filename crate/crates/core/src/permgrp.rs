//! Permutation groups on `{0, .., n-1}`: enumeration, setwise stabilizers, regular
//! partitions, minimal block systems and block actions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, GroupOps};

/// A permutation given by its image list: point `i` goes to `images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPerm(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm(images.into_iter().map(|i| i as u32).collect()))
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidPerm(format!("point {x} out of range")));
                }
                images[x] = c[(k + 1) % c.len()];
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn maps_set_to_itself(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&x| set.contains(&self.apply(x)))
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::new(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermOps {
    pub degree: usize,
}

impl GroupOps for PermOps {
    type Elem = Perm;

    fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }
}

pub type PermGroup = Group<PermOps>;

/// Group on `n` points generated by `gens` (not yet enumerated).
pub fn perm_group(n: usize, gens: Vec<Perm>) -> Result<PermGroup> {
    if let Some(g) = gens.iter().find(|g| g.degree() != n) {
        return Err(Error::InvalidPerm(format!("generator {g:?} has degree {}, expected {n}", g.degree())));
    }
    Ok(Group::new(PermOps { degree: n }, gens))
}

/// JSON shape `{"degree": n, "generators": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermGroupSpec {
    pub degree: usize,
    pub generators: Vec<Perm>,
}

impl PermGroupSpec {
    pub fn build(&self) -> Result<PermGroup> {
        perm_group(self.degree, self.generators.clone())
    }
}

/// A partition of `{0, .., n-1}` into nonempty disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPartition {
    n: usize,
    parts: Vec<BTreeSet<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, parts: Vec<BTreeSet<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for part in &parts {
            if part.is_empty() {
                return Err(Error::InvalidPartition("empty part".into()));
            }
            for &x in part {
                if x >= n || seen[x] {
                    return Err(Error::InvalidPartition(format!("point {x} repeated or out of range")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("point {x} not covered")));
        }
        Ok(SetPartition { n, parts })
    }

    pub fn from_vecs(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(n, parts.into_iter().map(|p| p.into_iter().collect()).collect())
    }

    pub fn singletons(n: usize) -> Self {
        SetPartition { n, parts: (0..n).map(|i| BTreeSet::from([i])).collect() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[BTreeSet<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_of(&self, x: usize) -> usize {
        self.parts.iter().position(|p| p.contains(&x)).expect("partition covers the domain")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }

    /// Relabels points through `map` (point i becomes map[i]).
    pub fn mapped(&self, map: &[usize], new_n: usize) -> Result<Self> {
        Self::new(new_n, self.parts.iter().map(|p| p.iter().map(|&x| map[x]).collect()).collect())
    }
}

/// Elements mapping `set` onto itself.
pub fn setwise_stabilizer(g: &PermGroup, set: &BTreeSet<usize>) -> PermGroup {
    g.subgroup_where(|h| h.maps_set_to_itself(set))
}

/// Point stabilizer.
pub fn point_stabilizer(g: &PermGroup, x: usize) -> PermGroup {
    g.subgroup_where(|h| h.apply(x) == x)
}

/// `Ok(())` if only the identity fixes every part; otherwise the least nonidentity witness.
pub fn is_regular_partition(g: &PermGroup, part: &SetPartition) -> std::result::Result<(), Perm> {
    if part.degree() != g.ops().degree {
        return Err(g.ops().identity());
    }
    let witness = g
        .elements()
        .iter()
        .find(|h| !h.is_identity() && part.parts().iter().all(|p| h.maps_set_to_itself(p)));
    match witness {
        Some(w) => Err(w.clone()),
        None => Ok(()),
    }
}

/// Orbits under the generators, each sorted, ordered by least point.
pub fn orbits(g: &PermGroup) -> Vec<Vec<usize>> {
    let n = g.ops().degree;
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orb = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orb.len() {
            let x = orb[i];
            for gen in g.gens() {
                let y = gen.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orb.push(y);
                }
            }
            i += 1;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

pub fn is_transitive(g: &PermGroup) -> bool {
    orbits(g).len() <= 1
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// Finest block system in which `a` and `b` share a block.
pub fn block_system_containing(g: &PermGroup, a: usize, b: usize) -> SetPartition {
    let n = g.ops().degree;
    let mut uf = UnionFind::new(n);
    let mut queue = vec![(a, b)];
    uf.union(a, b);
    while let Some((x, y)) = queue.pop() {
        for gen in g.gens() {
            let (gx, gy) = (gen.apply(x), gen.apply(y));
            if uf.union(gx, gy) {
                queue.push((gx, gy));
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
    for x in 0..n {
        let r = uf.find(x);
        by_root.entry(r).or_default().insert(x);
    }
    SetPartition { n, parts: by_root.into_values().collect() }
}

/// A nontrivial block system with the smallest possible block size, or the singleton
/// partition when `g` is primitive.
pub fn minimal_blocks(g: &PermGroup) -> Result<SetPartition> {
    let n = g.ops().degree;
    if !is_transitive(g) {
        return Err(Error::NotTransitive);
    }
    let mut best: Option<SetPartition> = None;
    for j in 1..n {
        let sys = block_system_containing(g, 0, j);
        let size = sys.parts()[0].len();
        if size < n && best.as_ref().map_or(true, |b| size < b.parts()[0].len()) {
            best = Some(sys);
        }
    }
    Ok(best.unwrap_or_else(|| SetPartition::singletons(n)))
}

/// True iff every generator permutes the parts of `blocks`.
pub fn is_block_system(g: &PermGroup, blocks: &SetPartition) -> bool {
    g.gens().iter().all(|gen| {
        blocks.parts().iter().all(|b| {
            let img: BTreeSet<usize> = b.iter().map(|&x| gen.apply(x)).collect();
            blocks.parts().contains(&img)
        })
    })
}

/// Image of `g` acting on the block indices, together with the kernel of that action.
pub fn action_on_blocks(g: &PermGroup, blocks: &SetPartition) -> Result<(PermGroup, PermGroup)> {
    if !is_block_system(g, blocks) {
        return Err(Error::BlocksNotInvariant);
    }
    let k = blocks.len();
    let induced = |h: &Perm| -> Perm {
        let images = (0..k)
            .map(|i| {
                let x = *blocks.parts()[i].iter().next().unwrap();
                blocks.part_of(h.apply(x))
            })
            .map(|i| i as u32)
            .collect();
        Perm(images)
    };
    let image_gens: Vec<Perm> = g.gens().iter().map(&induced).collect();
    let image = Group::enumerated(PermOps { degree: k }, image_gens, g.order().max(1))?;
    let kernel = g.subgroup_where(|h| induced(h).is_identity());
    Ok((image, kernel))
}

/// Least point of `set` fixed by the setwise stabilizer of `set`.
pub fn fixed_point_of_stabilizer(g: &PermGroup, set: &BTreeSet<usize>) -> Result<usize> {
    let stab = setwise_stabilizer(g, set);
    set.iter()
        .copied()
        .find(|&x| stab.gens().iter().all(|h| h.apply(x) == x))
        .ok_or_else(|| Error::NoFixedPoint(format!("setwise stabilizer of {set:?} moves every point")))
}

/// Subgroup of elements fixing every color: `colors[h(i)] == colors[i]`.
pub fn coloring_stabilizer(g: &PermGroup, colors: &[u32]) -> PermGroup {
    g.subgroup_where(|h| (0..colors.len()).all(|i| colors[h.apply(i)] == colors[i]))
}

/// Restriction of `g` to an invariant subset; returns the group on `0..|subset|`
/// with points relabeled in increasing order.
pub fn restrict_to(g: &PermGroup, subset: &[usize]) -> Result<PermGroup> {
    let n = g.ops().degree;
    let mut index = vec![usize::MAX; n];
    for (i, &x) in subset.iter().enumerate() {
        index[x] = i;
    }
    let restrict = |h: &Perm| -> Result<Perm> {
        let imgs: Vec<usize> = subset.iter().map(|&x| index[h.apply(x)]).collect();
        if imgs.contains(&usize::MAX) {
            return Err(Error::Precondition("subset is not invariant".into()));
        }
        Perm::new(imgs)
    };
    let gens = g.gens().iter().map(restrict).collect::<Result<Vec<_>>>()?;
    Group::enumerated(PermOps { degree: subset.len() }, gens, g.order().max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    fn group(n: usize, gens: Vec<Perm>) -> PermGroup {
        perm_group(n, gens).unwrap().enumerate(1000).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn enumerate_small_groups() {
        assert_eq!(group(4, vec![]).order(), 1);
        let s3 = group(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]);
        assert_eq!(s3.order(), 6);
        assert_eq!(group(3, vec![cyc(3, &[&[0, 1, 2]])]).order(), 3);
    }

    #[test]
    fn cap_is_a_hard_error() {
        let g = perm_group(5, vec![cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(g.enumerate(100).unwrap_err(), Error::TooLarge { cap: 100 });
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::new(vec![0, 0, 1]).is_err());
        assert!(perm_group(3, vec![Perm::identity(4)]).is_err());
    }

    #[test]
    fn setwise_stabilizers() {
        let s3 = group(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]);
        assert_eq!(setwise_stabilizer(&s3, &set(&[0])).order(), 2);
        assert_eq!(setwise_stabilizer(&s3, &set(&[0, 1, 2])).order(), 6);
        let c3 = group(3, vec![cyc(3, &[&[0, 1, 2]])]);
        assert_eq!(setwise_stabilizer(&c3, &set(&[0, 1])).order(), 1);
    }

    #[test]
    fn regular_partitions() {
        let s3 = group(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]);
        assert!(is_regular_partition(&s3, &SetPartition::singletons(3)).is_ok());
        let whole = SetPartition::from_vecs(3, vec![vec![0, 1, 2]]).unwrap();
        let w = is_regular_partition(&s3, &whole).unwrap_err();
        assert!(!w.is_identity());
        // AGL(1,5) as x -> ax + b, order 20, with Case 2 partition {0},{1},rest
        let t = Perm::new((0..5).map(|x| (x + 1) % 5).collect()).unwrap();
        let m = Perm::new((0..5).map(|x| (2 * x) % 5).collect()).unwrap();
        let agl = group(5, vec![t, m]);
        assert_eq!(agl.order(), 20);
        let p = SetPartition::from_vecs(5, vec![vec![0], vec![1], vec![2, 3, 4]]).unwrap();
        assert!(is_regular_partition(&agl, &p).is_ok());
    }

    #[test]
    fn blocks() {
        let c5 = group(5, vec![cyc(5, &[&[0, 1, 2, 3, 4]])]);
        assert_eq!(minimal_blocks(&c5).unwrap(), SetPartition::singletons(5));
        let d4 = group(4, vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[1, 3]])]);
        let b = minimal_blocks(&d4).unwrap();
        assert_eq!(b, SetPartition::from_vecs(4, vec![vec![0, 2], vec![1, 3]]).unwrap());
        let (img, ker) = action_on_blocks(&d4, &b).unwrap();
        assert_eq!((img.order(), ker.order()), (2, 4));
        let v4 = group(4, vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])]);
        assert!(minimal_blocks(&v4).unwrap().parts().iter().all(|p| p.len() == 2));
        let intrans = group(4, vec![cyc(4, &[&[0, 1]])]);
        assert_eq!(minimal_blocks(&intrans), Err(Error::NotTransitive));
    }

    #[test]
    fn block_action_edge_cases() {
        let triv = group(3, vec![]);
        let (img, ker) = action_on_blocks(&triv, &SetPartition::singletons(3)).unwrap();
        assert_eq!((img.order(), ker.order()), (1, 1));
        let s3 = group(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]);
        let (img, ker) = action_on_blocks(&s3, &SetPartition::singletons(3)).unwrap();
        assert_eq!((img.order(), ker.order()), (6, 1));
        let bad = SetPartition::from_vecs(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(action_on_blocks(&s3, &bad).unwrap_err(), Error::BlocksNotInvariant);
    }

    #[test]
    fn fixed_points() {
        let triv = group(3, vec![]);
        assert_eq!(fixed_point_of_stabilizer(&triv, &set(&[0, 1, 2])).unwrap(), 0);
        let g = group(3, vec![cyc(3, &[&[1, 2]])]);
        assert_eq!(fixed_point_of_stabilizer(&g, &set(&[0, 1, 2])).unwrap(), 0);
        let c3 = group(3, vec![cyc(3, &[&[0, 1, 2]])]);
        assert!(fixed_point_of_stabilizer(&c3, &set(&[0, 1, 2])).is_err());
        // translations of GF(2)^2 on points 0=(0,0),1=(1,0),2=(0,1),3=(1,1)
        let t1 = cyc(4, &[&[0, 1], &[2, 3]]);
        let t2 = cyc(4, &[&[0, 2], &[1, 3]]);
        let tr = group(4, vec![t1, t2]);
        assert_eq!(tr.order(), 4);
        assert!(fixed_point_of_stabilizer(&tr, &set(&[1, 2, 3])).is_ok());
    }
}
