//! Brute-force finite group machinery shared by permutation and matrix groups.
//!
//! Groups are given by generators and enumerated by breadth-first closure under a
//! hard size cap. Everything downstream (subgroups, cores, Sylow subgroups, the
//! Fitting subgroup) works on the explicit element list.

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;

use crate::algebra::field::prime_factors;
use crate::error::{Error, Result};

/// Default enumeration cap.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Reads the cap from `GRPBASE_CAP`, falling back to [`DEFAULT_CAP`].
pub fn cap_from_env() -> usize {
    std::env::var("GRPBASE_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// Multiplication context for one kind of group element.
///
/// Products compose right-to-left: `mul(a, b)` acts as `b` first, then `a`.
pub trait GroupOps: Clone {
    type Elem: Clone + Eq + Hash + Ord + std::fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn conj(&self, a: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        // g^-1 a g
        self.mul(&self.inv(g), &self.mul(a, g))
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        // a^-1 b^-1 a b
        self.mul(&self.mul(&self.inv(a), &self.inv(b)), &self.mul(a, b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut r = self.identity();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    fn elem_order(&self, a: &Self::Elem) -> u64 {
        let mut k = 1;
        let mut cur = a.clone();
        while !self.is_identity(&cur) {
            cur = self.mul(&cur, a);
            k += 1;
        }
        k
    }
}

/// Breadth-first closure of `gens`; the result is sorted.
pub fn closure<O: GroupOps>(ops: &O, gens: &[O::Elem], cap: usize) -> Result<Vec<O::Elem>> {
    let id = ops.identity();
    let mut seen: HashSet<O::Elem> = HashSet::new();
    seen.insert(id.clone());
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    let gens: Vec<_> = gens.iter().filter(|g| !ops.is_identity(g)).cloned().collect();
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let h = ops.mul(g, &e);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(Error::TooLarge { cap });
                }
                seen.insert(h.clone());
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    order.sort();
    Ok(order)
}

/// A finite group given by generators, optionally with its full element list.
#[derive(Clone, Debug)]
pub struct Group<O: GroupOps> {
    ops: O,
    gens: Vec<O::Elem>,
    elements: Option<Vec<O::Elem>>,
    lookup: Option<HashSet<O::Elem>>,
}

impl<O: GroupOps> Group<O> {
    pub fn new(ops: O, gens: Vec<O::Elem>) -> Self {
        Group { ops, gens, elements: None, lookup: None }
    }

    /// Builds an already-enumerated group from a sorted, closed element list.
    fn from_elements(ops: O, gens: Vec<O::Elem>, mut elements: Vec<O::Elem>) -> Self {
        elements.sort();
        elements.dedup();
        let lookup = elements.iter().cloned().collect();
        Group { ops, gens, elements: Some(elements), lookup: Some(lookup) }
    }

    pub fn enumerate(&self, cap: usize) -> Result<Self> {
        if self.elements.is_some() {
            return Ok(self.clone());
        }
        let elements = closure(&self.ops, &self.gens, cap)?;
        Ok(Self::from_elements(self.ops.clone(), self.gens.clone(), elements))
    }

    pub fn enumerated(ops: O, gens: Vec<O::Elem>, cap: usize) -> Result<Self> {
        Group::new(ops, gens).enumerate(cap)
    }

    pub fn ops(&self) -> &O {
        &self.ops
    }

    pub fn gens(&self) -> &[O::Elem] {
        &self.gens
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    /// The sorted element list. Panics if the group was not enumerated.
    pub fn elements(&self) -> &[O::Elem] {
        self.elements.as_deref().expect("group must be enumerated first")
    }

    pub fn order(&self) -> usize {
        self.elements().len()
    }

    pub fn contains(&self, e: &O::Elem) -> bool {
        self.lookup.as_ref().expect("group must be enumerated first").contains(e)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Subgroup consisting of the elements satisfying `pred` (which must define a subgroup).
    pub fn subgroup_where(&self, pred: impl Fn(&O::Elem) -> bool) -> Self {
        let elems: Vec<_> = self.elements().iter().filter(|e| pred(e)).cloned().collect();
        let gens = small_generating_set(&self.ops, &elems);
        Self::from_elements(self.ops.clone(), gens, elems)
    }

    /// Subgroup generated by `gens` inside this group (enumerated).
    pub fn subgroup(&self, gens: Vec<O::Elem>) -> Self {
        let cap = self.order();
        let elems = closure(&self.ops, &gens, cap + 1).expect("subgroup of an enumerated group");
        Self::from_elements(self.ops.clone(), gens, elems)
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.elements().iter().all(|e| other.contains(e))
    }

    /// True iff `sub` is normalized by every generator of `self`.
    pub fn normalizes(&self, sub: &Self) -> bool {
        self.gens.iter().all(|g| sub.gens.iter().all(|h| sub.contains(&self.ops.conj(h, g))))
    }

    pub fn normal_closure(&self, seeds: &[O::Elem]) -> Self {
        let mut gens: Vec<O::Elem> = seeds.iter().filter(|s| !self.ops.is_identity(s)).cloned().collect();
        let mut sub = self.subgroup(gens.clone());
        loop {
            let mut added = false;
            'outer: for h in gens.clone() {
                for g in &self.gens {
                    let c = self.ops.conj(&h, g);
                    if !sub.contains(&c) {
                        gens.push(c);
                        sub = self.subgroup(gens.clone());
                        added = true;
                        break 'outer;
                    }
                }
            }
            if !added {
                return sub;
            }
        }
    }

    pub fn derived_subgroup(&self) -> Self {
        let mut comms = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                comms.push(self.ops.commutator(a, b));
            }
        }
        self.normal_closure(&comms)
    }

    /// Derived series G = G^(0) > G^(1) > ... ending at the first repeated term.
    pub fn derived_series(&self) -> Vec<Self> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = last.derived_subgroup();
            if next.order() == last.order() {
                return series;
            }
            let trivial = next.is_trivial();
            series.push(next);
            if trivial {
                return series;
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_trivial()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gens;
        g.iter().enumerate().all(|(i, a)| {
            g[i + 1..].iter().all(|b| self.ops.mul(a, b) == self.ops.mul(b, a))
        })
    }

    pub fn centralizer_of(&self, xs: &[O::Elem]) -> Self {
        self.subgroup_where(|g| xs.iter().all(|x| self.ops.mul(g, x) == self.ops.mul(x, g)))
    }

    /// Orbits of the conjugation action of `self` on the elements of `sub`
    /// (sub must be normal); each class is sorted, classes ordered by least element.
    pub fn classes_in(&self, sub: &Self) -> Vec<Vec<O::Elem>> {
        let mut seen: HashSet<O::Elem> = HashSet::new();
        let mut classes = Vec::new();
        for e in sub.elements() {
            if seen.contains(e) {
                continue;
            }
            let mut class = vec![e.clone()];
            seen.insert(e.clone());
            let mut i = 0;
            while i < class.len() {
                let c = class[i].clone();
                for g in &self.gens {
                    let d = self.ops.conj(&c, g);
                    if seen.insert(d.clone()) {
                        class.push(d);
                    }
                }
                i += 1;
            }
            class.sort();
            classes.push(class);
        }
        classes
    }

    /// A Sylow r-subgroup, grown greedily through elements of r-power order that
    /// normalize the current r-subgroup.
    pub fn sylow(&self, r: u64) -> Self {
        let is_r_power = |mut n: u64| {
            while n % r == 0 {
                n /= r;
            }
            n == 1
        };
        let mut target = 1usize;
        let mut n = self.order();
        while n % r as usize == 0 {
            n /= r as usize;
            target *= r as usize;
        }
        if target == self.order() {
            return self.clone();
        }
        let mut p = self.subgroup(Vec::new());
        while p.order() < target {
            let next = self.elements().iter().find(|g| {
                !p.contains(g)
                    && is_r_power(self.ops.elem_order(g))
                    && p.gens.iter().all(|h| p.contains(&self.ops.conj(h, g)))
            });
            match next {
                Some(g) => {
                    let mut gens = p.gens.clone();
                    gens.push(g.clone());
                    p = self.subgroup(gens);
                }
                None => break,
            }
        }
        p
    }

    /// Largest subgroup of `sub` normal in `self`.
    pub fn core(&self, sub: &Self) -> Self {
        let mut current: Vec<O::Elem> = sub.elements().to_vec();
        loop {
            let set: HashSet<&O::Elem> = current.iter().collect();
            let next: Vec<O::Elem> = current
                .iter()
                .filter(|x| self.gens.iter().all(|g| set.contains(&self.ops.conj(x, g))))
                .cloned()
                .collect();
            if next.len() == current.len() {
                break;
            }
            current = next;
        }
        let gens = small_generating_set(&self.ops, &current);
        Self::from_elements(self.ops.clone(), gens, current)
    }

    /// O_r(G), the largest normal r-subgroup.
    pub fn r_core(&self, r: u64) -> Self {
        let p = self.sylow(r);
        self.core(&p)
    }

    /// Fitting subgroup: product of the r-cores over primes r dividing |G|.
    pub fn fitting_subgroup(&self) -> Self {
        let mut elems = vec![self.ops.identity()];
        for r in prime_factors(self.order() as u64) {
            let core = self.r_core(r);
            let mut next = Vec::with_capacity(elems.len() * core.order());
            for a in &elems {
                for b in core.elements() {
                    next.push(self.ops.mul(a, b));
                }
            }
            elems = next;
        }
        let gens = small_generating_set(&self.ops, &elems);
        Self::from_elements(self.ops.clone(), gens, elems)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.fitting_subgroup().order() == self.order()
    }
}

/// Greedy generating set: walk the elements, keeping those outside the span so far.
pub fn small_generating_set<O: GroupOps>(ops: &O, elems: &[O::Elem]) -> Vec<O::Elem> {
    let mut gens: Vec<O::Elem> = Vec::new();
    let mut span: HashSet<O::Elem> = HashSet::from([ops.identity()]);
    for e in elems {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let all = closure(ops, &gens, elems.len() + 1).unwrap_or_default();
        span = all.into_iter().collect();
        if span.len() == elems.len() {
            break;
        }
    }
    gens
}
