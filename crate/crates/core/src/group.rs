//! Finite permutation groups stored as explicit element tables.
//!
//! Elements are numbered in breadth-first order from the identity, trying
//! generators in the order they were given, so index 0 is always the
//! identity and the numbering only depends on the generator list.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Multiplication tables are precomputed up to this order.
const TABLE_LIMIT: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GroupConfig {
    pub max_degree: usize,
    pub max_order: usize,
}

impl Default for GroupConfig {
    fn default() -> Self {
        GroupConfig {
            max_degree: 32,
            max_order: 5000,
        }
    }
}

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    elements: Vec<Permutation>,
    lookup: HashMap<Permutation, u32>,
    generators: Vec<usize>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
    table: Option<Vec<u32>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

/// A subgroup as a membership mask over the element indices of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    mask: ElementSet,
    order: usize,
}

impl Subgroup {
    pub(crate) fn from_mask(mask: ElementSet) -> Self {
        let order = mask.len();
        Subgroup { mask, order }
    }

    pub fn mask(&self) -> &ElementSet {
        &self.mask
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, element: usize) -> bool {
        self.mask.contains(element)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.mask.to_vec()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut mask = self.mask.clone();
        mask.intersect_with(&other.mask);
        Subgroup::from_mask(mask)
    }
}

impl FiniteGroup {
    /// Closes `generators` under composition.
    pub fn close(name: impl Into<String>, generators: &[Permutation], config: &GroupConfig) -> Result<FiniteGroup> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidParams("generator list is empty".into()))?;
        let degree = first.degree();
        if degree > config.max_degree {
            return Err(Error::DegreeCap {
                degree,
                cap: config.max_degree,
            });
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }

        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut lookup = HashMap::new();
        lookup.insert(identity, 0u32);
        let mut head = 0;
        while head < elements.len() {
            for g in generators {
                let next = elements[head].compose_unchecked(g);
                if !lookup.contains_key(&next) {
                    if elements.len() >= config.max_order {
                        return Err(Error::OrderCap { cap: config.max_order });
                    }
                    lookup.insert(next.clone(), elements.len() as u32);
                    elements.push(next);
                }
            }
            head += 1;
        }

        let generator_indices = generators.iter().map(|g| lookup[g] as usize).collect();
        Ok(Self::assemble(name.into(), degree, elements, lookup, generator_indices))
    }

    fn assemble(
        name: String,
        degree: usize,
        elements: Vec<Permutation>,
        lookup: HashMap<Permutation, u32>,
        generators: Vec<usize>,
    ) -> FiniteGroup {
        let n = elements.len();
        let inverses = elements.iter().map(|e| lookup[&e.inverse()]).collect();
        let orders = elements.iter().map(|e| e.order() as u32).collect();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(lookup[&a.compose_unchecked(b)]);
                }
            }
            t
        });
        FiniteGroup {
            name,
            degree,
            elements,
            lookup,
            generators,
            inverses,
            orders,
            table,
        }
    }

    pub fn trivial(degree: usize) -> FiniteGroup {
        let identity = Permutation::identity(degree.max(1));
        Self::close("1", &[identity], &GroupConfig::default()).expect("trivial group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.lookup.get(p).map(|&i| i as usize)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.lookup[&self.elements[a].compose_unchecked(&self.elements[b])] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a] as usize
    }

    /// `b^-1 a b`
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    /// `a^-1 b^-1 a b`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn label(&self, a: usize) -> String {
        self.elements[a].to_string()
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        self.orders.iter().any(|&o| o as usize == n)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(ElementSet::full(self.order()))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_mask(ElementSet::from_indices(self.order(), [0]))
    }

    /// Smallest subgroup containing `seed`, without memoization.
    pub fn closure(&self, seed: &[usize]) -> Subgroup {
        let mut mask = ElementSet::from_indices(self.order(), [0]);
        let mut list = vec![0usize];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            for &s in seed {
                let y = self.mul(x, s);
                if mask.insert(y) {
                    list.push(y);
                }
            }
            head += 1;
        }
        Subgroup::from_mask(mask)
    }

    /// Smallest subgroup containing `h` and `extra`.
    pub fn join_elements(&self, h: &Subgroup, extra: &[usize]) -> Subgroup {
        if extra.iter().all(|&g| h.contains(g)) {
            return h.clone();
        }
        let mut gens = self.subgroup_generators(h);
        gens.extend_from_slice(extra);
        self.closure(&gens)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let gens = self.subgroup_generators(b);
        self.join_elements(a, &gens)
    }

    /// Greedy generating list for `h`, in ascending index order.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for x in h.mask.iter() {
            if current.order() == h.order() {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = self.closure(&gens);
            }
        }
        gens
    }

    /// Checks that `mask` is a subgroup (contains the identity, closed under products).
    pub fn subgroup_from_mask(&self, mask: ElementSet) -> Result<Subgroup> {
        if !mask.contains(0) {
            return Err(Error::InvalidParams("mask does not contain the identity".into()));
        }
        let elems = mask.to_vec();
        for &a in &elems {
            for &b in &elems {
                if !mask.contains(self.mul(a, b)) {
                    return Err(Error::InvalidParams("mask is not closed under products".into()));
                }
            }
        }
        Ok(Subgroup::from_mask(mask))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let hg = self.subgroup_generators(h);
        self.generators
            .iter()
            .all(|&g| hg.iter().all(|&x| h.contains(self.conjugate(x, g))))
    }

    /// Smallest normal subgroup containing `seed`.
    pub fn normal_closure(&self, seed: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = seed.to_vec();
        let mut h = self.closure(&gens);
        loop {
            let mut grew = false;
            for x in h.elements() {
                for &g in &self.generators {
                    let c = self.conjugate(x, g);
                    if !h.contains(c) {
                        gens.push(c);
                        h = self.closure(&gens);
                        grew = true;
                    }
                }
            }
            if !grew {
                return h;
            }
        }
    }

    /// `[h, h]`.
    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let gens = self.subgroup_generators(h);
        let mut seed = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                seed.push(self.commutator(a, b));
            }
        }
        // normal closure inside h
        let mut k = self.closure(&seed);
        loop {
            let mut grew = false;
            for x in k.elements() {
                for &g in &gens {
                    let c = self.conjugate(x, g);
                    if !k.contains(c) {
                        seed.push(c);
                        k = self.closure(&seed);
                        grew = true;
                    }
                }
            }
            if !grew {
                return k;
            }
        }
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.commutator_subgroup(&self.whole())
    }

    /// `G = G^(0) > G^(1) > ...`, ending at the first repeated term.
    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole()];
        loop {
            let next = self.commutator_subgroup(series.last().expect("nonempty"));
            if next.order() == series.last().expect("nonempty").order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().expect("nonempty").order() == 1
    }

    pub fn center(&self) -> Subgroup {
        let mask = ElementSet::from_indices(
            self.order(),
            (0..self.order()).filter(|&x| self.generators.iter().all(|&g| self.mul(x, g) == self.mul(g, x))),
        );
        Subgroup::from_mask(mask)
    }

    /// `1 = Z_0 <= Z_1 <= ...` until it stabilizes.
    pub fn upper_central_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.trivial_subgroup()];
        loop {
            let z = series.last().expect("nonempty");
            let mask = ElementSet::from_indices(
                self.order(),
                (0..self.order()).filter(|&x| self.generators.iter().all(|&g| z.contains(self.commutator(x, g)))),
            );
            if mask.len() == z.order() {
                return series;
            }
            series.push(Subgroup::from_mask(mask));
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.upper_central_series().last().expect("nonempty").order() == self.order()
    }

    /// Largest normal `p`-subgroup.
    pub fn p_core(&self, p: usize) -> Subgroup {
        let mut core = self.trivial_subgroup();
        for x in 0..self.order() {
            if core.contains(x) || !is_power_of(self.element_order(x), p) {
                continue;
            }
            let n = self.normal_closure(&[x]);
            if is_power_of(n.order(), p) {
                core = self.join(&core, &n);
            }
        }
        core
    }

    /// Product of the `p`-cores over the primes dividing `|G|`.
    pub fn fitting_subgroup(&self) -> Subgroup {
        prime_factors(self.order())
            .into_iter()
            .fold(self.trivial_subgroup(), |acc, p| {
                let core = self.p_core(p);
                self.join(&acc, &core)
            })
    }

    pub fn is_abelian_subgroup(&self, h: &Subgroup) -> bool {
        let gens = self.subgroup_generators(h);
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

pub fn is_power_of(n: usize, p: usize) -> bool {
    let mut n = n;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Distinct prime divisors in ascending order.
pub fn prime_factors(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns the prime `p` if `n` is a positive power of `p`.
pub fn prime_power_base(n: usize) -> Option<usize> {
    match prime_factors(n).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str, degree: usize, gens: &[&str]) -> FiniteGroup {
        let gens: Vec<_> = gens
            .iter()
            .map(|g| Permutation::parse_cycles(g, degree).unwrap())
            .collect();
        FiniteGroup::close(name, &gens, &GroupConfig::default()).unwrap()
    }

    fn s3() -> FiniteGroup {
        group("S3", 3, &["(1,2)", "(1,2,3)"])
    }

    fn f20() -> FiniteGroup {
        group("F20", 5, &["(2,3,4,5)", "(1,2,3,5,4)"])
    }

    fn q8() -> FiniteGroup {
        group("Q8", 8, &["(1,2,5,6)(3,8,7,4)", "(1,3,5,7)(2,4,6,8)"])
    }

    #[test]
    fn closure_orders() {
        assert_eq!(s3().order(), 6);
        assert_eq!(f20().order(), 20);
        assert_eq!(q8().order(), 8);
        assert_eq!(group("1", 3, &["()"]).order(), 1);
    }

    #[test]
    fn identity_first_and_bfs_order() {
        let g = s3();
        assert!(g.element(0).is_identity());
        // identity, then its images under the generators in input order
        assert_eq!(g.element(1), &Permutation::parse_cycles("(1,2)", 3).unwrap());
        assert_eq!(g.element(2), &Permutation::parse_cycles("(1,2,3)", 3).unwrap());
        assert_eq!(g.generators(), &[1, 2]);
    }

    #[test]
    fn order_cap() {
        let cfg = GroupConfig {
            max_order: 10,
            ..GroupConfig::default()
        };
        let gens = [
            Permutation::parse_cycles("(1,2)", 4).unwrap(),
            Permutation::parse_cycles("(1,2,3,4)", 4).unwrap(),
        ];
        assert_eq!(
            FiniteGroup::close("S4", &gens, &cfg).unwrap_err(),
            Error::OrderCap { cap: 10 }
        );
    }

    #[test]
    fn degree_cap_and_mismatch() {
        let big = Permutation::identity(40);
        assert!(matches!(
            FiniteGroup::close("x", &[big], &GroupConfig::default()),
            Err(Error::DegreeCap { .. })
        ));
        let gens = [Permutation::identity(3), Permutation::identity(4)];
        assert!(matches!(
            FiniteGroup::close("x", &gens, &GroupConfig::default()),
            Err(Error::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn table_is_closed_with_inverses() {
        for g in [s3(), f20(), q8()] {
            for a in 0..g.order() {
                assert_eq!(g.mul(a, g.inv(a)), 0);
                assert_eq!(g.mul(0, a), a);
            }
        }
    }

    #[test]
    fn generated_subgroups() {
        let g = s3();
        assert_eq!(g.closure(&[]).order(), 1);
        assert_eq!(g.closure(&[1, 2]).order(), 6);
        let f = f20();
        let x = f.generators()[0];
        let x2 = f.mul(x, x);
        assert_eq!(f.closure(&[x2, x]).order(), 4);
    }

    #[test]
    fn s3_structure() {
        let g = s3();
        let d = g.derived_subgroup();
        assert_eq!(d.order(), 3);
        assert!(g.is_normal(&d));
        assert!(g.is_solvable());
        assert!(!g.is_nilpotent());
        assert_eq!(g.center().order(), 1);
        assert_eq!(g.fitting_subgroup().order(), 3);
        assert!(!g.is_normal(&g.closure(&[1])));
    }

    #[test]
    fn a5_not_solvable() {
        let a5 = group("A5", 5, &["(1,2,3)", "(1,2,3,4,5)"]);
        assert_eq!(a5.order(), 60);
        assert!(!a5.is_solvable());
        assert_eq!(a5.derived_subgroup().order(), 60);
        assert_eq!(a5.fitting_subgroup().order(), 1);
    }

    #[test]
    fn f20_fitting_is_order_five() {
        let f = f20();
        let fit = f.fitting_subgroup();
        assert_eq!(fit.order(), 5);
        assert!(f.is_normal(&fit));
    }

    #[test]
    fn q8_center_and_nilpotency() {
        let q = q8();
        assert_eq!(q.center().order(), 2);
        assert!(q.is_nilpotent());
        assert_eq!(q.fitting_subgroup().order(), 8);
        assert_eq!(q.derived_subgroup().order(), 2);
    }

    #[test]
    fn subgroup_mask_validation() {
        let g = s3();
        assert!(g.subgroup_from_mask(ElementSet::from_indices(6, [0, 1])).is_ok());
        assert!(g.subgroup_from_mask(ElementSet::from_indices(6, [0, 1, 2])).is_err());
        assert!(g.subgroup_from_mask(ElementSet::from_indices(6, [1])).is_err());
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(prime_factors(60), vec![2, 3, 5]);
        assert_eq!(prime_power_base(81), Some(3));
        assert_eq!(prime_power_base(12), None);
        assert_eq!(prime_power_base(1), None);
        assert!(is_prime(13) && !is_prime(1) && !is_prime(9));
    }
}
