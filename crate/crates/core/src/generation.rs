//! Memoized subgroup generation.
//!
//! Every subgroup reached is interned once and joins `<H, g>` are cached in a
//! dense table, so a generation query on a seed of length `k` costs at most
//! `k` table lookups once the table is warm.

use std::collections::HashMap;

use crate::bitset::ElementSet;
use crate::group::{FiniteGroup, Subgroup};

pub type SubgroupId = u32;

const UNSET: u32 = u32::MAX;

#[derive(Clone)]
pub struct Generation<'g> {
    group: &'g FiniteGroup,
    subgroups: Vec<Subgroup>,
    gens: Vec<Vec<usize>>,
    ids: HashMap<ElementSet, SubgroupId>,
    joins: Vec<Vec<u32>>,
    seeds: HashMap<Vec<usize>, SubgroupId>,
    whole: Option<SubgroupId>,
    closures: u64,
}

impl<'g> Generation<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        let mut g = Generation {
            group,
            subgroups: Vec::new(),
            gens: Vec::new(),
            ids: HashMap::new(),
            joins: Vec::new(),
            seeds: HashMap::new(),
            whole: None,
            closures: 0,
        };
        g.intern(group.trivial_subgroup(), Vec::new());
        g
    }

    /// Seeds the cache with every cyclic subgroup.
    pub fn with_cyclic(group: &'g FiniteGroup) -> Self {
        let mut g = Self::new(group);
        for x in 0..group.order() {
            g.join(Self::TRIVIAL, x);
        }
        g
    }

    pub const TRIVIAL: SubgroupId = 0;

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    fn intern(&mut self, h: Subgroup, gens: Vec<usize>) -> SubgroupId {
        if let Some(&id) = self.ids.get(h.mask()) {
            return id;
        }
        let id = self.subgroups.len() as SubgroupId;
        if h.order() == self.group.order() {
            self.whole = Some(id);
        }
        self.ids.insert(h.mask().clone(), id);
        self.subgroups.push(h);
        self.gens.push(gens);
        self.joins.push(vec![UNSET; self.group.order()]);
        id
    }

    /// `<H, g>`.
    pub fn join(&mut self, h: SubgroupId, g: usize) -> SubgroupId {
        let cached = self.joins[h as usize][g];
        if cached != UNSET {
            return cached;
        }
        let result = if self.subgroups[h as usize].contains(g) {
            h
        } else {
            let mut gens = self.gens[h as usize].clone();
            gens.push(g);
            self.closures += 1;
            let k = self.group.closure(&gens);
            self.intern(k, gens)
        };
        self.joins[h as usize][g] = result;
        result
    }

    /// `<seed>` as an interned id.
    pub fn generate(&mut self, seed: &[usize]) -> SubgroupId {
        seed.iter().fold(Self::TRIVIAL, |h, &g| self.join(h, g))
    }

    pub fn generates(&mut self, seed: &[usize]) -> bool {
        let id = self.generate(seed);
        self.is_whole(id)
    }

    pub fn is_whole(&self, id: SubgroupId) -> bool {
        self.whole == Some(id)
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id as usize]
    }

    /// `<seed>`, memoized under the sorted seed.
    pub fn subgroup_generated(&mut self, seed: &[usize]) -> Subgroup {
        let mut key = seed.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&id) = self.seeds.get(&key) {
            return self.subgroups[id as usize].clone();
        }
        let id = self.generate(&key);
        self.seeds.insert(key, id);
        self.subgroups[id as usize].clone()
    }

    pub fn interned(&self) -> usize {
        self.subgroups.len()
    }

    /// Number of closure computations performed (cache misses).
    pub fn closures(&self) -> u64 {
        self.closures
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupConfig;
    use crate::perm::Permutation;

    fn s4() -> FiniteGroup {
        let gens = [
            Permutation::parse_cycles("(1,2)", 4).unwrap(),
            Permutation::parse_cycles("(1,2,3,4)", 4).unwrap(),
        ];
        FiniteGroup::close("S4", &gens, &GroupConfig::default()).unwrap()
    }

    #[test]
    fn agrees_with_plain_closure() {
        let g = s4();
        let mut gen = Generation::new(&g);
        for a in 0..g.order() {
            for b in 0..g.order() {
                let id = gen.generate(&[a, b]);
                assert_eq!(gen.subgroup(id), &g.closure(&[a, b]));
            }
        }
        // 30 subgroups of S4, all reachable by 2-element seeds
        assert_eq!(gen.interned(), 30);
    }

    #[test]
    fn memoized_seed_is_order_insensitive() {
        let g = s4();
        let mut gen = Generation::new(&g);
        let a = gen.subgroup_generated(&[3, 1]);
        let before = gen.closures();
        let b = gen.subgroup_generated(&[1, 3, 3]);
        assert_eq!(a, b);
        assert_eq!(gen.closures(), before);
        assert_eq!(gen.subgroup_generated(&[]).order(), 1);
    }

    #[test]
    fn whole_group_detection() {
        let g = s4();
        let mut gen = Generation::with_cyclic(&g);
        assert!(gen.generates(g.generators()));
        assert!(!gen.generates(&[g.generators()[0]]));
    }
}
