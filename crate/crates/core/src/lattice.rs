//! The full subgroup lattice and its Möbius function.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::generation::Generation;
use crate::group::{is_power_of, FiniteGroup, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatticeConfig {
    pub max_order: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { max_order: 400 }
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group_order: usize,
    nodes: Vec<Subgroup>,
    /// Strict supergroups of each node, as a set of node indices.
    above: Vec<ElementSet>,
    maximal: Vec<bool>,
    normal: Vec<bool>,
    moebius: Option<Vec<i64>>,
}

/// Coefficients `a_n(G)`, keyed by index; zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerianSequence {
    pub group_order: usize,
    pub a: BTreeMap<usize, i64>,
}

impl EulerianSequence {
    pub fn new(group_order: usize, a: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let a = a.into_iter().filter(|&(_, v)| v != 0).collect();
        EulerianSequence { group_order, a }
    }

    pub fn get(&self, n: usize) -> i64 {
        self.a.get(&n).copied().unwrap_or(0)
    }

    /// The trivial group's sequence.
    pub fn trivial() -> Self {
        Self::new(1, [(1, 1)])
    }
}

/// Enumerates every subgroup of `g` by cyclic extension.
pub fn all_subgroups(g: &FiniteGroup, config: &LatticeConfig) -> Result<SubgroupLattice> {
    if g.order() > config.max_order {
        return Err(Error::OrderCap { cap: config.max_order });
    }
    let mut gen = Generation::new(g);

    // one generator per cyclic subgroup
    let mut seen = ElementSet::empty(g.order());
    let mut cyclic_reps = Vec::new();
    let mut frontier = Vec::new();
    for x in 0..g.order() {
        let id = gen.join(Generation::TRIVIAL, x);
        let mask = gen.subgroup(id).mask();
        // x is the representative if it is the least generator of <x>
        if !seen.contains(x) {
            cyclic_reps.push(x);
            frontier.push(id);
            let order = gen.subgroup(id).order();
            for y in mask.iter() {
                if g.element_order(y) == order {
                    seen.insert(y);
                }
            }
        }
    }

    let mut visited = std::collections::HashSet::new();
    visited.extend(frontier.iter().copied());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &h in &frontier {
            for &x in &cyclic_reps {
                let k = gen.join(h, x);
                if visited.insert(k) {
                    next.push(k);
                }
            }
        }
        frontier = next;
    }

    let mut nodes: Vec<Subgroup> = (0..gen.interned() as u32).map(|id| gen.subgroup(id).clone()).collect();
    nodes.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.mask().cmp(b.mask())));
    Ok(SubgroupLattice::from_nodes(g, nodes))
}

impl SubgroupLattice {
    fn from_nodes(g: &FiniteGroup, nodes: Vec<Subgroup>) -> Self {
        let k = nodes.len();
        let mut above = vec![ElementSet::empty(k); k];
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (&nodes[i], &nodes[j]);
                if b.order() > a.order() && b.order() % a.order() == 0 && a.is_subgroup_of(b) {
                    above[i].insert(j);
                }
            }
        }
        let top = k - 1;
        let maximal = (0..k)
            .map(|i| i != top && above[i].len() == 1 && above[i].contains(top))
            .collect();
        let normal = nodes.iter().map(|h| g.is_normal(h)).collect();
        SubgroupLattice {
            group_order: g.order(),
            nodes,
            above,
            maximal,
            normal,
            moebius: None,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn nodes(&self) -> &[Subgroup] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Subgroup {
        &self.nodes[i]
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn index_of(&self, i: usize) -> usize {
        self.group_order / self.nodes[i].order()
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.maximal[i]
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    /// True if node `i` is strictly contained in node `j`.
    pub fn is_below(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    pub fn find(&self, h: &Subgroup) -> Option<usize> {
        self.nodes.iter().position(|n| n == h)
    }

    pub fn maximal_subgroups(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.maximal[i]).collect()
    }

    pub fn normal_subgroups(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.normal[i]).collect()
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.above[i].iter() {
                if !self.above[i].iter().any(|m| self.above[m].contains(j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Intersection of the maximal subgroups; the whole group if there are none.
    pub fn frattini(&self) -> Subgroup {
        let mut mask = ElementSet::full(self.group_order);
        for i in self.maximal_subgroups() {
            mask.intersect_with(self.nodes[i].mask());
        }
        Subgroup::from_mask(mask)
    }

    /// Fills `mu(H)` top-down: `mu(G) = 1`, `mu(H) = -sum_{H < K} mu(K)`.
    pub fn moebius_all(&mut self) -> &[i64] {
        if self.moebius.is_none() {
            let k = self.len();
            let mut mu = vec![0i64; k];
            mu[k - 1] = 1;
            for i in (0..k - 1).rev() {
                mu[i] = -self.above[i].iter().map(|j| mu[j]).sum::<i64>();
            }
            self.moebius = Some(mu);
        }
        self.moebius.as_deref().expect("filled")
    }

    pub fn moebius(&self) -> Option<&[i64]> {
        self.moebius.as_deref()
    }

    /// `a_n(G) = sum of mu(H) over subgroups of index n`.
    pub fn a_sequence(&mut self) -> EulerianSequence {
        let mu = self.moebius_all().to_vec();
        let mut a: BTreeMap<usize, i64> = BTreeMap::new();
        for (i, &m) in mu.iter().enumerate() {
            *a.entry(self.index_of(i)).or_default() += m;
        }
        EulerianSequence::new(self.group_order, a)
    }

    /// True if some chain of normal subgroups from 1 to G has every factor
    /// of `p`-power order or of order prime to `p`.
    pub fn is_p_solvable(&self, p: usize) -> bool {
        let normals = self.normal_subgroups();
        let mut reach = vec![false; self.len()];
        reach[0] = true;
        for &j in &normals {
            if j == 0 {
                continue;
            }
            reach[j] = normals.iter().any(|&i| {
                reach[i] && self.is_below(i, j) && {
                    let f = self.nodes[j].order() / self.nodes[i].order();
                    is_power_of(f, p) || !f.is_multiple_of(p)
                }
            });
        }
        reach[self.top()]
    }

    /// Plain-text export: one `node` line per subgroup, one `cover` line per Hasse edge.
    pub fn export_text(&mut self, g: &FiniteGroup) -> String {
        self.moebius_all();
        let mu = self.moebius.clone().expect("filled");
        let mut out = String::new();
        let _ = writeln!(
            out,
            "lattice {} order {} subgroups {}",
            g.name(),
            self.group_order,
            self.len()
        );
        for (i, h) in self.nodes.iter().enumerate() {
            let gens: Vec<String> = g.subgroup_generators(h).into_iter().map(|e| g.label(e)).collect();
            let _ = writeln!(
                out,
                "node {i} order {} index {} mu {} maximal {} normal {} gens [{}]",
                h.order(),
                self.index_of(i),
                mu[i],
                self.maximal[i] as u8,
                self.normal[i] as u8,
                gens.join(" "),
            );
        }
        for (i, j) in self.covers() {
            let _ = writeln!(out, "cover {i} {j}");
        }
        out
    }
}

/// `Phi(G)`, via the subgroup lattice.
pub fn frattini(g: &FiniteGroup, config: &LatticeConfig) -> Result<Subgroup> {
    Ok(all_subgroups(g, config)?.frattini())
}
