//! Generating hypergraphs.
//!
//! `gamma(G)` has the generating sets of size `d(G)` as hyperedges and
//! `delta(G)` has all minimal generating sets. Both are enumerated by a
//! depth-first search over *independent* sets (no element lies in the
//! subgroup generated by the others), which is closed under taking subsets,
//! so every minimal generating set is reached along a chain of independent
//! prefixes. Hyperedges are listed by size, then in colexicographic order.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::generation::{Generation, SubgroupId};
use crate::group::FiniteGroup;
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct HypergraphConfig {
    /// Largest group order for which hyperedges are enumerated.
    pub max_order: usize,
}

impl Default for HypergraphConfig {
    fn default() -> Self {
        HypergraphConfig { max_order: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypergraphKind {
    Gamma,
    Delta,
}

impl std::fmt::Display for HypergraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HypergraphKind::Gamma => "gamma",
            HypergraphKind::Delta => "delta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenHypergraph {
    pub kind: HypergraphKind,
    /// `d(G)`.
    pub rank: usize,
    pub vertex_count: usize,
    pub hyperedges: Vec<Vec<usize>>,
    pub isolated: Vec<usize>,
    /// Set for cyclic groups, whose hyperedges here are singletons.
    pub cyclic_excluded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    pub components: usize,
    /// No hyperedges at all, so connectivity holds vacuously.
    pub vacuous: bool,
}

/// Size first, then colexicographic.
pub fn canonical_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// `d(G)`: the least `k` such that some `k`-subset generates.
pub fn rank(g: &FiniteGroup) -> usize {
    let mut gen = Generation::with_cyclic(g);
    if gen.generates(&[]) {
        return 0;
    }
    let bound = usize::BITS as usize - 1 - g.order().leading_zeros() as usize;
    for k in 1..=bound.max(1) {
        if exists_generating(&mut gen, k) {
            return k;
        }
    }
    unreachable!("a generating set of size at most log2 |G| always exists")
}

/// True if some `k`-set generates, assuming no smaller set does.
fn exists_generating(gen: &mut Generation, k: usize) -> bool {
    fn go(gen: &mut Generation, from: usize, left: usize, current: SubgroupId) -> bool {
        let n = gen.group().order();
        for x in from..n {
            if n - x < left {
                break;
            }
            let next = gen.join(current, x);
            if next == current {
                continue;
            }
            if left == 1 {
                if gen.is_whole(next) {
                    return true;
                }
            } else if !gen.is_whole(next) && go(gen, x + 1, left - 1, next) {
                return true;
            }
        }
        false
    }
    go(gen, 1, k, Generation::TRIVIAL)
}

struct Search<'a, 'g> {
    gen: &'a mut Generation<'g>,
    budget: &'a Budget,
    /// Stop at this size; for gamma this is `d(G)`.
    max_size: usize,
    /// Require every element to be irredundant (delta) or only the new one (gamma).
    full_independence: bool,
    found: Vec<Vec<usize>>,
    steps: u64,
}

impl Search<'_, '_> {
    fn extend(&mut self, set: &mut Vec<usize>, span: SubgroupId, without: &[SubgroupId]) -> Result<()> {
        let n = self.gen.group().order();
        let last = *set.last().expect("nonempty");
        for x in last + 1..n {
            self.steps += 1;
            if self.steps.is_multiple_of(4096) {
                self.budget.check("generating set enumeration")?;
            }
            let next_span = self.gen.join(span, x);
            if next_span == span {
                continue;
            }
            let mut next_without = Vec::with_capacity(without.len() + 1);
            let mut independent = true;
            for (k, &w) in without.iter().enumerate() {
                let j = self.gen.join(w, x);
                if self.full_independence && self.gen.subgroup(j).contains(set[k]) {
                    independent = false;
                    break;
                }
                next_without.push(j);
            }
            if !independent {
                continue;
            }
            next_without.push(span);
            set.push(x);
            if self.gen.is_whole(next_span) {
                if !self.full_independence || set.len() <= self.max_size {
                    self.found.push(set.clone());
                }
            } else if set.len() < self.max_size {
                self.extend(set, next_span, &next_without)?;
            }
            set.pop();
        }
        Ok(())
    }
}

fn enumerate(g: &FiniteGroup, max_size: usize, full_independence: bool, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    let base = Generation::with_cyclic(g);
    if g.order() == 1 {
        return Ok(vec![Vec::new()]);
    }
    let per_first: Vec<Result<Vec<Vec<usize>>>> = (1..g.order())
        .into_par_iter()
        .map_init(
            || base.clone(),
            |gen, first| {
                let span = gen.join(Generation::TRIVIAL, first);
                if gen.is_whole(span) {
                    return Ok(vec![vec![first]]);
                }
                if max_size < 2 {
                    return Ok(Vec::new());
                }
                let mut search = Search {
                    gen,
                    budget,
                    max_size,
                    full_independence,
                    found: Vec::new(),
                    steps: 0,
                };
                let mut set = vec![first];
                search.extend(&mut set, span, &[Generation::TRIVIAL])?;
                Ok(search.found)
            },
        )
        .collect();
    let mut all = Vec::new();
    for part in per_first {
        all.extend(part?);
    }
    all.sort_by(|a, b| canonical_cmp(a, b));
    Ok(all)
}

fn check_cap(g: &FiniteGroup, config: &HypergraphConfig) -> Result<()> {
    if g.order() > config.max_order {
        return Err(Error::OrderCap { cap: config.max_order });
    }
    Ok(())
}

pub fn minimal_generating_sets(g: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    minimal_generating_sets_with(g, &HypergraphConfig::default(), &Budget::unlimited())
}

pub fn minimal_generating_sets_with(
    g: &FiniteGroup,
    config: &HypergraphConfig,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>> {
    check_cap(g, config)?;
    enumerate(g, usize::MAX, true, budget)
}

/// Generating sets of size exactly `d(G)`.
pub fn generating_sets_of_rank(g: &FiniteGroup, config: &HypergraphConfig, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    check_cap(g, config)?;
    let d = rank(g);
    let mut sets = enumerate(g, d, false, budget)?;
    sets.retain(|s| s.len() == d);
    Ok(sets)
}

impl GenHypergraph {
    fn build(g: &FiniteGroup, kind: HypergraphKind, rank: usize, hyperedges: Vec<Vec<usize>>) -> Self {
        let mut covered = ElementSet::empty(g.order());
        for e in &hyperedges {
            for &v in e {
                covered.insert(v);
            }
        }
        let isolated = (0..g.order()).filter(|&v| !covered.contains(v)).collect();
        GenHypergraph {
            kind,
            rank,
            vertex_count: g.order(),
            hyperedges,
            isolated,
            cyclic_excluded: g.is_cyclic() && g.order() > 1,
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.hyperedges.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        self.hyperedges.binary_search_by(|e| canonical_cmp(e, edge)).is_ok()
    }

    /// Structured text export with vertex labels in cycle notation.
    pub fn export_text(&self, g: &FiniteGroup) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "hypergraph {} kind {} rank {} vertices {} hyperedges {}",
            g.name(),
            self.kind,
            self.rank,
            self.vertex_count,
            self.hyperedges.len()
        );
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "vertex {v} {}", g.label(v));
        }
        let iso: Vec<String> = self.isolated.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "isolated {}", iso.join(" "));
        for e in &self.hyperedges {
            let items: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "edge {}", items.join(" "));
        }
        out
    }
}

pub fn gamma(g: &FiniteGroup) -> Result<GenHypergraph> {
    gamma_with(g, &HypergraphConfig::default(), &Budget::unlimited())
}

pub fn gamma_with(g: &FiniteGroup, config: &HypergraphConfig, budget: &Budget) -> Result<GenHypergraph> {
    let edges = generating_sets_of_rank(g, config, budget)?;
    let d = rank(g);
    Ok(GenHypergraph::build(g, HypergraphKind::Gamma, d, edges))
}

pub fn delta(g: &FiniteGroup) -> Result<GenHypergraph> {
    delta_with(g, &HypergraphConfig::default(), &Budget::unlimited())
}

pub fn delta_with(g: &FiniteGroup, config: &HypergraphConfig, budget: &Budget) -> Result<GenHypergraph> {
    let edges = minimal_generating_sets_with(g, config, budget)?;
    let d = edges.first().map_or(0, Vec::len);
    Ok(GenHypergraph::build(g, HypergraphKind::Delta, d, edges))
}

/// Connectivity of the hypergraph with its isolated vertices removed.
pub fn is_connected_reduced(h: &GenHypergraph) -> Connectivity {
    let mut uf = UnionFind::new(h.vertex_count);
    for e in &h.hyperedges {
        for w in e.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let components = uf.components() - h.isolated.len();
    Connectivity {
        connected: components <= 1,
        components,
        vacuous: h.hyperedges.iter().all(|e| e.is_empty()),
    }
}

/// Graph on the elements with `x -- y` whenever `<x, y> = G`.
#[derive(Clone, Debug)]
pub struct GeneratingGraph {
    vertex_count: usize,
    adjacency: Vec<ElementSet>,
}

impl GeneratingGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].contains(y)
    }

    pub fn neighbours(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[x].iter()
    }

    /// Edges `(x, y)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count)
            .flat_map(|x| self.adjacency[x].iter().filter(move |&y| y > x).map(move |y| (x, y)))
            .collect()
    }

    pub fn to_dot(&self, g: &FiniteGroup) -> String {
        let mut out = String::from("graph generating {\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", g.label(v));
        }
        for (x, y) in self.edges() {
            let _ = writeln!(out, "  {x} -- {y};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn generating_graph(g: &FiniteGroup) -> GeneratingGraph {
    let n = g.order();
    let mut gen = Generation::with_cyclic(g);
    let mut adjacency = vec![ElementSet::empty(n); n];
    for x in 0..n {
        let cx = gen.join(Generation::TRIVIAL, x);
        for y in x + 1..n {
            let s = gen.join(cx, y);
            if gen.is_whole(s) {
                adjacency[x].insert(y);
                adjacency[y].insert(x);
            }
        }
    }
    GeneratingGraph {
        vertex_count: n,
        adjacency,
    }
}

/// First `(a, b, c, d)` inducing the path `a - b - c - d`, scanning the middle
/// edge `b - c` in lexicographic order of `(b, c)`, then `a`, then `d`.
pub fn find_induced_p4(graph: &GeneratingGraph) -> Option<[usize; 4]> {
    for b in 0..graph.vertex_count {
        for c in graph.neighbours(b) {
            for a in graph.neighbours(b) {
                if a == c || graph.adjacent(a, c) {
                    continue;
                }
                for d in graph.neighbours(c) {
                    if d == b || d == a || graph.adjacent(d, b) || graph.adjacent(d, a) {
                        continue;
                    }
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}
