//! The minimal generating set exchange property and the basis exchange axiom.
//!
//! Both are evaluated on hyperedges (sets). For `X`, `Y` in `gamma(G)` and a
//! position `i`, MGSE asks for some `y` in `Y` with `(X - x_i) + y`
//! generating. The generation queries only depend on the subgroup
//! `K = <X - x_i>`, so for each distinct `K` the set of good replacements
//! `{y : <K, y> = G}` is computed once, before the pair scan.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::generation::{Generation, SubgroupId};
use crate::group::FiniteGroup;
use crate::hypergraph::{self, GenHypergraph, HypergraphConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MgseConfig {
    /// Upper bound on `(X, Y, i)` checks.
    pub max_queries: u64,
}

impl Default for MgseConfig {
    fn default() -> Self {
        MgseConfig {
            max_queries: 100_000_000,
        }
    }
}

/// `X` and `Y` fail at position `position` of `X` (0-based, in sorted order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MgseWitness {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub position: usize,
}

/// No `b` in `B - A` repairs `A - removed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub removed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeResult {
    pub holds: bool,
    pub witness: Option<ExchangeWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MgseReport {
    pub holds: bool,
    pub witness: Option<MgseWitness>,
    /// Exchange axiom on `gamma(G)`.
    pub exchange_holds: bool,
    pub exchange_witness: Option<ExchangeWitness>,
    /// All minimal generating sets have one size.
    pub uniform: bool,
    /// `uniform` and the exchange axiom on `delta(G)`.
    pub matroid: bool,
    pub gamma_edges: usize,
    pub delta_edges: usize,
    pub checks: u64,
}

/// Good-replacement sets for every `(X, i)` of a family of generating sets.
struct Replacements {
    per_edge: Vec<Vec<SubgroupId>>,
    good: HashMap<SubgroupId, ElementSet>,
}

impl Replacements {
    fn new(g: &FiniteGroup, edges: &[Vec<usize>], budget: &Budget) -> Result<Self> {
        let mut gen = Generation::with_cyclic(g);
        let mut good: HashMap<SubgroupId, ElementSet> = HashMap::new();
        let mut per_edge = Vec::with_capacity(edges.len());
        for (k, x) in edges.iter().enumerate() {
            if k % 1024 == 0 {
                budget.check("replacement precompute")?;
            }
            let mut ids = Vec::with_capacity(x.len());
            for i in 0..x.len() {
                let rest: Vec<usize> = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
                let id = gen.generate(&rest);
                good.entry(id).or_insert_with(|| {
                    ElementSet::from_indices(
                        g.order(),
                        (0..g.order()).filter(|&y| {
                            let s = gen.join(id, y);
                            gen.is_whole(s)
                        }),
                    )
                });
                ids.push(id);
            }
            per_edge.push(ids);
        }
        Ok(Replacements { per_edge, good })
    }

    fn good(&self, edge: usize, position: usize) -> &ElementSet {
        &self.good[&self.per_edge[edge][position]]
    }
}

/// Runs the MGSE and exchange checks on `gamma(G)`; `delta(G)` supplies the
/// uniformity and matroid verdicts.
pub fn mgse_check(g: &FiniteGroup) -> Result<MgseReport> {
    let budget = Budget::unlimited();
    let hcfg = HypergraphConfig::default();
    let gamma = hypergraph::gamma_with(g, &hcfg, &budget)?;
    let delta = hypergraph::delta_with(g, &hcfg, &budget)?;
    mgse_check_on(g, &gamma, &delta, &MgseConfig::default(), &budget)
}

pub fn mgse_check_on(
    g: &FiniteGroup,
    gamma: &GenHypergraph,
    delta: &GenHypergraph,
    config: &MgseConfig,
    budget: &Budget,
) -> Result<MgseReport> {
    let edges = &gamma.hyperedges;
    let d = gamma.rank as u64;
    let checks = (edges.len() as u64).pow(2) * d.max(1);
    if checks > config.max_queries {
        return Err(Error::Budget(format!(
            "{checks} exchange checks exceed the cap {}",
            config.max_queries
        )));
    }
    let repl = Replacements::new(g, edges, budget)?;

    let witness = (0..edges.len())
        .into_par_iter()
        .map(|xi| -> Result<Option<MgseWitness>> {
            budget.check("MGSE pair scan")?;
            let x = &edges[xi];
            for y in edges {
                for i in 0..x.len() {
                    let good = repl.good(xi, i);
                    if !y.iter().any(|&e| good.contains(e)) {
                        return Ok(Some(MgseWitness {
                            x: x.clone(),
                            y: y.clone(),
                            position: i,
                        }));
                    }
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();

    let exchange_witness = (0..edges.len()).into_par_iter().find_map_first(|ai| {
        let a = &edges[ai];
        for b in edges {
            for (i, &removed) in a.iter().enumerate() {
                if b.contains(&removed) {
                    continue;
                }
                let good = repl.good(ai, i);
                if !b.iter().any(|&e| !a.contains(&e) && good.contains(e)) {
                    return Some(ExchangeWitness {
                        a: a.clone(),
                        b: b.clone(),
                        removed,
                    });
                }
            }
        }
        None
    });

    let uniform = delta.is_uniform();
    let matroid = uniform && basis_exchange_check(delta).holds;
    Ok(MgseReport {
        holds: witness.is_none(),
        witness,
        exchange_holds: exchange_witness.is_none(),
        exchange_witness,
        uniform,
        matroid,
        gamma_edges: gamma.hyperedges.len(),
        delta_edges: delta.hyperedges.len(),
        checks,
    })
}

/// Replays a witness: true if no `y` in `Y` repairs `X` at the position.
pub fn replay_witness(g: &FiniteGroup, witness: &MgseWitness) -> bool {
    let mut gen = Generation::new(g);
    let rest: Vec<usize> = witness
        .x
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != witness.position)
        .map(|(_, &e)| e)
        .collect();
    witness.y.iter().all(|&y| {
        let mut s = rest.clone();
        s.push(y);
        !gen.generates(&s)
    })
}

/// The basis exchange axiom on the hyperedges of `h`, by set membership only.
pub fn basis_exchange_check(h: &GenHypergraph) -> ExchangeResult {
    let edges = &h.hyperedges;
    let members: HashSet<&[usize]> = edges.iter().map(Vec::as_slice).collect();
    let witness = (0..edges.len()).into_par_iter().find_map_first(|ai| {
        let a = &edges[ai];
        let mut candidate = Vec::with_capacity(a.len());
        for b in edges {
            for &removed in a {
                if b.contains(&removed) {
                    continue;
                }
                let repaired = b.iter().filter(|e| !a.contains(e)).any(|&e| {
                    candidate.clear();
                    candidate.extend(a.iter().copied().filter(|&x| x != removed));
                    candidate.push(e);
                    candidate.sort_unstable();
                    members.contains(candidate.as_slice())
                });
                if !repaired {
                    return Some(ExchangeWitness {
                        a: a.clone(),
                        b: b.clone(),
                        removed,
                    });
                }
            }
        }
        None
    });
    ExchangeResult {
        holds: witness.is_none(),
        witness,
    }
}

/// One generator `v x_i` of `V^delta x| <x>`: the vector part and the scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineGenerator {
    pub vector: Vec<Elem>,
    pub scalar: Elem,
}

/// Decides whether `delta + 1` elements generate `V^delta x| <x>` via
/// `det [[x_1 - 1 .. x_{delta+1} - 1], [v_1 .. v_{delta+1}]] != 0` over `F_q`,
/// the vectors `v_i` forming the lower `delta` rows.
pub fn det_criterion_generates(q: usize, p: usize, delta: usize, tuple: &[AffineGenerator]) -> Result<bool> {
    let field = FiniteField::new(q)?;
    det_criterion_generates_in(&field, p, delta, tuple)
}

pub fn det_criterion_generates_in(
    field: &FiniteField,
    p: usize,
    delta: usize,
    tuple: &[AffineGenerator],
) -> Result<bool> {
    let q = field.size();
    if !crate::group::is_prime(p) || !(q - 1).is_multiple_of(p) {
        return Err(Error::InvalidParams(format!(
            "need a prime p dividing q - 1, got p = {p}, q = {q}"
        )));
    }
    if tuple.len() != delta + 1 {
        return Err(Error::InvalidParams(format!(
            "expected {} generators, got {}",
            delta + 1,
            tuple.len()
        )));
    }
    for t in tuple {
        if t.vector.len() != delta || t.vector.iter().any(|&c| c as usize >= q) {
            return Err(Error::InvalidParams("vector of wrong length or out of range".into()));
        }
        if t.scalar as usize >= q || field.pow(t.scalar, p) != 1 {
            return Err(Error::InvalidParams(format!(
                "scalar {} has order not dividing {p}",
                t.scalar
            )));
        }
    }
    let mut matrix = vec![tuple.iter().map(|t| field.sub(t.scalar, 1)).collect::<Vec<_>>()];
    for r in 0..delta {
        matrix.push(tuple.iter().map(|t| t.vector[r]).collect());
    }
    Ok(field.determinant(&matrix) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupConfig;
    use crate::hypergraph::HypergraphKind;
    use crate::perm::Permutation;

    fn group(degree: usize, gens: &[&str]) -> FiniteGroup {
        let gens: Vec<_> = gens
            .iter()
            .map(|g| Permutation::parse_cycles(g, degree).unwrap())
            .collect();
        FiniteGroup::close("G", &gens, &GroupConfig::default()).unwrap()
    }

    fn family(edges: Vec<Vec<usize>>) -> GenHypergraph {
        GenHypergraph {
            kind: HypergraphKind::Delta,
            rank: edges[0].len(),
            vertex_count: 10,
            hyperedges: edges,
            isolated: Vec::new(),
            cyclic_excluded: false,
        }
    }

    #[test]
    fn klein_four_is_a_matroid() {
        let r = mgse_check(&group(4, &["(1,2)", "(3,4)"])).unwrap();
        assert!(r.holds && r.exchange_holds && r.uniform && r.matroid);
        assert_eq!(r.gamma_edges, 3);
    }

    #[test]
    fn f20_fails_with_a_replayable_witness() {
        let g = group(5, &["(2,3,4,5)", "(1,2,3,5,4)"]);
        let r = mgse_check(&g).unwrap();
        assert!(!r.holds && r.uniform && !r.matroid);
        let w = r.witness.unwrap();
        assert!(replay_witness(&g, &w));
        assert!(!r.exchange_holds);
    }

    #[test]
    fn self_exchange_always_succeeds() {
        let g = group(4, &["(1,2)", "(1,2,3,4)"]);
        let mut gen = Generation::new(&g);
        let gamma = crate::hypergraph::gamma(&g).unwrap();
        for x in &gamma.hyperedges {
            for i in 0..x.len() {
                let mut s: Vec<usize> = x.clone();
                s[i] = x[i];
                assert!(gen.generates(&s));
            }
        }
    }

    #[test]
    fn exchange_axiom_on_families() {
        // uniform matroid U(2,3)
        assert!(basis_exchange_check(&family(vec![vec![0, 1], vec![0, 2], vec![1, 2]])).holds);
        assert!(basis_exchange_check(&family(vec![vec![3, 4]])).holds);
        // {0,1} and {2,3}: removing 0 from {0,1} needs {1,2} or {1,3}
        let r = basis_exchange_check(&family(vec![vec![0, 1], vec![2, 3]]));
        assert!(!r.holds);
        assert_eq!(
            r.witness.unwrap(),
            ExchangeWitness {
                a: vec![0, 1],
                b: vec![2, 3],
                removed: 0
            }
        );
    }

    #[test]
    fn determinant_criterion_examples() {
        let gen = |v: Vec<Elem>, x: Elem| AffineGenerator { vector: v, scalar: x };
        // trivial scalar parts: first row zero
        assert!(!det_criterion_generates(3, 2, 1, &[gen(vec![1], 1), gen(vec![2], 1)]).unwrap());
        // x_1 = -1 = 2 in F_3
        assert!(det_criterion_generates(3, 2, 1, &[gen(vec![0], 2), gen(vec![1], 1)]).unwrap());
        assert!(
            det_criterion_generates(3, 2, 2, &[gen(vec![0, 0], 2), gen(vec![1, 0], 1), gen(vec![0, 1], 1)]).unwrap()
        );
        assert!(
            !det_criterion_generates(3, 2, 2, &[gen(vec![0, 0], 2), gen(vec![1, 0], 1), gen(vec![2, 0], 1)]).unwrap()
        );
    }

    #[test]
    fn determinant_criterion_errors() {
        let gen = |v: Vec<Elem>, x: Elem| AffineGenerator { vector: v, scalar: x };
        assert!(det_criterion_generates(5, 3, 1, &[gen(vec![0], 1), gen(vec![1], 1)]).is_err());
        assert!(det_criterion_generates(3, 2, 1, &[gen(vec![0, 1], 1), gen(vec![1], 1)]).is_err());
        assert!(det_criterion_generates(3, 2, 1, &[gen(vec![0], 1)]).is_err());
        // 0 has no multiplicative order
        assert!(det_criterion_generates(3, 2, 1, &[gen(vec![0], 0), gen(vec![1], 1)]).is_err());
    }
}
