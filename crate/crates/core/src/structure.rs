//! Structural prediction of the MGSE property for non-cyclic solvable groups.
//!
//! A nilpotent group is predicted positive iff it is a `p`-group. Otherwise
//! the Frattini quotient `Q = G/Phi(G)` must have the shape `N^delta x| H`
//! with `H` of prime order `p` acting faithfully on each copy of the
//! elementary abelian `N`, all copies isomorphic as `H`-modules.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::group::{is_prime, prime_power_base, FiniteGroup, Subgroup};
use crate::lattice::{self, LatticeConfig};
use crate::quotient::quotient_group;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// `|H|`.
    pub p: usize,
    /// Characteristic of `N`.
    pub q: usize,
    /// `|N|`.
    pub module_order: usize,
    pub delta: usize,
    /// A preimage in `G` of the generator of `H`.
    pub generator: String,
    /// `|G/Phi(G)|`.
    pub quotient_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub applicable: bool,
    pub predicted_mgse: bool,
    pub decomposition: Option<Decomposition>,
    pub reasons: Vec<String>,
}

impl StructureReport {
    fn declined(reason: String) -> Self {
        StructureReport {
            applicable: false,
            predicted_mgse: false,
            decomposition: None,
            reasons: vec![reason],
        }
    }
}

pub fn predict_mgse_structurally(g: &FiniteGroup) -> Result<StructureReport> {
    if g.is_cyclic() {
        return Ok(StructureReport::declined("cyclic groups are excluded".into()));
    }
    if !g.is_solvable() {
        return Ok(StructureReport::declined("not solvable".into()));
    }
    let mut reasons = Vec::new();
    if g.is_nilpotent() {
        let base = prime_power_base(g.order());
        reasons.push(match base {
            Some(p) => format!("nilpotent {p}-group"),
            None => format!("nilpotent of order {}, not a prime power", g.order()),
        });
        return Ok(StructureReport {
            applicable: true,
            predicted_mgse: base.is_some(),
            decomposition: None,
            reasons,
        });
    }

    let phi = lattice::frattini(g, &LatticeConfig::default())?;
    let quotient = quotient_group(g, &phi)?;
    let qg = &quotient.group;
    reasons.push(format!("|Phi(G)| = {}, |G/Phi(G)| = {}", phi.order(), qg.order()));
    let negative = |mut reasons: Vec<String>, why: String| {
        reasons.push(why);
        Ok(StructureReport {
            applicable: true,
            predicted_mgse: false,
            decomposition: None,
            reasons,
        })
    };

    let fit = qg.fitting_subgroup();
    if !qg.is_abelian_subgroup(&fit) {
        return negative(
            reasons,
            format!("Fitting subgroup of order {} is not abelian", fit.order()),
        );
    }
    let p = qg.order() / fit.order();
    if !is_prime(p) {
        return negative(reasons, format!("Fitting subgroup has index {p}, not a prime"));
    }
    let Some(q) = prime_power_base(fit.order()) else {
        return negative(
            reasons,
            format!("Fitting subgroup of order {} is not a q-group", fit.order()),
        );
    };
    if fit.elements().iter().any(|&e| e != 0 && qg.element_order(e) != q) {
        return negative(
            reasons,
            format!("Fitting subgroup of order {} is not elementary abelian", fit.order()),
        );
    }
    if q == p {
        return negative(reasons, format!("module and complement are both {p}-groups"));
    }
    let Some(h) = (0..qg.order()).find(|&e| !fit.contains(e) && qg.element_order(e) == p) else {
        return negative(reasons, format!("no element of order {p} outside the Fitting subgroup"));
    };

    let minimal = minimal_normal_within(qg, &fit);
    let module_order = minimal[0].order();
    if minimal.iter().any(|m| m.order() != module_order) {
        let orders: Vec<_> = minimal.iter().map(Subgroup::order).collect();
        return negative(reasons, format!("minimal normal subgroups have orders {orders:?}"));
    }
    let product = minimal.iter().fold(qg.trivial_subgroup(), |acc, m| qg.join(&acc, m));
    if product.order() != fit.order() {
        return negative(
            reasons,
            "minimal normal subgroups do not span the Fitting subgroup".into(),
        );
    }
    if let Some(m) = minimal
        .iter()
        .find(|m| m.elements().iter().all(|&n| qg.mul(h, n) == qg.mul(n, h)))
    {
        return negative(
            reasons,
            format!("H centralizes a minimal normal subgroup of order {}", m.order()),
        );
    }
    if let Some(k) = (1..minimal.len()).find(|&k| !h_isomorphic(qg, h, &minimal[0], &minimal[k])) {
        return negative(
            reasons,
            format!("minimal normal subgroups 0 and {k} are not H-isomorphic"),
        );
    }

    let mut delta = 0;
    let mut t = 1;
    while t < fit.order() {
        t *= module_order;
        delta += 1;
    }
    let preimage = (0..g.order())
        .find(|&e| quotient.project(e) == h)
        .expect("projection is onto");
    reasons.push(format!(
        "{} minimal normal subgroups of order {module_order}, H of order {p}",
        minimal.len()
    ));
    Ok(StructureReport {
        applicable: true,
        predicted_mgse: true,
        decomposition: Some(Decomposition {
            p,
            q,
            module_order,
            delta,
            generator: g.label(preimage),
            quotient_order: qg.order(),
        }),
        reasons,
    })
}

/// Minimal normal subgroups of `g` contained in the normal subgroup `f`.
fn minimal_normal_within(g: &FiniteGroup, f: &Subgroup) -> Vec<Subgroup> {
    let mut closures: Vec<Subgroup> = Vec::new();
    for e in f.elements() {
        if e == 0 {
            continue;
        }
        let n = g.normal_closure(&[e]);
        if !closures.contains(&n) {
            closures.push(n);
        }
    }
    let minimal: Vec<Subgroup> = closures
        .iter()
        .filter(|n| !closures.iter().any(|m| m.order() < n.order() && m.is_subgroup_of(n)))
        .cloned()
        .collect();
    let mut minimal = minimal;
    minimal.sort_by(|a, b| a.mask().cmp(b.mask()));
    minimal
}

/// Searches for an isomorphism `a -> b` commuting with conjugation by `h`.
/// The map is grown from one seed pair by products and conjugates.
fn h_isomorphic(g: &FiniteGroup, h: usize, a: &Subgroup, b: &Subgroup) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let Some(seed) = a.elements().into_iter().find(|&e| e != 0) else {
        return true;
    };
    b.elements().into_iter().filter(|&e| e != 0).any(|target| {
        let mut map: HashMap<usize, usize> = HashMap::from([(0, 0), (seed, target)]);
        let mut queue = vec![seed];
        while let Some(x) = queue.pop() {
            let fx = map[&x];
            let mut new_pairs = vec![(g.conjugate(x, h), g.conjugate(fx, h))];
            new_pairs.extend(map.iter().map(|(&y, &fy)| (g.mul(x, y), g.mul(fx, fy))));
            for (u, fu) in new_pairs {
                match map.get(&u) {
                    Some(&v) if v != fu => return false,
                    Some(_) => {}
                    None => {
                        map.insert(u, fu);
                        queue.push(u);
                    }
                }
            }
        }
        let mut image: Vec<usize> = map.values().copied().collect();
        image.sort_unstable();
        image.dedup();
        map.len() == a.order() && image.len() == a.order()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalNormalReport {
    pub unique: bool,
    /// Orders of the maximal proper normal subgroups.
    pub maximal_normal_orders: Vec<usize>,
    /// `|G/N|` when `N` is unique.
    pub quotient_order: Option<usize>,
    pub quotient_cyclic: bool,
    pub quotient_prime: bool,
}

pub fn unique_maximal_normal_check(g: &FiniteGroup) -> Result<MaximalNormalReport> {
    let lat = lattice::all_subgroups(g, &LatticeConfig::default())?;
    let top = lat.top();
    let proper: Vec<usize> = lat.normal_subgroups().into_iter().filter(|&i| i != top).collect();
    let maximal: Vec<usize> = proper
        .iter()
        .copied()
        .filter(|&i| !proper.iter().any(|&j| j != i && lat.is_below(i, j)))
        .collect();
    let unique = maximal.len() == 1;
    let (quotient_order, quotient_cyclic) = if unique {
        let n = lat.node(maximal[0]);
        let quotient = quotient_group(g, n)?;
        (Some(quotient.group.order()), quotient.group.is_cyclic())
    } else {
        (None, false)
    };
    Ok(MaximalNormalReport {
        unique,
        maximal_normal_orders: maximal.iter().map(|&i| lat.node(i).order()).collect(),
        quotient_order,
        quotient_cyclic,
        quotient_prime: quotient_order.is_some_and(is_prime),
    })
}
