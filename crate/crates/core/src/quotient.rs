//! Quotients by normal subgroups and lifting generating tuples through them.

use crate::error::{Error, Result};
use crate::generation::Generation;
use crate::group::{FiniteGroup, GroupConfig, Subgroup};
use crate::hypergraph;
use crate::perm::{Permutation, Point};

/// `G/N` realized on the cosets of `N`, with the projection from `G`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// Element index in `G` to element index in `G/N`.
    pub projection: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, element: usize) -> usize {
        self.projection[element]
    }

    /// Preimage of a quotient subgroup, as a subgroup of `G`.
    pub fn preimage(&self, parent: &FiniteGroup, sub: &Subgroup) -> Subgroup {
        let mask = crate::bitset::ElementSet::from_indices(
            parent.order(),
            (0..parent.order()).filter(|&e| sub.contains(self.projection[e])),
        );
        Subgroup::from_mask(mask)
    }
}

pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<Quotient> {
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    const UNASSIGNED: usize = usize::MAX;
    let mut coset_of = vec![UNASSIGNED; g.order()];
    let mut reps = Vec::new();
    let members = n.elements();
    for e in 0..g.order() {
        if coset_of[e] != UNASSIGNED {
            continue;
        }
        let c = reps.len();
        reps.push(e);
        for &x in &members {
            coset_of[g.mul(x, e)] = c;
        }
    }
    let index = reps.len();
    let action = |e: usize| -> Permutation {
        let images = reps.iter().map(|&r| coset_of[g.mul(r, e)] as Point).collect();
        Permutation::from_images(images).expect("right multiplication permutes cosets")
    };

    let gens: Vec<Permutation> = g.generators().iter().map(|&x| action(x)).collect();
    let config = GroupConfig {
        max_degree: index.max(1),
        max_order: index.max(1),
    };
    let name = format!("{}/{}", g.name(), n.order());
    let quotient = FiniteGroup::close(name, &gens, &config)?;
    let projection = (0..g.order())
        .map(|e| quotient.index_of(&action(e)).expect("image lies in the quotient"))
        .collect();
    Ok(Quotient {
        group: quotient,
        projection,
    })
}

/// Finds `u_1..u_r` in `N` with `<g_1 u_1, .., g_r u_r> = G`.
///
/// `coset_tuple` is padded with the identity up to length `r`. The search
/// runs over `N^r` in lexicographic order of element indices and returns the
/// first hit.
pub fn lift_generating_tuple(g: &FiniteGroup, n: &Subgroup, coset_tuple: &[usize], r: usize) -> Result<Vec<usize>> {
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    if coset_tuple.len() > r {
        return Err(Error::Precondition(format!(
            "tuple has {} entries but r = {r}",
            coset_tuple.len()
        )));
    }
    let mut base = coset_tuple.to_vec();
    base.resize(r, 0);

    let mut generation = Generation::new(g);
    let mut with_n = g.subgroup_generators(n);
    with_n.extend_from_slice(&base);
    if !generation.generates(&with_n) {
        return Err(Error::Precondition("coset images do not generate the quotient".into()));
    }
    let d = hypergraph::rank(g);
    if r < d {
        return Err(Error::Precondition(format!("r = {r} is below d(G) = {d}")));
    }

    let members = n.elements();
    let mut digits = vec![0usize; r];
    let mut candidate = vec![0usize; r];
    loop {
        for k in 0..r {
            candidate[k] = g.mul(base[k], members[digits[k]]);
        }
        if generation.generates(&candidate) {
            return Ok(candidate);
        }
        // odometer, last position fastest
        let mut k = r;
        loop {
            if k == 0 {
                return Err(Error::LiftSearchFailed);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < members.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> FiniteGroup {
        let gens: Vec<_> = gens
            .iter()
            .map(|g| Permutation::parse_cycles(g, degree).unwrap())
            .collect();
        FiniteGroup::close("G", &gens, &GroupConfig::default()).unwrap()
    }

    fn idx(g: &FiniteGroup, s: &str) -> usize {
        g.index_of(&Permutation::parse_cycles(s, g.degree()).unwrap()).unwrap()
    }

    fn assert_homomorphism(g: &FiniteGroup, q: &Quotient) {
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(q.project(g.mul(a, b)), q.group.mul(q.project(a), q.project(b)));
            }
        }
    }

    #[test]
    fn s3_mod_derived() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        let q = quotient_group(&g, &g.derived_subgroup()).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_homomorphism(&g, &q);
        let kernel = (0..6).filter(|&e| q.project(e) == 0).count();
        assert_eq!(kernel, 3);
    }

    #[test]
    fn quotient_by_trivial_is_a_copy() {
        let g = group(5, &["(2,3,4,5)", "(1,2,3,5,4)"]);
        let q = quotient_group(&g, &g.trivial_subgroup()).unwrap();
        assert_eq!(q.group.order(), 20);
        let mut a: Vec<_> = (0..20).map(|e| g.element_order(e)).collect();
        let mut b: Vec<_> = (0..20).map(|e| q.group.element_order(e)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_homomorphism(&g, &q);
    }

    #[test]
    fn q8_mod_center_is_klein() {
        let g = group(8, &["(1,2,5,6)(3,8,7,4)", "(1,3,5,7)(2,4,6,8)"]);
        let q = quotient_group(&g, &g.center()).unwrap();
        assert_eq!(q.group.order(), 4);
        assert!((0..4).all(|e| q.group.element_order(e) <= 2));
        assert_homomorphism(&g, &q);
    }

    #[test]
    fn non_normal_rejected() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        let h = g.closure(&[idx(&g, "(1,2)")]);
        assert_eq!(quotient_group(&g, &h).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn lift_in_s3() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        let n = g.derived_subgroup();
        let t = idx(&g, "(1,2)");
        let out = lift_generating_tuple(&g, &n, &[t, 0], 2).unwrap();
        assert_eq!(g.closure(&out).order(), 6);
        let q = quotient_group(&g, &n).unwrap();
        assert_eq!(q.project(out[0]), q.project(t));
        assert_eq!(q.project(out[1]), q.project(0));
        // first hit in search order keeps the transposition and takes a 3-cycle
        assert_eq!(out[0], t);
        assert_eq!(g.element_order(out[1]), 3);
    }

    #[test]
    fn lift_through_trivial_is_identity() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        let pair = [idx(&g, "(1,3)"), idx(&g, "(1,3,2)")];
        let out = lift_generating_tuple(&g, &g.trivial_subgroup(), &pair, 2).unwrap();
        assert_eq!(out, pair.to_vec());
    }

    #[test]
    fn lift_in_klein_four() {
        let g = group(4, &["(1,2)", "(3,4)"]);
        let a = idx(&g, "(1,2)");
        let nz = idx(&g, "(3,4)");
        let n = g.closure(&[nz]);
        let out = lift_generating_tuple(&g, &n, &[a], 2).unwrap();
        assert_eq!(out, vec![a, nz]);
    }

    #[test]
    fn lift_preconditions() {
        let g = group(4, &["(1,2)", "(3,4)"]);
        let n = g.closure(&[idx(&g, "(3,4)")]);
        // identity does not generate G/N
        assert!(matches!(
            lift_generating_tuple(&g, &n, &[0], 2),
            Err(Error::Precondition(_))
        ));
        // r below d(G) = 2
        assert!(matches!(
            lift_generating_tuple(&g, &n, &[idx(&g, "(1,2)")], 1),
            Err(Error::Precondition(_))
        ));
    }
}
