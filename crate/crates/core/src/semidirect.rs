//! `V^delta x| <x>`: `V = F_q` with `x` an element of prime order `p` in
//! `F_q^*` acting by multiplication on every coordinate.
//!
//! The group is realized by the affine maps `z -> a z + v` of `F_q^delta`,
//! `a` in `<x>`, `v` in `F_q^delta`, as permutations of the `q^delta`
//! points. A point `(z_0, .., z_{delta-1})` has index `sum z_r q^r`.

use crate::error::{Error, Result};
use crate::field::{element_of_order, Elem, FiniteField};
use crate::group::{FiniteGroup, GroupConfig};
use crate::perm::{Permutation, Point};

#[derive(Clone, Debug)]
pub struct AffineModel {
    field: FiniteField,
    p: usize,
    delta: usize,
    scalar: Elem,
}

impl AffineModel {
    /// Checks that `p` is prime, divides `q - 1`, and that `x` spans `F_q`
    /// over the prime field, so `F_q` is a faithful irreducible `<x>`-module.
    pub fn new(q: usize, p: usize, delta: usize) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidParams("delta must be at least 1".into()));
        }
        let field = FiniteField::new(q)?;
        let scalar = element_of_order(&field, p)?;
        if !field.generates_field(scalar) {
            return Err(Error::InvalidParams(format!(
                "an element of order {p} lies in a proper subfield of F_{q}; F_{q} is not irreducible"
            )));
        }
        Ok(AffineModel {
            field,
            p,
            delta,
            scalar,
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// The chosen scalar `x` of order `p`.
    pub fn scalar(&self) -> Elem {
        self.scalar
    }

    pub fn points(&self) -> usize {
        self.field.size().pow(self.delta as u32)
    }

    fn point_index(&self, z: &[Elem]) -> usize {
        let q = self.field.size();
        z.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
    }

    fn point(&self, mut index: usize) -> Vec<Elem> {
        let q = self.field.size();
        (0..self.delta)
            .map(|_| {
                let c = (index % q) as Elem;
                index /= q;
                c
            })
            .collect()
    }

    /// `z -> a z + v`.
    pub fn encode(&self, v: &[Elem], a: Elem) -> Permutation {
        let f = &self.field;
        let images = (0..self.points())
            .map(|i| {
                let z = self.point(i);
                let w: Vec<Elem> = z.iter().zip(v).map(|(&zc, &vc)| f.add(f.mul(a, zc), vc)).collect();
                self.point_index(&w) as Point
            })
            .collect();
        Permutation::from_images(images).expect("affine maps are bijective")
    }

    /// Recovers `(v, a)` from an element of the model.
    pub fn decode(&self, perm: &Permutation) -> (Vec<Elem>, Elem) {
        let v = self.point(perm.apply(0));
        let e0 = self.point_index(&{
            let mut e = vec![0; self.delta];
            e[0] = 1;
            e
        });
        let image = self.point(perm.apply(e0));
        let a = self.field.sub(image[0], v[0]);
        (v, a)
    }

    /// The unit translations and the scalar `x`.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens = Vec::with_capacity(self.delta + 1);
        for r in 0..self.delta {
            let mut e = vec![0; self.delta];
            e[r] = 1;
            gens.push(self.encode(&e, 1));
        }
        gens.push(self.encode(&vec![0; self.delta], self.scalar));
        gens
    }

    pub fn group(&self, name: impl Into<String>, config: &GroupConfig) -> Result<FiniteGroup> {
        FiniteGroup::close(name, &self.generators(), config)
    }
}
