//! Small finite fields `F_q`, `q = r^k`, with table arithmetic.
//!
//! Elements are encoded as integers `0..q` whose base-`r` digits are the
//! coefficients of a polynomial reduced modulo the lexicographically first
//! monic irreducible of degree `k`. For prime `q` this is plain arithmetic
//! mod `q`.

use crate::error::{Error, Result};
use crate::group::{is_prime, prime_power_base};

pub type Elem = u16;

/// Fields up to this size are supported.
pub const MAX_FIELD: usize = 256;

#[derive(Clone, Debug)]
pub struct FiniteField {
    q: usize,
    characteristic: usize,
    degree: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        let r = prime_power_base(q).ok_or_else(|| Error::InvalidParams(format!("{q} is not a prime power")))?;
        if q > MAX_FIELD {
            return Err(Error::InvalidParams(format!("field size {q} above {MAX_FIELD}")));
        }
        let mut k = 0;
        let mut t = q;
        while t > 1 {
            t /= r;
            k += 1;
        }
        let modulus = first_irreducible(r, k);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a, r, k), digits(b, r, k));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % r).collect();
                add[a * q + b] = undigits(&sum, r) as Elem;
                mul[a * q + b] = undigits(&poly_mulmod(&da, &db, &modulus, r), r) as Elem;
            }
        }
        Ok(FiniteField {
            q,
            characteristic: r,
            degree: k,
            add,
            mul,
        })
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.characteristic
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        (0..self.q as Elem)
            .find(|&b| self.add(a, b) == 0)
            .expect("additive inverse")
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (1..self.q as Elem).find(|&b| self.mul(a, b) == 1)
    }

    pub fn pow(&self, a: Elem, e: usize) -> Elem {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Option<usize> {
        if a == 0 || a as usize >= self.q {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// True if no proper subfield contains `a`.
    pub fn generates_field(&self, a: Elem) -> bool {
        (1..self.degree)
            .filter(|e| self.degree.is_multiple_of(*e))
            .all(|e| self.pow(a, self.characteristic.pow(e as u32)) != a)
    }

    /// Determinant of a square matrix by Gaussian elimination.
    pub fn determinant(&self, matrix: &[Vec<Elem>]) -> Elem {
        let n = matrix.len();
        let mut m: Vec<Vec<Elem>> = matrix.to_vec();
        let mut det: Elem = 1;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
                return 0;
            };
            if pivot != col {
                m.swap(pivot, col);
                det = self.neg(det);
            }
            det = self.mul(det, m[col][col]);
            let inv = self.inv(m[col][col]).expect("nonzero pivot");
            let (upper, lower) = m.split_at_mut(col + 1);
            let pivot_row = &upper[col];
            for row in lower {
                let factor = self.mul(row[col], inv);
                if factor == 0 {
                    continue;
                }
                for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = self.sub(*x, self.mul(factor, p));
                }
            }
        }
        det
    }
}

fn digits(mut a: usize, r: usize, k: usize) -> Vec<usize> {
    let mut d = Vec::with_capacity(k);
    for _ in 0..k {
        d.push(a % r);
        a /= r;
    }
    d
}

fn undigits(d: &[usize], r: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * r + x)
}

/// Product of two polynomials of degree < k, reduced by the monic `modulus`
/// (given by its k lower coefficients).
fn poly_mulmod(a: &[usize], b: &[usize], modulus: &[usize], r: usize) -> Vec<usize> {
    let k = modulus.len();
    let mut prod = vec![0; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % r;
        }
    }
    for top in (k..2 * k).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in modulus.iter().enumerate() {
            let idx = top - k + i;
            prod[idx] = (prod[idx] + r * r - c * m % r) % r;
        }
    }
    prod.truncate(k);
    prod
}

/// Lower coefficients of the first monic irreducible of degree `k` over `F_r`.
fn first_irreducible(r: usize, k: usize) -> Vec<usize> {
    if k == 1 {
        return vec![0];
    }
    (0..r.pow(k as u32))
        .map(|code| digits(code, r, k))
        .find(|lower| is_irreducible(lower, r))
        .expect("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree 1..=k/2.
fn is_irreducible(lower: &[usize], r: usize) -> bool {
    let k = lower.len();
    let mut f = lower.to_vec();
    f.push(1);
    for d in 1..=k / 2 {
        for code in 0..r.pow(d as u32) {
            let mut g = digits(code, r, d);
            g.push(1);
            if poly_rem(&f, &g, r).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[usize], g: &[usize], r: usize) -> Vec<usize> {
    let mut rem = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let c = *rem.last().expect("nonempty");
        let shift = rem.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + r * r - c * gi % r) % r;
        }
        rem.pop();
    }
    rem
}

/// The smallest encoded element of multiplicative order exactly `p`.
pub fn element_of_order(field: &FiniteField, p: usize) -> Result<Elem> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    if !(field.size() - 1).is_multiple_of(p) {
        return Err(Error::InvalidParams(format!(
            "{p} does not divide q - 1 = {}",
            field.size() - 1
        )));
    }
    Ok((1..field.size() as Elem)
        .find(|&a| field.multiplicative_order(a) == Some(p))
        .expect("cyclic multiplicative group has elements of every order dividing q - 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field_axioms(f: &FiniteField) {
        let q = f.size() as Elem;
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_and_extension_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16] {
            check_field_axioms(&FiniteField::new(q).unwrap());
        }
        assert!(FiniteField::new(6).is_err());
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in [4, 8, 9] {
            let f = FiniteField::new(q).unwrap();
            assert!((1..q as Elem).any(|a| f.multiplicative_order(a) == Some(q - 1)));
        }
    }

    #[test]
    fn order_p_scalars() {
        let f4 = FiniteField::new(4).unwrap();
        let x = element_of_order(&f4, 3).unwrap();
        assert_eq!(f4.multiplicative_order(x), Some(3));
        assert!(f4.generates_field(x));
        let f3 = FiniteField::new(3).unwrap();
        assert_eq!(element_of_order(&f3, 2).unwrap(), 2);
        assert!(element_of_order(&FiniteField::new(5).unwrap(), 4).is_err());
        assert!(element_of_order(&FiniteField::new(5).unwrap(), 3).is_err());
        // -1 lies in F_3 inside F_9
        let f9 = FiniteField::new(9).unwrap();
        assert!(!f9.generates_field(element_of_order(&f9, 2).unwrap()));
    }

    #[test]
    fn determinants() {
        let f3 = FiniteField::new(3).unwrap();
        // [[-2, 0], [0, 1]] = [[1, 0], [0, 1]] over F_3
        assert_eq!(f3.determinant(&[vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(f3.determinant(&[vec![1, 2], vec![2, 1]]), 0);
        assert_eq!(f3.determinant(&[vec![0, 1], vec![1, 0]]), 2);
    }
}
