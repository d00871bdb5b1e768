//! Probabilities of generating with random tuples, in exact arithmetic.
//!
//! `P_G(t) = sum_n a_n(G) / n^t` is evaluated from the lattice side, and
//! independently by counting generating `t`-tuples. Going the other way,
//! the values `P_G(1), .., P_G(m)` with `m = |G|` determine every `a_n` by a
//! nonsingular linear system, solved here by fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::generation::{Generation, SubgroupId};
use crate::group::FiniteGroup;
use crate::lattice::EulerianSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DirichletConfig {
    /// Largest `|G|^t` counted by the brute-force route.
    pub max_tuples: u64,
    /// Largest system size accepted by [`recover_a_from_p`].
    pub max_system: usize,
}

impl Default for DirichletConfig {
    fn default() -> Self {
        DirichletConfig {
            max_tuples: 10_000_000,
            max_system: 24,
        }
    }
}

/// `sum_n a_n / n^t`.
pub fn p_gen_exact(seq: &EulerianSequence, t: u32) -> BigRational {
    seq.a
        .iter()
        .map(|(&n, &a)| BigRational::new(BigInt::from(a), BigInt::from(n).pow(t)))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// Fraction of ordered `t`-tuples in `G^t` that generate `G`, by counting.
pub fn p_gen_bruteforce(g: &FiniteGroup, t: u32) -> Result<BigRational> {
    p_gen_bruteforce_with(g, t, &DirichletConfig::default(), &Budget::unlimited())
}

pub fn p_gen_bruteforce_with(
    g: &FiniteGroup,
    t: u32,
    config: &DirichletConfig,
    budget: &Budget,
) -> Result<BigRational> {
    let n = g.order() as u64;
    let total = n
        .checked_pow(t)
        .filter(|&x| x <= config.max_tuples)
        .ok_or_else(|| Error::Budget(format!("|G|^t = {n}^{t} exceeds the tuple cap {}", config.max_tuples)))?;
    if t == 0 {
        let hit = u64::from(n == 1);
        return Ok(BigRational::new(hit.into(), BigInt::one()));
    }

    fn count(gen: &mut Generation, span: SubgroupId, left: u32, budget: &Budget) -> Result<u64> {
        if left == 0 {
            return Ok(u64::from(gen.is_whole(span)));
        }
        let n = gen.group().order();
        let mut hits = 0;
        for y in 0..n {
            let next = gen.join(span, y);
            if gen.is_whole(next) {
                // every completion generates
                hits += (n as u64).pow(left - 1);
            } else {
                hits += count(gen, next, left - 1, budget)?;
            }
        }
        if left >= 2 {
            budget.check("tuple counting")?;
        }
        Ok(hits)
    }

    let base = Generation::with_cyclic(g);
    let parts: Vec<Result<u64>> = (0..g.order())
        .into_par_iter()
        .map_init(
            || base.clone(),
            |gen, first| {
                let span = gen.join(Generation::TRIVIAL, first);
                count(gen, span, t - 1, budget)
            },
        )
        .collect();
    let mut hits = 0u64;
    for p in parts {
        hits += p?;
    }
    Ok(BigRational::new(hits.into(), total.into()))
}

/// Solves `sum_{j=1..m} a_j / j^i = P(i)` for `i = 1..m`.
///
/// Row `i` is scaled by `lcm(1..m)^i` and by the denominator of `P(i)` so the
/// system is integral, then reduced with Bareiss elimination. A non-integral
/// solution means the values did not come from a group of order `m`.
pub fn recover_a_from_p(values: &[BigRational], m: usize) -> Result<EulerianSequence> {
    recover_a_from_p_with(values, m, &DirichletConfig::default())
}

pub fn recover_a_from_p_with(values: &[BigRational], m: usize, config: &DirichletConfig) -> Result<EulerianSequence> {
    if m == 0 || values.len() != m {
        return Err(Error::Precondition(format!(
            "need exactly m = {m} >= 1 values, got {}",
            values.len()
        )));
    }
    if m > config.max_system {
        return Err(Error::Budget(format!(
            "system size {m} exceeds cap {}",
            config.max_system
        )));
    }
    let l = (1..=m as u64).fold(1u64, |acc, j| acc.lcm(&j));
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    for (k, p) in values.iter().enumerate() {
        let i = k as u32 + 1;
        let den = p.denom().clone();
        let mut row: Vec<BigInt> = (1..=m as u64).map(|j| BigInt::from(l / j).pow(i) * &den).collect();
        row.push(BigInt::from(l).pow(i) * p.numer());
        rows.push(row);
    }
    let solution = bareiss_solve(rows).ok_or_else(|| Error::Precondition("coefficient matrix is singular".into()))?;
    let mut a = Vec::with_capacity(m);
    for (k, x) in solution.into_iter().enumerate() {
        if !x.is_integer() {
            return Err(Error::NonIntegral { index: k + 1, order: m });
        }
        let v = x.to_integer();
        let v: i64 = v
            .try_into()
            .map_err(|_| Error::NonIntegral { index: k + 1, order: m })?;
        a.push((k + 1, v));
    }
    Ok(EulerianSequence::new(m, a))
}

/// Fraction-free elimination of an `m x (m+1)` augmented integer system.
fn bareiss_solve(mut rows: Vec<Vec<BigInt>>) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let mut prev = BigInt::one();
    for k in 0..m {
        let pivot = (k..m).find(|&r| !rows[r][k].is_zero())?;
        rows.swap(k, pivot);
        for i in k + 1..m {
            for j in k + 1..=m {
                let v = (&rows[i][j] * &rows[k][k] - &rows[i][k] * &rows[k][j]) / &prev;
                rows[i][j] = v;
            }
            rows[i][k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); m];
    for k in (0..m).rev() {
        let mut acc = BigRational::from_integer(rows[k][m].clone());
        for j in k + 1..m {
            acc -= BigRational::from_integer(rows[k][j].clone()) * &x[j];
        }
        x[k] = acc / BigRational::from_integer(rows[k][k].clone());
    }
    Some(x)
}

/// `a_{p^c d} = a_{p^c} a_d` for all `c >= 1` and `d` prime to `p`, `p^c d <= |G|`.
pub fn detect_p_solvable(seq: &EulerianSequence, p: usize) -> bool {
    p_solvability_violation(seq, p).is_none()
}

/// First `(p^c, d)` breaking multiplicativity, if any.
pub fn p_solvability_violation(seq: &EulerianSequence, p: usize) -> Option<(usize, usize)> {
    let n = seq.group_order;
    let mut q = p;
    while q <= n {
        for d in (1..=n / q).filter(|d| d % p != 0) {
            if seq.get(q * d) != seq.get(q) * seq.get(d) {
                return Some((q, d));
            }
        }
        q *= p;
    }
    None
}

/// `a_{rs} = a_r a_s` for every coprime pair with `rs <= |G|`.
pub fn detect_solvable(seq: &EulerianSequence) -> bool {
    solvability_violation(seq).is_none()
}

pub fn solvability_violation(seq: &EulerianSequence) -> Option<(usize, usize)> {
    let n = seq.group_order;
    for r in 2..=n {
        for s in r + 1..=n / r {
            if r.gcd(&s) == 1 && seq.get(r * s) != seq.get(r) * seq.get(s) {
                return Some((r, s));
            }
        }
    }
    None
}

/// `n a_n` table lines and requested values, all as exact fractions.
pub fn format_table(seq: &EulerianSequence, ts: &[u32]) -> String {
    let mut out = String::new();
    for (n, a) in &seq.a {
        out.push_str(&format!("a {n} {a}\n"));
    }
    for &t in ts {
        out.push_str(&format!("P {t} {}\n", p_gen_exact(seq, t)));
    }
    out
}

pub fn is_probability(x: &BigRational) -> bool {
    !x.is_negative() && x <= &BigRational::one()
}
