use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::{One, Zero};

use super::fock::{apply_alpha_neg, f_operator_eigenvalue, FockVector};
use super::Partition;
use crate::arith::{factorial, rat_int, Rational};
use crate::error::{Error, Result};

/// Labels a q-orbifold r-spin Hurwitz number `h_{g;μ}^{q,r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HurwitzKey {
    pub g: u32,
    pub mu: Partition,
    pub q: u32,
    pub r: u32,
}

impl HurwitzKey {
    pub fn new(g: u32, mu: &[u32], q: u32, r: u32) -> Self {
        Self { g, mu: Partition::new(mu.to_vec()), q, r }
    }

    /// Number of completed cycles `m = (2g - 2 + n + |μ|/q) / r`.
    pub fn m(&self) -> Result<u32> {
        completed_cycle_count(self.g as i64, self.mu.len() as i64, self.mu.size() as i64, self.q, self.r)
            .ok_or_else(|| Error::IntegralityViolation(format!("{self:?}")))
    }

    pub fn is_valid(&self) -> bool {
        self.q >= 1 && self.r >= 1 && !self.mu.is_empty() && self.m().is_ok()
    }
}

pub(crate) fn completed_cycle_count(g: i64, n: i64, d: i64, q: u32, r: u32) -> Option<u32> {
    let (q, r) = (q as i64, r as i64);
    if d % q != 0 {
        return None;
    }
    let num = 2 * g - 2 + n + d / q;
    (num >= 0 && num % r == 0).then(|| (num / r) as u32)
}

/// Disconnected number `⟨ (α_q/q)^{d/q}/(d/q)! · F_{r+1}^m / (m!(r+1)^m) · Π α_{-μ_i}/μ_i ⟩`.
pub fn disconnected_hurwitz(key: &HurwitzKey) -> Result<Rational> {
    HurwitzTable::new(key.q, key.r).disconnected(key)
}

/// Connected number, by inclusion-exclusion over set partitions of the
/// (labelled) parts of `μ`. Each block carries its own genus, so the numbers
/// of completed cycles of the blocks add up to `m`.
pub fn connected_hurwitz(key: &HurwitzKey) -> Result<Rational> {
    HurwitzTable::new(key.q, key.r).connected(key)
}

/// Memoizing evaluator for fixed `(q, r)`. Owned by one task at a time.
pub struct HurwitzTable {
    q: u32,
    r: u32,
    disc: HashMap<(u32, Vec<u32>), Rational>,
    conn: HashMap<(u32, Vec<u32>), Rational>,
    gamma: HashMap<u32, FockVector>,
}

impl HurwitzTable {
    pub fn new(q: u32, r: u32) -> Self {
        assert!(q >= 1 && r >= 1);
        Self { q, r, disc: HashMap::new(), conn: HashMap::new(), gamma: HashMap::new() }
    }

    pub fn qr(&self) -> (u32, u32) {
        (self.q, self.r)
    }

    pub fn disconnected(&mut self, key: &HurwitzKey) -> Result<Rational> {
        assert_eq!((key.q, key.r), (self.q, self.r));
        let m = key.m()?;
        Ok(self.disconnected_raw(key.mu.parts(), m))
    }

    pub fn connected(&mut self, key: &HurwitzKey) -> Result<Rational> {
        assert_eq!((key.q, key.r), (self.q, self.r));
        let m = key.m()?;
        Ok(self.connected_rec(key.mu.parts(), m))
    }

    /// `α_{-q}^{d/q} |0⟩`.
    fn gamma_vector(&mut self, d: u32) -> FockVector {
        if let Some(v) = self.gamma.get(&d) {
            return v.clone();
        }
        let v = if d == 0 {
            FockVector::vacuum()
        } else {
            apply_alpha_neg(self.q, &self.gamma_vector(d - self.q))
        };
        self.gamma.insert(d, v.clone());
        v
    }

    /// The wedge correlator for `m` completed cycles; the genus is implicit
    /// (and may be negative for disconnected covers).
    fn disconnected_raw(&mut self, parts: &[u32], m: u32) -> Rational {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.disc.get(&(m, sorted.clone())) {
            return v.clone();
        }
        let (q, r) = (self.q, self.r);
        let d: u32 = parts.iter().sum();
        let mut v = FockVector::vacuum();
        for &part in &sorted {
            v = apply_alpha_neg(part, &v);
        }
        let rp1 = r + 1;
        let v = v.map_diagonal(|lam| {
            let p = f_operator_eigenvalue(rp1, lam) / rat_int(rp1 as i64);
            (0..m).fold(Rational::one(), |acc, _| acc * &p)
        });
        let w = self.gamma_vector(d);
        let parts_prod: Rational = parts.iter().map(|&p| rat_int(p as i64)).product();
        let qpow = (0..d / q).fold(Rational::one(), |acc, _| acc * rat_int(q as i64));
        let value = w.pair(&v) / (parts_prod * qpow * factorial(d / q) * factorial(m));
        self.disc.insert((m, sorted), value.clone());
        value
    }

    fn connected_rec(&mut self, parts: &[u32], m: u32) -> Rational {
        let (q, r) = (self.q, self.r);
        let mut sorted = parts.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.conn.get(&(m, sorted.clone())) {
            return v.clone();
        }
        let mut value = self.disconnected_raw(&sorted, m);
        let n = parts.len();
        // split off the block containing part 0; `mask` marks the parts outside it
        for mask in 1u32..(1 << (n - 1)) {
            let rest: Vec<u32> = (1..n).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| parts[i]).collect();
            let first: Vec<u32> = core::iter::once(parts[0])
                .chain((1..n).filter(|i| mask >> (i - 1) & 1 == 0).map(|i| parts[i]))
                .collect();
            let d_first: u32 = first.iter().sum();
            let d_rest: u32 = rest.iter().sum();
            if !d_first.is_multiple_of(q) || !d_rest.is_multiple_of(q) {
                continue;
            }
            for m_first in 0..=m {
                // the block must have a genuine genus g >= 0
                let twice_g = (r * m_first) as i64 - first.len() as i64 - (d_first / q) as i64 + 2;
                if twice_g < 0 || twice_g % 2 != 0 {
                    continue;
                }
                let a = self.connected_rec(&first, m_first);
                if a.is_zero() {
                    continue;
                }
                value -= a * self.disconnected_raw(&rest, m - m_first);
            }
        }
        self.conn.insert((m, sorted), value.clone());
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn small_values() {
        assert_eq!(disconnected_hurwitz(&HurwitzKey::new(0, &[1], 1, 1)).unwrap(), rat(1, 1));
        assert_eq!(disconnected_hurwitz(&HurwitzKey::new(0, &[2], 1, 1)).unwrap(), rat(1, 2));
        assert_eq!(disconnected_hurwitz(&HurwitzKey::new(1, &[1], 1, 1)).unwrap(), rat(0, 1));
    }

    #[test]
    fn one_part_connected_equals_disconnected() {
        for d in 1..6 {
            for r in 1..4 {
                for g in 0..3 {
                    let k = HurwitzKey::new(g, &[d], 1, r);
                    if k.is_valid() {
                        assert_eq!(connected_hurwitz(&k).unwrap(), disconnected_hurwitz(&k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn classical_one_part_genus_zero() {
        // minimal transitive factorizations of a d-cycle: d^{d-2}, hence d^{d-3}/(d-1)!
        for d in 1..8u32 {
            let k = HurwitzKey::new(0, &[d], 1, 1);
            let expected = Rational::new((d as i64).pow(d).into(), ((d as i64).pow(3)).into()) / factorial(d - 1);
            assert_eq!(connected_hurwitz(&k).unwrap(), expected);
        }
    }

    #[test]
    fn invalid_key_rejected() {
        assert!(matches!(disconnected_hurwitz(&HurwitzKey::new(0, &[2], 1, 2)), Err(Error::IntegralityViolation(_))));
    }
}
