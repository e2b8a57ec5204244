use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{factorial, Rational};

/// Integer partition, parts weakly decreasing and strictly positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `k`.
    pub fn multiplicity(&self, k: u32) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }

    /// `Π m_k!`, the order of the group permuting equal parts.
    pub fn aut(&self) -> Rational {
        let mut acc = Rational::one();
        let mut i = 0;
        while i < self.0.len() {
            let j = self.0[i..].iter().take_while(|&&p| p == self.0[i]).count();
            acc *= factorial(j as u32);
            i += j;
        }
        acc
    }

    /// `z_λ = Π k^{m_k} m_k!`, the centralizer order of a permutation of this type.
    pub fn z(&self) -> Rational {
        let prod: BigInt = self.0.iter().map(|&p| BigInt::from(p)).product();
        self.aut() * Rational::from_integer(prod)
    }

    /// Appends `count` parts equal to one.
    pub fn with_ones(&self, count: u32) -> Self {
        let mut parts = self.0.clone();
        parts.extend(core::iter::repeat_n(1, count as usize));
        Self(parts)
    }

    pub fn without_ones(&self) -> Self {
        Self(self.0.iter().copied().filter(|&p| p > 1).collect())
    }

    /// Beta set with `beads` beads: `λ_i + beads - i` for `i = 1..=beads`, decreasing.
    pub fn beta_set(&self, beads: usize) -> Vec<i64> {
        debug_assert!(beads >= self.0.len());
        (1..=beads)
            .map(|i| self.0.get(i - 1).copied().unwrap_or(0) as i64 + (beads - i) as i64)
            .collect()
    }

    /// Inverse of [`Partition::beta_set`]; the beads need not be sorted.
    pub fn from_beta(mut beads: Vec<i64>) -> Self {
        beads.sort_unstable_by(|a, b| b.cmp(a));
        let n = beads.len() as i64;
        Self::new(beads.iter().enumerate().map(|(i, b)| (b - (n - 1 - i as i64)) as u32).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(n, n, &mut cur, &mut out);
        out
    }

    pub fn all_up_to(n: u32) -> Vec<Partition> {
        (0..=n).flat_map(Self::all_of_size).collect()
    }
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

impl From<&[u32]> for Partition {
    fn from(parts: &[u32]) -> Self {
        Self::new(parts.to_vec())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
