//! Brute-force evaluation of Hurwitz numbers by convolution in the group
//! algebra of `S_d`. Used only as an independent check of the wedge formula.

use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{completed_cycle, HurwitzKey, Partition};
use crate::arith::{factorial, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_BOUND: usize = 7;

type Perm = Vec<u8>;

fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..d as u8).collect();
    heap_permute(d, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Perm, out: &mut Vec<Perm>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

fn cycles(p: &[u8]) -> Vec<Vec<u8>> {
    let mut seen = alloc::vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i as u8);
            i = p[i] as usize;
        }
        out.push(c);
    }
    out
}

fn cycle_type(p: &[u8]) -> Partition {
    Partition::new(cycles(p).iter().map(|c| c.len() as u32).collect())
}

fn pack(p: &[u8]) -> u64 {
    p.iter().enumerate().fold(0u64, |acc, (i, &x)| acc | (x as u64) << (4 * i))
}

fn unpack(code: u64, d: usize) -> Perm {
    (0..d).map(|i| (code >> (4 * i) & 0xf) as u8).collect()
}

/// `x ∘ y` on packed permutations.
fn compose(x: u64, y: &[u8]) -> u64 {
    y.iter().enumerate().fold(0u64, |acc, (i, &yi)| acc | (x >> (4 * yi as usize) & 0xf) << (4 * i))
}

/// Block labels packed as the minimal element of each point's block.
fn merge_blocks(labels: u64, d: usize, set: &[u8]) -> u64 {
    let mut lab: Vec<u8> = (0..d).map(|i| (labels >> (4 * i) & 0xf) as u8).collect();
    let targets: Vec<u8> = set.iter().map(|&i| lab[i as usize]).collect();
    let new = *targets.iter().min().unwrap();
    for l in lab.iter_mut() {
        if targets.contains(l) {
            *l = new;
        }
    }
    pack(&lab)
}

/// One term of the completed cycle acting on `S_d`: a permutation, the set of
/// points lying in its distinguished cycles, and an integer weight.
struct Term {
    perm: Perm,
    distinguished: Vec<u8>,
    weight: i128,
}

fn subsets(items: &[u8], k: usize) -> Vec<Vec<u8>> {
    if k == 0 {
        return alloc::vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut with: Vec<Vec<u8>> = subsets(&items[1..], k - 1);
    for s in with.iter_mut() {
        s.insert(0, items[0]);
    }
    with.extend(subsets(&items[1..], k));
    with
}

/// Terms of `L · C̄_{r+1}` on `S_d`, with `L` the common denominator.
fn completed_cycle_terms(d: usize, r: u32) -> Result<(Vec<Term>, BigInt)> {
    let cc = completed_cycle(r + 1)?;
    let lcm = cc.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut terms = Vec::new();
    for perm in all_perms(d) {
        let cyc = cycles(&perm);
        let support: Vec<u8> = cyc.iter().filter(|c| c.len() > 1).flatten().copied().collect();
        let fixed: Vec<u8> = cyc.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        let shape = cycle_type(&perm).without_ones();
        for (lambda, c) in &cc {
            if lambda.without_ones() != shape {
                continue;
            }
            let w = (c * Rational::from_integer(lcm.clone())).to_integer().to_i128().expect("weight overflow");
            for chosen in subsets(&fixed, lambda.multiplicity(1)) {
                let mut distinguished = support.clone();
                distinguished.extend(chosen);
                terms.push(Term { perm: perm.clone(), distinguished, weight: w });
            }
        }
    }
    Ok((terms, lcm))
}

/// Brute-force Hurwitz number: weighted count of tuples `(σ_1, …, σ_m, γ)`
/// with `γ` of type `(q, …, q)`, the `σ_i` drawn from the completed
/// `(r+1)`-cycle, and product of type `μ` (cycles labelled), divided by
/// `d! m!`. With `connected`, only covers whose monodromy together with the
/// gluing of distinguished cycles is transitive are kept.
pub fn brute_force_hurwitz(key: &HurwitzKey, connected: bool, bound: usize) -> Result<Rational> {
    let m = key.m()?;
    let d = key.mu.size() as usize;
    if d > bound || d > 15 {
        return Err(Error::TooLarge { size: d, bound });
    }
    let (terms, lcm) = completed_cycle_terms(d, key.r)?;
    let gamma_type = Partition::new(alloc::vec![key.q; d / key.q as usize]);
    let singletons = pack(&(0..d as u8).collect::<Vec<_>>());
    let mut states: HashMap<(u64, u64), i128> = HashMap::new();
    for g in all_perms(d) {
        if cycle_type(&g) != gamma_type {
            continue;
        }
        let mut labels = singletons;
        if connected {
            for c in cycles(&g) {
                labels = merge_blocks(labels, d, &c);
            }
        } else {
            labels = 0;
        }
        *states.entry((pack(&g), labels)).or_insert(0) += 1;
    }
    for _ in 0..m {
        let mut next: HashMap<(u64, u64), i128> = HashMap::with_capacity(states.len());
        for (&(p, lab), &w) in &states {
            for t in &terms {
                let np = compose(p, &t.perm);
                let nl = if connected { merge_blocks(lab, d, &t.distinguished) } else { 0 };
                *next.entry((np, nl)).or_insert(0) += w * t.weight;
            }
        }
        next.retain(|_, w| *w != 0);
        states = next;
    }
    let mut total = BigInt::zero();
    for (&(p, lab), &w) in &states {
        if cycle_type(&unpack(p, d)) != key.mu {
            continue;
        }
        if connected && lab != 0 {
            continue;
        }
        total += w;
    }
    let scale = (0..m).fold(BigInt::one(), |acc, _| acc * &lcm);
    Ok(Rational::new(total, scale) * key.mu.aut() / (factorial(d as u32) * factorial(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::wedge::{connected_hurwitz, disconnected_hurwitz};

    #[test]
    fn trivial_values() {
        assert_eq!(brute_force_hurwitz(&HurwitzKey::new(0, &[1], 1, 1), false, 7).unwrap(), rat(1, 1));
        assert_eq!(brute_force_hurwitz(&HurwitzKey::new(0, &[2], 1, 1), false, 7).unwrap(), rat(1, 2));
    }

    #[test]
    fn bound_enforced() {
        let k = HurwitzKey::new(0, &[8], 1, 1);
        assert_eq!(brute_force_hurwitz(&k, false, 7), Err(Error::TooLarge { size: 8, bound: 7 }));
    }

    #[test]
    fn agrees_with_wedge_on_small_keys() {
        for (g, mu, q, r) in [(0, &[3][..], 3, 1), (0, &[1, 1][..], 1, 1), (0, &[1, 1, 1][..], 1, 1), (0, &[2, 1][..], 1, 2)] {
            let k = HurwitzKey::new(g, mu, q, r);
            if !k.is_valid() {
                continue;
            }
            assert_eq!(brute_force_hurwitz(&k, false, 7).unwrap(), disconnected_hurwitz(&k).unwrap(), "{k:?}");
            assert_eq!(brute_force_hurwitz(&k, true, 7).unwrap(), connected_hurwitz(&k).unwrap(), "{k:?}");
        }
    }
}
