use alloc::vec::Vec;

use super::{HurwitzKey, HurwitzTable, Partition};
use crate::arith::MultiSeries;

/// `H_{g,n} = Σ_μ h°_{g;μ} Π x_i^{μ_i}`, every `μ_i <= degree`.
pub fn free_energy(g: u32, n: usize, q: u32, r: u32, degree: u32) -> MultiSeries {
    let mut table = HurwitzTable::new(q, r);
    free_energy_into(&mut table, g, MultiSeries::with_uniform_cap(n, degree))
}

/// Fills the shape of `template` (its variables and truncation) with the
/// connected Hurwitz numbers of genus `g`.
pub fn free_energy_into(table: &mut HurwitzTable, g: u32, template: MultiSeries) -> MultiSeries {
    let (q, r) = table.qr();
    let mut out = template;
    let caps = out.caps().to_vec();
    let mut exps = alloc::vec![1u32; caps.len()];
    if caps.contains(&0) {
        return out;
    }
    loop {
        if out.admits(&exps) {
            let key = HurwitzKey { g, mu: Partition::new(exps.clone()), q, r };
            if let Ok(v) = table.connected(&key) {
                out.add_term(exps.clone(), v);
            }
        }
        if !advance(&mut exps, &caps) {
            break;
        }
    }
    out
}

fn advance(exps: &mut [u32], caps: &[u32]) -> bool {
    for i in (0..exps.len()).rev() {
        if exps[i] < caps[i] {
            exps[i] += 1;
            return true;
        }
        exps[i] = 1;
    }
    false
}

/// All exponent vectors with entries in `1..=cap`.
pub fn exponent_box(n: usize, cap: u32) -> Vec<Vec<u32>> {
    let caps = alloc::vec![cap; n];
    let mut exps = alloc::vec![1u32; n];
    let mut out = Vec::new();
    if cap == 0 {
        return out;
    }
    loop {
        out.push(exps.clone());
        if !advance(&mut exps, &caps) {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wedge::{brute_force_hurwitz, connected_hurwitz};

    #[test]
    fn h03_coefficient_is_the_hurwitz_number() {
        let h = free_energy(0, 3, 1, 1, 2);
        let k = HurwitzKey::new(0, &[1, 1, 1], 1, 1);
        assert_eq!(h.get(&[1, 1, 1]), connected_hurwitz(&k).unwrap());
        assert!(h.is_symmetric());
    }

    #[test]
    fn h11_matches_oracle() {
        let h = free_energy(1, 1, 1, 1, 5);
        for d in 1..=5 {
            let k = HurwitzKey::new(1, &[d], 1, 1);
            assert_eq!(h.get(&[d]), brute_force_hurwitz(&k, true, 7).unwrap());
        }
    }
}
