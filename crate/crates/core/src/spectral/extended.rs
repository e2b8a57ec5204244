use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::curve::LocalR;
use super::global::GlobalRat;
use super::local::{expand_local, local_pole_bound, LocalSeries, Slot};
use super::loops::{regularized_delta_delta, with_deck, LoopReport};
use super::recursion::CorrelatorStore;
use crate::arith::{factorial, Rational};
use crate::error::{Error, Result};

/// One factor of a disconnected correlator: the `w` points it contains (with
/// their `D^{2α}` exponents), the spectators, and its genus.
#[derive(Clone, Debug)]
struct Block {
    genus: u32,
    ws: Vec<u32>,
    zs: Vec<usize>,
}

/// All set partitions of `0..m`, as block labels per element.
fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, m: usize, labels: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if i == m {
            out.push(labels.clone());
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            go(i + 1, m, labels, blocks.max(b + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, &mut Vec::new(), 0, &mut out);
    out
}

/// Weak compositions of `total` into `parts` parts.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Words of length `len` over `0..base`.
fn words(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| (0..base).map(move |b| [w.clone(), vec![b]].concat())).collect();
    }
    out
}

/// Pole bound of a block, used to size the precision of the others.
fn block_bound(store: &mut CorrelatorStore, b: &Block) -> Result<i64> {
    let size = b.ws.len() + b.zs.len();
    if b.genus == 0 && b.ws.len() == 2 && size == 2 {
        return Ok(4 + 2 * b.ws.iter().sum::<u32>() as i64);
    }
    let w = block_function(store, b)?;
    let slots: Vec<Slot> = (0..size).map(|i| if i < b.ws.len() { Slot::Local(store.curve().t()) } else { Slot::Spectator(0) }).collect();
    Ok(local_pole_bound(&w, &slots))
}

/// `Π_{w} D_w^{2α_w} W̃_{g, |M|+|K|}(w_M, z_K)` as a rational function, `w`s first.
fn block_function(store: &mut CorrelatorStore, b: &Block) -> Result<GlobalRat> {
    let n = store.curve().n();
    let mut f = store.w(b.genus, b.ws.len() + b.zs.len())?;
    for (i, &d) in b.ws.iter().enumerate() {
        for _ in 0..d {
            f = f.d_op(i, n);
        }
    }
    Ok(f)
}

/// `Π_w restr_{w=z} D_w^{2α_w} Δ_w` of one block, as a series in `t`.
fn block_value(store: &mut CorrelatorStore, b: &Block, sigma: &LocalR, nvars: usize, prec: i64) -> Result<LocalSeries> {
    let curve = store.curve();
    let size = b.ws.len() + b.zs.len();
    if b.genus == 0 && b.ws.len() == 2 && size == 2 {
        return regularized_delta_delta(&curve, b.ws[0], b.ws[1], sigma, nvars, prec);
    }
    let f = block_function(store, b)?;
    let mut acc: Option<LocalSeries> = None;
    for mask in 0u32..(1 << b.ws.len()) {
        let mut slots = Vec::with_capacity(size);
        for i in 0..b.ws.len() {
            slots.push(Slot::Local(if mask & (1 << i) == 0 { curve.t() } else { sigma.clone() }));
        }
        slots.extend(b.zs.iter().map(|&k| Slot::Spectator(k)));
        let mut term = expand_local(&curve, &f, &slots, nvars, prec)?;
        if mask.count_ones() % 2 == 1 {
            term = term.scale_rat(&-Rational::one());
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term, curve.n()),
        });
    }
    Ok(acc.expect("a block has at least one w"))
}

/// Terms of the extended quadratic loop expression for `(g, N, n)`: a
/// coefficient and the blocks of one product.
fn terms(g: u32, big_n: u32, n: usize) -> Vec<(Rational, Vec<Block>)> {
    let mut out = Vec::new();
    for k in 1..=big_n as usize {
        let m = 2 * k;
        let excess = big_n - k as u32;
        if excess > g {
            continue;
        }
        let genus = g - excess;
        for alpha in compositions(excess, m) {
            let mut coeff = Rational::one() / factorial(m as u32);
            for &a in &alpha {
                coeff /= factorial(2 * a + 1);
            }
            for labels in set_partitions(m) {
                let l = labels.iter().max().map_or(0, |x| x + 1);
                // Σ g_j = genus - m + l
                let Some(gsum) = (genus as i64 - m as i64 + l as i64).try_into().ok() else {
                    continue;
                };
                for assign in words(l, n) {
                    for genera in compositions(gsum, l) {
                        let mut blocks: Vec<Block> =
                            genera.iter().map(|&gg| Block { genus: gg, ws: Vec::new(), zs: Vec::new() }).collect();
                        for (w, &lab) in labels.iter().enumerate() {
                            blocks[lab].ws.push(2 * alpha[w]);
                        }
                        for (z, &lab) in assign.iter().enumerate() {
                            blocks[lab].zs.push(z);
                        }
                        if blocks.iter().all(|b| b.ws.len() + b.zs.len() >= 1) {
                            out.push((coeff.clone(), blocks));
                        }
                    }
                }
            }
        }
    }
    out
}

/// The extended quadratic loop expression for `(g, N, n)` at the generic
/// critical point, known below `prec`.
pub fn extended_qle_to(store: &mut CorrelatorStore, g: u32, big_n: u32, n: usize, prec: i64) -> Result<LoopReport> {
    let curve = store.curve();
    let all = terms(g, big_n, n);
    // compute the ingredients first
    for (_, blocks) in &all {
        for b in blocks {
            let size = b.ws.len() + b.zs.len();
            if (b.genus, size) != (0, 1) {
                store.density(b.genus, size)?;
            }
        }
    }
    let mut bounds = Vec::with_capacity(all.len());
    for (_, blocks) in &all {
        let mut v = Vec::new();
        for b in blocks {
            v.push(block_bound(store, b)?);
        }
        bounds.push(v);
    }
    let start = 6 * g as i64 + 2 * n as i64 + 8 + prec;
    with_deck(store, start, |store, sigma, _| {
        let mut acc = LocalSeries::zero(&curve, n, prec);
        for ((coeff, blocks), bs) in all.iter().zip(&bounds) {
            let total: i64 = bs.iter().sum();
            let mut prod: Option<LocalSeries> = None;
            for (b, bb) in blocks.iter().zip(bs) {
                let v = block_value(store, b, sigma, n, prec + total - bb)?;
                prod = Some(match prod {
                    None => v,
                    Some(p) => p.mul(&v),
                });
            }
            let term = prod.expect("nonempty product").scale_rat(coeff);
            if term.prec() < prec {
                return Err(Error::TruncationUnderflow { requested: prec, available: term.prec() });
            }
            acc = acc.add(&term.truncate(prec), curve.n());
        }
        Ok(LoopReport { expression: acc })
    })
}

/// Holomorphicity of the extended quadratic loop expression at the critical
/// points.
pub fn extended_qle_probe(store: &mut CorrelatorStore, g: u32, big_n: u32, n: usize) -> Result<LoopReport> {
    extended_qle_to(store, g, big_n, n, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{check_quadratic_loop_to, SpectralCurve};

    #[test]
    fn partition_counts() {
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(words(2, 3).len(), 8);
    }

    #[test]
    fn n1_is_the_quadratic_loop() {
        let mut s = CorrelatorStore::new(SpectralCurve::new(1, 1));
        for (g, n) in [(1, 0), (0, 1), (1, 1)] {
            let ext = extended_qle_to(&mut s, g, 1, n, 2).unwrap();
            let qle = check_quadratic_loop_to(&mut s, g, n, 2).unwrap();
            assert!(ext.passed());
            assert!(ext.expression.prec() >= 2);
            assert!(ext.expression.agrees_with(&qle.delta.expression, 1), "({g},{n})");
        }
    }

    #[test]
    fn n2_genus_one_lambert() {
        let mut s = CorrelatorStore::new(SpectralCurve::new(1, 1));
        let rep = extended_qle_probe(&mut s, 1, 2, 0).unwrap();
        assert!(rep.passed(), "{:?}", rep.principal_part());
    }

    #[test]
    fn corrupted_omega11_fails_n2() {
        // (1, 2, 0) only involves W_{1,1} and y
        let mut s = CorrelatorStore::new(SpectralCurve::new(1, 1));
        let f = s.density(1, 1).unwrap();
        let bump = GlobalRat::new(crate::spectral::QPoly::monomial(1, vec![1], crate::arith::rat(1, 7)), vec![f.pden()[0]]);
        s.replace(1, 1, f.add(&bump, 1));
        assert!(!extended_qle_probe(&mut s, 1, 2, 0).unwrap().passed());
    }
}
