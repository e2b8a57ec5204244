use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::operator::q_operator_terms;
use super::ratfn::{Poly, RatFn};
use crate::arith::{factorial, rat_int, MultiSeries, Rational};
use crate::chiodo::bernoulli_number;
use crate::error::{Error, Result};
use crate::wedge::{free_energy_into, HurwitzTable};

/// Supplies `H_{g,n}` truncated at total degree `cap` (all variables `>= 1`).
pub trait FreeEnergySource {
    fn q(&self) -> u32;
    fn r(&self) -> u32;
    fn cap(&self) -> u32;
    fn series(&mut self, g: u32, n: usize) -> Result<MultiSeries>;
}

/// Free energies straight from the wedge formula.
pub struct WedgeSource {
    table: HurwitzTable,
    cap: u32,
    cache: BTreeMap<(u32, usize), MultiSeries>,
}

impl WedgeSource {
    pub fn new(q: u32, r: u32, cap: u32) -> Self {
        Self { table: HurwitzTable::new(q, r), cap, cache: BTreeMap::new() }
    }
}

pub(crate) fn total_capped(n: usize, cap: u32) -> MultiSeries {
    let vars = (1..=n).map(|i| format!("x{i}")).collect();
    MultiSeries::new(vars, alloc::vec![cap; n], Some(cap))
}

impl FreeEnergySource for WedgeSource {
    fn q(&self) -> u32 {
        self.table.qr().0
    }
    fn r(&self) -> u32 {
        self.table.qr().1
    }
    fn cap(&self) -> u32 {
        self.cap
    }
    fn series(&mut self, g: u32, n: usize) -> Result<MultiSeries> {
        if let Some(s) = self.cache.get(&(g, n)) {
            return Ok(s.clone());
        }
        let s = free_energy_into(&mut self.table, g, total_capped(n, self.cap));
        self.cache.insert((g, n), s.clone());
        Ok(s)
    }
}

/// Which constant `H̃_{g,n} - H_{g,n}` is used when `2g - 2 + n = r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ShiftConvention {
    /// `H̃ = H - r! (2^{1-2g} - 1) B_{2g} / (2g)!`, the reference form.
    #[default]
    Reference,
    /// The constant balanced by the diagonal parts of the right-hand side:
    /// `(-1)^r` times the reference one, and zero for `n = 1` with `r` odd.
    SeriesConsistent,
}

impl ShiftConvention {
    pub fn shift(self, g: u32, n: usize, r: u32) -> Rational {
        let reference = shift_constant(g, n, r);
        match self {
            ShiftConvention::Reference => reference,
            ShiftConvention::SeriesConsistent if n == 1 && r % 2 == 1 => Rational::zero(),
            ShiftConvention::SeriesConsistent if r % 2 == 1 => -reference,
            ShiftConvention::SeriesConsistent => reference,
        }
    }
}

/// The reference constant `r! (2^{1-2g} - 1) B_{2g} / (2g)!` subtracted from
/// `H_{g,n}` when `2g - 2 + n = r`, zero otherwise.
pub fn shift_constant(g: u32, n: usize, r: u32) -> Rational {
    if 2 * g as i64 - 2 + n as i64 != r as i64 {
        return Rational::zero();
    }
    let two_pow = (0..2 * g).fold(Rational::one(), |a, _| a * rat_int(2));
    factorial(r) * (rat_int(2) / two_pow - Rational::one()) * bernoulli_number(2 * g) / factorial(2 * g)
}

/// Surjections of `0..m` onto `0..l`, as block labels.
fn surjections(m: usize, l: usize) -> Vec<Vec<usize>> {
    all_maps(m, l).into_iter().filter(|f| (0..l).all(|b| f.contains(&b))).collect()
}

fn all_maps(m: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..m {
        out = out.into_iter().flat_map(|f: Vec<usize>| (0..l).map(move |b| [f.clone(), alloc::vec![b]].concat())).collect();
    }
    out
}

/// Weak compositions of `total` into `parts` non-negative parts.
fn genus_splits(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { alloc::vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in genus_splits(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The factor `Π_{i∈M} D_{ξ_i}^{a_i} H̃_{g', |M|+|K|}(ξ_M, x_K)` with `ξ_i = x_k`.
fn factor(
    src: &mut dyn FreeEnergySource,
    n: usize,
    g: u32,
    powers: &[u32],
    others: &[usize],
    k: usize,
) -> Result<RatFn> {
    let cap = src.cap();
    let arity = powers.len() + others.len();
    let h = src.series(g, arity)?;
    let mut num = Poly::default();
    for (e, c) in h.terms() {
        let mut coef = c.clone();
        let mut x = alloc::vec![0u32; n];
        for (slot, &a) in powers.iter().enumerate() {
            let base = rat_int(e[slot] as i64);
            coef *= (0..a).fold(Rational::one(), |acc, _| acc * &base);
            x[k] += e[slot];
        }
        for (t, &idx) in others.iter().enumerate() {
            x[idx] += e[powers.len() + t];
        }
        num.add_term(x, coef);
    }
    let mut f = RatFn::from_poly(num, cap);
    if g == 0 && powers.len() == 1 && others.len() == 1 {
        f = f.add(&singular_part(n, k, others[0], powers[0], cap));
    }
    Ok(f)
}

/// `D_ξ^{a} log((ξ - x')/(ξ x'))` at `ξ = x_k`, i.e. `D_ξ^{a-1} [x'/(ξ - x')]`.
fn singular_part(n: usize, k: usize, other: usize, a: u32, cap: u32) -> RatFn {
    let mut e = alloc::vec![0u32; n];
    e[other] = 1;
    let mut num = Poly::default();
    num.add_term(e, if k < other { Rational::one() } else { -Rational::one() });
    let mut f = RatFn::from_poly(num, cap);
    f.den.insert((k.min(other), k.max(other)), 1);
    for _ in 1..a {
        f = f.euler(k);
    }
    f
}

/// Right-hand side of the spin cut-and-join equation for `H_{g,n}`, as a
/// series truncated at total degree `src.cap()`. Fails with `PoleEscape` if
/// the diagonal poles do not cancel.
pub fn cut_and_join_rhs(src: &mut dyn FreeEnergySource, g: u32, n: usize) -> Result<MultiSeries> {
    let r = src.r();
    let cap = src.cap();
    let mut acc = RatFn::zero(cap);
    for m in 1..=(r + 1) as usize {
        if !(r as usize + 1 - m).is_multiple_of(2) {
            continue;
        }
        let d = (r + 1 - m as u32) / 2;
        let q_terms = q_operator_terms(d, m);
        let m_fact = factorial(m as u32);
        for k in 0..n {
            let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
            for l in 1..=m {
                let genus_total = g as i64 - m as i64 + l as i64 - d as i64;
                if genus_total < 0 {
                    continue;
                }
                let weight_l = Rational::one() / (m_fact.clone() * factorial(l as u32));
                for mblocks in surjections(m, l) {
                    for kblocks in all_maps(others.len(), l) {
                        for gs in genus_splits(genus_total as u32, l) {
                            for (b, cs, w) in &q_terms {
                                let mut prod: Option<RatFn> = None;
                                for j in 0..l {
                                    let powers: Vec<u32> =
                                        (0..m).filter(|&i| mblocks[i] == j).map(|i| 2 * cs[i] + 1).collect();
                                    let ks: Vec<usize> =
                                        (0..others.len()).filter(|&t| kblocks[t] == j).map(|t| others[t]).collect();
                                    let f = factor(src, n, gs[j], &powers, &ks, k)?;
                                    prod = Some(match prod {
                                        None => f,
                                        Some(p) => p.mul(&f),
                                    });
                                }
                                let mut term = prod.expect("l >= 1");
                                if term.is_zero() {
                                    continue;
                                }
                                for _ in 0..2 * b {
                                    term = term.euler(k);
                                }
                                acc = acc.add(&term.scale(&(w * &weight_l)));
                            }
                        }
                    }
                }
            }
        }
    }
    let reduced = acc.reduce();
    if !reduced.den.is_empty() {
        return Err(Error::PoleEscape(format!("cut-and-join ({g},{n}): diagonal pole survives")));
    }
    let mut out = total_capped(n, cap);
    for (e, c) in reduced.num.terms {
        out.add_term(e, c);
    }
    Ok(out)
}

fn lhs_scalar(size: u32, chi: i64, q: u32, r: u32) -> Rational {
    (rat_int(chi) + Rational::new((size as i64).into(), (q as i64).into())) / (rat_int(r as i64) * factorial(r))
}

/// `(B_{g,n}/r!) H̃_{g,n}`, the left-hand side.
pub fn cut_and_join_lhs(h: &MultiSeries, g: u32, n: usize, q: u32, r: u32, shift: ShiftConvention) -> MultiSeries {
    let cap = h.total_cap().unwrap_or(u32::MAX);
    let mut out = total_capped(n, cap);
    let chi = 2 * g as i64 - 2 + n as i64;
    for (e, c) in h.terms() {
        out.add_term(e.clone(), lhs_scalar(e.iter().sum(), chi, q, r) * c);
    }
    out.add_term(alloc::vec![0; n], -lhs_scalar(0, chi, q, r) * shift.shift(g, n, r));
    out
}

/// `LHS - RHS` of the cut-and-join equation with every `H` from `src`.
pub fn verify_cut_and_join_with(
    src: &mut dyn FreeEnergySource,
    g: u32,
    n: usize,
    shift: ShiftConvention,
) -> Result<MultiSeries> {
    let h = src.series(g, n)?;
    let lhs = cut_and_join_lhs(&h, g, n, src.q(), src.r(), shift);
    let rhs = cut_and_join_rhs(src, g, n)?;
    Ok(lhs.sub(&rhs))
}

/// Residual of the cut-and-join equation at total degree `<= degree`, with
/// all free energies taken from the wedge formula and the reference shift.
pub fn verify_cut_and_join(g: u32, n: usize, q: u32, r: u32, degree: u32) -> Result<MultiSeries> {
    let mut src = WedgeSource::new(q, r, degree);
    verify_cut_and_join_with(&mut src, g, n, ShiftConvention::Reference)
}

/// Free energies produced by the cut-and-join recursion itself. Only
/// `H_{0,1}` and `H_{0,2}` are read from the wedge formula.
pub struct SolverSource {
    base: WedgeSource,
    solved: BTreeMap<(u32, usize), MultiSeries>,
}

impl SolverSource {
    pub fn new(q: u32, r: u32, cap: u32) -> Self {
        Self { base: WedgeSource::new(q, r, cap), solved: BTreeMap::new() }
    }

    fn solve(&mut self, g: u32, n: usize) -> Result<MultiSeries> {
        let (q, r, cap) = (self.q(), self.r(), self.cap());
        let chi = 2 * g as i64 - 2 + n as i64;
        let mut h = total_capped(n, cap);
        // The right-hand side at total degree D only sees H_{g,n} below D,
        // so each pass fixes at least one more degree.
        for _ in 0..=cap + 1 {
            self.solved.insert((g, n), h.clone());
            let rhs = cut_and_join_rhs(self, g, n)?;
            let mut next = total_capped(n, cap);
            for (e, c) in rhs.terms() {
                let size: u32 = e.iter().sum();
                if size == 0 {
                    continue;
                }
                let s = lhs_scalar(size, chi, q, r);
                if s.is_zero() {
                    return Err(Error::NonInvertibleMonomial(format!("({g},{n}) exponent {e:?}")));
                }
                next.add_term(e.clone(), c / s);
            }
            if next == h {
                break;
            }
            h = next;
        }
        self.solved.insert((g, n), h.clone());
        Ok(h)
    }
}

impl FreeEnergySource for SolverSource {
    fn q(&self) -> u32 {
        self.base.q()
    }
    fn r(&self) -> u32 {
        self.base.r()
    }
    fn cap(&self) -> u32 {
        self.base.cap()
    }
    fn series(&mut self, g: u32, n: usize) -> Result<MultiSeries> {
        if g == 0 && n <= 2 {
            return self.base.series(g, n);
        }
        match self.solved.get(&(g, n)) {
            Some(s) => Ok(s.clone()),
            None => self.solve(g, n),
        }
    }
}

/// `H_{g,n}` up to total degree `degree` from the cut-and-join recursion.
pub fn cut_and_join_solve(g: u32, n: usize, q: u32, r: u32, degree: u32) -> Result<MultiSeries> {
    SolverSource::new(q, r, degree).series(g, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wedge::{HurwitzKey, HurwitzTable};

    fn h(t: &mut HurwitzTable, g: i64, mu: &[u32]) -> Rational {
        if g < 0 {
            return Rational::zero();
        }
        t.connected(&HurwitzKey::new(g as u32, mu, t.qr().0, t.qr().1)).unwrap_or_else(|_| Rational::zero())
    }

    fn rhs_coeff(q: u32, r: u32, g: u32, mu: u32, cap: u32) -> Rational {
        let mut src = WedgeSource::new(q, r, cap);
        cut_and_join_rhs(&mut src, g, 1).unwrap().get(&[mu])
    }

    #[test]
    fn classical_one_point_step() {
        for q in 1..=2 {
            let mut t = HurwitzTable::new(q, 1);
            for g in 1..=2i64 {
                for mu in 1..=6u32 {
                    let mut expected = Rational::zero();
                    for a in 1..mu {
                        let b = mu - a;
                        let mut s = h(&mut t, g - 1, &[a, b]);
                        for g1 in 0..=g {
                            s += h(&mut t, g1, &[a]) * h(&mut t, g - g1, &[b]);
                        }
                        expected += s * rat_int((a * b) as i64) / rat_int(2);
                    }
                    assert_eq!(rhs_coeff(q, 1, g as u32, mu, 6), expected, "q={q} g={g} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn four_term_spin_display() {
        let mut t = HurwitzTable::new(1, 2);
        for g in 1..=3i64 {
            for mu in 1..=6u32 {
                let mut disp = rat_int((2 * mu.pow(3) - mu) as i64) / rat_int(12) * h(&mut t, g - 1, &[mu]);
                for a in 1..mu {
                    for b in 1..(mu - a) {
                        let c = mu - a - b;
                        let abc = rat_int((a * b * c) as i64);
                        disp += &abc * h(&mut t, g - 2, &[a, b, c]) / rat_int(3);
                        for g1 in 0..g {
                            disp += &abc * h(&mut t, g1, &[a]) * h(&mut t, g - 1 - g1, &[b, c]);
                        }
                        for g1 in 0..=g {
                            for g2 in 0..=(g - g1) {
                                disp += &abc
                                    * h(&mut t, g1, &[a])
                                    * h(&mut t, g2, &[b])
                                    * h(&mut t, g - g1 - g2, &[c])
                                    / rat_int(3);
                            }
                        }
                    }
                }
                // The display carries B_{g,n} without the 1/r! of the general form.
                assert_eq!(rhs_coeff(1, 2, g as u32, mu, 6) * rat_int(2), disp, "g={g} mu={mu}");
            }
        }
    }

    #[test]
    fn residual_vanishes_with_consistent_shift() {
        for (g, n, q, r) in [(0, 3, 1, 1), (1, 1, 1, 2), (1, 2, 2, 2), (1, 1, 1, 1)] {
            let mut src = WedgeSource::new(q, r, 6);
            let res = verify_cut_and_join_with(&mut src, g, n, ShiftConvention::SeriesConsistent).unwrap();
            assert!(res.is_empty(), "({g},{n}) q={q} r={r}: {res:?}");
        }
    }

    #[test]
    fn reference_shift_leaves_constant_only_for_odd_r() {
        let res = verify_cut_and_join(0, 3, 1, 1, 6).unwrap();
        let terms: Vec<_> = res.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!((terms[0].0.clone(), terms[0].1.clone()), (alloc::vec![0, 0, 0], rat_int(-2)));
        assert!(verify_cut_and_join(1, 1, 1, 2, 6).unwrap().is_empty());
        assert!(verify_cut_and_join(1, 2, 2, 2, 6).unwrap().is_empty());
    }

    #[test]
    fn reference_shift_values() {
        assert_eq!(shift_constant(0, 3, 1), rat_int(1));
        assert_eq!(shift_constant(1, 1, 1), Rational::new((-1).into(), 24.into()));
        assert_eq!(shift_constant(2, 1, 3), Rational::new(7.into(), 960.into()));
        assert!(shift_constant(0, 4, 1).is_zero());
        assert_eq!(ShiftConvention::SeriesConsistent.shift(1, 1, 1), Rational::zero());
        assert_eq!(ShiftConvention::SeriesConsistent.shift(1, 3, 3), Rational::new(1.into(), 4.into()));
    }

    #[test]
    fn solver_matches_wedge() {
        for (g, n, q, r) in [(0, 3, 1, 1), (1, 1, 2, 2), (1, 2, 1, 2), (2, 1, 1, 1)] {
            let solved = cut_and_join_solve(g, n, q, r, 6).unwrap();
            let wedge = WedgeSource::new(q, r, 6).series(g, n).unwrap();
            assert_eq!(solved, wedge, "({g},{n}) q={q} r={r}");
        }
    }
}
