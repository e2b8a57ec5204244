use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::curve::{LocalR, SpectralCurve};
use super::global::GlobalRat;
use super::poly::{PolyR, QPoly};
use crate::arith::{binomial, Laurent, Rational, Ring};
use crate::error::{Error, Result};

/// Where a variable of a global function goes when expanding at the generic
/// critical point.
#[derive(Clone, Debug)]
pub enum Slot {
    /// `z = p + s(t)` for a series `s` of valuation one.
    Local(LocalR),
    /// Kept global, as variable `k` of the output.
    Spectator(usize),
}

/// `series(t) / Π_k P(z_k)^{den_k}`, a series in `t` whose coefficients are
/// polynomials in the spectator variables over `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSeries {
    pub series: Laurent<PolyR>,
    pub den: Vec<u32>,
}

impl LocalSeries {
    pub fn nvars(&self) -> usize {
        self.den.len()
    }

    pub fn from_local(c: &LocalR, nvars: usize) -> Self {
        Self { series: lift(c, nvars), den: vec![0; nvars] }
    }

    pub fn zero(curve: &SpectralCurve, nvars: usize, prec: i64) -> Self {
        Self { series: Laurent::zero_series(PolyR::zero(nvars, curve.n()), prec), den: vec![0; nvars] }
    }

    pub fn val(&self) -> i64 {
        self.series.val()
    }

    pub fn prec(&self) -> i64 {
        self.series.prec()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self { series: self.series.truncate(prec), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { series: &self.series * &o.series, den: self.den.iter().zip(&o.den).map(|(a, b)| a + b).collect() }
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        Self { series: self.series.scale_rat(c), den: self.den.clone() }
    }

    pub fn scale_local(&self, c: &LocalR) -> Self {
        Self { series: &self.series * &lift(c, self.nvars()), den: self.den.clone() }
    }

    /// Rewrites over `Π P(z_k)^{den_k}` with `den_k >= self.den_k`.
    pub fn with_den(&self, den: &[u32], n: usize) -> Self {
        let nv = self.nvars();
        let mut factor = QPoly::constant(nv, Rational::one());
        for k in 0..nv {
            assert!(den[k] >= self.den[k]);
            let extra = den[k] - self.den[k];
            if extra > 0 {
                factor = factor.mul(&QPoly::critical(nv, k, n).pow(extra));
            }
        }
        let series = if factor.len() == 1 && factor.terms().all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one()) {
            self.series.clone()
        } else {
            self.series.map(self.series.zero_elem().clone(), |c| c.times_qpoly(&factor))
        };
        Self { series, den: den.to_vec() }
    }

    pub fn add(&self, o: &Self, n: usize) -> Self {
        let den: Vec<u32> = self.den.iter().zip(&o.den).map(|(a, b)| *a.max(b)).collect();
        let a = self.with_den(&den, n);
        let b = o.with_den(&den, n);
        Self { series: &a.series + &b.series, den }
    }

    pub fn sub(&self, o: &Self, n: usize) -> Self {
        self.add(&o.scale_rat(&-Rational::one()), n)
    }

    /// `self(σ(t))` for a series `σ` of valuation one.
    pub fn compose(&self, s: &LocalR) -> Result<Self> {
        Ok(Self { series: self.series.compose(&lift(s, self.nvars()))?, den: self.den.clone() })
    }

    pub fn derivative(&self) -> Self {
        Self { series: self.series.derivative(), den: self.den.clone() }
    }

    /// Nonzero coefficients of negative order; the check is exact because the
    /// spectator denominator is a nonzero polynomial.
    pub fn principal_part(&self) -> Result<Vec<(i64, PolyR)>> {
        if self.series.prec() < 0 {
            return Err(Error::TruncationUnderflow { requested: -1, available: self.series.prec() });
        }
        Ok(self.series.principal_part())
    }

    /// Equality as functions below the smaller of the two precisions.
    pub fn agrees_with(&self, o: &Self, n: usize) -> bool {
        let diff = self.sub(o, n);
        (diff.val()..diff.prec()).all(|k| diff.series.coeff(k).is_ok_and(|c| c.vanishes()))
    }

    pub fn residue(&self) -> Result<PolyR> {
        self.series.coeff(-1)
    }
}

/// Embeds a series over `R` as a series with constant spectator coefficients.
pub(crate) fn lift(c: &LocalR, nvars: usize) -> Laurent<PolyR> {
    let n = c.zero_elem().degree_n();
    c.map(PolyR::zero(nvars, n), |x| PolyR::constant(nvars, x.clone()))
}

/// Total pole order at `t = 0` that `f` can have after the substitution.
pub fn local_pole_bound(f: &GlobalRat, slots: &[Slot]) -> i64 {
    let mut b = 0i64;
    for (i, s) in slots.iter().enumerate() {
        if let Slot::Local(_) = s {
            b += f.pden()[i] as i64;
        }
    }
    for (&(i, j), &e) in f.pairs() {
        if matches!(slots[i], Slot::Local(_)) && matches!(slots[j], Slot::Local(_)) {
            b += e as i64;
        }
    }
    b
}

/// Expands `f(z_0, …)` with each variable placed by `slots`, as a series in
/// `t` known below `prec`. The output has `nvars` spectator variables.
pub fn expand_local(curve: &SpectralCurve, f: &GlobalRat, slots: &[Slot], nvars: usize, prec: i64) -> Result<LocalSeries> {
    assert_eq!(slots.len(), f.nvars());
    let n = curve.n();
    let zero_p = PolyR::zero(nvars, n);
    let work = prec + local_pole_bound(f, slots);
    let locals: Vec<usize> = (0..slots.len()).filter(|&i| matches!(slots[i], Slot::Local(_))).collect();
    let local_series = |i: usize| -> &LocalR {
        match &slots[i] {
            Slot::Local(s) => s,
            Slot::Spectator(_) => unreachable!(),
        }
    };
    for &i in &locals {
        if local_series(i).val() < 1 {
            return Err(Error::BadSeries("local slot must have positive valuation".into()));
        }
    }

    // numerator: group terms by their local exponents
    let mut grouped: BTreeMap<Vec<u32>, QPoly> = BTreeMap::new();
    for (e, c) in f.num().terms() {
        let le: Vec<u32> = locals.iter().map(|&i| e[i]).collect();
        let mut se = vec![0u32; nvars];
        for (i, s) in slots.iter().enumerate() {
            if let Slot::Spectator(k) = s {
                se[*k] += e[i];
            }
        }
        grouped.entry(le).or_insert_with(|| QPoly::zero(nvars)).add_term(se, c.clone());
    }
    let mut power_cache: BTreeMap<(usize, u32), LocalR> = BTreeMap::new();
    let mut num_coeffs: Vec<PolyR> = vec![zero_p.clone(); work.max(0) as usize];
    for (le, spec) in &grouped {
        let mut prod = Laurent::monomial(curve.ring_const(Rational::one()), 0);
        for (slot_idx, &i) in locals.iter().enumerate() {
            let k = le[slot_idx];
            if k == 0 {
                continue;
            }
            let pw = match power_cache.get(&(i, k)) {
                Some(p) => p.clone(),
                None => {
                    let p = curve.power_at(k as i64, local_series(i), work)?;
                    power_cache.insert((i, k), p.clone());
                    p
                }
            };
            prod = (&prod * &pw).truncate(work);
        }
        for (j, slot) in num_coeffs.iter_mut().enumerate() {
            let c = prod.coeff(j as i64)?;
            if c.vanishes() {
                continue;
            }
            slot.add_assign_ref(&PolyR::from_qpoly(spec, &c));
        }
    }
    let mut out = LocalSeries { series: Laurent::new(0, num_coeffs, work, zero_p.clone()), den: vec![0; nvars] };

    // local critical denominators
    for &i in &locals {
        let d = f.pden()[i];
        if d == 0 {
            continue;
        }
        let pval = curve.critical_poly_at(local_series(i))?.truncate(work + 2);
        let inv = pval.inv_to(work + d as i64 + 1)?;
        let term = inv.pow(d).truncate(work);
        out = out.mul(&LocalSeries::from_local(&term, nvars));
    }
    // spectator critical denominators
    for (i, s) in slots.iter().enumerate() {
        if let Slot::Spectator(k) = s {
            out.den[*k] += f.pden()[i];
        }
    }
    // pair denominators
    for (&(i, j), &e) in f.pairs() {
        match (&slots[i], &slots[j]) {
            (Slot::Local(a), Slot::Local(b)) => {
                let diff = (a - b).truncate(work + 2);
                if diff.is_zero() {
                    return Err(Error::BadSeries("pair denominator on the diagonal".into()));
                }
                let inv = diff.inv_to(work + e as i64 + 1)?.pow(e).truncate(work);
                out = out.mul(&LocalSeries::from_local(&inv, nvars));
            }
            (Slot::Local(a), Slot::Spectator(k)) => {
                let factor = spectator_pair(curve, a, *k, e, nvars, work)?;
                out = out.mul(&factor);
            }
            (Slot::Spectator(k), Slot::Local(a)) => {
                // (z_k - z_a)^{-e} = (-1)^e (z_a - z_k)^{-e}
                let mut factor = spectator_pair(curve, a, *k, e, nvars, work)?;
                if e % 2 == 1 {
                    factor = factor.scale_rat(&-Rational::one());
                }
                out = out.mul(&factor);
            }
            (Slot::Spectator(a), Slot::Spectator(b)) => {
                return Err(Error::BadSeries(format!("pair denominator between spectators {a} and {b}")));
            }
        }
    }
    Ok(out.truncate(prec))
}

/// `Π_j f_j` with every factor placed by its own slots, known below `prec`.
/// Each factor is expanded far enough to cover the poles of the others.
pub fn expand_product(curve: &SpectralCurve, factors: &[(&GlobalRat, &[Slot])], nvars: usize, prec: i64) -> Result<LocalSeries> {
    let bounds: Vec<i64> = factors.iter().map(|(f, s)| local_pole_bound(f, s)).collect();
    let total: i64 = bounds.iter().sum();
    let mut acc: Option<LocalSeries> = None;
    for ((f, slots), b) in factors.iter().zip(&bounds) {
        let e = expand_local(curve, f, slots, nvars, prec + total - b)?;
        acc = Some(match acc {
            None => e,
            Some(a) => a.mul(&e),
        });
    }
    let one = || LocalSeries::from_local(&Laurent::monomial(curve.ring_const(Rational::one()), 0), nvars);
    Ok(acc.unwrap_or_else(one).truncate(prec))
}

/// `(p + s - z_k)^{-e}` expanded in `s`, known below `work`.
fn spectator_pair(curve: &SpectralCurve, s: &LocalR, k: usize, e: u32, nvars: usize, work: i64) -> Result<LocalSeries> {
    let n = curve.n();
    // (p - z + u)^{-e} = Σ_m binom(-e, m) u^m (p - z)^{-e-m}, (p - z)^{-1} = -Q(z, p)/P(z)
    let m_max = (work - 1).max(0) as u32;
    let q = PolyR::difference_quotient(nvars, k, n);
    let pk = QPoly::critical(nvars, k, n);
    let mut q_pows = vec![q.pow(e)];
    for _ in 0..m_max {
        let next = q_pows.last().unwrap().times(&q);
        q_pows.push(next);
    }
    let mut p_pows = vec![QPoly::constant(nvars, Rational::one())];
    for _ in 0..m_max {
        let next = p_pows.last().unwrap().mul(&pk);
        p_pows.push(next);
    }
    let mut coeffs = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        // binom(-e, m) = (-1)^m binom(e + m - 1, m)
        let mut c = binomial((e + m) as i64 - 1, m as i64);
        if (e + m + m) % 2 == 1 {
            c = -c;
        }
        coeffs.push(q_pows[m as usize].times_qpoly(&p_pows[(m_max - m) as usize]).scaled(&c));
    }
    let mut den = vec![0; nvars];
    den[k] = e + m_max;
    let in_u = LocalSeries { series: Laurent::new(0, coeffs, m_max as i64 + 1, PolyR::zero(nvars, n)), den };
    in_u.compose(s)
}

/// `1/X'(p + t)` as a local series, known below `prec`.
pub(crate) fn inverse_dx(curve: &SpectralCurve, prec: i64) -> Result<LocalR> {
    let dx = curve.dx_at(&curve.t(), prec + 3)?;
    dx.inv_to(prec + 1).map(|s| s.truncate(prec))
}

/// `D = d/dX` on a series in the coordinate `t = z - p`.
pub fn d_local(curve: &SpectralCurve, f: &LocalSeries) -> Result<LocalSeries> {
    let df = f.derivative();
    let need = df.prec() - df.val() + 1;
    let inv = inverse_dx(curve, need.max(1))?;
    Ok(df.scale_local(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn bergman_with_spectator() {
        // 1/(p + t - z)^2 at t = 0 is Q(z,p)^2 / P(z)^2
        let c = SpectralCurve::new(1, 2);
        let f = GlobalRat::bergman(2, 0, 1);
        let slots = [Slot::Local(c.t()), Slot::Spectator(0)];
        let s = expand_local(&c, &f, &slots, 1, 3).unwrap();
        let c0 = s.series.coeff(0).unwrap();
        let q = PolyR::difference_quotient(1, 0, 2);
        let expected = q.pow(2).times_qpoly(&QPoly::critical(1, 0, 2).pow(s.den[0] - 2));
        assert_eq!(c0, expected);
    }

    #[test]
    fn critical_denominator_has_simple_pole() {
        let c = SpectralCurve::new(1, 1);
        // 1/P(z) = 1/(z - 1) at p = 1
        let f = GlobalRat::new(QPoly::constant(1, Rational::one()), vec![1]);
        let s = expand_local(&c, &f, &[Slot::Local(c.t())], 0, 2).unwrap();
        assert_eq!(s.val(), -1);
        assert_eq!(s.series.coeff(-1).unwrap(), PolyR::constant(0, c.ring_const(rat(1, 1))));
        assert_eq!(s.series.coeff(0).unwrap().len(), 0);
    }

    #[test]
    fn local_derivative_matches_global() {
        let c = SpectralCurve::new(2, 1);
        let n = c.n();
        let f = GlobalRat::new(QPoly::monomial(1, vec![3], rat(1, 1)), vec![1]);
        let slots = [Slot::Local(c.t())];
        let global = expand_local(&c, &f.d_op(0, n), &slots, 0, 4).unwrap();
        let local = d_local(&c, &expand_local(&c, &f, &slots, 0, 8).unwrap()).unwrap().truncate(4);
        assert_eq!(global, local);
    }
}
