use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{binomial, rat_int, CriticalRingElem, Rational, Ring};

/// Polynomial in `nvars` variables over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl QPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// `N z_i^N - 1`, whose roots are the critical points.
    pub fn critical(nvars: usize, i: usize, n: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = n as u32;
        let mut p = Self::monomial(nvars, e, rat_int(n as i64));
        p.add_term(vec![0; nvars], -Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * rat_int(e[i] as i64));
            }
        }
        out
    }

    /// Renames variables: variable `i` of `self` becomes variable `map[i]` of
    /// a polynomial in `nvars` variables.
    pub fn embed(&self, map: &[usize], nvars: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Exact quotient by `N z_i^N - 1`, or `None` if it does not divide.
    pub fn div_critical(&self, i: usize, n: usize) -> Option<Self> {
        let mut rem = self.terms.clone();
        let mut quo = Self::zero(self.nvars);
        let inv_n = Rational::one() / rat_int(n as i64);
        loop {
            let top = rem.iter().filter(|(e, _)| e[i] as usize >= n).max_by_key(|(e, _)| e[i]).map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = top else { break };
            // c z^e = (c/N) z^{e-N} (N z^N - 1) + (c/N) z^{e-N}
            let mut lower = e.clone();
            lower[i] -= n as u32;
            let q = &c * &inv_n;
            rem.remove(&e);
            let slot = rem.entry(lower.clone()).or_insert_with(Rational::zero);
            *slot += &q;
            if slot.is_zero() {
                rem.remove(&lower);
            }
            quo.add_term(lower, q);
        }
        if rem.is_empty() {
            Some(quo)
        } else {
            None
        }
    }

    pub fn eval_partial(&self, i: usize, v: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[i];
            f[i] = 0;
            let mut w = c.clone();
            for _ in 0..k {
                w *= v;
            }
            out.add_term(f, w);
        }
        out
    }
}

/// Polynomial in `nvars` variables over `R = Q[p]/(N p^N - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyR {
    nvars: usize,
    n: usize,
    terms: BTreeMap<Vec<u32>, CriticalRingElem>,
}

impl PolyR {
    pub fn zero(nvars: usize, n: usize) -> Self {
        Self { nvars, n, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: CriticalRingElem) -> Self {
        let n = c.degree_n();
        let mut p = Self::zero(nvars, n);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn from_qpoly(q: &QPoly, c: &CriticalRingElem) -> Self {
        let mut p = Self::zero(q.nvars, c.degree_n());
        if c.vanishes() {
            return p;
        }
        for (e, v) in q.terms() {
            p.terms.insert(e.clone(), c.scaled(v));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CriticalRingElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: CriticalRingElem) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                v.add_assign_ref(&c);
                if v.vanishes() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    /// `Q(z_i, p) = (P(z_i) - P(p)) / (z_i - p) = N Σ_k z_i^k p^{N-1-k}`, so
    /// that `1/(z_i - p) = Q(z_i, p) / P(z_i)` in `R`.
    pub fn difference_quotient(nvars: usize, i: usize, n: usize) -> Self {
        let mut out = Self::zero(nvars, n);
        for k in 0..n {
            let mut e = vec![0; nvars];
            e[i] = k as u32;
            out.add_term(e, CriticalRingElem::p_pow(n, (n - 1 - k) as i64).scaled(&rat_int(n as i64)));
        }
        out
    }

    pub fn times_qpoly(&self, q: &QPoly) -> Self {
        let mut out = Self::zero(self.nvars, self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in q.terms() {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.scaled(cb));
            }
        }
        out
    }

    /// Sum over all critical points, coefficientwise.
    pub fn trace(&self) -> QPoly {
        let mut out = QPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.trace());
        }
        out
    }

    pub fn embed(&self, map: &[usize], nvars: usize) -> Self {
        let mut out = Self::zero(nvars, self.n);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.times(self);
        }
        acc
    }
}

impl Ring for PolyR {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.n)
    }
    fn one_like(&self) -> Self {
        Self::constant(self.nvars, CriticalRingElem::one(self.n))
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(o);
        out
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.times(cb));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        Self { nvars: self.nvars, n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negated())).collect() }
    }
    fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        Self { nvars: self.nvars, n: self.n, terms: self.terms.iter().map(|(e, v)| (e.clone(), v.scaled(c))).collect() }
    }
    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if e.iter().any(|&k| k > 0) {
            return None;
        }
        Some(Self::constant(self.nvars, c.inverse()?))
    }
    fn add_assign_ref(&mut self, o: &Self) {
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

/// Coefficients of `(a + u)^k` in `u`, low degree first.
pub(crate) fn shifted_power(a: &CriticalRingElem, k: u32) -> Vec<CriticalRingElem> {
    let n = a.degree_n();
    let mut powers = vec![CriticalRingElem::one(n)];
    for _ in 0..k {
        let next = powers.last().unwrap().times(a);
        powers.push(next);
    }
    (0..=k).map(|j| powers[(k - j) as usize].scaled(&binomial(k as i64, j as i64))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_by_critical_polynomial() {
        let p = QPoly::critical(2, 1, 3);
        let f = QPoly::monomial(2, vec![2, 1], rat_int(5)).add(&QPoly::constant(2, rat_int(1)));
        let prod = p.mul(&p).mul(&f);
        assert_eq!(prod.div_critical(1, 3).unwrap().div_critical(1, 3).unwrap(), f);
        assert!(f.div_critical(1, 3).is_none());
    }

    #[test]
    fn difference_quotient_inverts_linear_factor() {
        // (z - p) Q(z, p) = P(z) in R[z]
        for n in 1..=4 {
            let q = PolyR::difference_quotient(1, 0, n);
            let mut lin = PolyR::zero(1, n);
            lin.add_term(vec![1], CriticalRingElem::one(n));
            lin.add_term(vec![0], CriticalRingElem::generator(n).negated());
            let prod = lin.times(&q);
            assert_eq!(prod, PolyR::from_qpoly(&QPoly::critical(1, 0, n), &CriticalRingElem::one(n)));
        }
    }

    #[test]
    fn trace_of_generator_powers() {
        let n = 4;
        for k in 0..8i64 {
            let c = PolyR::constant(1, CriticalRingElem::p_pow(n, k));
            let expected = if k % 4 == 0 { rat_int(4) / rat_int(4i64.pow((k / 4) as u32)) } else { Rational::zero() };
            assert_eq!(c.trace(), QPoly::constant(1, expected));
        }
    }
}
