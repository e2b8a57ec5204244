use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{rat_int, Rational};

/// Truncated power series in named variables with rational coefficients.
///
/// A monomial is kept iff each exponent is within its per-variable cap and,
/// when a total cap is set, the total degree is within it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    vars: Vec<String>,
    caps: Vec<u32>,
    total_cap: Option<u32>,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

impl MultiSeries {
    pub fn new(vars: Vec<String>, caps: Vec<u32>, total_cap: Option<u32>) -> Self {
        assert_eq!(vars.len(), caps.len());
        Self { vars, caps, total_cap, coeffs: BTreeMap::new() }
    }

    /// Variables `x1..xn`, each capped at `degree`.
    pub fn with_uniform_cap(n: usize, degree: u32) -> Self {
        let vars = (1..=n).map(|i| alloc::format!("x{i}")).collect();
        Self::new(vars, alloc::vec![degree; n], None)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn total_cap(&self) -> Option<u32> {
        self.total_cap
    }

    pub fn admits(&self, exps: &[u32]) -> bool {
        exps.len() == self.caps.len()
            && exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
            && self.total_cap.is_none_or(|t| exps.iter().sum::<u32>() <= t)
    }

    /// Adds `c` to the coefficient of `x^exps`; silently drops monomials past
    /// the truncation.
    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() || !self.admits(&exps) {
            return;
        }
        let entry = self.coeffs.entry(exps);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, exps: &[u32]) -> Rational {
        self.coeffs.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_shape(&self, o: &Self) -> Self {
        let caps = self.caps.iter().zip(&o.caps).map(|(a, b)| *a.min(b)).collect();
        let total_cap = match (self.total_cap, o.total_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Self::new(self.vars.clone(), caps, total_cap)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.vars, o.vars, "variable mismatch");
        let mut out = self.same_shape(o);
        for (e, c) in self.terms().chain(o.terms()) {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rat_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::new(self.vars.clone(), self.caps.clone(), self.total_cap);
        for (e, v) in self.terms() {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.vars, o.vars, "variable mismatch");
        let mut out = self.same_shape(o);
        for (ea, ca) in self.terms() {
            for (eb, cb) in o.terms() {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if out.admits(&e) {
                    out.add_term(e, ca * cb);
                }
            }
        }
        out
    }

    /// `x_i d/dx_i`.
    pub fn euler_derivative(&self, i: usize) -> Self {
        let mut out = Self::new(self.vars.clone(), self.caps.clone(), self.total_cap);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c * rat_int(e[i] as i64));
        }
        out
    }

    /// True if permuting variables (all with equal caps) leaves the series fixed.
    pub fn is_symmetric(&self) -> bool {
        self.terms().all(|(e, c)| {
            let mut sorted = e.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            !self.admits(&sorted) || self.get(&sorted) == *c
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn truncated_product() {
        let mut a = MultiSeries::with_uniform_cap(1, 2);
        a.add_term(alloc::vec![0], rat(1, 1));
        a.add_term(alloc::vec![1], rat(1, 1));
        let mut b = a.clone();
        b = b.scale(&rat(1, 1));
        let mut m = MultiSeries::with_uniform_cap(1, 2);
        m.add_term(alloc::vec![0], rat(1, 1));
        m.add_term(alloc::vec![1], rat(-1, 1));
        let p = a.mul(&m);
        assert_eq!(p.get(&[0]), rat(1, 1));
        assert_eq!(p.get(&[1]), rat(0, 1));
        assert_eq!(p.get(&[2]), rat(-1, 1));
        assert_eq!(p.len(), 2);
        assert_eq!(b.euler_derivative(0).get(&[1]), rat(1, 1));
    }

    #[test]
    fn caps_drop_terms() {
        let mut a = MultiSeries::new(alloc::vec!["x".into(), "y".into()], alloc::vec![3, 3], Some(4));
        a.add_term(alloc::vec![3, 2], rat(1, 1));
        a.add_term(alloc::vec![4, 0], rat(1, 1));
        assert!(a.is_empty());
    }
}
