//! The charge-zero sector of the semi-infinite wedge, with basis `v_λ`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::Partition;
use crate::arith::{rat, Rational};

/// Finite linear combination `Σ c_λ v_λ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<Partition, Rational>,
}

impl FockVector {
    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn basis(p: Partition) -> Self {
        let mut v = Self::default();
        v.add_term(p, Rational::one());
        v
    }

    pub fn add_term(&mut self, p: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Partition) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in o.terms() {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::default();
        for (p, v) in self.terms() {
            out.add_term(p.clone(), v * c);
        }
        out
    }

    /// Standard inner product, the `v_λ` being orthonormal.
    pub fn pair(&self, o: &Self) -> Rational {
        self.terms().map(|(p, c)| c * o.coeff(p)).fold(Rational::zero(), |a, b| a + b)
    }

    /// Vacuum expectation: the coefficient of `v_∅`.
    pub fn vev(&self) -> Rational {
        self.coeff(&Partition::empty())
    }

    /// Applies a diagonal operator given by its eigenvalue function.
    pub fn map_diagonal(&self, f: impl Fn(&Partition) -> Rational) -> Self {
        let mut out = Self::default();
        for (p, c) in self.terms() {
            out.add_term(p.clone(), c * f(p));
        }
        out
    }
}

/// Signed border strips of length `k` that can be added to (`grow`) or
/// removed from (`!grow`) `lambda`; the sign is `(-1)^{height}`.
pub fn border_strips(lambda: &Partition, k: u32, grow: bool) -> Vec<(Partition, i32)> {
    let k = k as i64;
    let beads = lambda.len() + if grow { k as usize } else { 0 };
    let beta = lambda.beta_set(beads);
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        let target = if grow { b + k } else { b - k };
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let (lo, hi) = if grow { (b, target) } else { (target, b) };
        let between = beta.iter().filter(|&&x| x > lo && x < hi).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        out.push((Partition::from_beta(nb), if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// `α_{-k} v` for `k >= 1`.
pub fn apply_alpha_neg(k: u32, v: &FockVector) -> FockVector {
    assert!(k >= 1);
    let mut out = FockVector::default();
    for (p, c) in v.terms() {
        for (rho, s) in border_strips(p, k, true) {
            out.add_term(rho, c * Rational::from_integer(s.into()));
        }
    }
    out
}

/// `α_k v` for `k >= 1`, the adjoint of `α_{-k}`.
pub fn apply_alpha_pos(k: u32, v: &FockVector) -> FockVector {
    assert!(k >= 1);
    let mut out = FockVector::default();
    for (p, c) in v.terms() {
        for (rho, s) in border_strips(p, k, false) {
            out.add_term(rho, c * Rational::from_integer(s.into()));
        }
    }
    out
}

/// Eigenvalue of `F_n` on `v_λ`: `Σ_i [(λ_i - i + 1/2)^n - (-i + 1/2)^n]`.
pub fn f_operator_eigenvalue(n: u32, lambda: &Partition) -> Rational {
    let mut acc = Rational::zero();
    for (i, &l) in lambda.parts().iter().enumerate() {
        let i = i as i64 + 1;
        let a = rat(2 * (l as i64 - i) + 1, 2);
        let b = rat(-2 * i + 1, 2);
        acc += pow(&a, n) - pow(&b, n);
    }
    acc
}

fn pow(x: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, _| acc * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec())
    }

    #[test]
    fn alpha_minus_two_on_vacuum() {
        let v = apply_alpha_neg(2, &FockVector::vacuum());
        let mut expected = FockVector::basis(part(&[2]));
        expected.add_term(part(&[1, 1]), rat_int(-1));
        assert_eq!(v, expected);
        assert_eq!(apply_alpha_neg(1, &FockVector::vacuum()), FockVector::basis(part(&[1])));
    }

    #[test]
    fn commutator_on_vacuum() {
        let vac = FockVector::vacuum();
        let ab = apply_alpha_pos(1, &apply_alpha_neg(1, &vac));
        let ba = apply_alpha_neg(1, &apply_alpha_pos(1, &vac));
        assert_eq!(ab.plus(&ba.scale(&rat_int(-1))), vac);
    }

    #[test]
    fn f_eigenvalues() {
        assert_eq!(f_operator_eigenvalue(2, &Partition::empty()), rat_int(0));
        assert_eq!(f_operator_eigenvalue(2, &part(&[1])), rat_int(0));
        assert_eq!(f_operator_eigenvalue(2, &part(&[2])), rat_int(2));
    }

    #[test]
    fn positive_energy_annihilates_vacuum() {
        for a in 1..6 {
            assert!(apply_alpha_pos(a, &FockVector::vacuum()).is_zero());
        }
    }
}
