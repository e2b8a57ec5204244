use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::poly::shifted_power;
use crate::arith::{binomial, rat, rat_int, CriticalRingElem, Laurent, Rational, Ring};
use crate::error::{Error, Result};

/// Series in the local coordinate `t = z - p` at the generic critical point.
pub type LocalR = Laurent<CriticalRingElem>;

/// The curve `X(z) = -z^{qr} + log z`, `y = z^q`, `B = dz dw/(z - w)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralCurve {
    pub q: u32,
    pub r: u32,
}

impl SpectralCurve {
    pub fn new(q: u32, r: u32) -> Self {
        assert!(q >= 1 && r >= 1);
        Self { q, r }
    }

    /// `N = qr`, the number of critical points.
    pub fn n(&self) -> usize {
        (self.q * self.r) as usize
    }

    pub fn ring_zero(&self) -> CriticalRingElem {
        CriticalRingElem::zero(self.n())
    }

    pub fn ring_const(&self, c: Rational) -> CriticalRingElem {
        CriticalRingElem::constant(self.n(), c)
    }

    pub fn p(&self) -> CriticalRingElem {
        CriticalRingElem::generator(self.n())
    }

    /// The identity coordinate `t`.
    pub fn t(&self) -> LocalR {
        Laurent::monomial(self.ring_const(Rational::one()), 1)
    }

    /// `f(p + s)` for a polynomial `f` in `z` (low degree first).
    pub fn poly_at(&self, f: &[Rational], s: &LocalR) -> Result<LocalR> {
        let n = self.n();
        let mut coeffs = vec![self.ring_zero(); f.len()];
        for (a, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, b) in shifted_power(&self.p(), a as u32).into_iter().enumerate() {
                coeffs[j].add_assign_ref(&b.scaled(c));
            }
        }
        let shifted = Laurent::exact(0, coeffs, CriticalRingElem::zero(n));
        shifted.compose(s)
    }

    /// `(p + s)^k` for any integer `k`, known below `prec`.
    pub fn power_at(&self, k: i64, s: &LocalR, prec: i64) -> Result<LocalR> {
        if k >= 0 {
            let mut f = vec![Rational::zero(); k as usize + 1];
            f[k as usize] = Rational::one();
            return Ok(self.poly_at(&f, s)?.truncate(prec));
        }
        // (p + u)^k = p^k Σ_j binom(k, j) (u/p)^j
        let m = -k ;
        let coeffs = (0..prec.max(1))
            .map(|j| {
                let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
                CriticalRingElem::p_pow(self.n(), k - j).scaled(&(sign * binomial(m + j - 1, j)))
            })
            .collect();
        Laurent::new(0, coeffs, prec.max(1), self.ring_zero()).compose(s)
    }

    /// `P(p + s)` with `P(z) = N z^N - 1`.
    pub fn critical_poly_at(&self, s: &LocalR) -> Result<LocalR> {
        let n = self.n();
        let mut f = vec![Rational::zero(); n + 1];
        f[0] = -Rational::one();
        f[n] = rat_int(n as i64);
        self.poly_at(&f, s)
    }

    /// `X'(p + s) = 1/(p + s) - N (p + s)^{N-1}`.
    pub fn dx_at(&self, s: &LocalR, prec: i64) -> Result<LocalR> {
        let inv = self.power_at(-1, s, prec)?;
        let top = self.power_at(self.n() as i64 - 1, s, prec)?;
        Ok(&inv - &top.scale_rat(&rat_int(self.n() as i64)))
    }

    /// `y(p + s) = (p + s)^q`.
    pub fn y_at(&self, s: &LocalR, prec: i64) -> Result<LocalR> {
        self.power_at(self.q as i64, s, prec)
    }

    /// `X(p + t) - X(p)`, known below `prec`.
    pub fn local_x(&self, prec: i64) -> LocalR {
        let n = self.n();
        let mut coeffs = vec![self.ring_zero(); prec.max(0) as usize];
        for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
            // -binom(N, k) p^{N-k} + (-1)^{k+1} p^{-k} / k
            let mut v = CriticalRingElem::p_pow(n, -(k as i64)).scaled(&rat(if k % 2 == 1 { 1 } else { -1 }, k as i64));
            if k <= n {
                v = v.minus(&CriticalRingElem::p_pow(n, (n - k) as i64).scaled(&binomial(n as i64, k as i64)));
            }
            *c = v;
        }
        Laurent::new(0, coeffs, prec, self.ring_zero())
    }

    /// `X''(p) = -N/p^2`, nonzero at every critical point.
    pub fn second_derivative_at_p(&self) -> CriticalRingElem {
        CriticalRingElem::p_pow(self.n(), -2).scaled(&-rat_int(self.n() as i64))
    }

    /// Non-identity solution `σ(t)` of `X(p + σ) = X(p + t)`, known below
    /// `order + 1`.
    pub fn deck_transformation(&self, order: i64) -> Result<DeckSeries> {
        if order < 2 {
            return Err(Error::BadSeries("deck transformation needs order >= 2".into()));
        }
        let y = self.local_x(order + 2);
        let c2 = y.coeff(2)?;
        let c2inv = c2.inverse().ok_or(Error::NonInvertible)?;
        // X(p+t) - X(p) = c2 t^2 (1 + a(t)); u = t sqrt(1 + a) gives X - X(p) = c2 u^2,
        // and the deck transformation is u -> -u.
        let a = &y.shift(-2).scale(&c2inv) - &Laurent::monomial(self.ring_const(Rational::one()), 0);
        let sqrt = binomial_series(self, rat(1, 2), order);
        let u = sqrt.compose(&a)?.shift(1).truncate(order + 1);
        let u_inv = Laurent::lagrange_invert(&u, order)?;
        let sigma = u_inv.compose(&-&u)?.truncate(order + 1);
        Ok(DeckSeries { sigma })
    }
}

/// `Σ_j binom(e, j) x^j`, i.e. `(1 + x)^e`, known below `len`.
pub(crate) fn binomial_series(curve: &SpectralCurve, e: Rational, len: i64) -> LocalR {
    let mut coeffs = Vec::new();
    let mut c = Rational::one();
    for j in 0..len.max(1) {
        coeffs.push(curve.ring_const(c.clone()));
        c = c * (&e - rat_int(j)) / rat_int(j + 1);
    }
    Laurent::new(0, coeffs, len.max(1), curve.ring_zero())
}

/// Local involution `σ(t) = -t + Σ_{k >= 2} s_k t^k` at the generic critical
/// point, in the unnormalized coordinate `t = z - p`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeckSeries {
    pub sigma: LocalR,
}

impl DeckSeries {
    pub fn order(&self) -> i64 {
        self.sigma.prec() - 1
    }

    pub fn coefficient(&self, k: i64) -> Result<CriticalRingElem> {
        self.sigma.coeff(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deck_leading_term_and_involution() {
        for (q, r) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            let c = SpectralCurve::new(q, r);
            let d = c.deck_transformation(8).unwrap();
            assert_eq!(d.coefficient(1).unwrap(), c.ring_const(-Rational::one()));
            let twice = d.sigma.compose(&d.sigma).unwrap();
            assert_eq!(twice.truncate(9), c.t().truncate(9));
            let y = c.local_x(12);
            let lhs = y.compose(&d.sigma).unwrap().truncate(10);
            assert_eq!(lhs, y.truncate(10), "q={q} r={r}");
        }
    }

    #[test]
    fn lambert_deck_coefficients() {
        // X = -z + log z at p = 1: X(1+t) - X(1) = -t^2/2 + t^3/3 - ...
        let c = SpectralCurve::new(1, 1);
        let d = c.deck_transformation(4).unwrap();
        // matching t^3 in Y(σ) = Y(t) gives s_2 - 1/3 = 1/3
        assert_eq!(d.coefficient(2).unwrap(), c.ring_const(rat(2, 3)));
        assert_eq!(d.coefficient(3).unwrap(), c.ring_const(rat(-4, 9)));
    }

    #[test]
    fn second_derivative_matches_local_expansion() {
        for (q, r) in [(1, 1), (2, 2), (1, 3)] {
            let c = SpectralCurve::new(q, r);
            assert_eq!(c.local_x(4).coeff(2).unwrap().scaled(&rat_int(2)), c.second_derivative_at_p());
            assert!(c.local_x(4).coeff(1).unwrap().vanishes());
        }
    }

    #[test]
    fn dx_vanishes_at_p() {
        let c = SpectralCurve::new(2, 2);
        let dx = c.dx_at(&c.t(), 6).unwrap();
        assert_eq!(dx.val(), 1);
        assert_eq!(dx.coeff(1).unwrap(), c.second_derivative_at_p());
    }
}
