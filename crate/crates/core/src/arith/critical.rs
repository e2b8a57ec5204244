use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{rat_int, Rational, Ring};
use crate::error::{Error, Result};

/// Element of `R = Q[p]/(N p^N - 1)` with `N = qr`, stored as the `N`
/// coefficients of its reduced representative. `p` stands for a generic
/// critical point of `X(z) = log z - z^N`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct CriticalRingElem {
    coeffs: Vec<Rational>,
}

impl CriticalRingElem {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "ring degree must be positive");
        Self { coeffs: vec![Rational::zero(); n] }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = c;
        e
    }

    /// The generator `p` itself.
    pub fn generator(n: usize) -> Self {
        Self::from_poly(n, &[Rational::zero(), Rational::one()])
    }

    /// `p^k` for any integer `k`; negative powers use `p^{-1} = N p^{N-1}`.
    pub fn p_pow(n: usize, k: i64) -> Self {
        let nn = n as i64;
        let q = k.div_euclid(nn);
        let rem = k.rem_euclid(nn) as usize;
        // p^k = p^{rem} * (p^N)^q = p^{rem} * N^{-q}
        let mut e = Self::zero(n);
        let scale = if q >= 0 {
            Rational::one() / pow_int(n, q as u32)
        } else {
            pow_int(n, (-q) as u32)
        };
        e.coeffs[rem] = scale;
        e
    }

    /// Reduces an arbitrary polynomial in `p` (low degree first).
    pub fn from_poly(n: usize, poly: &[Rational]) -> Self {
        let mut e = Self::zero(n);
        let inv_n = Rational::one() / rat_int(n as i64);
        for (k, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = k / n;
            let mut v = c.clone();
            for _ in 0..q {
                v *= &inv_n;
            }
            e.coeffs[k % n] += v;
        }
        e
    }

    pub fn degree_n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Sum of `self(p_i)` over all `N` roots of `N p^N = 1`. The power sums of
    /// `p, ..., p^{N-1}` over these roots vanish, so only the constant term
    /// survives.
    pub fn trace(&self) -> Rational {
        &self.coeffs[0] * rat_int(self.coeffs.len() as i64)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn try_inverse(&self) -> Result<Self> {
        let n = self.coeffs.len();
        let modulus = modulus_poly(n);
        let a = trim(self.coeffs.clone());
        if a.is_empty() {
            return Err(Error::NonInvertible);
        }
        // extended Euclid: s*a + t*m = g
        let (g, s) = ext_gcd(a, modulus);
        if g.len() != 1 {
            return Err(Error::NonInvertible);
        }
        let inv_g = Rational::one() / &g[0];
        let s: Vec<Rational> = s.into_iter().map(|c| c * &inv_g).collect();
        Ok(Self::from_poly(n, &s))
    }
}

fn pow_int(n: usize, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= rat_int(n as i64);
    }
    acc
}

fn modulus_poly(n: usize) -> Vec<Rational> {
    let mut m = vec![Rational::zero(); n + 1];
    m[0] = -Rational::one();
    m[n] = rat_int(n as i64);
    m
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// Returns `(g, s)` with `s*a ≡ g (mod b)`.
fn ext_gcd(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl Ring for CriticalRingElem {
    fn zero_like(&self) -> Self {
        Self::zero(self.coeffs.len())
    }
    fn one_like(&self) -> Self {
        Self::one(self.coeffs.len())
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn plus(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { coeffs }
    }
    fn minus(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self { coeffs }
    }
    fn times(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        if n == 1 {
            return Self { coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        let inv_n = Rational::one() / rat_int(n as i64);
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = i + j;
                if k < n {
                    out[k] += a * b;
                } else {
                    out[k - n] += a * b * &inv_n;
                }
            }
        }
        Self { coeffs: out }
    }
    fn negated(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
    fn scaled(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
    fn inverse(&self) -> Option<Self> {
        self.try_inverse().ok()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn traces() {
        assert_eq!(CriticalRingElem::one(2).trace(), rat_int(2));
        assert_eq!(CriticalRingElem::generator(2).trace(), rat_int(0));
        assert_eq!(CriticalRingElem::p_pow(2, 2).trace(), rat_int(1));
    }

    #[test]
    fn inverses() {
        let three = CriticalRingElem::constant(1, rat_int(3));
        assert_eq!(three.try_inverse().unwrap(), CriticalRingElem::constant(1, rat(1, 3)));
        let p = CriticalRingElem::generator(2);
        assert_eq!(p.try_inverse().unwrap(), CriticalRingElem::from_poly(2, &[rat_int(0), rat_int(2)]));
        assert_eq!(CriticalRingElem::zero(2).try_inverse(), Err(Error::NonInvertible));
    }

    #[test]
    fn negative_powers() {
        for n in 1..5 {
            for k in -7..7 {
                let prod = CriticalRingElem::p_pow(n, k).times(&CriticalRingElem::p_pow(n, -k));
                assert_eq!(prod, CriticalRingElem::one(n));
            }
        }
    }

    #[test]
    fn zero_divisor_detected() {
        // N=2: 2p^2 - 1 is irreducible, but N=4: p^2 - 1/2... 4p^4-1 = (2p^2-1)(2p^2+1)
        let e = CriticalRingElem::from_poly(4, &[rat_int(-1), rat_int(0), rat_int(2)]);
        assert!(e.try_inverse().is_err());
    }
}
