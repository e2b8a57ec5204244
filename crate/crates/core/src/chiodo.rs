//! Bernoulli polynomials, the coefficient tables of Chiodo's Chern character
//! formula, and the genus zero, three-point specialization of the qr-ELSV
//! formula.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, rat, rat_int, Laurent, Rational};
use crate::error::{Error, Result};

/// `B_0, …, B_max` from `t/(e^t - 1) = Σ B_l t^l / l!`.
pub fn bernoulli_numbers(max: u32) -> Vec<Rational> {
    let len = max as i64 + 1;
    // (e^t - 1)/t = Σ t^k/(k+1)!
    let series = Laurent::new(0, (0..=max).map(|k| Rational::one() / factorial(k + 1)).collect(), len, Rational::zero());
    let inv = series.inv().expect("unit constant term");
    (0..=max).map(|l| inv.coeff(l as i64).expect("within precision") * factorial(l)).collect()
}

pub fn bernoulli_number(l: u32) -> Rational {
    bernoulli_numbers(l).pop().expect("non-empty")
}

/// Coefficients of `B_l(x)`, lowest degree first, from `t e^{xt}/(e^t - 1)`.
pub fn bernoulli_polynomial(l: u32) -> Vec<Rational> {
    let b = bernoulli_numbers(l);
    // B_l(x) = Σ_k C(l,k) B_k x^{l-k}
    let mut out = alloc::vec![Rational::zero(); l as usize + 1];
    for k in 0..=l {
        out[(l - k) as usize] += binomial(l as i64, k as i64) * &b[k as usize];
    }
    out
}

pub fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Degree-`m` Chern character coefficients in Chiodo's formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernCharacterData {
    pub r: u32,
    pub s: u32,
    pub a: Vec<u32>,
    pub m: u32,
    pub kappa_coeff: Rational,
    pub psi_coeffs: Vec<Rational>,
    /// `(r/2) B_{m+1}(a/r)/(m+1)!` for each twist `a = 0..r`.
    pub boundary_coeffs: Vec<Rational>,
}

/// Builds the table; with `context = Some((g, n))` also checks that
/// `(2g - 2 + n) s - Σ a_i` is divisible by `r`.
pub fn chern_coefficients(r: u32, s: u32, a: &[u32], m: u32, context: Option<(u32, u32)>) -> Result<ChernCharacterData> {
    assert!(r >= 1 && m >= 1);
    assert!(a.iter().all(|&x| 1 <= x && x <= r), "twists must lie in [1, r]");
    if let Some((g, n)) = context {
        let lhs = (2 * g as i64 - 2 + n as i64) * s as i64 - a.iter().map(|&x| x as i64).sum::<i64>();
        if lhs.rem_euclid(r as i64) != 0 {
            return Err(Error::RootConditionViolated);
        }
    }
    let bp = bernoulli_polynomial(m + 1);
    let fact = factorial(m + 1);
    let at = |x: u32| eval_poly(&bp, &rat(x as i64, r as i64)) / &fact;
    Ok(ChernCharacterData {
        r,
        s,
        a: a.to_vec(),
        m,
        kappa_coeff: at(s),
        psi_coeffs: a.iter().map(|&x| -at(x)).collect(),
        boundary_coeffs: (0..r).map(|x| rat(r as i64, 2) * at(x)).collect(),
    })
}

/// Degree-zero part of the pushed-forward Chiodo class on `M_{g,n}` for
/// roots of order `n_root`. Over the moduli of roots the total Chern class
/// starts with 1, and the forgetful map has degree `n_root^{2g-1}`
/// (`n_root^{2g}` roots, each with a `Z/n_root` automorphism).
pub fn chiodo_degree_zero(g: u32, n_root: u32) -> Rational {
    let base = rat_int(n_root as i64);
    if g == 0 {
        Rational::one() / base
    } else {
        pow(&base, 2 * g - 1)
    }
}

/// Right-hand side of the qr-ELSV formula at `(g, n) = (0, 3)`. The moduli
/// space is a point, so the integral is the degree-zero part of the class:
/// `r (qr)^{(q + Σμ)/(qr)} Π (μ_j/qr)^{[μ_j]} / [μ_j]! · (qr)^{-1}`.
pub fn elsv_rhs_g0_n3(q: u32, r: u32, mu: [u32; 3]) -> Result<Rational> {
    let qr = q * r;
    let total: u32 = mu.iter().sum();
    if !total.is_multiple_of(q) || !(q + total).is_multiple_of(qr) {
        return Err(Error::IntegralityViolation(format!("q={q}, r={r}, mu={mu:?}")));
    }
    let exponent = (q + total) / qr;
    let mut acc = rat_int(r as i64) * pow(&rat_int(qr as i64), exponent) * chiodo_degree_zero(0, qr);
    for &x in &mu {
        let k = x / qr;
        acc *= pow(&rat(x as i64, qr as i64), k) / factorial(k);
    }
    Ok(acc)
}

fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |a, _| a * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bernoulli_polynomials() {
        assert_eq!(bernoulli_polynomial(0), alloc::vec![rat(1, 1)]);
        assert_eq!(bernoulli_polynomial(1), alloc::vec![rat(-1, 2), rat(1, 1)]);
        assert_eq!(bernoulli_polynomial(2), alloc::vec![rat(1, 6), rat(-1, 1), rat(1, 1)]);
        assert_eq!(bernoulli_number(4), rat(-1, 30));
    }

    #[test]
    fn kappa_example() {
        let t = chern_coefficients(2, 1, &[1], 1, None).unwrap();
        assert_eq!(t.kappa_coeff, rat(-1, 24));
        assert_eq!(t.psi_coeffs, alloc::vec![rat(1, 24)]);
        assert_eq!(t.boundary_coeffs.len(), 2);
    }

    #[test]
    fn root_condition() {
        assert_eq!(chern_coefficients(2, 1, &[2], 1, Some((0, 3))), Err(Error::RootConditionViolated));
        assert!(chern_coefficients(2, 1, &[1], 1, Some((0, 3))).is_ok());
    }

    #[test]
    fn elsv_prefactor_trivial_case() {
        assert_eq!(elsv_rhs_g0_n3(1, 1, [1, 1, 1]).unwrap(), rat(1, 1));
        assert!(elsv_rhs_g0_n3(1, 2, [1, 1, 2]).is_err());
    }

    #[test]
    fn elsv_matches_wedge_on_small_box() {
        use crate::wedge::{HurwitzKey, HurwitzTable};
        for (q, r) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
            let mut table = HurwitzTable::new(q, r);
            for a in 1..=4 {
                for b in 1..=a {
                    for c in 1..=b {
                        let key = HurwitzKey::new(0, &[a, b, c], q, r);
                        match elsv_rhs_g0_n3(q, r, [a, b, c]) {
                            Ok(v) => assert_eq!(table.connected(&key).unwrap(), v, "q={q} r={r} mu=({a},{b},{c})"),
                            Err(_) => assert!(table.connected(&key).is_err()),
                        }
                    }
                }
            }
        }
    }
}
