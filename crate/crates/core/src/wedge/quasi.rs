//! Empirical check of quasi-polynomiality: on every residue class of `μ`
//! modulo `qr`, `h°_{g;μ} / Π (μ_i^{[μ_i]} / [μ_i]!)` is a polynomial.

use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use super::free_energy::exponent_box;
use super::{HurwitzKey, HurwitzTable, Partition};
use crate::arith::{factorial, linalg, rat_int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueFit {
    pub residues: Vec<u32>,
    pub degree: u32,
    pub fit_points: usize,
    pub test_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiReport {
    pub g: u32,
    pub n: usize,
    pub q: u32,
    pub r: u32,
    pub fits: Vec<ResidueFit>,
    pub passed: bool,
}

/// The normalized value `h / Π μ_i^{[μ_i]}/[μ_i]!`.
fn normalized(table: &mut HurwitzTable, g: u32, mu: &[u32]) -> Option<Rational> {
    let (q, r) = table.qr();
    let key = HurwitzKey { g, mu: Partition::new(mu.to_vec()), q, r };
    let h = table.connected(&key).ok()?;
    let qr = q * r;
    let pref: Rational = mu
        .iter()
        .map(|&x| {
            let k = x / qr;
            (0..k).fold(Rational::one(), |a, _| a * rat_int(x as i64)) / factorial(k)
        })
        .product();
    Some(h / pref)
}

/// Monomial exponents in `n` variables of total degree `<= deg`.
fn monomials(n: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = alloc::vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

fn eval_row(mons: &[Vec<u32>], mu: &[u32]) -> Vec<Rational> {
    mons.iter()
        .map(|e| e.iter().zip(mu).fold(Rational::one(), |a, (&k, &x)| a * pow(x, k)))
        .collect()
}

fn pow(x: u32, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |a, _| a * rat_int(x as i64))
}

/// Fits a polynomial of the smallest total degree `<= degree_bound` on each
/// residue class, using points with all `μ_i <= fit_max`, then checks it on
/// the points with `fit_max < max μ_i <= test_max`.
pub fn quasi_polynomiality_check(
    g: u32,
    n: usize,
    q: u32,
    r: u32,
    fit_max: u32,
    test_max: u32,
    degree_bound: u32,
) -> Result<QuasiReport> {
    assert!(2 * g as i64 - 2 + n as i64 > 0, "unstable (g, n)");
    let qr = q * r;
    let mut table = HurwitzTable::new(q, r);
    let all = exponent_box(n, test_max);
    let mut fits = Vec::new();
    let mut passed = true;
    for residues in exponent_box(n, qr) {
        let residues: Vec<u32> = residues.iter().map(|x| x % qr).collect();
        let class: Vec<&Vec<u32>> =
            all.iter().filter(|mu| mu.iter().zip(&residues).all(|(x, c)| x % qr == *c)).collect();
        let mut fit_data = Vec::new();
        let mut test_data = Vec::new();
        for mu in class {
            let Some(v) = normalized(&mut table, g, mu) else { continue };
            if mu.iter().all(|&x| x <= fit_max) {
                fit_data.push((mu.clone(), v));
            } else {
                test_data.push((mu.clone(), v));
            }
        }
        if fit_data.is_empty() {
            continue;
        }
        let mut found = None;
        for deg in 0..=degree_bound {
            let mons = monomials(n, deg);
            if fit_data.len() <= mons.len() {
                return Err(Error::FitImpossible(format!(
                    "class {residues:?}: {} points cannot certify degree {deg}",
                    fit_data.len()
                )));
            }
            let rows: Vec<Vec<Rational>> = fit_data.iter().map(|(mu, _)| eval_row(&mons, mu)).collect();
            let rhs: Vec<Rational> = fit_data.iter().map(|(_, v)| v.clone()).collect();
            match linalg::solve(&rows, &rhs) {
                Ok(Some(coef)) => {
                    found = Some((deg, mons, coef));
                    break;
                }
                Ok(None) => continue,
                Err(e) => return Err(e),
            }
        }
        let Some((deg, mons, coef)) = found else {
            return Err(Error::FitImpossible(format!("class {residues:?}: degree above {degree_bound}")));
        };
        for (mu, v) in &test_data {
            let pred: Rational = eval_row(&mons, mu).iter().zip(&coef).map(|(a, b)| a * b).sum();
            if &pred != v {
                passed = false;
            }
        }
        fits.push(ResidueFit { residues, degree: deg, fit_points: fit_data.len(), test_points: test_data.len() });
    }
    Ok(QuasiReport { g, n, q, r, fits, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_zero_three_points_constant() {
        let rep = quasi_polynomiality_check(0, 3, 1, 1, 3, 5, 3).unwrap();
        assert!(rep.passed);
        assert!(rep.fits.iter().all(|f| f.degree == 0));
    }

    #[test]
    fn one_point_genus_one_r2() {
        let rep = quasi_polynomiality_check(1, 1, 1, 2, 8, 14, 3).unwrap();
        assert!(rep.passed);
        assert!(rep.fits.iter().all(|f| f.degree <= 1 && f.test_points > 0));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(3, 0).len(), 1);
    }
}
