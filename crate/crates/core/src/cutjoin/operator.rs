//! Coefficients of the Q-operators of the spin cut-and-join equation.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{factorial, rat_int, Laurent, MultiSeries, Rational};

/// `e_c = 1/((2c+1)! 4^c)`, the coefficients of `ζ(z)/z = Σ e_c z^{2c}`
/// with `ζ(z) = e^{z/2} - e^{-z/2}`.
pub fn zeta_over_z(c: u32) -> Rational {
    let four_pow = (0..c).fold(Rational::one(), |a, _| a * rat_int(4));
    Rational::one() / (factorial(2 * c + 1) * four_pow)
}

/// Coefficients `c_a` of `z/ζ(z) = Σ c_a z^{2a}`, for `a <= max`.
pub fn z_over_zeta(max: u32) -> Vec<Rational> {
    let series = Laurent::new(
        0,
        (0..=max).map(zeta_over_z).collect(),
        max as i64 + 1,
        Rational::zero(),
    );
    let inv = series.inv().expect("constant term is one");
    (0..=max as i64).map(|a| inv.coeff(a).expect("within precision")).collect()
}

/// Splits of `d` into `(a, b, c_1..c_m)` with `a + b + Σ c_j = d`, with the
/// weight `c_a e_b Π e_{c_j}` of `Q_{d;∅,m}`.
pub fn q_operator_terms(d: u32, m: usize) -> Vec<(u32, Vec<u32>, Rational)> {
    let ca = z_over_zeta(d);
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            let rest = d - a - b;
            for cs in compositions(rest, m) {
                let w = cs.iter().fold(&ca[a as usize] * zeta_over_z(b), |acc, &c| acc * zeta_over_z(c));
                out.push((b, cs, w));
            }
        }
    }
    out
}

/// Weak compositions of `total` into `parts` parts.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { alloc::vec![Vec::new()] } else { Vec::new() };
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

/// `Q^{(k)}_{d;∅,m}` applied to a series whose first `m` variables are the
/// `ξ_j` and whose remaining variables are `x_1..x_n`; the `ξ_j` are set to
/// `x_k` (`k` indexes the `x` variables).
pub fn q_operator(d: u32, m: usize, target: &MultiSeries, k: usize) -> MultiSeries {
    let n = target.vars().len() - m;
    let vars = target.vars()[m..].to_vec();
    let caps = target.caps()[m..].iter().enumerate().map(|(i, &c)| if i == k { u32::MAX / 4 } else { c }).collect();
    let mut out = MultiSeries::new(vars, caps, target.total_cap());
    for (b, cs, w) in q_operator_terms(d, m) {
        for (e, c) in target.terms() {
            let mut coef = &w * c;
            let mut x = e[m..].to_vec();
            for (j, &cj) in cs.iter().enumerate() {
                let base = rat_int(e[j] as i64);
                coef *= (0..2 * cj + 1).fold(Rational::one(), |a, _| a * &base);
                x[k] += e[j];
            }
            let dk = rat_int(x[k] as i64);
            coef *= (0..2 * b).fold(Rational::one(), |a, _| a * &dk);
            debug_assert_eq!(x.len(), n);
            out.add_term(x, coef);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn zeta_expansion_matches_exponentials() {
        // e^{z/2} - e^{-z/2} = 2 Σ (z/2)^{2k+1}/(2k+1)!
        for k in 0..=10u32 {
            let direct = rat_int(2) / factorial(2 * k + 1) / (0..2 * k + 1).fold(Rational::one(), |a, _| a * rat_int(2));
            assert_eq!(zeta_over_z(k), direct);
        }
    }

    #[test]
    fn inverse_zeta_leading_terms() {
        let c = z_over_zeta(2);
        assert_eq!(c[0], rat(1, 1));
        assert_eq!(c[1], rat(-1, 24));
        assert_eq!(c[2], rat(7, 5760));
    }

    #[test]
    fn d0_m2_on_monomial() {
        let mut s = MultiSeries::new(alloc::vec!["xi1".into(), "xi2".into(), "x".into()], alloc::vec![10, 10, 10], None);
        s.add_term(alloc::vec![2, 3, 0], rat(1, 1));
        let out = q_operator(0, 2, &s, 0);
        assert_eq!(out.get(&[5]), rat(6, 1));
    }

    #[test]
    fn d1_m1_matches_displayed_formula() {
        // Q_1 = (1/24)((D^2 - 1) D_ξ + D_ξ^3) on ξ^μ gives (1/24)(μ^3 - μ + μ^3)
        let mut s = MultiSeries::new(alloc::vec!["xi".into(), "x".into()], alloc::vec![10, 10], None);
        s.add_term(alloc::vec![3, 0], rat(1, 1));
        let out = q_operator(1, 1, &s, 0);
        assert_eq!(out.get(&[3]), rat(27 - 3 + 27, 24));
    }
}
