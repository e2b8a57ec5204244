use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::curve::SpectralCurve;
use super::global::GlobalRat;
use super::recursion::CorrelatorStore;
use crate::arith::{rat_int, Laurent, MultiSeries, Rational};
use crate::error::{Error, Result};

/// `z(x)`, the branch of `x = z e^{-z^N}` through the origin, known below
/// `cap + 1`.
pub fn z_of_x(curve: &SpectralCurve, cap: u32) -> Result<Laurent<Rational>> {
    let n = curve.n();
    let order = cap as i64;
    let mut coeffs = vec![Rational::zero(); order as usize + 1];
    let mut k = 0usize;
    let mut fact = Rational::one();
    while n * k < order as usize {
        let sign = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        coeffs[n * k] = sign / &fact;
        k += 1;
        fact *= rat_int(k as i64);
    }
    let x = Laurent::new(1, coeffs, order + 1, Rational::zero());
    Laurent::lagrange_invert(&x, order)
}

/// Tables `[x^μ] z(x)^a / P(z(x))^d` for `μ <= cap`.
struct Tables {
    cap: u32,
    z: Laurent<Rational>,
    p_inv: Laurent<Rational>,
    z_pows: Vec<Laurent<Rational>>,
    p_pows: Vec<Laurent<Rational>>,
    memo: BTreeMap<(u32, u32), Vec<Rational>>,
}

impl Tables {
    fn new(curve: &SpectralCurve, cap: u32) -> Result<Self> {
        let prec = cap as i64 + 1;
        let z = z_of_x(curve, cap)?;
        let mut zn = Laurent::monomial(Rational::one(), 0);
        for _ in 0..curve.n() {
            zn = (&zn * &z).truncate(prec);
        }
        let p = &zn.scale_rat(&rat_int(curve.n() as i64)) - &Laurent::monomial(Rational::one(), 0);
        let p_inv = p.inv_to(prec)?.truncate(prec);
        let one = Laurent::monomial(Rational::one(), 0).truncate(prec);
        Ok(Self { cap, z, p_inv, z_pows: vec![one.clone()], p_pows: vec![one], memo: BTreeMap::new() })
    }

    fn get(&mut self, a: u32, d: u32) -> Result<&[Rational]> {
        if !self.memo.contains_key(&(a, d)) {
            let prec = self.cap as i64 + 1;
            while self.z_pows.len() <= a as usize {
                let next = (self.z_pows.last().unwrap() * &self.z).truncate(prec);
                self.z_pows.push(next);
            }
            while self.p_pows.len() <= d as usize {
                let next = (self.p_pows.last().unwrap() * &self.p_inv).truncate(prec);
                self.p_pows.push(next);
            }
            let s = (&self.z_pows[a as usize] * &self.p_pows[d as usize]).truncate(prec);
            let row = (0..=self.cap as i64).map(|k| s.coeff(k)).collect::<Result<Vec<_>>>()?;
            self.memo.insert((a, d), row);
        }
        Ok(&self.memo[&(a, d)])
    }
}

/// Coefficients of `x^μ`, `1 <= μ_i <= cap`, of a function `W(z_1, …)` with
/// denominators at the critical points only, in the coordinates `x_i = e^{X(z_i)}`.
pub fn expand_at_zero(curve: &SpectralCurve, w: &GlobalRat, cap: u32) -> Result<MultiSeries> {
    if !w.pairs().is_empty() {
        return Err(Error::BadSeries("diagonal denominators have no expansion in this form".into()));
    }
    let nv = w.nvars();
    let mut tables = Tables::new(curve, cap)?;
    // contract one variable at a time: partial[(rest exponents)] -> coefficients over μ_0..μ_{i-1}
    let mut partial: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, Rational>> = BTreeMap::new();
    for (e, c) in w.num().terms() {
        partial.entry(e.clone()).or_default().insert(Vec::new(), c.clone());
    }
    for i in 0..nv {
        let d = w.pden()[i];
        let mut next: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, Rational>> = BTreeMap::new();
        for (rest, acc) in partial {
            let a = rest[0];
            let row = tables.get(a, d)?.to_vec();
            let tail = rest[1..].to_vec();
            let slot = next.entry(tail).or_default();
            for (mus, v) in acc {
                for (mu, t) in row.iter().enumerate().skip(1) {
                    if t.is_zero() {
                        continue;
                    }
                    let mut m = mus.clone();
                    m.push(mu as u32);
                    *slot.entry(m).or_insert_with(Rational::zero) += &v * t;
                }
            }
        }
        partial = next;
    }
    let mut out = MultiSeries::with_uniform_cap(nv, cap);
    for (_, acc) in partial {
        for (mu, v) in acc {
            out.add_term(mu, v);
        }
    }
    Ok(out)
}

/// Connected Hurwitz numbers `h°_{g;μ}`, `μ_i <= cap`, read off the recursion
/// through `W_{g,n} = D_1 ⋯ D_n H_{g,n}`.
pub fn hurwitz_from_recursion(store: &mut CorrelatorStore, g: u32, n: usize, cap: u32) -> Result<MultiSeries> {
    let curve = store.curve();
    let w = store.w(g, n)?;
    let series = expand_at_zero(&curve, &w, cap)?;
    let mut out = MultiSeries::with_uniform_cap(n, cap);
    for (mu, c) in series.terms() {
        let prod: u64 = mu.iter().map(|&m| m as u64).product();
        out.add_term(mu.clone(), c / Rational::from_integer(prod.into()));
    }
    Ok(out)
}

/// `H_{0,2}`: the mixed part of `log((z(x_1) - z(x_2)) / (x_1 - x_2))`, with
/// `μ_1, μ_2 <= cap`.
pub fn h02_from_curve(curve: &SpectralCurve, cap: u32) -> Result<MultiSeries> {
    let total = 2 * cap;
    let z = z_of_x(curve, total + 1)?;
    let shape = || MultiSeries::new(vec![alloc::string::String::from("x1"), "x2".into()], vec![total, total], Some(total));
    // (z1 - z2)/(x1 - x2) - 1 = Σ_{k >= 2} c_k h_{k-1}(x1, x2)
    let mut u = shape();
    for k in 2..=(total as i64 + 1) {
        let c = z.coeff(k)?;
        if c.is_zero() {
            continue;
        }
        for a in 0..k as u32 {
            u.add_term(vec![a, k as u32 - 1 - a], c.clone());
        }
    }
    // log(1 + u) = Σ (-1)^{j+1} u^j / j; u has no constant term
    let mut log = shape();
    let mut pw = u.clone();
    for j in 1..=total {
        let sign = if j % 2 == 1 { Rational::one() } else { -Rational::one() };
        log = log.add(&pw.scale(&(sign / rat_int(j as i64))));
        pw = pw.mul(&u);
        if pw.is_empty() {
            break;
        }
    }
    let mut out = MultiSeries::with_uniform_cap(2, cap);
    for (e, c) in log.terms() {
        if e[0] >= 1 && e[1] >= 1 {
            out.add_term(e.clone(), c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn lambert_inverse() {
        // q = r = 1: z(x) is the tree function, Σ k^{k-1} x^k / k!
        let z = z_of_x(&SpectralCurve::new(1, 1), 5).unwrap();
        assert_eq!(z.coeff(1).unwrap(), rat(1, 1));
        assert_eq!(z.coeff(2).unwrap(), rat(1, 1));
        assert_eq!(z.coeff(3).unwrap(), rat(3, 2));
        assert_eq!(z.coeff(4).unwrap(), rat(16, 6));
        assert_eq!(z.coeff(5).unwrap(), rat(125, 24));
    }
}
