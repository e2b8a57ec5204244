use alloc::vec::Vec;

use num_traits::One;

use super::curve::{LocalR, SpectralCurve};
use super::global::GlobalRat;
use crate::arith::{binomial, factorial, rat_int, Laurent, Rational, EXACT};
use crate::error::{Error, Result};

/// Series in `ε` whose coefficients are series in `t`.
pub(crate) type Nested = Laurent<LocalR>;

pub(crate) fn inner_zero(curve: &SpectralCurve) -> LocalR {
    Laurent::zero_series(curve.ring_zero(), EXACT)
}

/// `W_{0,2}(z_1, z_2) = B / (dX dX)` as a rational function.
pub fn w02(n: usize) -> GlobalRat {
    GlobalRat::bergman(2, 0, 1).density_to_w(n)
}

/// `D_1^i D_2^j W_{0,2}`, with `D = d/dX`.
pub fn w02_derivative(n: usize, i: u32, j: u32) -> GlobalRat {
    let mut f = w02(n);
    for _ in 0..i {
        f = f.d_op(0, n);
    }
    for _ in 0..j {
        f = f.d_op(1, n);
    }
    f
}

/// `f(p + t + ε)` for a polynomial `f` in `z` (low degree first), as a series
/// in `ε` with coefficients known below `prec` in `t`.
fn shifted_poly(curve: &SpectralCurve, f: &[Rational], outer: i64, prec: i64) -> Result<Nested> {
    let t = curve.t();
    let mut coeffs: Vec<LocalR> = Vec::new();
    for m in 0..outer.max(0) {
        let mut c = Laurent::zero_series(curve.ring_zero(), prec);
        for (a, v) in f.iter().enumerate() {
            let a = a as i64;
            if a < m || *v == Rational::from_integer(0.into()) {
                continue;
            }
            let pw = curve.power_at(a - m, &t, prec)?;
            c = &c + &pw.scale_rat(&(v * binomial(a, m)));
        }
        coeffs.push(c.truncate(prec));
    }
    Ok(Laurent::new(0, coeffs, outer, inner_zero(curve)))
}

/// Expands a two-variable rational function at `(p + t + ε, p + t)` as a
/// series in `ε` (known below `outer`) over series in `t` (known below `prec`).
pub(crate) fn expand_near_diagonal(curve: &SpectralCurve, f: &GlobalRat, outer: i64, prec: i64) -> Result<Nested> {
    assert_eq!(f.nvars(), 2);
    let n = curve.n();
    let e = f.pairs().get(&(0, 1)).copied().unwrap_or(0) as i64;
    let work = outer + e;
    // numerator: Σ c a^α b^β, grouped by β
    let mut by_beta: alloc::collections::BTreeMap<u32, Vec<Rational>> = alloc::collections::BTreeMap::new();
    for (ex, c) in f.num().terms() {
        let row = by_beta.entry(ex[1]).or_default();
        if row.len() <= ex[0] as usize {
            row.resize(ex[0] as usize + 1, Rational::from_integer(0.into()));
        }
        row[ex[0] as usize] += c;
    }
    let t = curve.t();
    let mut num = Laurent::zero_series(inner_zero(curve), work);
    for (beta, row) in &by_beta {
        let a_part = shifted_poly(curve, row, work, prec)?;
        let b_part = curve.power_at(*beta as i64, &t, prec)?;
        num = &num + &a_part.map(inner_zero(curve), |c| (c * &b_part).truncate(prec));
    }
    let mut crit = alloc::vec![Rational::from_integer(0.into()); n + 1];
    crit[0] = -Rational::one();
    crit[n] = rat_int(n as i64);
    let pa = shifted_poly(curve, &crit, work, prec + 1)?;
    let pa_inv = pa.inv_to(work)?;
    let pb_inv = curve.critical_poly_at(&t)?.truncate(prec + 1).inv()?;
    let mut out = num;
    for _ in 0..f.pden()[0] {
        out = &out * &pa_inv;
    }
    let pb_pow = pb_inv.pow(f.pden()[1]);
    out = out.map(inner_zero(curve), |c| c * &pb_pow);
    Ok(out.shift(-e))
}

/// `X'(p + t + ε) / (X(p + t + ε) - X(p + t))`, the kernel of `restr`, known
/// below `outer` in `ε`.
pub(crate) fn restr_kernel(curve: &SpectralCurve, outer: i64, prec: i64) -> Result<Nested> {
    let len = outer + 2;
    // X^{(k)}(p + t) for k = 1..=len
    let mut derivs: Vec<LocalR> = Vec::new();
    let mut x = curve.local_x(prec + len + 2);
    for _ in 0..len {
        x = x.derivative();
        derivs.push(x.clone());
    }
    let dx_a: Vec<LocalR> = (0..len as usize).map(|m| derivs[m].scale_rat(&(Rational::one() / factorial(m as u32)))).collect();
    let diff: Vec<LocalR> =
        (0..len as usize).map(|m| derivs[m].scale_rat(&(Rational::one() / factorial(m as u32 + 1)))).collect();
    let dx_a = Laurent::new(0, dx_a, len, inner_zero(curve));
    let diff = Laurent::new(0, diff, len, inner_zero(curve));
    Ok((&dx_a * &diff.inv_to(len)?).shift(-1))
}

/// `restr_{a = b} D_a^i D_b^j W_{0,2}(a, b)` at `b = p + t`, i.e.
/// `Res_{a = b} (D^i D^j W_{0,2})(a, b) dX(a) / (X(a) - X(b))`. The inner
/// working precision is `prec`; the result carries whatever survives.
pub fn restr_w02(curve: &SpectralCurve, i: u32, j: u32, prec: i64) -> Result<LocalR> {
    let f = w02_derivative(curve.n(), i, j);
    let e = f.pairs().get(&(0, 1)).copied().unwrap_or(0) as i64;
    let g = expand_near_diagonal(curve, &f, 1, prec)?;
    let k = restr_kernel(curve, e + 1, prec)?;
    let prod = &g * &k;
    if prod.prec() <= -1 {
        return Err(Error::TruncationUnderflow { requested: -1, available: prod.prec() });
    }
    prod.coeff(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn restr_of_a_regular_function_is_evaluation() {
        // the kernel has residue one: Res_ε K(ε) = 1
        let c = SpectralCurve::new(1, 2);
        let k = restr_kernel(&c, 3, 6).unwrap();
        let res = k.coeff(-1).unwrap();
        assert_eq!(res.coeff(0).unwrap(), c.ring_const(rat(1, 1)));
        assert_eq!(res.truncate(4), Laurent::monomial(c.ring_const(rat(1, 1)), 0).truncate(4));
    }

    #[test]
    fn restr_w02_is_the_schwarzian() {
        // B/(dX dX) - 1/ΔX^2 on the diagonal is {z; X}/6 = -{X; z}/(6 X'^2).
        // For X = -z + log z this is (4z - 1)/(12 (1 - z)^4), i.e. (3 + 4t)/(12 t^4) at z = 1 + t.
        let c = SpectralCurve::new(1, 1);
        let r = restr_w02(&c, 0, 0, 12).unwrap();
        assert!(r.prec() >= 2, "precision {}", r.prec());
        for k in -6..2 {
            let expected = match k {
                -4 => rat(1, 4),
                -3 => rat(1, 3),
                _ => rat(0, 1),
            };
            assert_eq!(r.coeff(k).unwrap(), c.ring_const(expected), "t^{k}");
        }
    }
}
