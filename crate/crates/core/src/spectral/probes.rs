//! Two-point germs of `W̃_{0,2}` at the generic critical point and the
//! symmetrization identity.
//!
//! A two-point germ is stored as a series in an outer variable whose
//! coefficients are series in an inner one. For the holomorphicity checks the
//! outer variable is `t_2` and the inner one `t_1` (with `w_i = p + t_i`), so a
//! germ is holomorphic at the origin exactly when no negative power of either
//! variable survives: the expansion is valid on `|t_2| < |t_1|`, and a Laurent
//! expansion there without negative powers extends over the polydisc.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::curve::{binomial_series, LocalR, SpectralCurve};
use super::global::GlobalRat;
use super::local::{expand_local, Slot};
use super::restr::{inner_zero, restr_w02, w02, Nested};
use crate::arith::{factorial, rat, rat_int, CriticalRingElem, Laurent, Rational, Ring, EXACT};
use crate::chiodo::bernoulli_number;
use crate::error::{Error, Result};

/// Which bilocal combination of `W̃_{0,2}(w_1, w_2)` to form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum W02Combination {
    /// `S_1 S_2 W̃_{0,2} + 2/(X(w_1) - X(w_2))^2`.
    SymSym,
    /// `S_1 Δ_2 W̃_{0,2}`.
    SymDelta,
    /// `Δ_1 Δ_2 W̃_{0,2} - 2/(X(w_1) - X(w_2))^2`.
    DeltaDelta,
    /// `Δ_1 Δ_2 W̃_{0,2}` without the redefinition.
    PlainDeltaDelta,
}

/// A germ in `(t_1, t_2)`: outer series in `t_2`, coefficients series in `t_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bilocal {
    pub series: Nested,
}

impl Bilocal {
    /// Lowest power of `t_2` and of `t_1` that occurs.
    pub fn valuations(&self) -> (i64, i64) {
        let inner = self.series.raw().iter().map(|c| c.val()).min().unwrap_or(0);
        (self.series.val(), inner)
    }

    /// Orders known in `t_2` and in `t_1` (the minimum over the coefficients).
    pub fn precision(&self) -> (i64, i64) {
        let outer = self.series.prec();
        let inner = (self.series.val()..outer).map(|k| self.series.coeff(k).map_or(i64::MIN, |c| c.prec())).min().unwrap_or(EXACT);
        (outer, inner)
    }

    pub fn is_holomorphic(&self) -> bool {
        let (a, b) = self.valuations();
        a >= 0 && b >= 0
    }

    /// `t_1^a t_2^b` times the germ.
    pub fn times_monomial(&self, a: i64, b: i64) -> Self {
        Self { series: self.series.shift(b).map(self.series.zero_elem().clone(), |c| c.shift(a)) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { series: &self.series - &o.series }
    }

    fn truncate(&self, outer: i64, inner: i64) -> Self {
        Self { series: trunc(&self.series, outer, inner) }
    }
}

fn trunc(x: &Nested, outer: i64, inner: i64) -> Nested {
    x.truncate(outer).map(x.zero_elem().clone(), |c| c.truncate(inner))
}

fn constant(curve: &SpectralCurve, c: CriticalRingElem) -> Nested {
    Laurent::monomial(Laurent::monomial(c, 0), 0)
        .map(inner_zero(curve), |x| x.clone())
}

/// `φ(A) = Σ φ_k A^k` for a power series `φ` and a nested series `A` whose
/// terms all have positive total degree.
fn eval_at(curve: &SpectralCurve, phi: &LocalR, a: &Nested, outer: i64, inner: i64) -> Result<Nested> {
    let top = outer + inner;
    if phi.prec() < top {
        return Err(Error::TruncationUnderflow { requested: top, available: phi.prec() });
    }
    if phi.val() < 0 {
        return Err(Error::BadSeries("eval_at needs a power series".into()));
    }
    let mut acc = Laurent::zero_series(inner_zero(curve), EXACT);
    for k in (0..top).rev() {
        acc = trunc(&(&acc * a), outer, inner);
        let c = phi.coeff(k)?;
        if !c.vanishes() {
            acc = &acc + &constant(curve, c);
        }
    }
    Ok(acc)
}

/// A power series in the outer variable with constant inner coefficients.
fn outer_series(curve: &SpectralCurve, s: &LocalR) -> Nested {
    s.map(inner_zero(curve), |c| Laurent::monomial(c.clone(), 0))
}

/// An inner series placed in outer degree zero.
fn inner_series(curve: &SpectralCurve, s: &LocalR) -> Nested {
    Laurent::exact(0, vec![s.clone()], inner_zero(curve))
}

/// A point `p + A` near the critical point. Points depending on one variable
/// only are kept as plain series so that evaluation is a composition.
#[derive(Clone, Debug)]
enum Point {
    Inner(LocalR),
    Outer(LocalR),
    Mixed(Nested),
}

impl Point {
    fn nested(&self, curve: &SpectralCurve) -> Nested {
        match self {
            Point::Inner(s) => inner_series(curve, s),
            Point::Outer(s) => outer_series(curve, s),
            Point::Mixed(a) => a.clone(),
        }
    }
}

/// Evaluation of two-point rational functions at `(p + A, p + B)`.
struct Evaluator {
    curve: SpectralCurve,
    outer: i64,
    inner: i64,
    sigma: LocalR,
    x: LocalR,
    crit: LocalR,
}

impl Evaluator {
    fn new(curve: &SpectralCurve, outer: i64, inner: i64) -> Result<Self> {
        let top = outer + inner + 2;
        let sigma = curve.deck_transformation(top)?.sigma;
        Ok(Self {
            curve: *curve,
            outer,
            inner,
            sigma,
            x: curve.local_x(top),
            crit: curve.critical_poly_at(&curve.t())?.truncate(top),
        })
    }

    fn at(&self, phi: &LocalR, a: &Point) -> Result<Nested> {
        Ok(match a {
            Point::Inner(s) => inner_series(&self.curve, &phi.compose(s)?.truncate(self.inner)),
            Point::Outer(s) => outer_series(&self.curve, &phi.compose(s)?.truncate(self.outer)),
            Point::Mixed(a) => eval_at(&self.curve, phi, a, self.outer, self.inner)?,
        })
    }

    fn sigma_of(&self, a: &Point) -> Result<Point> {
        Ok(match a {
            Point::Inner(s) => Point::Inner(self.sigma.compose(s)?),
            Point::Outer(s) => Point::Outer(self.sigma.compose(s)?),
            Point::Mixed(a) => Point::Mixed(eval_at(&self.curve, &self.sigma, a, self.outer, self.inner)?),
        })
    }

    fn x_of(&self, a: &Point) -> Result<Nested> {
        self.at(&self.x, a)
    }

    fn inverse(&self, d: &Nested) -> Result<Nested> {
        let d = trunc(d, self.outer + d.val(), self.inner);
        Ok(trunc(&d.inv_to(self.outer - d.val().min(0) + 2)?, self.outer, self.inner))
    }

    fn mul(&self, a: &Nested, b: &Nested) -> Nested {
        trunc(&(a * b), self.outer, self.inner)
    }

    /// `f(p + A, p + B)` for a two-variable rational function `f`.
    fn rational(&self, f: &GlobalRat, a: &Point, b: &Point) -> Result<Nested> {
        assert_eq!(f.nvars(), 2);
        let t = self.curve.t();
        let mut num = Laurent::zero_series(inner_zero(&self.curve), EXACT);
        let mut rows: alloc::collections::BTreeMap<(u32, u32), Rational> = alloc::collections::BTreeMap::new();
        for (e, c) in f.num().terms() {
            rows.insert((e[0], e[1]), c.clone());
        }
        let top = self.outer + self.inner + 2;
        for ((alpha, beta), c) in &rows {
            let za = self.at(&self.curve.power_at(*alpha as i64, &t, top)?, a)?;
            let zb = self.at(&self.curve.power_at(*beta as i64, &t, top)?, b)?;
            num = &num + &self.mul(&za, &zb).scale_rat(c);
        }
        let mut out = num;
        let pa = self.inverse(&self.at(&self.crit, a)?)?;
        let pb = self.inverse(&self.at(&self.crit, b)?)?;
        for _ in 0..f.pden()[0] {
            out = self.mul(&out, &pa);
        }
        for _ in 0..f.pden()[1] {
            out = self.mul(&out, &pb);
        }
        let e = f.pairs().get(&(0, 1)).copied().unwrap_or(0);
        if e > 0 {
            let d = self.inverse(&(&a.nested(&self.curve) - &b.nested(&self.curve)))?;
            for _ in 0..e {
                out = self.mul(&out, &d);
            }
        }
        Ok(out)
    }

    /// `1/(X(p + A) - X(p + B))^2`.
    fn inverse_dx_squared(&self, a: &Point, b: &Point) -> Result<Nested> {
        let d = self.inverse(&(&self.x_of(a)? - &self.x_of(b)?))?;
        Ok(self.mul(&d, &d))
    }

    /// `x_a x_b / (x_a - x_b)^2 - 1/(X_a - X_b)^2` with `x = e^X`, a power series
    /// in `X_a - X_b`.
    fn exponential_remainder(&self, a: &Point, b: &Point) -> Result<Nested> {
        // e^d/(e^d - 1)^2 = 1/d^2 - Σ_{k >= 1} (2k - 1) B_{2k} d^{2k-2} / (2k)!
        let top = self.outer + self.inner + 2;
        let mut coeffs = vec![self.curve.ring_zero(); top as usize];
        for k in 1..=(top as u32 + 2) / 2 {
            let c = -rat_int(2 * k as i64 - 1) * bernoulli_number(2 * k) / factorial(2 * k);
            if (2 * k - 2) < top as u32 {
                coeffs[2 * k as usize - 2] = self.curve.ring_const(c);
            }
        }
        let g = Laurent::new(0, coeffs, top, self.curve.ring_zero());
        let d = &self.x_of(a)? - &self.x_of(b)?;
        let d2 = self.mul(&d, &d);
        // Horner in d^2; g has a constant term, so eval_at does not apply
        let mut acc = Laurent::zero_series(inner_zero(&self.curve), EXACT);
        // d^2 has total degree at least four
        for k in (0..=(self.outer + self.inner) / 4 + 1).rev() {
            acc = self.mul(&acc, &d2);
            let c = g.coeff(2 * k)?;
            if !c.vanishes() {
                acc = &acc + &constant(&self.curve, c);
            }
        }
        Ok(acc)
    }

    /// `W̃_{0,2}(p + A, p + B)` with two `w` arguments: `B/(dX dX) - x x/(x - x)^2`.
    fn w02_tilde(&self, a: &Point, b: &Point) -> Result<Nested> {
        let w = self.rational(&w02(self.curve.n()), a, b)?;
        Ok(&(&w - &self.inverse_dx_squared(a, b)?) - &self.exponential_remainder(a, b)?)
    }
}

/// The two points of the polydisc check: `w_1 = p + t_1` (inner) and
/// `w_2 = p + t_2` (outer).
fn polydisc_points(curve: &SpectralCurve) -> (Point, Point) {
    (Point::Inner(curve.t()), Point::Outer(curve.t()))
}

/// Sum over `(ε_1, ε_2) ∈ {id, σ}^2` of `sign · W̃_{0,2}` for the given signs
/// on the `σ`-images of each variable (`+1` for `S`, `-1` for `Δ`). The
/// `x x/(x - x)^2` part of `W̃_{0,2}` depends on `X` alone, which `σ` preserves,
/// so it enters once with weight `(1 + s_1)(1 + s_2)`.
fn combine(ev: &Evaluator, a: &Point, b: &Point, s1: i64, s2: i64) -> Result<Nested> {
    let sa = ev.sigma_of(a)?;
    let sb = ev.sigma_of(b)?;
    let w = w02(ev.curve.n());
    let mut acc = Laurent::zero_series(inner_zero(&ev.curve), EXACT);
    for (x, ex) in [(a, 1), (&sa, s1)] {
        for (y, ey) in [(b, 1), (&sb, s2)] {
            acc = &acc + &ev.rational(&w, x, y)?.scale_rat(&rat_int(ex * ey));
        }
    }
    let weight = (1 + s1) * (1 + s2);
    if weight != 0 {
        let xterm = &ev.inverse_dx_squared(a, b)? + &ev.exponential_remainder(a, b)?;
        acc = &acc - &xterm.scale_rat(&rat_int(weight));
    }
    Ok(acc)
}

/// The combination `which` of `W̃_{0,2}(p + t_1, p + t_2)`, known below `order`
/// in both variables.
pub fn regularized_w02(curve: &SpectralCurve, which: W02Combination, order: i64) -> Result<Bilocal> {
    if order < 2 {
        return Err(Error::BadSeries("order must be at least 2".into()));
    }
    let mut extra = 4;
    loop {
        // the t_2^k coefficient carries t_1^{-k-2}, so the inner order must
        // exceed the outer one by about twice the outer one
        let outer = order + extra / 2;
        let out = combination_at(curve, which, outer, order + 2 * outer + extra)?;
        let (po, pi) = out.precision();
        if po >= order && pi >= order {
            return Ok(out.truncate(order, order));
        }
        if extra > 128 {
            return Err(Error::TruncationUnderflow { requested: order, available: po.min(pi) });
        }
        extra *= 2;
    }
}

fn combination_at(curve: &SpectralCurve, which: W02Combination, outer: i64, inner: i64) -> Result<Bilocal> {
    {
        let ev = Evaluator::new(curve, outer, inner)?;
        let (a, b) = polydisc_points(curve);
        let series = match which {
            W02Combination::SymSym => &combine(&ev, &a, &b, 1, 1)? + &ev.inverse_dx_squared(&a, &b)?.scale_rat(&rat(2, 1)),
            W02Combination::SymDelta => combine(&ev, &a, &b, 1, -1)?,
            W02Combination::DeltaDelta => &combine(&ev, &a, &b, -1, -1)? - &ev.inverse_dx_squared(&a, &b)?.scale_rat(&rat(2, 1)),
            W02Combination::PlainDeltaDelta => combine(&ev, &a, &b, -1, -1)?,
        };
        Ok(Bilocal { series })
    }
}

/// The diagonal and antidiagonal part of the unregularized `Δ_1 Δ_2 W̃_{0,2}`:
/// `2/(w_1 w_2 (w_1 + w_2)^2) + 2/(w_1 w_2 (w_1 - w_2)^2)` in the coordinate
/// `X - X(p) = w^2/2`, i.e. `2 (U_1 + U_2) / (w_1 w_2 (U_1 - U_2)^2)` with
/// `U = X - X(p)`. Here `w_1 w_2 = X''(p) u_1 u_2` with `u = t + O(t^2)`
/// defined over `R`, so no square root of `X''(p)` is needed.
pub fn delta_delta_singular_part(curve: &SpectralCurve, order: i64) -> Result<Bilocal> {
    let mut extra = 8;
    loop {
        let (outer, inner) = (order + extra, order + 2 * extra);
        let ev = Evaluator::new(curve, outer, inner)?;
        let (a, b) = polydisc_points(curve);
        let ua = ev.x_of(&a)?;
        let ub = ev.x_of(&b)?;
        let d2 = ev.inverse(&(&ua - &ub))?;
        let top = outer + inner + 2;
        // u = t sqrt(X(p + t) - X(p)) / (c_2 t^2)), c_2 = X''(p)/2
        let y = curve.local_x(top + 2);
        let c2 = y.coeff(2)?;
        let c2inv = c2.inverse().ok_or(Error::NonInvertible)?;
        let e = &y.shift(-2).scale(&c2inv) - &Laurent::monomial(curve.ring_const(Rational::one()), 0);
        let root_inv = binomial_series(curve, rat(-1, 2), top).compose(&e)?.truncate(top);
        // 1/(w_1 w_2) = t_1^{-1} t_2^{-1} / (X''(p) ψ_1 ψ_2), ψ = u/t
        let xpp_inv = curve.second_derivative_at_p().inverse().ok_or(Error::NonInvertible)?;
        let psi1 = inner_series(curve, &root_inv.shift(-1));
        let psi2 = outer_series(curve, &root_inv).shift(-1);
        let w_inv = ev.mul(&psi1, &psi2).scale(&Laurent::monomial(xpp_inv.clone(), 0));
        let mut s = ev.mul(&ev.mul(&(&ua + &ub), &ev.mul(&d2, &d2)), &w_inv).scale_rat(&rat(2, 1));
        s = trunc(&s, outer, inner);
        let out = Bilocal { series: s };
        let (po, pi) = out.precision();
        if po >= order && pi >= order {
            return Ok(out.truncate(order, order));
        }
        if extra > 128 {
            return Err(Error::TruncationUnderflow { requested: order, available: po.min(pi) });
        }
        extra *= 2;
    }
}

/// Both sides of `S_z f(z, …, z) = 2^{1-r} Σ_{|J| even} Π_{I} S Π_{J} Δ f |_{z_i = z}`,
/// as series in `t = z - p`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizationReport {
    pub lhs: LocalR,
    pub rhs: LocalR,
}

impl SymmetrizationReport {
    pub fn holds(&self) -> bool {
        let prec = self.lhs.prec().min(self.rhs.prec());
        (&self.lhs - &self.rhs).truncate(prec).is_zero()
    }
}

/// Sign of the `σ`-choice `mask` under `Π_{j ∈ J} Δ_j` (with `S` on the rest).
fn delta_sign(mask: u32, j: u32) -> i64 {
    if (mask & j).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `2^{1-r} Σ_{|J| even} Σ_{mask} sign · value(mask)`, where `mask` marks the
/// variables sent to `σ`.
fn even_delta_sum<T: Clone>(r: usize, value: impl Fn(u32) -> Result<T>, add: impl Fn(&T, &T, i64) -> T) -> Result<T> {
    let mut acc: Option<T> = None;
    for j in 0u32..(1 << r) {
        if j.count_ones() % 2 == 1 {
            continue;
        }
        for mask in 0u32..(1 << r) {
            let v = value(mask)?;
            let sign = delta_sign(mask, j);
            acc = Some(match acc {
                None => add(&v, &v, sign - 1),
                Some(a) => add(&a, &v, sign),
            });
        }
    }
    Ok(acc.expect("at least the empty J"))
}

/// The identity for a rational function `f` without diagonal poles (e.g. a
/// polynomial), of any arity, known below `prec`.
pub fn symmetrization_probe(curve: &SpectralCurve, f: &GlobalRat, prec: i64) -> Result<SymmetrizationReport> {
    if !f.pairs().is_empty() {
        return Err(Error::BadSeries("use the W̃_{0,2} probe for functions with diagonal poles".into()));
    }
    let r = f.nvars();
    let sigma = curve.deck_transformation(prec + 2)?.sigma;
    let t = curve.t();
    let at = |mask: u32| -> Result<LocalR> {
        let slots: Vec<Slot> =
            (0..r).map(|i| Slot::Local(if mask & (1 << i) == 0 { t.clone() } else { sigma.clone() })).collect();
        let s = expand_local(curve, f, &slots, 0, prec)?;
        Ok(s.series.map(curve.ring_zero(), |c| c.terms().next().map_or(curve.ring_zero(), |(_, v)| v.clone())))
    };
    let lhs = &at(0)? + &at((1 << r) - 1)?;
    let sum = even_delta_sum(r, at, |a, b, s| a + &b.scale_rat(&rat_int(s)))?;
    let rhs = sum.scale_rat(&(Rational::one() / rat_int(1i64 << (r - 1))));
    Ok(SymmetrizationReport { lhs, rhs: rhs.truncate(prec) })
}

/// The identity for `W̃_{0,2}(w_1, w_2)` with two `w` arguments. The left side
/// uses the diagonal value `W̃_{0,2}(z, z) = restr W_{0,2} + 1/12`; the right
/// side evaluates each term at `(p + t + ε, p + t)` and lets `ε → 0`.
pub fn symmetrization_probe_w02(curve: &SpectralCurve, prec: i64) -> Result<SymmetrizationReport> {
    let mut extra = 8;
    loop {
        let sigma = curve.deck_transformation(prec + 2 * extra)?.sigma;
        let r = restr_w02(curve, 0, 0, prec + 2 * extra)?;
        let diag = &r + &Laurent::monomial(curve.ring_const(rat(1, 12)), 0);
        let lhs = &diag + &diag.compose(&sigma)?;

        // ε^0 is needed; the individual terms have poles of order two in ε
        let ev = Evaluator::new(curve, 4, prec + 2 * extra)?;
        let t = curve.t();
        let a = Point::Mixed(Laurent::new(
            0,
            vec![t.clone(), Laurent::monomial(curve.ring_const(Rational::one()), 0)],
            EXACT,
            inner_zero(curve),
        ));
        let b = Point::Inner(t);
        let pts = [(a.clone(), b.clone()), (ev.sigma_of(&a)?, ev.sigma_of(&b)?)];
        let value = |mask: u32| -> Result<Nested> {
            let x = &pts[(mask & 1) as usize].0;
            let y = &pts[((mask >> 1) & 1) as usize].1;
            ev.w02_tilde(x, y)
        };
        let sum = even_delta_sum(2, value, |a, b, s| a + &b.scale_rat(&rat_int(s)))?.scale_rat(&rat(1, 2));
        if sum.prec() > 0 && sum.val() >= 0 {
            let rhs = sum.coeff(0)?;
            if rhs.prec() >= prec && lhs.prec() >= prec {
                return Ok(SymmetrizationReport { lhs: lhs.truncate(prec), rhs: rhs.truncate(prec) });
            }
        } else if sum.prec() > 0 && sum.val() < 0 {
            return Err(Error::BadSeries("the symmetrized sum kept a pole on the diagonal".into()));
        }
        if extra > 128 {
            return Err(Error::TruncationUnderflow { requested: prec, available: sum.prec() });
        }
        extra *= 2;
    }
}
