use alloc::vec;
use alloc::vec::Vec;

use super::curve::{LocalR, SpectralCurve};
use super::global::GlobalRat;
use super::local::{expand_local, expand_product, LocalSeries, Slot};
use super::poly::{PolyR, QPoly};
use super::recursion::CorrelatorStore;
use super::restr::{restr_w02, w02_derivative};
use crate::arith::{rat, Ring};
use crate::error::{Error, Result};

/// Outcome of a holomorphicity check at the generic critical point: the
/// expression as a series in `t = z - p`, with spectators kept global.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopReport {
    pub expression: LocalSeries,
}

impl LoopReport {
    /// Negative-order coefficients that do not vanish.
    pub fn principal_part(&self) -> Vec<(i64, PolyR)> {
        self.expression.series.principal_part()
    }

    pub fn passed(&self) -> bool {
        self.expression.prec() >= 0 && self.principal_part().is_empty()
    }
}

/// Runs `body` with the deck transformation known to a growing order until no
/// truncation is hit.
pub(crate) fn with_deck<T>(
    store: &mut CorrelatorStore,
    start: i64,
    mut body: impl FnMut(&mut CorrelatorStore, &LocalR, i64) -> Result<T>,
) -> Result<T> {
    let mut order = start.max(4);
    loop {
        let sigma = store.sigma(order)?;
        match body(store, &sigma, order) {
            Err(Error::TruncationUnderflow { .. }) if order < 512 => order *= 2,
            other => return other,
        }
    }
}

fn default_order(g: u32, n: usize) -> i64 {
    6 * g as i64 + 2 * n as i64 + 8
}

fn spectator_slots(ks: &[usize]) -> impl Iterator<Item = Slot> + '_ {
    ks.iter().map(|&k| Slot::Spectator(k))
}

fn sum(acc: Option<LocalSeries>, term: LocalSeries, n: usize) -> Option<LocalSeries> {
    Some(match acc {
        None => term,
        Some(a) => a.add(&term, n),
    })
}

fn zero_report(curve: &SpectralCurve, nvars: usize, prec: i64) -> LoopReport {
    LoopReport { expression: LocalSeries::zero(curve, nvars, prec) }
}

/// `W_{g,n}(z, z_2, …) + W_{g,n}(σ(z), z_2, …)` at the generic critical point.
pub fn check_linear_loop(store: &mut CorrelatorStore, g: u32, n: usize) -> Result<LoopReport> {
    let w = store.w(g, n)?;
    let curve = store.curve();
    let spect: Vec<usize> = (0..n - 1).collect();
    with_deck(store, default_order(g, n), |_, sigma, _| {
        let mut a = vec![Slot::Local(curve.t())];
        a.extend(spectator_slots(&spect));
        let mut b = vec![Slot::Local(sigma.clone())];
        b.extend(spectator_slots(&spect));
        let ea = expand_local(&curve, &w, &a, n - 1, 0)?;
        let eb = expand_local(&curve, &w, &b, n - 1, 0)?;
        Ok(LoopReport { expression: ea.add(&eb, curve.n()) })
    })
}

/// `(P_i f)(z) = Σ_j Res_{w → p_j} f(…, w, …) ∫_{p_j}^w B(·, z_i)` for a
/// density `f`, as a rational function.
pub fn project(curve: &SpectralCurve, f: &GlobalRat, i: usize) -> Result<GlobalRat> {
    let nv = f.nvars();
    let big_n = curve.n();
    let slots: Vec<Slot> = (0..nv).map(|k| if k == i { Slot::Local(curve.t()) } else { Slot::Spectator(k) }).collect();
    let e = expand_local(curve, f, &slots, nv, 0)?;
    let pole = (-e.val()).max(0);
    // ∫_p^w B(·, z) = Σ_{m ≥ 1} (w - p)^m Q(z, p)^{m+1} / P(z)^{m+1}
    let q = PolyR::difference_quotient(nv, i, big_n);
    let pz = QPoly::critical(nv, i, big_n);
    let mut acc = PolyR::zero(nv, big_n);
    let mut q_pow = q.clone();
    for m in 1..pole {
        q_pow = q_pow.times(&q);
        let c = e.series.coeff(-1 - m)?;
        if c.vanishes() {
            continue;
        }
        acc.add_assign_ref(&c.times(&q_pow).times_qpoly(&pz.pow((pole - 1 - m) as u32)));
    }
    let mut den = e.den.clone();
    den[i] = pole.max(0) as u32;
    Ok(GlobalRat::new(acc.trace(), den).reduce(big_n))
}

/// `P_i ω_{g,n} = ω_{g,n}` for every variable `i`.
pub fn check_projection(store: &mut CorrelatorStore, g: u32, n: usize) -> Result<bool> {
    let f = store.density(g, n)?;
    let curve = store.curve();
    for i in 0..n {
        if !project(&curve, &f, i)?.same_function(&f, curve.n()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both forms of the quadratic loop equation with `n` spectators.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticReport {
    /// `W_{g-1,n+2}(z, σz, …) + Σ W(z, …) W(σz, …)`.
    pub direct: LoopReport,
    /// `½ restr restr Δ_1 Δ_2` of the two-point disconnected correlator.
    pub delta: LoopReport,
}

impl QuadraticReport {
    pub fn passed(&self) -> bool {
        self.direct.passed() && self.delta.passed()
    }
}

/// Splits of the spectators `0..n` into two labelled groups.
pub(crate) fn two_splits(n: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    (0u32..(1 << n)).map(move |mask| {
        let a = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let b = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        (a, b)
    })
}

fn is_correlator(g: i64, n: usize) -> bool {
    g >= 0 && n >= 1
}

/// Checks the quadratic loop equation for `(g, n)`, known below `prec` in
/// `t` (use `0` for the principal part alone).
pub fn check_quadratic_loop(store: &mut CorrelatorStore, g: u32, n: usize) -> Result<QuadraticReport> {
    check_quadratic_loop_to(store, g, n, 0)
}

pub fn check_quadratic_loop_to(store: &mut CorrelatorStore, g: u32, n: usize, prec: i64) -> Result<QuadraticReport> {
    // make sure every ingredient exists before the deck loop borrows the store
    let mut needed = Vec::new();
    if g >= 1 {
        needed.push((g - 1, n + 2));
    }
    for g1 in 0..=g {
        for k in 0..=n {
            needed.push((g1, k + 1));
        }
    }
    for &(gg, nn) in &needed {
        if (gg, nn) != (0, 1) {
            store.density(gg, nn)?;
        }
    }
    let curve = store.curve();
    let big_n = curve.n();
    let spect: Vec<usize> = (0..n).collect();
    with_deck(store, default_order(g, n + 2) + prec, |store, sigma, _| {
        let t = curve.t();
        let s = sigma.clone();
        let mut direct: Option<LocalSeries> = None;
        let mut delta: Option<LocalSeries> = None;

        // one connected piece through both points
        if g >= 1 {
            let w = store.w(g - 1, n + 2)?;
            let mut slots = vec![Slot::Local(t.clone()), Slot::Local(s.clone())];
            slots.extend(spectator_slots(&spect));
            direct = sum(direct, expand_local(&curve, &w, &slots, n, prec)?, big_n);
            if (g - 1, n + 2) == (0, 2) {
                delta = sum(delta, regularized_delta_delta(&curve, 0, 0, sigma, n, prec)?, big_n);
            } else {
                for (e1, e2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let pick = |e: i32| if e == 0 { Slot::Local(t.clone()) } else { Slot::Local(s.clone()) };
                    let mut slots = vec![pick(e1), pick(e2)];
                    slots.extend(spectator_slots(&spect));
                    let mut term = expand_local(&curve, &w, &slots, n, prec)?;
                    if (e1 + e2) % 2 == 1 {
                        term = term.scale_rat(&rat(-1, 1));
                    }
                    delta = sum(delta, term, big_n);
                }
            }
        }
        // two pieces, one through each point
        for (k1, k2) in two_splits(n) {
            for g1 in 0..=g {
                let g2 = g - g1;
                let (n1, n2) = (k1.len() + 1, k2.len() + 1);
                if !is_correlator(g1 as i64, n1) || !is_correlator(g2 as i64, n2) {
                    continue;
                }
                let w1 = store.w(g1, n1)?;
                let w2 = store.w(g2, n2)?;
                let at = |p: &LocalR, ks: &[usize]| {
                    let mut v = vec![Slot::Local(p.clone())];
                    v.extend(spectator_slots(ks));
                    v
                };
                let (a1, a2) = (at(&t, &k1), at(&s, &k1));
                let (b1, b2) = (at(&t, &k2), at(&s, &k2));
                direct = sum(direct, expand_product(&curve, &[(&w1, &a1), (&w2, &b2)], n, prec)?, big_n);
                // Δ(W_1) Δ(W_2) = W_1(t)W_2(t) - W_1(t)W_2(σ) - W_1(σ)W_2(t) + W_1(σ)W_2(σ)
                for (x, y, sign) in [(&a1, &b1, 1), (&a1, &b2, -1), (&a2, &b1, -1), (&a2, &b2, 1)] {
                    let term = expand_product(&curve, &[(&w1, x), (&w2, y)], n, prec)?;
                    delta = sum(delta, term.scale_rat(&rat(sign, 1)), big_n);
                }
            }
        }
        let direct = direct.map(|e| LoopReport { expression: e }).unwrap_or_else(|| zero_report(&curve, n, prec));
        let delta = delta
            .map(|e| LoopReport { expression: e.scale_rat(&rat(1, 2)) })
            .unwrap_or_else(|| zero_report(&curve, n, prec));
        Ok(QuadraticReport { direct, delta })
    })
}

/// `restr_{w_1 = z} restr_{w_2 = z} D_1^i D_2^j Δ_1 Δ_2 W̃_{0,2}(w_1, w_2)` with the
/// regularization `-2/(X(w_1) - X(w_2))^2`, at `z = p + t`, known below `prec`.
///
/// The terms `W(w_1, w_2) + W(σw_1, σw_2)` have a diagonal pole and go through
/// the residue; the pure `X` terms have no `restr` residue; the mixed terms are
/// regular on the diagonal and are evaluated.
pub fn regularized_delta_delta(
    curve: &SpectralCurve,
    i: u32,
    j: u32,
    sigma: &LocalR,
    nvars: usize,
    prec: i64,
) -> Result<LocalSeries> {
    let f = w02_derivative(curve.n(), i, j);
    let mut work = prec + 8 + 2 * (i + j) as i64;
    loop {
        let r = restr_w02(curve, i, j, work)?;
        if r.prec() < prec + 2 {
            if work > 4 * prec + 256 {
                return Err(Error::TruncationUnderflow { requested: prec, available: r.prec() });
            }
            work *= 2;
            continue;
        }
        let r_sigma = r.compose(sigma)?;
        let diag = &r.truncate(prec) + &r_sigma.truncate(prec);
        let cross1 = expand_local(curve, &f, &[Slot::Local(sigma.clone()), Slot::Local(curve.t())], nvars, prec)?;
        let cross2 = expand_local(curve, &f, &[Slot::Local(curve.t()), Slot::Local(sigma.clone())], nvars, prec)?;
        return Ok(LocalSeries::from_local(&diag, nvars).sub(&cross1, curve.n()).sub(&cross2, curve.n()).truncate(prec));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_loop_on_small_correlators() {
        for (q, r) in [(1, 1), (1, 2), (2, 1)] {
            let mut s = CorrelatorStore::new(SpectralCurve::new(q, r));
            for (g, n) in [(0, 2), (0, 3), (1, 1)] {
                assert!(check_linear_loop(&mut s, g, n).unwrap().passed(), "q={q} r={r} ({g},{n})");
            }
        }
    }

    #[test]
    fn projection_fixes_correlators_and_kills_polynomials() {
        let mut s = CorrelatorStore::new(SpectralCurve::new(1, 2));
        assert!(check_projection(&mut s, 0, 3).unwrap());
        assert!(check_projection(&mut s, 1, 1).unwrap());
        let f = s.density(1, 1).unwrap();
        let poly = GlobalRat::polynomial(QPoly::monomial(1, vec![3], rat(5, 1)));
        let with_poly = f.add(&poly, 2);
        assert!(project(&s.curve(), &with_poly, 0).unwrap().same_function(&f, 2));
    }

    #[test]
    fn quadratic_loop_both_forms() {
        let mut s = CorrelatorStore::new(SpectralCurve::new(1, 1));
        for (g, n) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let rep = check_quadratic_loop(&mut s, g, n).unwrap();
            assert!(rep.direct.passed(), "direct ({g},{n}): {:?}", rep.direct.principal_part());
            assert!(rep.delta.passed(), "delta ({g},{n}): {:?}", rep.delta.principal_part());
        }
    }

    #[test]
    fn corrupted_omega11_fails_the_quadratic_loop() {
        let mut s = CorrelatorStore::new(SpectralCurve::new(1, 1));
        let f = s.density(1, 1).unwrap();
        let bump = GlobalRat::new(QPoly::monomial(1, vec![1], rat(1, 7)), vec![f.pden()[0]]);
        s.replace(1, 1, f.add(&bump, 1));
        let rep = check_quadratic_loop(&mut s, 1, 0).unwrap();
        assert!(!rep.passed());
    }
}
