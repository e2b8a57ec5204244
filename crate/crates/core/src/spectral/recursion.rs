use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;


use super::curve::{LocalR, SpectralCurve};
use super::global::GlobalRat;
use super::local::{expand_local, local_pole_bound, LocalSeries, Slot};
use super::poly::{PolyR, QPoly};
use crate::arith::{rat, Laurent, Ring};
use crate::error::{Error, Result};

/// Correlator densities `ω_{g,n} / Π dz_i` computed by the recursion, keyed by
/// `(g, n)`. The unstable `(0, 2)` entry is the Bergman kernel.
#[derive(Clone, Debug)]
pub struct CorrelatorStore {
    curve: SpectralCurve,
    table: BTreeMap<(u32, usize), GlobalRat>,
    deck: Option<LocalR>,
}

impl CorrelatorStore {
    pub fn new(curve: SpectralCurve) -> Self {
        let mut table = BTreeMap::new();
        table.insert((0, 2), GlobalRat::bergman(2, 0, 1));
        Self { curve, table, deck: None }
    }

    pub fn curve(&self) -> SpectralCurve {
        self.curve
    }

    /// Density of `ω_{g,n}`, computing every missing correlator it depends on.
    pub fn density(&mut self, g: u32, n: usize) -> Result<GlobalRat> {
        if n == 0 || (g == 0 && n == 1) {
            return Err(Error::BadSeries("ω_{0,1} and n = 0 are not densities of the recursion".into()));
        }
        if let Some(f) = self.table.get(&(g, n)) {
            return Ok(f.clone());
        }
        let chi = 2 * g as usize + n - 2;
        for c in 1..chi {
            for gg in 0..=c.div_ceil(2) as u32 {
                let nn = c + 2 - 2 * gg as usize;
                if nn >= 1 && (gg, nn) != (0, 1) && !self.table.contains_key(&(gg, nn)) {
                    self.compute(gg, nn)?;
                }
            }
        }
        self.compute(g, n)?;
        Ok(self.table[&(g, n)].clone())
    }

    /// Replaces a stored density, e.g. to check that the loop equations notice
    /// a corrupted correlator.
    pub fn replace(&mut self, g: u32, n: usize, f: GlobalRat) {
        self.table.insert((g, n), f);
    }

    /// Drops a stored density so that the next request recomputes it. The
    /// Bergman kernel stays.
    pub fn forget(&mut self, g: u32, n: usize) {
        if (g, n) != (0, 2) {
            self.table.remove(&(g, n));
        }
    }

    /// Every stored density, the Bergman kernel included.
    pub fn entries(&self) -> impl Iterator<Item = ((u32, usize), &GlobalRat)> {
        self.table.iter().map(|(&k, v)| (k, v))
    }

    /// `W_{g,n} = ω_{g,n} / Π dX(z_i)`, with `W_{0,1} = y = z^q`.
    pub fn w(&mut self, g: u32, n: usize) -> Result<GlobalRat> {
        if (g, n) == (0, 1) {
            return Ok(GlobalRat::polynomial(QPoly::monomial(1, vec![self.curve.q], rat(1, 1))));
        }
        Ok(self.density(g, n)?.density_to_w(self.curve.n()))
    }

    pub(crate) fn sigma(&mut self, order: i64) -> Result<LocalR> {
        if let Some(s) = &self.deck {
            if s.prec() > order {
                return Ok(s.truncate(order + 1));
            }
        }
        let s = self.curve.deck_transformation(order.max(2))?.sigma;
        self.deck = Some(s.clone());
        Ok(s)
    }

    fn compute(&mut self, g: u32, n: usize) -> Result<()> {
        let mut order = 4 * (2 * g as i64 + n as i64) + 8;
        loop {
            match self.ceo_step(g, n, order) {
                Ok(f) => {
                    self.table.insert((g, n), f);
                    return Ok(());
                }
                Err(Error::TruncationUnderflow { .. }) if order < 512 => order *= 2,
                Err(e) => return Err(e),
            }
        }
    }

    /// One step of the recursion, with the deck transformation known to
    /// `order`. Expects every correlator of smaller `2g - 2 + n` in the table.
    fn ceo_step(&mut self, g: u32, n: usize, order: i64) -> Result<GlobalRat> {
        let curve = self.curve;
        let big_n = curve.n();
        let sigma = self.sigma(order)?;
        let t = curve.t();
        let spectators: Vec<usize> = (1..n).collect();

        // pairs of factors (f1 at p + t, f2 at p + σ) and the single two-point term
        let mut bracket: Option<LocalSeries> = None;
        let push = |term: LocalSeries, acc: &mut Option<LocalSeries>| {
            *acc = Some(match acc.take() {
                None => term,
                Some(a) => a.add(&term, big_n),
            });
        };
        if g >= 1 {
            if let Some(f) = self.table.get(&(g - 1, n + 1)) {
                let mut slots = vec![Slot::Local(t.clone()), Slot::Local(sigma.clone())];
                slots.extend(spectators.iter().map(|&k| Slot::Spectator(k)));
                let term = expand_local(&curve, f, &slots, n, 1)?;
                push(term, &mut bracket);
            }
        }
        let m = spectators.len();
        for mask in 0u32..(1 << m) {
            let left: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| spectators[i]).collect();
            let right: Vec<usize> = (0..m).filter(|i| mask & (1 << i) == 0).map(|i| spectators[i]).collect();
            for g1 in 0..=g {
                let g2 = g - g1;
                let (n1, n2) = (left.len() + 1, right.len() + 1);
                if (g1, n1) == (0, 1) || (g2, n2) == (0, 1) {
                    continue;
                }
                let (Some(f1), Some(f2)) = (self.table.get(&(g1, n1)), self.table.get(&(g2, n2))) else {
                    return Err(Error::BadSeries("missing correlator in the recursion".into()));
                };
                let mut s1 = vec![Slot::Local(t.clone())];
                s1.extend(left.iter().map(|&k| Slot::Spectator(k)));
                let mut s2 = vec![Slot::Local(sigma.clone())];
                s2.extend(right.iter().map(|&k| Slot::Spectator(k)));
                let b1 = local_pole_bound(f1, &s1);
                let b2 = local_pole_bound(f2, &s2);
                let e1 = expand_local(&curve, f1, &s1, n, 1 + b2)?;
                let e2 = expand_local(&curve, f2, &s2, n, 1 + b1)?;
                push(e1.mul(&e2), &mut bracket);
            }
        }
        let bracket = bracket.ok_or_else(|| Error::BadSeries("empty recursion kernel".into()))?;
        let pole = (-bracket.val()).max(0);
        let dsigma = LocalSeries::from_local(&sigma.derivative().truncate(1 + pole), n);
        let f = dsigma.mul(&bracket).truncate(1);
        let big_m = (-f.val()).max(0);

        // G_m = (t^m - σ^m) / ((y(p+t) - y(p+σ)) X'(p+t)), known below M
        let dy = &curve.y_at(&t, big_m + 4)? - &curve.y_at(&sigma, big_m + 4)?;
        let den = (&dy * &curve.dx_at(&t, big_m + 4)?).truncate(big_m + 4);
        let den_inv = den.inv_to(big_m + 3)?.truncate(big_m);
        let q1 = PolyR::difference_quotient(n, 0, big_n);
        let p1 = QPoly::critical(n, 0, big_n);
        let mut acc = PolyR::zero(n, big_n);
        let mut t_pow = Laurent::monomial(curve.ring_const(rat(1, 1)), 0);
        let mut s_pow = t_pow.clone();
        let mut q_pow = q1.clone();
        for mm in 1..=(big_m + 1) {
            t_pow = &t_pow * &t;
            s_pow = (&s_pow * &sigma).truncate(big_m + 2);
            q_pow = q_pow.times(&q1);
            let g_m = (&(&t_pow - &s_pow).truncate(big_m + 2) * &den_inv).truncate(big_m);
            let res = f.scale_local(&g_m).residue()?;
            if res.vanishes() {
                continue;
            }
            let p_pow = p1.pow((big_m + 1 - mm) as u32);
            acc.add_assign_ref(&res.times(&q_pow).times_qpoly(&p_pow));
        }
        let mut pden = f.den.clone();
        pden[0] = (big_m + 2) as u32;
        let out = GlobalRat::new(acc.trace().scale(&rat(1, 2)), pden).reduce(big_n);
        if !out.is_symmetric(big_n) {
            return Err(Error::AsymmetryDetected(alloc::format!("ω_{{{g},{n}}}")));
        }
        out.check_regular_at_infinity(big_n)?;
        Ok(out)
    }
}
