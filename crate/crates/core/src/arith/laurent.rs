use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::{rat_int, Rational, Ring};
use crate::error::{Error, Result};

/// Precision marker for series that are known exactly (polynomials).
pub const EXACT: i64 = i64::MAX / 4;

/// Truncated Laurent series `Σ_{k ≥ val} c_k t^k`, known for `k < prec`.
///
/// Coefficients at orders `val <= k < prec` beyond the stored vector are zero.
/// Reading at or past `prec` is a [`Error::TruncationUnderflow`].
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C: Ring> {
    val: i64,
    coeffs: Vec<C>,
    prec: i64,
    zero: C,
}

fn cap(p: i64) -> i64 {
    if p >= EXACT / 2 {
        EXACT
    } else {
        p
    }
}

impl<C: Ring> Laurent<C> {
    /// Builds `Σ coeffs[i] t^{val+i}` known below `prec`.
    pub fn new(val: i64, coeffs: Vec<C>, prec: i64, zero: C) -> Self {
        let mut s = Self { val, coeffs, prec: cap(prec), zero };
        s.normalize();
        s
    }

    pub fn exact(val: i64, coeffs: Vec<C>, zero: C) -> Self {
        Self::new(val, coeffs, EXACT, zero)
    }

    pub fn zero_series(zero: C, prec: i64) -> Self {
        Self::new(prec.min(0), Vec::new(), prec, zero)
    }

    pub fn monomial(c: C, k: i64) -> Self {
        let zero = c.zero_like();
        Self::exact(k, alloc::vec![c], zero)
    }

    fn normalize(&mut self) {
        if self.prec != EXACT {
            let keep = (self.prec - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|c| c.vanishes()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.vanishes()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.val = if self.prec == EXACT { 0 } else { self.prec };
        }
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn zero_elem(&self) -> &C {
        &self.zero
    }

    /// True when every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored coefficients starting at `val`.
    pub fn raw(&self) -> &[C] {
        &self.coeffs
    }

    /// Order of the last stored coefficient plus one.
    pub fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn coeff(&self, k: i64) -> Result<C> {
        if k >= self.prec {
            return Err(Error::TruncationUnderflow { requested: k, available: self.prec });
        }
        Ok(self.coeff_unchecked(k))
    }

    fn coeff_unchecked(&self, k: i64) -> C {
        if k < self.val || k >= self.end() {
            self.zero.clone()
        } else {
            self.coeffs[(k - self.val) as usize].clone()
        }
    }

    fn coeff_ref(&self, k: i64) -> Option<&C> {
        if k < self.val || k >= self.end() {
            None
        } else {
            Some(&self.coeffs[(k - self.val) as usize])
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.val, self.coeffs.clone(), prec.min(self.prec), self.zero.clone())
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(self.val + k, self.coeffs.clone(), cap(self.prec.saturating_add(k)), self.zero.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.times(c)).collect();
        Self::new(self.val, coeffs, self.prec, self.zero.clone())
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scaled(c)).collect();
        Self::new(self.val, coeffs, self.prec, self.zero.clone())
    }

    pub fn map<D: Ring>(&self, zero: D, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::new(self.val, self.coeffs.iter().map(f).collect(), self.prec, zero)
    }

    /// Principal part: all terms of negative order.
    pub fn principal_part(&self) -> Vec<(i64, C)> {
        (self.val..self.end().min(0))
            .filter_map(|k| self.coeff_ref(k).filter(|c| !c.vanishes()).map(|c| (k, c.clone())))
            .collect()
    }

    pub fn residue(&self) -> Result<C> {
        self.coeff(-1)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scaled(&rat_int(self.val + i as i64)))
            .collect();
        Self::new(self.val - 1, coeffs, cap(self.prec.saturating_sub(1)), self.zero.clone())
    }

    /// Termwise primitive; fails if a `t^{-1}` term is present.
    pub fn integral(&self) -> Result<Self> {
        if let Some(c) = self.coeff_ref(-1) {
            if !c.vanishes() {
                return Err(Error::BadSeries("primitive of a series with residue".into()));
            }
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.val + i as i64;
                if k == -1 {
                    c.zero_like()
                } else {
                    c.scaled(&(Rational::from_integer(1.into()) / rat_int(k + 1)))
                }
            })
            .collect();
        Ok(Self::new(self.val + 1, coeffs, cap(self.prec.saturating_add(1)), self.zero.clone()))
    }

    /// Inverse with `rel_len` known coefficients beyond the leading one (used
    /// when `self` is exact; otherwise the intrinsic precision caps it).
    pub fn inv_to(&self, rel_len: i64) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::BadSeries("inverse of a zero series".into()));
        }
        let rel = if self.is_exact() { rel_len } else { (self.prec - self.val).min(rel_len) };
        let a0inv = self.coeffs[0].inverse().ok_or(Error::NonInvertible)?;
        let n = rel.max(0) as usize;
        let mut out: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(a0inv.clone());
                continue;
            }
            let mut acc = self.zero.clone();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_assign_ref(&self.coeffs[j].times(&out[k - j]));
            }
            out.push(acc.times(&a0inv).negated());
        }
        Ok(Self::new(-self.val, out, -self.val + rel, self.zero.clone()))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_exact() {
            return Err(Error::BadSeries("inverse of an exact series needs an explicit length".into()));
        }
        self.inv_to(self.prec - self.val)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::monomial(self.zero.one_like(), 0);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(t))`, where `inner` has positive valuation. Negative powers
    /// of `inner` are formed via its inverse.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.val < 1 {
            return Err(Error::BadSeries("inner series must have positive valuation".into()));
        }
        let v = inner.val;
        let rel = inner.prec.saturating_sub(v);
        // A truncation error d in `inner` changes the result by f'(inner) d, and
        // f' has valuation val - 1, or >= 0 when f is a power series.
        let lead = if self.val == 0 { 1 } else { self.val };
        let mut prec = cap(lead.saturating_mul(v).saturating_add(rel));
        if !self.is_exact() {
            prec = prec.min(self.prec.saturating_mul(v));
        }
        if prec == EXACT && !inner.is_exact() {
            prec = inner.prec;
        }
        if self.val < 0 && prec == EXACT {
            return Err(Error::BadSeries("negative powers of an exact series need a precision".into()));
        }
        let inner_t = inner.clone();
        let mut acc = Self::zero_series(self.zero.clone(), prec);
        if self.coeffs.is_empty() {
            return Ok(acc);
        }
        let last = self.end() - 1;
        // positive part by Horner
        if last >= 0 {
            let mut h = Self::zero_series(self.zero.clone(), EXACT);
            for k in (0..=last).rev() {
                h = (&h * &inner_t).truncate(prec);
                if let Some(c) = self.coeff_ref(k) {
                    h = &h + &Self::monomial(c.clone(), 0);
                }
            }
            acc = &acc + &h;
        }
        if self.val < 0 {
            let need = prec - self.val * v; // relative length needed for inner^{-1}
            let inv = inner_t.inv_to(need)?;
            let mut h = Self::zero_series(self.zero.clone(), EXACT);
            for k in self.val..=-1 {
                if let Some(c) = self.coeff_ref(k) {
                    h = &h + &Self::monomial(c.clone(), 0);
                }
                h = &h * &inv;
            }
            acc = &acc + &h;
        }
        Ok(acc.truncate(prec))
    }

    /// Compositional inverse of `s` (with `s(0) = 0`, `s'(0)` invertible):
    /// returns `g` with `s(g(x)) = x + O(x^{order+1})`, via
    /// `[x^n] g = (1/n) [t^{n-1}] (t/s)^n`.
    pub fn lagrange_invert(s: &Self, order: i64) -> Result<Self> {
        if s.val != 1 {
            return Err(Error::BadSeries("lagrange inversion needs s(0) = 0 and s'(0) != 0".into()));
        }
        if !s.is_exact() && s.prec < order + 1 {
            return Err(Error::TruncationUnderflow { requested: order, available: s.prec - 1 });
        }
        let t_over_s = s.shift(-1).inv_to(order)?;
        let mut out = Vec::with_capacity(order as usize);
        let mut pw = Self::monomial(s.zero.one_like(), 0);
        for n in 1..=order {
            pw = (&pw * &t_over_s).truncate(order);
            out.push(pw.coeff(n - 1)?.scaled(&(Rational::from_integer(1.into()) / rat_int(n))));
        }
        Ok(Self::new(1, out, order + 1, s.zero.clone()))
    }
}

impl Laurent<Rational> {
    /// `x d/dx`.
    pub fn euler_derivative(&self) -> Self {
        self.derivative().shift(1)
    }
}

/// Series over a ring form a ring, so they can serve as coefficients of
/// series in a second variable. Exact series other than monomials have no
/// inverse here, since the inverse would need an explicit length.
impl<C: Ring> Ring for Laurent<C> {
    fn zero_like(&self) -> Self {
        Self::zero_series(self.zero.clone(), EXACT)
    }
    fn one_like(&self) -> Self {
        Self::monomial(self.zero.one_like(), 0)
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale_rat(c)
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                let c = self.coeffs[0].inverse()?;
                return Some(Self::exact(-self.val, alloc::vec![c], self.zero.clone()));
            }
            return None;
        }
        self.inv().ok()
    }
}

impl<C: Ring> Add for &Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, o: &Laurent<C>) -> Laurent<C> {
        let prec = self.prec.min(o.prec);
        if self.coeffs.is_empty() {
            return o.truncate(prec);
        }
        if o.coeffs.is_empty() {
            return self.truncate(prec);
        }
        let lo = self.val.min(o.val);
        let hi = self.end().max(o.end()).min(prec);
        let coeffs = (lo..hi)
            .map(|k| match (self.coeff_ref(k), o.coeff_ref(k)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => self.zero.clone(),
            })
            .collect();
        Laurent::new(lo, coeffs, prec, self.zero.clone())
    }
}

impl<C: Ring> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent::new(self.val, self.coeffs.iter().map(Ring::negated).collect(), self.prec, self.zero.clone())
    }
}

impl<C: Ring> Sub for &Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, o: &Laurent<C>) -> Laurent<C> {
        self + &(-o)
    }
}

impl<C: Ring> Mul for &Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, o: &Laurent<C>) -> Laurent<C> {
        let prec = cap(self.prec.saturating_add(o.val).min(o.prec.saturating_add(self.val)));
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Laurent::zero_series(self.zero.clone(), prec);
        }
        let val = self.val + o.val;
        let len = ((self.coeffs.len() + o.coeffs.len() - 1) as i64).min(prec - val).max(0) as usize;
        let mut out: Vec<C> = alloc::vec![self.zero.clone(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.vanishes() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                if b.vanishes() {
                    continue;
                }
                out[i + j].add_assign_ref(&a.times(b));
            }
        }
        Laurent::new(val, out, prec, self.zero.clone())
    }
}
