//! Polynomials in `x_0..x_{n-1}` and rational functions whose denominators are
//! products of differences `x_a - x_b`, truncated by effective degree.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{rat_int, Rational};

pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Exps, Rational>,
}

impl Poly {
    pub fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn deg(e: &Exps) -> u32 {
        e.iter().sum()
    }

    /// Product, dropping monomials of degree above `max_deg`.
    pub fn mul(&self, o: &Poly, max_deg: u32) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &self.terms {
            let da = Self::deg(ea);
            for (eb, cb) in &o.terms {
                if da + Self::deg(eb) > max_deg {
                    continue;
                }
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn add_assign(&mut self, o: &Poly) {
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::default();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// `x_k d/dx_k`.
    pub fn euler(&self, k: usize) -> Poly {
        let mut out = Poly::default();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * rat_int(e[k] as i64));
        }
        out
    }

    /// Multiplies by `x_k`.
    pub fn times_var(&self, k: usize) -> Poly {
        let mut out = Poly::default();
        for (e, v) in &self.terms {
            let mut e = e.clone();
            e[k] += 1;
            out.add_term(e, v.clone());
        }
        out
    }

    /// Multiplies by `x_a - x_b`.
    pub fn times_diff(&self, a: usize, b: usize) -> Poly {
        let mut out = self.times_var(a);
        out.add_assign(&self.times_var(b).scale(&rat_int(-1)));
        out
    }

    /// Exact division by `x_a - x_b`; `None` if it leaves a remainder.
    pub fn div_diff(&self, a: usize, b: usize) -> Option<Poly> {
        // group by all exponents except that of x_a
        let mut groups: BTreeMap<Exps, BTreeMap<u32, Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let ea = rest[a];
            rest[a] = 0;
            groups.entry(rest).or_default().insert(ea, c.clone());
        }
        let mut out = Poly::default();
        let mut remainder = Poly::default();
        for (rest, coeffs) in groups {
            // P = Σ p_i x_a^i: quotient Σ_{j<i} p_i x_a^j x_b^{i-1-j}, remainder Σ p_i x_b^i
            for (&i, p) in &coeffs {
                for j in 0..i {
                    let mut e = rest.clone();
                    e[a] = j;
                    e[b] += i - 1 - j;
                    out.add_term(e, p.clone());
                }
                let mut e = rest.clone();
                e[b] += i;
                remainder.add_term(e, p.clone());
            }
        }
        if remainder.is_zero() {
            Some(out)
        } else {
            None
        }
    }
}

/// `num / Π_{(a,b)} (x_a - x_b)^{e}` with `a < b`, keeping numerator
/// monomials whose degree minus the denominator degree is at most `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: BTreeMap<(usize, usize), u32>,
    pub cap: u32,
}

impl RatFn {
    pub fn from_poly(num: Poly, cap: u32) -> Self {
        let mut r = Self { num, den: BTreeMap::new(), cap };
        r.truncate();
        r
    }

    pub fn zero(cap: u32) -> Self {
        Self::from_poly(Poly::default(), cap)
    }

    pub fn den_degree(&self) -> u32 {
        self.den.values().sum()
    }

    fn truncate(&mut self) {
        let max = self.cap + self.den_degree();
        self.num.terms.retain(|e, _| e.iter().sum::<u32>() <= max);
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone(), cap: self.cap }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut den = self.den.clone();
        for (p, e) in &o.den {
            *den.entry(*p).or_insert(0) += e;
        }
        let cap = self.cap.min(o.cap);
        let dd: u32 = den.values().sum();
        let num = self.num.mul(&o.num, cap + dd);
        Self { num, den, cap }
    }

    /// Rewrites over a denominator dividing `target` exponent-wise.
    fn raise_to(&self, target: &BTreeMap<(usize, usize), u32>) -> Poly {
        let mut num = self.num.clone();
        for (&(a, b), &e) in target {
            let have = self.den.get(&(a, b)).copied().unwrap_or(0);
            for _ in have..e {
                num = num.times_diff(a, b);
            }
        }
        num
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut den = self.den.clone();
        for (p, e) in &o.den {
            let x = den.entry(*p).or_insert(0);
            *x = (*x).max(*e);
        }
        let mut num = self.raise_to(&den);
        num.add_assign(&o.raise_to(&den));
        let mut r = Self { num, den, cap: self.cap.min(o.cap) };
        r.truncate();
        r
    }

    /// `x_k d/dx_k`.
    pub fn euler(&self, k: usize) -> Self {
        let pairs: Vec<((usize, usize), u32)> =
            self.den.iter().filter(|((a, b), e)| (*a == k || *b == k) && **e > 0).map(|(p, e)| (*p, *e)).collect();
        if pairs.is_empty() {
            return Self { num: self.num.euler(k), den: self.den.clone(), cap: self.cap };
        }
        // D(N / Π d_p^{e_p}) = [D(N) Π d_p - N Σ_p e_p D(d_p) Π_{p' != p} d_p'] / (Π d_p^{e_p+1})
        let mut first = self.num.euler(k);
        for ((a, b), _) in &pairs {
            first = first.times_diff(*a, *b);
        }
        let mut acc = first;
        for (i, ((a, b), e)) in pairs.iter().enumerate() {
            // D_k(x_a - x_b) = x_a if k == a, -x_b if k == b
            let mut term = if *a == k { self.num.times_var(*a) } else { self.num.times_var(*b).scale(&rat_int(-1)) };
            for (j, ((a2, b2), _)) in pairs.iter().enumerate() {
                if i != j {
                    term = term.times_diff(*a2, *b2);
                }
            }
            acc.add_assign(&term.scale(&rat_int(-(*e as i64))));
        }
        let mut den = self.den.clone();
        for (p, _) in &pairs {
            *den.get_mut(p).unwrap() += 1;
        }
        let mut r = Self { num: acc, den, cap: self.cap };
        r.truncate();
        r
    }

    /// Cancels denominator factors as far as exact division allows.
    pub fn reduce(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (&(a, b), e) in den.iter_mut() {
            while *e > 0 {
                match num.div_diff(a, b) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|_, e| *e > 0);
        if num.is_zero() {
            den.clear();
        }
        Self { num, den, cap: self.cap }
    }
}
