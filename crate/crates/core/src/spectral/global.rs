use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::poly::QPoly;
use crate::arith::{rat_int, Rational};
use crate::error::{Error, Result};

/// Rational function `num / (Π_i P(z_i)^{pden_i} Π_{i<j} (z_i - z_j)^{e_ij})`
/// with `P(z) = N z^N - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalRat {
    num: QPoly,
    pden: Vec<u32>,
    pairs: BTreeMap<(usize, usize), u32>,
}

impl GlobalRat {
    pub fn new(num: QPoly, pden: Vec<u32>) -> Self {
        assert_eq!(num.nvars(), pden.len());
        Self { num, pden, pairs: BTreeMap::new() }
    }

    /// Assembles a function from its numerator and denominator exponents, as
    /// returned by [`num`](Self::num), [`pden`](Self::pden) and [`pairs`](Self::pairs).
    pub fn from_parts(num: QPoly, pden: Vec<u32>, pairs: BTreeMap<(usize, usize), u32>) -> Result<Self> {
        if num.nvars() != pden.len() {
            return Err(Error::Parse(format!("{} numerator variables, {} denominator exponents", num.nvars(), pden.len())));
        }
        if let Some(&(i, j)) = pairs.keys().find(|&&(i, j)| i >= j || j >= pden.len()) {
            return Err(Error::Parse(format!("bad diagonal factor ({i}, {j})")));
        }
        Ok(Self { num, pden, pairs })
    }

    pub fn polynomial(num: QPoly) -> Self {
        let n = num.nvars();
        Self::new(num, vec![0; n])
    }

    /// `1/(z_i - z_j)^2` in `nvars` variables: the density of `B`.
    pub fn bergman(nvars: usize, i: usize, j: usize) -> Self {
        let mut out = Self::polynomial(QPoly::constant(nvars, Rational::one()));
        out.add_pair(i, j, 2);
        out
    }

    /// Multiplies by `(z_i - z_j)^{-e}`.
    pub fn add_pair(&mut self, i: usize, j: usize, e: u32) {
        assert_ne!(i, j);
        let key = (i.min(j), i.max(j));
        if i > j && e % 2 == 1 {
            self.num = self.num.scale(&-Rational::one());
        }
        *self.pairs.entry(key).or_insert(0) += e;
    }

    pub fn nvars(&self) -> usize {
        self.pden.len()
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn pden(&self) -> &[u32] {
        &self.pden
    }

    pub fn pairs(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.pairs
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { num: self.num.scale(c), pden: self.pden.clone(), pairs: self.pairs.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars(), o.nvars());
        let mut out = Self {
            num: self.num.mul(&o.num),
            pden: self.pden.iter().zip(&o.pden).map(|(a, b)| a + b).collect(),
            pairs: self.pairs.clone(),
        };
        for (&k, &e) in &o.pairs {
            *out.pairs.entry(k).or_insert(0) += e;
        }
        out
    }

    /// Sum over the least common denominator.
    pub fn add(&self, o: &Self, n: usize) -> Self {
        assert_eq!(self.nvars(), o.nvars());
        let nv = self.nvars();
        let pden: Vec<u32> = self.pden.iter().zip(&o.pden).map(|(a, b)| *a.max(b)).collect();
        let mut pairs = self.pairs.clone();
        for (&k, &e) in &o.pairs {
            let slot = pairs.entry(k).or_insert(0);
            *slot = (*slot).max(e);
        }
        let lift = |f: &Self| {
            let mut num = f.num.clone();
            for i in 0..nv {
                let extra = pden[i] - f.pden[i];
                if extra > 0 {
                    num = num.mul(&QPoly::critical(nv, i, n).pow(extra));
                }
            }
            for (&(i, j), &e) in &pairs {
                let extra = e - f.pairs.get(&(i, j)).copied().unwrap_or(0);
                if extra > 0 {
                    num = num.mul(&difference(nv, i, j).pow(extra));
                }
            }
            num
        };
        let num = lift(self).add(&lift(o));
        Self { num, pden, pairs }
    }

    /// Cancels every factor `P(z_i)` and `z_i - z_j` that divides the numerator.
    pub fn reduce(&self, n: usize) -> Self {
        let mut out = self.clone();
        if out.num.is_zero() {
            out.pden.iter_mut().for_each(|d| *d = 0);
            out.pairs.clear();
            return out;
        }
        for i in 0..out.nvars() {
            while out.pden[i] > 0 {
                match out.num.div_critical(i, n) {
                    Some(q) => {
                        out.num = q;
                        out.pden[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        let keys: Vec<_> = out.pairs.keys().copied().collect();
        for (i, j) in keys {
            while out.pairs[&(i, j)] > 0 {
                match div_difference(&out.num, i, j) {
                    Some(q) => {
                        out.num = q;
                        *out.pairs.get_mut(&(i, j)).unwrap() -= 1;
                    }
                    None => break,
                }
            }
            if out.pairs[&(i, j)] == 0 {
                out.pairs.remove(&(i, j));
            }
        }
        out
    }

    /// `∂/∂z_i`.
    pub fn partial(&self, i: usize, n: usize) -> Self {
        let nv = self.nvars();
        let d = self.pden[i];
        // d/dz [num P^{-d} Π (z_i - z_j)^{-e}] over P^{d+1} Π (z_i - z_j)^{e+1}
        let involved: Vec<((usize, usize), u32)> =
            self.pairs.iter().filter(|((a, b), _)| *a == i || *b == i).map(|(k, e)| (*k, *e)).collect();
        let p = QPoly::critical(nv, i, n);
        let dp = p.partial(i);
        let lin: Vec<QPoly> = involved.iter().map(|((a, b), _)| difference(nv, *a, *b)).collect();
        let prod_lin = lin.iter().fold(QPoly::constant(nv, Rational::one()), |acc, l| acc.mul(l));
        let mut num = self.num.partial(i).mul(&p).mul(&prod_lin);
        if d > 0 {
            num = num.add(&self.num.mul(&dp).mul(&prod_lin).scale(&-rat_int(d as i64)));
        }
        for (k, ((a, _), e)) in involved.iter().enumerate() {
            // d/dz_i (z_a - z_b) is +1 when i == a, -1 otherwise
            let sign = if *a == i { -rat_int(*e as i64) } else { rat_int(*e as i64) };
            let others = lin
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .fold(QPoly::constant(nv, Rational::one()), |acc, (_, q)| acc.mul(q));
            num = num.add(&self.num.mul(&p).mul(&others).scale(&sign));
        }
        let mut out = self.clone();
        out.num = num;
        out.pden[i] += 1;
        for (k, _) in &involved {
            *out.pairs.get_mut(k).unwrap() += 1;
        }
        out
    }

    /// `D_i = d/dX(z_i) = -(z_i/P(z_i)) ∂/∂z_i`.
    pub fn d_op(&self, i: usize, n: usize) -> Self {
        let nv = self.nvars();
        let mut e = vec![0; nv];
        e[i] = 1;
        let mut out = self.partial(i, n);
        out.num = out.num.mul(&QPoly::monomial(nv, e, -Rational::one()));
        out.pden[i] += 1;
        out.reduce(n)
    }

    /// Converts the density `ω / Π dz_i` into `W = ω / Π dX(z_i)`.
    pub fn density_to_w(&self, n: usize) -> Self {
        let nv = self.nvars();
        let mut out = self.clone();
        for i in 0..nv {
            let mut e = vec![0; nv];
            e[i] = 1;
            out.num = out.num.mul(&QPoly::monomial(nv, e, -Rational::one()));
            out.pden[i] += 1;
        }
        out.reduce(n)
    }

    /// Variable `i` of `self` becomes variable `map[i]` of the result.
    pub fn embed(&self, map: &[usize], nvars: usize) -> Self {
        let mut pden = vec![0; nvars];
        for (i, &d) in self.pden.iter().enumerate() {
            pden[map[i]] += d;
        }
        let mut out = Self { num: self.num.embed(map, nvars), pden, pairs: BTreeMap::new() };
        for (&(i, j), &e) in &self.pairs {
            out.add_pair(map[i], map[j], e);
        }
        out
    }

    /// Swaps variables `i` and `j`.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut map: Vec<usize> = (0..self.nvars()).collect();
        map.swap(i, j);
        self.embed(&map, self.nvars())
    }

    /// Equality as rational functions.
    pub fn same_function(&self, o: &Self, n: usize) -> bool {
        self.add(&o.scale(&-Rational::one()), n).num.is_zero()
    }

    /// Symmetric under every transposition `(0 i)`.
    pub fn is_symmetric(&self, n: usize) -> bool {
        (1..self.nvars()).all(|i| self.same_function(&self.swapped(0, i), n))
    }

    /// Checks `f = O(z_i^{-2})` at infinity in every variable, i.e. that the
    /// differential has no pole there.
    pub fn check_regular_at_infinity(&self, n: usize) -> Result<()> {
        for i in 0..self.nvars() {
            let deg = self.num.degree_in(i).unwrap_or(0) as i64;
            let den = self.pden[i] as i64 * n as i64
                + self.pairs.iter().filter(|((a, b), _)| *a == i || *b == i).map(|(_, e)| *e as i64).sum::<i64>();
            if !self.num.is_zero() && deg > den - 2 {
                return Err(Error::PoleEscape(format!("variable {i}: numerator degree {deg} against denominator {den}")));
            }
        }
        Ok(())
    }
}

/// `z_i - z_j` as a polynomial.
pub(crate) fn difference(nvars: usize, i: usize, j: usize) -> QPoly {
    let mut ei = vec![0; nvars];
    ei[i] = 1;
    let mut ej = vec![0; nvars];
    ej[j] = 1;
    QPoly::monomial(nvars, ei, Rational::one()).add(&QPoly::monomial(nvars, ej, -Rational::one()))
}

/// Exact quotient by `z_i - z_j`, by synthetic division in `z_i`.
fn div_difference(f: &QPoly, i: usize, j: usize) -> Option<QPoly> {
    let nv = f.nvars();
    let mut rem: BTreeMap<Vec<u32>, Rational> = f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    let mut quo = QPoly::zero(nv);
    loop {
        let top = rem.iter().filter(|(e, _)| e[i] > 0).max_by_key(|(e, _)| e[i]).map(|(e, c)| (e.clone(), c.clone()));
        let Some((e, c)) = top else { break };
        // c z_i^a m = c z_i^{a-1} m (z_i - z_j) + c z_i^{a-1} z_j m
        let mut lower = e.clone();
        lower[i] -= 1;
        rem.remove(&e);
        let mut shifted = lower.clone();
        shifted[j] += 1;
        let slot = rem.entry(shifted.clone()).or_insert_with(Rational::zero);
        *slot += &c;
        if slot.is_zero() {
            rem.remove(&shifted);
        }
        quo.add_term(lower, c);
    }
    if rem.is_empty() {
        Some(quo)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn reduce_cancels_common_factors() {
        let n = 2;
        let p = QPoly::critical(2, 0, n);
        let d = difference(2, 0, 1);
        let mut f = GlobalRat::new(p.mul(&d).mul(&QPoly::constant(2, rat(3, 1))), vec![2, 0]);
        f.add_pair(0, 1, 1);
        let r = f.reduce(n);
        assert_eq!(r.pden(), &[1, 0]);
        assert!(r.pairs().is_empty());
        assert_eq!(r.num(), &QPoly::constant(2, rat(3, 1)));
    }

    #[test]
    fn pair_orientation() {
        let a = GlobalRat::bergman(2, 0, 1);
        let mut b = GlobalRat::polynomial(QPoly::constant(2, Rational::one()));
        b.add_pair(1, 0, 2);
        assert!(a.same_function(&b, 1));
        let mut c = GlobalRat::polynomial(QPoly::constant(2, Rational::one()));
        c.add_pair(1, 0, 1);
        let mut d = GlobalRat::polynomial(QPoly::constant(2, -Rational::one()));
        d.add_pair(0, 1, 1);
        assert!(c.same_function(&d, 1));
    }

    #[test]
    fn partial_of_bergman() {
        // d/dz_0 (z_0 - z_1)^{-2} = -2 (z_0 - z_1)^{-3}
        let b = GlobalRat::bergman(2, 0, 1);
        let mut expected = GlobalRat::polynomial(QPoly::constant(2, rat(-2, 1)));
        expected.add_pair(0, 1, 3);
        assert!(b.partial(0, 3).same_function(&expected, 3));
        let mut expected1 = GlobalRat::polynomial(QPoly::constant(2, rat(2, 1)));
        expected1.add_pair(0, 1, 3);
        assert!(b.partial(1, 3).same_function(&expected1, 3));
    }

    #[test]
    fn d_op_of_log_term() {
        // X = log z - z^N, so D z^N = z^N N / (1 - N z^N) = -N z^N / P
        let n = 3;
        let f = GlobalRat::polynomial(QPoly::monomial(1, vec![3], Rational::one()));
        let expected = GlobalRat::new(QPoly::monomial(1, vec![3], rat(-3, 1)), vec![1]);
        assert!(f.d_op(0, n).same_function(&expected, n));
    }

    #[test]
    fn symmetry_detection() {
        let n = 2;
        let sym = GlobalRat::new(QPoly::monomial(2, vec![1, 1], Rational::one()), vec![1, 1]);
        assert!(sym.is_symmetric(n));
        let asym = GlobalRat::new(QPoly::monomial(2, vec![2, 1], Rational::one()), vec![1, 1]);
        assert!(!asym.is_symmetric(n));
    }
}
