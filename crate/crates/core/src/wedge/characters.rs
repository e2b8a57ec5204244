//! Symmetric group characters, central characters of the stable centre and
//! completed cycles.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::Zero;

use super::fock::{border_strips, f_operator_eigenvalue};
use super::Partition;
use crate::arith::{binomial, factorial, linalg, rat_int, Rational};
use crate::error::{Error, Result};

/// Memo for Murnaghan–Nakayama evaluations. Not shared across threads; each
/// task owns one.
#[derive(Default)]
pub struct CharacterTable {
    memo: HashMap<(Partition, Partition), i64>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ^λ(ν)` for `|λ| = |ν|`.
    pub fn chi(&mut self, lambda: &Partition, nu: &Partition) -> i64 {
        if lambda.size() != nu.size() {
            return 0;
        }
        if nu.is_empty() {
            return 1;
        }
        let key = (lambda.clone(), nu.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let k = nu.parts()[0];
        let rest = Partition::new(nu.parts()[1..].to_vec());
        let mut acc = 0;
        for (rho, sign) in border_strips(lambda, k, false) {
            acc += sign as i64 * self.chi(&rho, &rest);
        }
        self.memo.insert(key, acc);
        acc
    }

    pub fn dim(&mut self, lambda: &Partition) -> i64 {
        let ones = Partition::empty().with_ones(lambda.size());
        self.chi(lambda, &ones)
    }

    /// Scalar by which `C_{|μ|,λ}` acts in the irreducible representation `μ`.
    pub fn central_character(&mut self, lambda: &Partition, mu: &Partition) -> Rational {
        let (d, p) = (lambda.size(), mu.size());
        if p < d {
            return Rational::zero();
        }
        let nu = lambda.with_ones(p - d);
        let coef = stable_coefficient(lambda, &nu);
        let class = factorial(p) / nu.z();
        coef * class * rat_int(self.chi(mu, &nu)) / rat_int(self.dim(mu))
    }
}

/// Coefficient of a permutation of cycle type `sigma` in `C_λ`: the number of
/// ways to pick cycles of `sigma` whose lengths form `λ`, all other points
/// being fixed. Zero if `sigma` has non-trivial cycles outside `λ`.
pub fn stable_coefficient(lambda: &Partition, sigma: &Partition) -> Rational {
    if lambda.without_ones() != sigma.without_ones() {
        return Rational::zero();
    }
    binomial(sigma.multiplicity(1) as i64, lambda.multiplicity(1) as i64)
}

pub fn central_character(lambda: &Partition, mu: &Partition) -> Rational {
    CharacterTable::new().central_character(lambda, mu)
}

/// `p_n(μ) = (1/n) Σ_i [(μ_i - i + 1/2)^n - (-i + 1/2)^n]`.
pub fn shifted_power_sum(n: u32, mu: &Partition) -> Rational {
    f_operator_eigenvalue(n, mu) / rat_int(n as i64)
}

/// Coefficients `c_λ` (with `|λ| <= n`) of the completed cycle `C̄_n = Σ c_λ C_λ`.
pub fn completed_cycle(n: u32) -> Result<BTreeMap<Partition, Rational>> {
    assert!(n >= 1);
    let unknowns: Vec<Partition> = Partition::all_up_to(n).into_iter().filter(|p| !p.is_empty()).collect();
    let mut table = CharacterTable::new();
    let mut bound = n + 2;
    loop {
        let tests: Vec<Partition> = Partition::all_up_to(bound).into_iter().filter(|p| !p.is_empty()).collect();
        let rows: Vec<Vec<Rational>> =
            tests.iter().map(|mu| unknowns.iter().map(|l| table.central_character(l, mu)).collect()).collect();
        let rhs: Vec<Rational> = tests.iter().map(|mu| shifted_power_sum(n, mu)).collect();
        match linalg::solve(&rows, &rhs) {
            Ok(Some(sol)) => {
                let out: BTreeMap<Partition, Rational> =
                    unknowns.into_iter().zip(sol).filter(|(_, c)| !c.is_zero()).collect();
                verify(n, &out, bound + 1, &mut table)?;
                return Ok(out);
            }
            Ok(None) => return Err(Error::SingularSystem),
            Err(Error::SingularSystem) if bound < n + 8 => bound += 1,
            Err(e) => return Err(e),
        }
    }
}

fn verify(n: u32, c: &BTreeMap<Partition, Rational>, size: u32, table: &mut CharacterTable) -> Result<()> {
    for mu in Partition::all_of_size(size) {
        let lhs: Rational = c.iter().map(|(l, v)| v * table.central_character(l, &mu)).sum();
        if lhs != shifted_power_sum(n, &mu) {
            return Err(Error::SingularSystem);
        }
    }
    Ok(())
}

/// Evaluates `Σ c_λ f_λ(μ)`.
pub fn evaluate_combination(c: &BTreeMap<Partition, Rational>, mu: &Partition) -> Rational {
    let mut t = CharacterTable::new();
    c.iter().map(|(l, v)| v * t.central_character(l, mu)).fold(Rational::zero(), |a, b| a + b)
}

/// Number of permutations of cycle type `nu`.
pub fn class_size(nu: &Partition) -> Rational {
    factorial(nu.size()) / nu.z()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec())
    }

    #[test]
    fn character_orthogonality() {
        let mut t = CharacterTable::new();
        for n in 1..7 {
            let ps = Partition::all_of_size(n);
            for a in &ps {
                for b in &ps {
                    let s: Rational = ps
                        .iter()
                        .map(|nu| rat_int(t.chi(a, nu) * t.chi(b, nu)) / nu.z())
                        .sum();
                    assert_eq!(s, if a == b { rat_int(1) } else { rat_int(0) });
                }
            }
        }
    }

    #[test]
    fn central_character_examples() {
        for mu in Partition::all_up_to(4).into_iter().skip(1) {
            assert_eq!(central_character(&part(&[1]), &mu), rat_int(mu.size() as i64));
        }
        assert_eq!(central_character(&part(&[2]), &part(&[2])), rat_int(1));
        assert_eq!(central_character(&part(&[3]), &part(&[2])), rat_int(0));
    }

    #[test]
    fn low_completed_cycles() {
        let c2 = completed_cycle(2).unwrap();
        assert_eq!(c2.into_iter().collect::<Vec<_>>(), alloc::vec![(part(&[2]), rat(1, 1))]);
        let c3 = completed_cycle(3).unwrap();
        assert_eq!(c3.len(), 3);
        assert_eq!(c3[&part(&[1, 1])], rat(1, 1));
        assert_eq!(c3[&part(&[1])], rat(1, 12));
    }
}
