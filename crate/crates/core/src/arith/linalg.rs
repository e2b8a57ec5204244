//! Exact Gaussian elimination over the rationals.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Solves `a x = b` for a possibly overdetermined system.
///
/// Returns `Err(SingularSystem)` when the columns are dependent, `Ok(None)`
/// when the system is inconsistent and `Ok(Some(x))` otherwise.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> =
        a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain(core::iter::once(v.clone())).collect()).collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            return Err(Error::SingularSystem);
        };
        m.swap(r, piv);
        let inv = Rational::one() / &m[r][c];
        for v in m[r][c..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * p;
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    Ok(Some(m[..cols].iter().map(|row| row[cols].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn overdetermined_consistent() {
        let a = alloc::vec![
            alloc::vec![rat(1, 1), rat(1, 1)],
            alloc::vec![rat(1, 1), rat(-1, 1)],
            alloc::vec![rat(2, 1), rat(0, 1)],
        ];
        let b = alloc::vec![rat(3, 1), rat(1, 1), rat(4, 1)];
        assert_eq!(solve(&a, &b).unwrap(), Some(alloc::vec![rat(2, 1), rat(1, 1)]));
        let b = alloc::vec![rat(3, 1), rat(1, 1), rat(5, 1)];
        assert_eq!(solve(&a, &b).unwrap(), None);
        let a = alloc::vec![alloc::vec![rat(1, 1), rat(2, 1)], alloc::vec![rat(2, 1), rat(4, 1)]];
        assert_eq!(solve(&a, &[rat(1, 1), rat(2, 1)]), Err(Error::SingularSystem));
    }
}
