//! Abelianization via Smith normal form of the exponent-sum matrix.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianizationResult {
    /// `d₁ | d₂ | … | d_r` followed by `n − r` zeros (free rank).
    pub divisors: Vec<u64>,
}

impl AbelianizationResult {
    /// Some divisor is 0 or greater than 1.
    pub fn certifies_nontrivial(&self) -> bool {
        self.divisors.iter().any(|&d| d != 1)
    }

    pub fn free_rank(&self) -> usize {
        self.divisors.iter().filter(|&&d| d == 0).count()
    }

    /// Order of the torsion part (product of nonzero divisors).
    pub fn torsion_order(&self) -> Option<u64> {
        self.divisors
            .iter()
            .filter(|&&d| d != 0)
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<u64> {
        if self.free_rank() > 0 {
            None
        } else {
            self.torsion_order()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("integer overflow during elimination")]
pub struct Overflow;

type Int = i128;

fn ext_gcd(a: Int, b: Int) -> (Int, Int, Int) {
    // returns (g, s, t) with s*a + t*b = g ≥ 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1, 0);
    let (mut old_t, mut t) = (0, 1);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn lin(a: Int, x: Int, b: Int, y: Int) -> Result<Int, Overflow> {
    a.checked_mul(x)
        .and_then(|ax| b.checked_mul(y).and_then(|by| ax.checked_add(by)))
        .ok_or(Overflow)
}

/// Row-echelon lattice basis, one row per pivot column.
struct EchelonBasis {
    cols: usize,
    rows: Vec<Option<Vec<Int>>>,
    unit_pivots: usize,
}

impl EchelonBasis {
    fn new(cols: usize) -> Self {
        EchelonBasis {
            cols,
            rows: vec![None; cols],
            unit_pivots: 0,
        }
    }

    /// Lattice is all of `Z^cols`.
    fn is_full_unimodular(&self) -> bool {
        self.unit_pivots == self.cols
    }

    fn insert(&mut self, mut v: Vec<Int>) -> Result<(), Overflow> {
        for col in 0..self.cols {
            let vc = v[col];
            if vc == 0 {
                continue;
            }
            match self.rows[col].take() {
                None => {
                    if vc < 0 {
                        for x in v.iter_mut() {
                            *x = -*x;
                        }
                    }
                    if v[col] == 1 {
                        self.unit_pivots += 1;
                    }
                    self.rows[col] = Some(v);
                    return Ok(());
                }
                Some(b) => {
                    let bp = b[col];
                    let was_unit = bp == 1;
                    let (g, s, t) = ext_gcd(bp, vc);
                    let (bq, vq) = (bp / g, vc / g);
                    let mut nb = vec![0; self.cols];
                    let mut nv = vec![0; self.cols];
                    for j in col..self.cols {
                        nb[j] = lin(s, b[j], t, v[j])?;
                        nv[j] = lin(bq, v[j], -vq, b[j])?;
                    }
                    debug_assert_eq!(nv[col], 0);
                    if !was_unit && nb[col] == 1 {
                        self.unit_pivots += 1;
                    }
                    self.rows[col] = Some(nb);
                    v = nv;
                }
            }
        }
        Ok(())
    }

    fn into_matrix(self) -> Vec<Vec<Int>> {
        self.rows.into_iter().flatten().collect()
    }
}

/// Diagonal of the Smith normal form (nonnegative, divisibility chain),
/// padded with zeros to `min(rows, cols)`.
pub fn smith_diagonal(mut a: Vec<Vec<Int>>, cols: usize) -> Result<Vec<Int>, Overflow> {
    let rows = a.len();
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize, Int)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.map_or(true, |(_, _, m)| x.abs() < m) {
                        best = Some((i, j, x.abs()));
                    }
                }
            }
            let Some((bi, bj, _)) = best else {
                let mut diag: Vec<Int> = (0..t).map(|i| a[i][i]).collect();
                diag.resize(k, 0);
                return Ok(diag);
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let piv = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / piv;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = lin(1, a[i][j], -q, a[t][j])?;
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / piv;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = lin(1, row[j], -q, row[t])?;
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % piv != 0));
            if let Some(i) = bad_row {
                for j in t..cols {
                    a[t][j] = lin(1, a[t][j], 1, a[i][j])?;
                }
                continue;
            }
            if piv < 0 {
                for j in t..cols {
                    a[t][j] = -a[t][j];
                }
            }
            break;
        }
    }
    Ok((0..k).map(|i| a[i][i]).collect())
}

/// Abelianization of `p` with generators in `killed` (1-based) set to zero.
pub fn abelianization_with(
    p: &Presentation,
    killed: &[u32],
) -> Result<AbelianizationResult, Overflow> {
    let n = p.n() as usize;
    let mut basis = EchelonBasis::new(n);
    for &g in killed {
        let mut row = vec![0; n];
        row[g as usize - 1] = 1;
        basis.insert(row)?;
    }
    let mut sums = vec![0i64; n];
    for r in p.relators() {
        if basis.is_full_unimodular() {
            break;
        }
        sums.iter_mut().for_each(|x| *x = 0);
        r.exponent_sums(&mut sums);
        basis.insert(sums.iter().map(|&x| x as Int).collect())?;
    }
    let diag = smith_diagonal(basis.into_matrix(), n)?;
    let mut divisors = Vec::with_capacity(n);
    for d in diag {
        divisors.push(u64::try_from(d).map_err(|_| Overflow)?);
    }
    // nonzero divisors come first in the diagonal; zeros are free rank
    divisors.retain(|&d| d != 0);
    divisors.resize(n, 0);
    Ok(AbelianizationResult { divisors })
}

pub fn abelianization(p: &Presentation) -> Result<AbelianizationResult, Overflow> {
    abelianization_with(p, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::letter::Letter;

    fn pres(n: u32, words: &[[Letter; 3]]) -> Presentation {
        Presentation::from_words(n, words.iter().copied()).unwrap()
    }

    #[test]
    fn cyclic_three() {
        let a = Letter::pos(1);
        let r = abelianization(&pres(1, &[[a, a, a]])).unwrap();
        assert_eq!(r.divisors, vec![3]);
        assert_eq!(r.order(), Some(3));
    }

    #[test]
    fn cyclic_four() {
        let (a, b) = (Letter::pos(1), Letter::pos(2));
        let r = abelianization(&pres(2, &[[a, a, b], [a, a, b.inverse()]])).unwrap();
        assert_eq!(r.divisors, vec![1, 4]);
        assert!(r.certifies_nontrivial());
    }

    #[test]
    fn free_abelian() {
        let r = abelianization(&Presentation::free(2)).unwrap();
        assert_eq!(r.divisors, vec![0, 0]);
        assert_eq!(r.free_rank(), 2);
    }

    #[test]
    fn one_relator_infinite() {
        let (a, b) = (Letter::pos(1), Letter::pos(2));
        let r = abelianization(&pres(2, &[[a, a, b]])).unwrap();
        assert_eq!(r.divisors, vec![1, 0]);
    }

    #[test]
    fn smith_of_dense_matrix() {
        // [[2,4,4],[-6,6,12],[10,-4,-16]] has SNF diag(2, 6, 12)
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(smith_diagonal(m, 3).unwrap(), vec![2, 6, 12]);
    }

    #[test]
    fn killed_generators_are_quotiented() {
        let a = Letter::pos(1);
        let r = abelianization_with(&pres(2, &[[a, a, a]]), &[2]).unwrap();
        assert_eq!(r.divisors, vec![1, 3]);
    }
}
