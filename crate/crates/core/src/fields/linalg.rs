//! Dense Gaussian elimination over a tower level.

use super::{Elem, Tower};

impl Tower {
    /// Reduces `v` against an echelon list of (pivot column, row) pairs and
    /// inserts it if it is independent. Returns whether it was inserted.
    pub(crate) fn echelon_insert(&self, k: usize, rows: &mut Vec<(usize, Vec<Elem>)>, mut v: Vec<Elem>) -> bool {
        for (piv, row) in rows.iter() {
            if !self.is_zero(&v[*piv]) {
                let c = v[*piv].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !self.is_zero(r) {
                        *x = self.sub(k, x, &self.mul(k, &c, r));
                    }
                }
            }
        }
        let Some(piv) = v.iter().position(|x| !self.is_zero(x)) else {
            return false;
        };
        let inv = self.inv(k, &v[piv]).unwrap();
        for x in v.iter_mut() {
            *x = self.mul(k, x, &inv);
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in rows.iter_mut() {
            if !self.is_zero(&row[piv]) {
                let c = row[piv].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !self.is_zero(r) {
                        *x = self.sub(k, x, &self.mul(k, &c, r));
                    }
                }
            }
        }
        rows.push((piv, v));
        true
    }

    pub(crate) fn mat_vec(&self, k: usize, m: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
        m.iter()
            .map(|row| {
                row.iter().zip(v).fold(self.zero(k), |acc, (a, b)| {
                    if self.is_zero(a) || self.is_zero(b) {
                        acc
                    } else {
                        self.add(k, &acc, &self.mul(k, a, b))
                    }
                })
            })
            .collect()
    }

    pub(crate) fn mat_inverse(&self, k: usize, m: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
        let n = m.len();
        let mut a: Vec<Vec<Elem>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { self.one(k) } else { self.zero(k) }));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !self.is_zero(&a[r][col]))?;
            a.swap(col, piv);
            let inv = self.inv(k, &a[col][col]).unwrap();
            for x in a[col].iter_mut() {
                *x = self.mul(k, x, &inv);
            }
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col && !self.is_zero(&row[col]) {
                    let c = row[col].clone();
                    for (x, pv) in row.iter_mut().zip(&pivot_row) {
                        if !self.is_zero(pv) {
                            *x = self.sub(k, x, &self.mul(k, &c, pv));
                        }
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Solves `A x = b` (A given as rows). Returns one solution with free
    /// variables set to zero, or `None` if inconsistent.
    pub(crate) fn solve_linear(&self, k: usize, a: &[Vec<Elem>], b: &[Elem], ncols: usize) -> Option<Vec<Elem>> {
        let mut rows: Vec<Vec<Elem>> = a
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut v = r.clone();
                v.push(bi.clone());
                v
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..rows.len()).find(|&r| !self.is_zero(&rows[r][col])) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(k, &rows[rank][col]).unwrap();
            for x in rows[rank].iter_mut() {
                *x = self.mul(k, x, &inv);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && !self.is_zero(&row[col]) {
                    let c = row[col].clone();
                    for (x, pv) in row.iter_mut().zip(&pivot_row) {
                        if !self.is_zero(pv) {
                            *x = self.sub(k, x, &self.mul(k, &c, pv));
                        }
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rows[rank..].iter().any(|r| !self.is_zero(&r[ncols])) {
            return None;
        }
        let mut x = vec![self.zero(k); ncols];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = rows[i][ncols].clone();
        }
        Some(x)
    }

    pub(crate) fn rank(&self, k: usize, m: &[Vec<Elem>]) -> usize {
        let mut rows = Vec::new();
        m.iter().filter(|r| self.echelon_insert(k, &mut rows, (*r).clone())).count()
    }
}
