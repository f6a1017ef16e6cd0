//! Enumeration of vectors and subspaces over F_q.

use crate::ff::{Matrix, PrimeField};

/// Odometer over all coefficient vectors in `F_q^len`, starting at zero.
pub struct Coefficients {
    q: u32,
    current: Vec<u32>,
    done: bool,
}

impl Coefficients {
    pub fn new(q: u32, len: usize) -> Self {
        Self {
            q,
            current: vec![0; len],
            done: false,
        }
    }
}

impl Iterator for Coefficients {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = 0;
        loop {
            if i == self.current.len() {
                self.done = true;
                break;
            }
            self.current[i] += 1;
            if self.current[i] < self.q {
                break;
            }
            self.current[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Gaussian binomial coefficient [n choose k]_q.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// All `k`-dimensional subspaces of `F_q^n`, each given once as an `n x k`
/// matrix whose columns are the rows of its reduced row echelon form.
pub fn subspaces(field: &PrimeField, n: usize, k: usize) -> Vec<Matrix> {
    let q = field.order();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    for pivots in combinations(n, k) {
        // free positions: (row i, column c) with c > pivots[i] and c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let piv = &pivots;
                (piv[i] + 1..n)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        for coeffs in Coefficients::new(q, free.len()) {
            let mut basis = Matrix::zeros(field, n, k);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(pc, i, 1);
            }
            for (&(i, c), &v) in free.iter().zip(&coeffs) {
                basis.set(c, i, v);
            }
            out.push(basis);
        }
    }
    out
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
