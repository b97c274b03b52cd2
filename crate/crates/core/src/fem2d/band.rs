//! Banded LU factorization with partial pivoting.

use crate::error::{Error, Result};

/// Square matrix with `bw` sub- and super-diagonals.
///
/// Rows are stored with room for `bw` extra super-diagonals to absorb pivot
/// fill-in, so the matrix may be unsymmetric.
#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let width = 3 * bw + 1;
        Self {
            n,
            bw,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        // column j sits at offset j - (i - bw)
        debug_assert!(j + self.bw >= i && j <= i + 2 * self.bw);
        i * self.width + (j + self.bw - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.bw < i || j > i + self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j + self.bw >= i && j <= i + self.bw,
            "entry ({i}, {j}) outside half-bandwidth {}",
            self.bw
        );
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Solves `A x = b` in place, destroying the matrix.
    pub fn solve(mut self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::LinearSolveFailure(format!(
                "right-hand side has {} entries, matrix has {n} rows",
                b.len()
            )));
        }
        let mut x = b.to_vec();
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::LinearSolveFailure(
                "zero or non-finite matrix".into(),
            ));
        }
        let bw = self.bw;
        for k in 0..n {
            let last_row = (k + bw).min(n - 1);
            let last_col = (k + 2 * bw).min(n - 1);
            let mut piv = k;
            let mut best = self.data[self.idx(k, k)].abs();
            for i in k + 1..=last_row {
                let v = self.data[self.idx(i, k)].abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if !(best > 1e-14 * scale) {
                return Err(Error::LinearSolveFailure(format!(
                    "zero pivot in column {k} (|pivot| = {best:e})"
                )));
            }
            if piv != k {
                for j in k..=last_col {
                    let a = self.idx(k, j);
                    let c = self.idx(piv, j);
                    self.data.swap(a, c);
                }
                x.swap(k, piv);
            }
            let pivot = self.data[self.idx(k, k)];
            for i in k + 1..=last_row {
                let ik = self.idx(i, k);
                let factor = self.data[ik] / pivot;
                if factor == 0.0 {
                    continue;
                }
                self.data[ik] = 0.0;
                for j in k + 1..=last_col {
                    let kj = self.data[self.idx(k, j)];
                    let ij = self.idx(i, j);
                    self.data[ij] -= factor * kj;
                }
                x[i] -= factor * x[k];
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + 2 * bw).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=last_col {
                s -= self.data[self.idx(k, j)] * x[j];
            }
            x[k] = s / self.data[self.idx(k, k)];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::LinearSolveFailure("non-finite solution".into()));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_mul(a: &BandMatrix, x: &[f64]) -> Vec<f64> {
        (0..a.size())
            .map(|i| (0..a.size()).map(|j| a.get(i, j) * x[j]).sum())
            .collect()
    }

    #[test]
    fn solves_random_unsymmetric_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (n, bw) = (40, 5);
        let mut a = BandMatrix::zeros(n, bw);
        for i in 0..n {
            for j in i.saturating_sub(bw)..=(i + bw).min(n - 1) {
                a.add(i, j, rng.gen_range(-1.0..1.0));
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = dense_mul(&a, &x_true);
        let x = a.clone().solve(&b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-9, "{u} vs {v}");
        }
    }

    #[test]
    fn needs_pivoting() {
        // zero leading diagonal
        let mut a = BandMatrix::zeros(2, 1);
        a.add(0, 1, 1.0);
        a.add(1, 0, 2.0);
        a.add(1, 1, 1.0);
        let x = a.solve(&[3.0, 4.0]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        let mut a = BandMatrix::zeros(3, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, 1.0);
        assert!(matches!(
            a.solve(&[1.0, 1.0, 1.0]),
            Err(Error::LinearSolveFailure(_))
        ));
    }
}
