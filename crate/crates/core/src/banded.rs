//! Banded linear solver (LU without pivoting) for the finite-difference
//! biharmonic systems. Those systems are symmetric positive definite after
//! boundary elimination, so pivot-free elimination is stable.

use crate::error::{Error, Result};

/// Square banded matrix with `kl` sub- and `ku` super-diagonals, stored
/// row-major as `n x (kl + ku + 1)`.
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    #[inline]
    fn offset(&self, row: usize, col: usize) -> usize {
        debug_assert!(col + self.kl >= row && col <= row + self.ku);
        row * (self.kl + self.ku + 1) + (col + self.kl - row)
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        let at = self.offset(row, col);
        self.data[at] += value;
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[self.offset(row, col)]
    }

    /// Solve `A x = b`, consuming the factorization workspace.
    pub fn solve(mut self, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
        assert_eq!(rhs.len(), self.n);
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let width = kl + ku + 1;
        for k in 0..n {
            let pivot = self.data[k * width + kl];
            if pivot.abs() < 1e-300 {
                return Err(Error::SingularSystem(format!("zero pivot at row {k}")));
            }
            let imax = (k + kl).min(n - 1);
            for i in (k + 1)..=imax {
                let factor = self.data[i * width + (k + kl - i)] / pivot;
                if factor == 0.0 {
                    continue;
                }
                let jmax = (k + ku).min(n - 1);
                for j in (k + 1)..=jmax {
                    let v = self.data[k * width + (j + kl - k)];
                    self.data[i * width + (j + kl - i)] -= factor * v;
                }
                rhs[i] -= factor * rhs[k];
            }
        }
        // Back substitution.
        for k in (0..n).rev() {
            let jmax = (k + ku).min(n - 1);
            let mut acc = rhs[k];
            for j in (k + 1)..=jmax {
                acc -= self.data[k * width + (j + kl - k)] * rhs[j];
            }
            rhs[k] = acc / self.data[k * width + kl];
        }
        Ok(rhs)
    }
}
