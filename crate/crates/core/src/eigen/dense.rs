use num_complex::Complex64;

use crate::error::EigenError;
use crate::lattice::BandedHamiltonian;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, EigenError> {
        let n = rows.len();
        if n == 0 {
            return Err(EigenError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(EigenError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(CMatrix { n, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, EigenError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::from(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|r| self.row(r).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
                .unwrap();
            if a[pivot * n + k].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != k {
                for c in 0..n {
                    a.swap(k * n + c, pivot * n + c);
                }
                det = -det;
            }
            let p = a[k * n + k];
            det *= p;
            for r in k + 1..n {
                let f = a[r * n + k] / p;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in k..n {
                    let upd = f * a[k * n + c];
                    a[r * n + c] -= upd;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

impl From<&BandedHamiltonian> for CMatrix {
    fn from(h: &BandedHamiltonian) -> Self {
        let n = h.len();
        let mut m = CMatrix::zeros(n);
        for k in 0..n - 1 {
            m[(k, k + 1)] += h.upper[k];
            m[(k + 1, k)] += h.lower[k];
        }
        if let Some(c) = h.corner_up {
            m[(n - 1, 0)] += c;
        }
        if let Some(c) = h.corner_down {
            m[(0, n - 1)] += c;
        }
        m
    }
}
