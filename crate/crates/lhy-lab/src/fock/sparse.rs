//! Compressed-sparse-row matrices over the occupation basis, with the few
//! operations the identity checks need.

use super::FockError;

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub rows: usize,
    pub cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl Csr {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < rows && c < cols);
            if last == Some((r, c)) {
                *data.last_mut().expect("entry exists") += v;
            } else {
                indices.push(c);
                data.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        let mut m = Self {
            rows,
            cols,
            indptr,
            indices,
            data,
        };
        m.prune();
        m
    }

    /// Diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_triplets(
            n,
            n,
            values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect(),
        )
    }

    fn prune(&mut self) {
        let mut indptr = vec![0usize; self.rows + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut data = Vec::with_capacity(self.data.len());
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.data[k] != 0.0 {
                    indices.push(self.indices[k]);
                    data.push(self.data[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.data = data;
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// Stored entries as `(row, col, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.data[k]))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (lo, hi) = (self.indptr[r], self.indptr[r + 1]);
        match self.indices[lo..hi].binary_search(&c) {
            Ok(k) => self.data[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v)).collect(),
        )
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &Csr, beta: f64) -> Result<Self, FockError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(FockError::Shape(format!(
                "cannot add {}×{} and {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let t = self
            .triplets()
            .map(|(r, c, v)| (r, c, alpha * v))
            .chain(other.triplets().map(|(r, c, v)| (r, c, beta * v)))
            .collect();
        Ok(Self::from_triplets(self.rows, self.cols, t))
    }

    /// Matrix product.
    pub fn matmul(&self, other: &Csr) -> Result<Self, FockError> {
        if self.cols != other.rows {
            return Err(FockError::Shape(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut t = Vec::new();
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let (mid, v) = (self.indices[k], self.data[k]);
                for q in other.indptr[mid]..other.indptr[mid + 1] {
                    t.push((r, other.indices[q], v * other.data[q]));
                }
            }
        }
        Ok(Self::from_triplets(self.rows, other.cols, t))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (self.indptr[r]..self.indptr[r + 1])
                    .map(|k| self.data[k] * x[self.indices[k]])
                    .sum()
            })
            .collect()
    }

    /// Largest column sum of absolute values (the induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for (_, c, v) in self.triplets() {
            sums[c] += v.abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(r, c, _)| r == c)
    }
}

/// `exp(t·G) x` by a Taylor series with scaling: the step is chosen so that
/// `‖tG‖₁/steps ≤ 1/2`, and each series is summed until its terms drop below
/// `1e-18` relative to the partial sum.
pub fn expm_apply(generator: &Csr, t: f64, x: &[f64]) -> Vec<f64> {
    let norm = generator.norm_one() * t.abs();
    let steps = (2.0 * norm).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut v = x.to_vec();
    for _ in 0..steps {
        let mut term = v.clone();
        let mut sum = v.clone();
        for k in 1..=60 {
            term = generator.matvec(&term);
            let scale = h / k as f64;
            term.iter_mut().for_each(|e| *e *= scale);
            sum.iter_mut().zip(&term).for_each(|(s, e)| *s += e);
            let tn = norm2(&term);
            if tn <= 1e-18 * norm2(&sum).max(f64::MIN_POSITIVE) {
                break;
            }
        }
        v = sum;
    }
    v
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `‖x − y‖₂`.
pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = Csr::from_triplets(
            2,
            2,
            vec![(0, 1, 1.0), (0, 1, 2.0), (1, 0, 1.0), (1, 0, -1.0)],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn product_and_transpose() {
        let a = Csr::from_triplets(2, 3, vec![(0, 0, 1.0), (0, 2, 2.0), (1, 1, 3.0)]);
        let at = a.transpose();
        let g = a.matmul(&at).unwrap();
        assert_eq!(g.get(0, 0), 5.0);
        assert_eq!(g.get(1, 1), 9.0);
        assert_eq!(g.get(0, 1), 0.0);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn exponential_of_a_rotation_generator() {
        let g = Csr::from_triplets(2, 2, vec![(0, 1, -1.0), (1, 0, 1.0)]);
        let v = expm_apply(&g, 2.5, &[1.0, 0.0]);
        assert!((v[0] - 2.5f64.cos()).abs() < 1e-14);
        assert!((v[1] - 2.5f64.sin()).abs() < 1e-14);
    }
}
