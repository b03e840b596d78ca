//! Dense complex LU with partial pivoting and singular-value estimates built
//! on it.

use alloc::vec::Vec;

use crate::{DMatrix, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// PA = LU stored row-major; L has a unit diagonal.
#[derive(Debug, Clone)]
pub struct ComplexLu {
    n: usize,
    lu: Vec<C64>,
    /// Row `i` of the factorization is row `perm[i]` of A.
    perm: Vec<usize>,
}

impl ComplexLu {
    /// `None` when a pivot column is exactly zero.
    pub fn factor(a: &DMatrix<C64>) -> Option<Self> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "square matrix required");
        let mut lu = Vec::with_capacity(n * n);
        for i in 0..n {
            lu.extend((0..n).map(|j| a[(i, j)]));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut p, mut best) = (k, lu[k * n + k].norm_sqr());
            for i in k + 1..n {
                let v = lu[i * n + k].norm_sqr();
                if v > best {
                    p = i;
                    best = v;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let inv = C64::new(1.0, 0.0) / lu[k * n + k];
            let (top, bottom) = lu.split_at_mut((k + 1) * n);
            let pivot_row = &top[k * n + k + 1..(k + 1) * n];
            for row in bottom.chunks_exact_mut(n) {
                if row[k] == ZERO {
                    continue;
                }
                let f = row[k] * inv;
                row[k] = f;
                for (r, &pv) in row[k + 1..].iter_mut().zip(pivot_row) {
                    *r -= f * pv;
                }
            }
        }
        Some(Self { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves A x = b in place.
    pub fn solve(&self, b: &mut [C64]) {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: C64 = row.iter().zip(&x[..i]).map(|(l, xj)| l * xj).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: C64 = row.iter().zip(&x[i + 1..]).map(|(u, xj)| u * xj).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        b.copy_from_slice(&x);
    }

    /// Solves A† x = b in place.
    pub fn solve_adjoint(&self, b: &mut [C64]) {
        let n = self.n;
        // A† = U† L† P: forward with U†, backward with L†, then undo P.
        let mut z = b.to_vec();
        for i in 0..n {
            let zi = z[i] / self.lu[i * n + i].conj();
            z[i] = zi;
            for (zj, u) in z[i + 1..]
                .iter_mut()
                .zip(&self.lu[i * n + i + 1..(i + 1) * n])
            {
                *zj -= u.conj() * zi;
            }
        }
        for i in (0..n).rev() {
            let zi = z[i];
            for (zj, l) in z[..i].iter_mut().zip(&self.lu[i * n..i * n + i]) {
                *zj -= l.conj() * zi;
            }
        }
        for (i, &p) in self.perm.iter().enumerate() {
            b[p] = z[i];
        }
    }
}

fn norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

fn normalize(v: &mut [C64]) -> f64 {
    let s = norm(v);
    if s > 0.0 {
        let inv = 1.0 / s;
        v.iter_mut().for_each(|z| *z *= inv);
    }
    s
}

/// Deterministic start vector with no special alignment to the operators.
fn start_vector(n: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|i| {
            C64::new(
                1.0 + 0.37 * libm::sin(1.3 * i as f64),
                0.21 * libm::cos(0.7 * i as f64),
            )
        })
        .collect();
    normalize(&mut v);
    v
}

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 2000;
const LANCZOS_CHECK: usize = 8;

/// Compressed sparse rows of a dense matrix, exact zeros dropped.
#[derive(Debug, Clone)]
pub struct Csr {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
}

impl Csr {
    pub fn from_dense(a: &DMatrix<C64>) -> Self {
        Self::build(a.nrows(), a.ncols(), |i, j| a[(i, j)])
    }

    pub fn adjoint_of(a: &DMatrix<C64>) -> Self {
        Self::build(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
    }

    fn build(rows: usize, ncols: usize, at: impl Fn(usize, usize) -> C64) -> Self {
        let mut offsets = Vec::with_capacity(rows + 1);
        let (mut cols, mut values) = (Vec::new(), Vec::new());
        offsets.push(0);
        for i in 0..rows {
            for j in 0..ncols {
                let z = at(i, j);
                if z != ZERO {
                    cols.push(j);
                    values.push(z);
                }
            }
            offsets.push(cols.len());
        }
        Self {
            n: ncols,
            offsets,
            cols,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// out = A x
    pub fn apply(&self, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            let range = self.offsets[i]..self.offsets[i + 1];
            *o = self.cols[range.clone()]
                .iter()
                .zip(&self.values[range])
                .map(|(&j, v)| v * x[j])
                .sum();
        }
    }
}

fn dotc(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Largest singular value from the top Ritz value of a fully
/// reorthogonalized Lanczos process on A†A. Converges from below.
pub fn largest_singular_value(a: &DMatrix<C64>) -> f64 {
    let n = a.ncols();
    let (op, adj) = (Csr::from_dense(a), Csr::adjoint_of(a));
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut q = start_vector(n);
    let mut tmp = alloc::vec![ZERO; a.nrows()];
    let mut w = alloc::vec![ZERO; n];
    let mut top = 0.0;
    for k in 0..n {
        op.apply(&q, &mut tmp);
        adj.apply(&tmp, &mut w);
        let ak = dotc(&q, &w).re;
        alpha.push(ak);
        basis.push(q);
        // two passes of Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dotc(b, &w);
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
            }
        }
        let bk = norm(&w);
        let exhausted = bk <= f64::EPSILON * ak.abs();
        if (k + 1) % LANCZOS_CHECK == 0 || exhausted || k + 1 == n {
            let m = alpha.len();
            let t = DMatrix::<f64>::from_fn(m, m, |i, j| {
                if i == j {
                    alpha[i]
                } else if i + 1 == j {
                    beta[i]
                } else if j + 1 == i {
                    beta[j]
                } else {
                    0.0
                }
            });
            let next = t
                .symmetric_eigenvalues()
                .iter()
                .fold(0.0f64, |acc, &x| acc.max(x));
            if (next - top).abs() <= POWER_TOL * next || exhausted {
                return libm::sqrt(next);
            }
            top = next;
        }
        beta.push(bk);
        q = w.iter().map(|z| z / bk).collect();
    }
    libm::sqrt(top)
}

/// Smallest singular value of a factored matrix by inverse iteration on
/// (A†A)⁻¹. Converges from above.
pub fn smallest_singular_value(lu: &ComplexLu) -> f64 {
    let mut v = start_vector(lu.dim());
    let mut sigma = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        lu.solve_adjoint(&mut v);
        lu.solve(&mut v);
        let lambda = normalize(&mut v);
        if !lambda.is_finite() {
            return 0.0;
        }
        let next = 1.0 / libm::sqrt(lambda);
        if (sigma - next).abs() <= POWER_TOL * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: f64) -> DMatrix<C64> {
        DMatrix::from_fn(n, n, |i, j| {
            let x = seed + 0.7 * i as f64 + 1.9 * j as f64;
            C64::new(
                libm::sin(x * 1.3) + if i == j { 0.5 } else { 0.0 },
                libm::cos(x * 0.9),
            )
        })
    }

    #[test]
    fn solves_match_direct_products() {
        let a = sample(9, 0.3);
        let lu = ComplexLu::factor(&a).unwrap();
        let x: Vec<C64> = (0..9).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let mut b: Vec<C64> = (&a * nalgebra::DVector::from_column_slice(&x))
            .iter()
            .copied()
            .collect();
        lu.solve(&mut b);
        assert!(b.iter().zip(&x).all(|(p, q)| (p - q).norm() < 1e-12));
        let mut c: Vec<C64> = (a.adjoint() * nalgebra::DVector::from_column_slice(&x))
            .iter()
            .copied()
            .collect();
        lu.solve_adjoint(&mut c);
        assert!(c.iter().zip(&x).all(|(p, q)| (p - q).norm() < 1e-12));
    }

    #[test]
    fn singular_values_match_svd() {
        let a = sample(12, 1.1);
        let sv = a.clone().singular_values();
        let (lo, hi) = sv
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &s| (l.min(s), h.max(s)));
        assert!((largest_singular_value(&a) / hi - 1.0).abs() < 1e-8);
        let lu = ComplexLu::factor(&a).unwrap();
        assert!((smallest_singular_value(&lu) / lo - 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_column_is_singular() {
        let mut a = sample(4, 0.0);
        for i in 0..4 {
            a[(i, 2)] = ZERO;
        }
        assert!(ComplexLu::factor(&a).is_none());
    }
}
