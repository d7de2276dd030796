//! Dense and banded complex linear solvers for the small systems assembled
//! by the mode solver and the finite-difference oracle.

use num_complex::Complex64;

/// Row-major dense complex matrix of fixed small size.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::ZERO; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `A x` for a full-length vector.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// LU factorization with partial pivoting; `None` on exact breakdown.
    fn lu(&self) -> Option<(DenseMatrix, Vec<usize>)> {
        let n = self.n;
        let mut a = self.clone();
        let mut piv = (0..n).collect::<Vec<_>>();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a.get(i, k).norm()))
                .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            if pmax == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    let t = a.get(k, j);
                    a.set(k, j, a.get(p, j));
                    a.set(p, j, t);
                }
                piv.swap(k, p);
            }
            let pivot = a.get(k, k);
            for i in (k + 1)..n {
                let m = a.get(i, k) / pivot;
                a.set(i, k, m);
                for j in (k + 1)..n {
                    let v = a.get(i, j) - m * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        Some((a, piv))
    }

    /// Solves `A x = b`; `None` if the factorization breaks down.
    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        let (lu, piv) = self.lu()?;
        Some(Self::lu_solve_unit(&lu, &piv, b))
    }

    fn lu_solve_unit(lu: &DenseMatrix, piv: &[usize], b: &[Complex64]) -> Vec<Complex64> {
        let n = lu.n;
        let mut x: Vec<Complex64> = piv.iter().map(|&p| b[p]).collect();
        // forward: L has unit diagonal
        for i in 0..n {
            for j in 0..i {
                let t = lu.get(i, j) * x[j];
                x[i] -= t;
            }
        }
        // backward
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let t = lu.get(i, j) * x[j];
                x[i] -= t;
            }
            x[i] /= lu.get(i, i);
        }
        x
    }

    /// Explicit inverse; `None` if singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        let n = self.n;
        let (lu, piv) = self.lu()?;
        let mut inv = DenseMatrix::zeros(n);
        let mut e = vec![Complex64::ZERO; n];
        for j in 0..n {
            e[j] = Complex64::ONE;
            let col = Self::lu_solve_unit(&lu, &piv, &e);
            e[j] = Complex64::ZERO;
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        Some(inv)
    }

    /// Infinity-norm condition number via the explicit inverse.
    /// Returns `f64::INFINITY` on breakdown.
    pub fn cond_inf(&self) -> f64 {
        match self.inverse() {
            Some(inv) => self.norm_inf() * inv.norm_inf(),
            None => f64::INFINITY,
        }
    }
}

/// Banded complex matrix in LAPACK-style column storage with room for
/// pivoting fill: column `j` holds `A[i][j]` at `ab[(kl + ku + i - j) + j * ldab]`
/// for `j - ku <= i <= j + kl`; the top `kl` slots per column take fill.
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            ldab,
            ab: vec![Complex64::ZERO; ldab * n],
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        self.kl + self.ku + i - j + j * self.ldab
    }

    /// Adds `v` to entry `(i, j)`; the entry must lie within the band.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(j <= i + self.ku && i <= j + self.kl, "({i},{j}) outside band");
        let k = self.idx(i, j);
        self.ab[k] += v;
    }

    /// Scales every row (and its right-hand side) to unit infinity norm.
    pub fn equilibrate(&mut self, rhs: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let jmin = i.saturating_sub(self.kl);
            let jmax = (i + self.ku).min(n - 1);
            let mut scale = 0.0f64;
            for j in jmin..=jmax {
                scale = scale.max(self.ab[self.idx(i, j)].norm());
            }
            if scale > 0.0 {
                for j in jmin..=jmax {
                    let k = self.idx(i, j);
                    self.ab[k] /= scale;
                }
                rhs[i] /= scale;
            }
        }
    }

    /// LU-factorizes in place and solves `A x = b`. `None` on breakdown.
    pub fn solve(mut self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.n;
        let (kl, ku, ldab) = (self.kl, self.ku, self.ldab);
        let kv = kl + ku; // effective upper bandwidth after fill
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let lm = kl.min(n - 1 - j);
            // pivot search in column j, rows j..=j+lm
            let mut p = 0;
            let mut pmax = -1.0;
            for ii in 0..=lm {
                let v = self.ab[kv + ii + j * ldab].norm();
                if v > pmax {
                    pmax = v;
                    p = ii;
                }
            }
            if pmax == 0.0 {
                return None;
            }
            ipiv[j] = j + p;
            if p != 0 {
                let qmax = (j + kv).min(n - 1);
                for q in j..=qmax {
                    let a = self.idx(j + p, q);
                    let b_ = self.idx(j, q);
                    self.ab.swap(a, b_);
                }
            }
            let pivot = self.ab[kv + j * ldab];
            for ii in 1..=lm {
                let m = self.ab[kv + ii + j * ldab] / pivot;
                self.ab[kv + ii + j * ldab] = m;
                let qmax = (j + kv).min(n - 1);
                for q in (j + 1)..=qmax {
                    let u = self.ab[self.idx(j, q)];
                    let k = self.idx(j + ii, q);
                    self.ab[k] -= m * u;
                }
            }
        }
        // forward substitution with permutation
        let mut x = b.to_vec();
        for j in 0..n {
            x.swap(j, ipiv[j]);
            let lm = kl.min(n - 1 - j);
            for ii in 1..=lm {
                let m = self.ab[kv + ii + j * ldab];
                let t = m * x[j];
                x[j + ii] -= t;
            }
        }
        // back substitution
        for j in (0..n).rev() {
            x[j] /= self.ab[kv + j * ldab];
            let qmin = j.saturating_sub(kv);
            for i in qmin..j {
                let u = self.ab[self.idx(i, j)];
                let t = u * x[j];
                x[i] -= t;
            }
        }
        Some(x)
    }
}
