use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense real symmetric matrix stored in full row-major form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![T::zero(); dim * dim] }
    }

    /// Evaluates `f(i, j)` for `j ≤ i` only and mirrors it, so the result is
    /// symmetric bit for bit.
    pub fn from_fn<F: FnMut(usize, usize) -> T>(dim: usize, mut f: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Applies the plane rotation `G(i, j, θ)` as `Gᵀ A G`.
    pub fn rotate(&mut self, i: usize, j: usize, cos: T, sin: T) {
        let n = self.dim;
        for k in 0..n {
            let (a, b) = (self.data[k * n + i], self.data[k * n + j]);
            self.data[k * n + i] = cos * a - sin * b;
            self.data[k * n + j] = sin * a + cos * b;
        }
        for k in 0..n {
            let (a, b) = (self.data[i * n + k], self.data[j * n + k]);
            self.data[i * n + k] = cos * a - sin * b;
            self.data[j * n + k] = sin * a + cos * b;
        }
    }
}

/// All eigenvalues, ascending: Householder reduction to tridiagonal form, then
/// implicit QL with Wilkinson-type shifts.
pub fn symmetric_eigenvalues<T: Real>(matrix: &SymMatrix<T>) -> Result<Vec<T>> {
    let (mut d, mut e) = tridiagonalize(matrix.clone());
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(d)
}

/// Reduces `a` to tridiagonal form `(diagonal, off-diagonal)`, where
/// `off[i]` couples `i` and `i + 1`. Only the lower triangle is read and
/// updated.
fn tridiagonalize<T: Real>(mut a: SymMatrix<T>) -> (Vec<T>, Vec<T>) {
    let n = a.dim;
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    if n == 0 {
        return (d, e);
    }
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(2) {
        d[k] = a.data[k * n + k];
        let lo = k + 1;
        for i in lo..n {
            v[i] = a.data[i * n + k];
        }
        let scale = v[lo..n].iter().fold(T::zero(), |m, &t| m.max(t.abs()));
        if scale == T::zero() {
            e[k] = T::zero();
            continue;
        }
        let norm = scale * v[lo..n].iter().fold(T::zero(), |s, &t| s + (t / scale) * (t / scale)).sqrt();
        let alpha = if v[lo] > T::zero() { -norm } else { norm };
        v[lo] = v[lo] - alpha;
        e[k] = alpha;
        let vtv = dot(&v[lo..n], &v[lo..n]);
        if vtv == T::zero() {
            continue;
        }
        let tau = T::lit(2.0) / vtv;
        // p = τ A₂₂ v from the lower triangle
        p[lo..n].iter_mut().for_each(|x| *x = T::zero());
        for i in lo..n {
            let row = &a.data[i * n + lo..i * n + i + 1];
            let (left, diag) = row.split_at(i - lo);
            let vi = v[i];
            axpy(&mut p[lo..i], vi, left);
            p[i] = p[i] + dot(left, &v[lo..i]) + diag[0] * vi;
        }
        p[lo..n].iter_mut().for_each(|x| *x = *x * tau);
        let half_k = tau * dot(&p[lo..n], &v[lo..n]) / T::lit(2.0);
        for i in lo..n {
            p[i] = p[i] - half_k * v[i];
        }
        // A₂₂ -= v wᵀ + w vᵀ with w = p
        for i in lo..n {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a.data[i * n + lo..i * n + i + 1];
            for ((r, &vj), &wj) in row.iter_mut().zip(&v[lo..=i]).zip(&p[lo..=i]) {
                *r = *r - vi * wj - wi * vj;
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a.data[(n - 2) * n + n - 2];
        e[n - 2] = a.data[(n - 1) * n + n - 2];
    }
    d[n - 1] = a.data[n * n - 1];
    e[n - 1] = T::zero();
    (d, e)
}

// Four interleaved accumulators so the loop vectorizes.
fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let (xc, yc) = (x.chunks_exact(4), y.chunks_exact(4));
    let (xr, yr) = (xc.remainder(), yc.remainder());
    for (a, b) in xc.zip(yc) {
        for l in 0..4 {
            acc[l] = acc[l] + a[l] * b[l];
        }
    }
    let tail = xr.iter().zip(yr).fold(T::zero(), |s, (&a, &b)| s + a * b);
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy<T: Real>(y: &mut [T], alpha: T, x: &[T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

const QL_MAX_ITER: usize = 60;

fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::NoConvergence(format!(
                    "tridiagonal QL did not converge for eigenvalue {l} within {QL_MAX_ITER} iterations"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Stopping rule for [`jacobi_eigenvalues`].
#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions<T> {
    /// Stop once the off-diagonal Frobenius norm is below `tol · ‖A‖_F`.
    pub tol: T,
    pub max_sweeps: usize,
}

impl<T: Real> Default for JacobiOptions<T> {
    fn default() -> Self {
        Self { tol: T::tol_floor(1e-12), max_sweeps: 100 }
    }
}

/// All eigenvalues, ascending, by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues<T: Real>(matrix: &SymMatrix<T>, opts: &JacobiOptions<T>) -> Result<Vec<T>> {
    let mut a = matrix.clone();
    let n = a.dim;
    let total = a.frobenius_norm();
    let off_norm = |a: &SymMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a.get(i, j) * a.get(i, j);
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off_norm(&a) > opts.tol * total {
        if sweeps == opts.max_sweeps {
            return Err(Error::NoConvergence(format!(
                "Jacobi rotations did not converge within {} sweeps",
                opts.max_sweeps
            )));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == T::zero() {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                a.rotate(p, q, c, s);
                a.set(p, q, T::zero());
            }
        }
        sweeps += 1;
    }
    let mut eig: Vec<T> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    Ok(eig)
}
