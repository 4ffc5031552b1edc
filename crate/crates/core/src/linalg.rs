//! Dense linear-algebra helpers on top of nalgebra.
//!
//! Everything here works on small matrices (at most a few dozen rows), so the
//! routines favour clarity over blocking or in-place tricks.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;

/// Relative cutoff below which singular values are treated as zero.
pub const RANK_CUTOFF: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Largest elementwise |M - M^dag|.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    let mut dev = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Eigenvalues of a real symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &RMat) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn trace_c(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

/// Tr(a b) without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
    let mut acc = c(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Thin SVD by one-sided Jacobi rotations: returns `(U, s, V)` with
/// `m = U diag(s) V^T`, `U` r x k, `V` c x k, `k = min(r, c)`, `s` descending.
/// Columns of `U` belonging to zero singular values are left zero.
///
/// nalgebra's bidiagonal SVD loses accuracy on some rank-deficient inputs
/// (reconstruction errors near 1e-2 on covariance blocks), so it is not used.
fn jacobi_svd(m: &RMat) -> (RMat, Vec<f64>, RMat) {
    if m.nrows() < m.ncols() {
        let (v, s, u) = jacobi_svd(&m.transpose());
        return (u, s, v);
    }
    let n = m.ncols();
    let mut w = m.clone();
    let mut v = RMat::identity(n, n);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..mat.nrows() {
                        let (x, y) = (mat[(i, p)], mat[(i, q)]);
                        mat[(i, p)] = cs * x - sn * y;
                        mat[(i, q)] = sn * x + cs * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let mut u = RMat::zeros(m.nrows(), n);
    let mut v_sorted = RMat::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        if norms[src] > 0.0 {
            u.set_column(dst, &(w.column(src) / norms[src]));
        }
        v_sorted.set_column(dst, &v.column(src));
        s.push(norms[src]);
    }
    (u, s, v_sorted)
}

/// Singular values in descending order.
pub fn singular_values(m: &RMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    jacobi_svd(m).1
}

pub fn trace_norm(m: &RMat) -> f64 {
    singular_values(m).iter().sum()
}

/// Moore-Penrose pseudoinverse; singular values below `RANK_CUTOFF` times
/// the largest one are dropped.
pub fn pseudoinverse(m: &RMat) -> RMat {
    let mut out = RMat::zeros(m.ncols(), m.nrows());
    if m.is_empty() {
        return out;
    }
    let (u, s, v) = jacobi_svd(m);
    let smax = s[0];
    if smax == 0.0 {
        return out;
    }
    for (k, &sk) in s.iter().enumerate() {
        if sk > RANK_CUTOFF * smax {
            out += (v.column(k) * u.column(k).transpose()) / sk;
        }
    }
    out
}

/// Full SVD `m = U diag(s) V^T` with square orthogonal `U`, `V` and singular
/// values sorted descending. The first `min(r, c)` columns of `U`/`V` are the
/// singular vectors; the rest complete an orthonormal basis.
pub fn full_svd(m: &RMat) -> (RMat, Vec<f64>, RMat) {
    if m.nrows() < m.ncols() {
        let (v, s, u) = full_svd(&m.transpose());
        return (u, s, v);
    }
    // tall input: V from the Jacobi sweep is already square and orthogonal
    let (u, s, v) = jacobi_svd(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let keep = s.iter().take_while(|&&x| x > 0.0 && x > RANK_CUTOFF * smax).count();
    (complete_orthonormal(&u.columns(0, keep).into_owned()), s, v)
}

/// Extend the orthonormal columns of `q` (n x k) to an n x n orthogonal
/// matrix whose first k columns are exactly those of `q`.
pub fn complete_orthonormal(q: &RMat) -> RMat {
    let (n, k) = q.shape();
    if k == n {
        return q.clone();
    }
    let mut aug = RMat::zeros(n, k + n);
    aug.view_mut((0, 0), (n, k)).copy_from(q);
    aug.view_mut((0, k), (n, n)).copy_from(&RMat::identity(n, n));
    let mut full = aug.qr().q();
    for j in 0..k {
        full.set_column(j, &q.column(j));
    }
    full
}

/// Largest elementwise |R R^T - I|.
pub fn orthogonality_deviation(r: &RMat) -> f64 {
    let n = r.nrows();
    (r * r.transpose() - RMat::identity(n, n)).amax()
}

pub fn max_abs_diff(a: &RMat, b: &RMat) -> f64 {
    (a - b).amax()
}

pub fn real_to_complex(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}
