//! Small dense/tridiagonal symmetric eigensolvers.
//!
//! The crate needs four kernels, all for real symmetric problems of modest
//! size (n ≲ 1000): eigenvalues of a symmetric tridiagonal matrix, one
//! eigenvector of such a matrix by inverse iteration, the full
//! eigendecomposition of a symmetric tridiagonal matrix, and the full
//! eigendecomposition of a dense symmetric matrix. They are implemented with
//! the classic Householder (tred2) + implicit-shift QL (tql) algorithms so the
//! numerical core stays dependency-free and bit-deterministic.
//!
//! Conventions: matrices are flat row-major `a[i*n + j]`; eigenvectors are
//! returned in the *columns* of the flat matrix (`z[k*n + j]` is component `k`
//! of eigenvector `j`); eigenvalues are sorted ascending with their vectors
//! permuted to match.

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off.len() == diag.len() - 1`), sorted ascending.
pub fn symtrid_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 1 && off.len() + 1 == n, "off-diagonal length must be n-1");
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    tql(&mut d, &mut e, None, n);
    d.sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
    d
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
///
/// Returns `(eigenvalues, z)` with eigenvalues ascending and orthonormal
/// eigenvectors in the columns of `z`.
pub fn symtrid_eigen(diag: &[f64], off: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    assert!(n >= 1 && off.len() + 1 == n, "off-diagonal length must be n-1");
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = identity(n);
    tql(&mut d, &mut e, Some(&mut z), n);
    sort_pairs(&mut d, &mut z, n);
    (d, z)
}

/// Full eigendecomposition of a dense symmetric matrix (flat row-major).
///
/// Only the values actually stored in `a` are read; symmetry is assumed.
/// Returns `(eigenvalues, z)` as in [`symtrid_eigen`].
pub fn sym_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut z = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, &mut d, &mut e, n);
    // tred2 leaves the subdiagonal in e[1..]; shift to the e[i] = (i, i+1)
    // convention used by tql.
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    tql(&mut d, &mut e, Some(&mut z), n);
    sort_pairs(&mut d, &mut z, n);
    (d, z)
}

/// One eigenvector of a symmetric tridiagonal matrix by inverse iteration at
/// a known eigenvalue. The returned vector is normalized; its overall sign is
/// arbitrary but deterministic.
pub fn symtrid_eigenvector(diag: &[f64], off: &[f64], eigenvalue: f64) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 1 && off.len() + 1 == n, "off-diagonal length must be n-1");
    if n == 1 {
        return vec![1.0];
    }
    // Tiny relative shift keeps the shifted matrix nonsingular while staying
    // far inside the gap to neighboring eigenvalues.
    let scale = diag.iter().fold(0.0f64, |m, &x| m.max(x.abs())).max(1.0);
    let shift = eigenvalue + scale * 1e-13;
    let d: Vec<f64> = diag.iter().map(|&x| x - shift).collect();
    let fact = GtLu::factor(off, &d, off);
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..3 {
        fact.solve(&mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > 0.0, "inverse iteration collapsed");
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    v
}

/// LU factorization of a general tridiagonal matrix with partial pivoting
/// (the LAPACK `gttrf`/`gtts2` scheme), used by inverse iteration.
struct GtLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl GtLu {
    fn factor(dl: &[f64], d: &[f64], du: &[f64]) -> GtLu {
        let n = d.len();
        let mut dl = dl.to_vec();
        let mut d = d.to_vec();
        let mut du = du.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                // No interchange; guard an exactly-zero pivot (inverse
                // iteration convention: perturb instead of failing).
                if d[i] == 0.0 {
                    d[i] = f64::MIN_POSITIVE;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
                if i + 2 < n {
                    du2[i] = 0.0;
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = f64::MIN_POSITIVE;
        }
        GtLu { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    z
}

fn sort_pairs(d: &mut [f64], z: &mut [f64], n: usize) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("non-finite eigenvalue"));
    let d_old = d.to_vec();
    let z_old = z.to_vec();
    for (new_j, &old_j) in order.iter().enumerate() {
        d[new_j] = d_old[old_j];
        for k in 0..n {
            z[k * n + new_j] = z_old[k * n + old_j];
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` the (i, i+1) off-diagonal with `e[n-1]`
/// as scratch. If `z` is given, the rotations are accumulated into it
/// (pass the identity for tridiagonal input, or the tred2 basis for dense).
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) {
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form
/// with accumulation of the orthogonal basis (so QL on the output yields
/// eigenvectors of the original matrix). On exit `a` holds the basis, `d`
/// the diagonal, and `e[1..]` the subdiagonal.
fn tred2(a: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (2.0 * h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    e[j] -= hh * f;
                    let g = e[j];
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..i {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..i {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
}
