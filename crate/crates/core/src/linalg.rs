//! Dense linear-algebra helpers: least squares through scaled normal
//! equations, Lyapunov equations via the Kronecker form, and companion-matrix
//! spectral radii.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative pivot below which a scaled Gram matrix is treated as singular.
const SINGULAR_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub(crate) struct OlsFit {
    pub coef: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Least squares of `y` on the rows of a design matrix.
///
/// `row(i, out)` writes regressor row `i` into `out` (length `n_cols`).
pub(crate) fn ols(
    n_rows: usize,
    n_cols: usize,
    row: impl Fn(usize, &mut [f64]),
    y: impl Fn(usize) -> f64,
) -> Result<OlsFit> {
    if n_rows <= n_cols {
        return Err(Error::TooShort {
            needed: n_cols + 1,
            got: n_rows,
        });
    }
    let mut gram = DMatrix::<f64>::zeros(n_cols, n_cols);
    let mut xty = DVector::<f64>::zeros(n_cols);
    let mut buf = vec![0.0; n_cols];
    for i in 0..n_rows {
        row(i, &mut buf);
        let yi = y(i);
        for a in 0..n_cols {
            xty[a] += buf[a] * yi;
            for b in a..n_cols {
                gram[(a, b)] += buf[a] * buf[b];
            }
        }
    }
    for a in 0..n_cols {
        for b in 0..a {
            gram[(a, b)] = gram[(b, a)];
        }
    }

    // Jacobi scaling keeps the pivot test meaningful across column units.
    let scale: Vec<f64> = (0..n_cols).map(|a| gram[(a, a)].sqrt()).collect();
    if scale.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::SingularRegression);
    }
    let scaled = DMatrix::from_fn(n_cols, n_cols, |a, b| gram[(a, b)] / (scale[a] * scale[b]));
    let rhs = DVector::from_fn(n_cols, |a, _| xty[a] / scale[a]);
    let eig = scaled.clone().symmetric_eigenvalues();
    if eig.min() < SINGULAR_TOL * eig.max() {
        return Err(Error::SingularRegression);
    }
    let chol = scaled.cholesky().ok_or(Error::SingularRegression)?;
    let z = chol.solve(&rhs);
    let coef: Vec<f64> = (0..n_cols).map(|a| z[a] / scale[a]).collect();

    let residuals = (0..n_rows)
        .map(|i| {
            row(i, &mut buf);
            y(i) - buf.iter().zip(&coef).map(|(x, c)| x * c).sum::<f64>()
        })
        .collect();
    Ok(OlsFit { coef, residuals })
}

/// Solves `A P + P Aᵀ + Q = 0`.
pub fn solve_continuous_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let k = eye.kronecker(a) + a.kronecker(&eye);
    solve_vec(k, -q, n)
}

/// Solves `P = A P Aᵀ + Q`.
pub fn solve_discrete_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let k = DMatrix::<f64>::identity(n * n, n * n) - a.kronecker(a);
    solve_vec(k, q.clone(), n)
}

fn solve_vec(k: DMatrix<f64>, rhs: DMatrix<f64>, n: usize) -> Result<DMatrix<f64>> {
    let v = DVector::from_column_slice(rhs.as_slice());
    let sol = k
        .lu()
        .solve(&v)
        .ok_or_else(|| Error::Model("Lyapunov equation has no unique solution".into()))?;
    let p = DMatrix::from_column_slice(n, n, sol.as_slice());
    Ok((&p + p.transpose()) * 0.5)
}

/// Largest eigenvalue modulus of a square matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Spectral radius of the companion matrix of `1 - c1 z - ... - cp z^p`.
/// All roots of that polynomial lie outside the unit circle iff this is < 1.
pub fn companion_radius(c: &[f64]) -> f64 {
    let p = c.len();
    if p == 0 {
        return 0.0;
    }
    let mut m = DMatrix::<f64>::zeros(p, p);
    for (j, &cj) in c.iter().enumerate() {
        m[(0, j)] = cj;
    }
    for i in 1..p {
        m[(i, i - 1)] = 1.0;
    }
    spectral_radius(&m)
}

pub(crate) fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len();
    if n == 0 || n != b.len() {
        return None;
    }
    let ma = a.iter().sum::<f64>() / n as f64;
    let mb = b.iter().sum::<f64>() / n as f64;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}
