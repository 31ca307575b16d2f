//! Dense linear-algebra helpers shared across the crate.
//!
//! Thin wrappers over nalgebra specialized to the matrix shapes used here:
//! quadrature-ordered real matrices (all x first, then all p) and complex
//! mode-space matrices.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{cabs, real, Scalar};

/// Complex dense matrix over the crate scalar.
pub type CMat<T> = DMatrix<Complex<T>>;
/// Real dense matrix over the crate scalar.
pub type RMat<T> = DMatrix<T>;
/// Real dense vector.
pub type RVec<T> = DVector<T>;
/// Complex dense vector.
pub type CVec<T> = DVector<Complex<T>>;

/// Symplectic form Ω = [[0, I], [-I, 0]] in (x₁..x_N, p₁..p_N) ordering.
pub fn symplectic_form<T: Scalar>(n_modes: usize) -> RMat<T> {
    let mut om = RMat::zeros(2 * n_modes, 2 * n_modes);
    for j in 0..n_modes {
        om[(j, n_modes + j)] = T::one();
        om[(n_modes + j, j)] = -T::one();
    }
    om
}

/// Quadrature transform 𝒯 = [[I, I], [-iI, iI]] mapping (a, a†) to (x, p).
pub fn quadrature_transform<T: Scalar>(n_modes: usize) -> CMat<T> {
    let mut t = CMat::zeros(2 * n_modes, 2 * n_modes);
    let one = Complex::new(T::one(), T::zero());
    let mi = Complex::new(T::zero(), -T::one());
    for j in 0..n_modes {
        t[(j, j)] = one;
        t[(j, n_modes + j)] = one;
        t[(n_modes + j, j)] = mi;
        t[(n_modes + j, n_modes + j)] = -mi;
    }
    t
}

/// Lift a real matrix into the complex field.
pub fn complexify<T: Scalar>(m: &RMat<T>) -> CMat<T> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// Largest absolute entry of a complex matrix.
pub fn max_abs_c<T: Scalar>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, &z| acc.max(cabs(z)))
}

/// Largest absolute entry of a real matrix.
pub fn max_abs_r<T: Scalar>(m: &RMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// Largest absolute imaginary part of a complex matrix.
pub fn max_imag<T: Scalar>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.im.abs()))
}

/// Symmetrize in place: V ← (V + Vᵀ)/2.
pub fn symmetrize<T: Scalar>(m: &mut RMat<T>) {
    let half = real::<T>(0.5);
    let mt = m.transpose();
    for (dst, src) in m.iter_mut().zip(mt.iter()) {
        *dst = (*dst + *src) * half;
    }
}

/// Eigenvalues of the Hermitian matrix `m`, ascending.
///
/// The caller is responsible for `m` being (numerically) Hermitian; the
/// strictly lower triangle is taken as the conjugate of the upper one.
pub fn hermitian_eigenvalues<T: Scalar>(m: &CMat<T>) -> RVec<T> {
    let eig = m.clone().symmetric_eigen();
    let mut ev: Vec<T> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("NaN eigenvalue"));
    RVec::from_vec(ev)
}

/// Eigenvalues and eigenvectors of a real symmetric matrix, ascending.
///
/// The eigenvalue attached to each column is recomputed as the Rayleigh
/// quotient of that column: nalgebra's `SymmetricEigen` can hand back a
/// correct eigenvector basis whose stored eigenvalue *order* disagrees with
/// the column order, and the quotient repairs the pairing.
pub fn symmetric_eigen<T: Scalar>(m: &RMat<T>) -> (RVec<T>, RMat<T>) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let paired: Vec<T> = (0..n)
        .map(|k| {
            let col = eig.eigenvectors.column(k);
            (col.transpose() * m * col)[(0, 0)]
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| paired[a].partial_cmp(&paired[b]).expect("NaN eigenvalue"));
    let values = RVec::from_iterator(n, order.iter().map(|&i| paired[i]));
    let mut vectors = RMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Symmetric positive (semi)definite square root via eigendecomposition.
///
/// Eigenvalues below `-floor_tol` are rejected; small negatives are clamped
/// to zero.
pub fn spd_sqrt<T: Scalar>(m: &RMat<T>, floor_tol: T) -> Result<RMat<T>> {
    let (values, vectors) = symmetric_eigen(m);
    let n = m.nrows();
    let mut scaled = vectors.clone();
    for k in 0..n {
        if values[k] < -floor_tol {
            return Err(Error::invalid(
                "matrix is not positive semidefinite (square root undefined)",
            ));
        }
        let root = values[k].max(T::zero()).sqrt();
        scaled.column_mut(k).scale_mut(root);
    }
    Ok(&scaled * vectors.transpose())
}

/// log(det M) of a symmetric positive definite matrix via Cholesky.
///
/// Accumulates in log space, so determinants of large well-conditioned
/// matrices do not overflow.
pub fn spd_log_determinant<T: Scalar>(m: &RMat<T>) -> Result<T> {
    let chol = m.clone().cholesky().ok_or_else(|| {
        Error::invalid("matrix is not symmetric positive definite (Cholesky failed)")
    })?;
    let l = chol.l();
    let mut acc = T::zero();
    for i in 0..m.nrows() {
        acc += l[(i, i)].ln();
    }
    Ok(acc + acc)
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
pub fn spd_inverse<T: Scalar>(m: &RMat<T>) -> Result<RMat<T>> {
    let chol = m.clone().cholesky().ok_or_else(|| {
        Error::invalid("matrix is not symmetric positive definite (Cholesky failed)")
    })?;
    Ok(chol.inverse())
}
