//! Rank-revealing solves shared by the Green and kernel solvers. Matrices are
//! held as nalgebra types; the SVD and Hermitian eigendecompositions run in faer.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative singular-value cutoff for collocation and Gram factorizations.
pub const SINGULAR_CUTOFF: f64 = 1e-12;

fn to_faer<T: Copy + nalgebra::Scalar>(a: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer<T: Copy + nalgebra::Scalar>(a: faer::MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Thin SVD `a = U diag(s) Vᴴ`, singular values in nonincreasing order.
fn thin_svd<T>(a: &DMatrix<T>) -> Result<(DMatrix<T>, Vec<f64>, DMatrix<T>)>
where
    T: Copy + nalgebra::Scalar + faer::traits::ComplexField<Real = f64>,
{
    let svd = to_faer(a).thin_svd().map_err(|e| Error::Numerical(format!("SVD failed: {e:?}")))?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|x| T::real_part_impl(x)).collect();
    Ok((from_faer(svd.U()), s, from_faer(svd.V())))
}

/// Least-squares solution of `a x ≈ b` by truncated SVD after column equilibration.
/// Returns the solution and the number of retained singular values.
pub fn truncated_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rel_cutoff: f64) -> Result<(DVector<f64>, usize)> {
    let scales: Vec<f64> = a
        .column_iter()
        .map(|c| {
            let n = c.norm();
            if n > 0.0 {
                1.0 / n
            } else {
                0.0
            }
        })
        .collect();
    let mut scaled = a.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*s);
    }
    let (u, sv, v) = thin_svd(&scaled)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    if !(smax > 0.0) || !smax.is_finite() {
        return Err(Error::Conditioning("collocation matrix has no usable singular values".into()));
    }
    let rank = sv.iter().take_while(|&&s| s > rel_cutoff * smax).count();
    let utb = u.columns(0, rank).transpose() * b;
    let y = DVector::from_iterator(rank, utb.iter().zip(&sv).map(|(c, s)| c / s));
    let mut x = v.columns(0, rank) * y;
    for (j, s) in scales.iter().enumerate() {
        x[j] *= s;
    }
    Ok((x, rank))
}

/// Orthonormalizing change of basis for a positive semidefinite Gram matrix
/// `G ≈ V Λ Vᴴ`, truncated to eigenvalues above the cutoff. Coefficients
/// `c = V Λ^{-1/2} y` give functions with `‖f‖ = |y|`.
#[derive(Clone, Debug)]
pub struct Whitening {
    /// `V Λ^{-1/2}`, one column per retained mode.
    pub transform: DMatrix<Complex64>,
    pub retained: usize,
    /// `λ_max / λ_min` over retained modes.
    pub condition: f64,
}

impl Whitening {
    /// From a Hermitian Gram matrix (symmetrized before factorization).
    pub fn from_gram(gram: &DMatrix<Complex64>, rel_cutoff: f64) -> Result<Self> {
        let herm = (gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = to_faer(&herm)
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
        let lambdas: Vec<f64> = eig.S().column_vector().iter().map(|x| x.re).collect();
        Self::from_modes(&from_faer(eig.U()), &lambdas, rel_cutoff)
    }

    /// From a factor `B` with `G = Bᴴ B` (e.g. square-root-weighted samples).
    pub fn from_factor(factor: &DMatrix<Complex64>, rel_cutoff: f64) -> Result<Self> {
        let (_, sv, v) = thin_svd(factor)?;
        let lambdas: Vec<f64> = sv.iter().map(|s| s * s).collect();
        Self::from_modes(&v, &lambdas, rel_cutoff)
    }

    fn from_modes(vectors: &DMatrix<Complex64>, lambdas: &[f64], rel_cutoff: f64) -> Result<Self> {
        let lmax = lambdas.iter().cloned().fold(0.0, f64::max);
        if !(lmax > 0.0) || !lmax.is_finite() {
            return Err(Error::Conditioning("Gram matrix is numerically zero".into()));
        }
        let keep: Vec<usize> = (0..lambdas.len()).filter(|&i| lambdas[i] > rel_cutoff * lmax).collect();
        let lmin = keep.iter().map(|&i| lambdas[i]).fold(f64::INFINITY, f64::min);
        let mut transform = DMatrix::zeros(vectors.nrows(), keep.len());
        for (col, &i) in keep.iter().enumerate() {
            let s = Complex64::new(1.0 / lambdas[i].sqrt(), 0.0);
            transform.set_column(col, &(vectors.column(i) * s));
        }
        Ok(Whitening { transform, retained: keep.len(), condition: lmax / lmin })
    }

    /// Minimizes `‖f‖²` subject to `C c = d`. Returns `(min ‖f‖², c)`.
    pub fn constrained_min_norm(
        &self,
        constraints: &DMatrix<Complex64>,
        rhs: &DVector<Complex64>,
    ) -> Result<(f64, DVector<Complex64>)> {
        let m = constraints * &self.transform;
        let (u, sv, v) = thin_svd(&m)?;
        let smax = sv.first().copied().unwrap_or(0.0);
        let rank = sv.iter().take_while(|&&s| s > 1e-13 * smax).count();
        if rank < constraints.nrows() || !(smax > 0.0) {
            return Err(Error::Config(
                "constraints are not independent on the retained basis (basis too small?)".into(),
            ));
        }
        // minimum-norm y with M y = d
        let utd = u.columns(0, rank).adjoint() * rhs;
        let z = DVector::from_iterator(rank, utd.iter().zip(&sv).map(|(c, s)| c / *s));
        let y = v.columns(0, rank) * z;
        let norm_sq = y.norm_squared();
        Ok((norm_sq, &self.transform * y))
    }
}

/// `cᴴ G c`.
pub fn quadratic_form(gram: &DMatrix<Complex64>, c: &DVector<Complex64>) -> f64 {
    (c.adjoint() * gram * c)[(0, 0)].re
}
