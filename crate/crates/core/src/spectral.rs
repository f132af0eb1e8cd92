//! Dense numerical linear algebra used to cross-check closed forms.

use nalgebra::{DMatrix, SMatrix};

fn dynamic<const N: usize>(m: &SMatrix<f64, N, N>) -> DMatrix<f64> {
    DMatrix::from_fn(N, N, |i, j| m[(i, j)])
}

/// Sorted eigenvalues of the symmetric pencil `S x = mu A0 x` with `A0`
/// symmetric positive definite. Returns `None` if `A0` is not.
pub fn pencil_eigenvalues<const N: usize>(a0: &SMatrix<f64, N, N>, s: &SMatrix<f64, N, N>) -> Option<[f64; N]> {
    let chol = dynamic(a0).cholesky()?;
    let l = chol.l();
    let linv = l.try_inverse()?;
    let c = &linv * dynamic(s) * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let mut out = [0.0; N];
    for (o, e) in out.iter_mut().zip(eig.eigenvalues.iter()) {
        *o = *e;
    }
    out.sort_by(f64::total_cmp);
    Some(out)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    let m = dynamic(m);
    let sym = (&m + m.transpose()) * 0.5;
    sym.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn determinant<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    dynamic(m).lu().determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix2;

    #[test]
    fn pencil_of_diagonal() {
        let a0 = Matrix2::new(2.0, 0.0, 0.0, 1.0);
        let s = Matrix2::new(0.0, 1.0, 1.0, 0.0);
        // det(S - mu A0) = 2 mu² - 1
        let e = pencil_eigenvalues(&a0, &s).unwrap();
        assert!((e[0] + 0.5f64.sqrt()).abs() < 1e-14);
        assert!((e[1] - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(pencil_eigenvalues(&Matrix2::new(-1.0, 0.0, 0.0, 1.0), &s).is_none());
    }

    #[test]
    fn min_eig_and_det() {
        let m = Matrix2::new(1.0, 0.5, 0.5, 1.0);
        assert!((min_eigenvalue(&m) - 0.5).abs() < 1e-14);
        assert!((determinant(&m) - 0.75).abs() < 1e-14);
    }
}
