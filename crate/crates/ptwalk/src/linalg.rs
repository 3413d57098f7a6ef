//! Small dense linear-algebra helpers shared across modules.

use nalgebra::DMatrix;

use crate::{CMatrix, Complex, RMatrix};

/// Promote a real matrix to a complex one.
pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex::new(x, 0.0))
}

/// Largest absolute entry of `a − b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest absolute entry of `a − b` for real matrices.
pub fn max_abs_diff_real(a: &RMatrix, b: &RMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff_real: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest absolute entry of `m − m†` (zero for Hermitian matrices).
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Largest absolute entry of `m − mᵀ` for a real matrix.
pub fn symmetry_defect(m: &RMatrix) -> f64 {
    max_abs_diff_real(m, &m.transpose())
}

/// Largest absolute entry of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Kronecker (tensor) product `a ⊗ b`.
pub fn kron<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T>
where
    T: nalgebra::Scalar + num_traits::Zero + std::ops::Mul<Output = T> + Copy,
{
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// `k`-fold Kronecker power `m^{⊗k}` (`k ≥ 1`).
pub fn kron_power<T>(m: &DMatrix<T>, k: usize) -> DMatrix<T>
where
    T: nalgebra::Scalar + num_traits::Zero + std::ops::Mul<Output = T> + Copy,
{
    assert!(k >= 1, "kron_power requires k >= 1");
    let mut out = m.clone();
    for _ in 1..k {
        out = kron(&out, m);
    }
    out
}

/// Ratio of smallest to largest singular value (`0` for a zero matrix).
pub fn reciprocal_condition(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let s = m.clone().singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = RMatrix::identity(2, 2);
        let i3 = RMatrix::identity(3, 3);
        assert_eq!(kron(&i2, &i3), RMatrix::identity(6, 6));
    }

    #[test]
    fn kron_block_layout() {
        let a = RMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = RMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let k = kron(&a, &b);
        let expected = RMatrix::from_row_slice(2, 4, &[1.0, -1.0, 2.0, -2.0, 3.0, -3.0, 4.0, -4.0]);
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_power_dimension() {
        let m = RMatrix::identity(3, 3);
        assert_eq!(kron_power(&m, 3).shape(), (27, 27));
        assert_eq!(kron_power(&m, 1), m);
    }

    #[test]
    fn rcond_of_singular_matrix_is_zero() {
        let m = to_complex(&RMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        assert!(reciprocal_condition(&m) < 1e-15);
        let i = to_complex(&RMatrix::identity(4, 4));
        assert!((reciprocal_condition(&i) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn defects() {
        let m = RMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(symmetry_defect(&m), 1.0);
        assert_eq!(hermitian_defect(&to_complex(&m)), 1.0);
    }
}
