//! Dense complex matrices and the handful of factorizations the gauge code
//! needs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::NumericsError;

pub type ComplexMatrix = DMatrix<Complex64>;

pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from real-valued rows.
pub fn real_matrix(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    ComplexMatrix::from_fn(r, cols, |i, j| c(rows[i][j], 0.0))
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn scale(m: &ComplexMatrix, s: f64) -> ComplexMatrix {
    m.map(|z| z * s)
}

/// `‖m + m*‖_F`; zero for anti-Hermitian input.
pub fn anti_hermitian_defect(m: &ComplexMatrix) -> f64 {
    frobenius(&(m + m.adjoint()))
}

/// `‖m* m − I‖_F`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.ncols();
    frobenius(&(m.adjoint() * m - ComplexMatrix::identity(n, n)))
}

/// `h^{-1/2}` for a Hermitian positive-definite `h`.
pub fn hermitian_inv_sqrt(h: &ComplexMatrix) -> Option<ComplexMatrix> {
    let eig = h.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
        return None;
    }
    let d = ComplexMatrix::from_diagonal(&eig.eigenvalues.map(|l| c(1.0 / l.sqrt(), 0.0)));
    Some(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

/// Orthonormal columns spanning the numerical kernel of `m`: singular
/// directions whose singular value is below `tol` times the largest one.
pub fn kernel_frame(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix, NumericsError> {
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(NumericsError::NonFinite("matrix entry".into()));
    }
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    // Pad with zero rows so the SVD returns a full right basis.
    let padded = if rows < cols {
        let mut p = ComplexMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let sigma = &svd.singular_values;
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(ComplexMatrix::identity(cols, cols));
    }
    let threshold = tol * smax;
    if let Some(&s) = sigma.iter().find(|&&s| s > threshold / 10.0 && s < threshold * 10.0) {
        return Err(NumericsError::ToleranceAmbiguous { singular_value: s, threshold });
    }
    let keep: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] < threshold).collect();
    let mut frame = ComplexMatrix::zeros(cols, keep.len());
    for (out, &i) in keep.iter().enumerate() {
        for j in 0..cols {
            frame[(j, out)] = v_t[(i, j)].conj();
        }
    }
    Ok(frame)
}

/// Serde adapter: a matrix as a list of rows of `[re, im]` pairs.
pub mod matrix_serde {
    use super::ComplexMatrix;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(ComplexMatrix::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_kernels() {
        let z = ComplexMatrix::zeros(2, 2);
        assert_eq!(kernel_frame(&z, 1e-8).unwrap().ncols(), 2);
        let id = ComplexMatrix::identity(2, 2);
        assert_eq!(kernel_frame(&id, 1e-8).unwrap().ncols(), 0);
        let m = real_matrix(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let f = kernel_frame(&m, 1e-8).unwrap();
        assert_eq!(f.ncols(), 1);
        assert!((f[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(f[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn wide_matrix_kernel() {
        let m = ComplexMatrix::from_fn(2, 5, |i, j| c((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let f = kernel_frame(&m, 1e-8).unwrap();
        assert_eq!(f.ncols(), 3);
        assert!(unitarity_defect(&f) < 1e-12);
        assert!(frobenius(&(&m * &f)) < 1e-12 * frobenius(&m));
    }

    #[test]
    fn ambiguous_threshold() {
        let m = real_matrix(&[&[1.0, 0.0], &[0.0, 3e-8]]);
        assert!(matches!(kernel_frame(&m, 1e-8), Err(NumericsError::ToleranceAmbiguous { .. })));
        assert!(kernel_frame(&m, 0.0).is_err());
    }

    #[test]
    fn inverse_square_root() {
        let h = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let s = hermitian_inv_sqrt(&h).unwrap();
        let back = &s * &h * &s;
        assert!(frobenius(&(back - ComplexMatrix::identity(2, 2))) < 1e-13);
    }
}
