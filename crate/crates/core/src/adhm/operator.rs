//! The pointwise operator `D(x)` and the orthogonal projector onto its
//! kernel, `Π = I − D*(D D*)^{-1} D`.

use num_complex::Complex64;

use super::AdhmData;
use crate::numerics::{c, ComplexMatrix};

pub fn adhm_operator(d: &AdhmData, x: [f64; 4]) -> ComplexMatrix {
    let k = d.k;
    let n = 2 * k + d.r;
    let z1 = c(x[0], x[1]);
    let z2 = c(x[2], x[3]);
    let mut m = ComplexMatrix::zeros(2 * k, n);
    for i in 0..k {
        for j in 0..k {
            let shift = if i == j { 1.0 } else { 0.0 };
            let a1 = d.alpha1[(i, j)] - z1 * shift;
            let a2 = d.alpha2[(i, j)] - z2 * shift;
            // Top block row holds adjoints: entry (i, j) of a* is conj(a[j, i]).
            m[(j, i)] = a1.conj();
            m[(j, k + i)] = a2.conj();
            m[(k + i, j)] = -a2;
            m[(k + i, k + j)] = a1;
        }
        for a in 0..d.r {
            m[(i, 2 * k + a)] = d.q_map[(a, i)].conj();
            m[(k + i, 2 * k + a)] = d.p_map[(i, a)];
        }
    }
    m
}

/// `None` where `D D*` is singular.
pub fn projector(d: &AdhmData, x: [f64; 4]) -> Option<ComplexMatrix> {
    let m = adhm_operator(d, x);
    let n = m.ncols();
    let g = &m * m.adjoint();
    let inv = g.cholesky()?.inverse();
    Some(ComplexMatrix::identity(n, n) - m.adjoint() * inv * &m)
}

/// Allocation-free projector evaluation for grid sweeps. Matrices are
/// stored row-major in flat buffers that live as long as the workspace.
pub struct ProjectorWorkspace<'a> {
    data: &'a AdhmData,
    n: usize,
    m: usize,
    op: Vec<Complex64>,
    gram: Vec<Complex64>,
    sol: Vec<Complex64>,
}

impl<'a> ProjectorWorkspace<'a> {
    pub fn new(data: &'a AdhmData) -> Self {
        let m = 2 * data.k;
        let n = m + data.r;
        ProjectorWorkspace {
            data,
            n,
            m,
            op: vec![Complex64::default(); m * n],
            gram: vec![Complex64::default(); m * m],
            sol: vec![Complex64::default(); m * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn fill_operator(&mut self, x: [f64; 4]) {
        let (k, n, d) = (self.data.k, self.n, self.data);
        let z1 = c(x[0], x[1]);
        let z2 = c(x[2], x[3]);
        for i in 0..k {
            for j in 0..k {
                let shift = if i == j { 1.0 } else { 0.0 };
                let a1 = d.alpha1[(i, j)] - z1 * shift;
                let a2 = d.alpha2[(i, j)] - z2 * shift;
                self.op[j * n + i] = a1.conj();
                self.op[j * n + k + i] = a2.conj();
                self.op[(k + i) * n + j] = -a2;
                self.op[(k + i) * n + k + j] = a1;
            }
            for a in 0..d.r {
                self.op[i * n + 2 * k + a] = d.q_map[(a, i)].conj();
                self.op[(k + i) * n + 2 * k + a] = d.p_map[(i, a)];
            }
        }
    }

    /// Writes `Π(x)` into `out` (row-major `n × n`). Returns `false` where
    /// `D D*` is not positive definite.
    pub fn eval(&mut self, x: [f64; 4], out: &mut [Complex64]) -> bool {
        let (m, n) = (self.m, self.n);
        self.fill_operator(x);
        for i in 0..m {
            for j in 0..=i {
                let mut s = Complex64::default();
                for t in 0..n {
                    s += self.op[i * n + t] * self.op[j * n + t].conj();
                }
                self.gram[i * m + j] = s;
            }
        }
        // In-place Cholesky: lower triangle of `gram` becomes L.
        for j in 0..m {
            let mut diag = self.gram[j * m + j].re;
            for t in 0..j {
                diag -= self.gram[j * m + t].norm_sqr();
            }
            if !(diag > 0.0) {
                return false;
            }
            let l = diag.sqrt();
            self.gram[j * m + j] = c(l, 0.0);
            for i in j + 1..m {
                let mut s = self.gram[i * m + j];
                for t in 0..j {
                    s -= self.gram[i * m + t] * self.gram[j * m + t].conj();
                }
                self.gram[i * m + j] = s / l;
            }
        }
        // sol = (L L*)^{-1} D, column by column of D.
        self.sol.copy_from_slice(&self.op);
        for col in 0..n {
            for i in 0..m {
                let mut s = self.sol[i * n + col];
                for t in 0..i {
                    s -= self.gram[i * m + t] * self.sol[t * n + col];
                }
                self.sol[i * n + col] = s / self.gram[i * m + i].re;
            }
            for i in (0..m).rev() {
                let mut s = self.sol[i * n + col];
                for t in i + 1..m {
                    s -= self.gram[t * m + i].conj() * self.sol[t * n + col];
                }
                self.sol[i * n + col] = s / self.gram[i * m + i].re;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let mut s = if a == b { c(1.0, 0.0) } else { Complex64::default() };
                for t in 0..m {
                    s -= self.op[t * n + a].conj() * self.sol[t * n + b];
                }
                out[a * n + b] = s;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adhm::thooft_data;
    use crate::numerics::frobenius;

    #[test]
    fn gram_is_block_diagonal_for_adhm_data() {
        let d = thooft_data(&[[0.0, 0.0, 0.0, 0.0], [1.0, 0.5, -0.3, 0.2]], &[1.0, 0.7]).unwrap();
        let m = adhm_operator(&d, [0.3, -0.2, 0.9, 0.1]);
        let g = &m * m.adjoint();
        let off = g.view((0, 2), (2, 2)).into_owned();
        assert!(frobenius(&off) < 1e-14);
        let diff = g.view((0, 0), (2, 2)).into_owned() - g.view((2, 2), (2, 2)).into_owned();
        assert!(frobenius(&diff) < 1e-14);
    }

    #[test]
    fn workspace_matches_dense() {
        let d = thooft_data(&[[0.0, 0.0, 0.0, 0.0], [1.5, 0.0, 0.0, 0.0]], &[1.0, 1.0]).unwrap();
        let x = [0.2, 0.4, -0.7, 1.1];
        let dense = projector(&d, x).unwrap();
        let mut ws = ProjectorWorkspace::new(&d);
        let n = ws.dim();
        let mut out = vec![Complex64::default(); n * n];
        assert!(ws.eval(x, &mut out));
        for a in 0..n {
            for b in 0..n {
                assert!((out[a * n + b] - dense[(a, b)]).norm() < 1e-13);
            }
        }
        let tr: f64 = (0..n).map(|a| out[a * n + a].re).sum();
        assert!((tr - 2.0).abs() < 1e-12);
    }
}
