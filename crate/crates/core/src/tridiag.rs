//! Symmetric tridiagonal Toeplitz systems: Thomas solver, matrix-vector
//! products, and closed-form spectra.
//!
//! The compact scheme reduces every directional derivative to systems
//! `A w = r` where `A` has constant diagonal `a0` and off-diagonal `a1`
//! with `|a0| > 2|a1|`, so the Thomas algorithm needs no pivoting and
//! runs in O(N) per line.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Coefficients of the combined compact second-derivative approximation
/// `a1 w_{i-1} + a0 w_i + a1 w_{i+1} = (b1 u_{i-1} + b0 u_i + b1 u_{i+1}) / h^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
}

impl Default for SchemeCoefficients {
    fn default() -> Self {
        SchemeCoefficients {
            a0: 1.0,
            a1: 0.1,
            b0: -12.0 / 5.0,
            b1: 6.0 / 5.0,
        }
    }
}

impl SchemeCoefficients {
    /// Custom coefficients; the left-hand matrix must stay strictly
    /// diagonally dominant or the pivoting-free solve is unjustified.
    pub fn new(a0: f64, a1: f64, b0: f64, b1: f64) -> Result<Self> {
        if !(a0.is_finite() && a1.is_finite() && b0.is_finite() && b1.is_finite()) {
            return Err(Error::NonFinite("scheme coefficients".into()));
        }
        if a0.abs() <= 2.0 * a1.abs() {
            return Err(Error::InvalidArgument(format!(
                "coefficients not diagonally dominant: |{a0}| <= 2|{a1}|"
            )));
        }
        Ok(SchemeCoefficients { a0, a1, b0, b1 })
    }

    /// Left-hand matrix of order `n`.
    pub fn matrix_a(&self, n: usize) -> TriDiagToeplitz {
        TriDiagToeplitz {
            n,
            diag: self.a0,
            offdiag: self.a1,
        }
    }

    /// Right-hand matrix of order `n`.
    pub fn matrix_b(&self, n: usize) -> TriDiagToeplitz {
        TriDiagToeplitz {
            n,
            diag: self.b0,
            offdiag: self.b1,
        }
    }
}

/// Symmetric tridiagonal Toeplitz matrix of order `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriDiagToeplitz {
    pub n: usize,
    pub diag: f64,
    pub offdiag: f64,
}

/// `m * v` with out-of-range neighbor terms treated as zero.
pub fn apply_toeplitz(m: &TriDiagToeplitz, v: &[f64]) -> Vec<f64> {
    assert_eq!(v.len(), m.n, "apply_toeplitz: length mismatch");
    let n = m.n;
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = m.diag * v[i];
        if i > 0 {
            acc += m.offdiag * v[i - 1];
        }
        if i + 1 < n {
            acc += m.offdiag * v[i + 1];
        }
        out[i] = acc;
    }
    out
}

/// Solve `m x = rhs` by the Thomas algorithm without pivoting.
pub fn thomas_solve(m: &TriDiagToeplitz, rhs: &[f64]) -> Vec<f64> {
    assert_eq!(rhs.len(), m.n, "thomas_solve: length mismatch");
    let factor = ThomasFactor::new(m);
    let mut x = rhs.to_vec();
    factor.solve_in_place(&mut x);
    x
}

/// Precomputed Thomas elimination for a fixed Toeplitz matrix.
///
/// The pivots depend only on the matrix, so one factorization serves
/// every line solve of the same direction.
#[derive(Debug, Clone)]
pub struct ThomasFactor {
    offdiag: f64,
    /// Scaled super-diagonal after elimination: `w[i] = offdiag / denom[i]`.
    w: Vec<f64>,
    inv_denom: Vec<f64>,
}

impl ThomasFactor {
    pub fn new(m: &TriDiagToeplitz) -> Self {
        assert!(m.n >= 1, "ThomasFactor: order must be >= 1");
        let n = m.n;
        let mut w = vec![0.0; n];
        let mut inv_denom = vec![0.0; n];
        let mut denom = m.diag;
        for i in 0..n {
            if i > 0 {
                denom = m.diag - m.offdiag * w[i - 1];
            }
            assert!(denom != 0.0, "zero pivot in Thomas elimination");
            inv_denom[i] = 1.0 / denom;
            w[i] = m.offdiag * inv_denom[i];
        }
        ThomasFactor {
            offdiag: m.offdiag,
            w,
            inv_denom,
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.w.len()
    }

    /// Forward eliminate and back substitute on a contiguous line.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.order();
        assert_eq!(x.len(), n, "solve_in_place: length mismatch");
        x[0] *= self.inv_denom[0];
        for i in 1..n {
            x[i] = (x[i] - self.offdiag * x[i - 1]) * self.inv_denom[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.w[i] * x[i + 1];
        }
    }

    /// Batched solve over `n` planes of `plane_len` contiguous values
    /// each: plane `i` holds component `i` of every line. Used for the
    /// strided y/z sweeps where lines are interleaved.
    pub fn solve_planes(&self, data: &mut [f64], plane_len: usize) {
        let n = self.order();
        assert_eq!(data.len(), n * plane_len, "solve_planes: length mismatch");
        let inv0 = self.inv_denom[0];
        for v in &mut data[..plane_len] {
            *v *= inv0;
        }
        for i in 1..n {
            let (prev, rest) = data.split_at_mut(i * plane_len);
            let prev = &prev[(i - 1) * plane_len..];
            let cur = &mut rest[..plane_len];
            let inv = self.inv_denom[i];
            let e = self.offdiag;
            for (c, p) in cur.iter_mut().zip(prev) {
                *c = (*c - e * p) * inv;
            }
        }
        for i in (0..n - 1).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * plane_len);
            let cur = &mut head[i * plane_len..];
            let next = &tail[..plane_len];
            let w = self.w[i];
            for (c, nx) in cur.iter_mut().zip(next) {
                *c -= w * nx;
            }
        }
    }
}

/// Closed-form eigenvalues `diag + 2 offdiag cos(pi l / (n+1))`,
/// `l = 1..n`, sorted ascending.
pub fn toeplitz_spectrum(m: &TriDiagToeplitz) -> Vec<f64> {
    let n = m.n;
    let mut eig: Vec<f64> = (1..=n)
        .map(|l| m.diag + 2.0 * m.offdiag * (PI * l as f64 / (n as f64 + 1.0)).cos())
        .collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}
