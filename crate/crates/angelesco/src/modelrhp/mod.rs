//! The 3x3 local model Riemann-Hilbert problem: contour-integral solutions
//! `q_j` of the third-order equation `z q''' - beta q'' - tau q' + q = 0`,
//! the sectorwise matrix `Psi(z; tau)`, the entire function `Q(z; tau)`, and
//! numerical verification of jumps, monodromy, differential equations, and
//! the large-`z` expansion.

mod contour;
mod psi;
mod qcap;
mod qfun;

pub use contour::ContourSpec;
pub use psi::{
    psi, psi_asymptotic_check, psi_det, theta_k, AsymptoticReport, ModelMatrices, Sector,
};
pub use qcap::{q_eval, q_relation_residual, q_series_tau0, QValue};
pub use qfun::{q_all, q_all_on_cut, q_j};

use rug::{Complex, Float};

use crate::prec::cabs;

/// Dense 3x3 complex matrix.
#[derive(Debug, Clone)]
pub struct Matrix3(pub [[Complex; 3]; 3]);

impl Matrix3 {
    pub fn zero(bits: u32) -> Self {
        Matrix3(std::array::from_fn(|_| std::array::from_fn(|_| Complex::new(bits))))
    }

    pub fn identity(bits: u32) -> Self {
        let mut m = Self::zero(bits);
        for i in 0..3 {
            m.0[i][i] = Complex::with_val((bits, bits), (1, 0));
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        Matrix3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn mul(&self, rhs: &Matrix3) -> Matrix3 {
        let bits = self.0[0][0].prec().0;
        Matrix3::from_fn(|i, j| {
            let mut acc = Complex::new(bits);
            for k in 0..3 {
                acc += self.0[i][k].clone() * &rhs.0[k][j];
            }
            acc
        })
    }

    pub fn sub(&self, rhs: &Matrix3) -> Matrix3 {
        Matrix3::from_fn(|i, j| self.0[i][j].clone() - &rhs.0[i][j])
    }

    pub fn scale(&self, s: &Complex) -> Matrix3 {
        Matrix3::from_fn(|i, j| self.0[i][j].clone() * s)
    }

    pub fn det(&self) -> Complex {
        let m = &self.0;
        let c0 = m[1][1].clone() * &m[2][2] - m[1][2].clone() * &m[2][1];
        let c1 = m[1][0].clone() * &m[2][2] - m[1][2].clone() * &m[2][0];
        let c2 = m[1][0].clone() * &m[2][1] - m[1][1].clone() * &m[2][0];
        m[0][0].clone() * c0 - m[0][1].clone() * c1 + m[0][2].clone() * c2
    }

    /// Inverse by the adjugate.
    pub fn inverse(&self) -> Matrix3 {
        let m = &self.0;
        let det = self.det();
        let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
            m[r1][c1].clone() * &m[r2][c2] - m[r1][c2].clone() * &m[r2][c1]
        };
        let adj = [
            [cof(1, 1, 2, 2), -cof(0, 1, 2, 2), cof(0, 1, 1, 2)],
            [-cof(1, 0, 2, 2), cof(0, 0, 2, 2), -cof(0, 0, 1, 2)],
            [cof(1, 0, 2, 1), -cof(0, 0, 2, 1), cof(0, 0, 1, 1)],
        ];
        Matrix3::from_fn(|i, j| adj[i][j].clone() / &det)
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> Float {
        let bits = self.0[0][0].prec().0;
        let mut best = Float::new(bits);
        for row in &self.0 {
            for e in row {
                best = best.max(&cabs(e));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prec::Prec;

    #[test]
    fn inverse_round_trip() {
        let p = Prec::digits(40);
        let m = Matrix3::from_fn(|i, j| p.c((i * 3 + j) as f64 + 1.0, (i as f64) - (j as f64)))
            .sub(&Matrix3::identity(p.bits()).scale(&p.c(0.0, 5.0)));
        let inv = m.inverse();
        let prod = m.mul(&inv).sub(&Matrix3::identity(p.bits()));
        assert!(prod.max_norm() < p.f(1e-35));
    }
}
