//! Sectorwise assembly of the model matrix `Psi(z; tau)` and verification of
//! its jump, monodromy, and asymptotic structure.

use rug::{Complex, Float};

use crate::curve::Side;
use crate::error::{Error, Result};
use crate::fitting::log_log_slope;
use crate::prec::{cpow, Prec};

use super::contour::ContourSpec;
use super::qfun::{guarded_prec, q_all, q_all_on_cut};
use super::Matrix3;

/// The six analyticity sectors of `Psi`, counted counterclockwise from the
/// positive real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// `0 < arg z < pi/4`
    S1,
    /// `pi/4 < arg z < 3 pi/4`
    S2,
    /// `3 pi/4 < arg z < pi`
    S3,
    /// `-pi/4 < arg z < 0`
    S4,
    /// `-3 pi/4 < arg z < -pi/4`
    S5,
    /// `-pi < arg z < -3 pi/4`
    S6,
}

impl Sector {
    /// Sector containing `arg z`; errors within `tol_rad` of a boundary ray.
    pub fn classify(arg: f64, tol_rad: f64) -> Result<Sector> {
        use std::f64::consts::PI;
        let rays = [0.0, PI / 4.0, 3.0 * PI / 4.0, PI, -PI / 4.0, -3.0 * PI / 4.0, -PI];
        for r in rays {
            if (arg - r).abs() < tol_rad {
                return Err(Error::AmbiguousSector(format!(
                    "arg z = {arg} within {tol_rad} of the ray at {r}; take one-sided limits"
                )));
            }
        }
        Ok(if arg > 0.0 {
            if arg < PI / 4.0 {
                Sector::S1
            } else if arg < 3.0 * PI / 4.0 {
                Sector::S2
            } else {
                Sector::S3
            }
        } else if arg > -PI / 4.0 {
            Sector::S4
        } else if arg > -3.0 * PI / 4.0 {
            Sector::S5
        } else {
            Sector::S6
        })
    }
}

/// Constant ingredients of the model problem at fixed `beta`, `tau`.
#[derive(Debug, Clone)]
pub struct ModelMatrices {
    pub omega: Complex,
    pub omega_plus: Matrix3,
    pub omega_minus: Matrix3,
    pub b_plus: Matrix3,
    pub b_minus: Matrix3,
    pub psi1_plus: Matrix3,
    pub psi1_minus: Matrix3,
    beta: Float,
    tau: Float,
    prec: Prec,
}

impl ModelMatrices {
    pub fn new(beta: &Float, tau: &Float, prec: Prec) -> Self {
        let bits = prec.bits();
        let w = prec.omega();
        let w2 = w.clone().square();
        let one = Complex::with_val((bits, bits), (1, 0));
        let omega_plus = Matrix3([
            [-w2.clone(), one.clone(), w.clone()],
            [one.clone(), -one.clone(), -one.clone()],
            [-w.clone(), one.clone(), w2.clone()],
        ]);
        let omega_minus = Matrix3([
            [w.clone(), one.clone(), w2.clone()],
            [-one.clone(), -one.clone(), -one.clone()],
            [w2.clone(), one.clone(), w.clone()],
        ]);
        let pi = prec.pi();
        let phase = |s: f64| -> Complex {
            let ang = pi.clone() * beta * Float::with_val(bits, s) / 3u32;
            prec.cis(&ang)
        };
        let zero = Complex::new(bits);
        let b_plus = Matrix3([
            [phase(1.0), zero.clone(), zero.clone()],
            [zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), phase(-1.0)],
        ]);
        let b_minus = Matrix3([
            [phase(-1.0), zero.clone(), zero.clone()],
            [zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), phase(1.0)],
        ]);

        // (Psi_1)_+- = -(tau/3)(tau^2/9 + beta + 1) D_+- - (tau/9) N_+-
        let tau_f = Float::with_val(bits, tau);
        let c_diag = -(tau_f.clone() / 3u32)
            * (tau_f.clone().square() / 9u32 + Float::with_val(bits, beta) + 1u32);
        let c_off = -tau_f.clone() / 9u32;
        let diag = |entries: [&Complex; 3]| {
            Matrix3([
                [entries[0].clone() * &c_diag, zero.clone(), zero.clone()],
                [zero.clone(), Complex::with_val((bits, bits), (&c_diag, &Float::new(bits))), zero.clone()],
                [zero.clone(), zero.clone(), entries[2].clone() * &c_diag],
            ])
        };
        let sub = |a: &Complex, b: &Complex| a.clone() - b;
        let n_plus = Matrix3([
            [zero.clone(), sub(&w2, &w) * &c_off, sub(&one, &w) * &c_off],
            [sub(&w2, &one) * &c_off, zero.clone(), sub(&one, &w) * &c_off],
            [sub(&one, &w2) * &c_off, sub(&w2, &w) * &c_off, zero.clone()],
        ]);
        let n_minus = Matrix3([
            [zero.clone(), sub(&w2, &w) * &c_off, sub(&w2, &one) * &c_off],
            [sub(&one, &w) * &c_off, zero.clone(), sub(&one, &w2) * &c_off],
            [sub(&w, &one) * &c_off, sub(&w, &w2) * &c_off, zero.clone()],
        ]);
        let psi1_plus = diag([&w, &one, &w2]).add(&n_plus);
        let psi1_minus = diag([&w2, &one, &w]).add(&n_minus);
        ModelMatrices {
            omega: w,
            omega_plus,
            omega_minus,
            b_plus,
            b_minus,
            psi1_plus,
            psi1_minus,
            beta: Float::with_val(bits, beta),
            tau: Float::with_val(bits, tau),
            prec,
        }
    }

    /// Diagonal exponent matrix `Theta(z; tau)` for the half plane of `z`.
    pub fn theta(&self, z: &Complex) -> Matrix3 {
        let bits = self.prec.bits();
        let upper = !z.imag().is_sign_negative();
        let t1 = theta_k_at(1, z, &self.tau, self.prec);
        let t2 = theta_k_at(2, z, &self.tau, self.prec);
        let t3 = theta_k_at(3, z, &self.tau, self.prec);
        let zero = Complex::new(bits);
        let d = if upper { [t1, t3, t2] } else { [t2, t3, t1] };
        Matrix3([
            [d[0].clone(), zero.clone(), zero.clone()],
            [zero.clone(), d[1].clone(), zero.clone()],
            [zero.clone(), zero.clone(), d[2].clone()],
        ])
    }

    /// Jump matrix on the ray at `angle` (one of `0, +-pi/4, +-3pi/4, pi`).
    pub fn jump_on_ray(&self, angle_index: RayAngle) -> Matrix3 {
        let bits = self.prec.bits();
        let one = Complex::with_val((bits, bits), (1, 0));
        let zero = Complex::new(bits);
        let pi = self.prec.pi();
        let e_plus = {
            let ang = pi.clone() * &self.beta;
            self.prec.cis(&ang)
        };
        let e_minus = {
            let ang = -(pi.clone() * &self.beta);
            self.prec.cis(&ang)
        };
        match angle_index {
            RayAngle::Zero => Matrix3([
                [zero.clone(), zero.clone(), one.clone()],
                [zero.clone(), one.clone(), zero.clone()],
                [-one.clone(), zero.clone(), zero.clone()],
            ]),
            RayAngle::QuarterPos | RayAngle::QuarterNeg => Matrix3([
                [one.clone(), zero.clone(), zero.clone()],
                [zero.clone(), one.clone(), zero.clone()],
                [one.clone(), zero.clone(), one.clone()],
            ]),
            RayAngle::ThreeQuarterPos => Matrix3([
                [one.clone(), zero.clone(), zero.clone()],
                [e_plus.clone(), one.clone(), zero.clone()],
                [zero.clone(), zero.clone(), one.clone()],
            ]),
            RayAngle::ThreeQuarterNeg => Matrix3([
                [one.clone(), zero.clone(), zero.clone()],
                [e_minus.clone(), one.clone(), zero.clone()],
                [zero.clone(), zero.clone(), one.clone()],
            ]),
            RayAngle::Pi => Matrix3([
                [zero.clone(), e_plus.clone(), zero.clone()],
                [-e_plus.clone(), zero.clone(), zero.clone()],
                [zero.clone(), zero.clone(), one.clone()],
            ]),
        }
    }
}

impl Matrix3 {
    fn add(&self, rhs: &Matrix3) -> Matrix3 {
        Matrix3::from_fn(|i, j| self.0[i][j].clone() + &rhs.0[i][j])
    }
}

/// The six jump rays of `Sigma_Psi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayAngle {
    Zero,
    QuarterPos,
    ThreeQuarterPos,
    Pi,
    ThreeQuarterNeg,
    QuarterNeg,
}

/// `theta_k(z; tau) = -(3/2) omega^k z^{2/3} - tau omega^{2k} z^{1/3}` with
/// principal fractional powers.
pub fn theta_k(k: usize, z: &Complex, tau: &Float, digits: u32) -> Result<Complex> {
    let prec = Prec::digits(digits);
    let bits = prec.bits();
    let z = Complex::with_val((bits, bits), z);
    if z.imag().is_zero() && !z.real().is_sign_positive() && !z.real().is_zero() {
        return Err(Error::BranchCut("theta_k has its cut on the negative axis".into()));
    }
    Ok(theta_k_at(k, &z, &Float::with_val(bits, tau), prec))
}

fn theta_k_at(k: usize, z: &Complex, tau: &Float, prec: Prec) -> Complex {
    let bits = prec.bits();
    let third = Float::with_val(bits, 1) / 3u32;
    let two_thirds = Float::with_val(bits, 2) / 3u32;
    let w = prec.omega();
    let mut wk = Complex::with_val((bits, bits), (1, 0));
    for _ in 0..(k % 3) {
        wk *= &w;
    }
    let w2k = wk.clone().square();
    let z23 = cpow(z, &two_thirds);
    let z13 = cpow(z, &third);
    -(wk * z23 * Float::with_val(bits, 1.5)) - w2k * z13 * tau
}

/// Sector-correct `Psi(z; tau)` for `z` off the six rays.
pub fn psi(z: &Complex, tau: &Float, beta: &Float, digits: u32) -> Result<Matrix3> {
    let arg = z.clone().arg().into_real_imag().0.to_f64();
    let sector = Sector::classify(arg, 1e-8)?;
    psi_in_sector(z, sector, tau, beta, digits)
}

/// `Psi` assembled with a specific sector's formula. Boundary values on the
/// negative axis take the one-sided `q` continuations.
pub fn psi_in_sector(
    z: &Complex,
    sector: Sector,
    tau: &Float,
    beta: &Float,
    digits: u32,
) -> Result<Matrix3> {
    let spec = ContourSpec::default();
    let on_cut = z.imag().is_zero() && z.real().is_sign_negative();
    let fetch = |j: usize| -> Result<[Complex; 4]> {
        if on_cut {
            let side = match sector {
                Sector::S1 | Sector::S2 | Sector::S3 => Side::Upper,
                _ => Side::Lower,
            };
            q_all_on_cut(j, z.real(), side, tau, beta, &spec, digits)
        } else {
            q_all(j, z, tau, beta, &spec, digits)
        }
    };
    let q1 = fetch(1)?;
    let q2 = fetch(2)?;
    let q3 = fetch(3)?;
    let bits = q1[0].prec().0;
    let prec_w = Prec::digits(digits);
    let _ = prec_w;
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let beta_w = Float::with_val(bits, beta);
    let e1 = {
        // e^{beta pi i}
        let ang = pi.clone() * &beta_w;
        Complex::with_val((bits, bits), (ang.clone().cos(), ang.sin()))
    };
    let e2 = e1.clone().square();

    // columns: [first | e^{beta pi i} q3 | last], rows are derivative orders
    let col = |row: usize, which: &str| -> Complex {
        match which {
            "eq1" => q1[row].clone() * &e2,
            "q2" => q2[row].clone(),
            "q3e" => q3[row].clone() * &e1,
            "eq3" => q3[row].clone() * &e2,
            "mq1" => -(q1[row].clone() * &e2),
            _ => unreachable!(),
        }
    };
    let m = match sector {
        Sector::S1 => Matrix3::from_fn(|r, c| match c {
            0 => col(r, "eq1"),
            1 => col(r, "q3e"),
            _ => col(r, "q2"),
        }),
        Sector::S2 => Matrix3::from_fn(|r, c| match c {
            0 => col(r, "eq1") + col(r, "q2"),
            1 => col(r, "q3e"),
            _ => col(r, "q2"),
        }),
        Sector::S3 => Matrix3::from_fn(|r, c| match c {
            0 => col(r, "eq1") + col(r, "q2") - col(r, "eq3"),
            1 => col(r, "q3e"),
            _ => col(r, "q2"),
        }),
        Sector::S4 => Matrix3::from_fn(|r, c| match c {
            0 => col(r, "q2"),
            1 => col(r, "q3e"),
            _ => col(r, "mq1"),
        }),
        Sector::S5 => Matrix3::from_fn(|r, c| match c {
            0 => col(r, "q2") + col(r, "eq1"),
            1 => col(r, "q3e"),
            _ => col(r, "mq1"),
        }),
        Sector::S6 => Matrix3::from_fn(|r, c| match c {
            0 => col(r, "eq1") + col(r, "q2") + q3[r].clone(),
            1 => col(r, "q3e"),
            _ => col(r, "mq1"),
        }),
    };
    Ok(m)
}

/// `det Psi(z)`, equal to a constant times `z^beta`.
pub fn psi_det(z: &Complex, tau: &Float, beta: &Float, digits: u32) -> Result<Complex> {
    Ok(psi(z, tau, beta, digits)?.det())
}

/// Remainder report of the large-`z` expansion.
#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    /// `|z|` ladder used.
    pub magnitudes: Vec<f64>,
    /// Max-norm remainders `||M(z)^{-1} Psi(z) - I||`.
    pub remainders: Vec<Float>,
    /// Fitted decay exponent of the remainder (positive for decay).
    pub fitted_decay: Float,
}

/// Compare `Psi` against the model expansion at `order` (0 or 1) along a
/// ladder of magnitudes in the direction `arg`.
pub fn psi_asymptotic_check(
    magnitudes: &[f64],
    arg: f64,
    tau: &Float,
    beta: &Float,
    order: usize,
    digits: u32,
) -> Result<AsymptoticReport> {
    assert!(order <= 1);
    let mut remainders = Vec::new();
    let mut pts = Vec::new();
    for &mag in magnitudes {
        let probe = Complex::with_val((53, 53), (mag * arg.cos(), mag * arg.sin()));
        let prec = guarded_prec(&probe, tau, digits);
        let bits = prec.bits();
        let z = {
            let angle = Float::with_val(bits, arg);
            let m = Float::with_val(bits, mag);
            let e = prec.cis(&angle);
            e * m
        };
        let mm = ModelMatrices::new(beta, tau, prec);
        let psi_val = psi(&z, tau, beta, prec.decimal_digits())?;

        let upper = !z.imag().is_sign_negative();
        let omega_pm = if upper { &mm.omega_plus } else { &mm.omega_minus };
        let b_pm = if upper { &mm.b_plus } else { &mm.b_minus };
        let psi1_pm = if upper { &mm.psi1_plus } else { &mm.psi1_minus };

        let third = Float::with_val(bits, 1) / 3u32;
        let z13 = cpow(&z, &third);
        let zb3 = cpow(&z, &(Float::with_val(bits, beta) / 3u32));
        let pref = {
            let pi = prec.pi();
            let tau_f = Float::with_val(bits, tau);
            let c = (pi * 2u32 / 3u32).sqrt() * (tau_f.square() / 6u32).exp();
            Complex::with_val((bits, bits), (&c, &Float::new(bits))) * zb3
        };
        let zero = Complex::new(bits);
        let diag = Matrix3([
            [z13.clone(), zero.clone(), zero.clone()],
            [zero.clone(), Complex::with_val((bits, bits), (1, 0)), zero.clone()],
            [zero.clone(), zero.clone(), 1u32 / z13.clone()],
        ]);
        let mut middle = Matrix3::identity(bits);
        if order == 1 {
            let corr = psi1_pm.scale(&(1u32 / z13.clone()));
            middle = middle.add(&corr);
        }
        let theta = mm.theta(&z);
        let e_theta = Matrix3::from_fn(|i, j| {
            if i == j {
                theta.0[i][i].clone().exp()
            } else {
                Complex::new(bits)
            }
        });
        let model = diag
            .mul(omega_pm)
            .mul(&middle)
            .mul(b_pm)
            .mul(&e_theta)
            .scale(&pref);
        let r = model.inverse().mul(&psi_val).sub(&Matrix3::identity(bits));
        let norm = r.max_norm();
        pts.push((Float::with_val(bits, mag), norm.clone()));
        remainders.push(norm);
    }
    // normalize the fit precision
    let bits = 128;
    let pts: Vec<(Float, Float)> = pts
        .iter()
        .map(|(x, y)| (Float::with_val(bits, x), Float::with_val(bits, y)))
        .collect();
    let slope = log_log_slope(&pts);
    Ok(AsymptoticReport {
        magnitudes: magnitudes.to_vec(),
        remainders,
        fitted_decay: -slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prec::cabs;

    #[test]
    fn theta_values_and_sum() {
        let p = Prec::digits(40);
        // k=3, z=1, tau=0 -> -3/2
        let v = theta_k(3, &p.c(1.0, 0.0), &p.zero(), 40).unwrap();
        assert!(cabs(&(v + p.f(1.5))) < p.eps());
        // k=3, z=1, tau=2 -> -3/2 - 2
        let v = theta_k(3, &p.c(1.0, 0.0), &p.f(2.0), 40).unwrap();
        assert!(cabs(&(v + p.f(3.5))) < p.eps());
        // theta_1 + theta_2 + theta_3 = 0 at tau = 0
        let z = p.c(0.3, 0.9);
        let mut sum = p.c_zero();
        for k in 1..=3 {
            sum += theta_k(k, &z, &p.zero(), 40).unwrap();
        }
        assert!(cabs(&sum) < p.eps() * 10u32);
    }

    #[test]
    fn sector_classification_rejects_rays() {
        assert!(Sector::classify(std::f64::consts::PI / 4.0, 1e-8).is_err());
        assert_eq!(Sector::classify(0.3, 1e-8).unwrap(), Sector::S1);
        assert_eq!(Sector::classify(-2.0, 1e-8).unwrap(), Sector::S5);
    }

    #[test]
    fn psi1_vanishes_at_tau_zero() {
        let p = Prec::digits(30);
        let mm = ModelMatrices::new(&p.f(0.5), &p.zero(), p);
        assert!(mm.psi1_plus.max_norm() < p.eps());
        assert!(mm.psi1_minus.max_norm() < p.eps());
    }

    #[test]
    fn omega_matrices_invertible() {
        let p = Prec::digits(30);
        let mm = ModelMatrices::new(&p.f(0.5), &p.f(0.7), p);
        let w3 = mm.omega.clone() * mm.omega.clone().square() - 1u32;
        assert!(cabs(&w3) < p.eps());
        let prod = mm.omega_plus.mul(&mm.omega_plus.inverse());
        assert!(prod.sub(&Matrix3::identity(p.bits())).max_norm() < p.f(1e-25));
    }

    #[test]
    fn jump_on_quarter_ray() {
        // Psi_+ = Psi_- J on arg z = pi/4 at |z| = 2
        let p = Prec::digits(30);
        let beta = p.f(0.5);
        let tau = p.f(0.7);
        let angle = std::f64::consts::FRAC_PI_4;
        let z = p.c(2.0 * angle.cos(), 2.0 * angle.sin());
        let plus = psi_in_sector(&z, Sector::S2, &tau, &beta, 30).unwrap();
        let minus = psi_in_sector(&z, Sector::S1, &tau, &beta, 30).unwrap();
        let mm = ModelMatrices::new(&beta, &tau, Prec::digits(30));
        let jump = mm.jump_on_ray(RayAngle::QuarterPos);
        let resid = minus.mul(&jump).sub(&plus).max_norm() / plus.max_norm();
        assert!(resid < p.f(1e-20), "residual {resid:e}");
    }

    #[test]
    fn jump_on_negative_axis() {
        // boundary values take opposite q-continuations; the figure matrix
        // encodes the monodromy
        let p = Prec::digits(30);
        let beta = p.f(0.5);
        let tau = p.f(0.7);
        let z = p.c(-2.0, 0.0);
        let plus = psi_in_sector(&z, Sector::S3, &tau, &beta, 30).unwrap();
        let minus = psi_in_sector(&z, Sector::S6, &tau, &beta, 30).unwrap();
        let mm = ModelMatrices::new(&beta, &tau, Prec::digits(30));
        let jump = mm.jump_on_ray(RayAngle::Pi);
        let resid = minus.mul(&jump).sub(&plus).max_norm() / plus.max_norm();
        assert!(resid < p.f(1e-18), "residual {resid:e}");
    }

    #[test]
    fn asymptotic_remainder_decays() {
        let p = Prec::digits(30);
        let rep = psi_asymptotic_check(&[16.0, 64.0], 1.1, &p.f(0.7), &p.f(0.5), 1, 30).unwrap();
        assert!(rep.remainders[1] < rep.remainders[0]);
        let slope = rep.fitted_decay.to_f64();
        assert!((slope - 2.0 / 3.0).abs() < 0.15, "slope {slope}");
    }
}
