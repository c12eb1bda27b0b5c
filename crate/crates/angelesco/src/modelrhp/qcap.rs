//! The entire function `Q(z; tau)`: Hankel-loop contour integral, the
//! hypergeometric series at `tau = 0`, and the cross-check against
//! `i z^{-beta} (e^{2 beta pi i} q_1'' + q_2'')`.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::prec::{cabs, cpow, Prec};
use crate::quad::PathSeg;

use super::contour::{ContourSpec, PathIntegrator};
use super::qfun::q_all;

/// A computed `Q` value with its provenance.
#[derive(Debug, Clone)]
pub struct QValue {
    pub z: Complex,
    pub tau: Float,
    pub beta: Float,
    pub value: Complex,
    pub method: QMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMethod {
    Contour,
    Series,
}

/// `Q(z; tau) = i int_{Gamma_0} t^{-beta-1} exp(-z^2/(2t^2) + tau z / t + t) dt`.
///
/// `Gamma_0` comes in from minus infinity above the cut of the principal
/// branch of `t^{-beta-1}`, loops clockwise around the origin, and leaves
/// below the cut; the orientation and the prefactor `i` are calibrated so
/// that `Q(0) = 2 pi / Gamma(beta + 1)`.
pub fn q_eval(
    z: &Complex,
    tau: &Float,
    beta: &Float,
    spec: &ContourSpec,
    digits: u32,
) -> Result<QValue> {
    if !(beta.clone() > -1) {
        return Err(Error::InvalidParams(format!("beta = {beta} must exceed -1")));
    }
    let zmag = cabs(z).to_f64();
    let guard = (0.6 * zmag * zmag / (spec.ray_offset.max(1.0)) + 2.0 * zmag + 14.0)
        / std::f64::consts::LN_10;
    let prec = Prec::digits(digits + guard as u32 + 15);
    let bits = prec.bits();
    let z = Complex::with_val((bits, bits), z);
    let tau_f = Float::with_val(bits, tau);
    let beta_f = Float::with_val(bits, beta);

    let h = Float::with_val(bits, spec.ray_offset.max(1.0).max(0.6 * zmag));
    let power = -(beta_f.clone() + 1u32);
    let mut f = |t: &Complex| -> Vec<Complex> {
        let tp = cpow(t, &power);
        let inv_t = 1u32 / t.clone();
        let expo = -(z.clone() * &inv_t).square() / 2u32 + z.clone() * &inv_t * &tau_f + t;
        vec![tp * expo.exp()]
    };
    let rel_tol = prec.eps() * 100u32;
    let mut integ = PathIntegrator::new(prec, rel_tol, 1, &mut f);

    let mut total = Complex::new(bits);
    // upper ray: in from the far left at height +h, in geometric panels
    let l0 = Float::with_val(bits, spec.truncation.max(8.0));
    let seg_line = |x0: &Float, x1: &Float, y: &Float| PathSeg::Line {
        from: Complex::with_val((bits, bits), (x0, y)),
        to: Complex::with_val((bits, bits), (x1, y)),
    };
    let upper = integ.extend_until_quiet(
        |k| {
            let near = l0.clone() * Float::with_val(bits, 2.0f64.powi(k as i32));
            let far = near.clone() * 2u32;
            Some(seg_line(&-far, &-near, &h))
        },
        120,
        "Q upper tail",
    )?;
    total += upper[0].clone();
    // main upper stretch to x = 0
    let part = integ.segment(&seg_line(&-l0.clone(), &Float::new(bits), &h))?;
    total += part[0].clone();
    // clockwise right half-loop from i h to -i h
    let half_pi = prec.pi() / 2u32;
    let arc = PathSeg::Arc { radius: h.clone(), from_angle: half_pi.clone(), to_angle: -half_pi.clone() };
    let part = integ.segment(&arc)?;
    total += part[0].clone();
    // lower stretch back out
    let part = integ.segment(&seg_line(&Float::new(bits), &-l0.clone(), &-h.clone()))?;
    total += part[0].clone();
    let lower = integ.extend_until_quiet(
        |k| {
            let near = l0.clone() * Float::with_val(bits, 2.0f64.powi(k as i32));
            let far = near.clone() * 2u32;
            Some(seg_line(&-near, &-far, &-h.clone()))
        },
        120,
        "Q lower tail",
    )?;
    total += lower[0].clone();

    let value = total * prec.i();
    Ok(QValue { z, tau: tau_f, beta: beta_f, value, method: QMethod::Contour })
}

/// `Q(z; 0)` as `2 pi / Gamma(beta+1)` times the `0F2` series in `-z^2/8`.
pub fn q_series_tau0(z: &Complex, beta: &Float, nterms: usize, digits: u32) -> Result<QValue> {
    if !(beta.clone() > -1) {
        return Err(Error::InvalidParams(format!("beta = {beta} must exceed -1")));
    }
    let prec = Prec::digits(digits + 15);
    let bits = prec.bits();
    let z = Complex::with_val((bits, bits), z);
    let beta_f = Float::with_val(bits, beta);
    let x = -(z.clone().square()) / 8u32;
    let a1 = (beta_f.clone() + 1u32) / 2u32;
    let a2 = (beta_f.clone() + 2u32) / 2u32;
    let mut term = Complex::with_val((bits, bits), (1, 0));
    let mut sum = term.clone();
    let tol = prec.eps();
    let mut converged = false;
    for k in 0..nterms {
        let kf = Float::with_val(bits, k as u32);
        let denom = (a1.clone() + &kf) * (a2.clone() + &kf) * (kf + 1u32);
        term = term * &x / denom;
        sum += &term;
        // terms are eventually strictly decreasing; two tiny terms bound the tail
        if cabs(&term) < tol.clone() * cabs(&sum).max(&Float::with_val(bits, 1e-30)) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Truncation(format!(
            "0F2 series needs more than {nterms} terms at |z| = {}",
            cabs(&z)
        )));
    }
    let front = prec.pi() * 2u32 / (beta_f.clone() + 1u32).gamma();
    Ok(QValue {
        z,
        tau: Float::new(bits),
        beta: beta_f,
        value: sum * front,
        method: QMethod::Series,
    })
}

/// Residual of `Q(z) = i z^{-beta} (e^{2 beta pi i} q_1''(z) + q_2''(z))`
/// for `Re z > 0`, both sides computed independently.
pub fn q_relation_residual(z: &Complex, tau: &Float, beta: &Float, digits: u32) -> Result<Float> {
    if !z.real().is_sign_positive() {
        return Err(Error::Domain("the q-relation check needs Re z > 0".into()));
    }
    let spec = ContourSpec::default();
    let q1 = q_all(1, z, tau, beta, &spec, digits)?;
    let q2 = q_all(2, z, tau, beta, &spec, digits)?;
    let bits = q1[0].prec().0;
    let z_w = Complex::with_val((bits, bits), z);
    let beta_w = Float::with_val(bits, beta);
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let e2 = {
        let ang = pi * 2u32 * &beta_w;
        Complex::with_val((bits, bits), (ang.clone().cos(), ang.sin()))
    };
    let zmb = cpow(&z_w, &-beta_w);
    let i = Complex::with_val((bits, bits), (0, 1));
    let lhs = i * zmb * (q1[2].clone() * e2 + &q2[2]);
    let rhs = q_eval(z, tau, beta, &spec, digits)?.value;
    let rhs = Complex::with_val((bits, bits), rhs);
    Ok(crate::prec::rel_diff(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_at_origin() {
        // Q(0) = 2 pi / Gamma(beta + 1), any tau
        let p = Prec::digits(40);
        let spec = ContourSpec::default();
        for (beta, tau) in [(0.0, 0.0), (0.0, 1.3), (0.5, -0.4), (1.3, 0.7)] {
            let q = q_eval(&p.c_zero(), &p.f(tau), &p.f(beta), &spec, 40).unwrap();
            let bits = q.value.prec().0;
            let target = Float::with_val(bits, rug::float::Constant::Pi) * 2u32
                / (Float::with_val(bits, beta) + 1u32).gamma();
            let resid = cabs(&(q.value.clone() - target));
            assert!(resid < Float::with_val(bits, 1e-35), "beta {beta} tau {tau}: {resid:e}");
        }
    }

    #[test]
    fn series_matches_hand_partial_sums() {
        // beta = 0, z = 1: 2 pi (1 - 1/4 + 1/192 - ...) ~ 4.7449
        let p = Prec::digits(40);
        let q = q_series_tau0(&p.c(1.0, 0.0), &p.zero(), 100, 40).unwrap();
        let bits = q.value.prec().0;
        // partial sums as an independent check
        let s = 1.0 - 0.25 + 0.0052083333333333 - 2.8935185185e-5 + 6.3468379e-8;
        let rough = 2.0 * std::f64::consts::PI * s;
        assert!((q.value.real().to_f64() - rough).abs() < 1e-6);
        assert!((q.value.real().to_f64() - 4.744932504).abs() < 1e-8);
        assert!(q.value.imag().clone().abs() < Float::with_val(bits, 1e-30));
    }

    #[test]
    fn contour_matches_series_at_tau_zero() {
        let p = Prec::digits(40);
        let spec = ContourSpec::default();
        for (re, im, beta) in [(1.0, 0.0, 0.0), (3.0, 2.0, -0.5), (0.5, -4.0, 1.3)] {
            let z = p.c(re, im);
            let a = q_eval(&z, &p.zero(), &p.f(beta), &spec, 40).unwrap().value;
            let b = q_series_tau0(&z, &p.f(beta), 400, 40).unwrap().value;
            let bits = a.prec().0;
            let b = Complex::with_val((bits, bits), &b);
            let rel = crate::prec::rel_diff(&a, &b);
            assert!(rel < Float::with_val(bits, 1e-30), "z = {re}+{im}i beta {beta}: {rel:e}");
        }
    }

    #[test]
    fn contour_deformation_invariance() {
        let p = Prec::digits(40);
        let z = p.c(2.0, 1.0);
        let spec_a = ContourSpec::default();
        let spec_b = ContourSpec { ray_offset: 2.0, truncation: 15.0, ..ContourSpec::default() };
        let a = q_eval(&z, &p.f(1.0), &p.f(0.5), &spec_a, 40).unwrap().value;
        let b = q_eval(&z, &p.f(1.0), &p.f(0.5), &spec_b, 40).unwrap().value;
        let bits = a.prec().0;
        let b = Complex::with_val((bits, bits), &b);
        assert!(crate::prec::rel_diff(&a, &b) < Float::with_val(bits, 1e-32));
    }

    #[test]
    fn ode_residual_small() {
        // z^2 Q''' + 2(b+1) z Q'' + (b^2 + b - tau z) Q' + (z - tau b) Q = 0,
        // derivatives by central differences as an independent cross-check
        let p = Prec::digits(45);
        let spec = ContourSpec::default();
        let tau = p.f(1.0);
        let beta = p.f(0.5);
        let z0 = p.c(2.0, 1.0);
        let h = p.f(1e-9);
        let q = |dz_re: f64| {
            let z = z0.clone() + h.clone() * p.f(dz_re);
            q_eval(&z, &tau, &beta, &spec, 45).unwrap().value
        };
        let f0 = q(0.0);
        let bits = f0.prec().0;
        let conv = |v: &Complex| Complex::with_val((bits, bits), v);
        let f1 = conv(&q(1.0));
        let fm1 = conv(&q(-1.0));
        let f2 = conv(&q(2.0));
        let fm2 = conv(&q(-2.0));
        let h_w = Float::with_val(bits, &h);
        let d1 = (f1.clone() - &fm1) / (h_w.clone() * 2u32);
        let d2 = (f1.clone() - f0.clone() * 2u32 + &fm1) / h_w.clone().square();
        let d3 = (f2 - f1 * 2u32 + fm1 * 2u32 - fm2)
            / (h_w.clone().square() * h_w.clone() * 2u32);
        let z = Complex::with_val((bits, bits), &z0);
        let beta_w = Float::with_val(bits, 0.5);
        let tau_w = Float::with_val(bits, 1.0);
        let r = z.clone().square() * d3
            + z.clone() * d2 * (beta_w.clone() + 1u32) * 2u32
            + d1 * (beta_w.clone().square() + &beta_w - z.clone() * &tau_w)
            + f0.clone() * (z - tau_w * beta_w);
        let rel = cabs(&r) / cabs(&f0);
        // finite differences at step 1e-9 limit the check, not the contour
        assert!(rel < Float::with_val(bits, 1e-8), "ODE residual {rel:e}");
    }

    #[test]
    fn relation_to_q_functions() {
        let p = Prec::digits(36);
        for (z, tau, beta) in [
            (p.c(1.0, 0.0), 0.0, 0.0),
            (p.c(2.0, 0.0), 0.7, 0.5),
            (p.c(1.0, 0.3), -0.6, 1.3),
        ] {
            let r = q_relation_residual(&z, &p.f(tau), &p.f(beta), 36).unwrap();
            assert!(r.clone() < p.f(1e-28), "residual {r:e} at tau {tau} beta {beta}");
        }
    }

    #[test]
    fn frobenius_structure_at_origin() {
        // for beta in (0,1): z^beta (Q(z) - Q(0)) -> 0 along a ray
        let p = Prec::digits(35);
        let spec = ContourSpec::default();
        let beta = p.f(0.5);
        let tau = p.f(0.4);
        let q0 = q_eval(&p.c_zero(), &tau, &beta, &spec, 35).unwrap().value;
        let mut prev: Option<Float> = None;
        for mag in [1e-2, 1e-3, 1e-4] {
            let z = p.c(mag * 0.6, mag * 0.8);
            let q = q_eval(&z, &tau, &beta, &spec, 35).unwrap().value;
            let bits = q.prec().0;
            let q0w = Complex::with_val((bits, bits), &q0);
            let zw = Complex::with_val((bits, bits), &z);
            let v = cabs(&(cpow(&zw, &Float::with_val(bits, 0.5)) * (q - q0w)));
            if let Some(pv) = &prev {
                assert!(v < pv.clone(), "not decreasing: {v} vs {pv}");
            }
            prev = Some(Float::with_val(128, &v));
        }
        assert!(prev.unwrap() < 1e-4);
    }
}
