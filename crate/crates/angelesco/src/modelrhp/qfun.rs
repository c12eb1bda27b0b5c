//! The contour-integral solutions `q_1, q_2, q_3` and their derivatives.
//!
//! `q_j(z) = int_{Gamma_j} t^{-beta-3} exp(tau/t - 1/(2t^2) + z t) dt` with
//! the branch `arg t in (0, 2 pi)` cut along the positive real axis.
//! `Gamma_1` leaves the origin just below the cut and tails off to the left
//! below the axis, `Gamma_2` comes in from the left above the axis and ends
//! at the origin just above the cut, and `Gamma_3` runs from the origin out
//! along the negative axis. Derivatives multiply the integrand by powers of
//! `t`, so all orders share one panel layout. Analytic continuation beyond
//! `Re z > 0` rotates the tails to the direction `pi - arg z`.

use rug::{Complex, Float};

use crate::curve::Side;
use crate::error::Result;
use crate::prec::{cabs, Prec};
use crate::quad::PathSeg;

use super::contour::{ray, tail_angle, ContourSpec, PathIntegrator};

/// Angle between the origin-approach legs and the cut.
const APPROACH_ANGLE: f64 = std::f64::consts::PI / 16.0;

/// Working precision with cancellation guard for the oscillatory contour
/// sums at a given point.
pub(crate) fn guarded_prec(z: &Complex, tau: &Float, digits: u32) -> Prec {
    let zmag = cabs(z).to_f64().max(1e-300);
    let guard = (3.2 * zmag.powf(2.0 / 3.0) + 2.2 * tau.to_f64().abs() * zmag.powf(1.0 / 3.0)
        + 12.0)
        / std::f64::consts::LN_10
        + 25.0;
    Prec::digits(digits + guard as u32)
}

/// `t^w` on the branch `arg t in (0, 2 pi)`.
fn tpow_upper(t: &Complex, w: &Float, prec: Prec) -> Complex {
    let bits = prec.bits();
    let two_pi = prec.pi() * 2u32;
    let mut arg = t.clone().arg().into_real_imag().0;
    if arg <= 0 {
        arg += &two_pi;
    }
    let ln_mag = cabs(t).ln();
    let exponent = Complex::with_val((bits, bits), (ln_mag * w, arg * w));
    exponent.exp()
}

/// All of `q_j, q_j', q_j'', q_j'''` in one pass.
///
/// For `z` off the negative real axis the continuation is determined by
/// `arg z`; use [`q_all_on_cut`] for boundary values at `z < 0`.
pub fn q_all(
    j: usize,
    z: &Complex,
    tau: &Float,
    beta: &Float,
    spec: &ContourSpec,
    digits: u32,
) -> Result<[Complex; 4]> {
    let prec = guarded_prec(z, tau, digits);
    let bits = prec.bits();
    let z = Complex::with_val((bits, bits), z);
    let psi_angle = z.clone().arg().into_real_imag().0;
    q_all_at_angle(j, &z, &psi_angle, tau, beta, spec, prec)
}

/// Boundary values `q_{j,+-}(x)` for `x < 0`, approached from the chosen side.
pub fn q_all_on_cut(
    j: usize,
    x: &Float,
    side: Side,
    tau: &Float,
    beta: &Float,
    spec: &ContourSpec,
    digits: u32,
) -> Result<[Complex; 4]> {
    let probe = Complex::with_val((53, 53), (x, &Float::new(53)));
    let prec = guarded_prec(&probe, tau, digits);
    let bits = prec.bits();
    let z = Complex::with_val((bits, bits), (x, &Float::new(bits)));
    let psi_angle = match side {
        Side::Upper => prec.pi(),
        Side::Lower => -prec.pi(),
    };
    q_all_at_angle(j, &z, &psi_angle, tau, beta, spec, prec)
}

fn q_all_at_angle(
    j: usize,
    z: &Complex,
    psi_angle: &Float,
    tau: &Float,
    beta: &Float,
    spec: &ContourSpec,
    prec: Prec,
) -> Result<[Complex; 4]> {
    let bits = prec.bits();
    let tau = Float::with_val(bits, tau);
    let beta = Float::with_val(bits, beta);
    let zmag = cabs(z).to_f64();

    // arc radius tracks the saddle scale |z|^(-1/3)
    let r = Float::with_val(
        bits,
        (spec.inner_radius * zmag.max(1.0).powf(-1.0 / 3.0)).max(0.05),
    );
    let phi_tail = tail_angle(psi_angle, prec);
    let theta0 = Float::with_val(bits, APPROACH_ANGLE);
    let two_pi = prec.pi() * 2u32;

    let power = -(beta.clone() + 3u32);
    let mut f = |t: &Complex| -> Vec<Complex> {
        let tp = tpow_upper(t, &power, prec);
        let inv_t = 1u32 / t.clone();
        let expo = inv_t.clone() * &tau - inv_t.clone().square() / 2u32 + z.clone() * t;
        let base = tp * expo.exp();
        let d1 = base.clone() * t;
        let d2 = d1.clone() * t;
        let d3 = d2.clone() * t;
        vec![base, d1, d2, d3]
    };
    let rel_tol = prec.eps() * 100u32;
    let mut integ = PathIntegrator::new(prec, rel_tol, 4, &mut f);

    // approach legs: geometric panels between r/2^{k+1} and r/2^k, scanned
    // outermost-first so the quiet cutoff fires once the essential
    // singularity has killed the integrand; each panel keeps the contour's
    // own orientation
    let mk_approach_in = |k: usize, angle: &Float, r: &Float, prec: Prec| -> PathSeg {
        // inward: from r/2^k down to r/2^{k+1}
        let hi_r = r.clone() * Float::with_val(prec.bits(), 0.5f64.powi(k as i32));
        let lo_r = hi_r.clone() / 2u32;
        ray(angle, &hi_r, &lo_r, prec)
    };
    let mk_approach_out = |k: usize, angle: &Float, r: &Float, prec: Prec| -> PathSeg {
        let lo_r = r.clone() * Float::with_val(prec.bits(), 0.5f64.powi(k as i32 + 1));
        let hi_r = lo_r.clone() * 2u32;
        ray(angle, &lo_r, &hi_r, prec)
    };
    // tail panels double outward from r; dyadic edges are exact so panels
    // neither overlap nor leave gaps
    let tail_edges = |k: usize, r: &Float, prec: Prec| -> (Float, Float) {
        let lo = r.clone() * Float::with_val(prec.bits(), 2.0f64.powi(k as i32));
        let hi = lo.clone() * 2u32;
        (lo, hi)
    };

    let arc = |from: &Float, to: &Float, r: &Float| PathSeg::Arc {
        radius: r.clone(),
        from_angle: from.clone(),
        to_angle: to.clone(),
    };

    let mut total = vec![Complex::new(bits); 4];
    let add = |total: &mut Vec<Complex>, part: Vec<Complex>| {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    };

    match j {
        1 => {
            // out of the origin just below the cut, arc down/around to the
            // tail direction, then out to infinity
            let angle0 = two_pi.clone() - &theta0;
            let out = integ.extend_until_quiet(
                |k| Some(mk_approach_out(k, &angle0, &r, prec)),
                64,
                "q1 approach",
            )?;
            add(&mut total, out);
            add(&mut total, integ.segment(&arc(&angle0, &phi_tail, &r))?);
            let tail = integ.extend_until_quiet(
                |k| {
                    let (lo, hi) = tail_edges(k, &r, prec);
                    Some(ray(&phi_tail, &lo, &hi, prec))
                },
                200,
                "q1 tail",
            )?;
            add(&mut total, tail);
        }
        2 => {
            // in from infinity, arc to just above the cut, then into the origin
            let angle0 = theta0.clone();
            let tail = integ.extend_until_quiet(
                |k| {
                    let (lo, hi) = tail_edges(k, &r, prec);
                    Some(ray(&phi_tail, &hi, &lo, prec))
                },
                200,
                "q2 tail",
            )?;
            // tail panels were integrated outermost-first with reversed
            // orientation inside each panel, which is what we want; the
            // ordering of panel sums does not matter
            add(&mut total, tail);
            add(&mut total, integ.segment(&arc(&phi_tail, &angle0, &r))?);
            let inward = integ.extend_until_quiet(
                |k| Some(mk_approach_in(k, &angle0, &r, prec)),
                64,
                "q2 approach",
            )?;
            add(&mut total, inward);
        }
        3 => {
            // out of the origin along the negative axis, rotate the tail
            let angle0 = prec.pi();
            let out = integ.extend_until_quiet(
                |k| Some(mk_approach_out(k, &angle0, &r, prec)),
                64,
                "q3 approach",
            )?;
            add(&mut total, out);
            add(&mut total, integ.segment(&arc(&angle0, &phi_tail, &r))?);
            let tail = integ.extend_until_quiet(
                |k| {
                    let (lo, hi) = tail_edges(k, &r, prec);
                    Some(ray(&phi_tail, &lo, &hi, prec))
                },
                200,
                "q3 tail",
            )?;
            add(&mut total, tail);
        }
        _ => {
            return Err(crate::error::Error::InvalidParams(format!(
                "contour index {j} not in {{1,2,3}}"
            )))
        }
    }
    Ok([total[0].clone(), total[1].clone(), total[2].clone(), total[3].clone()])
}

/// Single value `q_j^{(deriv)}(z)`.
pub fn q_j(
    j: usize,
    z: &Complex,
    tau: &Float,
    beta: &Float,
    deriv: usize,
    spec: &ContourSpec,
    digits: u32,
) -> Result<Complex> {
    assert!(deriv <= 2, "derivative order up to 2");
    let all = q_all(j, z, tau, beta, spec, digits)?;
    Ok(all[deriv].clone())
}
