//! Contour shapes and the shared panel integrator for the model functions.
//!
//! All q-contours are assembled from three kinds of pieces: a graded approach
//! into the essential singularity at `t = 0`, a circular arc at radius `r`,
//! and an outgoing tail ray whose direction adapts to `arg z` so the factor
//! `e^{zt}` decays. Tails and approaches extend panel by panel until their
//! contributions fall below tolerance.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::prec::{cabs, Prec};
use crate::quad::PathSeg;

/// Shape parameters of the model contours.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    /// Radius of the arc joining approach and tail (scaled down automatically
    /// for large `|z|`).
    pub inner_radius: f64,
    /// Half-offset of the two rays of the Hankel-type loop for `Q`.
    pub ray_offset: f64,
    /// Initial tail length before adaptive extension takes over.
    pub truncation: f64,
    /// Gauss-Legendre points per panel.
    pub panel_order: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec { inner_radius: 1.0, ray_offset: 1.0, truncation: 24.0, panel_order: 24 }
    }
}

/// Vector-valued integrand evaluated along path segments with adaptive
/// bisection; all components share panel layouts.
pub struct PathIntegrator<'a> {
    pub prec: Prec,
    pub rel_tol: Float,
    pub components: usize,
    pub f: &'a mut dyn FnMut(&Complex) -> Vec<Complex>,
    /// Running magnitude scale per component.
    scale: Vec<Float>,
}

impl<'a> PathIntegrator<'a> {
    pub fn new(
        prec: Prec,
        rel_tol: Float,
        components: usize,
        f: &'a mut dyn FnMut(&Complex) -> Vec<Complex>,
    ) -> Self {
        let scale = vec![Float::with_val(prec.bits(), 1e-300); components];
        PathIntegrator { prec, rel_tol, components, f, scale }
    }

    fn panel(&mut self, seg: &PathSeg, t0: &Float, t1: &Float, nodes: &[Float], weights: &[Float]) -> Vec<Complex> {
        let bits = self.prec.bits();
        let mid = (t0 + t1.clone()) / 2u32;
        let half = (t1 - t0.clone()) / 2u32;
        let mut acc = vec![Complex::new(bits); self.components];
        for (x, w) in nodes.iter().zip(weights) {
            let t = mid.clone() + half.clone() * x;
            let (z, dz) = seg_at(seg, &t, self.prec);
            let vals = (self.f)(&z);
            for (a, v) in acc.iter_mut().zip(vals) {
                *a += v * dz.clone() * w;
            }
        }
        for a in acc.iter_mut() {
            *a *= &half;
        }
        acc
    }

    /// Integrate one segment, adapting by bisection until coarse and split
    /// values agree per component.
    pub fn segment(&mut self, seg: &PathSeg) -> Result<Vec<Complex>> {
        let bits = self.prec.bits();
        let (nodes, weights) = crate::quad::legendre_reference(24, self.prec)?;
        let mut total = vec![Complex::new(bits); self.components];
        let coarse = self.panel(seg, &self.prec.zero(), &self.prec.f(1.0), &nodes, &weights);
        let mut stack = vec![(self.prec.zero(), self.prec.f(1.0), coarse, 0u32)];
        while let Some((t0, t1, coarse, depth)) = stack.pop() {
            let tm = (t0.clone() + &t1) / 2u32;
            let left = self.panel(seg, &t0, &tm, &nodes, &weights);
            let right = self.panel(seg, &tm, &t1, &nodes, &weights);
            let mut ok = true;
            for c in 0..self.components {
                let fine = left[c].clone() + &right[c];
                let err = cabs(&(fine.clone() - &coarse[c]));
                let local = self.scale[c].clone().max(&cabs(&fine));
                if err > self.rel_tol.clone() * &local {
                    ok = false;
                    break;
                }
            }
            if ok || depth >= 22 {
                if !ok && depth >= 22 {
                    return Err(Error::Accuracy {
                        requested: self.prec.decimal_digits(),
                        achieved: 0,
                        context: "model contour panel subdivision limit".into(),
                    });
                }
                for c in 0..self.components {
                    total[c] += left[c].clone() + &right[c];
                    self.scale[c] = self.scale[c].clone().max(&cabs(&total[c]));
                }
            } else {
                stack.push((t0, tm.clone(), left, depth + 1));
                stack.push((tm, t1, right, depth + 1));
            }
        }
        Ok(total)
    }

    /// Integrate a sequence of segments that extends until contributions stay
    /// quiet (two consecutive segments below tolerance). `make_seg(k)` yields
    /// the `k`-th piece; `None` stops extension early.
    pub fn extend_until_quiet(
        &mut self,
        mut make_seg: impl FnMut(usize) -> Option<PathSeg>,
        max_segments: usize,
        what: &str,
    ) -> Result<Vec<Complex>> {
        let bits = self.prec.bits();
        let mut total = vec![Complex::new(bits); self.components];
        let mut quiet = 0;
        for k in 0..max_segments {
            let seg = match make_seg(k) {
                Some(s) => s,
                None => return Ok(total),
            };
            let part = self.segment(&seg)?;
            let mut loud = false;
            for c in 0..self.components {
                let mag = cabs(&part[c]);
                if mag > self.rel_tol.clone() * &self.scale[c] {
                    loud = true;
                }
                total[c] += &part[c];
                self.scale[c] = self.scale[c].clone().max(&cabs(&total[c]));
            }
            if loud {
                quiet = 0;
            } else {
                quiet += 1;
                if quiet >= 2 {
                    return Ok(total);
                }
            }
        }
        Err(Error::Truncation(format!("{what}: tail kept contributing after {max_segments} panels")))
    }
}

pub fn seg_at(seg: &PathSeg, t: &Float, prec: Prec) -> (Complex, Complex) {
    match seg {
        PathSeg::Line { from, to } => {
            let d = to.clone() - from;
            (from.clone() + d.clone() * t, d)
        }
        PathSeg::Arc { radius, from_angle, to_angle } => {
            let span = to_angle.clone() - from_angle;
            let theta = from_angle.clone() + span.clone() * t;
            let e = prec.cis(&theta);
            let z = e.clone() * radius;
            let dz = z.clone() * prec.i() * span;
            (z, dz)
        }
    }
}

/// Ray segment from `r0 e^{i phi}` to `r1 e^{i phi}`.
pub fn ray(phi: &Float, r0: &Float, r1: &Float, prec: Prec) -> PathSeg {
    let bits = prec.bits();
    let dir = prec.cis(phi);
    let from = Complex::with_val((bits, bits), &dir) * r0;
    let to = dir * r1;
    PathSeg::Line { from, to }
}

/// Tail direction `pi - arg z`, clamped strictly inside `(0, 2 pi)` to stay
/// off the positive-axis branch cut. `psi_angle` is `arg z` in `[-pi, pi]`.
pub fn tail_angle(psi_angle: &Float, prec: Prec) -> Float {
    let bits = prec.bits();
    let phi = prec.pi() - psi_angle;
    let lo = Float::with_val(bits, 0.04);
    let hi = Float::with_val(bits, 2) * prec.pi() - &lo;
    phi.clamp(&lo, &hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_angle_clamps_near_cut() {
        let p = Prec::digits(30);
        let near_pi = p.pi() - p.f(1e-9);
        let phi = tail_angle(&near_pi, p);
        assert!(phi.to_f64() >= 0.039);
        let phi2 = tail_angle(&(-p.pi() + p.f(1e-9)), p);
        assert!(phi2.to_f64() <= 2.0 * std::f64::consts::PI - 0.039);
    }
}
