//! Logarithmic potentials, Lagrange constants, `g`-functions and the phase
//! functions `phi_j` of the modified equilibrium measures, plus the coupled
//! energy functional.
//!
//! Two independent routes are kept side by side wherever the theory offers
//! them: `phi_j` from the `g`-functions and Lagrange constants, and `phi_j`
//! as the path integral of `zeta_j - zeta_0`; the Lagrange constants from
//! potential quadrature, and their sum from the variational identities.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rug::{Complex, Float};

use crate::curve::{Curve, Side};
use crate::error::{Error, Result};
use crate::prec::{cabs, Prec};
use crate::quad::{gauss_legendre_rule, tanh_sinh, tanh_sinh_cx};
use crate::weights::Interval;

/// Equilibrium-measure evaluator for a fixed `a`: densities, potentials,
/// Lagrange constants, `g`- and `phi`-functions.
#[derive(Clone)]
pub struct Equilibrium {
    pub curve: Curve,
    prec: Prec,
    density_cache: Arc<Mutex<HashMap<(usize, String), Float>>>,
}

impl Equilibrium {
    pub fn new(a: &Float, digits: u32) -> Result<Self> {
        Ok(Equilibrium {
            curve: Curve::new(a, digits)?,
            prec: Prec::digits(digits),
            density_cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn a(&self) -> Float {
        Float::with_val(self.prec.bits(), &self.curve.data.a)
    }

    /// Memoized density evaluation (one-sided boundary route).
    pub fn density(&self, interval: Interval, x: &Float) -> Result<Float> {
        let key = (interval.index(), x.to_string_radix(16, None));
        if let Some(hit) = self.density_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let v = self.curve.density_upper(interval, x)?;
        self.density_cache.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Total mass `int_{Delta_j} psi_j dx`; 1/2 for the equilibrium measures.
    pub fn mass(&self, interval: Interval, rel_tol: &Float) -> Result<Float> {
        let bits = self.prec.bits();
        let a = self.a();
        let (lo, hi) = interval.endpoints(&a);
        tanh_sinh(
            |x, _dl, _dh| self.density(interval, x).unwrap_or_else(|_| Float::new(bits)),
            &lo,
            &hi,
            self.prec,
            rel_tol,
        )
    }

    /// Logarithmic potential `U^{mu_j}(x) = int log(1/|x-y|) psi_j(y) dy`
    /// at real `x`.
    pub fn potential(&self, interval: Interval, x: &Float, rel_tol: &Float) -> Result<Float> {
        let bits = self.prec.bits();
        let a = self.a();
        let (lo, hi) = interval.endpoints(&a);
        let x = Float::with_val(bits, x);
        if x > lo && x < hi {
            // split at the logarithmic singularity; the endpoint distances
            // feed the log without cancellation
            let left = tanh_sinh(
                |y, _dl, dh| {
                    let psi = self.density(interval, y).unwrap_or_else(|_| Float::new(bits));
                    -dh.clone().ln() * psi
                },
                &lo,
                &x,
                self.prec,
                rel_tol,
            )?;
            let right = tanh_sinh(
                |y, dl, _dh| {
                    let psi = self.density(interval, y).unwrap_or_else(|_| Float::new(bits));
                    -dl.clone().ln() * psi
                },
                &x,
                &hi,
                self.prec,
                rel_tol,
            )?;
            Ok(left + right)
        } else {
            tanh_sinh(
                |y, _dl, _dh| {
                    let psi = self.density(interval, y).unwrap_or_else(|_| Float::new(bits));
                    let d = (x.clone() - y).abs();
                    -d.ln() * psi
                },
                &lo,
                &hi,
                self.prec,
                rel_tol,
            )
        }
    }

    /// Variational combination `2 U^{mu_1} + U^{mu_2}` (on `[a,0]`) or
    /// `U^{mu_1} + 2 U^{mu_2}` (on `[0,1]`) at a single point.
    pub fn variational_value(&self, interval: Interval, x: &Float, rel_tol: &Float) -> Result<Float> {
        let u1 = self.potential(Interval::Left, x, rel_tol)?;
        let u2 = self.potential(Interval::Right, x, rel_tol)?;
        Ok(match interval {
            Interval::Left => u1 * 2u32 + u2,
            Interval::Right => u1 + u2 * 2u32,
        })
    }

    /// Lagrange constants read off the variational conditions at `npts`
    /// interior points per interval. Returns `(l1, l2, max deviation)`.
    pub fn lagrange_constants(&self, npts: usize, rel_tol: &Float) -> Result<(Float, Float, Float)> {
        let bits = self.prec.bits();
        let a = self.a();
        let mut ls = [Float::new(bits), Float::new(bits)];
        let mut max_dev = Float::new(bits);
        for (slot, interval) in [(0usize, Interval::Left), (1, Interval::Right)] {
            let (lo, hi) = interval.endpoints(&a);
            let mut values = Vec::with_capacity(npts);
            for i in 0..npts {
                // interior points away from the endpoints
                let frac = Float::with_val(bits, (i as f64 + 0.7) / (npts as f64 + 0.4));
                let x = lo.clone() + (hi.clone() - &lo) * frac;
                values.push(self.variational_value(interval, &x, rel_tol)?);
            }
            let mut mean = Float::new(bits);
            for v in &values {
                mean += v;
            }
            mean /= Float::with_val(bits, npts as u32);
            for v in &values {
                let dev = (v.clone() - &mean).abs();
                max_dev = max_dev.max(&dev);
            }
            ls[slot] = mean;
        }
        let [l1, l2] = ls;
        Ok((l1, l2, max_dev))
    }

    /// `g_j(z) = int log(z - s) psi_j(s) ds` with the main branch of the
    /// logarithm.
    pub fn g(&self, interval: Interval, z: &Complex, rel_tol: &Float) -> Result<Complex> {
        let bits = self.prec.bits();
        let a = self.a();
        let (lo, hi) = interval.endpoints(&a);
        let z = Complex::with_val((bits, bits), z);
        if z.imag().is_zero() && *z.real() <= hi {
            return Err(Error::BranchCut(format!(
                "g_{} has a cut along (-inf, {hi}]",
                interval.index()
            )));
        }
        tanh_sinh_cx(
            |s, _dl, _dh| {
                let psi = self.density(interval, s).unwrap_or_else(|_| Float::new(bits));
                let diff = z.clone() - s;
                diff.ln() * psi
            },
            &lo,
            &hi,
            self.prec,
            rel_tol,
        )
    }

    /// `phi_j` assembled from the `g`-functions and Lagrange constants.
    pub fn phi_from_g(
        &self,
        interval: Interval,
        z: &Complex,
        l1: &Float,
        l2: &Float,
        rel_tol: &Float,
    ) -> Result<Complex> {
        let bits = self.prec.bits();
        let g1 = self.g(Interval::Left, z, rel_tol)?;
        let g2 = self.g(Interval::Right, z, rel_tol)?;
        let pi = self.prec.pi();
        let upper = *z.imag() > 0;
        let half_pi_i = Complex::with_val((bits, bits), (Float::new(bits), pi.clone() / 2u32));
        let pi_i = Complex::with_val((bits, bits), (Float::new(bits), pi));
        Ok(match interval {
            Interval::Left => {
                let c = if upper { half_pi_i } else { -half_pi_i };
                -(g1 * 2u32) - g2 - l1 + c
            }
            Interval::Right => {
                let c = if upper { pi_i } else { -pi_i };
                -(g2 * 2u32) - g1 - l2 + c
            }
        })
    }

    /// `phi_j(z) = int_0^z (zeta_j - zeta_0) ds` along the ray from 0 to `z`,
    /// with the substitution `s = z t^3` absorbing the cube-root blowup at
    /// the origin. `phi_j(0) = 0`.
    pub fn phi_integral(&self, interval: Interval, z: &Complex) -> Result<Complex> {
        let bits = self.prec.bits();
        let j = interval.index();
        let z = Complex::with_val((bits, bits), z);
        if z.is_zero() {
            return Ok(Complex::new(bits));
        }
        // Gauss-Legendre in t on [0,1]; the integrand is analytic there after
        // the substitution. The order doubles until two values agree.
        let mut m = 48;
        let mut prev: Option<Complex> = None;
        for _ in 0..6 {
            let rule = gauss_legendre_rule(&self.prec.zero(), &self.prec.f(1.0), m, self.prec)?;
            // track zeta along the ray from z toward 0, visiting nodes in
            // descending order
            let mut order: Vec<usize> = (0..rule.nodes.len()).collect();
            order.sort_by(|&i, &k| rule.nodes[k].partial_cmp(&rule.nodes[i]).unwrap());
            let mut vals: Vec<Option<Complex>> = vec![None; rule.nodes.len()];
            let mut cur = self.curve.branches(&z)?;
            for &i in &order {
                let t = &rule.nodes[i];
                let t3 = t.clone().square() * t;
                let s = z.clone() * &t3;
                cur = self.curve.track_from(&cur, &s)?;
                let diff = cur.zeta[j].clone() - &cur.zeta[0];
                // ds = 3 z t^2 dt
                let jac = z.clone() * t.clone().square() * 3u32;
                vals[i] = Some(diff * jac);
            }
            let mut acc = Complex::new(bits);
            for (i, w) in rule.weights.iter().enumerate() {
                acc += vals[i].clone().unwrap() * w;
            }
            if let Some(pv) = &prev {
                let scale = cabs(&acc).max(&Float::with_val(bits, 1e-30));
                if cabs(&(acc.clone() - pv)) < scale * Float::with_val(bits, 1e-25) {
                    return Ok(acc);
                }
            }
            prev = Some(acc);
            m *= 2;
        }
        Err(Error::Accuracy {
            requested: self.prec.decimal_digits(),
            achieved: 0,
            context: format!("phi_{j} path integral did not converge"),
        })
    }

    /// One-sided boundary value of `phi_j` on its interval, computed as the
    /// path integral to `x +- i delta` with `delta` tiny relative to `x`.
    pub fn phi_side(&self, interval: Interval, x: &Float, side: Side) -> Result<Complex> {
        let bits = self.prec.bits();
        let sign = match side {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        };
        let delta = x.clone().abs() * Float::with_val(bits, 1e-18 * sign);
        let z = Complex::with_val((bits, bits), (x.clone(), delta));
        self.phi_integral(interval, &z)
    }

    /// Partial mass `int_0^x psi_2` or `int_x^0 psi_1` used by the boundary
    /// value identities.
    pub fn partial_mass(&self, interval: Interval, x: &Float, rel_tol: &Float) -> Result<Float> {
        let bits = self.prec.bits();
        match interval {
            Interval::Right => tanh_sinh(
                |y, _dl, _dh| self.density(interval, y).unwrap_or_else(|_| Float::new(bits)),
                &Float::new(bits),
                x,
                self.prec,
                rel_tol,
            ),
            Interval::Left => tanh_sinh(
                |y, _dl, _dh| self.density(interval, y).unwrap_or_else(|_| Float::new(bits)),
                x,
                &Float::new(bits),
                self.prec,
                rel_tol,
            ),
        }
    }
}

/// A (signed) measure on an interval given by a density callable; the energy
/// quadrature samples it lazily with memoization.
#[derive(Clone)]
pub struct MeasureDensity {
    pub interval: Interval,
    pub lo: Float,
    pub hi: Float,
    eval: Arc<dyn Fn(&Float) -> Float + Send + Sync>,
    cache: Arc<Mutex<HashMap<String, Float>>>,
}

impl MeasureDensity {
    pub fn new(
        interval: Interval,
        lo: Float,
        hi: Float,
        eval: impl Fn(&Float) -> Float + Send + Sync + 'static,
    ) -> Self {
        MeasureDensity {
            interval,
            lo,
            hi,
            eval: Arc::new(eval),
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// Equilibrium density `psi_j` as a measure.
    pub fn equilibrium(eq: &Equilibrium, interval: Interval) -> Self {
        let bits = eq.prec().bits();
        let a = eq.a();
        let (lo, hi) = interval.endpoints(&a);
        let eq = eq.clone();
        MeasureDensity::new(interval, lo, hi, move |x| {
            eq.density(interval, x).unwrap_or_else(|_| Float::new(bits))
        })
    }

    pub fn density(&self, x: &Float) -> Float {
        let key = x.to_string_radix(16, None);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let v = (self.eval)(x);
        self.cache.lock().unwrap().insert(key, v.clone());
        v
    }

    /// `U^{nu}(x)` by split tanh-sinh around the logarithmic singularity.
    pub fn potential_at(&self, x: &Float, prec: Prec, rel_tol: &Float) -> Result<Float> {
        if *x > self.lo && *x < self.hi {
            let left = tanh_sinh(
                |y, _dl, dh| -dh.clone().ln() * self.density(y),
                &self.lo,
                x,
                prec,
                rel_tol,
            )?;
            let right = tanh_sinh(
                |y, dl, _dh| -dl.clone().ln() * self.density(y),
                x,
                &self.hi,
                prec,
                rel_tol,
            )?;
            Ok(left + right)
        } else {
            tanh_sinh(
                |y, _dl, _dh| {
                    let d = (x.clone() - y).abs();
                    -d.ln() * self.density(y)
                },
                &self.lo,
                &self.hi,
                prec,
                rel_tol,
            )
        }
    }

    /// Total mass of the measure.
    pub fn mass(&self, prec: Prec, rel_tol: &Float) -> Result<Float> {
        tanh_sinh(|y, _dl, _dh| self.density(y), &self.lo, &self.hi, prec, rel_tol)
    }
}

/// Mutual logarithmic energy `I(nu, lambda) = int U^{lambda} d nu`.
pub fn mutual_energy(
    nu: &MeasureDensity,
    lambda: &MeasureDensity,
    prec: Prec,
    rel_tol: &Float,
) -> Result<Float> {
    let inner_tol = rel_tol.clone() / 30u32;
    tanh_sinh(
        |x, _dl, _dh| {
            let u = lambda
                .potential_at(x, prec, &inner_tol)
                .unwrap_or_else(|_| Float::new(prec.bits()));
            u * nu.density(x)
        },
        &nu.lo,
        &nu.hi,
        prec,
        rel_tol,
    )
}

/// Logarithmic self-energy `I(nu)`.
pub fn self_energy(nu: &MeasureDensity, prec: Prec, rel_tol: &Float) -> Result<Float> {
    mutual_energy(nu, nu, prec, rel_tol)
}

/// The coupled Angelesco energy `I(mu_1) + I(mu_1, mu_2) + I(mu_2)`.
pub fn energy(mu1: &MeasureDensity, mu2: &MeasureDensity, prec: Prec, rel_tol: &Float) -> Result<Float> {
    let e1 = self_energy(mu1, prec, rel_tol)?;
    let e12 = mutual_energy(mu1, mu2, prec, rel_tol)?;
    let e2 = self_energy(mu2, prec, rel_tol)?;
    Ok(e1 + e12 + e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses_are_half() {
        let p = Prec::digits(40);
        for a in [-1.0, -1.3] {
            let eq = Equilibrium::new(&p.f(a), 40).unwrap();
            let tol = p.f(1e-12);
            for interval in [Interval::Left, Interval::Right] {
                let m = eq.mass(interval, &tol).unwrap();
                assert!(
                    (m.clone() - p.f(0.5)).abs() < p.f(1e-11),
                    "a = {a}, interval {interval:?}: mass = {m}"
                );
            }
        }
    }

    #[test]
    fn lagrange_constants_symmetric_case() {
        let p = Prec::digits(40);
        let eq = Equilibrium::new(&p.f(-1.0), 40).unwrap();
        let tol = p.f(1e-12);
        let (l1, l2, dev) = eq.lagrange_constants(5, &tol).unwrap();
        // reflection symmetry forces l1 = l2
        assert!((l1.clone() - &l2).abs() < p.f(1e-10), "l1 = {l1}, l2 = {l2}");
        assert!(dev < p.f(1e-10), "deviation = {dev}");
        // l1 + l2 = (3/2) ln(27/4)
        let target = p.f(1.5) * (p.f(27.0) / 4u32).ln();
        assert!((l1 + l2 - target).abs() < p.f(1e-9), "sum differs from (3/2) ln(27/4)");
    }

    #[test]
    fn phi_routes_agree() {
        let p = Prec::digits(40);
        let eq = Equilibrium::new(&p.f(-1.0), 40).unwrap();
        let tol = p.f(1e-12);
        let (l1, l2, _) = eq.lagrange_constants(4, &tol).unwrap();
        let z = p.c(0.3, 0.4);
        for interval in [Interval::Left, Interval::Right] {
            let via_g = eq.phi_from_g(interval, &z, &l1, &l2, &tol).unwrap();
            let via_path = eq.phi_integral(interval, &z).unwrap();
            assert!(
                cabs(&(via_g.clone() - &via_path)) < p.f(1e-9),
                "interval {interval:?}: {via_g} vs {via_path}"
            );
        }
    }

    #[test]
    fn phi2_boundary_purely_imaginary() {
        let p = Prec::digits(40);
        let eq = Equilibrium::new(&p.f(-1.0), 40).unwrap();
        let tol = p.f(1e-12);
        let x = p.f(0.4);
        let plus = eq.phi_side(Interval::Right, &x, Side::Upper).unwrap();
        let minus = eq.phi_side(Interval::Right, &x, Side::Lower).unwrap();
        // real parts vanish, imaginary parts are +-2 pi int_0^x psi_2
        assert!(plus.real().clone().abs() < p.f(1e-10), "re phi2+ = {}", plus.real());
        assert!(minus.real().clone().abs() < p.f(1e-10));
        let mass = eq.partial_mass(Interval::Right, &x, &tol).unwrap();
        let target = p.pi() * 2u32 * mass;
        assert!((plus.imag().clone() - &target).abs() < p.f(1e-9));
        assert!((minus.imag().clone() + target).abs() < p.f(1e-9));
    }

    #[test]
    fn uniform_measure_energy_closed_form() {
        // I(uniform mass 1/2 on [0,1]) = (1/4) * 3/2
        let p = Prec::digits(35);
        let nu = MeasureDensity::new(Interval::Right, p.zero(), p.f(1.0), |x| {
            Float::with_val(x.prec(), 0.5)
        });
        let tol = p.f(1e-10);
        let v = self_energy(&nu, p, &tol).unwrap();
        let target = p.f(0.375);
        assert!((v.clone() - target).abs() < p.f(1e-8), "I = {v}");
    }

    #[test]
    fn minimum_energy_matches_lagrange_route() {
        // E(mu_1, mu_2) = (l1 + l2)/4 at the minimizer
        let p = Prec::digits(35);
        let eq = Equilibrium::new(&p.f(-1.0), 35).unwrap();
        let mu1 = MeasureDensity::equilibrium(&eq, Interval::Left);
        let mu2 = MeasureDensity::equilibrium(&eq, Interval::Right);
        let tol = p.f(1e-6);
        let e = energy(&mu1, &mu2, p, &tol).unwrap();
        let target = p.f(1.5) * (p.f(27.0) / 4u32).ln() / 4u32;
        assert!((e.clone() - &target).abs() < p.f(1e-5), "E = {e} vs {target}");
    }

    #[test]
    fn perturbation_raises_energy_quadratically() {
        // mass-preserving bump eta on [0,1]: dE = t first + t^2 I(eta) with
        // vanishing first-order term; I(eta) > 0 for nonzero mass-zero eta
        let p = Prec::digits(35);
        let eq = Equilibrium::new(&p.f(-1.0), 35).unwrap();
        let tol = p.f(1e-8);

        // eta(x) = bump(x) - c, with int bump = c so that int eta = 0
        let bump = |x: &Float| -> Float {
            let u = x.clone() * 2u32 - 1u32;
            (Float::with_val(x.prec(), 1) - u.square()).square()
        };
        // int_0^1 (1 - (2x-1)^2)^2 dx = 8/15
        let c = p.f(8.0) / 15u32;
        let eta =
            MeasureDensity::new(Interval::Right, p.zero(), p.f(1.0), move |x| bump(x) - c.clone());
        let zero_mass = eta.mass(p, &tol).unwrap();
        assert!(zero_mass.abs() < p.f(1e-9));

        // first-order term: int (U^{mu1} + 2 U^{mu2}) d eta = l2 int d eta = 0
        let mu1 = MeasureDensity::equilibrium(&eq, Interval::Left);
        let mu2 = MeasureDensity::equilibrium(&eq, Interval::Right);
        let first = {
            let a = mutual_energy(&eta, &mu1, p, &tol).unwrap();
            let b = mutual_energy(&eta, &mu2, p, &tol).unwrap();
            a + b * 2u32
        };
        assert!(first.clone().abs() < p.f(1e-6), "first-order term = {first}");

        let i_eta = self_energy(&eta, p, &tol).unwrap();
        assert!(i_eta > 0u32, "I(eta) = {i_eta}");

        // dE(t) = t * first + t^2 I(eta) > 0 and O(t^2)
        let t = p.f(1e-2);
        let de = t.clone() * &first + t.clone().square() * &i_eta;
        assert!(de > 0u32);
        let ratio = de / (t.square() * i_eta);
        assert!((ratio - 1u32).abs() < p.f(1e-2));
    }
}
