//! Quadrature rules: Gauss-Jacobi and Gauss-Legendre at arbitrary precision,
//! tanh-sinh for endpoint-singular integrands, and adaptive Gauss panels
//! along complex paths.
//!
//! Gauss nodes come from f64 Golub-Welsch seeds polished by Newton iteration
//! on the monic three-term recurrence at the target precision; weights use the
//! Christoffel identity `w_i = 1 / sum_k phat_k(x_i)^2`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};


use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::prec::{cabs, Prec};

/// Gauss rule absorbing `(x - lo)^{expo_lo} (hi - x)^{expo_hi}` on `(lo, hi)`.
///
/// `integrate(g)` approximates the integral of the kernel times the smooth
/// remainder `g`; exact whenever `g` is a polynomial of degree `<= 2m - 1`.
#[derive(Debug, Clone)]
pub struct JacobiRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
    pub expo_lo: Float,
    pub expo_hi: Float,
    pub order: usize,
}

impl JacobiRule {
    pub fn integrate(&self, mut g: impl FnMut(&Float) -> Float) -> Float {
        let mut acc = Float::new(self.nodes[0].prec());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w.clone() * g(x);
        }
        acc
    }

    pub fn integrate_cx(&self, mut g: impl FnMut(&Float) -> Complex) -> Complex {
        let mut acc = Complex::new(self.nodes[0].prec());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += g(x) * w;
        }
        acc
    }

    /// Total mass of the absorbed kernel.
    pub fn mass(&self) -> Float {
        let mut acc = Float::new(self.nodes[0].prec());
        for w in &self.weights {
            acc += w;
        }
        acc
    }
}

/// Gauss-Jacobi rule on `(lo, hi)` absorbing `(x-lo)^p (hi-x)^q`.
pub fn gauss_jacobi_rule(
    lo: &Float,
    hi: &Float,
    p: &Float,
    q: &Float,
    m: usize,
    prec: Prec,
) -> Result<JacobiRule> {
    if !(lo.clone() < hi.clone()) {
        return Err(Error::InvalidParams(format!("empty interval ({lo}, {hi})")));
    }
    if m == 0 {
        return Err(Error::InvalidParams("rule order must be at least 1".into()));
    }
    if !(p.clone() > -1) || !(q.clone() > -1) {
        return Err(Error::InvalidParams(format!("exponents ({p}, {q}) must exceed -1")));
    }
    // reference rule on (-1, 1) with weight (1-t)^A (1+t)^B, A = q (at hi), B = p (at lo)
    let (t, w) = jacobi_reference(m, q, p, prec)?;
    let half = (hi.clone() - lo) / 2u32;
    let mid = (lo.clone() + hi) / 2u32;
    // scale = ((hi-lo)/2)^(p+q+1)
    let total = p.clone() + q + 1u32;
    let scale = crate::prec::rpow(&half, &total);
    let nodes: Vec<Float> = t.iter().map(|ti| mid.clone() + half.clone() * ti).collect();
    let weights: Vec<Float> = w.iter().map(|wi| wi.clone() * &scale).collect();
    Ok(JacobiRule {
        nodes,
        weights,
        expo_lo: p.clone(),
        expo_hi: q.clone(),
        order: m,
    })
}

/// Gauss-Legendre rule on `(lo, hi)`.
pub fn gauss_legendre_rule(lo: &Float, hi: &Float, m: usize, prec: Prec) -> Result<JacobiRule> {
    gauss_jacobi_rule(lo, hi, &prec.zero(), &prec.zero(), m, prec)
}

/// Cached Gauss-Legendre nodes and weights on `(-1, 1)`.
pub fn legendre_reference(m: usize, prec: Prec) -> Result<(Vec<Float>, Vec<Float>)> {
    jacobi_reference(m, &prec.zero(), &prec.zero(), prec)
}

// ---- reference rules on (-1, 1) -------------------------------------------

type RuleData = Arc<(Vec<Float>, Vec<Float>)>;

fn rule_cache() -> &'static Mutex<HashMap<(usize, u32, String, String), RuleData>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32, String, String), RuleData>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes and weights on `(-1,1)` for the weight `(1-t)^A (1+t)^B`.
fn jacobi_reference(m: usize, a_ex: &Float, b_ex: &Float, prec: Prec) -> Result<(Vec<Float>, Vec<Float>)> {
    let key = (
        m,
        prec.bits(),
        a_ex.to_string_radix(16, None),
        b_ex.to_string_radix(16, None),
    );
    if let Some(hit) = rule_cache().lock().unwrap().get(&key) {
        return Ok((hit.0.clone(), hit.1.clone()));
    }

    let bits = prec.bits();
    let a_ex = Float::with_val(bits, a_ex);
    let b_ex = Float::with_val(bits, b_ex);

    // Monic recurrence p_{k+1} = (x - diag_k) p_k - sub_k p_{k-1}.
    let diag: Vec<Float> = (0..m).map(|k| jacobi_diag(k, &a_ex, &b_ex, bits)).collect();
    let sub: Vec<Float> = (1..m).map(|k| jacobi_sub(k, &a_ex, &b_ex, bits)).collect();

    // mu0 = 2^(A+B+1) Gamma(A+1) Gamma(B+1) / Gamma(A+B+2)
    let ab1 = a_ex.clone() + &b_ex + 1u32;
    let mu0 = crate::prec::rpow(&Float::with_val(bits, 2), &ab1)
        * (a_ex.clone() + 1u32).gamma()
        * (b_ex.clone() + 1u32).gamma()
        / ((a_ex.clone() + &b_ex) + 2u32).gamma();

    // f64 Golub-Welsch seeds
    let mut d64: Vec<f64> = diag.iter().map(|v| v.to_f64()).collect();
    let mut e64: Vec<f64> = sub.iter().map(|v| v.to_f64().sqrt()).collect();
    e64.push(0.0);
    symtri_eigenvalues(&mut d64, &mut e64);
    d64.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // Newton polish at full precision with bracket clamping
    let mut nodes = Vec::with_capacity(m);
    for i in 0..m {
        let lo_b = if i == 0 { -1.0 } else { 0.5 * (d64[i - 1] + d64[i]) };
        let hi_b = if i + 1 == m { 1.0 } else { 0.5 * (d64[i] + d64[i + 1]) };
        let x = polish_node(d64[i], lo_b, hi_b, &diag, &sub, prec)?;
        nodes.push(x);
    }
    for k in 1..m {
        if nodes[k] <= nodes[k - 1] {
            return Err(Error::Accuracy {
                requested: prec.decimal_digits(),
                achieved: 0,
                context: format!("gauss nodes {k} not strictly increasing"),
            });
        }
    }

    // Christoffel weights from the orthonormal recurrence
    let mut weights = Vec::with_capacity(m);
    let sqrt_sub: Vec<Float> = sub.iter().map(|b| b.clone().sqrt()).collect();
    let inv_sqrt_mu0 = 1u32 / mu0.clone().sqrt();
    for x in &nodes {
        let mut pm1 = Float::new(bits);
        let mut pk = inv_sqrt_mu0.clone();
        let mut sum = pk.clone().square();
        for k in 0..m - 1 {
            let next = ((x.clone() - &diag[k]) * &pk
                - if k == 0 { Float::new(bits) } else { sqrt_sub[k - 1].clone() * &pm1 })
                / &sqrt_sub[k];
            pm1 = pk;
            pk = next;
            sum += pk.clone().square();
        }
        weights.push(1u32 / sum);
    }

    let data: RuleData = Arc::new((nodes.clone(), weights.clone()));
    rule_cache().lock().unwrap().insert(key, data);
    Ok((nodes, weights))
}

fn jacobi_diag(k: usize, a: &Float, b: &Float, bits: u32) -> Float {
    let s = a.clone() + b;
    if k == 0 {
        if s.clone().abs() < Float::with_val(bits, 1e-300) && a == b {
            return Float::new(bits);
        }
        return (b - a.clone()) / (s.clone() + 2u32);
    }
    let k2 = Float::with_val(bits, 2 * k as u32);
    let denom = (k2.clone() + &s) * ((k2 + &s) + 2u32);
    (b.clone().square() - a.clone().square()) / denom
}

fn jacobi_sub(k: usize, a: &Float, b: &Float, bits: u32) -> Float {
    let s = a.clone() + b;
    let kf = Float::with_val(bits, k as u32);
    if k == 1 {
        let num = Float::with_val(bits, 4) * (a.clone() + 1u32) * (b.clone() + 1u32);
        let den = (s.clone() + 2u32).square() * (s.clone() + 3u32);
        return num / den;
    }
    let k2s = Float::with_val(bits, 2 * k as u32) + &s;
    let num = Float::with_val(bits, 4)
        * kf.clone()
        * (kf.clone() + a)
        * (kf.clone() + b)
        * (kf + &s);
    let den = k2s.clone().square() * (k2s.clone() + 1u32) * (k2s - 1u32);
    num / den
}

/// One monic-recurrence evaluation of `(p_m, p_m')` at `x`.
fn monic_eval(x: &Float, diag: &[Float], sub: &[Float]) -> (Float, Float) {
    let bits = x.prec();
    let m = diag.len();
    let mut p_prev = Float::with_val(bits, 1);
    let mut dp_prev = Float::new(bits);
    let mut p = x.clone() - &diag[0];
    let mut dp = Float::with_val(bits, 1);
    for k in 1..m {
        let xm = x.clone() - &diag[k];
        let p_next = xm.clone() * &p - sub[k - 1].clone() * &p_prev;
        let dp_next = p.clone() + xm * &dp - sub[k - 1].clone() * &dp_prev;
        p_prev = p;
        dp_prev = dp;
        p = p_next;
        dp = dp_next;
    }
    (p, dp)
}

fn polish_node(
    seed: f64,
    lo: f64,
    hi: f64,
    diag: &[Float],
    sub: &[Float],
    prec: Prec,
) -> Result<Float> {
    let bits = prec.bits();
    let mut x = Float::with_val(bits, seed);
    let lo = Float::with_val(bits, lo);
    let hi = Float::with_val(bits, hi);
    let tol = prec.eps();
    let mut last_step = Float::with_val(bits, 1);
    for _ in 0..80 {
        let (p, dp) = monic_eval(&x, diag, sub);
        if dp.is_zero() {
            break;
        }
        let mut step = p / dp;
        let next = x.clone() - &step;
        x = if next < lo || next > hi {
            // clamp into the bracket
            ((lo.clone() + &hi) / 2u32 + &x) / 2u32
        } else {
            next
        };
        step.abs_mut();
        if step < tol && last_step < tol {
            return Ok(x);
        }
        last_step = step;
    }
    Err(Error::Accuracy {
        requested: prec.decimal_digits(),
        achieved: 0,
        context: "gauss node Newton iteration stalled".into(),
    })
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
/// `d` is the diagonal; `e[0..n-1]` the subdiagonal (`e[n-1]` is scratch).
fn symtri_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0_f64;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }
}

// ---- tanh-sinh -------------------------------------------------------------

/// Tanh-sinh quadrature of `f` over `(lo, hi)`.
///
/// The integrand receives `(x, x - lo, hi - x)` with the endpoint distances
/// computed without cancellation, so integrable endpoint singularities
/// (powers above -1, logarithms) converge at the requested tolerance.
pub fn tanh_sinh_cx(
    mut f: impl FnMut(&Float, &Float, &Float) -> Complex,
    lo: &Float,
    hi: &Float,
    prec: Prec,
    rel_tol: &Float,
) -> Result<Complex> {
    let bits = prec.bits();
    let half = (hi.clone() - lo) / 2u32;
    let mid = (lo.clone() + hi) / 2u32;
    let pi_half = prec.pi() / 2u32;

    // cutoff where the weight factor drops below tolerance with margin
    let cut = rel_tol.clone() * Float::with_val(bits, 1e-6);

    let eval_at = |t: &Float, f: &mut dyn FnMut(&Float, &Float, &Float) -> Complex| -> (Complex, Float) {
        let u = (pi_half.clone() * t.clone().sinh()).exp();
        // xi = tanh((pi/2) sinh t) = (u - 1/u)/(u + 1/u); distances 1 -+ xi
        let inv_u = 1u32 / u.clone();
        let denom = u.clone() + &inv_u;
        let xi = (u.clone() - &inv_u) / &denom;
        let d_hi_ref = Float::with_val(bits, 2) * inv_u.clone() / &denom; // 1 - xi
        let d_lo_ref = Float::with_val(bits, 2) * u.clone() / &denom; // 1 + xi
        let w = pi_half.clone() * t.clone().cosh() * Float::with_val(bits, 4)
            / denom.clone().square();
        let x = mid.clone() + half.clone() * &xi;
        let d_lo = half.clone() * &d_lo_ref;
        let d_hi = half.clone() * &d_hi_ref;
        (f(&x, &d_lo, &d_hi), w)
    };

    // level 0: h = 1, extend tails until terms are negligible
    let mut h = Float::with_val(bits, 1);
    let mut sum = {
        let (v, w) = eval_at(&Float::new(bits), &mut f);
        v * w
    };
    let mut scale = cabs(&sum).max(&Float::with_val(bits, 1e-30));
    for sign in [1i32, -1] {
        let mut j = 1u64;
        let mut quiet = 0;
        loop {
            let t = Float::with_val(bits, sign as f64 * j as f64);
            let (v, w) = eval_at(&t, &mut f);
            let term = v * &w;
            let mag = cabs(&term);
            sum += term;
            scale = scale.max(&cabs(&sum));
            if mag < cut.clone() * &scale {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            j += 1;
            if j > 60 {
                break;
            }
        }
    }
    let mut best = sum.clone() * &half * &h;

    let max_level = 14;
    let mut achieved = Float::with_val(bits, 1);
    for _level in 1..=max_level {
        h /= 2u32;
        // add odd multiples of the new h
        for sign in [1i32, -1] {
            let mut k = 0u64;
            let mut quiet = 0;
            loop {
                let t = h.clone() * Float::with_val(bits, sign as f64 * (2 * k + 1) as f64);
                let (v, w) = eval_at(&t, &mut f);
                let term = v * &w;
                let mag = cabs(&term);
                sum += term;
                if mag < cut.clone() * &scale {
                    quiet += 1;
                    if quiet >= 2 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                k += 1;
                if k > 1u64 << 22 {
                    break;
                }
            }
        }
        let current = sum.clone() * &half * &h;
        let diff = cabs(&(current.clone() - &best));
        let denom = cabs(&current).max(&Float::with_val(bits, 1e-30));
        achieved = diff / denom;
        best = current;
        if achieved < *rel_tol {
            return Ok(best);
        }
    }
    Err(Error::Accuracy {
        requested: prec.decimal_digits(),
        achieved: (-achieved.to_f64().log10()).max(0.0) as u32,
        context: "tanh-sinh level limit reached".into(),
    })
}

/// Real-valued tanh-sinh wrapper.
pub fn tanh_sinh(
    mut f: impl FnMut(&Float, &Float, &Float) -> Float,
    lo: &Float,
    hi: &Float,
    prec: Prec,
    rel_tol: &Float,
) -> Result<Float> {
    let v = tanh_sinh_cx(
        |x, dl, dh| {
            let r = f(x, dl, dh);
            Complex::with_val(x.prec(), (r, Float::new(x.prec())))
        },
        lo,
        hi,
        prec,
        rel_tol,
    )?;
    Ok(v.real().clone())
}

// ---- complex-path panels ----------------------------------------------------

/// A straight or circular piece of an integration path.
#[derive(Debug, Clone)]
pub enum PathSeg {
    Line { from: Complex, to: Complex },
    /// Circular arc `radius * exp(i theta)`, `theta` from `from_angle`
    /// to `to_angle` (either direction).
    Arc { radius: Float, from_angle: Float, to_angle: Float },
}

impl PathSeg {
    /// Point and derivative of the parametrization at `t` in `[0, 1]`.
    fn at(&self, t: &Float, prec: Prec) -> (Complex, Complex) {
        match self {
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
}

/// Adaptive Gauss-Legendre integration of `f` along `segments`.
///
/// Each panel is accepted when an `m`-point and a split `2 x m`-point value
/// agree to `rel_tol` relative to the running magnitude.
pub fn integrate_path(
    f: &mut dyn FnMut(&Complex) -> Complex,
    segments: &[PathSeg],
    prec: Prec,
    rel_tol: &Float,
) -> Result<Complex> {
    let bits = prec.bits();
    let m = 24;
    let (gl_nodes, gl_weights) = jacobi_reference(m, &prec.zero(), &prec.zero(), prec)?;
    let mut total = Complex::new(bits);
    let mut scale = Float::with_val(bits, 1e-300);

    let panel = |seg: &PathSeg, t0: &Float, t1: &Float, f: &mut dyn FnMut(&Complex) -> Complex| -> Complex {
        let mid = (t0 + t1.clone()) / 2u32;
        let half = (t1 - t0.clone()) / 2u32;
        let mut acc = Complex::new(bits);
        for (x, w) in gl_nodes.iter().zip(&gl_weights) {
            let t = mid.clone() + half.clone() * x;
            let (z, dz) = seg.at(&t, prec);
            acc += f(&z) * dz * w;
        }
        acc * half
    };

    for seg in segments {
        // stack of (t0, t1, coarse_value, depth)
        let coarse = panel(seg, &prec.zero(), &prec.f(1.0), f);
        let mut stack = vec![(prec.zero(), prec.f(1.0), coarse, 0u32)];
        while let Some((t0, t1, coarse, depth)) = stack.pop() {
            let tm = (t0.clone() + &t1) / 2u32;
            let left = panel(seg, &t0, &tm, f);
            let right = panel(seg, &tm, &t1, f);
            let fine = left.clone() + &right;
            let err = cabs(&(fine.clone() - &coarse));
            let local_scale = scale.clone().max(&cabs(&fine));
            if err <= rel_tol.clone() * &local_scale || depth >= 24 {
                if depth >= 24 && err > rel_tol.clone() * &local_scale * 100u32 {
                    return Err(Error::Accuracy {
                        requested: prec.decimal_digits(),
                        achieved: 0,
                        context: "path panel subdivision limit".into(),
                    });
                }
                total += fine;
                scale = scale.max(&cabs(&total));
            } else {
                stack.push((t0, tm.clone(), left, depth + 1));
                stack.push((tm, t1, right, depth + 1));
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p50() -> Prec {
        Prec::digits(50)
    }

    #[test]
    fn midpoint_rule_for_m1() {
        let p = p50();
        let r = gauss_jacobi_rule(&p.zero(), &p.f(1.0), &p.zero(), &p.zero(), 1, p).unwrap();
        assert_eq!(r.nodes.len(), 1);
        assert!((r.nodes[0].clone() - p.f(0.5)).abs() < p.eps());
        assert!((r.weights[0].clone() - 1u32).abs() < p.eps());
    }

    #[test]
    fn exactness_cubic_m2() {
        // int_0^1 x^3 dx = 1/4 must be exact with m = 2
        let p = p50();
        let r = gauss_legendre_rule(&p.zero(), &p.f(1.0), 2, p).unwrap();
        let v = r.integrate(|x| x.clone().square() * x);
        assert!((v - p.f(0.25)).abs() < p.eps());
    }

    #[test]
    fn jacobi_mass_is_beta_function() {
        // int_0^1 x^(1/2) dx = B(3/2, 1) = 2/3
        let p = p50();
        let r = gauss_jacobi_rule(&p.zero(), &p.f(1.0), &p.f(0.5), &p.zero(), 1, p).unwrap();
        let v = r.mass();
        assert!((v - p.f(2.0) / 3u32).abs() < p.eps());
    }

    #[test]
    fn legendre_two_point_nodes() {
        let p = p50();
        let r = gauss_legendre_rule(&p.f(-1.0), &p.f(1.0), 2, p).unwrap();
        let target = 1u32 / p.f(3.0).sqrt();
        assert!((r.nodes[1].clone() - &target).abs() < p.eps());
        assert!((r.nodes[0].clone() + target).abs() < p.eps());
    }

    #[test]
    fn jacobi_exactness_high_order() {
        // int_0^1 x^(-1/2) (1-x)^(1/3) x^5 dx against Beta(11/2, 4/3)
        let p = Prec::digits(60);
        let third = p.f(1.0) / 3u32;
        let r = gauss_jacobi_rule(&p.zero(), &p.f(1.0), &p.f(-0.5), &third, 8, p).unwrap();
        let v = r.integrate(|x| {
            let x2 = x.clone().square();
            x2.clone().square() * x
        });
        let target = p.f(5.5).gamma() * (p.f(1.0) + p.f(1.0) / 3u32).gamma()
            / (p.f(5.5) + p.f(1.0) + p.f(1.0) / 3u32).gamma();
        assert!(((v.clone() - &target) / target).abs() < p.f(1e-50), "v = {v}");
    }

    #[test]
    fn tanh_sinh_log_singularity() {
        // int_0^1 ln(1/x) dx = 1
        let p = p50();
        let tol = p.f(1e-40);
        let v = tanh_sinh(|_x, d_lo, _d_hi| -(d_lo.clone().ln()), &p.zero(), &p.f(1.0), p, &tol).unwrap();
        assert!((v - 1u32).abs() < p.f(1e-38));
    }

    #[test]
    fn tanh_sinh_inverse_cube_root() {
        // int_0^1 x^(-2/3) dx = 3
        let p = p50();
        let tol = p.f(1e-40);
        let v = tanh_sinh(
            |_x, d_lo, _d_hi| crate::prec::rpow(d_lo, &(p.f(-2.0) / 3u32)),
            &p.zero(),
            &p.f(1.0),
            p,
            &tol,
        )
        .unwrap();
        assert!((v - 3u32).abs() < p.f(1e-38));
    }

    #[test]
    fn path_integral_closed_loop() {
        // int dz/z around |z| = 2 equals 2 pi i
        let p = p50();
        let tol = p.f(1e-40);
        let segs = [PathSeg::Arc {
            radius: p.f(2.0),
            from_angle: p.zero(),
            to_angle: p.f(2.0) * p.pi(),
        }];
        let v = integrate_path(&mut |z| 1u32 / z.clone(), &segs, p, &tol).unwrap();
        let target = p.i() * p.f(2.0) * p.pi();
        assert!(cabs(&(v - target)) < p.f(1e-38));
    }
}
