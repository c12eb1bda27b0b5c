//! The cubic spectral curve behind the modified equilibrium problem: the
//! constants `z*(a)`, `x0(a)`, `b(a)`, the labeled branch solutions
//! `zeta_0, zeta_1, zeta_2`, boundary values and densities, and the rational
//! uniformization map.
//!
//! Branch labels are fixed at a real base point `R = 10` (where `zeta_0` is
//! the root near `1/R` and `zeta_1` the larger of the other two) and carried
//! to any target by adaptive nearest-root path tracking.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::fitting::richardson_zero;
use crate::prec::{cabs, Prec};
use crate::weights::Interval;

/// Base point on the positive real axis where branch labels are assigned.
const BASE_POINT: f64 = 10.0;

/// Spectral-curve constants at a given `a < 0`.
#[derive(Debug, Clone)]
pub struct CurveData {
    pub a: Float,
    /// Middle root of `64 z^3 - 48(a+1) z^2 - (15a^2 - 78a + 15) z - (a+1)^3`.
    pub zstar: Float,
    /// Middle root of the discriminant double-zero cubic.
    pub x0: Float,
    /// Soft-edge endpoint `(a+1)^3 / (9 (a^2 - a + 1))` of the non-modified problem.
    pub b: Float,
    pub digits: u32,
}

/// The three branch values at a point, labeled by sheet.
#[derive(Debug, Clone)]
pub struct BranchValues {
    pub z: Complex,
    /// `[zeta_0, zeta_1, zeta_2]`.
    pub zeta: [Complex; 3],
}

impl BranchValues {
    /// `zeta_0 + zeta_1 + zeta_2`, identically zero on the curve.
    pub fn sum(&self) -> Complex {
        self.zeta[0].clone() + &self.zeta[1] + &self.zeta[2]
    }

    pub fn product(&self) -> Complex {
        self.zeta[0].clone() * &self.zeta[1] * &self.zeta[2]
    }
}

/// One sampled density value.
#[derive(Debug, Clone)]
pub struct DensitySample {
    pub x: Float,
    pub psi: Float,
    pub interval: Interval,
}

/// Solve for the curve constants; errors unless both cubics have three real
/// roots.
pub fn curve_constants(a: &Float, digits: u32) -> Result<CurveData> {
    let prec = Prec::digits(digits);
    let bits = prec.bits();
    let a = Float::with_val(bits, a);
    if !(a.clone() < 0) {
        return Err(Error::InvalidParams(format!("a = {a} must be negative")));
    }
    let one = Float::with_val(bits, 1);
    let a1 = a.clone() + &one;

    // b = (a+1)^3 / (9 (a^2 - a + 1))
    let b = a1.clone().square() * &a1 / (Float::with_val(bits, 9) * (a.clone().square() - &a + &one));

    let (zstar, x0);
    if a == -1 {
        // both cubics lose their constant and quadratic terms; the middle root is 0
        zstar = Float::new(bits);
        x0 = Float::new(bits);
    } else {
        // 64 z^3 - 48(a+1) z^2 - (15a^2 - 78a + 15) z - (a+1)^3 = 0
        let c3 = Float::with_val(bits, 64);
        let c2 = Float::with_val(bits, -48) * &a1;
        let c1 = -(Float::with_val(bits, 15) * a.clone().square() - Float::with_val(bits, 78) * &a
            + Float::with_val(bits, 15));
        let c0 = -a1.clone().square() * &a1;
        let roots = cubic_real_roots(&c3, &c2, &c1, &c0, prec)?;
        zstar = roots[1].clone();

        // (27a^2 - 46a + 27) x^3 - 3(a+1)(9a^2 - 14a + 9) x^2
        //   + 3a(11a^2 - 14a + 11) x - a(a+1)^3 = 0
        let d3 = Float::with_val(bits, 27) * a.clone().square() - Float::with_val(bits, 46) * &a
            + Float::with_val(bits, 27);
        let d2 = Float::with_val(bits, -3)
            * a1.clone()
            * (Float::with_val(bits, 9) * a.clone().square() - Float::with_val(bits, 14) * &a
                + Float::with_val(bits, 9));
        let d1 = Float::with_val(bits, 3)
            * a.clone()
            * (Float::with_val(bits, 11) * a.clone().square() - Float::with_val(bits, 14) * &a
                + Float::with_val(bits, 11));
        let d0 = -a.clone() * a1.clone().square() * &a1;
        let roots = cubic_real_roots(&d3, &d2, &d1, &d0, prec)?;
        x0 = roots[1].clone();
    }
    Ok(CurveData { a, zstar, x0, b, digits })
}

/// All three real roots of a real cubic, ascending. Errors when the
/// discriminant says a conjugate pair exists.
pub fn cubic_real_roots(c3: &Float, c2: &Float, c1: &Float, c0: &Float, prec: Prec) -> Result<[Float; 3]> {
    let bits = prec.bits();
    // depressed form t^3 + p t + q with z = t - c2/(3 c3)
    let b = c2.clone() / c3;
    let c = c1.clone() / c3;
    let d = c0.clone() / c3;
    let shift = b.clone() / 3u32;
    let p = c.clone() - b.clone().square() / 3u32;
    let q = Float::with_val(bits, 2) * b.clone().square() * &b / 27u32 - b.clone() * &c / 3u32 + &d;

    // three real roots need 4 p^3 + 27 q^2 < 0
    let disc = Float::with_val(bits, 4) * p.clone().square() * &p
        + Float::with_val(bits, 27) * q.clone().square();
    if !(disc < 0) {
        return Err(Error::CurveDegenerate(format!(
            "cubic has a complex pair (4p^3 + 27q^2 = {disc})"
        )));
    }
    // t_k = 2 sqrt(-p/3) cos(theta/3 - 2 pi k / 3), cos theta = 3q/(2p) sqrt(-3/p)
    let mp3 = (-p.clone() / 3u32).sqrt();
    let cos_arg = Float::with_val(bits, 3) * &q / (Float::with_val(bits, 2) * &p)
        * (Float::with_val(bits, -3) / &p).sqrt();
    let clamped = cos_arg.clamp(&Float::with_val(bits, -1), &Float::with_val(bits, 1));
    let theta = clamped.acos();
    let two_pi_3 = Float::with_val(bits, 2) * prec.pi() / 3u32;
    let mut roots: Vec<Float> = (0..3)
        .map(|k| {
            let angle = theta.clone() / 3u32 - two_pi_3.clone() * Float::with_val(bits, k as u32);
            Float::with_val(bits, 2) * &mp3 * angle.cos() - &shift
        })
        .collect();
    // Newton polish on the original cubic
    for r in &mut roots {
        for _ in 0..4 {
            let f = ((c3.clone() * &*r + c2) * &*r + c1) * &*r + c0;
            let df = (Float::with_val(bits, 3) * c3 * &*r + Float::with_val(bits, 2) * c2) * &*r + c1;
            if df.is_zero() {
                break;
            }
            *r -= f / df;
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok([roots[0].clone(), roots[1].clone(), roots[2].clone()])
}

/// Roots of the depressed complex cubic `w^3 + p w + q = 0` (unlabeled).
pub fn cubic_complex_roots(p: &Complex, q: &Complex, prec: Prec) -> [Complex; 3] {
    let bits = prec.bits();
    let half = Float::with_val(bits, 0.5);
    let disc = (q.clone() * &half).square() + pow3(&(p.clone() / 3u32));
    let sq = disc.sqrt();
    // pick the branch that avoids cancellation in -q/2 +- sq
    let cand1 = -q.clone() * &half + &sq;
    let cand2 = -q.clone() * &half - &sq;
    let u3 = if cabs(&cand1) >= cabs(&cand2) { cand1 } else { cand2 };
    let mut roots: [Complex; 3];
    if cabs(&u3) < Float::with_val(bits, 1e-280) {
        // p ~ 0 and q ~ 0: cube roots of -q
        let r = cbrt_principal(&-q.clone());
        let w = prec.omega();
        roots = [r.clone(), r.clone() * &w, r * w.clone() * &w];
    } else {
        let u = cbrt_principal(&u3);
        let w = prec.omega();
        let mut out = Vec::with_capacity(3);
        let mut uk = u;
        for _ in 0..3 {
            let root = uk.clone() - p.clone() / (uk.clone() * 3u32);
            out.push(root.clone());
            uk *= &w;
        }
        roots = [out[0].clone(), out[1].clone(), out[2].clone()];
    }
    // Newton polish
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = (r.clone().square() + p) * &*r + q;
            let df = r.clone().square() * 3u32 + p;
            if cabs(&df).is_zero() {
                break;
            }
            *r -= f / df;
        }
    }
    roots
}

fn pow3(z: &Complex) -> Complex {
    z.clone().square() * z
}

fn cbrt_principal(z: &Complex) -> Complex {
    let bits = z.prec().0;
    if z.is_zero() {
        return Complex::new(z.prec());
    }
    let third = Float::with_val(bits, 1) / 3u32;
    crate::prec::cpow(z, &third)
}

/// Cheap complex magnitude for matching decisions.
fn l1(z: &Complex) -> Float {
    z.real().clone().abs() + z.imag().clone().abs()
}

/// Greedy label matching: pick the permutation of `new` roots closest to the
/// `old` labels, rejecting the step when root motion competes with root
/// separation (halving rule: separation must exceed 10x the motion).
/// Returns the matched roots with `(max motion, min separation)`.
fn match_roots(
    old: &[Complex; 3],
    new: &[Complex; 3],
    bits: u32,
) -> Option<([Complex; 3], Float, Float)> {
    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best: Option<([usize; 3], Float)> = None;
    for perm in PERMS {
        let mut total = Float::new(bits);
        for (i, &pi) in perm.iter().enumerate() {
            total += l1(&(new[pi].clone() - &old[i]));
        }
        match &best {
            Some((_, t)) if *t <= total => {}
            _ => best = Some((perm, total)),
        }
    }
    let (perm, _) = best.unwrap();
    let matched = [
        new[perm[0]].clone(),
        new[perm[1]].clone(),
        new[perm[2]].clone(),
    ];
    // largest single-label motion vs smallest pairwise separation after the step
    let mut max_move = Float::new(bits);
    for i in 0..3 {
        max_move = max_move.max(&l1(&(matched[i].clone() - &old[i])));
    }
    let mut min_sep = Float::with_val(bits, f64::MAX);
    for i in 0..3 {
        for j in i + 1..3 {
            min_sep = min_sep.min(&l1(&(matched[i].clone() - &matched[j])));
        }
    }
    if min_sep > max_move.clone() * 10u32 {
        Some((matched, max_move, min_sep))
    } else {
        None
    }
}

/// Which side of a real cut a boundary value is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// Labeled branch evaluation on the curve for a fixed `a`.
#[derive(Debug, Clone)]
pub struct Curve {
    pub data: CurveData,
    prec: Prec,
    anchor_upper: std::sync::Arc<std::sync::Mutex<Option<BranchValues>>>,
    anchor_lower: std::sync::Arc<std::sync::Mutex<Option<BranchValues>>>,
}

impl Curve {
    pub fn new(a: &Float, digits: u32) -> Result<Self> {
        let data = curve_constants(a, digits)?;
        Ok(Curve {
            data,
            prec: Prec::digits(digits),
            anchor_upper: Default::default(),
            anchor_lower: Default::default(),
        })
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Coefficients `(p(z), q(z))` of `zeta^3 + p zeta + q = 0`.
    pub fn cubic_pq(&self, z: &Complex) -> (Complex, Complex) {
        let bits = self.prec.bits();
        let a = Float::with_val(bits, &self.data.a);
        let zstar = Float::with_val(bits, &self.data.zstar);
        let z = Complex::with_val((bits, bits), z);
        let za = z.clone() - &a;
        let z1 = z.clone() - 1u32;
        let d1 = z.clone() * &za * &z1 * 4u32;
        let num_p = z.clone() * 3u32 - (zstar.clone() * 2u32 + 1u32 + &a);
        let p = -num_p / &d1;
        let num_q = z.clone() - &zstar;
        let q = -num_q / (d1 * &z);
        (p, q)
    }

    /// Derivatives `(p'(z), q'(z))` of the cubic coefficients.
    fn cubic_pq_prime(&self, z: &Complex) -> (Complex, Complex) {
        let bits = self.prec.bits();
        let a = Float::with_val(bits, &self.data.a);
        let zstar = Float::with_val(bits, &self.data.zstar);
        let z = Complex::with_val((bits, bits), z);
        let za = z.clone() - &a;
        let z1 = z.clone() - 1u32;

        // D1 = 4 z (z-a)(z-1), D1' = 4 [ (z-a)(z-1) + z(z-1) + z(z-a) ]
        let d1 = z.clone() * &za * &z1 * 4u32;
        let d1p = (za.clone() * &z1 + z.clone() * &z1 + z.clone() * &za) * 4u32;
        let n1 = z.clone() * 3u32 - (zstar.clone() * 2u32 + 1u32 + &a);
        let n1p = Complex::with_val((bits, bits), (3, 0));
        let p_prime = -(n1p * &d1 - n1 * &d1p) / d1.clone().square();

        // D2 = z D1, D2' = D1 + z D1'
        let d2 = z.clone() * &d1;
        let d2p = d1.clone() + z.clone() * &d1p;
        let n2 = z.clone() - &zstar;
        let n2p = Complex::with_val((bits, bits), (1, 0));
        let q_prime = -(n2p * &d2 - n2 * &d2p) / d2.clone().square();
        (p_prime, q_prime)
    }

    /// Unlabeled roots of the branch cubic at `z`.
    pub fn roots_at(&self, z: &Complex) -> [Complex; 3] {
        let (p, q) = self.cubic_pq(z);
        cubic_complex_roots(&p, &q, self.prec)
    }

    /// Newton refinement of the three roots from nearby guesses. Returns
    /// `None` when an iteration stalls, leaving the cold solver to take over.
    fn roots_warm(&self, z: &Complex, guess: &[Complex; 3]) -> Option<[Complex; 3]> {
        let bits = self.prec.bits();
        let (p, q) = self.cubic_pq(z);
        let tol = self.prec.eps();
        let mut out = guess.clone();
        for r in out.iter_mut() {
            let mut converged = false;
            for _ in 0..8 {
                let r2 = r.clone().square();
                let f = (r2.clone() + &p) * &*r + &q;
                let df = r2 * 3u32 + &p;
                if cabs(&df) < Float::with_val(bits, 1e-250) {
                    return None;
                }
                let step = f / df;
                let small = cabs(&step) < tol.clone() * (cabs(r) + 1u32);
                *r -= step;
                if small {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return None;
            }
        }
        Some(out)
    }

    /// Labeled roots at the base point `R = 10`.
    fn base_values(&self) -> BranchValues {
        let bits = self.prec.bits();
        let z = Complex::with_val((bits, bits), (BASE_POINT, 0.0));
        let roots = self.roots_at(&z);
        let inv_r = Float::with_val(bits, 1.0 / BASE_POINT);
        // zeta_0 is the root nearest 1/R
        let mut i0 = 0;
        let mut best = Float::with_val(bits, f64::MAX);
        for (i, r) in roots.iter().enumerate() {
            let d = cabs(&(r.clone() - &inv_r));
            if d < best {
                best = d;
                i0 = i;
            }
        }
        let rest: Vec<&Complex> = (0..3).filter(|&i| i != i0).map(|i| &roots[i]).collect();
        // zeta_1 has the larger value of the remaining real pair: its 1/z^2
        // coefficient is minus the first moment of psi_1, positive on (a, 0)
        let (r1, r2) = if rest[0].real() >= rest[1].real() {
            (rest[0].clone(), rest[1].clone())
        } else {
            (rest[1].clone(), rest[0].clone())
        };
        BranchValues { z, zeta: [roots[i0].clone(), r1, r2] }
    }

    /// Track labeled roots along a straight segment from `from.z` to `to`.
    fn track_segment(&self, from: &BranchValues, to: &Complex) -> Result<BranchValues> {
        let bits = self.prec.bits();
        let mut cur = from.clone();
        let total = Complex::with_val((bits, bits), to) - &cur.z;
        if cabs(&total).is_zero() {
            return Ok(cur);
        }
        let one = Float::with_val(bits, 1);
        let mut t = Float::new(bits);
        let mut step = one.clone();
        let min_step = Float::with_val(bits, 1e-30);
        let tiny = Float::with_val(bits, 1e-60);
        while t < one {
            let t_next = (t.clone() + &step).min(&one);
            let z_next = from.z.clone() + total.clone() * &t_next;
            // warm Newton from the previous labels, cold Cardano as fallback
            let roots = match self.roots_warm(&z_next, &cur.zeta) {
                Some(r) => r,
                None => self.roots_at(&z_next),
            };
            match match_roots(&cur.zeta, &roots, bits) {
                Some((matched, max_move, min_sep)) => {
                    let this_step = t_next.clone() - &t;
                    cur = BranchValues { z: z_next, zeta: matched };
                    t = t_next;
                    // size the next step so the expected motion stays near
                    // min_sep / 20, using the observed motion rate
                    let rate = max_move.max(&tiny) / &this_step;
                    let predicted = min_sep / (rate * 20u32);
                    step = predicted.min(&one).max(&min_step);
                }
                None => {
                    step /= 4u32;
                    if step < min_step {
                        return Err(Error::Tracking(format!(
                            "step underflow near z = {z_next} (roots too close to separate)"
                        )));
                    }
                }
            }
        }
        Ok(cur)
    }

    /// Labeled branch values at `z`, off the cut `[a, 1]`.
    pub fn branches(&self, z: &Complex) -> Result<BranchValues> {
        let bits = self.prec.bits();
        let z = Complex::with_val((bits, bits), z);
        let a = Float::with_val(bits, &self.data.a);
        if z.imag().is_zero() {
            let x = z.real();
            if *x >= a && *x <= 1 {
                return Err(Error::BranchCut(format!(
                    "z = {x} lies on the cut [a, 1]; use branch_boundary"
                )));
            }
        }
        let mut cur = self.base_values();
        for wp in self.waypoints(&z) {
            cur = self.track_segment(&cur, &wp)?;
        }
        Ok(cur)
    }

    fn waypoints(&self, z: &Complex) -> Vec<Complex> {
        let bits = self.prec.bits();
        let mk = |re: &Float, im: &Float| Complex::with_val((bits, bits), (re, im));
        let h = Float::with_val(bits, 0.75);
        let base_re = Float::with_val(bits, BASE_POINT);
        if z.imag().is_zero() {
            if *z.real() > 1 {
                return vec![z.clone()];
            }
            // route over the upper half plane, then come straight down
            return vec![mk(&base_re, &h), mk(z.real(), &h), z.clone()];
        }
        let s = if *z.imag() > 0 { h.clone() } else { -h.clone() };
        if z.imag().clone().abs() >= h {
            vec![mk(&base_re, z.imag()), z.clone()]
        } else {
            vec![mk(&base_re, &s), mk(z.real(), &s), z.clone()]
        }
    }

    /// Cached labeled values at the anchor `0.25 +- 0.75 i`, from which all
    /// boundary evaluations branch off.
    fn anchor(&self, side: Side) -> Result<BranchValues> {
        let slot = match side {
            Side::Upper => &self.anchor_upper,
            Side::Lower => &self.anchor_lower,
        };
        if let Some(hit) = slot.lock().unwrap().as_ref() {
            return Ok(hit.clone());
        }
        let bits = self.prec.bits();
        let sign = if side == Side::Upper { 1.0 } else { -1.0 };
        let h = Float::with_val(bits, 0.75 * sign);
        let over_base =
            Complex::with_val((bits, bits), (Float::with_val(bits, BASE_POINT), h.clone()));
        let anchor = Complex::with_val((bits, bits), (Float::with_val(bits, 0.25), h));
        let mut cur = self.base_values();
        cur = self.track_segment(&cur, &over_base)?;
        cur = self.track_segment(&cur, &anchor)?;
        *slot.lock().unwrap() = Some(cur.clone());
        Ok(cur)
    }

    /// Labeled boundary values at `x + i eps` (Upper) or `x - i eps` (Lower).
    pub fn branch_boundary(&self, x: &Float, side: Side, eps: &Float) -> Result<BranchValues> {
        let bits = self.prec.bits();
        let sign = match side {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        };
        let h = Float::with_val(bits, 0.75 * sign);
        let over = Complex::with_val((bits, bits), (x.clone(), h));
        let target =
            Complex::with_val((bits, bits), (x.clone(), eps.clone() * Float::with_val(bits, sign)));
        let mut cur = self.anchor(side)?;
        cur = self.track_segment(&cur, &over)?;
        cur = self.track_segment(&cur, &target)?;
        Ok(cur)
    }

    /// Distance from `x` to the nearest branch point, capped at 1.
    fn branch_scale(&self, x: &Float) -> Float {
        let bits = self.prec.bits();
        let a = Float::with_val(bits, &self.data.a);
        let mut s = Float::with_val(bits, 1);
        for bp in [a, Float::new(bits), Float::with_val(bits, 1)] {
            let d = (x.clone() - bp).abs();
            s = s.min(&d);
        }
        s
    }

    /// Richardson-extrapolated one-sided boundary values `zeta_{j,side}(x)`.
    ///
    /// The ladder `eps in {1e-6, 1e-7, 1e-8}` is scaled by the distance to the
    /// nearest branch point so the extrapolation keeps relative accuracy near
    /// the endpoints.
    pub fn boundary_extrapolated(&self, x: &Float, side: Side) -> Result<[Complex; 3]> {
        let bits = self.prec.bits();
        let scale = self.branch_scale(x);
        let ladder = [1e-6, 1e-7, 1e-8];
        let mut samples: Vec<(Float, BranchValues)> = Vec::with_capacity(3);
        // one tracked descent, read out at each rung
        let mut cur: Option<BranchValues> = None;
        for base_eps in ladder {
            let eps = scale.clone() * Float::with_val(bits, base_eps);
            let bv = match &cur {
                None => self.branch_boundary(x, side, &eps)?,
                Some(prev) => {
                    let sign = if side == Side::Upper { 1.0 } else { -1.0 };
                    let target = Complex::with_val(
                        (bits, bits),
                        (x.clone(), eps.clone() * Float::with_val(bits, sign)),
                    );
                    self.track_segment(prev, &target)?
                }
            };
            cur = Some(bv.clone());
            samples.push((eps, bv));
        }
        let mut out = Vec::with_capacity(3);
        for j in 0..3 {
            let pts: Vec<(Float, Complex)> =
                samples.iter().map(|(e, bv)| (e.clone(), bv.zeta[j].clone())).collect();
            out.push(richardson_zero(&pts));
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }

    /// Equilibrium density `psi_j(x) = (zeta_{j,+} - zeta_{j,-})(x) / (2 pi i)`.
    pub fn density(&self, interval: Interval, x: &Float) -> Result<Float> {
        let bits = self.prec.bits();
        let a = Float::with_val(bits, &self.data.a);
        let (lo, hi) = interval.endpoints(&a);
        let x = Float::with_val(bits, x);
        if !(x.clone() > lo.clone() && x.clone() < hi.clone()) {
            return Err(Error::Domain(format!("x = {x} outside ({lo}, {hi})")));
        }
        let j = interval.index(); // sheet index 1 or 2
        let plus = self.boundary_extrapolated(&x, Side::Upper)?;
        let minus = self.boundary_extrapolated(&x, Side::Lower)?;
        let diff = plus[j].clone() - &minus[j];
        let two_pi_i = Complex::with_val((bits, bits), (Float::new(bits), self.prec.pi() * 2u32));
        let psi = diff / two_pi_i;
        // the combination must be real
        let resid = psi.imag().clone().abs();
        let scale = psi.real().clone().abs().max(&Float::with_val(bits, 1));
        if resid > scale * Float::with_val(bits, 1e-12) {
            return Err(Error::Accuracy {
                requested: self.prec.decimal_digits(),
                achieved: 0,
                context: format!("density imaginary residue {resid:e} at x = {x}"),
            });
        }
        Ok(psi.real().clone())
    }

    /// Continue already-labeled branch values along a straight segment to a
    /// nearby point.
    pub fn track_from(&self, from: &BranchValues, to: &Complex) -> Result<BranchValues> {
        self.track_segment(from, to)
    }

    /// One-sided density evaluation `Im(zeta_{j,+}(x)) / pi`, valid because
    /// the cubic has real coefficients on the real axis so the lower boundary
    /// value is the conjugate of the upper one. Used by the quadrature layers;
    /// `density` keeps the two-sided computation with its residue check.
    pub fn density_upper(&self, interval: Interval, x: &Float) -> Result<Float> {
        let bits = self.prec.bits();
        let a = Float::with_val(bits, &self.data.a);
        let (lo, hi) = interval.endpoints(&a);
        let x = Float::with_val(bits, x);
        if !(x.clone() > lo.clone() && x.clone() < hi.clone()) {
            return Err(Error::Domain(format!("x = {x} outside ({lo}, {hi})")));
        }
        let plus = self.boundary_extrapolated(&x, Side::Upper)?;
        Ok(plus[interval.index()].imag().clone() / self.prec.pi())
    }

    /// `zeta'(z)` on the sheet carrying the value `zeta`, by implicit
    /// differentiation of the cubic.
    pub fn zeta_prime(&self, z: &Complex, zeta: &Complex) -> Complex {
        let (p, _q) = self.cubic_pq(z);
        let (pp, qp) = self.cubic_pq_prime(z);
        let num = pp * zeta + qp;
        let den = zeta.clone().square() * 3u32 + p;
        -num / den
    }
}

/// The rational uniformization
/// `z(xi) = 4 a xi^3 / (2(a+1) xi^3 + 3(a-1) xi^2 - (a-1))`.
pub fn riemann_map(xi: &Complex, a: &Float, prec: Prec) -> Result<Complex> {
    let bits = prec.bits();
    let a = Float::with_val(bits, a);
    let xi = Complex::with_val((bits, bits), xi);
    let xi2 = xi.clone().square();
    let xi3 = xi2.clone() * &xi;
    let a1 = a.clone() + 1u32;
    let am1 = a.clone() - 1u32;
    let den = xi3.clone() * (a1 * 2u32) + xi2 * (am1.clone() * 3u32) - &am1;
    if cabs(&den) < Float::with_val(bits, 1e-30) {
        return Err(Error::Pole(format!("xi = {xi} is at or near a pole of the map")));
    }
    let num = xi3 * (a * 4u32);
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_vanish_at_symmetric_point() {
        let p = Prec::digits(50);
        let c = curve_constants(&p.f(-1.0), 50).unwrap();
        assert!(c.zstar.is_zero());
        assert!(c.x0.is_zero());
        assert!(c.b.is_zero());
    }

    #[test]
    fn b_at_minus_two_is_minus_one_over_63() {
        let p = Prec::digits(50);
        let c = curve_constants(&p.f(-2.0), 50).unwrap();
        let target = p.f(-1.0) / 63u32;
        assert!((c.b.clone() - target).abs() < p.eps());
    }

    /// Independent oracle: plain bisection, no Cardano machinery.
    fn bisect_oracle(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn middle_roots_match_bisection_oracle() {
        // at a = -2: 64 z^3 + 48 z^2 - 231 z + 1 and 227 x^3 + 219 x^2 - 498 x - 2
        let zs = bisect_oracle(|z| ((64.0 * z + 48.0) * z - 231.0) * z + 1.0, 0.0, 0.1);
        let x0 = bisect_oracle(|x| ((227.0 * x + 219.0) * x - 498.0) * x - 2.0, -0.1, 0.0);
        let p = Prec::digits(50);
        let c = curve_constants(&p.f(-2.0), 50).unwrap();
        assert!((c.zstar.to_f64() - zs).abs() < 1e-12, "zstar = {} vs {zs}", c.zstar);
        assert!((c.x0.to_f64() - x0).abs() < 1e-12, "x0 = {} vs {x0}", c.x0);
        // order-of-magnitude anchors
        assert!((c.zstar.to_f64() - 4.334e-3).abs() < 2e-5);
        assert!((c.x0.to_f64() + 4.01e-3).abs() < 2e-5);
    }

    #[test]
    fn cubic_residuals_tiny() {
        let p = Prec::digits(60);
        for a in [-2.0, -0.6, -1.01] {
            let c = curve_constants(&p.f(a), 60).unwrap();
            let af = p.f(a);
            let a1 = af.clone() + 1u32;
            let r = ((p.f(64.0) * &c.zstar - p.f(48.0) * &a1) * &c.zstar
                - (p.f(15.0) * af.clone().square() - p.f(78.0) * &af + p.f(15.0)))
                * &c.zstar
                - a1.clone().square() * &a1;
            assert!(r.abs() < p.f(1e-50), "zstar residual at a = {a}");
        }
    }

    #[test]
    fn expansion_near_symmetric_point() {
        // z*(a) = -(a+1)^3/108 + O((a+1)^4), x0(a) = (a+1)^3/108 + O((a+1)^4)
        let p = Prec::digits(60);
        let mut pts_z = Vec::new();
        let mut pts_x = Vec::new();
        for k in 1..=3 {
            let da = p.f(10f64.powi(-k));
            let a = p.f(-1.0) + &da;
            let c = curve_constants(&a, 60).unwrap();
            let lead = da.clone().square() * &da / 108u32;
            pts_z.push((da.clone(), (c.zstar.clone() + &lead).abs()));
            pts_x.push((da.clone(), (c.x0.clone() - lead).abs()));
        }
        let slope_z = crate::fitting::log_log_slope(&pts_z);
        let slope_x = crate::fitting::log_log_slope(&pts_x);
        assert!((slope_z.to_f64() - 4.0).abs() < 0.2, "slope_z = {slope_z}");
        assert!((slope_x.to_f64() - 4.0).abs() < 0.2, "slope_x = {slope_x}");
    }

    #[test]
    fn branch_identities_at_sample_points() {
        let p = Prec::digits(50);
        let curve = Curve::new(&p.f(-2.0), 50).unwrap();
        for (re, im) in [(2.0, 1.0), (-3.0, 0.5), (0.3, -0.8), (12.0, 3.0)] {
            let z = p.c(re, im);
            let bv = curve.branches(&z).unwrap();
            assert!(cabs(&bv.sum()) < p.f(1e-42), "sum at {re}+{im}i");
            // product identity (z - z*) / (4 z^2 (z-a)(z-1))
            let zs = Float::with_val(p.bits(), &curve.data.zstar);
            let num = z.clone() - zs;
            let den = z.clone().square() * (z.clone() + 2u32) * (z.clone() - 1u32) * 4u32;
            let target = num / den;
            assert!(cabs(&(bv.product() - target)) < p.f(1e-40), "product at {re}+{im}i");
        }
    }

    #[test]
    fn large_z_asymptotics_label_branches() {
        let p = Prec::digits(50);
        let curve = Curve::new(&p.f(-1.5), 50).unwrap();
        let z = p.c(80.0, 0.0);
        let bv = curve.branches(&z).unwrap();
        // zeta_0 ~ 1/z, zeta_1, zeta_2 ~ -1/(2z)
        let inv = p.f(1.0) / 80u32;
        assert!(cabs(&(bv.zeta[0].clone() - &inv)) < p.f(1e-3));
        assert!(cabs(&(bv.zeta[1].clone() + inv.clone() / 2u32)) < p.f(1e-3));
        assert!(cabs(&(bv.zeta[2].clone() + inv / 2u32)) < p.f(1e-3));
    }

    #[test]
    fn density_symmetric_reflection() {
        // a = -1: psi_1(-x) = psi_2(x)
        let p = Prec::digits(40);
        let curve = Curve::new(&p.f(-1.0), 40).unwrap();
        for x in [0.2, 0.5, 0.85] {
            let right = curve.density(Interval::Right, &p.f(x)).unwrap();
            let left = curve.density(Interval::Left, &p.f(-x)).unwrap();
            assert!(
                (right.clone() - &left).abs() < p.f(1e-25),
                "x = {x}: {right} vs {left}"
            );
            assert!(right > 0u32);
        }
    }

    #[test]
    fn density_vanishes_at_x0() {
        let p = Prec::digits(40);
        let curve = Curve::new(&p.f(-2.0), 40).unwrap();
        let x0 = Float::with_val(p.bits(), &curve.data.x0);
        let psi1 = curve.density(Interval::Left, &x0).unwrap();
        assert!(psi1.clone().abs() < p.f(1e-20), "psi1(x0) = {psi1}");
    }

    #[test]
    fn riemann_map_fixed_points() {
        let p = Prec::digits(50);
        for a in [-2.0, -1.0, -0.5] {
            let af = p.f(a);
            let at_zero = riemann_map(&p.c_zero(), &af, p).unwrap();
            assert!(cabs(&at_zero) < p.eps());
            let at_one = riemann_map(&p.c(1.0, 0.0), &af, p).unwrap();
            assert!(cabs(&(at_one - 1u32)) < p.eps());
            let at_minus_one = riemann_map(&p.c(-1.0, 0.0), &af, p).unwrap();
            assert!(cabs(&(at_minus_one - &af)) < p.eps());
        }
    }

    #[test]
    fn riemann_map_cube_behavior_at_origin() {
        // z(xi) = (4a/(1-a)) xi^3 + O(xi^4)
        let p = Prec::digits(50);
        let a = p.f(-2.0);
        let lead = p.f(4.0) * &a / (p.f(1.0) - &a);
        let xi = p.c(1e-8, 0.0);
        let z = riemann_map(&xi, &a, p).unwrap();
        let xi3 = xi.clone() * &xi * &xi;
        let ratio = z / (xi3 * lead);
        assert!(cabs(&(ratio - 1u32)) < p.f(1e-7));
    }

    #[test]
    fn zeta_prime_matches_finite_difference() {
        let p = Prec::digits(50);
        let curve = Curve::new(&p.f(-1.5), 50).unwrap();
        let z = p.c(0.4, 0.6);
        let bv = curve.branches(&z).unwrap();
        let h = p.f(1e-20);
        let zp = curve.branches(&(z.clone() + &h)).unwrap();
        let zm = curve.branches(&(z.clone() - &h)).unwrap();
        for j in 0..3 {
            let fd = (zp.zeta[j].clone() - &zm.zeta[j]) / (h.clone() * 2u32);
            let implicit = curve.zeta_prime(&z, &bv.zeta[j]);
            assert!(cabs(&(fd - implicit)) < p.f(1e-8), "branch {j}");
        }
    }
}
