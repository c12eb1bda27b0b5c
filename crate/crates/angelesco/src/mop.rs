//! Type-II multiple orthogonal polynomials `P_{n1,n2}` for the modified
//! Jacobi weight pair, by two independent routes: the moment linear system
//! and, for the Jacobi-Angelesco family, the explicit double-sum formula.
//!
//! The moment system is brutally ill-conditioned on touching intervals, so
//! everything here runs at a digit budget of `max(160, 6n + 64)` by default,
//! and drops to exact rational arithmetic when possible.

use rug::{Complex, Float, Integer, Rational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{solve_float, solve_rational};
use crate::prec::Prec;
use crate::quad::gauss_jacobi_rule;
use crate::weights::{AnalyticFactor, Interval, ScalingParams, WeightParams};

/// Orthogonality multi-index `(n1, n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiIndex {
    pub n1: u32,
    pub n2: u32,
}

impl MultiIndex {
    pub fn diagonal(n: u32) -> Self {
        MultiIndex { n1: n, n2: n }
    }

    pub fn degree(&self) -> usize {
        (self.n1 + self.n2) as usize
    }
}

/// Monic polynomial with coefficients in ascending degree order.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub coeffs: Vec<Float>,
    pub index: MultiIndex,
    pub digits: u32,
}

impl Polynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Float) -> Float {
        let bits = self.coeffs[0].prec();
        let mut acc = Float::new(bits);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_cx(&self, z: &Complex) -> Complex {
        let bits = z.prec();
        let mut acc = Complex::new(bits);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Default digit budget for a diagonal index of size `n`.
pub fn default_digits(n: u32) -> u32 {
    160.max(6 * n + 64)
}

/// Guard digits documented for the orthogonality-residual contract:
/// residuals after a solve at `d` digits stay below `10^-(d - guard)`.
pub fn residual_guard_digits(index: MultiIndex) -> u32 {
    20 + 2 * (index.n1 + index.n2)
}

// ---- moments ---------------------------------------------------------------

/// `int_{Delta_j} x^k w_j(x) dx` to the requested precision.
///
/// The Jacobi kernel of the weight is absorbed by a Gauss-Jacobi rule; the
/// rule order adapts until two successive doublings agree.
pub fn modified_moment(interval: Interval, k: u32, params: &WeightParams, prec: Prec) -> Result<Float> {
    params.validate()?;
    let a = params.a_at(prec);
    let (lo, hi) = interval.endpoints(&a);
    let (p, q) = params.kernel_exponents(interval, prec);
    let factor = params.factor(interval);

    // polynomial integrand of degree k when the analytic factor is constant
    if let AnalyticFactor::Constant(c) = factor {
        let m = (k as usize) / 2 + 1;
        let rule = gauss_jacobi_rule(&lo, &hi, &p, &q, m, prec)?;
        let c = Float::with_val(prec.bits(), c);
        return Ok(rule.integrate(|x| pow_u(x, k)) * c);
    }

    let mut m = (k as usize) / 2 + 8;
    let mut prev: Option<Float> = None;
    let tol = prec.eps();
    for _ in 0..12 {
        let rule = gauss_jacobi_rule(&lo, &hi, &p, &q, m, prec)?;
        let val = rule.integrate(|x| pow_u(x, k) * factor.eval(x, prec));
        if let Some(pv) = &prev {
            let scale = val.clone().abs().max(&Float::with_val(prec.bits(), 1e-30));
            if (val.clone() - pv).abs() < tol.clone() * scale {
                return Ok(val);
            }
        }
        prev = Some(val);
        m *= 2;
    }
    Err(Error::Accuracy {
        requested: prec.decimal_digits(),
        achieved: 0,
        context: format!("moment ({}, {k}) did not converge", interval.index()),
    })
}

fn pow_u(x: &Float, k: u32) -> Float {
    use rug::ops::Pow;
    if k == 0 {
        return Float::with_val(x.prec(), 1);
    }
    x.clone().pow(k)
}

/// Exact rational moment, available when `a` is exactly representable,
/// the local exponents are nonnegative integers, and the analytic factor is
/// an exact rational constant.
pub fn moment_rational(interval: Interval, k: u32, params: &WeightParams) -> Option<Rational> {
    let a = params.a.to_rational()?;
    let alpha = float_to_small_uint(&params.alpha)?;
    let beta = float_to_small_uint(&params.beta)?;
    let gamma = float_to_small_uint(&params.gamma)?;
    let h = match params.factor(interval) {
        AnalyticFactor::Constant(c) => c.to_rational()?,
        _ => return None,
    };
    let mut total = Rational::new();
    match interval {
        Interval::Left => {
            // (x-a)^alpha (-x)^beta on (a, 0)
            for i in 0..=alpha {
                let m = k + beta + i;
                let c = int_binomial(alpha, i);
                let neg_a = -a.clone();
                let term = c * pow_rat(&neg_a, alpha - i) * sign_pow(beta) * (-pow_rat(&a, m + 1))
                    / Rational::from((m + 1, 1u32));
                total += term;
            }
        }
        Interval::Right => {
            // x^beta (1-x)^gamma on (0, 1)
            for i in 0..=gamma {
                let term = int_binomial(gamma, i) * sign_pow(i) / Rational::from((k + beta + i + 1, 1u32));
                total += term;
            }
        }
    }
    Some(total * h)
}

fn int_binomial(n: u32, k: u32) -> Rational {
    Rational::from(Integer::from(n).binomial(k))
}

fn float_to_small_uint(x: &Float) -> Option<u32> {
    if !x.is_integer() || (x.is_sign_negative() && !x.is_zero()) {
        return None;
    }
    let v = x.to_integer()?.to_u32()?;
    (v <= 64).then_some(v)
}

fn pow_rat(x: &Rational, e: u32) -> Rational {
    use rug::ops::Pow;
    x.clone().pow(e)
}

fn sign_pow(e: u32) -> Rational {
    if e % 2 == 0 {
        Rational::from(1)
    } else {
        Rational::from(-1)
    }
}

// ---- moment-system solve -----------------------------------------------------

/// Whether the exact rational route applies to this parameter set.
pub fn exact_path_available(params: &WeightParams) -> bool {
    moment_rational(Interval::Left, 0, params).is_some()
        && moment_rational(Interval::Right, 0, params).is_some()
}

/// Exact rational coefficients of `P_{n1,n2}` (ascending, monic).
pub fn solve_mop_rational(index: MultiIndex, params: &WeightParams) -> Result<Vec<Rational>> {
    let n = index.degree();
    if n == 0 {
        return Ok(vec![Rational::from(1)]);
    }
    let need = 2 * n as u32;
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for k in 0..need {
        m1.push(moment_rational(Interval::Left, k, params).ok_or_else(|| {
            Error::InvalidParams("exact path needs integer exponents and rational data".into())
        })?);
        m2.push(moment_rational(Interval::Right, k, params).ok_or_else(|| {
            Error::InvalidParams("exact path needs integer exponents and rational data".into())
        })?);
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..index.n1 as usize {
        a.push((0..n).map(|i| m1[k + i].clone()).collect::<Vec<_>>());
        b.push(-m1[k + n].clone());
    }
    for k in 0..index.n2 as usize {
        a.push((0..n).map(|i| m2[k + i].clone()).collect::<Vec<_>>());
        b.push(-m2[k + n].clone());
    }
    let mut coeffs = solve_rational(&a, &b)?;
    coeffs.push(Rational::from(1));
    Ok(coeffs)
}

/// Solve the orthogonality conditions for the monic `P_{n1,n2}`.
///
/// Uses exact rational arithmetic when the parameters allow it, otherwise a
/// high-precision LU solve whose residual is checked against the documented
/// guard.
pub fn solve_mop(index: MultiIndex, params: &WeightParams, digits: u32) -> Result<Polynomial> {
    params.validate()?;
    let prec = Prec::digits(digits);
    let n = index.degree();
    if n == 0 {
        return Ok(Polynomial { coeffs: vec![prec.f(1.0)], index, digits });
    }

    if exact_path_available(params) {
        let exact = solve_mop_rational(index, params)?;
        let coeffs = exact.iter().map(|r| Float::with_val(prec.bits(), r)).collect();
        return Ok(Polynomial { coeffs, index, digits });
    }

    let need = 2 * n as u32;
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for k in 0..need {
        m1.push(modified_moment(Interval::Left, k, params, prec)?);
        m2.push(modified_moment(Interval::Right, k, params, prec)?);
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..index.n1 as usize {
        a.push((0..n).map(|i| m1[k + i].clone()).collect::<Vec<_>>());
        b.push(-m1[k + n].clone());
    }
    for k in 0..index.n2 as usize {
        a.push((0..n).map(|i| m2[k + i].clone()).collect::<Vec<_>>());
        b.push(-m2[k + n].clone());
    }
    let (mut coeffs, residual) = solve_float(&a, &b, prec)?;
    let guard = residual_guard_digits(index);
    if digits > guard {
        let bound = Prec::digits(digits - guard).eps();
        if residual > bound {
            let achieved = residual.to_f64().abs().log10();
            return Err(Error::Conditioning {
                digit_loss: (digits as i64 + achieved as i64).max(0) as u32,
                context: format!("orthogonality residual {residual:e} above 1e-{}", digits - guard),
            });
        }
    }
    coeffs.push(prec.f(1.0));
    Ok(Polynomial { coeffs, index, digits })
}

/// Orthogonality residuals `int P x^k w_j`, recomputed by quadrature
/// independently of the linear solve.
pub fn orthogonality_residuals(poly: &Polynomial, params: &WeightParams, digits: u32) -> Result<Vec<Float>> {
    let prec = Prec::digits(digits);
    let n = poly.degree();
    let mut out = Vec::new();
    for (interval, count) in [(Interval::Left, poly.index.n1), (Interval::Right, poly.index.n2)] {
        let a = params.a_at(prec);
        let (lo, hi) = interval.endpoints(&a);
        let (p, q) = params.kernel_exponents(interval, prec);
        let factor = params.factor(interval);
        for k in 0..count {
            let mut m = (n + k as usize) / 2 + 12;
            let mut prev: Option<Float> = None;
            // the analytic factor need not be polynomial, so double the order
            // until two rules agree at working precision
            let v = loop {
                let rule = gauss_jacobi_rule(&lo, &hi, &p, &q, m, prec)?;
                let val = rule.integrate(|x| poly.eval(x) * pow_u(x, k) * factor.eval(x, prec));
                if let Some(pv) = &prev {
                    if (val.clone() - pv).abs() < prec.eps() || m > 4096 {
                        break val;
                    }
                }
                prev = Some(val);
                m *= 2;
            };
            out.push(v);
        }
    }
    Ok(out)
}

// ---- classical double-sum formula ---------------------------------------------

/// Generalized binomial `binom(x, k)` with integer `k >= 0` as the
/// falling-factorial ratio `Gamma(x+1) / (Gamma(k+1) Gamma(x-k+1))`.
fn gbinom(x: &Float, k: u32) -> Float {
    let bits = x.prec();
    let mut acc = Float::with_val(bits, 1);
    for i in 1..=k {
        acc *= (x.clone() - Float::with_val(bits, i - 1)) / Float::with_val(bits, i);
    }
    acc
}

fn gbinom_rat(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from(1);
    for i in 1..=k {
        acc *= (x.clone() - Rational::from(i - 1)) / Rational::from(i);
    }
    acc
}

/// Coefficients of the Jacobi-Angelesco polynomial
/// `P_{n,n}^{(alpha,beta,gamma)}(z; a)` from the explicit double sum,
/// ascending and monic.
pub fn classical_pnn_poly(
    n: u32,
    alpha: &Float,
    beta: &Float,
    gamma: &Float,
    a: &Float,
    digits: u32,
) -> Polynomial {
    let prec = Prec::digits(digits);
    let bits = prec.bits();
    let deg = 2 * n as usize;
    let a = Float::with_val(bits, a);
    let alpha = Float::with_val(bits, alpha);
    let beta = Float::with_val(bits, beta);
    let gamma = Float::with_val(bits, gamma);

    // coefficient tables for (z - a)^i and (z - 1)^i
    let pow_za = binomial_powers(&-a.clone(), n as usize, bits);
    let pow_z1 = binomial_powers(&prec.f(-1.0), n as usize, bits);

    let mut acc = vec![Float::new(bits); deg + 1];
    for k in 0..=n {
        let ck = gbinom(&(alpha.clone() + Float::with_val(bits, n)), k);
        for j in 0..=n - k {
            let c = ck.clone()
                * gbinom(&(beta.clone() + Float::with_val(bits, n)), j)
                * gbinom(&(gamma.clone() + Float::with_val(bits, n)), n - k - j);
            // (z-a)^{n-k} z^{n-j} (z-1)^{k+j}
            let pa = &pow_za[(n - k) as usize];
            let p1 = &pow_z1[(k + j) as usize];
            let shift = (n - j) as usize;
            for (ia, ca) in pa.iter().enumerate() {
                for (i1, c1) in p1.iter().enumerate() {
                    acc[shift + ia + i1] += c.clone() * ca * c1;
                }
            }
        }
    }
    // divide by binom(3n + alpha + beta + gamma, n)
    let total = alpha + beta + gamma + Float::with_val(bits, 3 * n);
    let norm = gbinom(&total, n);
    for c in &mut acc {
        *c /= &norm;
    }
    Polynomial { coeffs: acc, index: MultiIndex::diagonal(n), digits }
}

/// Coefficient lists of `(z + c)^i` for `i = 0..=n`, ascending.
fn binomial_powers(c: &Float, n: usize, bits: u32) -> Vec<Vec<Float>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(vec![Float::with_val(bits, 1)]);
    for i in 1..=n {
        let prev = out[i - 1].clone();
        let mut next = vec![Float::new(bits); i + 1];
        for (k, pk) in prev.iter().enumerate() {
            next[k] += pk.clone() * c;
            next[k + 1] += pk;
        }
        out.push(next);
    }
    out
}

/// Point evaluation of the Jacobi-Angelesco double sum at complex `z`.
pub fn classical_pnn(
    n: u32,
    alpha: &Float,
    beta: &Float,
    gamma: &Float,
    a: &Float,
    z: &Complex,
    digits: u32,
) -> Complex {
    let prec = Prec::digits(digits);
    let bits = prec.bits();
    let a = Float::with_val(bits, a);
    let alpha = Float::with_val(bits, alpha);
    let beta = Float::with_val(bits, beta);
    let gamma = Float::with_val(bits, gamma);
    let z = Complex::with_val((bits, bits), z);

    let za = z.clone() - &a;
    let z1 = z.clone() - 1u32;
    let pow_za = complex_powers(&za, n as usize);
    let pow_z = complex_powers(&z, n as usize);
    let pow_z1 = complex_powers(&z1, n as usize);

    // binomial rows by binom(x, k+1) = binom(x, k) (x - k)/(k + 1)
    let row = |x: Float| -> Vec<Float> {
        let mut v = Vec::with_capacity(n as usize + 1);
        let mut acc = Float::with_val(bits, 1);
        v.push(acc.clone());
        for k in 0..n {
            acc *= (x.clone() - Float::with_val(bits, k)) / Float::with_val(bits, k + 1);
            v.push(acc.clone());
        }
        v
    };
    let row_a = row(alpha.clone() + Float::with_val(bits, n));
    let row_b = row(beta.clone() + Float::with_val(bits, n));
    let row_g = row(gamma.clone() + Float::with_val(bits, n));

    let mut total = Complex::new(bits);
    for k in 0..=n as usize {
        let mut inner = Complex::new(bits);
        for j in 0..=(n as usize - k) {
            let c = row_b[j].clone() * &row_g[n as usize - k - j];
            inner += pow_z[n as usize - j].clone() * &pow_z1[k + j] * c;
        }
        total += inner * &pow_za[n as usize - k] * &row_a[k];
    }
    let norm = gbinom(&(alpha + beta + gamma + Float::with_val(bits, 3 * n)), n);
    total / norm
}

fn complex_powers(z: &Complex, n: usize) -> Vec<Complex> {
    let bits = z.prec().0;
    let mut out = Vec::with_capacity(n + 1);
    out.push(Complex::with_val((bits, bits), (1, 0)));
    for i in 1..=n {
        let v = out[i - 1].clone() * z;
        out.push(v);
    }
    out
}

/// Exact rational evaluation of the double sum; all inputs rational.
pub fn classical_pnn_exact(
    n: u32,
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    a: &Rational,
    z: &Rational,
) -> Rational {
    let za = z.clone() - a;
    let z1 = z.clone() - Rational::from(1);
    let mut total = Rational::new();
    for k in 0..=n {
        for j in 0..=n - k {
            let c = gbinom_rat(&(alpha.clone() + Rational::from(n)), k)
                * gbinom_rat(&(beta.clone() + Rational::from(n)), j)
                * gbinom_rat(&(gamma.clone() + Rational::from(n)), n - k - j);
            total += c * pow_rat(&za, n - k) * pow_rat(z, n - j) * pow_rat(&z1, k + j);
        }
    }
    let norm = gbinom_rat(&(alpha.clone() + beta + gamma + Rational::from(3 * n)), n);
    total / norm
}

// ---- zeros -----------------------------------------------------------------

/// Real simple zeros of `poly` split by interval: exactly `n1` in `(a, 0)`
/// and `n2` in `(0, 1)`.
///
/// Sign-change scan on a grid of `8 deg^2` points per interval followed by
/// bisection to working precision.
pub fn poly_zeros(poly: &Polynomial, params: &WeightParams) -> Result<(Vec<Float>, Vec<Float>)> {
    let prec = Prec::digits(poly.digits);
    let a = params.a_at(prec);
    let deg = poly.degree();
    if deg == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let grid = 8 * deg * deg;
    let mut halves = Vec::new();
    for (interval, expected) in [(Interval::Left, poly.index.n1), (Interval::Right, poly.index.n2)] {
        let (lo, hi) = interval.endpoints(&a);
        let zeros = scan_and_bisect(poly, &lo, &hi, grid, prec);
        if zeros.len() != expected as usize {
            return Err(Error::ZeroCount(format!(
                "found {} zeros in ({lo}, {hi}), expected {expected}",
                zeros.len()
            )));
        }
        halves.push(zeros);
    }
    let right = halves.pop().unwrap();
    let left = halves.pop().unwrap();
    Ok((left, right))
}

fn scan_and_bisect(poly: &Polynomial, lo: &Float, hi: &Float, grid: usize, prec: Prec) -> Vec<Float> {
    let bits = prec.bits();
    let step = (hi.clone() - lo) / Float::with_val(bits, grid as u32);
    let mut zeros = Vec::new();
    let mut x_prev = lo.clone() + step.clone() / 2u32;
    let mut f_prev = poly.eval(&x_prev);
    for i in 1..grid {
        let x = lo.clone() + step.clone() * Float::with_val(bits, i as u32) + step.clone() / 2u32;
        if x >= *hi {
            break;
        }
        let f = poly.eval(&x);
        if f.is_zero() {
            zeros.push(x.clone());
        } else if f_prev.clone() * &f < 0 {
            zeros.push(bisect(poly, &x_prev, &x, prec));
        }
        x_prev = x;
        f_prev = f;
    }
    zeros
}

fn bisect(poly: &Polynomial, lo: &Float, hi: &Float, prec: Prec) -> Float {
    let bits = prec.bits();
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let mut f_lo = poly.eval(&lo);
    // one bracket halving per bit of working precision
    for _ in 0..(bits + 8) {
        let mid = (lo.clone() + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = poly.eval(&mid);
        if f_mid.is_zero() {
            return mid;
        }
        if f_lo.clone() * &f_mid < 0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    (lo + hi) / 2u32
}

// ---- double-scaled evaluation ---------------------------------------------

/// `P_{n,n}(z / (sqrt(2) n^{3/2}); a_n)` with the digit budget raised to at
/// least `2n + 100` on the double-sum path and an independent self-check at
/// 30 extra digits.
pub fn eval_scaled(
    n: u32,
    z: &Complex,
    scaling: &ScalingParams,
    params: &WeightParams,
    digits: u32,
) -> Result<Complex> {
    let digits = digits.max(2 * n + 100);
    let value = eval_scaled_at(n, z, scaling, params, digits)?;
    let check = eval_scaled_at(n, z, scaling, params, digits + 30)?;
    let bits = value.prec().0;
    let check = Complex::with_val((bits, bits), &check);
    let rel = crate::prec::rel_diff(&value, &check);
    if rel > Float::with_val(bits, 1e-30) {
        return Err(Error::Accuracy {
            requested: digits,
            achieved: (-rel.to_f64().log10()).max(0.0) as u32,
            context: "scaled evaluation self-check failed".into(),
        });
    }
    Ok(value)
}

fn eval_scaled_at(
    n: u32,
    z: &Complex,
    scaling: &ScalingParams,
    params: &WeightParams,
    digits: u32,
) -> Result<Complex> {
    let prec = Prec::digits(digits);
    let bits = prec.bits();
    let a_n = scaling.a_n(prec)?;
    let n_f = Float::with_val(bits, n);
    let scale = Float::with_val(bits, 2).sqrt() * n_f.clone() * n_f.sqrt();
    let arg = Complex::with_val((bits, bits), z) / scale;
    if params.is_jacobi_angelesco_family() {
        Ok(classical_pnn(n, &params.alpha, &params.beta, &params.gamma, &a_n, &arg, digits))
    } else {
        // general analytic factors: moment route, re-anchored at a_n
        let re_anchored = WeightParams::new(
            a_n,
            Float::with_val(bits, &params.alpha),
            Float::with_val(bits, &params.beta),
            Float::with_val(bits, &params.gamma),
            params.h1.clone(),
            params.h2.clone(),
        )?;
        let poly = solve_mop(MultiIndex::diagonal(n), &re_anchored, digits)?;
        Ok(poly.eval_cx(&arg))
    }
}

impl WeightParams {
    /// Whether the weight pair is of the Jacobi-Angelesco shape
    /// `h1 = |x-1|^gamma`, `h2 = |x-a|^alpha` (constant 1 counts when the
    /// matching exponent vanishes), so the double-sum formula applies.
    pub fn is_jacobi_angelesco_family(&self) -> bool {
        let h1_ok = match &self.h1 {
            AnalyticFactor::Constant(c) => self.gamma.is_zero() && *c == 1u32,
            AnalyticFactor::PowerProduct(fs) => {
                fs.len() == 1 && fs[0].root == 1u32 && fs[0].exponent == self.gamma
            }
            _ => false,
        };
        let h2_ok = match &self.h2 {
            AnalyticFactor::Constant(c) => self.alpha.is_zero() && *c == 1u32,
            AnalyticFactor::PowerProduct(fs) => {
                fs.len() == 1 && fs[0].root == self.a && fs[0].exponent == self.alpha
            }
            _ => false,
        };
        h1_ok && h2_ok
    }
}

// ---- serialization ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    index: [u32; 2],
    digits: u32,
    coeffs: Vec<String>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolynomialRepr {
            index: [self.index.n1, self.index.n2],
            digits: self.digits,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| crate::report::decimal_string(c, self.digits))
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(d)?;
        let prec = Prec::digits(repr.digits);
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| prec.parse(s).ok_or_else(|| D::Error::custom(format!("bad coefficient {s:?}"))))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Polynomial {
            coeffs,
            index: MultiIndex { n1: repr.index[0], n2: repr.index[1] },
            digits: repr.digits,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prec::cabs;

    #[test]
    fn trivial_moments() {
        let p = Prec::digits(60);
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        // length of [0,1]
        let m0 = modified_moment(Interval::Right, 0, &w, p).unwrap();
        assert!((m0 - 1u32).abs() < p.eps());
        // int_{-1}^0 x dx = -1/2
        let m1 = modified_moment(Interval::Left, 1, &w, p).unwrap();
        assert!((m1 + p.f(0.5)).abs() < p.eps());
    }

    #[test]
    fn beta_moment_is_pi_over_8() {
        // beta = gamma = 1/2: int_0^1 x^(1/2) (1-x)^(1/2) dx = B(3/2,3/2) = pi/8
        let p = Prec::digits(60);
        let w = WeightParams::from_f64(-1.0, 0.0, 0.5, 0.5).unwrap();
        let m0 = modified_moment(Interval::Right, 0, &w, p).unwrap();
        let target = p.pi() / 8u32;
        assert!((m0 - target).abs() < p.eps() * 10u32);
    }

    #[test]
    fn rational_moments_match_float() {
        let w = WeightParams::from_f64(-1.5, 1.0, 2.0, 0.0).unwrap();
        let p = Prec::digits(60);
        for (interval, k) in [(Interval::Left, 0), (Interval::Left, 3), (Interval::Right, 2)] {
            let r = moment_rational(interval, k, &w).unwrap();
            let f = modified_moment(interval, k, &w, p).unwrap();
            let rf = Float::with_val(p.bits(), &r);
            assert!((rf - f).abs() < p.eps() * 100u32, "interval {interval:?} k {k}");
        }
    }

    #[test]
    fn symmetric_cubic_coefficients() {
        // a = -1, exponents 0: P_{1,1} = z^2 - 1/3
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        let poly = solve_mop(MultiIndex::diagonal(1), &w, 60).unwrap();
        let p = Prec::digits(60);
        assert_eq!(poly.coeffs.len(), 3);
        assert!((poly.coeffs[2].clone() - 1u32).abs() < p.eps());
        assert!(poly.coeffs[1].clone().abs() < p.eps());
        assert!((poly.coeffs[0].clone() + p.f(1.0) / 3u32).abs() < p.eps());
    }

    #[test]
    fn general_a_quadratic() {
        // P_{1,1}(z; a) = z^2 - (2(a+1)/3) z + a/3
        for a in [-2.0, -0.5, -1.25] {
            let w = WeightParams::from_f64(a, 0.0, 0.0, 0.0).unwrap();
            let poly = solve_mop(MultiIndex::diagonal(1), &w, 60).unwrap();
            let p = Prec::digits(60);
            let af = p.f(a);
            assert!((poly.coeffs[1].clone() + p.f(2.0) * (af.clone() + 1u32) / 3u32).abs() < p.eps());
            assert!((poly.coeffs[0].clone() - af / 3u32).abs() < p.eps());
        }
    }

    #[test]
    fn degree_zero_is_one() {
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        let poly = solve_mop(MultiIndex { n1: 0, n2: 0 }, &w, 60).unwrap();
        assert_eq!(poly.coeffs.len(), 1);
        assert!(poly.coeffs[0] == 1u32);
    }

    #[test]
    fn classical_matches_expanded_quadratic() {
        let p = Prec::digits(60);
        for a in [-1.0, -2.0, -0.7] {
            let poly = classical_pnn_poly(1, &p.zero(), &p.zero(), &p.zero(), &p.f(a), 60);
            let af = p.f(a);
            assert!((poly.coeffs[2].clone() - 1u32).abs() < p.eps());
            assert!((poly.coeffs[1].clone() + p.f(2.0) * (af.clone() + 1u32) / 3u32).abs() < p.eps() * 10u32);
            assert!((poly.coeffs[0].clone() - af / 3u32).abs() < p.eps() * 10u32);
        }
    }

    #[test]
    fn value_at_zero_exact_anchor() {
        // P_{n,n}(0; a) binom(3n, n) = a^n exactly
        for n in [1u32, 2, 4, 7] {
            for a_num in [-1i32, -2] {
                let a = Rational::from(a_num);
                let zero = Rational::new();
                let v = classical_pnn_exact(n, &zero, &zero, &zero, &a, &zero);
                let target = pow_rat(&a, n) / Rational::from(Integer::from(3 * n).binomial(n));
                assert_eq!(v, target, "n = {n}, a = {a_num}");
            }
        }
    }

    #[test]
    fn classical_n2_at_zero() {
        // n=2, a=-1: P(0) = 1/binom(6,2) = 1/15
        let p = Prec::digits(60);
        let v = classical_pnn(2, &p.zero(), &p.zero(), &p.zero(), &p.f(-1.0), &p.c_zero(), 60);
        assert!(cabs(&(v - p.f(1.0) / 15u32)) < p.eps() * 10u32);
    }

    #[test]
    fn exact_solver_agrees_with_classical() {
        // moment solve and double sum must produce identical rationals
        let w = WeightParams::from_f64(-2.0, 0.0, 0.0, 0.0).unwrap();
        let exact = solve_mop_rational(MultiIndex::diagonal(3), &w).unwrap();
        let a = Rational::from(-2);
        let zero = Rational::new();
        let at0 = classical_pnn_exact(3, &zero, &zero, &zero, &a, &zero);
        assert_eq!(exact[0], at0);
    }

    #[test]
    fn zeros_of_symmetric_quadratic() {
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        let poly = solve_mop(MultiIndex::diagonal(1), &w, 60).unwrap();
        let (l, r) = poly_zeros(&poly, &w).unwrap();
        let p = Prec::digits(60);
        let target = 1u32 / p.f(3.0).sqrt();
        assert_eq!(l.len(), 1);
        assert_eq!(r.len(), 1);
        assert!((r[0].clone() - &target).abs() < p.f(1e-55));
        assert!((l[0].clone() + target).abs() < p.f(1e-55));
    }

    #[test]
    fn zero_counts_at_wider_interval() {
        let w = WeightParams::from_f64(-2.0, 0.0, 0.0, 0.0).unwrap();
        let poly = solve_mop(MultiIndex::diagonal(1), &w, 60).unwrap();
        let (l, r) = poly_zeros(&poly, &w).unwrap();
        assert_eq!((l.len(), r.len()), (1, 1));
        assert!(l[0] > -2.0 && l[0] < 0.0);
        assert!(r[0] > 0.0 && r[0] < 1.0);
    }

    #[test]
    fn empty_zero_set_for_constant() {
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        let poly = solve_mop(MultiIndex { n1: 0, n2: 0 }, &w, 60).unwrap();
        let (l, r) = poly_zeros(&poly, &w).unwrap();
        assert!(l.is_empty() && r.is_empty());
    }

    #[test]
    fn scaled_value_at_origin() {
        // tau = 0, z = 0: (-1)^n / binom(3n, n); n = 4 gives 1/495
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        let s = ScalingParams::new(0.0, 4).unwrap();
        let v = eval_scaled(4, &Prec::digits(50).c_zero(), &s, &w, 50).unwrap();
        let bits = v.prec().0;
        let target = Float::with_val(bits, 1) / 495u32;
        assert!(cabs(&(v - target)) < Float::with_val(bits, 1e-80));
    }

    #[test]
    fn orthogonality_residuals_within_guard() {
        let w = WeightParams::jacobi_angelesco(-1.5, 0.5, -0.5, 0.5).unwrap();
        let digits = default_digits(6);
        let poly = solve_mop(MultiIndex::diagonal(6), &w, digits).unwrap();
        let res = orthogonality_residuals(&poly, &w, digits).unwrap();
        let guard = residual_guard_digits(poly.index);
        let bound = Prec::digits(digits - guard).eps();
        for r in res {
            assert!(r.clone().abs() < bound, "residual {r:e}");
        }
    }

    #[test]
    fn polynomial_json_round_trip() {
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        let poly = solve_mop(MultiIndex::diagonal(2), &w, 60).unwrap();
        let json = serde_json::to_string(&poly).unwrap();
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(poly.coeffs.len(), back.coeffs.len());
        for (a, b) in poly.coeffs.iter().zip(&back.coeffs) {
            let p = Prec::digits(55);
            assert!((a.clone() - b).abs() < p.eps());
        }
    }
}
