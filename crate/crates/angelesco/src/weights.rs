//! Modified Jacobi weight pair on the touching intervals `[a,0]` and `[0,1]`.
//!
//! The two weights are
//! `w1(x) = (x-a)^alpha |x|^beta h1(x)` on `(a,0)` and
//! `w2(x) = x^beta (1-x)^gamma h2(x)` on `(0,1)`,
//! with `a < 0`, exponents `> -1`, and `h_j` strictly positive and analytic
//! in a neighborhood of its interval.

use std::fmt;
use std::sync::Arc;

use rug::ops::CompleteRound;
use rug::{Complex, Float};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::prec::{cpow, rpow, Prec};

/// Storage precision for weight parameters (bits). Generous enough for any
/// downstream digit target that re-rounds from these values.
const PARAM_BITS: u32 = 1024;

/// The two orthogonality intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interval {
    /// `Delta_1 = [a, 0]`
    Left,
    /// `Delta_2 = [0, 1]`
    Right,
}

impl Interval {
    pub fn index(self) -> usize {
        match self {
            Interval::Left => 1,
            Interval::Right => 2,
        }
    }

    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Interval::Left),
            2 => Ok(Interval::Right),
            _ => Err(Error::InvalidParams(format!("interval index {j} not in {{1,2}}"))),
        }
    }

    /// Endpoints `(lo, hi)` given the left endpoint `a`.
    pub fn endpoints(self, a: &Float) -> (Float, Float) {
        let prec = a.prec();
        match self {
            Interval::Left => (a.clone(), Float::new(prec)),
            Interval::Right => (Float::new(prec), Float::with_val(prec, 1)),
        }
    }
}

/// One factor `|x - root|^exponent` of a power-product analytic factor.
#[derive(Debug, Clone)]
pub struct PowerFactor {
    pub root: Float,
    pub exponent: Float,
}

/// Analytic factor `h_j`, strictly positive on its interval.
#[derive(Clone)]
pub enum AnalyticFactor {
    /// Constant `c > 0`.
    Constant(Float),
    /// Product of `|x - r_k|^{p_k}` with every `r_k` outside the open interval.
    PowerProduct(Vec<PowerFactor>),
    /// User-supplied analytic callable with a declared validity half-width
    /// around the interval.
    Custom {
        eval: Arc<dyn Fn(&Complex, Prec) -> Complex + Send + Sync>,
        neighborhood: Float,
    },
}

impl fmt::Debug for AnalyticFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticFactor::Constant(c) => write!(f, "Constant({c})"),
            AnalyticFactor::PowerProduct(v) => write!(f, "PowerProduct({v:?})"),
            AnalyticFactor::Custom { neighborhood, .. } => {
                write!(f, "Custom {{ neighborhood: {neighborhood} }}")
            }
        }
    }
}

impl AnalyticFactor {
    pub fn one() -> Self {
        AnalyticFactor::Constant(Float::with_val(PARAM_BITS, 1))
    }

    pub fn constant(c: f64) -> Self {
        AnalyticFactor::Constant(Float::with_val(PARAM_BITS, c))
    }

    pub fn power(root: f64, exponent: f64) -> Self {
        AnalyticFactor::PowerProduct(vec![PowerFactor {
            root: Float::with_val(PARAM_BITS, root),
            exponent: Float::with_val(PARAM_BITS, exponent),
        }])
    }

    /// Evaluate on the real line.
    pub fn eval(&self, x: &Float, prec: Prec) -> Float {
        match self {
            AnalyticFactor::Constant(c) => Float::with_val(prec.bits(), c),
            AnalyticFactor::PowerProduct(factors) => {
                let mut acc = prec.int(1);
                for fac in factors {
                    let d = (x.clone() - &fac.root).abs();
                    let e = Float::with_val(prec.bits(), &fac.exponent);
                    acc *= rpow(&d, &e);
                }
                acc
            }
            AnalyticFactor::Custom { eval, .. } => {
                let z = prec.c_re(&Float::with_val(prec.bits(), x));
                eval(&z, prec).real().clone()
            }
        }
    }

    /// Analytic continuation off the interval. For a power factor the branch
    /// is chosen so the continuation restricts to `|x - r|^p` on the interval:
    /// `(r - z)^p` when the root lies to the right of the interval and
    /// `(z - r)^p` when it lies to the left.
    pub fn continue_to(&self, z: &Complex, interval: Interval, a: &Float, prec: Prec) -> Complex {
        match self {
            AnalyticFactor::Constant(c) => prec.c_re(&Float::with_val(prec.bits(), c)),
            AnalyticFactor::PowerProduct(factors) => {
                let (lo, hi) = interval.endpoints(&Float::with_val(prec.bits(), a));
                let mut acc = prec.c(1.0, 0.0);
                for fac in factors {
                    let root = Float::with_val(prec.bits(), &fac.root);
                    let e = Float::with_val(prec.bits(), &fac.exponent);
                    let base = if root >= hi {
                        -(z - root).complete((prec.bits(), prec.bits()))
                    } else {
                        debug_assert!(root <= lo);
                        (z - root).complete((prec.bits(), prec.bits()))
                    };
                    acc *= cpow(&base, &e);
                }
                acc
            }
            AnalyticFactor::Custom { eval, .. } => eval(z, prec),
        }
    }

    fn validate(&self, interval: Interval, a: &Float) -> Result<()> {
        match self {
            AnalyticFactor::Constant(c) => {
                if !(c.clone() > 0) {
                    return Err(Error::InvalidParams("constant factor must be positive".into()));
                }
            }
            AnalyticFactor::PowerProduct(factors) => {
                let (lo, hi) = interval.endpoints(a);
                for fac in factors {
                    if fac.root > lo && fac.root < hi {
                        return Err(Error::InvalidParams(format!(
                            "power-factor root {} lies inside the open interval",
                            fac.root
                        )));
                    }
                }
            }
            AnalyticFactor::Custom { neighborhood, .. } => {
                if !(neighborhood.clone() > 0) {
                    return Err(Error::InvalidParams(
                        "custom factor needs a positive neighborhood half-width".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Full parameter set of the weight pair.
#[derive(Debug, Clone)]
pub struct WeightParams {
    pub a: Float,
    pub alpha: Float,
    pub beta: Float,
    pub gamma: Float,
    pub h1: AnalyticFactor,
    pub h2: AnalyticFactor,
}

impl WeightParams {
    pub fn new(
        a: Float,
        alpha: Float,
        beta: Float,
        gamma: Float,
        h1: AnalyticFactor,
        h2: AnalyticFactor,
    ) -> Result<Self> {
        let p = WeightParams { a, alpha, beta, gamma, h1, h2 };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor from `f64` parameters.
    pub fn from_f64(a: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(
            Float::with_val(PARAM_BITS, a),
            Float::with_val(PARAM_BITS, alpha),
            Float::with_val(PARAM_BITS, beta),
            Float::with_val(PARAM_BITS, gamma),
            AnalyticFactor::one(),
            AnalyticFactor::one(),
        )
    }

    /// The Jacobi-Angelesco system `|x-a|^alpha |x|^beta |x-1|^gamma` on both
    /// intervals: `h1 = |x-1|^gamma`, `h2 = |x-a|^alpha`.
    pub fn jacobi_angelesco(a: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(
            Float::with_val(PARAM_BITS, a),
            Float::with_val(PARAM_BITS, alpha),
            Float::with_val(PARAM_BITS, beta),
            Float::with_val(PARAM_BITS, gamma),
            AnalyticFactor::power(1.0, gamma),
            AnalyticFactor::power(a, alpha),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.clone() < 0) {
            return Err(Error::InvalidParams(format!("a = {} must be negative", self.a)));
        }
        for (name, e) in [("alpha", &self.alpha), ("beta", &self.beta), ("gamma", &self.gamma)] {
            if !(e.clone() > -1) {
                return Err(Error::InvalidParams(format!("{name} = {e} must exceed -1")));
            }
        }
        self.h1.validate(Interval::Left, &self.a)?;
        self.h2.validate(Interval::Right, &self.a)?;
        Ok(())
    }

    pub fn a_at(&self, prec: Prec) -> Float {
        Float::with_val(prec.bits(), &self.a)
    }

    /// Exponent pair `(at lo, at hi)` of the Jacobi kernel on the interval.
    pub fn kernel_exponents(&self, interval: Interval, prec: Prec) -> (Float, Float) {
        match interval {
            Interval::Left => (
                Float::with_val(prec.bits(), &self.alpha),
                Float::with_val(prec.bits(), &self.beta),
            ),
            Interval::Right => (
                Float::with_val(prec.bits(), &self.beta),
                Float::with_val(prec.bits(), &self.gamma),
            ),
        }
    }

    pub fn factor(&self, interval: Interval) -> &AnalyticFactor {
        match interval {
            Interval::Left => &self.h1,
            Interval::Right => &self.h2,
        }
    }
}

/// How an evaluation point relates to the interval endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndpointClass {
    Interior,
    /// Endpoint where the weight tends to 0 (positive local exponent).
    ZeroLimit,
    /// Endpoint where the weight blows up (negative local exponent).
    InfiniteLimit,
    /// Endpoint with exponent 0; the finite limit is returned.
    FiniteLimit,
}

/// Weight value plus endpoint classification.
#[derive(Debug, Clone)]
pub struct WeightValue {
    pub value: Float,
    pub class: EndpointClass,
}

/// Evaluate `w_j` at a real point of the closed interval.
///
/// Interior points give the strictly positive weight value. At an endpoint the
/// limit (0, `+inf`, or the finite limit) is returned with a classification
/// flag instead of an error.
pub fn eval_weight(interval: Interval, x: &Float, params: &WeightParams, prec: Prec) -> Result<WeightValue> {
    params.validate()?;
    let bits = prec.bits();
    let x = Float::with_val(bits, x);
    let a = params.a_at(prec);
    let (lo, hi) = interval.endpoints(&a);
    if x < lo || x > hi {
        return Err(Error::Domain(format!(
            "x = {x} outside [{lo}, {hi}] for interval {}",
            interval.index()
        )));
    }
    let (p, q) = params.kernel_exponents(interval, prec);
    if x == lo || x == hi {
        let e = if x == lo { p.clone() } else { q.clone() };
        let class = match e.partial_cmp(&0u32) {
            Some(std::cmp::Ordering::Greater) => EndpointClass::ZeroLimit,
            Some(std::cmp::Ordering::Less) => EndpointClass::InfiniteLimit,
            _ => EndpointClass::FiniteLimit,
        };
        let value = match class {
            EndpointClass::ZeroLimit => prec.zero(),
            EndpointClass::InfiniteLimit => {
                let mut v = prec.zero();
                v.assign_infinity();
                v
            }
            _ => {
                // other kernel factor times the analytic factor
                let other = if x == lo {
                    rpow(&(hi.clone() - &x), &q)
                } else {
                    rpow(&(x.clone() - &lo), &p)
                };
                other * params.factor(interval).eval(&x, prec)
            }
        };
        return Ok(WeightValue { value, class });
    }
    let d_lo = (x.clone() - &lo).abs();
    let d_hi = (hi.clone() - &x).abs();
    let value = rpow(&d_lo, &p) * rpow(&d_hi, &q) * params.factor(interval).eval(&x, prec);
    Ok(WeightValue { value, class: EndpointClass::Interior })
}

trait AssignInfinity {
    fn assign_infinity(&mut self);
}

impl AssignInfinity for Float {
    fn assign_infinity(&mut self) {
        use rug::Assign;
        self.assign(rug::float::Special::Infinity);
    }
}

/// Analytic continuation of `w_j` off the real interval.
///
/// Cuts: `(-inf, a] U [0, inf)` for the left weight and
/// `(-inf, 0] U [1, inf)` for the right weight.
pub fn continue_weight(interval: Interval, z: &Complex, params: &WeightParams, prec: Prec) -> Result<Complex> {
    params.validate()?;
    let bits = prec.bits();
    let z = Complex::with_val(bits, z);
    let a = params.a_at(prec);
    if z.imag().is_zero() {
        let x = z.real();
        let on_cut = match interval {
            Interval::Left => *x <= a || *x >= 0,
            Interval::Right => *x <= 0 || *x >= 1,
        };
        if on_cut {
            return Err(Error::BranchCut(format!(
                "z = {x} lies on a cut of w_{}",
                interval.index()
            )));
        }
    }
    let alpha = Float::with_val(bits, &params.alpha);
    let beta = Float::with_val(bits, &params.beta);
    let gamma = Float::with_val(bits, &params.gamma);
    let val = match interval {
        Interval::Left => {
            // (z-a)^alpha (-z)^beta h1(z)
            let za = z.clone() - &a;
            let mz = -z.clone();
            cpow(&za, &alpha) * cpow(&mz, &beta) * params.h1.continue_to(&z, interval, &a, prec)
        }
        Interval::Right => {
            // z^beta (1-z)^gamma h2(z)
            let omz = -(z.clone() - 1u32);
            cpow(&z, &beta) * cpow(&omz, &gamma) * params.h2.continue_to(&z, interval, &a, prec)
        }
    };
    Ok(val)
}

/// Double-scaling parameters.
#[derive(Debug, Clone)]
pub struct ScalingParams {
    pub tau: Float,
    pub n: u32,
}

impl ScalingParams {
    pub fn new(tau: f64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        Ok(ScalingParams { tau: Float::with_val(PARAM_BITS, tau), n })
    }

    /// The scaled endpoint `a_n = -1 + sqrt(2) tau / sqrt(n)`.
    ///
    /// Errors if the result is not negative.
    pub fn a_n(&self, prec: Prec) -> Result<Float> {
        let bits = prec.bits();
        let sqrt2 = Float::with_val(bits, 2).sqrt();
        let sqrtn = Float::with_val(bits, self.n).sqrt();
        let a = Float::with_val(bits, -1) + sqrt2 * Float::with_val(bits, &self.tau) / sqrtn;
        if !(a.clone() < 0) {
            return Err(Error::InvalidParams(format!(
                "a_n = {a} is not negative for tau = {}, n = {}",
                self.tau, self.n
            )));
        }
        Ok(a)
    }
}

// ---- serialization -------------------------------------------------------

fn float_to_string(x: &Float) -> String {
    if x.is_integer() && x.clone().abs() < 1e15 {
        let i = x.to_integer().unwrap();
        return i.to_string();
    }
    format!("{:e}", x)
}

fn float_from_string(s: &str) -> std::result::Result<Float, String> {
    Float::parse(s)
        .map(|v| Float::with_val(PARAM_BITS, v))
        .map_err(|e| format!("bad decimal string {s:?}: {e}"))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FactorRepr {
    Constant { value: String },
    Power { factors: Vec<FactorTermRepr> },
}

#[derive(Serialize, Deserialize)]
struct FactorTermRepr {
    root: String,
    exponent: String,
}

#[derive(Serialize, Deserialize)]
struct WeightParamsRepr {
    a: String,
    alpha: String,
    beta: String,
    gamma: String,
    h1: FactorRepr,
    h2: FactorRepr,
}

impl Serialize for AnalyticFactor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            AnalyticFactor::Constant(c) => FactorRepr::Constant { value: float_to_string(c) },
            AnalyticFactor::PowerProduct(fs) => FactorRepr::Power {
                factors: fs
                    .iter()
                    .map(|f| FactorTermRepr {
                        root: float_to_string(&f.root),
                        exponent: float_to_string(&f.exponent),
                    })
                    .collect(),
            },
            AnalyticFactor::Custom { .. } => {
                return Err(serde::ser::Error::custom("custom analytic factors do not serialize"))
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AnalyticFactor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FactorRepr::deserialize(d)?;
        Ok(match repr {
            FactorRepr::Constant { value } => {
                AnalyticFactor::Constant(float_from_string(&value).map_err(D::Error::custom)?)
            }
            FactorRepr::Power { factors } => AnalyticFactor::PowerProduct(
                factors
                    .into_iter()
                    .map(|f| {
                        Ok(PowerFactor {
                            root: float_from_string(&f.root).map_err(D::Error::custom)?,
                            exponent: float_from_string(&f.exponent).map_err(D::Error::custom)?,
                        })
                    })
                    .collect::<std::result::Result<_, D::Error>>()?,
            ),
        })
    }
}

impl Serialize for WeightParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = WeightParamsRepr {
            a: float_to_string(&self.a),
            alpha: float_to_string(&self.alpha),
            beta: float_to_string(&self.beta),
            gamma: float_to_string(&self.gamma),
            h1: serde_json::to_value(&self.h1)
                .and_then(serde_json::from_value)
                .map_err(serde::ser::Error::custom)?,
            h2: serde_json::to_value(&self.h2)
                .and_then(serde_json::from_value)
                .map_err(serde::ser::Error::custom)?,
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = WeightParamsRepr::deserialize(d)?;
        let h1 = serde_json::to_value(&repr.h1)
            .and_then(serde_json::from_value)
            .map_err(D::Error::custom)?;
        let h2 = serde_json::to_value(&repr.h2)
            .and_then(serde_json::from_value)
            .map_err(D::Error::custom)?;
        let params = WeightParams {
            a: float_from_string(&repr.a).map_err(D::Error::custom)?,
            alpha: float_from_string(&repr.alpha).map_err(D::Error::custom)?,
            beta: float_from_string(&repr.beta).map_err(D::Error::custom)?,
            gamma: float_from_string(&repr.gamma).map_err(D::Error::custom)?,
            h1,
            h2,
        };
        params.validate().map_err(D::Error::custom)?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prec::cabs;

    fn p50() -> Prec {
        Prec::digits(50)
    }

    #[test]
    fn constant_weight_is_one() {
        let w = WeightParams::from_f64(-1.0, 0.0, 0.0, 0.0).unwrap();
        let v = eval_weight(Interval::Right, &p50().f(0.5), &w, p50()).unwrap();
        assert!((v.value - 1u32).abs() < p50().eps());
        assert_eq!(v.class, EndpointClass::Interior);
    }

    #[test]
    fn beta_power_at_half() {
        // j=1, x=-0.5, a=-1, beta=1: (x-a)^0 |x|^1 = 0.5
        let w = WeightParams::from_f64(-1.0, 0.0, 1.0, 0.0).unwrap();
        let v = eval_weight(Interval::Left, &p50().f(-0.5), &w, p50()).unwrap();
        assert!((v.value - p50().f(0.5)).abs() < p50().eps());
    }

    #[test]
    fn sqrt_power_at_quarter() {
        // j=2, x=0.25, beta=1/2: x^(1/2) = 0.5
        let w = WeightParams::from_f64(-1.0, 0.0, 0.5, 0.0).unwrap();
        let v = eval_weight(Interval::Right, &p50().f(0.25), &w, p50()).unwrap();
        assert!((v.value - p50().f(0.5)).abs() < p50().eps());
    }

    #[test]
    fn continuation_restricts_to_real_values() {
        let w = WeightParams::jacobi_angelesco(-1.0, 0.25, 0.5, 0.75).unwrap();
        let x = p50().f(0.5);
        let real = eval_weight(Interval::Right, &x, &w, p50()).unwrap().value;
        let cont = continue_weight(Interval::Right, &p50().c(0.5, 0.0), &w, p50()).unwrap();
        assert!(cabs(&(cont - real)) < p50().eps());
    }

    #[test]
    fn continuation_linear_case() {
        // j=1, z=-0.5+0.1i, a=-1, alpha=1: (z-a) = 0.5+0.1i
        let w = WeightParams::from_f64(-1.0, 1.0, 0.0, 0.0).unwrap();
        let z = p50().c(-0.5, 0.1);
        let v = continue_weight(Interval::Left, &z, &w, p50()).unwrap();
        assert!(cabs(&(v - p50().c(0.5, 0.1))) < p50().eps());
    }

    #[test]
    fn cut_rejected() {
        let w = WeightParams::from_f64(-1.0, 0.0, 0.5, 0.0).unwrap();
        let err = continue_weight(Interval::Right, &p50().c(-0.25, 0.0), &w, p50());
        assert!(matches!(err, Err(Error::BranchCut(_))));
    }

    #[test]
    fn endpoint_classification() {
        let w = WeightParams::from_f64(-1.0, 0.5, -0.5, 0.0).unwrap();
        let at_a = eval_weight(Interval::Left, &p50().f(-1.0), &w, p50()).unwrap();
        assert_eq!(at_a.class, EndpointClass::ZeroLimit);
        let at_0 = eval_weight(Interval::Left, &p50().f(0.0), &w, p50()).unwrap();
        assert_eq!(at_0.class, EndpointClass::InfiniteLimit);
        assert!(at_0.value.is_infinite());
        let at_1 = eval_weight(Interval::Right, &p50().f(1.0), &w, p50()).unwrap();
        assert_eq!(at_1.class, EndpointClass::FiniteLimit);
    }

    #[test]
    fn scaled_endpoint_values() {
        let p = p50();
        let s = ScalingParams::new(0.0, 100).unwrap();
        assert!((s.a_n(p).unwrap() + 1u32).abs() < p.eps());
        let s = ScalingParams::new(1.0, 8).unwrap();
        // -1 + sqrt(2)/(2 sqrt(2)) = -1/2
        assert!((s.a_n(p).unwrap() + p.f(0.5)).abs() < p.eps());
        let s = ScalingParams::new(1.0, 2).unwrap();
        assert!(s.a_n(p).is_err());
    }

    #[test]
    fn params_json_round_trip() {
        let w = WeightParams::jacobi_angelesco(-1.5, 0.25, -0.5, 0.75).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: WeightParams = serde_json::from_str(&json).unwrap();
        assert_eq!(w.a, back.a);
        assert_eq!(w.beta, back.beta);
        let x = p50().f(0.3);
        let v1 = eval_weight(Interval::Right, &x, &w, p50()).unwrap().value;
        let v2 = eval_weight(Interval::Right, &x, &back, p50()).unwrap().value;
        assert_eq!(v1, v2);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(WeightParams::from_f64(0.5, 0.0, 0.0, 0.0).is_err());
        assert!(WeightParams::from_f64(-1.0, -1.5, 0.0, 0.0).is_err());
    }
}
