//! Working-precision context shared by all numerical routines.
//!
//! Every operation in this crate takes a target in decimal digits and works
//! internally in binary precision with a small guard. Values are `rug::Float`
//! and `rug::Complex`; arithmetic on an existing value keeps its precision,
//! so constructing inputs through a [`Prec`] keeps a computation coherent.

use rug::ops::CompleteRound;
use rug::{Complex, Float};

/// Bits of headroom added on top of the requested decimal digits.
const GUARD_BITS: u32 = 48;

/// Binary working precision derived from a decimal-digit target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prec {
    bits: u32,
    digits: u32,
}

impl Prec {
    /// Context for `digits` significant decimal digits.
    pub fn digits(digits: u32) -> Self {
        let digits = digits.max(10);
        // log2(10) = 3.3219...
        let bits = (digits as f64 * 3.3219280948873626).ceil() as u32 + GUARD_BITS;
        Prec { bits, digits }
    }

    /// Same target with `extra` additional decimal digits.
    pub fn with_extra(self, extra: u32) -> Self {
        Prec::digits(self.digits + extra)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn decimal_digits(self) -> u32 {
        self.digits
    }

    /// 10^(-digits), the canonical tolerance of this context.
    pub fn eps(self) -> Float {
        let mut e = Float::with_val(self.bits, 10);
        e.pow_assign_int(-(self.digits as i32));
        e
    }

    pub fn f(self, x: f64) -> Float {
        Float::with_val(self.bits, x)
    }

    pub fn int(self, n: i64) -> Float {
        Float::with_val(self.bits, n)
    }

    pub fn zero(self) -> Float {
        Float::new(self.bits)
    }

    /// Parse a decimal string at this precision.
    pub fn parse(self, s: &str) -> Option<Float> {
        Float::parse(s).ok().map(|v| Float::with_val(self.bits, v))
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits, rug::float::Constant::Pi)
    }

    pub fn c(self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits, (re, im))
    }

    pub fn c_zero(self) -> Complex {
        Complex::new(self.bits)
    }

    pub fn c_from(self, re: Float, im: Float) -> Complex {
        Complex::with_val(self.bits, (re, im))
    }

    pub fn c_re(self, re: &Float) -> Complex {
        Complex::with_val(self.bits, (re, &Float::new(self.bits)))
    }

    /// The imaginary unit.
    pub fn i(self) -> Complex {
        Complex::with_val(self.bits, (0, 1))
    }

    /// Primitive cube root of unity `exp(2 pi i / 3)`.
    pub fn omega(self) -> Complex {
        let third = Float::with_val(self.bits, 2) * self.pi() / 3u32;
        let (s, c) = third.sin_cos(Float::new(self.bits));
        Complex::with_val(self.bits, (c, s))
    }

    /// `exp(i phi)` for real `phi`.
    pub fn cis(self, phi: &Float) -> Complex {
        let (s, c) = phi.clone().sin_cos(Float::new(self.bits));
        Complex::with_val(self.bits, (c, s))
    }
}

trait PowAssignInt {
    fn pow_assign_int(&mut self, e: i32);
}

impl PowAssignInt for Float {
    fn pow_assign_int(&mut self, e: i32) {
        use rug::ops::Pow;
        let p = self.clone().pow(e);
        *self = p;
    }
}

/// Absolute value of a complex number at its own precision.
pub fn cabs(z: &Complex) -> Float {
    z.clone().abs().into_real_imag().0
}

/// Real principal power `base^e` computed as `exp(e log base)`; `base > 0`.
pub fn rpow(base: &Float, e: &Float) -> Float {
    if base.is_zero() {
        return Float::new(base.prec());
    }
    let l = base.ln_ref().complete(base.prec());
    (l * e).exp()
}

/// Complex principal power `z^e` with the cut on the negative real axis.
pub fn cpow(z: &Complex, e: &Float) -> Complex {
    let prec = z.prec();
    if z.is_zero() {
        return Complex::new(prec);
    }
    let l = z.ln_ref().complete(prec);
    (l * e).exp()
}

/// Real cube root preserving sign.
pub fn cbrt_real(x: &Float) -> Float {
    x.cbrt_ref().complete(x.prec())
}

/// Relative distance `|x - y| / max(|x|, |y|, 1)`.
pub fn rel_diff(x: &Complex, y: &Complex) -> Float {
    let d = (x - y).complete(x.prec());
    let scale = cabs(x).max(&cabs(y)).max(&Float::with_val(x.real().prec(), 1));
    cabs(&d) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_to_bits_has_headroom() {
        let p = Prec::digits(50);
        assert!(p.bits() > 166);
        let x = p.f(2.0).sqrt();
        let sq = x.clone() * &x - 2u32;
        assert!(sq.abs() < p.eps());
    }

    #[test]
    fn omega_is_cube_root_of_unity() {
        let p = Prec::digits(60);
        let w = p.omega();
        let w3 = w.clone() * w.clone() * w - 1u32;
        assert!(cabs(&w3) < p.eps());
    }

    #[test]
    fn principal_power_matches_known_value() {
        let p = Prec::digits(40);
        let z = p.c(-1.0, 0.0);
        // (-1)^(1/2) on the principal branch is +i
        let r = cpow(&z, &p.f(0.5));
        assert!(cabs(&(r - p.i())) < p.eps());
    }
}
