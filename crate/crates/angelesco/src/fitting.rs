//! Least-squares helpers for convergence-rate fits and Richardson
//! extrapolation of boundary values.

use rug::{Complex, Float};

/// Slope of the least-squares line through `(ln x, ln y)`.
///
/// For a model `y = C x^p` the returned value estimates `p`.
pub fn log_log_slope(points: &[(Float, Float)]) -> Float {
    assert!(points.len() >= 2);
    let bits = points[0].0.prec();
    let n = Float::with_val(bits, points.len() as u32);
    let mut sx = Float::new(bits);
    let mut sy = Float::new(bits);
    let mut sxx = Float::new(bits);
    let mut sxy = Float::new(bits);
    for (x, y) in points {
        let lx = x.clone().ln();
        let ly = y.clone().ln();
        sx += &lx;
        sy += &ly;
        sxx += lx.clone().square();
        sxy += lx * ly;
    }
    (n.clone() * sxy - sx.clone() * &sy) / (n * sxx - sx.clone().square())
}

/// Richardson extrapolation to `eps -> 0` of samples `(eps_k, f(eps_k))`,
/// assuming an expansion `f(eps) = f0 + c1 eps + c2 eps^2 + ...`.
///
/// Neville elimination of the powers `eps, eps^2, ...` in order.
pub fn richardson_zero(samples: &[(Float, Complex)]) -> Complex {
    let n = samples.len();
    assert!(n >= 1);
    let bits = samples[0].1.prec().0;
    let _ = bits;
    let mut table: Vec<Complex> = samples.iter().map(|(_, v)| v.clone()).collect();
    let eps: Vec<Float> = samples.iter().map(|(e, _)| e.clone()).collect();
    for order in 1..n {
        for i in 0..n - order {
            let num = table[i + 1].clone() * &eps[i] - table[i].clone() * &eps[i + order];
            let den = eps[i].clone() - &eps[i + order];
            table[i] = num / den;
        }
        table.truncate(n - order);
    }
    table[0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prec::Prec;

    #[test]
    fn slope_recovers_power() {
        let p = Prec::digits(40);
        let pts: Vec<(Float, Float)> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&x| {
                let xf = p.f(x);
                let y = crate::prec::rpow(&xf, &p.f(1.5)) * 3u32;
                (xf, y)
            })
            .collect();
        let s = log_log_slope(&pts);
        assert!((s - p.f(1.5)).abs() < p.f(1e-30));
    }

    #[test]
    fn richardson_removes_linear_and_quadratic_error() {
        let p = Prec::digits(40);
        // f(eps) = 7 + 3 eps - 2 eps^2 + eps^3
        let f = |e: f64| 7.0 + 3.0 * e - 2.0 * e * e + e * e * e;
        let samples: Vec<(Float, Complex)> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| (p.f(e), p.c(f(e), 0.0)))
            .collect();
        let v = richardson_zero(&samples);
        let err = (v.real().clone() - 7u32).abs();
        assert!(err < p.f(1e-8), "err = {err}");
    }
}
