//! Dense linear solves for the moment systems: partial-pivot LU over
//! `rug::Float` and exact Gaussian elimination over `rug::Rational`.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::prec::Prec;

/// Solve `A x = b` in place by LU with partial pivoting.
///
/// Returns the solution together with the max-norm residual of the original
/// system, recomputed against saved copies of `A` and `b`.
pub fn solve_float(a: &[Vec<Float>], b: &[Float], prec: Prec) -> Result<(Vec<Float>, Float)> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    let bits = prec.bits();
    let mut m: Vec<Vec<Float>> = a.to_vec();
    let mut rhs: Vec<Float> = b.to_vec();

    for col in 0..n {
        // pivot
        let mut piv = col;
        let mut best = m[col][col].clone().abs();
        for row in col + 1..n {
            let mag = m[row][col].clone().abs();
            if mag > best {
                best = mag;
                piv = row;
            }
        }
        if best.is_zero() {
            return Err(Error::Conditioning {
                digit_loss: prec.decimal_digits(),
                context: format!("singular pivot at column {col}"),
            });
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let factor = m[row][col].clone() / &m[col][col];
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let t = factor.clone() * &m[col][k];
                m[row][k] -= t;
            }
            let t = factor * &rhs[col];
            rhs[row] -= t;
        }
    }
    // back substitution
    let mut x = vec![Float::new(bits); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..n {
            acc -= m[row][k].clone() * &x[k];
        }
        x[row] = acc / &m[row][row];
    }
    // residual against the original system
    let mut res = Float::new(bits);
    for row in 0..n {
        let mut acc = -b[row].clone();
        for k in 0..n {
            acc += a[row][k].clone() * &x[k];
        }
        res = res.max(&acc.abs());
    }
    Ok((x, res))
}

/// Exact solve of `A x = b` over the rationals.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut rhs: Vec<Rational> = b.to_vec();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0).ok_or_else(|| Error::Conditioning {
            digit_loss: 0,
            context: format!("rational system singular at column {col}"),
        })?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            if m[row][col] == 0 {
                continue;
            }
            let factor = m[row][col].clone() / m[col][col].clone();
            for k in col..n {
                let t = factor.clone() * m[col][k].clone();
                m[row][k] -= t;
            }
            let t = factor * rhs[col].clone();
            rhs[row] -= t;
        }
    }
    let mut x = vec![Rational::new(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..n {
            acc -= m[row][k].clone() * x[k].clone();
        }
        x[row] = acc / m[row][row].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_solve_small_system() {
        let p = Prec::digits(50);
        let a = vec![
            vec![p.f(2.0), p.f(1.0)],
            vec![p.f(1.0), p.f(3.0)],
        ];
        let b = vec![p.f(5.0), p.f(10.0)];
        let (x, res) = solve_float(&a, &b, p).unwrap();
        assert!((x[0].clone() - 1u32).abs() < p.eps());
        assert!((x[1].clone() - 3u32).abs() < p.eps());
        assert!(res < p.eps());
    }

    #[test]
    fn rational_solve_exact() {
        let a = vec![
            vec![Rational::from((1, 2)), Rational::from((1, 3))],
            vec![Rational::from((1, 3)), Rational::from((1, 4))],
        ];
        let b = vec![Rational::from(1), Rational::from(0)];
        let x = solve_rational(&a, &b).unwrap();
        // inverse of the 2x2 Hilbert-like block
        assert_eq!(x[0], Rational::from(18));
        assert_eq!(x[1], Rational::from(-24));
    }
}
