use num_complex::Complex64;
// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use super::{BinOp, Expr, Func};
use crate::{Error, Result};

const INTEGER_EXPONENT_LIMIT: f64 = 1_048_576.0;

fn finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Overflow)
    }
}

fn finite_real(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Overflow)
    }
}

fn integer_exponent(b: Complex64) -> Option<i64> {
    (b.im == 0.0 && b.re == b.re.round() && b.re.abs() <= INTEGER_EXPONENT_LIMIT).then_some(b.re as i64)
}

fn powi(mut base: Complex64, n: i64) -> Result<Complex64> {
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if base == Complex64::new(0.0, 0.0) {
        return if n > 0 { Ok(base) } else { Err(Error::DivisionByZero) };
    }
    let mut k = n.unsigned_abs();
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        if k > 0 {
            base *= base;
        }
    }
    if n < 0 {
        acc = Complex64::new(1.0, 0.0) / acc;
    }
    finite(acc)
}

fn pow(a: Complex64, b: Complex64) -> Result<Complex64> {
    if let Some(n) = integer_exponent(b) {
        return powi(a, n);
    }
    if a == Complex64::new(0.0, 0.0) {
        return if b.re > 0.0 { Ok(a) } else { Err(Error::Domain("0 raised to a power with non-positive real part")) };
    }
    finite((b * a.ln()).exp())
}

fn apply(func: Func, a: Complex64) -> Result<Complex64> {
    let r = match func {
        Func::Exp => a.exp(),
        Func::Log => {
            if a == Complex64::new(0.0, 0.0) {
                return Err(Error::Domain("log(0)"));
            }
            a.ln()
        }
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Sinh => a.sinh(),
        Func::Cosh => a.cosh(),
    };
    finite(r)
}

fn eval_vars(e: &Expr, vars: &[Complex64]) -> Result<Complex64> {
    match e {
        Expr::Const(c) => Ok(*c),
        Expr::Var(k) => vars.get(*k).copied().ok_or(Error::InvalidArgument("variable index out of range")),
        Expr::Neg(a) => Ok(-eval_vars(a, vars)?),
        Expr::Call(f, a) => apply(*f, eval_vars(a, vars)?),
        Expr::Binary(op, a, b) => {
            let x = eval_vars(a, vars)?;
            let y = eval_vars(b, vars)?;
            match op {
                BinOp::Add => finite(x + y),
                BinOp::Sub => finite(x - y),
                BinOp::Mul => finite(x * y),
                BinOp::Div => {
                    if y == Complex64::new(0.0, 0.0) {
                        Err(Error::DivisionByZero)
                    } else {
                        finite(x / y)
                    }
                }
                BinOp::Pow => pow(x, y),
            }
        }
    }
}

/// Value of a one-variable expression at `w`. Principal branch for `log` and
/// non-integer powers; failures are errors, never NaN.
pub fn eval(ast: &Expr, w: Complex64) -> Result<Complex64> {
    eval_vars(ast, &[w])
}

/// Real evaluation of a `u`, `v` expression. Leaves the reals (log of a
/// non-positive number, fractional power of a negative number) as domain errors.
pub fn eval_real(ast: &Expr, vars: &[f64]) -> Result<f64> {
    match ast {
        Expr::Const(c) if c.im == 0.0 => Ok(c.re),
        Expr::Const(_) => Err(Error::Domain("complex constant in a real expression")),
        Expr::Var(k) => vars.get(*k).copied().ok_or(Error::InvalidArgument("variable index out of range")),
        Expr::Neg(a) => Ok(-eval_real(a, vars)?),
        Expr::Call(f, a) => {
            let x = eval_real(a, vars)?;
            let r = match f {
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(Error::Domain("log of a non-positive real"));
                    }
                    x.ln()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
            };
            finite_real(r)
        }
        Expr::Binary(op, a, b) => {
            let x = eval_real(a, vars)?;
            let y = eval_real(b, vars)?;
            match op {
                BinOp::Add => finite_real(x + y),
                BinOp::Sub => finite_real(x - y),
                BinOp::Mul => finite_real(x * y),
                BinOp::Div if y == 0.0 => Err(Error::DivisionByZero),
                BinOp::Div => finite_real(x / y),
                BinOp::Pow => match integer_exponent(Complex64::new(y, 0.0)) {
                    Some(n) => Ok(powi(Complex64::new(x, 0.0), n)?.re),
                    None if x > 0.0 => finite_real(x.powf(y)),
                    None if x == 0.0 && y > 0.0 => Ok(0.0),
                    None => Err(Error::Domain("fractional power of a non-positive real")),
                },
            }
        }
    }
}

/// `|x_u − y_v| + |x_v + y_u|` for `x + iy = ast(u + iv)`, by central differences.
///
/// Small for anything holomorphic at `w`; large when the stencil straddles a
/// branch cut.
pub fn cauchy_riemann_residual(ast: &Expr, w: Complex64, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive"));
    }
    let du = Complex64::new(step, 0.0);
    let dv = Complex64::new(0.0, step);
    let fu = (eval(ast, w + du)? - eval(ast, w - du)?) / (2.0 * step);
    let fv = (eval(ast, w + dv)? - eval(ast, w - dv)?) / (2.0 * step);
    let r = (fu.re - fv.im).abs() + (fv.re + fu.im).abs();
    finite_real(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxparse::{parse_expr, parse_real};
    use core::f64::consts::PI;

    fn at(src: &str, w: Complex64) -> Result<Complex64> {
        eval(&parse_expr(src).unwrap(), w)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn i_squared_plus_one() {
        let r = at("z^2 + 1", c(0.0, 1.0)).unwrap();
        assert_eq!(r, c(0.0, 0.0));
    }

    #[test]
    fn euler_identity() {
        let r = at("exp(z)", c(0.0, PI)).unwrap();
        assert!((r - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cube_and_principal_log() {
        assert_eq!(at("z^3", c(2.0, 0.0)).unwrap(), c(8.0, 0.0));
        let l = at("log(z)", c(-1.0, 0.0)).unwrap();
        assert!((l - c(0.0, PI)).norm() < 1e-15);
    }

    #[test]
    fn explicit_failures() {
        assert_eq!(at("1/z", c(0.0, 0.0)), Err(Error::DivisionByZero));
        assert!(matches!(at("log(z)", c(0.0, 0.0)), Err(Error::Domain(_))));
        assert_eq!(at("exp(z)", c(800.0, 0.0)), Err(Error::Overflow));
        assert_eq!(at("z^-2", c(0.0, 0.0)), Err(Error::DivisionByZero));
        assert_eq!(at("z^0.5", c(0.0, 0.0)), Ok(c(0.0, 0.0)));
    }

    #[test]
    fn fractional_power_is_principal() {
        let r = at("z^0.5", c(-4.0, 0.0)).unwrap();
        assert!((r - c(0.0, 2.0)).norm() < 1e-14);
        let r = at("z^i", c(0.0, 1.0)).unwrap();
        assert!((r - c((-PI / 2.0).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn real_grammar_evaluation() {
        let e = parse_real("u^3 - 3*u*v^2").unwrap();
        assert_eq!(eval_real(&e, &[2.0, 1.0]).unwrap(), 2.0);
        assert!(eval_real(&parse_real("log(u)").unwrap(), &[-1.0, 0.0]).is_err());
        assert!(eval_real(&parse_real("u^0.5").unwrap(), &[-1.0, 0.0]).is_err());
        assert_eq!(eval_real(&parse_real("u^-1").unwrap(), &[-2.0, 0.0]).unwrap(), -0.5);
    }

    #[test]
    fn cauchy_riemann_small_for_entire_functions() {
        let r = cauchy_riemann_residual(&parse_expr("z^2").unwrap(), c(1.0, 1.0), 1e-4).unwrap();
        assert!(r < 1e-6, "{r}");
        let r = cauchy_riemann_residual(&parse_expr("exp(z)").unwrap(), c(0.3, -0.7), 1e-4).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn cauchy_riemann_flags_branch_cut() {
        let ast = parse_expr("log(z)").unwrap();
        let w = c(-1.0, 0.001);
        let step = 1e-2;
        let r = cauchy_riemann_residual(&ast, w, step).unwrap();
        // Oracle: the jump of Im log across the stencil dominates y_v.
        let above = eval(&ast, w + c(0.0, step)).unwrap();
        let below = eval(&ast, w - c(0.0, step)).unwrap();
        let jump_term = ((above.im - below.im) / (2.0 * step)).abs();
        assert!(r > 100.0, "{r}");
        assert!((r - jump_term).abs() / jump_term < 0.01, "{r} vs {jump_term}");
    }
}
