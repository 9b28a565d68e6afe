use alloc::boxed::Box;

use num_complex::Complex64;

use super::{BinOp, Expr, Func};

fn as_const(e: &Expr) -> Option<Complex64> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

fn is_zero(e: &Expr) -> bool {
    as_const(e) == Some(Complex64::new(0.0, 0.0))
}

fn is_one(e: &Expr) -> bool {
    as_const(e) == Some(Complex64::new(1.0, 0.0))
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::Binary(op, Box::new(a), Box::new(b))
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        _ if is_zero(&a) => b,
        _ if is_zero(&b) => a,
        _ => bin(BinOp::Add, a, b),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        _ if is_zero(&b) => a,
        _ if is_zero(&a) => neg(b),
        _ => bin(BinOp::Sub, a, b),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        _ if is_zero(&a) || is_zero(&b) => Expr::constant(0.0),
        _ if is_one(&a) => b,
        _ if is_one(&b) => a,
        _ => bin(BinOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return Expr::constant(0.0);
    }
    if is_one(&b) {
        return a;
    }
    bin(BinOp::Div, a, b)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

fn pow(a: Expr, b: Expr) -> Expr {
    if let Some(n) = as_const(&b) {
        if n == Complex64::new(1.0, 0.0) {
            return a;
        }
        if n == Complex64::new(0.0, 0.0) {
            return Expr::constant(1.0);
        }
    }
    bin(BinOp::Pow, a, b)
}

/// Symbolic derivative with respect to variable `var`. Simplification is
/// limited to constant folding and the 0/1 identities.
pub fn differentiate_wrt(e: &Expr, var: usize) -> Expr {
    match e {
        Expr::Const(_) => Expr::constant(0.0),
        Expr::Var(k) => Expr::constant(if *k == var { 1.0 } else { 0.0 }),
        Expr::Neg(a) => neg(differentiate_wrt(a, var)),
        Expr::Call(f, a) => {
            let da = differentiate_wrt(a, var);
            if is_zero(&da) {
                return Expr::constant(0.0);
            }
            let a = (**a).clone();
            let outer = match f {
                Func::Exp => call(Func::Exp, a),
                Func::Log => div(Expr::constant(1.0), a),
                Func::Sin => call(Func::Cos, a),
                Func::Cos => neg(call(Func::Sin, a)),
                Func::Sinh => call(Func::Cosh, a),
                Func::Cosh => call(Func::Sinh, a),
            };
            mul(outer, da)
        }
        Expr::Binary(op, a, b) => {
            let da = differentiate_wrt(a, var);
            let db = differentiate_wrt(b, var);
            let (a, b) = ((**a).clone(), (**b).clone());
            match op {
                BinOp::Add => add(da, db),
                BinOp::Sub => sub(da, db),
                BinOp::Mul => add(mul(da, b.clone()), mul(a, db)),
                BinOp::Div => {
                    if is_zero(&db) {
                        div(da, b)
                    } else {
                        div(sub(mul(da, b.clone()), mul(a, db)), pow(b, Expr::constant(2.0)))
                    }
                }
                BinOp::Pow if b.is_constant() => {
                    // d(a^c) = c a^(c-1) a'
                    let reduced = sub(b.clone(), Expr::constant(1.0));
                    mul(mul(b, pow(a, reduced)), da)
                }
                BinOp::Pow => {
                    // d(a^b) = a^b (b' log a + b a'/a)
                    let whole = pow(a.clone(), b.clone());
                    let t1 = mul(db, call(Func::Log, a.clone()));
                    let t2 = div(mul(b, da), a);
                    mul(whole, add(t1, t2))
                }
            }
        }
    }
}

/// `d/dz` of a one-variable expression.
pub fn differentiate(ast: &Expr) -> Expr {
    differentiate_wrt(ast, 0)
}
