//! Holomorphic expressions of one complex variable.
//!
//! The grammar only has holomorphic primitives (no conjugation, no real or
//! imaginary parts), so every expression that parses is holomorphic wherever
//! it evaluates. `log` and non-integer powers use the principal branch; callers
//! pick domains that avoid the cut along the negative real axis.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right-associative, tighter than unary '-'
//! primary := number | ident | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! The same grammar is instantiated over two real variables `u`, `v` (without
//! `i`) for graph functions and prescribed forms, see [`Grammar::REAL_UV`].

mod diff;
mod eval;
mod parse;

use alloc::boxed::Box;
use core::fmt;

use num_complex::Complex64;

pub use diff::{differentiate, differentiate_wrt};
pub use eval::{cauchy_riemann_residual, eval, eval_real};
pub use parse::{parse_expr, parse_real, parse_with};

/// Elementary holomorphic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Parsed expression tree. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    /// Index into the grammar's variable list (`z` is 0; `u`, `v` are 0, 1).
    Var(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Which variables and constants an expression may mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grammar {
    pub vars: &'static [&'static str],
    /// Whether the imaginary unit `i` is available.
    pub complex: bool,
}

impl Grammar {
    /// One complex variable `z`, constants `i`, `pi`, `e`.
    pub const COMPLEX: Grammar = Grammar { vars: &["z"], complex: true };
    /// Two real variables `u`, `v`, constants `pi`, `e`.
    pub const REAL_UV: Grammar = Grammar { vars: &["u", "v"], complex: false };
}

impl Expr {
    pub fn constant(re: f64) -> Expr {
        Expr::Const(Complex64::new(re, 0.0))
    }

    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    /// True when no variable occurs in the tree.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Renders with the variable names of `grammar`.
    pub fn display<'a>(&'a self, grammar: &'a Grammar) -> impl fmt::Display + 'a {
        Printer { expr: self, grammar }
    }

    /// `c · self`, the form used for rotated Weierstrass data.
    pub fn scaled(&self, c: Complex64) -> Expr {
        diff::mul(Expr::Const(c), self.clone())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&Grammar::COMPLEX))
    }
}

struct Printer<'a> {
    expr: &'a Expr,
    grammar: &'a Grammar,
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.grammar, 0)
    }
}

// Binding strength of the node itself when printed bare.
fn strength(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) if (c.im == 0.0 && c.re >= 0.0) || (c.re == 0.0 && c.im == 1.0) => 5,
        Expr::Const(_) => 0,
        Expr::Var(_) | Expr::Call(..) => 5,
        Expr::Neg(_) => 3,
        Expr::Binary(op, ..) => op.precedence(),
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    match (c.re, c.im) {
        (re, 0.0) => write!(f, "{re:?}"),
        (0.0, 1.0) => write!(f, "i"),
        (0.0, im) => write!(f, "{im:?}*i"),
        (re, im) => write!(f, "{re:?}+{im:?}*i"),
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, g: &Grammar, min: u8) -> fmt::Result {
    let paren = strength(e) < min;
    if paren {
        write!(f, "(")?;
    }
    match e {
        Expr::Const(c) => write_const(f, *c)?,
        Expr::Var(k) => write!(f, "{}", g.vars.get(*k).copied().unwrap_or("?"))?,
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_expr(f, a, g, 3)?;
        }
        Expr::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(f, a, g, 0)?;
            write!(f, ")")?;
        }
        Expr::Binary(op, a, b) => {
            let p = op.precedence();
            // Left-associative except `^`; a `^` base binds as a primary.
            let (lmin, rmin) = match op {
                BinOp::Pow => (5, 3),
                _ => (p, p + 1),
            };
            write_expr(f, a, g, lmin)?;
            write!(f, "{}", op.symbol())?;
            write_expr(f, b, g, rmin)?;
        }
    }
    if paren {
        write!(f, ")")?;
    }
    Ok(())
}
