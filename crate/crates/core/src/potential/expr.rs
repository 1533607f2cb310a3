use alloc::boxed::Box;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Cos,
    Sin,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Cos => "cos",
            Func::Sin => "sin",
            Func::Exp => "exp",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Func> {
        match name {
            "cos" => Some(Func::Cos),
            "sin" => Some(Func::Sin),
            "exp" => Some(Func::Exp),
            _ => None,
        }
    }
}

/// Expression tree for a potential `V(x)`.
///
/// An imaginary literal such as `0.5i` is stored as `Real(0.5) * ImagUnit`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Real(f64),
    ImagUnit,
    Pi,
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_at(Complex64::new(x, 0.0))
    }

    /// Evaluates with the variable bound to a complex value.
    pub fn eval_at(&self, x: Complex64) -> Complex64 {
        match self {
            Expr::Real(v) => Complex64::new(*v, 0.0),
            Expr::ImagUnit => Complex64::i(),
            Expr::Pi => Complex64::new(PI, 0.0),
            Expr::Var => x,
            Expr::Neg(e) => -e.eval_at(x),
            Expr::Binary(op, l, r) => {
                let a = l.eval_at(x);
                let b = r.eval_at(x);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => pow(a, b),
                }
            }
            Expr::Call(f, e) => {
                let a = e.eval_at(x);
                match f {
                    Func::Cos => a.cos(),
                    Func::Sin => a.sin(),
                    Func::Exp => a.exp(),
                }
            }
        }
    }

    /// Replaces every occurrence of the variable with `with`.
    pub fn substitute(&self, with: &Expr) -> Expr {
        match self {
            Expr::Var => with.clone(),
            Expr::Real(_) | Expr::ImagUnit | Expr::Pi => self.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute(with))),
            Expr::Binary(op, l, r) => Expr::binary(*op, l.substitute(with), r.substitute(with)),
            Expr::Call(f, e) => Expr::call(*f, e.substitute(with)),
        }
    }
}

fn pow(base: Complex64, exponent: Complex64) -> Complex64 {
    if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= 1024.0 {
        return base.powi(exponent.re as i32);
    }
    if base == Complex64::new(0.0, 0.0) {
        return if exponent.re > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        };
    }
    base.powc(exponent)
}

/// Fully parenthesised form; parsing it back yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Real(v) => write!(f, "{v}"),
            Expr::ImagUnit => f.write_str("i"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}
