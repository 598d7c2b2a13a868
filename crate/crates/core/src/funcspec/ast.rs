//! Expression trees for scalar functions of several variables.
//!
//! The grammar (see the parser) covers sums, products, integer powers, and
//! the atoms `abs`, `sin`, `cos`, `exp`, `max`, and `norm2sq()`. Literals
//! are nonnegative; minus is structural (`Sub`), so the canonical printer
//! inverts the parser exactly.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// 1-based variable index `x1 .. x9`.
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Integer power of a factor.
    Pow(Box<Expr>, u32),
    Abs(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Max(Vec<Expr>),
    /// `Σ xᵢ²` over all input coordinates.
    Norm2Sq,
}

impl Expr {
    /// Largest variable index appearing in the expression (0 if none).
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Norm2Sq => 0,
            Expr::Var(i) => *i,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Pow(a, _) | Expr::Abs(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.max_var()
            }
            Expr::Max(args) => args.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    /// Raw evaluation; NaN anywhere is an error, `±∞` is passed through for
    /// the caller to classify.
    pub fn eval_raw(&self, x: &[f64]) -> Result<f64> {
        let v = match self {
            Expr::Num(c) => *c,
            Expr::Var(i) => *x.get(i - 1).ok_or(Error::DimensionMismatch {
                expected: *i,
                got: x.len(),
            })?,
            Expr::Add(a, b) => a.eval_raw(x)? + b.eval_raw(x)?,
            Expr::Sub(a, b) => a.eval_raw(x)? - b.eval_raw(x)?,
            Expr::Mul(a, b) => a.eval_raw(x)? * b.eval_raw(x)?,
            Expr::Pow(a, n) => a.eval_raw(x)?.powi(*n as i32),
            Expr::Abs(a) => a.eval_raw(x)?.abs(),
            Expr::Sin(a) => a.eval_raw(x)?.sin(),
            Expr::Cos(a) => a.eval_raw(x)?.cos(),
            Expr::Exp(a) => a.eval_raw(x)?.exp(),
            Expr::Max(args) => {
                let mut m = f64::NEG_INFINITY;
                for a in args {
                    m = m.max(a.eval_raw(x)?);
                }
                m
            }
            Expr::Norm2Sq => x.iter().map(|v| v * v).sum(),
        };
        if v.is_nan() {
            return Err(Error::NonFinite(format!(
                "NaN while evaluating {}",
                self.to_text()
            )));
        }
        Ok(v)
    }

    /// True when the tree uses only polynomial operations.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) | Expr::Norm2Sq => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_polynomial() && b.is_polynomial()
            }
            Expr::Pow(a, _) => a.is_polynomial(),
            _ => false,
        }
    }

    /// True when the tree is symbolically differentiable everywhere
    /// (no `abs`, no `max`).
    pub fn is_smooth(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) | Expr::Norm2Sq => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_smooth() && b.is_smooth(),
            Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => a.is_smooth(),
            Expr::Abs(_) | Expr::Max(_) => false,
        }
    }

    /// Exact partial derivative with respect to `x_var` (1-based). Errors on
    /// `abs`/`max`, which have no everywhere-defined derivative.
    pub fn derivative(&self, var: usize) -> Result<Expr> {
        use Expr::*;
        let d = match self {
            Num(_) => Num(0.0),
            Var(i) => Num(if *i == var { 1.0 } else { 0.0 }),
            Add(a, b) => add(a.derivative(var)?, b.derivative(var)?),
            Sub(a, b) => sub(a.derivative(var)?, b.derivative(var)?),
            Mul(a, b) => add(
                mul(a.derivative(var)?, (**b).clone()),
                mul((**a).clone(), b.derivative(var)?),
            ),
            Pow(a, n) => {
                if *n == 0 {
                    Num(0.0)
                } else {
                    mul(
                        mul(Num(*n as f64), Pow(a.clone(), n - 1)),
                        a.derivative(var)?,
                    )
                }
            }
            Sin(a) => mul(Cos(a.clone()), a.derivative(var)?),
            Cos(a) => sub(Num(0.0), mul(Sin(a.clone()), a.derivative(var)?)),
            Exp(a) => mul(Exp(a.clone()), a.derivative(var)?),
            Norm2Sq => mul(Num(2.0), Var(var)),
            Abs(_) | Max(_) => {
                return Err(Error::EngineMismatch(
                    "abs/max have no everywhere-defined derivative".into(),
                ))
            }
        };
        Ok(d)
    }

    /// Canonical text form; `parse(to_text(e)) == e` for parser-produced
    /// trees (literals nonnegative, minus structural).
    pub fn to_text(&self) -> String {
        self.print(Prec::Expr)
    }

    fn print(&self, ctx: Prec) -> String {
        let (s, prec) = match self {
            Expr::Num(c) => (format_num(*c), Prec::Atom),
            Expr::Var(i) => (format!("x{i}"), Prec::Atom),
            Expr::Add(a, b) => (
                format!("{} + {}", a.print(Prec::Expr), b.print(Prec::Term)),
                Prec::Expr,
            ),
            Expr::Sub(a, b) => {
                // Leading minus: Sub(0, t) prints as "-t".
                if matches!(**a, Expr::Num(c) if c == 0.0) {
                    (format!("-{}", b.print(Prec::Term)), Prec::Expr)
                } else {
                    (
                        format!("{} - {}", a.print(Prec::Expr), b.print(Prec::Term)),
                        Prec::Expr,
                    )
                }
            }
            Expr::Mul(a, b) => (
                format!("{}*{}", a.print(Prec::Term), b.print(Prec::Factor)),
                Prec::Term,
            ),
            Expr::Pow(a, n) => (format!("{}^{n}", a.print(Prec::Atom)), Prec::Factor),
            Expr::Abs(a) => (format!("abs({})", a.print(Prec::Expr)), Prec::Atom),
            Expr::Sin(a) => (format!("sin({})", a.print(Prec::Expr)), Prec::Atom),
            Expr::Cos(a) => (format!("cos({})", a.print(Prec::Expr)), Prec::Atom),
            Expr::Exp(a) => (format!("exp({})", a.print(Prec::Expr)), Prec::Atom),
            Expr::Max(args) => (
                format!(
                    "max({})",
                    args.iter()
                        .map(|a| a.print(Prec::Expr))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                Prec::Atom,
            ),
            Expr::Norm2Sq => ("norm2sq()".to_string(), Prec::Atom),
        };
        if (prec as u8) < (ctx as u8) {
            format!("({s})")
        } else {
            s
        }
    }
}

/// Binding strength, loosest to tightest.
#[derive(Clone, Copy, PartialEq)]
enum Prec {
    Expr = 0,
    Term = 1,
    Factor = 2,
    Atom = 3,
}

fn format_num(c: f64) -> String {
    debug_assert!(c >= 0.0, "canonical literals are nonnegative");
    format!("{c}")
}

// Constructors with light constant folding, used by `derivative` to keep
// symbolic gradients small.
fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), _) if *x == 0.0 => b,
        (_, Expr::Num(y)) if *y == 0.0 => a,
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (_, Expr::Num(y)) if *y == 0.0 => a,
        (Expr::Num(x), Expr::Num(y)) if x >= y => Expr::Num(x - y),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), _) if *x == 0.0 => Expr::Num(0.0),
        (_, Expr::Num(y)) if *y == 0.0 => Expr::Num(0.0),
        (Expr::Num(x), _) if *x == 1.0 => b,
        (_, Expr::Num(y)) if *y == 1.0 => a,
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivative_is_exact() {
        // d/dx (x³) = 3x²
        let e = Expr::Pow(Box::new(Expr::Var(1)), 3);
        let d = e.derivative(1).unwrap();
        for x in [-2.0_f64, -0.5, 0.0, 1.7] {
            // Same association as the folded tree: 3 * (x * x).
            assert_eq!(d.eval_raw(&[x]).unwrap(), 3.0 * (x * x));
        }
    }

    #[test]
    fn trig_derivative() {
        let e = Expr::Sin(Box::new(Expr::Var(1)));
        let d = e.derivative(1).unwrap();
        assert_eq!(d.eval_raw(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn norm2sq_gradient() {
        let d = Expr::Norm2Sq.derivative(2).unwrap();
        assert_eq!(d.eval_raw(&[3.0, 4.0]).unwrap(), 8.0);
    }

    #[test]
    fn abs_has_no_symbolic_derivative() {
        let e = Expr::Abs(Box::new(Expr::Var(1)));
        assert!(e.derivative(1).is_err());
    }

    #[test]
    fn nan_is_an_error() {
        // inf - inf inside the tree
        let e = Expr::Sub(
            Box::new(Expr::Exp(Box::new(Expr::Var(1)))),
            Box::new(Expr::Exp(Box::new(Expr::Var(1)))),
        );
        assert!(e.eval_raw(&[1e9]).is_err());
    }
}
