//! Evaluation of expression trees: plain values and dual numbers.

use super::{BinOp, EvalError, Func, Node};

/// Value and first derivative at a point, propagated by forward-mode
/// automatic differentiation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub derivative: f64,
}

fn domain(what: String) -> EvalError {
    EvalError::Domain { what }
}

fn not_diff(what: String) -> EvalError {
    EvalError::NotDifferentiable { what }
}

/// `x ^ y` under the domain policy: a negative base needs an integer
/// exponent, `0 ^ negative` is rejected, and `0 ^ 0 = 1` per IEEE 754.
fn checked_pow(x: f64, y: f64) -> Result<f64, EvalError> {
    if x < 0.0 && (!y.is_finite() || y.fract() != 0.0) {
        return Err(domain(format!(
            "{x} ^ {y} (negative base needs an integer exponent)"
        )));
    }
    if x == 0.0 && y < 0.0 {
        return Err(domain(format!("0 ^ {y}")));
    }
    Ok(x.powf(y))
}

pub(super) fn eval(node: &Node, t: f64) -> Result<f64, EvalError> {
    debug_assert!(t.is_finite(), "eval expects a finite argument");
    let v = match node {
        Node::Number(c) => *c,
        Node::Var => t,
        Node::Neg(a) => -eval(a, t)?,
        Node::Bin(op, a, b) => {
            let x = eval(a, t)?;
            let y = eval(b, t)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(domain(format!("division by zero ({x} / 0)")));
                    }
                    x / y
                }
                BinOp::Pow => checked_pow(x, y)?,
            }
        }
        Node::Call(func, a) => {
            let x = eval(a, t)?;
            match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Exp => x.exp(),
                Func::Ln => {
                    if x <= 0.0 {
                        return Err(domain(format!("ln({x})")));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(domain(format!("sqrt({x})")));
                    }
                    x.sqrt()
                }
                Func::Cbrt => x.cbrt(),
                Func::Abs => x.abs(),
                Func::Sign => {
                    if x == 0.0 {
                        0.0
                    } else {
                        x.signum()
                    }
                }
            }
        }
    };
    // Overflow to infinity is tolerated, but NaN never leaks out.
    if v.is_nan() {
        return Err(domain(format!("{} produced NaN", node.op_name())));
    }
    Ok(v)
}

pub(super) fn eval_dual(node: &Node, t: f64) -> Result<Dual, EvalError> {
    debug_assert!(t.is_finite(), "eval_dual expects a finite argument");
    let d = match node {
        Node::Number(c) => Dual {
            value: *c,
            derivative: 0.0,
        },
        Node::Var => Dual {
            value: t,
            derivative: 1.0,
        },
        Node::Neg(a) => {
            let a = eval_dual(a, t)?;
            Dual {
                value: -a.value,
                derivative: -a.derivative,
            }
        }
        Node::Bin(op, a, b) => {
            let a = eval_dual(a, t)?;
            let b = eval_dual(b, t)?;
            match op {
                BinOp::Add => Dual {
                    value: a.value + b.value,
                    derivative: a.derivative + b.derivative,
                },
                BinOp::Sub => Dual {
                    value: a.value - b.value,
                    derivative: a.derivative - b.derivative,
                },
                BinOp::Mul => Dual {
                    value: a.value * b.value,
                    derivative: a.derivative * b.value + a.value * b.derivative,
                },
                BinOp::Div => {
                    if b.value == 0.0 {
                        return Err(domain(format!("division by zero ({} / 0)", a.value)));
                    }
                    Dual {
                        value: a.value / b.value,
                        derivative: (a.derivative * b.value - a.value * b.derivative)
                            / (b.value * b.value),
                    }
                }
                BinOp::Pow => {
                    let value = checked_pow(a.value, b.value)?;
                    let derivative = if b.derivative == 0.0 {
                        // Constant exponent: plain power rule, which keeps
                        // negative bases with integer exponents working.
                        let p = b.value;
                        if p == 0.0 || a.derivative == 0.0 {
                            0.0
                        } else {
                            p * a.value.powf(p - 1.0) * a.derivative
                        }
                    } else {
                        // Genuinely variable exponent: x^y = exp(y ln x).
                        if a.value <= 0.0 {
                            return Err(not_diff(format!(
                                "{} ^ {} with a variable exponent needs a positive base",
                                a.value, b.value
                            )));
                        }
                        value * (b.derivative * a.value.ln() + b.value * a.derivative / a.value)
                    };
                    Dual { value, derivative }
                }
            }
        }
        Node::Call(func, arg) => {
            let a = eval_dual(arg, t)?;
            let v = a.value;
            match func {
                Func::Sin => Dual {
                    value: v.sin(),
                    derivative: v.cos() * a.derivative,
                },
                Func::Cos => Dual {
                    value: v.cos(),
                    derivative: -v.sin() * a.derivative,
                },
                Func::Tan => {
                    let tv = v.tan();
                    Dual {
                        value: tv,
                        derivative: (1.0 + tv * tv) * a.derivative,
                    }
                }
                Func::Exp => {
                    let ev = v.exp();
                    Dual {
                        value: ev,
                        derivative: ev * a.derivative,
                    }
                }
                Func::Ln => {
                    if v <= 0.0 {
                        return Err(domain(format!("ln({v})")));
                    }
                    Dual {
                        value: v.ln(),
                        derivative: a.derivative / v,
                    }
                }
                Func::Sqrt => {
                    if v < 0.0 {
                        return Err(domain(format!("sqrt({v})")));
                    }
                    if v == 0.0 {
                        return Err(not_diff("sqrt at 0".to_owned()));
                    }
                    let s = v.sqrt();
                    Dual {
                        value: s,
                        derivative: a.derivative / (2.0 * s),
                    }
                }
                Func::Cbrt => {
                    if v == 0.0 {
                        return Err(not_diff("cbrt at 0".to_owned()));
                    }
                    let c = v.cbrt();
                    Dual {
                        value: c,
                        derivative: a.derivative / (3.0 * c * c),
                    }
                }
                Func::Abs => {
                    if v == 0.0 {
                        return Err(not_diff("abs at 0".to_owned()));
                    }
                    Dual {
                        value: v.abs(),
                        derivative: v.signum() * a.derivative,
                    }
                }
                Func::Sign => {
                    if v == 0.0 {
                        return Err(not_diff("sign at 0".to_owned()));
                    }
                    Dual {
                        value: v.signum(),
                        derivative: 0.0,
                    }
                }
            }
        }
    };
    if d.value.is_nan() {
        return Err(domain(format!("{} produced NaN", node.op_name())));
    }
    if !d.derivative.is_finite() {
        return Err(not_diff(format!(
            "{} has a non-finite derivative here",
            node.op_name()
        )));
    }
    Ok(d)
}
