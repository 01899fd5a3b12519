//! Single-variable expression trees: parsing, printing, evaluation, and
//! forward-mode differentiation.
//!
//! The grammar (operators in increasing binding strength):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-')? power
//! power  := atom ('^' factor)?          // right-associative
//! atom   := number | 'pi' | 'e' | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-2^2` is `-(2^2)` as in written
//! mathematics. An expression may use at most one variable; its name is
//! whatever identifier appears first.

mod eval;
mod parse;

pub use eval::Dual;

use std::fmt;

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    /// Binding strength; larger binds tighter.
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Cbrt,
    Abs,
    Sign,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Cbrt => "cbrt",
            Func::Abs => "abs",
            Func::Sign => "sign",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "cbrt" => Func::Cbrt,
            "abs" => Func::Abs,
            "sign" => Func::Sign,
            _ => return None,
        })
    }
}

/// Expression tree node. The variable, if any, is stored once on
/// [`ExprAst`]; `Var` refers to it.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number(f64),
    Var,
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    /// Short name of the operation, used in error messages.
    fn op_name(&self) -> &'static str {
        match self {
            Node::Number(_) => "number",
            Node::Var => "variable",
            Node::Neg(_) => "negation",
            Node::Bin(op, _, _) => op.symbol(),
            Node::Call(f, _) => f.name(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Number(_) | Node::Var | Node::Call(..) => 5,
            Node::Bin(op, _, _) => op.precedence(),
            Node::Neg(_) => 3,
        }
    }
}

/// A parsed expression in at most one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    root: Node,
    var: Option<String>,
}

impl ExprAst {
    /// Parse `src` per the module grammar.
    pub fn parse(src: &str) -> Result<ExprAst, ParseError> {
        parse::parse(src)
    }

    /// A constant expression.
    pub fn number(value: f64) -> ExprAst {
        ExprAst {
            root: Node::Number(value),
            var: None,
        }
    }

    /// The bare variable `name`.
    pub fn variable(name: &str) -> ExprAst {
        ExprAst {
            root: Node::Var,
            var: Some(name.to_owned()),
        }
    }

    pub(crate) fn from_parts(root: Node, var: Option<String>) -> ExprAst {
        ExprAst { root, var }
    }

    /// Name of the variable, or `None` for a constant expression.
    pub fn var_name(&self) -> Option<&str> {
        self.var.as_deref()
    }

    /// Evaluate at `t`. See [`EvalError`] for the domain policy.
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        eval::eval(&self.root, t)
    }

    /// Evaluate value and first derivative at `t` with dual numbers.
    pub fn eval_dual(&self, t: f64) -> Result<Dual, EvalError> {
        eval::eval_dual(&self.root, t)
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

impl fmt::Display for ExprAst {
    /// Prints a string that re-parses to a structurally identical tree
    /// (for parser-produced trees; a programmatic `Number` holding a
    /// negative or non-finite constant has no literal form).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.var.as_deref().unwrap_or("t");
        write_node(f, &self.root, var)
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, var: &str) -> fmt::Result {
    match node {
        Node::Number(v) => write!(f, "{v}"),
        Node::Var => f.write_str(var),
        Node::Neg(a) => {
            f.write_str("-")?;
            // The operand slot is `power` in the grammar: atoms and `^`
            // chains may appear bare, anything looser needs parentheses.
            write_child(f, a, var, a.precedence() < 4)
        }
        Node::Bin(op, a, b) => {
            let p = op.precedence();
            if *op == BinOp::Pow {
                // Right-associative; the base slot is `atom`, the exponent
                // slot is `factor` (so a bare `-` or another `^` is fine).
                write_child(f, a, var, a.precedence() < 5)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, var, b.precedence() < 3)
            } else {
                // Left-associative: an equal-precedence right child came
                // from explicit parentheses, so keep them.
                write_child(f, a, var, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, var, b.precedence() <= p)
            }
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a, var)?;
            f.write_str(")")
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, node: &Node, var: &str, parens: bool) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        write_node(f, node, var)?;
        f.write_str(")")
    } else {
        write_node(f, node, var)
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Syntax error with the byte offset where parsing failed and a
/// description of what was expected there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}",
            self.offset, self.expected
        )
    }
}

impl std::error::Error for ParseError {}

/// Evaluation error.
///
/// Domain policy: `ln` of a non-positive value, square root of a negative
/// value, division by zero, a negative base raised to a non-integer power,
/// and any operation that produces NaN all report `Domain` instead of
/// letting NaN leak out. Infinities from overflow are allowed to flow.
/// `NotDifferentiable` arises only from [`ExprAst::eval_dual`], at kinks
/// and vertical points such as `abs`, `sign`, `cbrt` at 0 and `sqrt` at 0.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    Domain { what: String },
    NotDifferentiable { what: String },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Domain { what } => write!(f, "domain error: {what}"),
            EvalError::NotDifferentiable { what } => {
                write!(f, "not differentiable: {what}")
            }
        }
    }
}

impl std::error::Error for EvalError {}
