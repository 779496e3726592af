//! A small arithmetic language for curves and surfaces.
//!
//! Variables are declared positionally when parsing (`u, v` for surfaces, `t`
//! for curves); `pi` is the only named constant. Supported functions are
//! `sin`, `cos`, `sqrt`, `exp` and `abs`. Implicit multiplication is not
//! accepted, so `2u` is a syntax error.
//!
//! Evaluation is available in plain `f64` or with forward-mode [`Dual`]
//! numbers, which gives exact partial derivatives for the surface-area
//! integrands.

mod dual;
mod parser;

use std::fmt;

use thiserror::Error;

pub use dual::Dual;
pub use parser::parse_expr;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("offset {offset}: {kind}")]
pub struct DslError {
    pub kind: DslErrorKind,
    /// Byte offset into the source text.
    pub offset: usize,
}

impl DslError {
    fn new(kind: DslErrorKind, offset: usize) -> Self {
        DslError { kind, offset }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("function {name} takes {expected} argument(s), got {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("expected {expected} variable value(s), got {found}")]
    Environment { expected: usize, found: usize },
    #[error("domain error in {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not differentiable here")]
    NotDifferentiable(String),
}

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
    Sin,
    Cos,
    Sqrt,
    Exp,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Const(f64),
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// AST node tagged with the byte offset of the token that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub offset: usize,
}

impl Node {
    fn new(kind: NodeKind, offset: usize) -> Self {
        Node { kind, offset }
    }
}

/// A parsed expression together with its declared variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    vars: Vec<String>,
}

impl Expr {
    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Builds a constant expression over the given variables.
    pub fn constant(value: f64, vars: &[&str]) -> Expr {
        Expr {
            root: Node::new(NodeKind::Const(value), 0),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn eval(&self, env: &[f64]) -> Result<f64, DslError> {
        self.check_env(env.len())?;
        eval_node(&self.root, env)
    }

    pub fn eval_dual<const N: usize>(&self, env: &[Dual<N>]) -> Result<Dual<N>, DslError> {
        self.check_env(env.len())?;
        eval_node(&self.root, env)
    }

    fn check_env(&self, found: usize) -> Result<(), DslError> {
        if found == self.vars.len() {
            Ok(())
        } else {
            Err(DslError::new(
                DslErrorKind::Environment { expected: self.vars.len(), found },
                0,
            ))
        }
    }
}

/// Fully parenthesized rendering that reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.root, &self.vars, f)
    }
}

fn write_node(n: &Node, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &n.kind {
        NodeKind::Const(c) if *c == std::f64::consts::PI => write!(f, "pi"),
        NodeKind::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
        NodeKind::Const(c) => write!(f, "{c:?}"),
        NodeKind::Var(i) => write!(f, "{}", vars[*i]),
        NodeKind::Neg(a) => {
            write!(f, "(-")?;
            write_node(a, vars, f)?;
            write!(f, ")")
        }
        NodeKind::Binary(op, a, b) => {
            write!(f, "(")?;
            write_node(a, vars, f)?;
            write!(f, " {} ", op.symbol())?;
            write_node(b, vars, f)?;
            write!(f, ")")
        }
        NodeKind::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(a, vars, f)?;
            write!(f, ")")
        }
    }
}

enum Fail {
    Domain,
    DivByZero,
    NotDifferentiable,
}

/// Arithmetic needed by the evaluator; implemented for `f64` and [`Dual`].
trait Number: Copy {
    fn constant(v: f64) -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn div(self, o: Self) -> Result<Self, Fail>;
    fn pow(self, o: Self) -> Result<Self, Fail>;
    fn apply(self, func: Func) -> Result<Self, Fail>;
}

fn real_pow(a: f64, b: f64) -> Result<f64, Fail> {
    if a < 0.0 && b.fract() != 0.0 {
        return Err(Fail::Domain);
    }
    if a == 0.0 && b < 0.0 {
        return Err(Fail::DivByZero);
    }
    Ok(a.powf(b))
}

fn real_apply(func: Func, x: f64) -> Result<f64, Fail> {
    Ok(match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Exp => x.exp(),
        Func::Abs => x.abs(),
        Func::Sqrt if x < 0.0 => return Err(Fail::Domain),
        Func::Sqrt => x.sqrt(),
    })
}

impl Number for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn neg(self) -> Self {
        -self
    }
    fn div(self, o: Self) -> Result<Self, Fail> {
        if o == 0.0 {
            Err(Fail::DivByZero)
        } else {
            Ok(self / o)
        }
    }
    fn pow(self, o: Self) -> Result<Self, Fail> {
        real_pow(self, o)
    }
    fn apply(self, func: Func) -> Result<Self, Fail> {
        real_apply(func, self)
    }
}

impl<const N: usize> Number for Dual<N> {
    fn constant(v: f64) -> Self {
        Dual::constant(v)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn neg(self) -> Self {
        -self
    }
    fn div(self, o: Self) -> Result<Self, Fail> {
        if o.value == 0.0 {
            Err(Fail::DivByZero)
        } else {
            Ok(self / o)
        }
    }
    fn pow(self, o: Self) -> Result<Self, Fail> {
        let (a, b) = (self.value, o.value);
        let value = real_pow(a, b)?;
        if !o.has_derivative() {
            if !self.has_derivative() || b == 0.0 {
                return Ok(Dual::new(value, [0.0; N]));
            }
            if a == 0.0 && b < 1.0 {
                return Err(Fail::NotDifferentiable);
            }
            return Ok(self.chain(value, b * real_pow(a, b - 1.0)?));
        }
        if a <= 0.0 {
            return Err(Fail::NotDifferentiable);
        }
        let ln_a = a.ln();
        let mut partials = [0.0; N];
        for (i, p) in partials.iter_mut().enumerate() {
            *p = value * (o.partials[i] * ln_a + b * self.partials[i] / a);
        }
        Ok(Dual::new(value, partials))
    }
    fn apply(self, func: Func) -> Result<Self, Fail> {
        let x = self.value;
        let f = real_apply(func, x)?;
        let df = match func {
            Func::Sin => x.cos(),
            Func::Cos => -x.sin(),
            Func::Exp => f,
            Func::Sqrt | Func::Abs if x == 0.0 => {
                if self.has_derivative() {
                    return Err(Fail::NotDifferentiable);
                }
                0.0
            }
            Func::Sqrt => 0.5 / f,
            Func::Abs => x.signum(),
        };
        Ok(self.chain(f, df))
    }
}

fn node_label(n: &Node) -> String {
    let what = match &n.kind {
        NodeKind::Call(func, _) => func.name().to_string(),
        NodeKind::Binary(op, _, _) => format!("'{}'", op.symbol()),
        _ => "expression".to_string(),
    };
    format!("{what} at offset {}", n.offset)
}

fn fail_to_error(fail: Fail, n: &Node) -> DslError {
    let kind = match fail {
        Fail::Domain => DslErrorKind::Domain(node_label(n)),
        Fail::DivByZero => DslErrorKind::DivisionByZero,
        Fail::NotDifferentiable => DslErrorKind::NotDifferentiable(node_label(n)),
    };
    DslError::new(kind, n.offset)
}

fn eval_node<T: Number>(n: &Node, env: &[T]) -> Result<T, DslError> {
    Ok(match &n.kind {
        NodeKind::Const(c) => T::constant(*c),
        NodeKind::Var(i) => env[*i],
        NodeKind::Neg(a) => eval_node(a, env)?.neg(),
        NodeKind::Binary(op, a, b) => {
            let x = eval_node(a, env)?;
            let y = eval_node(b, env)?;
            match op {
                BinOp::Add => x.add(y),
                BinOp::Sub => x.sub(y),
                BinOp::Mul => x.mul(y),
                BinOp::Div => x.div(y).map_err(|e| fail_to_error(e, n))?,
                BinOp::Pow => x.pow(y).map_err(|e| fail_to_error(e, n))?,
            }
        }
        NodeKind::Call(func, a) => eval_node(a, env)?
            .apply(*func)
            .map_err(|e| fail_to_error(e, n))?,
    })
}
