//! Marking-dependent expressions used for rates, case probabilities, gate
//! predicates, gate functions and reward predicates.
//!
//! The language is intentionally tiny: arithmetic over parameters and token
//! counts, comparisons, boolean connectives and `if/else`. Expressions are
//! generic over the reference type `R` so the same tree can be written with
//! symbolic names (`R = String`) and later resolved to indices (`R = usize`).

use std::fmt;
use std::ops::{Add, BitAnd, BitOr, Div, Mul, Neg, Not, Sub};

/// Numeric expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr<R = String> {
    Const(f64),
    /// Global parameter, e.g. `hw_fail_rate`.
    Param(R),
    /// Token count of a place, `place->Mark()`.
    Mark(R),
    Add(Box<Expr<R>>, Box<Expr<R>>),
    Sub(Box<Expr<R>>, Box<Expr<R>>),
    Mul(Box<Expr<R>>, Box<Expr<R>>),
    Div(Box<Expr<R>>, Box<Expr<R>>),
    Neg(Box<Expr<R>>),
    If(Box<Cond<R>>, Box<Expr<R>>, Box<Expr<R>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn apply(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Boolean expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Cond<R = String> {
    Const(bool),
    Cmp(CmpOp, Box<Expr<R>>, Box<Expr<R>>),
    And(Vec<Cond<R>>),
    Or(Vec<Cond<R>>),
    Not(Box<Cond<R>>),
}

/// `place->Mark()`
pub fn mark(place: &str) -> Expr {
    Expr::Mark(place.to_string())
}

pub fn param(name: &str) -> Expr {
    Expr::Param(name.to_string())
}

pub fn num(value: f64) -> Expr {
    Expr::Const(value)
}

/// `if (cond) return(then); else return(otherwise);`
pub fn ite(cond: Cond, then: impl Into<Expr>, otherwise: impl Into<Expr>) -> Expr {
    Expr::If(Box::new(cond), Box::new(then.into()), Box::new(otherwise.into()))
}

/// Conjunction of all conditions; `all([])` is true.
pub fn all(conds: impl IntoIterator<Item = Cond>) -> Cond {
    Cond::And(conds.into_iter().collect())
}

/// Disjunction of all conditions; `any([])` is false.
pub fn any(conds: impl IntoIterator<Item = Cond>) -> Cond {
    Cond::Or(conds.into_iter().collect())
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::Const(v)
    }
}

impl From<i32> for Expr {
    fn from(v: i32) -> Self {
        Expr::Const(f64::from(v))
    }
}

impl From<u32> for Expr {
    fn from(v: u32) -> Self {
        Expr::Const(f64::from(v))
    }
}

impl Expr {
    fn cmp(self, op: CmpOp, rhs: impl Into<Expr>) -> Cond {
        Cond::Cmp(op, Box::new(self), Box::new(rhs.into()))
    }

    /// `self == rhs`
    pub fn is(self, rhs: impl Into<Expr>) -> Cond {
        self.cmp(CmpOp::Eq, rhs)
    }

    pub fn is_not(self, rhs: impl Into<Expr>) -> Cond {
        self.cmp(CmpOp::Ne, rhs)
    }

    pub fn lt(self, rhs: impl Into<Expr>) -> Cond {
        self.cmp(CmpOp::Lt, rhs)
    }

    pub fn le(self, rhs: impl Into<Expr>) -> Cond {
        self.cmp(CmpOp::Le, rhs)
    }

    pub fn gt(self, rhs: impl Into<Expr>) -> Cond {
        self.cmp(CmpOp::Gt, rhs)
    }

    pub fn ge(self, rhs: impl Into<Expr>) -> Cond {
        self.cmp(CmpOp::Ge, rhs)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl<T: Into<Expr>> $tr<T> for Expr {
            type Output = Expr;
            fn $method(self, rhs: T) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs.into()))
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(Expr::Const(self)), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl BitAnd for Cond {
    type Output = Cond;
    fn bitand(self, rhs: Cond) -> Cond {
        match self {
            Cond::And(mut v) => {
                v.push(rhs);
                Cond::And(v)
            }
            lhs => Cond::And(vec![lhs, rhs]),
        }
    }
}

impl BitOr for Cond {
    type Output = Cond;
    fn bitor(self, rhs: Cond) -> Cond {
        match self {
            Cond::Or(mut v) => {
                v.push(rhs);
                Cond::Or(v)
            }
            lhs => Cond::Or(vec![lhs, rhs]),
        }
    }
}

impl Not for Cond {
    type Output = Cond;
    fn not(self) -> Cond {
        Cond::Not(Box::new(self))
    }
}

/// Which namespace a symbolic reference lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefKind {
    Place,
    Param,
}

impl<R> Expr<R> {
    /// Visits every place and parameter reference.
    pub fn visit_refs<'a>(&'a self, f: &mut impl FnMut(RefKind, &'a R)) {
        match self {
            Expr::Const(_) => {}
            Expr::Param(r) => f(RefKind::Param, r),
            Expr::Mark(r) => f(RefKind::Place, r),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
            Expr::Neg(a) => a.visit_refs(f),
            Expr::If(c, a, b) => {
                c.visit_refs(f);
                a.visit_refs(f);
                b.visit_refs(f);
            }
        }
    }

    /// Rewrites references, e.g. resolving names to indices.
    pub fn try_map<S, E>(
        &self,
        f: &mut impl FnMut(RefKind, &R) -> Result<S, E>,
    ) -> Result<Expr<S>, E> {
        Ok(match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Param(r) => Expr::Param(f(RefKind::Param, r)?),
            Expr::Mark(r) => Expr::Mark(f(RefKind::Place, r)?),
            Expr::Add(a, b) => Expr::Add(Box::new(a.try_map(f)?), Box::new(b.try_map(f)?)),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.try_map(f)?), Box::new(b.try_map(f)?)),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.try_map(f)?), Box::new(b.try_map(f)?)),
            Expr::Div(a, b) => Expr::Div(Box::new(a.try_map(f)?), Box::new(b.try_map(f)?)),
            Expr::Neg(a) => Expr::Neg(Box::new(a.try_map(f)?)),
            Expr::If(c, a, b) => Expr::If(
                Box::new(c.try_map(f)?),
                Box::new(a.try_map(f)?),
                Box::new(b.try_map(f)?),
            ),
        })
    }
}

impl<R> Cond<R> {
    pub fn visit_refs<'a>(&'a self, f: &mut impl FnMut(RefKind, &'a R)) {
        match self {
            Cond::Const(_) => {}
            Cond::Cmp(_, a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
            Cond::And(v) | Cond::Or(v) => v.iter().for_each(|c| c.visit_refs(f)),
            Cond::Not(c) => c.visit_refs(f),
        }
    }

    pub fn try_map<S, E>(
        &self,
        f: &mut impl FnMut(RefKind, &R) -> Result<S, E>,
    ) -> Result<Cond<S>, E> {
        Ok(match self {
            Cond::Const(b) => Cond::Const(*b),
            Cond::Cmp(op, a, b) => Cond::Cmp(*op, Box::new(a.try_map(f)?), Box::new(b.try_map(f)?)),
            Cond::And(v) => Cond::And(v.iter().map(|c| c.try_map(f)).collect::<Result<_, _>>()?),
            Cond::Or(v) => Cond::Or(v.iter().map(|c| c.try_map(f)).collect::<Result<_, _>>()?),
            Cond::Not(c) => Cond::Not(Box::new(c.try_map(f)?)),
        })
    }
}

impl Expr<usize> {
    /// Evaluates against a token vector and bound parameter values.
    #[inline]
    pub fn eval(&self, tokens: &[u32], params: &[f64]) -> f64 {
        match self {
            Expr::Const(v) => *v,
            Expr::Param(i) => params[*i],
            Expr::Mark(i) => f64::from(tokens[*i]),
            Expr::Add(a, b) => a.eval(tokens, params) + b.eval(tokens, params),
            Expr::Sub(a, b) => a.eval(tokens, params) - b.eval(tokens, params),
            Expr::Mul(a, b) => a.eval(tokens, params) * b.eval(tokens, params),
            Expr::Div(a, b) => a.eval(tokens, params) / b.eval(tokens, params),
            Expr::Neg(a) => -a.eval(tokens, params),
            Expr::If(c, a, b) => {
                if c.eval(tokens, params) {
                    a.eval(tokens, params)
                } else {
                    b.eval(tokens, params)
                }
            }
        }
    }
}

impl Cond<usize> {
    #[inline]
    pub fn eval(&self, tokens: &[u32], params: &[f64]) -> bool {
        match self {
            Cond::Const(b) => *b,
            Cond::Cmp(op, a, b) => op.apply(a.eval(tokens, params), b.eval(tokens, params)),
            Cond::And(v) => v.iter().all(|c| c.eval(tokens, params)),
            Cond::Or(v) => v.iter().any(|c| c.eval(tokens, params)),
            Cond::Not(c) => !c.eval(tokens, params),
        }
    }
}

impl<R: fmt::Display> fmt::Display for Expr<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Param(r) => write!(f, "{r}"),
            Expr::Mark(r) => write!(f, "{r}->Mark()"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a} * {b}"),
            Expr::Div(a, b) => write!(f, "{a} / {b}"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::If(c, a, b) => write!(f, "if ({c}) {a} else {b}"),
        }
    }
}

impl<R: fmt::Display> fmt::Display for Cond<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[Cond<R>], sep: &str, empty: &str| {
            if v.is_empty() {
                return write!(f, "{empty}");
            }
            write!(f, "(")?;
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, " {sep} ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        };
        match self {
            Cond::Const(b) => write!(f, "{b}"),
            Cond::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
            Cond::And(v) => join(f, v, "&&", "true"),
            Cond::Or(v) => join(f, v, "||", "false"),
            Cond::Not(c) => write!(f, "!{c}"),
        }
    }
}
