//! Game of 24: parsing, exact-arithmetic validation and brute-force search.
//!
//! All arithmetic is exact rational arithmetic (`Ratio<i64>`), never
//! floating point: division creates fractions and equality with 24 must
//! be exact. Step lines follow the generator format
//! `a op b = result (left: n1 n2 ...)`.

use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};
use regex::Regex;
use thiserror::Error;

/// Exact game value.
pub type Value = Rational64;

pub fn target() -> Value {
    Value::from_integer(24)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub fn apply(self, a: Value, b: Value) -> Option<Value> {
        match self {
            Op::Add => a.checked_add(&b),
            Op::Sub => a.checked_sub(&b),
            Op::Mul => a.checked_mul(&b),
            Op::Div => {
                if b.is_zero() {
                    None
                } else {
                    a.checked_div(&b)
                }
            }
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Op::Add),
            '-' => Some(Op::Sub),
            '*' => Some(Op::Mul),
            '/' => Some(Op::Div),
            _ => None,
        }
    }
}

impl std::fmt::Display for Op {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Div => "/",
        })
    }
}

/// Renders a value as an integer when possible, else `numer/denom`.
pub fn format_value(v: &Value) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Renders a multiset as the space-separated form used in prompts.
pub fn format_values(vs: &[Value]) -> String {
    vs.iter().map(format_value).collect::<Vec<_>>().join(" ")
}

/// Parses an integer, decimal, or `a/b` fraction token into an exact value.
pub fn parse_number(tok: &str) -> Option<Value> {
    let tok = tok.trim();
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Value::new(n, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        if frac.len() > 9 || int.len() > 12 {
            return None;
        }
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        Value::new(int.checked_mul(scale)?.checked_add(frac)?, scale)
    } else {
        if !body.chars().all(|c| c.is_ascii_digit()) || body.len() > 12 {
            return None;
        }
        Value::from_integer(body.parse().ok()?)
    };
    Some(if neg { -value } else { value })
}

/// One parsed calculation step.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub a: Value,
    pub op: Op,
    pub b: Value,
    pub result: Value,
    pub left: Vec<Value>,
}

#[derive(Debug, Error, PartialEq)]
pub enum StepError {
    #[error("line does not match the step format")]
    NoMatch,
    #[error("unreadable number {0:?}")]
    BadNumber(String),
    #[error("arithmetic mismatch: {a} {op} {b} = {claimed}, not {actual}")]
    ArithmeticMismatch { a: String, op: String, b: String, claimed: String, actual: String },
    #[error("invalid operation (division by zero or overflow)")]
    InvalidOperation,
}

fn step_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"^\s*(-?\d+(?:\.\d+)?)\s*([-+*/])\s*(-?\d+(?:\.\d+)?)\s*=\s*(-?\d+(?:\.\d+)?)\s*\(\s*left:\s*([^)]*)\)\s*$",
        )
        .unwrap()
    })
}

/// Parses and arithmetically validates one step line such as
/// `2 + 8 = 10 (left: 8 10 14)`.
pub fn parse_step(line: &str) -> Result<Step, StepError> {
    let caps = step_regex().captures(line).ok_or(StepError::NoMatch)?;
    let num = |i: usize| {
        parse_number(caps.get(i).unwrap().as_str())
            .ok_or_else(|| StepError::BadNumber(caps.get(i).unwrap().as_str().to_string()))
    };
    let a = num(1)?;
    let op = Op::from_char(caps.get(2).unwrap().as_str().chars().next().unwrap()).unwrap();
    let b = num(3)?;
    let result = num(4)?;
    let mut left = Vec::new();
    for tok in caps.get(5).unwrap().as_str().split_whitespace() {
        left.push(parse_number(tok).ok_or_else(|| StepError::BadNumber(tok.to_string()))?);
    }
    let actual = op.apply(a, b).ok_or(StepError::InvalidOperation)?;
    if actual != result {
        return Err(StepError::ArithmeticMismatch {
            a: format_value(&a),
            op: op.to_string(),
            b: format_value(&b),
            claimed: format_value(&result),
            actual: format_value(&actual),
        });
    }
    Ok(Step { a, op, b, result, left })
}

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("step uses {0} which is not among the remaining numbers")]
    MissingOperand(String),
    #[error("left list {got} does not match the remaining numbers {expected}")]
    LeftMismatch { expected: String, got: String },
    #[error("no numbers remain to operate on")]
    Exhausted,
}

/// Remaining multiset plus the steps taken so far.
#[derive(Debug, Clone)]
pub struct Game24State {
    pub remaining: Vec<Value>,
    pub steps: Vec<Step>,
    pub answer_expr: Option<String>,
}

fn sorted(mut vs: Vec<Value>) -> Vec<Value> {
    vs.sort();
    vs
}

fn remove_one(vs: &mut Vec<Value>, v: &Value) -> bool {
    if let Some(pos) = vs.iter().position(|x| x == v) {
        vs.remove(pos);
        true
    } else {
        false
    }
}

impl Game24State {
    pub fn new(inputs: &[Value]) -> Self {
        Self { remaining: sorted(inputs.to_vec()), steps: Vec::new(), answer_expr: None }
    }

    /// Applies a step: consumes its two operands from the remaining
    /// multiset, inserts the result, and requires the step's `left` list
    /// to equal the new multiset.
    pub fn apply(&mut self, step: Step) -> Result<(), StateError> {
        if self.remaining.len() < 2 {
            return Err(StateError::Exhausted);
        }
        let mut next = self.remaining.clone();
        if !remove_one(&mut next, &step.a) {
            return Err(StateError::MissingOperand(format_value(&step.a)));
        }
        if !remove_one(&mut next, &step.b) {
            return Err(StateError::MissingOperand(format_value(&step.b)));
        }
        next.push(step.result);
        next.sort();
        let left = sorted(step.left.clone());
        if left != next {
            return Err(StateError::LeftMismatch {
                expected: format_values(&next),
                got: format_values(&left),
            });
        }
        self.remaining = next;
        self.steps.push(step);
        Ok(())
    }
}

/// Exhaustive reachability of 24 from the multiset, with exact rational
/// arithmetic; division-by-zero branches are skipped. Works for 1 to 4
/// numbers (the search is tiny).
pub fn solvable(nums: &[Value]) -> bool {
    if nums.len() == 1 {
        return nums[0] == target();
    }
    let mut rest = Vec::with_capacity(nums.len() - 1);
    for i in 0..nums.len() {
        for j in 0..nums.len() {
            if i == j {
                continue;
            }
            rest.clear();
            for (k, v) in nums.iter().enumerate() {
                if k != i && k != j {
                    rest.push(*v);
                }
            }
            for op in [Op::Add, Op::Sub, Op::Mul, Op::Div] {
                // Commutative results are explored twice; harmless for
                // a search this small.
                if let Some(r) = op.apply(nums[i], nums[j]) {
                    rest.push(r);
                    if solvable(&rest) {
                        return true;
                    }
                    rest.pop();
                }
            }
        }
    }
    false
}

/// An arithmetic expression over literal numbers.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Value),
    Bin(Box<Expr>, Op, Box<Expr>),
}

impl Expr {
    pub fn eval(&self) -> Result<Value, ExprError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Bin(a, op, b) => {
                let (a, b) = (a.eval()?, b.eval()?);
                op.apply(a, b).ok_or(ExprError::InvalidOperation)
            }
        }
    }

    pub fn literals(&self) -> Vec<Value> {
        match self {
            Expr::Num(v) => vec![*v],
            Expr::Bin(a, _, b) => {
                let mut out = a.literals();
                out.extend(b.literals());
                out
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("trailing input after expression")]
    TrailingInput,
    #[error("invalid operation (division by zero or overflow)")]
    InvalidOperation,
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Self { chars: s.chars().peekable() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut node = self.term()?;
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some('+') => {
                    self.chars.next();
                    node = Expr::Bin(Box::new(node), Op::Add, Box::new(self.term()?));
                }
                Some('-') => {
                    self.chars.next();
                    node = Expr::Bin(Box::new(node), Op::Sub, Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut node = self.factor()?;
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some('*') => {
                    self.chars.next();
                    node = Expr::Bin(Box::new(node), Op::Mul, Box::new(self.factor()?));
                }
                Some('/') => {
                    self.chars.next();
                    node = Expr::Bin(Box::new(node), Op::Div, Box::new(self.factor()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        match self.chars.peek() {
            Some('(') => {
                self.chars.next();
                let node = self.expr()?;
                self.skip_ws();
                match self.chars.next() {
                    Some(')') => Ok(node),
                    Some(c) => Err(ExprError::UnexpectedChar(c)),
                    None => Err(ExprError::Expected("closing parenthesis")),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let mut tok = String::new();
                while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit() || *c == '.') {
                    tok.push(self.chars.next().unwrap());
                }
                parse_number(&tok).map(Expr::Num).ok_or(ExprError::Expected("number"))
            }
            Some(&c) => Err(ExprError::UnexpectedChar(c)),
            None => Err(ExprError::UnexpectedEnd),
        }
    }
}

/// Parses a fully punctuated arithmetic expression (numbers, `+ - * /`,
/// parentheses). A trailing `= <number>` tail is ignored; the expression
/// itself is what gets evaluated.
pub fn parse_expression(text: &str) -> Result<Expr, ExprError> {
    let body = match text.split_once('=') {
        Some((lhs, _)) => lhs,
        None => text,
    };
    let mut p = Parser::new(body);
    let node = p.expr()?;
    p.skip_ws();
    match p.chars.next() {
        None => Ok(node),
        Some(c) => Err(ExprError::UnexpectedChar(c)),
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AnswerError {
    #[error("expression does not parse: {0}")]
    Parse(#[from] ExprError),
    #[error("expression uses numbers {got}, expected {expected}")]
    WrongLiterals { expected: String, got: String },
    #[error("expression evaluates to {0}, not 24")]
    WrongValue(String),
}

/// Checks a final answer expression: it must use exactly the input
/// multiset and evaluate to exactly 24.
pub fn validate_answer(expr: &str, inputs: &[Value]) -> Result<(), AnswerError> {
    let parsed = parse_expression(expr)?;
    let literals = sorted(parsed.literals());
    let expected = sorted(inputs.to_vec());
    if literals != expected {
        return Err(AnswerError::WrongLiterals {
            expected: format_values(&expected),
            got: format_values(&literals),
        });
    }
    let value = parsed.eval()?;
    if value != target() {
        return Err(AnswerError::WrongValue(format_value(&value)));
    }
    Ok(())
}

/// Convenience for integer inputs.
pub fn values(nums: &[i64]) -> Vec<Value> {
    nums.iter().map(|&n| Value::from_integer(n)).collect()
}

/// Signed magnitude guard used by the solver tests; large intermediate
/// values are legal but suspicious in 1-13 puzzles.
pub fn magnitude(v: &Value) -> i64 {
    v.numer().abs().max(*v.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_step_paper_example() {
        let s = parse_step("12 * 2 = 24 (left: 9 10 24)").unwrap();
        assert_eq!(s.a, Value::from_integer(12));
        assert_eq!(s.op, Op::Mul);
        assert_eq!(s.b, Value::from_integer(2));
        assert_eq!(s.result, Value::from_integer(24));
        assert_eq!(s.left, values(&[9, 10, 24]));
    }

    #[test]
    fn parse_step_arithmetic_mismatch() {
        let err = parse_step("8 / 2 = 5 (left: 5 8 14)").unwrap_err();
        assert!(matches!(err, StepError::ArithmeticMismatch { .. }), "{err:?}");
    }

    #[test]
    fn parse_step_garbage() {
        assert_eq!(parse_step("hello").unwrap_err(), StepError::NoMatch);
        assert_eq!(parse_step("").unwrap_err(), StepError::NoMatch);
        assert_eq!(parse_step("2 + 2 = 4").unwrap_err(), StepError::NoMatch); // no left list
    }

    #[test]
    fn parse_step_division_by_zero() {
        assert_eq!(parse_step("3 / 0 = 0 (left: 0)").unwrap_err(), StepError::InvalidOperation);
    }

    #[test]
    fn parse_step_fractional() {
        let s = parse_step("7 / 2 = 3.5 (left: 3.5 8)").unwrap();
        assert_eq!(s.result, Value::new(7, 2));
        assert_eq!(parse_step("14 /  2 = 7 (left: 7 8 8)").unwrap().result, Value::from_integer(7));
    }

    #[test]
    fn state_apply_consumes_and_checks_left() {
        let mut st = Game24State::new(&values(&[2, 8, 8, 14]));
        st.apply(parse_step("2 + 8 = 10 (left: 8 10 14)").unwrap()).unwrap();
        assert_eq!(st.remaining, sorted(values(&[8, 10, 14])));

        // Reusing a consumed number is rejected.
        let bad = parse_step("2 + 8 = 10 (left: 8 10 14)").unwrap();
        assert!(matches!(st.clone().apply(bad), Err(StateError::MissingOperand(_))));

        // A wrong left list is rejected.
        let mut st2 = Game24State::new(&values(&[2, 8, 8, 14]));
        let wrong = parse_step("2 + 8 = 10 (left: 10 14 14)").unwrap();
        assert!(matches!(st2.apply(wrong), Err(StateError::LeftMismatch { .. })));
    }

    #[test]
    fn solvable_paper_ground_truths() {
        assert!(solvable(&values(&[2, 12])));
        assert!(!solvable(&values(&[11, 12])));
        assert!(solvable(&values(&[24])));
        assert!(!solvable(&values(&[23])));
        assert!(solvable(&values(&[4, 9, 10, 13])));
        assert!(solvable(&values(&[3, 8])));
        assert!(solvable(&values(&[1, 12, 11])));
    }

    #[test]
    fn solvable_needs_fractions() {
        // (3 + 3/7) * 7 = 24 is the canonical fraction-only instance.
        assert!(solvable(&values(&[3, 3, 7, 7])));
    }

    #[test]
    fn validate_answer_paper_solutions() {
        assert_eq!(validate_answer("(10 - 4) * (13 - 9) = 24", &values(&[4, 9, 10, 13])), Ok(()));
        assert_eq!(validate_answer("(12 * 2) * (10 - 9) = 24", &values(&[2, 9, 10, 12])), Ok(()));
        assert_eq!(validate_answer("(6 - 4) * (4 + 8) = 24", &values(&[4, 4, 6, 8])), Ok(()));
    }

    #[test]
    fn validate_answer_wrong_literals() {
        let err = validate_answer("4 * 6 = 24", &values(&[4, 9, 10, 13])).unwrap_err();
        assert!(matches!(err, AnswerError::WrongLiterals { .. }));
    }

    #[test]
    fn validate_answer_wrong_value() {
        let err = validate_answer("(10 - 4) * (13 - 9) - 1", &values(&[1, 4, 9, 10, 13])).unwrap_err();
        assert!(matches!(err, AnswerError::WrongValue(_)));
    }

    #[test]
    fn validate_answer_unparseable() {
        assert!(matches!(
            validate_answer("twenty four", &values(&[4, 9, 10, 13])),
            Err(AnswerError::Parse(_))
        ));
        assert!(matches!(
            validate_answer("(4 + 9", &values(&[4, 9])),
            Err(AnswerError::Parse(_))
        ));
    }

    #[test]
    fn expression_precedence_and_parens() {
        let e = parse_expression("2 + 3 * 4").unwrap();
        assert_eq!(e.eval().unwrap(), Value::from_integer(14));
        let e = parse_expression("(2 + 3) * 4").unwrap();
        assert_eq!(e.eval().unwrap(), Value::from_integer(20));
        let e = parse_expression("24 / (1 - 1/2)").unwrap();
        // Tokenizer has no fraction literals: 1/2 is a division.
        assert_eq!(e.eval().unwrap(), Value::from_integer(48));
    }

    #[test]
    fn number_forms() {
        assert_eq!(parse_number("14").unwrap(), Value::from_integer(14));
        assert_eq!(parse_number("3.5").unwrap(), Value::new(7, 2));
        assert_eq!(parse_number("7/3").unwrap(), Value::new(7, 3));
        assert_eq!(parse_number("-6").unwrap(), Value::from_integer(-6));
        assert_eq!(parse_number("1/0"), None);
        assert_eq!(parse_number("abc"), None);
        assert_eq!(parse_number(""), None);
    }
}
