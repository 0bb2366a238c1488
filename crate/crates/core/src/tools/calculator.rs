//! Arithmetic expression evaluator and its agent tool.
//!
//! Integer literals, `+ - * /`, parentheses, and unary minus with the
//! usual precedence. Division is exact over f64, so `7/2` is `3.5`.

use crate::agent::ToolSpec;

/// Evaluation failure with a character offset into the expression.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalcError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("division by zero at offset {offset}")]
    DivisionByZero { offset: usize },
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
}

impl Scanner {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64, CalcError> {
        let mut value = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    value += self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    value -= self.term()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn term(&mut self) -> Result<f64, CalcError> {
        let mut value = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    value *= self.factor()?;
                }
                Some('/') => {
                    let op_at = self.pos;
                    self.pos += 1;
                    let divisor = self.factor()?;
                    if divisor == 0.0 {
                        return Err(CalcError::DivisionByZero { offset: op_at });
                    }
                    value /= divisor;
                }
                _ => return Ok(value),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, CalcError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(CalcError::Syntax {
                        offset: self.pos,
                        message: "expected ')'".into(),
                    })
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let mut digits = String::new();
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    digits.push(self.chars[self.pos]);
                    self.pos += 1;
                }
                digits.parse().map_err(|_| CalcError::Syntax {
                    offset: start,
                    message: "bad number".into(),
                })
            }
            _ => Err(CalcError::Syntax {
                offset: self.pos,
                message: "expected number, '-', or '('".into(),
            }),
        }
    }
}

/// Evaluates an arithmetic expression.
pub fn calculator_eval(expr: &str) -> Result<f64, CalcError> {
    let mut scanner = Scanner {
        chars: expr.chars().collect(),
        pos: 0,
    };
    let value = scanner.expr()?;
    if scanner.peek().is_some() {
        return Err(CalcError::Syntax {
            offset: scanner.pos,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(value)
}

/// Renders a result without a spurious fraction: `14`, not `14.0`.
pub fn format_number(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

/// The agent-facing `calculator` tool.
pub fn make_calculator_tool() -> ToolSpec {
    ToolSpec::new(
        "calculator",
        "Evaluates an arithmetic expression and returns the numeric result.",
        vec![],
        Box::new(|input| {
            calculator_eval(input)
                .map(format_number)
                .map_err(|e| e.to_string())
        }),
    )
    .expect("static tool definition")
}
