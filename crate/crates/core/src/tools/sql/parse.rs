//! Tokenizer and recursive-descent parser for the mini dialect.

use super::{Condition, Operand, Projection, SqlError, SqlStatement};

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Ident(String),
    StringLit(String),
    Star,
    Comma,
    Eq,
    Semi,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize, // character offset
}

fn syntax(offset: usize, message: impl Into<String>) -> SqlError {
    SqlError::Syntax {
        offset,
        message: message.into(),
    }
}

/// Tokenizes, skipping whitespace and `--` comments (outside literals).
fn tokenize(text: &str) -> Result<Vec<Token>, SqlError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let offset = i;
        match c {
            '\'' => {
                let mut value = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        Some('\'') if chars.get(i + 1) == Some(&'\'') => {
                            value.push('\'');
                            i += 2;
                        }
                        Some('\'') => {
                            i += 1;
                            break;
                        }
                        Some(&ch) => {
                            value.push(ch);
                            i += 1;
                        }
                        None => return Err(syntax(offset, "unterminated string literal")),
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::StringLit(value),
                    offset,
                });
            }
            '*' => {
                tokens.push(Token {
                    kind: TokenKind::Star,
                    offset,
                });
                i += 1;
            }
            ',' => {
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    offset,
                });
                i += 1;
            }
            '=' => {
                tokens.push(Token {
                    kind: TokenKind::Eq,
                    offset,
                });
                i += 1;
            }
            ';' => {
                tokens.push(Token {
                    kind: TokenKind::Semi,
                    offset,
                });
                i += 1;
            }
            '(' => {
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    offset,
                });
                i += 1;
            }
            ')' => {
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    offset,
                });
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    ident.push(chars[i]);
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(ident),
                    offset,
                });
            }
            other => return Err(syntax(offset, format!("unexpected character '{other}'"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_offset: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map(|t| t.offset).unwrap_or(self.end_offset)
    }

    fn next(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.pos).cloned();
        if token.is_some() {
            self.pos += 1;
        }
        token
    }

    fn eat_keyword(&mut self, keyword: &str) -> bool {
        if self.is_keyword(keyword) {
            self.pos += 1;
            return true;
        }
        false
    }

    fn is_keyword(&self, keyword: &str) -> bool {
        matches!(
            self.peek(),
            Some(Token { kind: TokenKind::Ident(word), .. }) if word.eq_ignore_ascii_case(keyword)
        )
    }

    fn expect_keyword(&mut self, keyword: &str) -> Result<(), SqlError> {
        if self.eat_keyword(keyword) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {keyword}")))
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<(), SqlError> {
        let offset = self.offset();
        match self.next() {
            Some(token) if token.kind == *kind => Ok(()),
            _ => Err(syntax(offset, format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SqlError> {
        let offset = self.offset();
        match self.next() {
            Some(Token {
                kind: TokenKind::Ident(name),
                ..
            }) => Ok(name),
            _ => Err(syntax(offset, format!("expected {what}"))),
        }
    }

    fn literal(&mut self, what: &str) -> Result<String, SqlError> {
        let offset = self.offset();
        match self.next() {
            Some(Token {
                kind: TokenKind::StringLit(value),
                ..
            }) => Ok(value),
            _ => Err(syntax(offset, format!("expected {what}"))),
        }
    }

    fn statement(&mut self) -> Result<SqlStatement, SqlError> {
        let offset = self.offset();
        if self.eat_keyword("SELECT") {
            return self.select();
        }
        if self.eat_keyword("DELETE") {
            self.expect_keyword("FROM")?;
            let table = self.ident("table name")?;
            let where_clause = self.opt_where()?;
            return Ok(SqlStatement::Delete {
                table,
                where_clause,
            });
        }
        if self.eat_keyword("INSERT") {
            self.expect_keyword("INTO")?;
            let table = self.ident("table name")?;
            self.expect_keyword("VALUES")?;
            self.expect(&TokenKind::LParen, "'('")?;
            let mut values = vec![self.literal("string literal")?];
            while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
                self.next();
                values.push(self.literal("string literal")?);
            }
            self.expect(&TokenKind::RParen, "')'")?;
            return Ok(SqlStatement::Insert { table, values });
        }
        if self.eat_keyword("CREATE") {
            self.expect_keyword("TABLE")?;
            let name = self.ident("table name")?;
            self.expect(&TokenKind::LParen, "'('")?;
            let mut columns = vec![self.ident("column name")?];
            while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
                self.next();
                columns.push(self.ident("column name")?);
            }
            self.expect(&TokenKind::RParen, "')'")?;
            return Ok(SqlStatement::CreateTable { name, columns });
        }
        if self.eat_keyword("UPDATE") {
            let table = self.ident("table name")?;
            self.expect_keyword("SET")?;
            let mut assignments = vec![self.assignment()?];
            while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
                self.next();
                assignments.push(self.assignment()?);
            }
            let where_clause = self.opt_where()?;
            return Ok(SqlStatement::Update {
                table,
                assignments,
                where_clause,
            });
        }
        Err(syntax(
            offset,
            "expected SELECT, INSERT, UPDATE, DELETE, or CREATE TABLE",
        ))
    }

    fn assignment(&mut self) -> Result<(String, String), SqlError> {
        let column = self.ident("column name")?;
        self.expect(&TokenKind::Eq, "'='")?;
        let value = self.literal("string literal")?;
        Ok((column, value))
    }

    fn select(&mut self) -> Result<SqlStatement, SqlError> {
        let columns = if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Star)) {
            self.next();
            Projection::Star
        } else {
            let mut names = vec![self.ident("column name")?];
            while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
                self.next();
                names.push(self.ident("column name")?);
            }
            Projection::Columns(names)
        };
        self.expect_keyword("FROM")?;
        let table = self.ident("table name")?;
        let where_clause = self.opt_where()?;
        Ok(SqlStatement::Select {
            columns,
            table,
            where_clause,
        })
    }

    fn opt_where(&mut self) -> Result<Option<Condition>, SqlError> {
        if self.eat_keyword("WHERE") {
            Ok(Some(self.or_condition()?))
        } else {
            Ok(None)
        }
    }

    // OR binds loosest; AND binds tighter; parentheses group.
    fn or_condition(&mut self) -> Result<Condition, SqlError> {
        let mut left = self.and_condition()?;
        while self.eat_keyword("OR") {
            let right = self.and_condition()?;
            left = Condition::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_condition(&mut self) -> Result<Condition, SqlError> {
        let mut left = self.primary_condition()?;
        while self.eat_keyword("AND") {
            let right = self.primary_condition()?;
            left = Condition::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn primary_condition(&mut self) -> Result<Condition, SqlError> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::LParen)) {
            self.next();
            let inner = self.or_condition()?;
            self.expect(&TokenKind::RParen, "')'")?;
            return Ok(inner);
        }
        let left = self.operand()?;
        self.expect(&TokenKind::Eq, "'='")?;
        let right = self.operand()?;
        Ok(Condition::Equals(left, right))
    }

    fn operand(&mut self) -> Result<Operand, SqlError> {
        let offset = self.offset();
        match self.next() {
            Some(Token {
                kind: TokenKind::Ident(name),
                ..
            }) => Ok(Operand::Column(name)),
            Some(Token {
                kind: TokenKind::StringLit(value),
                ..
            }) => Ok(Operand::Literal(value)),
            _ => Err(syntax(offset, "expected column or string literal")),
        }
    }
}

/// Parses a script into its statements, in order. Statements are separated
/// by top-level semicolons; empty statements are permitted and skipped.
pub fn sql_parse(text: &str) -> Result<Vec<SqlStatement>, SqlError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_offset: text.chars().count(),
    };
    let mut statements = Vec::new();
    while parser.peek().is_some() {
        if matches!(parser.peek().map(|t| &t.kind), Some(TokenKind::Semi)) {
            parser.next();
            continue;
        }
        statements.push(parser.statement()?);
        match parser.peek().map(|t| &t.kind) {
            Some(TokenKind::Semi) | None => {}
            _ => return Err(syntax(parser.offset(), "expected ';' or end of input")),
        }
    }
    Ok(statements)
}
