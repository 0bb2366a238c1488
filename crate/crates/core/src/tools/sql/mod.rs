//! Mini SQL engine: in-memory tables, a small dialect, and the
//! vulnerable/hardened database tool pair.
//!
//! The dialect is just large enough to demonstrate injection end to end:
//! CREATE TABLE / INSERT / SELECT / DELETE / UPDATE, equality conditions
//! joined by AND/OR with parentheses, single-quoted literals with `''` as
//! the quote escape, `--` comments, and multi-statement scripts split on
//! top-level semicolons. Multi-statement execution and comments are in the
//! dialect precisely because classic injection payloads need them.

mod exec;
mod parse;

pub use exec::{sql_execute, ExecOutcome};
pub use parse::sql_parse;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::agent::{FieldConstraint, ToolSpec};
use crate::{Error, Result};

/// Errors from the SQL engine. Offsets are character positions into the
/// statement text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SqlError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("execution error: {0}")]
    Execution(String),
}

/// One table: ordered columns and rows of text values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Named tables; names are case-insensitively unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableStore {
    tables: BTreeMap<String, Table>,
}

/// A table store shared between tools and their environment.
pub type SharedTableStore = Arc<Mutex<TableStore>>;

impl TableStore {
    pub fn new() -> Self {
        TableStore::default()
    }

    pub fn shared(self) -> SharedTableStore {
        Arc::new(Mutex::new(self))
    }

    pub fn get(&self, name: &str) -> Option<&Table> {
        self.tables.get(&name.to_ascii_lowercase())
    }

    pub(crate) fn get_mut(&mut self, name: &str) -> Option<&mut Table> {
        self.tables.get_mut(&name.to_ascii_lowercase())
    }

    pub fn create(&mut self, name: &str, columns: Vec<String>) -> std::result::Result<(), SqlError> {
        let key = name.to_ascii_lowercase();
        if self.tables.contains_key(&key) {
            return Err(SqlError::Execution(format!("table '{name}' already exists")));
        }
        self.tables.insert(
            key,
            Table {
                name: name.to_string(),
                columns,
                rows: Vec::new(),
            },
        );
        Ok(())
    }

    pub fn table_names(&self) -> Vec<&str> {
        self.tables.values().map(|t| t.name.as_str()).collect()
    }

    /// Seed database file shape: `{"tables": {name: {columns, rows}}}`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            tables: BTreeMap<String, TableBody>,
        }
        #[derive(Deserialize)]
        struct TableBody {
            columns: Vec<String>,
            rows: Vec<Vec<String>>,
        }
        let file: File = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let mut store = TableStore::new();
        for (name, body) in file.tables {
            for (i, row) in body.rows.iter().enumerate() {
                if row.len() != body.columns.len() {
                    return Err(Error::Validation(format!(
                        "table '{name}' row {i} has {} values for {} columns",
                        row.len(),
                        body.columns.len()
                    )));
                }
            }
            store
                .create(&name, body.columns)
                .map_err(|e| Error::Validation(e.to_string()))?;
            store.get_mut(&name).expect("just created").rows = body.rows;
        }
        Ok(store)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct File<'a> {
            tables: BTreeMap<&'a str, TableBody<'a>>,
        }
        #[derive(Serialize)]
        struct TableBody<'a> {
            columns: &'a [String],
            rows: &'a [Vec<String>],
        }
        let file = File {
            tables: self
                .tables
                .values()
                .map(|t| {
                    (
                        t.name.as_str(),
                        TableBody {
                            columns: &t.columns,
                            rows: &t.rows,
                        },
                    )
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("table store serializes")
    }
}

/// The lab's canonical seed database: a `users` table with two accounts.
pub fn seed_users_table() -> TableStore {
    let mut store = TableStore::new();
    store
        .create("users", vec!["username".into(), "hash".into()])
        .expect("fresh store");
    let users = store.get_mut("users").expect("just created");
    users.rows.push(vec!["alice".into(), "h1".into()]);
    users.rows.push(vec!["bob".into(), "h2".into()]);
    store
}

// -- statements --------------------------------------------------------------

/// Column list of a SELECT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Star,
    Columns(Vec<String>),
}

/// A comparison operand: column reference or string literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Column(String),
    Literal(String),
}

/// Boolean condition tree over equality comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Equals(Operand, Operand),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

/// One parsed statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SqlStatement {
    CreateTable {
        name: String,
        columns: Vec<String>,
    },
    Insert {
        table: String,
        values: Vec<String>,
    },
    Select {
        columns: Projection,
        table: String,
        where_clause: Option<Condition>,
    },
    Delete {
        table: String,
        where_clause: Option<Condition>,
    },
    Update {
        table: String,
        assignments: Vec<(String, String)>,
        where_clause: Option<Condition>,
    },
}

fn render_literal(value: &str) -> String {
    format!("'{}'", value.replace('\'', "''"))
}

fn render_operand(op: &Operand) -> String {
    match op {
        Operand::Column(name) => name.clone(),
        Operand::Literal(value) => render_literal(value),
    }
}

fn render_condition(cond: &Condition) -> String {
    match cond {
        Condition::Equals(l, r) => format!("{} = {}", render_operand(l), render_operand(r)),
        Condition::And(a, b) => format!("({} AND {})", render_condition(a), render_condition(b)),
        Condition::Or(a, b) => format!("({} OR {})", render_condition(a), render_condition(b)),
    }
}

/// Renders a statement back to dialect text; `sql_parse` of the result
/// yields an equal statement.
pub fn render_statement(stmt: &SqlStatement) -> String {
    match stmt {
        SqlStatement::CreateTable { name, columns } => {
            format!("CREATE TABLE {name} ({})", columns.join(", "))
        }
        SqlStatement::Insert { table, values } => format!(
            "INSERT INTO {table} VALUES ({})",
            values
                .iter()
                .map(|v| render_literal(v))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        SqlStatement::Select {
            columns,
            table,
            where_clause,
        } => {
            let cols = match columns {
                Projection::Star => "*".to_string(),
                Projection::Columns(names) => names.join(", "),
            };
            match where_clause {
                Some(cond) => format!("SELECT {cols} FROM {table} WHERE {}", render_condition(cond)),
                None => format!("SELECT {cols} FROM {table}"),
            }
        }
        SqlStatement::Delete {
            table,
            where_clause,
        } => match where_clause {
            Some(cond) => format!("DELETE FROM {table} WHERE {}", render_condition(cond)),
            None => format!("DELETE FROM {table}"),
        },
        SqlStatement::Update {
            table,
            assignments,
            where_clause,
        } => {
            let sets = assignments
                .iter()
                .map(|(col, val)| format!("{col} = {}", render_literal(val)))
                .collect::<Vec<_>>()
                .join(", ");
            match where_clause {
                Some(cond) => format!("UPDATE {table} SET {sets} WHERE {}", render_condition(cond)),
                None => format!("UPDATE {table} SET {sets}"),
            }
        }
    }
}

// -- tools -------------------------------------------------------------------

/// Runs a whole script against the store and renders the outcomes, one per
/// statement.
pub fn run_script(store: &mut TableStore, script: &str) -> std::result::Result<String, SqlError> {
    let statements = sql_parse(script)?;
    let mut outputs = Vec::with_capacity(statements.len());
    for stmt in &statements {
        outputs.push(sql_execute(store, stmt)?.render());
    }
    Ok(outputs.join("\n"))
}

/// The deliberately unvalidated database tool: parses and executes every
/// statement in its input. This is the excessive-agency demonstration
/// vehicle; nothing restricts what it will run.
pub fn make_sql_raw_tool(store: SharedTableStore) -> ToolSpec {
    ToolSpec::new(
        "sql",
        "Executes SQL statements against the application database and returns the results.",
        vec![],
        Box::new(move |input| {
            let mut store = store.lock().expect("table store lock");
            run_script(&mut store, input).map_err(|e| e.to_string())
        }),
    )
    .expect("static tool definition")
}

/// The hardened lookup: alphanumeric input of bounded length, bound into a
/// fixed `SELECT hash FROM users WHERE username = ?` as a literal value in
/// the statement tree — never by text interpolation.
pub fn make_sql_user_hash_tool(store: SharedTableStore) -> ToolSpec {
    ToolSpec::new(
        "user_hash",
        "Returns the password hash for the given username.",
        vec![
            FieldConstraint::alphanumeric(),
            FieldConstraint::max_length(64),
        ],
        Box::new(move |input| {
            let stmt = SqlStatement::Select {
                columns: Projection::Columns(vec!["hash".into()]),
                table: "users".into(),
                where_clause: Some(Condition::Equals(
                    Operand::Column("username".into()),
                    Operand::Literal(input.to_string()),
                )),
            };
            let mut store = store.lock().expect("table store lock");
            match sql_execute(&mut store, &stmt).map_err(|e| e.to_string())? {
                ExecOutcome::Rows { rows, .. } => Ok(rows
                    .first()
                    .and_then(|r| r.first())
                    .cloned()
                    .unwrap_or_else(|| "not found".to_string())),
                ExecOutcome::Affected(_) => Err("unexpected non-query result".to_string()),
            }
        }),
    )
    .expect("static tool definition")
}
