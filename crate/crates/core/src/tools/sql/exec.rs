//! Statement execution over text-valued tables.

use super::{Condition, Operand, Projection, SqlError, SqlStatement, Table, TableStore};

/// Result of executing one statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecOutcome {
    Rows {
        columns: Vec<String>,
        rows: Vec<Vec<String>>,
    },
    Affected(usize),
}

impl ExecOutcome {
    /// Human/agent-readable rendering: one line per row with values joined
    /// by `", "`, `(no rows)` for an empty result set, and `affected: n`
    /// for data-changing statements.
    pub fn render(&self) -> String {
        match self {
            ExecOutcome::Rows { rows, .. } => {
                if rows.is_empty() {
                    "(no rows)".to_string()
                } else {
                    rows.iter()
                        .map(|row| row.join(", "))
                        .collect::<Vec<_>>()
                        .join("\n")
                }
            }
            ExecOutcome::Affected(n) => format!("affected: {n}"),
        }
    }
}

fn column_index(table: &Table, name: &str) -> Result<usize, SqlError> {
    table
        .columns
        .iter()
        .position(|c| c.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            SqlError::Execution(format!(
                "unknown column '{name}' in table '{}'",
                table.name
            ))
        })
}

fn resolve<'a>(op: &'a Operand, table: &Table, row: &'a [String]) -> Result<&'a str, SqlError> {
    match op {
        Operand::Literal(value) => Ok(value),
        Operand::Column(name) => {
            let index = column_index(table, name)?;
            Ok(&row[index])
        }
    }
}

pub(crate) fn eval_condition(
    cond: &Condition,
    table: &Table,
    row: &[String],
) -> Result<bool, SqlError> {
    match cond {
        Condition::Equals(left, right) => {
            Ok(resolve(left, table, row)? == resolve(right, table, row)?)
        }
        Condition::And(a, b) => {
            Ok(eval_condition(a, table, row)? && eval_condition(b, table, row)?)
        }
        Condition::Or(a, b) => Ok(eval_condition(a, table, row)? || eval_condition(b, table, row)?),
    }
}

fn matching_rows(table: &Table, where_clause: &Option<Condition>) -> Result<Vec<usize>, SqlError> {
    let mut indices = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let keep = match where_clause {
            Some(cond) => eval_condition(cond, table, row)?,
            None => true,
        };
        if keep {
            indices.push(i);
        }
    }
    Ok(indices)
}

fn require_table<'a>(store: &'a TableStore, name: &str) -> Result<&'a Table, SqlError> {
    store
        .get(name)
        .ok_or_else(|| SqlError::Execution(format!("unknown table '{name}'")))
}

/// Executes one statement. Selected rows come back in insertion order;
/// DELETE and UPDATE report how many rows they touched.
pub fn sql_execute(store: &mut TableStore, stmt: &SqlStatement) -> Result<ExecOutcome, SqlError> {
    match stmt {
        SqlStatement::CreateTable { name, columns } => {
            store.create(name, columns.clone())?;
            Ok(ExecOutcome::Affected(0))
        }
        SqlStatement::Insert { table, values } => {
            let t = require_table(store, table)?;
            if values.len() != t.columns.len() {
                return Err(SqlError::Execution(format!(
                    "insert arity {} does not match {} columns of '{}'",
                    values.len(),
                    t.columns.len(),
                    t.name
                )));
            }
            let name = t.name.clone();
            store
                .get_mut(&name)
                .expect("table just resolved")
                .rows
                .push(values.clone());
            Ok(ExecOutcome::Affected(1))
        }
        SqlStatement::Select {
            columns,
            table,
            where_clause,
        } => {
            let t = require_table(store, table)?;
            let indices = matching_rows(t, where_clause)?;
            let (names, projection): (Vec<String>, Vec<usize>) = match columns {
                Projection::Star => (t.columns.clone(), (0..t.columns.len()).collect()),
                Projection::Columns(requested) => {
                    let mut names = Vec::with_capacity(requested.len());
                    let mut proj = Vec::with_capacity(requested.len());
                    for name in requested {
                        let index = column_index(t, name)?;
                        names.push(t.columns[index].clone());
                        proj.push(index);
                    }
                    (names, proj)
                }
            };
            let rows = indices
                .into_iter()
                .map(|i| projection.iter().map(|&c| t.rows[i][c].clone()).collect())
                .collect();
            Ok(ExecOutcome::Rows {
                columns: names,
                rows,
            })
        }
        SqlStatement::Delete {
            table,
            where_clause,
        } => {
            let t = require_table(store, table)?;
            let doomed: std::collections::BTreeSet<usize> =
                matching_rows(t, where_clause)?.into_iter().collect();
            let count = doomed.len();
            let name = t.name.clone();
            let t = store.get_mut(&name).expect("table just resolved");
            t.rows = std::mem::take(&mut t.rows)
                .into_iter()
                .enumerate()
                .filter_map(|(i, row)| (!doomed.contains(&i)).then_some(row))
                .collect();
            Ok(ExecOutcome::Affected(count))
        }
        SqlStatement::Update {
            table,
            assignments,
            where_clause,
        } => {
            let t = require_table(store, table)?;
            let targets = matching_rows(t, where_clause)?;
            let resolved: Vec<(usize, String)> = assignments
                .iter()
                .map(|(col, val)| column_index(t, col).map(|i| (i, val.clone())))
                .collect::<Result<_, _>>()?;
            let count = targets.len();
            let name = t.name.clone();
            let t = store.get_mut(&name).expect("table just resolved");
            for i in targets {
                for (col, val) in &resolved {
                    t.rows[i][*col] = val.clone();
                }
            }
            Ok(ExecOutcome::Affected(count))
        }
    }
}
