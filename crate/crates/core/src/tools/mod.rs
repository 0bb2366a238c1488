//! Built-in agent tools.
//!
//! The SQL pair is the lab's centerpiece: a deliberately unvalidated raw
//! tool demonstrating excessive agency, and a hardened lookup that binds
//! its one parameter structurally. The terminal is policy-gated with a
//! recordable fake mode so command-injection exercises stay hermetic; the
//! vector-store query tool feeds retrieval results to agents unsanitized
//! (neutralizing them is the agent's job); threat-intel adapters are
//! declarative URL templates with a fixture mode.

pub mod calculator;
pub mod intel;
pub mod sql;
pub mod terminal;
mod vector;

pub use calculator::{calculator_eval, make_calculator_tool};
pub use intel::{api_tool_call, make_api_tool, preset, ApiMode, ApiToolSpec, PRESET_NAMES};
pub use sql::{
    make_sql_raw_tool, make_sql_user_hash_tool, render_statement, run_script, seed_users_table,
    sql_execute, sql_parse, Condition, ExecOutcome, Operand, Projection, SharedTableStore,
    SqlError, SqlStatement, TableStore,
};
pub use terminal::{
    make_terminal_tool, terminal_exec, CommandPolicy, FakeTerminal, PolicyViolation,
};
pub use vector::make_vector_query_tool;

#[cfg(test)]
mod tests;
