//! Policy-gated terminal tool.
//!
//! Three policies: `Unrestricted` runs through the host shell (instructor
//! demos only — nothing in the automated suite uses it), `Allowlist`
//! permits a command only when its first word matches before running it,
//! and `Fake` answers from a canned map while logging every attempted
//! command. The fake log is the compromise evidence the security lab
//! inspects.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::agent::{FieldConstraint, ToolSpec};

/// Raised when a policy refuses to run a command.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("policy violation: command not permitted: {command}")]
pub struct PolicyViolation {
    pub command: String,
}

/// A recordable in-memory terminal: exact-command → output map plus an
/// append-only invocation log. Every attempted command is logged, mapped
/// or not.
#[derive(Debug, Clone, Default)]
pub struct FakeTerminal {
    map: BTreeMap<String, String>,
    log: Arc<Mutex<Vec<String>>>,
}

impl FakeTerminal {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        FakeTerminal {
            map,
            log: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// Shared handle to the invocation log; clones observe the same log.
    pub fn log_handle(&self) -> Arc<Mutex<Vec<String>>> {
        self.log.clone()
    }

    pub fn log_snapshot(&self) -> Vec<String> {
        self.log.lock().expect("terminal log lock").clone()
    }
}

/// How the terminal tool treats commands.
#[derive(Debug, Clone)]
pub enum CommandPolicy {
    /// Run everything through the host shell. Demo use only.
    Unrestricted,
    /// Run through the host shell only when the command's first
    /// whitespace-delimited word equals one of the prefixes.
    Allowlist(Vec<String>),
    /// Answer from the canned map; log every attempt; never touch a shell.
    Fake(FakeTerminal),
}

/// True when the command's first word is one of the allowed prefixes.
pub fn allowlist_permits(prefixes: &[String], command: &str) -> bool {
    command
        .split_whitespace()
        .next()
        .map(|first| prefixes.iter().any(|p| p == first))
        .unwrap_or(false)
}

fn run_host_shell(command: &str) -> String {
    match std::process::Command::new("sh").arg("-c").arg(command).output() {
        Ok(output) => {
            let mut text = String::from_utf8_lossy(&output.stdout).into_owned();
            text.push_str(&String::from_utf8_lossy(&output.stderr));
            text
        }
        Err(e) => format!("failed to spawn shell: {e}"),
    }
}

/// Executes one command under the policy.
pub fn terminal_exec(
    policy: &CommandPolicy,
    command: &str,
) -> std::result::Result<String, PolicyViolation> {
    match policy {
        CommandPolicy::Unrestricted => Ok(run_host_shell(command)),
        CommandPolicy::Allowlist(prefixes) => {
            if allowlist_permits(prefixes, command) {
                Ok(run_host_shell(command))
            } else {
                Err(PolicyViolation {
                    command: command.to_string(),
                })
            }
        }
        CommandPolicy::Fake(fake) => {
            fake.log
                .lock()
                .expect("terminal log lock")
                .push(command.to_string());
            Ok(fake
                .map
                .get(command)
                .cloned()
                .unwrap_or_else(|| "command not found".to_string()))
        }
    }
}

/// Wraps a policy as the agent-facing `terminal` tool. Extra input
/// constraints (e.g. a command-prefix allowlist enforced at validation
/// time) apply before the handler runs.
pub fn make_terminal_tool(policy: CommandPolicy, constraints: Vec<FieldConstraint>) -> ToolSpec {
    ToolSpec::new(
        "terminal",
        "Executes a command and returns its output.",
        constraints,
        Box::new(move |input| terminal_exec(&policy, input).map_err(|v| v.to_string())),
    )
    .expect("static tool definition")
}
