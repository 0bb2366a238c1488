//! The canonical ReAct prompt template.
//!
//! Rendered bit-exact by this one function. Every keyword line the parser
//! and sanitizer care about originates here: `Question:`, `Thought:`,
//! `Action:`, `Action Input:`, `Observation:`, and `Final Answer:`.

use super::{AgentConfig, AgentStep};

/// Renders the full prompt for one loop iteration: tool list, format
/// block, the question, and the scratchpad of completed steps.
pub fn render_react_prompt(config: &AgentConfig, question: &str, history: &[AgentStep]) -> String {
    let mut prompt = String::new();

    prompt.push_str(
        "Answer the following question as best you can. You have access to the following tools:\n\n",
    );
    for tool in config.tools.iter() {
        prompt.push_str(&format!("{}: {}\n", tool.name, tool.description));
    }

    let names = config.tools.names().join(", ");
    prompt.push_str(&format!(
        "\nUse the following format:\n\n\
         Question: the input question you must answer\n\
         Thought: you should always think about what to do\n\
         Action: the tool to use, one of [{names}]\n\
         Action Input: the input to the action\n\
         Observation: the result of the action\n\
         ... (this Thought/Action/Action Input/Observation can repeat N times)\n\
         Thought: I now know the final answer\n\
         Final Answer: the final answer to the original question\n\n\
         Begin!\n\n\
         Question: {question}\n"
    ));

    for step in history {
        if let (Some(action), Some(observation)) = (&step.action, &step.observation) {
            prompt.push_str(&format!(
                "Thought: {}\nAction: {}\nAction Input: {}\nObservation: {}\n",
                step.thought, action.tool, action.input, observation
            ));
        }
    }
    prompt
}
