use serde_json::{json, Map, Value};

#[derive(Debug)]
pub enum Outcome {
    Pass,
    Fail,
    Usage(String),
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Usage(_) => 2,
        }
    }
}

/// A command result. `result` is the machine-readable payload; witnesses
/// carry their owning file format under keys such as `lat` or `coch`.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub outcome: Outcome,
    pub result: Value,
    pub text: String,
}

impl Report {
    pub fn new(command: &str, pass: bool, result: Value, text: String) -> Self {
        let outcome = if pass { Outcome::Pass } else { Outcome::Fail };
        Report { command: command.into(), outcome, result, text }
    }

    pub fn usage(command: &str, msg: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            outcome: Outcome::Usage(msg.into()),
            result: Value::Null,
            text: String::new(),
        }
    }

    /// Keys are sorted, so equal reports serialize to identical bytes.
    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        let status = match &self.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Usage(msg) => {
                m.insert("error".into(), json!(msg));
                "error"
            }
        };
        m.insert("status".into(), json!(status));
        if !self.result.is_null() {
            m.insert("result".into(), self.result.clone());
        }
        Value::Object(m).to_string()
    }
}
