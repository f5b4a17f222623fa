use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one check. A failing verdict always carries a witness.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn pass(name: impl Into<String>) -> Self {
        Verdict { name: name.into(), pass: true, seed: None, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Verdict { name: name.into(), pass: false, seed: None, witness: Some(witness) }
    }

    /// Passes iff `ok`; the witness is only built on failure.
    pub fn check(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, witness())
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}
