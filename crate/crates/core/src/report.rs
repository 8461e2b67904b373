use serde::{Deserialize, Serialize};

/// Pass/fail outcome of one verification claim, with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, failure: Option<String>) -> Self {
        Verdict {
            name: name.into(),
            pass: failure.is_none(),
            witness: failure,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, None)
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Self::new(name, Some(witness.into()))
    }

    /// A passing verdict that still carries informational detail.
    pub fn note(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            pass: true,
            witness: Some(detail.into()),
        }
    }
}
