use core::fmt;

use serde::{Deserialize, Serialize};

/// Participants of a protocol run. `Elena` only takes part in the network
/// scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartyRole {
    Controller,
    Alice,
    Bob,
    Elena,
}

impl PartyRole {
    pub fn name(self) -> &'static str {
        match self {
            PartyRole::Controller => "controller",
            PartyRole::Alice => "alice",
            PartyRole::Bob => "bob",
            PartyRole::Elena => "elena",
        }
    }
}

impl fmt::Display for PartyRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
