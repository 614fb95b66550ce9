use serde::{Deserialize, Serialize};

use crate::bitmap::Status;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusChange {
    pub id: u64,
    pub status: Status,
}

/// One registry mutation: the version it produced and the bit changes it
/// carried. Versions increase strictly by one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusDelta {
    pub version: u64,
    pub changes: Vec<StatusChange>,
}
