//! Scenario runner, corpus generator and report emitter for `ordpsr`.

pub mod corpus;
pub mod pipeline;
pub mod report;
pub mod scenario;
