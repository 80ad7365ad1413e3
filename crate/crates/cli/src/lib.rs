//! Report types emitted by the `netident` binary, shared with its tests.

pub mod report;
