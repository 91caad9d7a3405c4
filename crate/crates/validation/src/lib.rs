//! Acceptance checks for the `hamgraph` workspace live in `tests/acceptance.rs`.
