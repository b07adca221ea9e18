//! Acceptance criteria for `vc-twist-core` live in `tests/acceptance.rs`.
