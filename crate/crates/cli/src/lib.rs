//! Command-line front end for `latsize`: widths, lattice sizes, family
//! closed forms, verification sweeps and lemma checks.

mod app;
pub mod document;
pub mod sweep;

pub use app::run;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Bad arguments or unreadable input.
    pub const USAGE: i32 = 1;
    /// A verification found a disagreement.
    pub const MISMATCH: i32 = 2;
    /// A search or enumeration budget ran out.
    pub const BUDGET: i32 = 3;
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn success(stdout: String) -> Self {
        Self {
            code: exit::OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(code: i32, stderr: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}
