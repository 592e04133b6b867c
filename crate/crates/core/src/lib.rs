//! Core algorithms for the binomial random triangular group model.
//!
//! Everything in this crate is a pure function of its inputs and seeds and
//! only needs `alloc`. IO, file formats, thread pools and the command line
//! live in the `trigroup` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod collapse;
pub mod davkd;
pub mod letter;
pub mod presentation;
pub mod relator;
pub mod rng;
pub mod sampling;
pub mod threshold;

pub use collapse::{decide, Budget, Outcome, Verdict};
pub use letter::{Letter, Sign};
pub use presentation::{Presentation, RelatorSpace};
pub use relator::{Relator, RelatorError};
pub use sampling::{sample_presentation, SampleConfig};
