//! Report documents shared by the `loopspace` binary and its tests.

pub mod report;
