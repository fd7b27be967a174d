//! Bogomolov multipliers of finite groups given by power-commutator
//! presentations, computed with the tails routine.

pub mod corpus;
pub mod engine;
pub mod lattice;
pub mod pipeline;
pub mod presentation;
pub mod structure;

pub use engine::{GroupElement, TailedElement, TailedPresentation};
pub use lattice::{IntMatrix, SnfResult};
pub use pipeline::{compute_b0, compute_schur, B0Result, Mode, Options, PipelineError};
pub use presentation::{parse_presentation, PcGroup, PcPresentation, Word};
