//! Protograph base matrices for terminated spatially coupled ensembles,
//! decoding windows, bit-level mappings and cyclic lifting.

mod base;
mod codefile;
mod ensemble;
mod lift;
mod mapping;

pub use base::BaseMatrix;
pub use codefile::{code_from_json, code_to_json, read_alist, read_code_file, write_alist, write_code_file};
pub use ensemble::{coupled_base, sc_ensemble, window_base, ScEnsemble};
pub use lift::{lift, tanner_girth, BaseEdge, LiftConfig, LiftReport, LiftedCode};
pub use mapping::{bit_mapping, BitMapping, MappingScheme};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtographError {
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("column {0} of the base matrix is all zero")]
    EmptyColumn(usize),
    #[error("at least one component matrix is required")]
    NoBlocks,
    #[error("component matrices differ in shape")]
    BlockShapeMismatch,
    #[error("invalid degree pair ({dv}, {dc}): need dv >= 2 and dv | dc with dc > dv")]
    Degrees { dv: usize, dc: usize },
    #[error("coupling length {s} must be at least mu + 1 = {}", mu + 1)]
    TooFewPositions { s: usize, mu: usize },
    #[error("window size {w} must be at least mu + 1 = {}", mu + 1)]
    WindowTooSmall { w: usize, mu: usize },
    #[error("bit mapping: {0}")]
    Mapping(String),
    #[error("lifting size {q} is smaller than the largest base entry {max_entry}")]
    LiftTooSmall { q: usize, max_entry: u32 },
    #[error("girth target must be an even number >= 4, got {0}")]
    GirthTarget(usize),
    #[error("expected {expected} shifts, got {got}")]
    ShiftCount { expected: usize, got: usize },
    #[error("shift {shift} out of range for lifting size {q}")]
    ShiftOutOfRange { shift: u32, q: usize },
    #[error("code file: {0}")]
    CodeFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
