//! File formats, model fields and the command line for `krtorus-core`.

pub mod cli;
pub mod dot;
pub mod format;
pub mod presets;

pub use format::{parse_field, write_field, FormatError};
pub use presets::Preset;
