//! On-disk formats: code bundles, circuit text, lookup tables and shot
//! dumps. All user-facing qubit and slot indices are 1-based.

mod bundle;
mod circuit_text;
mod lut;
mod shots;

pub use bundle::{parse_code_bundle, write_code_bundle, CodeBundle, BUILTIN_BUNDLE, TOY_BUNDLE};
pub use circuit_text::{parse_circuit, write_circuit};
pub use lut::{
    read_lut, read_lut_header, write_lut, LutHeader, LUT_HEADER_LEN, LUT_MAGIC, LUT_VERSION,
};
pub use shots::{
    read_shot_dump, write_shot_dump, ShotDump, SHOTS_HEADER_LEN, SHOTS_MAGIC, SHOTS_VERSION,
};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    /// Malformed text; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    /// Structurally malformed binary data.
    #[error("malformed {what}: {message}")]
    Binary { what: &'static str, message: String },
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },
    /// The content parsed but violates a code or circuit invariant.
    #[error(transparent)]
    Core(#[from] sdc_core::Error),
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}
