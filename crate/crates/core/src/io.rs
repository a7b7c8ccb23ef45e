//! Placeholder; replaced by the file-format module.
