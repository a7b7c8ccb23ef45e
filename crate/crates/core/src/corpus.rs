//! Placeholder; replaced by the bundled diagram corpus.
