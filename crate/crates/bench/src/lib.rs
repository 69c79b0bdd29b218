//! Shared inputs for the benchmarks.

use glyphometrics::fixtures::synthetic_stages;
use glyphometrics::io::CorpusDocument;

/// The middle synthetic stage with `glyphs` glyphs.
pub fn stage(glyphs: usize) -> CorpusDocument {
    synthetic_stages(glyphs, 7).swap_remove(1)
}
