//! LZ77 and LZ78 factorization over a compressed suffix tree in
//! `(1+ε)·n·lg n + O(n)` bits of working space.
//!
//! Texts are handled as [`suffix::TextBuffer`]s: input symbols are shifted
//! up by one and a unique smallest sentinel `0` is appended. All positions,
//! ranks and node identifiers are 1-based.

pub mod audit;
pub mod batch;
pub mod bitvec;
pub mod cli;
pub mod codec;
pub mod epsilon;
pub mod error;
pub mod lz77;
pub mod lz78;
pub mod oracle;
pub mod sst;
pub mod suffix;

pub use epsilon::Epsilon;
pub use error::{Error, Result};
pub use lz77::{factorize_lz77, Lz77Factorization};
pub use lz78::{factorize_lz78, Lz78Factorization};
pub use suffix::TextBuffer;

/// One factor of a factorization.
///
/// `reference` is a referred position for LZ77 and a referred factor index
/// for LZ78; `literal` is the free letter, or the fresh character of a
/// classic LZ77 or LZ78 factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub start: usize,
    pub len: usize,
    pub reference: Option<usize>,
    pub literal: Option<u32>,
}

/// Which factorization to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Lz77,
    /// LZ77 with a fresh character ending every referencing factor.
    Lz77Classic,
    Lz78,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Lz77, Algorithm::Lz77Classic, Algorithm::Lz78];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lz77 => "lz77",
            Algorithm::Lz77Classic => "lz77c",
            Algorithm::Lz78 => "lz78",
        }
    }

    /// Factor list of `text` under this algorithm.
    pub fn factorize(self, text: &TextBuffer, eps: Epsilon) -> Result<Vec<Factor>> {
        Ok(match self {
            Algorithm::Lz77 => factorize_lz77(text, eps, false)?.factors(text),
            Algorithm::Lz77Classic => factorize_lz77(text, eps, true)?.factors(text),
            Algorithm::Lz78 => factorize_lz78(text, eps)?.factors(text),
        })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown algorithm {s:?}")))
    }
}
