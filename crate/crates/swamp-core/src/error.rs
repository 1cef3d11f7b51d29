use core::fmt;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A series value was NaN or infinite.
    NonFinite { index: usize },
    /// The series has too few points for the requested operation.
    TooShort { n: usize, min: usize },
    /// Subsequence length outside the supported range.
    BadSubseqLen { len: usize, n: usize },
    /// Warping window exceeds its maximum for the sequence length.
    BadWindow { window: usize, max: usize },
    /// Two sequences that must match in length do not.
    LengthMismatch { left: usize, right: usize },
    /// Downsampling factor outside 1..=max.
    BadFactor { factor: usize, max: usize },
    /// Subsequence start beyond the last valid position.
    BadStart { start: usize, max: usize },
    /// Pruned-mask length does not match the number of positions.
    MaskLength { got: usize, want: usize },
    /// Epsilon must be finite and non-negative.
    BadEpsilon { value: f64 },
    /// Input too large for a brute-force operation without an explicit override.
    TooLarge { n: usize, limit: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::NonFinite { index } => write!(f, "non-finite value at index {index}"),
            Error::TooShort { n, min } => write!(f, "series has {n} points, need at least {min}"),
            Error::BadSubseqLen { len, n } => {
                write!(f, "subsequence length {len} not in 4..={n}")
            }
            Error::BadWindow { window, max } => write!(f, "window {window} exceeds {max}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::BadFactor { factor, max } => write!(f, "factor {factor} not in 1..={max}"),
            Error::BadStart { start, max } => write!(f, "start {start} exceeds {max}"),
            Error::MaskLength { got, want } => write!(f, "mask has {got} entries, want {want}"),
            Error::BadEpsilon { value } => write!(f, "epsilon {value} must be finite and >= 0"),
            Error::TooLarge { n, limit } => {
                write!(f, "n = {n} exceeds the brute-force guard of {limit}; pass force to override")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
