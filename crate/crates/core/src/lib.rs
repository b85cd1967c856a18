//! Total positivity and sequence shape analysis in exact rational arithmetic.
//!
//! The crate classifies matrices by the signs of their minors, measures the
//! modality and higher-order convexity of finite sequences, and checks how
//! sign-regular kernels move those shapes around.

pub mod cli;
pub mod decompose;
pub mod dompoly;
pub mod error;
pub mod oracle;
pub mod rational;
pub mod seqshape;
pub mod tpcheck;
pub mod transform;

pub use error::{Error, Result};
pub use rational::Rational;
pub use seqshape::{modality, s_plus, sign_changes, Interval, ModalityProfile, Seq, SignPattern};
pub use tpcheck::{classify, Kernel, MinorSign, SRReport, TransformVerdict, VerdictKind};
