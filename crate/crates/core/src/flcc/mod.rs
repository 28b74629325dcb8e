//! Folded Lagrange coded computing: encoding a batch of matrices across
//! workers, honest worker computation and the entry-wise master decoder.

mod decode;
mod encode;
mod job;
mod params;
pub mod threshold;

pub use decode::{
    master_decode, DecodeMode, DecodeOptions, FailureKind, MasterOutcome, MasterReport,
};
pub use encode::{flcc_encode, flcc_encode_with_masks, worker_compute, Encoding, WorkerReturn};
pub use job::{probe_degree, BuiltinJob, PolynomialJob};
pub use params::{FlccDims, FlccParams};
pub use threshold::{
    a_of_s, flcc_threshold_exact, flcc_threshold_paper, lcc_threshold, modified_rate,
    normalized_extra_computation, optimal_s, ThresholdSummary,
};

use crate::frs::FrsError;
use crate::poly::PolyError;
use crate::prune::PruneError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlccError {
    #[error("invalid FLCC parameters: {0}")]
    InvalidParams(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Frs(#[from] FrsError),
    #[error(transparent)]
    Prune(#[from] PruneError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
