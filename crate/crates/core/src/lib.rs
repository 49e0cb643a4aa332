//! Minimum total (transmit + decoding) power for regular-LDPC coded links.
//!
//! Communicating reliably costs power twice: at the antenna and in the
//! decoder. This library models both sides for (d_v, d_c)-regular LDPC
//! codes with hard-decision message-passing decoders and finds the
//! operating points and coding strategies that minimize their sum.
//!
//! The pieces:
//!
//! - [`channel`]: Gaussian tail math with its Mills-ratio sandwich, BPSK
//!   and Gray-mapped square-QAM flip probabilities, link-budget Eb/N0,
//!   constellation sizing, and the Shannon limit.
//! - [`de`]: density evolution on the BSC for Gallager-A, Gallager-B and
//!   general table-driven symmetric rules, with log-domain iterates,
//!   decoding thresholds, and minimum-iteration searches.
//! - [`codes`]: code-parameter algebra: design rate, the girth-limited
//!   independent-iteration budget, blocklength bounds, the minimum
//!   AWGN-pseudoweight bound, and minimum-blocklength code tables.
//! - [`graph`]: Tanner-graph construction (progressive edge growth), exact
//!   girth, collinear layouts with exact wire-area accounting,
//!   crossing-number-based wiring-area bounds, and a Monte-Carlo BSC
//!   decoding oracle.
//! - [`power`]: the node, wire, and physical-circuit decoding-power models
//!   with characterization-table ingestion, Elmore interconnect delay, and
//!   underclocked parallel decoder banks.
//! - [`optim`]: Lambert-W closed forms, exact numeric total-power
//!   minimization per model, the uncoded baseline, strategy sweeps over
//!   (distance, target error probability) grids, and scaling probes for
//!   the asymptotic growth laws.
//!
//! Monte-Carlo trials and sweep grids parallelize over rayon when the
//! default `parallel` feature is enabled; disabling it yields a fully
//! sequential build with bit-identical results.

pub mod channel;
pub mod codes;
pub mod de;
pub mod error;
pub mod graph;
pub mod optim;
pub mod par;
pub mod power;

pub use error::{Error, Result};
