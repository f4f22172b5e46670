//! Block-and-translate configurations: the builder, the certificate it
//! emits, and an independent verifier.

mod build;
mod cert;
mod verify;

pub use build::{build_configuration, enumerate_chain_sums, panel_width, BuildOptions};
pub use cert::{Block, ConfigCertificate, SequenceFingerprint, CERTIFICATE_VERSION};
pub use verify::{verify_certificate, ChainFailure, ChainSumReport, Violation};
