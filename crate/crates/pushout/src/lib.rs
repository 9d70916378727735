//! Radial push-out of a closed set off the simplices of a subcomplex.
//!
//! A closed set `S` is modeled by weighted interior samples plus flags for
//! simplices it fills ([`SetModel`]). A push clears the interior of one
//! partial simplex by projecting its samples radially from an apex onto the
//! boundary; [`run`] repeats until only full simplices remain and records
//! the deformations as a [`TransportMap`].

pub mod cone;
pub mod error;
pub mod maps;
pub mod model;
pub mod near;
pub mod push;
pub mod retract;
pub mod run;

pub use cone::{ConeImage, ConeModel, TOL_CONE_ANGLE};
pub use error::{PushoutError, Result};
pub use maps::{b_and_hbar, g_inverse, g_map, h_to_face, k_fn};
pub use model::{Sample, SampleData, SetModel, SetModelData};
pub use near::{approximate_near, NearOutput, NearSummary};
pub use push::{detect_partial_and_rank, push, PartialReport, PushRecord, PushStats, RankVector};
pub use retract::{retract_chain, RetractChain, RetractStage};
pub use run::{run, transport_eval, transport_eval_batch, RunOptions, RunOutput, RunStats, TransportMap};
