//! Supervisory control of discrete-event systems.
//!
//! Generators (deterministic automata with controllable and uncontrollable events)
//! model plants, specifications and supervisors. On top of the language
//! operations this crate provides supremal controllable synthesis, natural
//! projection and feasible supervisors under partial observation, supervisor
//! reduction by control congruence, localization over an arbitrary partition of
//! the controllable events, and decomposition of a supervisor into per-channel
//! controllers.
//!
//! ```
//! use dsctl::{supremal_controllable, Generator};
//!
//! let ev = [("a", true), ("u", false)];
//! let plant = Generator::from_parts("G", &ev, 3, &[2], &[(0, "a", 1), (1, "u", 2)]).unwrap();
//! let spec = Generator::from_parts("E", &ev, 2, &[1], &[(0, "a", 1)]).unwrap();
//! // `a` cannot be allowed without also admitting the uncontrollable `u`.
//! assert!(supremal_controllable(&spec, &plant).unwrap().supervisor.is_empty_generator());
//! ```

pub mod alphabet;
pub mod distribution;
pub mod error;
pub mod format;
pub mod generator;
pub mod guideway;
pub mod localization;
pub mod observation;
pub mod ops;
pub mod reduction;
pub mod report;
pub mod synthesis;

pub use alphabet::{Alphabet, EventDecl};
pub use distribution::{
    build_feasible_local, check_lemma1, decompose_by_theorem1, is_conormal, is_coparanormal,
    is_decomposable, lemma1_holds, Decomposition, ProjectionFamily,
};
pub use error::{Error, Hypothesis, Result};
pub use generator::Generator;
pub use guideway::{gen_guideway, Guideway};
pub use localization::{
    build_selflooped, is_local_controller, is_local_controller_within, localize, reduce_local,
    verify_proposition1, ControlPartition, LocalControllerSet,
};
pub use observation::{
    build_feasible_supervisor, inverse_project, is_normal, is_observable, is_paranormal,
    is_relative_observable, project, project_with_cells, FeasibleSupervisor, ProjectionSpec,
};
pub use ops::{
    is_nonblocking, language_equal, language_subset, marked_language_equal, meet, meet_all,
    subset_witness, sync_product, trim, union,
};
pub use reduction::{
    compute_profile, control_consistent, is_control_equivalent, is_normal_reduction,
    reduce_supervisor, ReductionProfile,
};
pub use synthesis::{disabled_events, is_controllable, supremal_controllable, SynthesisResult};
