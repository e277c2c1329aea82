//! Finite-state robot (FSR) teams performing distributed construction on 2D
//! grids, under visual (square-type) and scalar-field sensing.
//!
//! The crate provides:
//!
//! - the grid/environment/field model with exact rational field arithmetic
//!   ([`grid`], [`env`], [`rational`]),
//! - FSR controllers: trigger formulas, modifications, transition templates,
//!   and the collapse transform ([`controller`]),
//! - a synchronous team simulator with determinism enforcement, collision
//!   failure rules, and bounded-step verification ([`sim`]),
//! - brute-force fixed-parameter solvers for the controller/team/environment
//!   design problems ([`solve`]),
//! - hardness gadget generators with independent oracles for end-to-end
//!   cross-validation ([`reductions`]),
//! - instance serialization and ASCII rendering ([`io`], [`render`]).

pub mod controller;
pub mod env;
pub mod grid;
pub mod io;
pub mod rational;
pub mod reductions;
pub mod render;
pub mod sim;
pub mod solve;

pub use controller::{
    build_collision_guard, collapse_transitions, instantiate_templates,
    template_instantiation_count, Controller, Formula,
    Modification, Predicate, Rel, Sensing, StateId, Transition, TransitionTemplate,
};
pub use env::{
    structure_present, Environment, EnvironmentSf, EnvironmentSt, FieldKind, FieldSpec,
    SquareType, Structure, E_ROBOT, E_X, FQ_ROBOT, FQ_X,
};
pub use grid::{Direction, GridCoord, Move};
pub use io::{
    canonical_json, parse_instance, Bounds, InstanceDocument, IoError, ReportVerdict, RunReport,
    SCHEMA_VERSION,
};
pub use rational::{rat, Rational};
pub use reductions::{
    gadget_cdtmc_to_verify_sf, gadget_domset_to_codesign_sf, gadget_domset_to_envdes_sf,
    gadget_domset_to_teamdes_sf, oracle_dominating_set, oracle_dtm_run, Dtm, EnvDesVariant,
    GadgetAudit, GadgetBundle, GadgetProvenance, Graph, ReductionError, TeamDesVariant,
};
pub use render::{render_ascii, RenderError, RenderOverlay, MAX_RENDER_DIM};
pub use sim::{
    run_verify, run_verify_all_positionings, run_verify_any_positioning, run_verify_traced, step,
    FailureReason, StepOutcome, TeamConfiguration, Trace, Verdict,
};
pub use solve::{
    solve_cont_des_ls, solve_env_des, solve_env_des_capped, solve_team_des_homogeneous,
    solve_team_des_ls, solve_team_env_des_ls, solve_team_env_des_ls_capped, team_multiset_count,
    ContDesInstance, DesignSolution, EnvDesInstance, EnvSpace, InstanceOutcome, ProblemInstance,
    SolveError, TeamDesInstance, TeamEnvDesInstance, VerifyInstance, DEFAULT_CANDIDATE_CAP,
};
