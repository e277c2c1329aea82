//! Generators that translate two classic decision problems — dominating
//! set and bounded-tape Turing-machine acceptance — into construction
//! problem instances, together with independent brute-force oracles. Every
//! generated instance's answer equals the oracle answer on its source, so
//! the pair cross-validates the simulator and the design solvers end to
//! end.

pub mod cdtmc;
pub mod codesign;
pub mod domset_env;
pub mod domset_team;
pub mod dtm;
pub mod graph;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::Controller;
use crate::env::EnvError;
use crate::solve::{ProblemInstance, SolveError};

pub use cdtmc::gadget_cdtmc_to_verify_sf;
pub use codesign::gadget_domset_to_codesign_sf;
pub use domset_env::{
    column_candidate_env, gadget_domset_to_envdes_sf, track_candidate_env, EnvDesVariant,
};
pub use domset_team::{gadget_domset_to_teamdes_sf, teamdes_step_bound, TeamDesVariant};
pub use dtm::{oracle_dtm_run, sample_machines, Dtm, DtmRule, TapeDir};
pub use graph::{all_labeled_graphs, oracle_dominating_set, Graph};

#[derive(Error, Debug)]
pub enum ReductionError {
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("generated instance failed validation: {0}")]
    Internal(#[from] SolveError),
    #[error("generated environment rejected a placement: {0}")]
    Environment(#[from] EnvError),
}

/// Where a generated instance came from.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "source")]
pub enum GadgetProvenance {
    /// Bounded-tape machine acceptance: does `machine` accept `input`
    /// within `tape_budget` cells?
    BoundedAcceptance {
        machine: Dtm,
        input: String,
        tape_budget: usize,
    },
    /// Dominating set: does `graph` have a dominating set of size ≤ `k`?
    DominatingSet {
        graph: Graph,
        k: usize,
        family: String,
        variant: String,
    },
}

/// A generated problem instance plus its source. The instance always passes
/// its own structural validation.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GadgetBundle {
    pub instance: ProblemInstance,
    pub provenance: GadgetProvenance,
}

/// Measured size parameters of a bundle's controllers and arena.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GadgetAudit {
    pub controller_count: usize,
    pub max_state_count: usize,
    pub max_out_degree: usize,
    pub max_formula_length: u32,
    pub grid_width: u32,
    pub grid_height: u32,
    pub field_spec_count: usize,
}

impl GadgetBundle {
    fn controllers(&self) -> Vec<&Controller> {
        match &self.instance {
            ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i) => {
                i.team.iter().collect()
            }
            ProblemInstance::ContDesLsSt(_) | ProblemInstance::ContDesLsSf(_) => Vec::new(),
            ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => {
                i.library.iter().collect()
            }
            ProblemInstance::EnvDesSt(i) | ProblemInstance::EnvDesSf(i) => i.team.iter().collect(),
            ProblemInstance::TeamEnvDesLsSt(i) | ProblemInstance::TeamEnvDesLsSf(i) => {
                i.library.iter().collect()
            }
        }
    }

    /// Measures the generated controllers and arena. `field_spec_count`
    /// counts declared field specs including the two reserved ones (zero
    /// for square-type instances).
    pub fn audit(&self) -> GadgetAudit {
        let controllers = self.controllers();
        let (grid_width, grid_height, field_spec_count) = match &self.instance {
            ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i) => (
                i.env.width(),
                i.env.height(),
                i.env.as_sf().map_or(0, |e| e.field_set().len()),
            ),
            ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => (
                i.env.width(),
                i.env.height(),
                i.env.as_sf().map_or(0, |e| e.field_set().len()),
            ),
            ProblemInstance::ContDesLsSt(i) | ProblemInstance::ContDesLsSf(i) => (
                i.env.width(),
                i.env.height(),
                i.env.as_sf().map_or(0, |e| e.field_set().len()),
            ),
            ProblemInstance::EnvDesSt(i) | ProblemInstance::EnvDesSf(i) => (
                i.space.width(),
                i.space.height(),
                i.space.sf_field_count().map_or(0, |n| n + 2),
            ),
            ProblemInstance::TeamEnvDesLsSt(i) | ProblemInstance::TeamEnvDesLsSf(i) => (
                i.space.width(),
                i.space.height(),
                i.space.sf_field_count().map_or(0, |n| n + 2),
            ),
        };
        GadgetAudit {
            controller_count: controllers.len(),
            max_state_count: controllers.iter().map(|c| c.state_count()).max().unwrap_or(0),
            max_out_degree: controllers.iter().map(|c| c.max_out_degree()).max().unwrap_or(0),
            max_formula_length: controllers
                .iter()
                .map(|c| c.max_formula_length())
                .max()
                .unwrap_or(0),
            grid_width,
            grid_height,
            field_spec_count,
        }
    }
}
