//! Instance documents and run reports.
//!
//! Instances travel as versioned JSON. Rationals are strings (`"3/2"`,
//! `"0.5"`, `"2"`), never floats. The canonical form sorts object keys
//! and lists field placements row-major, so regenerated documents diff
//! cleanly; [`canonical_json`] ∘ [`parse_instance`] is the identity on
//! canonical text.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::{Controller, ControllerError, Sensing};
use crate::env::EnvError;
use crate::grid::GridCoord;
use crate::sim::{FailureReason, Verdict};
use crate::solve::{
    DesignSolution, InstanceOutcome, ProblemInstance, SolveError, DEFAULT_CANDIDATE_CAP,
};

/// Version tag this build writes and the only one it accepts.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("schema version {found} is unsupported (this build reads version {SCHEMA_VERSION})")]
    SchemaVersion { found: u32 },
    #[error("bounds block does not match the instance: stated {stated:?}, measured {measured:?}")]
    BoundsMismatch { stated: Bounds, measured: Bounds },
    #[error("{block}[{index}]: square ({col}, {row}) outside {width}x{height} grid")]
    PositionOutOfGrid {
        block: &'static str,
        index: usize,
        col: u32,
        row: u32,
        width: u32,
        height: u32,
    },
    #[error("controllers[{index}]: {source}")]
    BadController {
        index: usize,
        source: ControllerError,
    },
    #[error(transparent)]
    BadEnvironment(#[from] EnvError),
    #[error(transparent)]
    BadInstance(#[from] SolveError),
}

/// Size summary carried by every document: team size, largest state count,
/// largest out-degree, square-type sensory radius when one applies, and
/// the candidate cap design searches run under.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub team_size: usize,
    pub max_state_count: usize,
    pub max_out_degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate_cap: Option<u64>,
}

fn involved_controllers(instance: &ProblemInstance) -> Vec<&Controller> {
    match instance {
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

fn max_st_radius(controllers: &[&Controller]) -> Option<u32> {
    controllers
        .iter()
        .filter_map(|c| match c.sensing {
            Sensing::St { radius } => Some(radius),
            Sensing::Sf => None,
        })
        .max()
}

impl Bounds {
    /// Measures `instance`. Controller-design searches report their search
    /// bounds; everything else reports the controllers it carries.
    pub fn measure(instance: &ProblemInstance) -> Bounds {
        let cap = Some(DEFAULT_CANDIDATE_CAP);
        if let ProblemInstance::ContDesLsSt(i) | ProblemInstance::ContDesLsSf(i) = instance {
            return Bounds {
                team_size: i.t_count,
                max_state_count: i.q_max,
                max_out_degree: i.d,
                radius: i.radius,
                candidate_cap: cap,
            };
        }
        let controllers = involved_controllers(instance);
        let team_size = match instance {
            ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i) => i.team.len(),
            ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => i.t_count,
            ProblemInstance::EnvDesSt(i) | ProblemInstance::EnvDesSf(i) => i.team.len(),
            ProblemInstance::TeamEnvDesLsSt(i) | ProblemInstance::TeamEnvDesLsSf(i) => i.t_count,
            ProblemInstance::ContDesLsSt(_) | ProblemInstance::ContDesLsSf(_) => unreachable!(),
        };
        let candidate_cap = match instance {
            ProblemInstance::TeamEnvVerSt(_) | ProblemInstance::TeamEnvVerSf(_) => None,
            _ => cap,
        };
        Bounds {
            team_size,
            max_state_count: controllers.iter().map(|c| c.state_count()).max().unwrap_or(0),
            max_out_degree: controllers.iter().map(|c| c.max_out_degree()).max().unwrap_or(0),
            radius: max_st_radius(&controllers),
            candidate_cap,
        }
    }
}

/// One instance on disk: version tag, the problem itself, and a measured
/// size summary.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub schema: u32,
    pub instance: ProblemInstance,
    pub bounds: Bounds,
}

impl InstanceDocument {
    pub fn new(instance: ProblemInstance) -> InstanceDocument {
        let bounds = Bounds::measure(&instance);
        InstanceDocument {
            schema: SCHEMA_VERSION,
            instance,
            bounds,
        }
    }

    /// Full semantic check: version, tag/environment agreement, environment
    /// integrity, controller integrity, positions on the grid, and the
    /// bounds block agreeing with the instance.
    pub fn validate(&self) -> Result<(), IoError> {
        if self.schema != SCHEMA_VERSION {
            return Err(IoError::SchemaVersion { found: self.schema });
        }
        self.instance.validate()?;
        validate_environment(&self.instance)?;
        for (index, c) in involved_controllers(&self.instance).iter().enumerate() {
            c.validate()
                .map_err(|source| IoError::BadController { index, source })?;
        }
        validate_positions(&self.instance)?;
        let measured = Bounds::measure(&self.instance);
        if self.bounds != measured {
            return Err(IoError::BoundsMismatch {
                stated: self.bounds,
                measured,
            });
        }
        Ok(())
    }
}

fn validate_environment(instance: &ProblemInstance) -> Result<(), IoError> {
    match instance {
        ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i) => {
            i.env.validate()?;
        }
        ProblemInstance::ContDesLsSt(i) | ProblemInstance::ContDesLsSf(i) => {
            i.env.validate()?;
        }
        ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => {
            i.env.validate()?;
        }
        ProblemInstance::EnvDesSt(i) | ProblemInstance::EnvDesSf(i) => {
            if i.space.width() < 1 || i.space.height() < 1 {
                return Err(IoError::BadEnvironment(EnvError::EmptyGrid));
            }
        }
        ProblemInstance::TeamEnvDesLsSt(i) | ProblemInstance::TeamEnvDesLsSf(i) => {
            if i.space.width() < 1 || i.space.height() < 1 {
                return Err(IoError::BadEnvironment(EnvError::EmptyGrid));
            }
        }
    }
    Ok(())
}

fn check_positions(
    block: &'static str,
    positions: &[GridCoord],
    width: u32,
    height: u32,
) -> Result<(), IoError> {
    for (index, p) in positions.iter().enumerate() {
        if p.col < 1 || p.row < 1 || p.col > width || p.row > height {
            return Err(IoError::PositionOutOfGrid {
                block,
                index,
                col: p.col,
                row: p.row,
                width,
                height,
            });
        }
    }
    Ok(())
}

fn validate_positions(instance: &ProblemInstance) -> Result<(), IoError> {
    match instance {
        ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i) => {
            check_positions("p_i", &i.p_i, i.env.width(), i.env.height())?;
            check_positions("p_x", &[i.p_x], i.env.width(), i.env.height())
        }
        ProblemInstance::ContDesLsSt(i) | ProblemInstance::ContDesLsSf(i) => {
            check_positions("p_i", &i.p_i, i.env.width(), i.env.height())?;
            check_positions("p_x", &[i.p_x], i.env.width(), i.env.height())
        }
        ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => {
            check_positions("e_i", &i.e_i, i.env.width(), i.env.height())?;
            check_positions("p_x", &[i.p_x], i.env.width(), i.env.height())
        }
        ProblemInstance::EnvDesSt(i) | ProblemInstance::EnvDesSf(i) => {
            check_positions("p_i", &i.p_i, i.space.width(), i.space.height())?;
            check_positions("p_x", &[i.p_x], i.space.width(), i.space.height())
        }
        ProblemInstance::TeamEnvDesLsSt(i) | ProblemInstance::TeamEnvDesLsSf(i) => {
            check_positions("e_i", &i.e_i, i.space.width(), i.space.height())?;
            check_positions("p_x", &[i.p_x], i.space.width(), i.space.height())
        }
    }
}

/// Parses and validates a document, reporting the first offending path on
/// malformed input (for example `instance.team[1].transitions[0].trigger`).
pub fn parse_instance(text: &str) -> Result<InstanceDocument, IoError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: InstanceDocument =
        serde_path_to_error::deserialize(&mut de).map_err(|e| IoError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    doc.validate()?;
    Ok(doc)
}

/// Canonical text: pretty JSON with sorted keys and a trailing newline.
/// Placement lists inside the document are already row-major.
pub fn canonical_json(doc: &InstanceDocument) -> String {
    let value = serde_json::to_value(doc).expect("documents always serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("values always print");
    text.push('\n');
    text
}

/// Outcome label of a run or a design search.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportVerdict {
    Success,
    Failed,
    TimedOut,
    Found,
    Bottom,
}

impl ReportVerdict {
    /// Process exit code: 0 built/found, 1 conclusively not.
    pub fn exit_code(self) -> i32 {
        match self {
            ReportVerdict::Success | ReportVerdict::Found => 0,
            ReportVerdict::Failed | ReportVerdict::TimedOut | ReportVerdict::Bottom => 1,
        }
    }
}

/// What a command did, as one JSON line on standard output.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub verdict: ReportVerdict,
    /// Steps taken to success, the step a failure occurred on, or the
    /// bound a timeout exhausted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<DesignSolution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_path: Option<String>,
    pub wall_ms: u64,
}

impl RunReport {
    pub fn from_verdict(v: &Verdict, wall_ms: u64) -> RunReport {
        let (verdict, steps, failure) = match v {
            Verdict::Success { steps, .. } => (ReportVerdict::Success, Some(*steps), None),
            Verdict::Failed { reason, step } => (ReportVerdict::Failed, Some(*step), Some(*reason)),
            Verdict::TimedOut { bound } => (ReportVerdict::TimedOut, Some(*bound), None),
        };
        RunReport {
            verdict,
            steps,
            failure,
            solution: None,
            trace_path: None,
            wall_ms,
        }
    }

    pub fn from_outcome(outcome: &InstanceOutcome, wall_ms: u64) -> RunReport {
        match outcome {
            InstanceOutcome::Verdict(v) => RunReport::from_verdict(v, wall_ms),
            InstanceOutcome::Design(d) => RunReport {
                verdict: if d.is_found() {
                    ReportVerdict::Found
                } else {
                    ReportVerdict::Bottom
                },
                steps: None,
                failure: None,
                solution: Some(d.clone()),
                trace_path: None,
                wall_ms,
            },
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::{fval, Modification, Rel, Transition};
    use crate::env::{Environment, EnvironmentSf, FieldSpec, Structure, FQ_X};
    use crate::grid::Move;
    use crate::rational::Rational;
    use crate::reductions::{gadget_domset_to_teamdes_sf, Graph, TeamDesVariant};
    use crate::sim::run_verify;
    use crate::solve::VerifyInstance;

    /// 1x1 grid whose only square already carries the structure field; a
    /// single stay-forever robot sees it built at step one.
    fn tiny_done_instance() -> ProblemInstance {
        let mut env = EnvironmentSf::empty(1, 1, vec![]);
        env.overwrite_point_field(GridCoord::new(1, 1), FieldSpec::s_x()).unwrap();
        let c = Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                fval(FQ_X, Rel::Ge, Rational::ONE),
                Modification::None,
                Move::Stay,
                0,
            )],
            crate::controller::Sensing::Sf,
        );
        ProblemInstance::TeamEnvVerSf(VerifyInstance {
            env: Environment::Sf(env),
            team: vec![c],
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(1, 1),
        })
    }

    #[test]
    fn minimal_document_parses_and_verifies() {
        let doc = InstanceDocument::new(tiny_done_instance());
        let text = canonical_json(&doc);
        let parsed = parse_instance(&text).unwrap();
        let ProblemInstance::TeamEnvVerSf(i) = &parsed.instance else {
            panic!("wrong tag")
        };
        assert!(run_verify(&i.env, &i.team, &i.p_i, &i.x, i.p_x).is_success());
    }

    #[test]
    fn canonical_form_round_trips_byte_identically() {
        let bundle = gadget_domset_to_teamdes_sf(
            &Graph::new(3, [(1, 2), (2, 3)]).unwrap(),
            1,
            TeamDesVariant::Base,
        )
        .unwrap();
        let doc = InstanceDocument::new(bundle.instance);
        let text = canonical_json(&doc);
        let reparsed = parse_instance(&text).unwrap();
        assert_eq!(canonical_json(&reparsed), text);
        assert_eq!(reparsed, doc);
    }

    #[test]
    fn duplicate_point_field_names_the_square() {
        let doc = InstanceDocument::new(tiny_done_instance());
        let text = canonical_json(&doc);
        let dup = text.replace(
            "\"point_fields\": [",
            "\"point_fields\": [\n          {\"at\": {\"col\": 1, \"row\": 1}, \"field\": {\"quantity\": \"fq_X\", \"kind\": \"point\", \"source\": \"1\", \"decay\": \"1/2\"}},",
        );
        assert_ne!(dup, text, "fixture must actually inject a duplicate");
        let err = parse_instance(&dup).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(1, 1)"), "got: {msg}");
        assert!(msg.contains("two point-fields"), "got: {msg}");
    }

    #[test]
    fn unknown_problem_tag_is_rejected_with_a_path() {
        let doc = InstanceDocument::new(tiny_done_instance());
        let text = canonical_json(&doc).replace("team_env_ver_sf", "team_env_ver_xx");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(err, IoError::Parse { .. }), "got: {err}");
    }

    #[test]
    fn stale_bounds_are_flagged() {
        let mut doc = InstanceDocument::new(tiny_done_instance());
        doc.bounds.max_state_count += 1;
        let err = parse_instance(&canonical_json(&doc)).unwrap_err();
        assert!(matches!(err, IoError::BoundsMismatch { .. }), "got: {err}");
    }

    #[test]
    fn wrong_schema_version_is_refused() {
        let mut doc = InstanceDocument::new(tiny_done_instance());
        doc.schema = 2;
        assert!(matches!(
            parse_instance(&canonical_json(&doc)),
            Err(IoError::SchemaVersion { found: 2 })
        ));
    }

    #[test]
    fn positions_off_the_grid_are_named() {
        let mut doc = InstanceDocument::new(tiny_done_instance());
        if let ProblemInstance::TeamEnvVerSf(i) = &mut doc.instance {
            i.p_i[0] = GridCoord::new(2, 1);
        }
        let err = parse_instance(&canonical_json(&doc)).unwrap_err();
        assert_eq!(
            err.to_string(),
            "p_i[0]: square (2, 1) outside 1x1 grid"
        );
    }

    #[test]
    fn report_lines_are_single_line_json() {
        let verdict = Verdict::TimedOut { bound: 1080 };
        let report = RunReport::from_verdict(&verdict, 3);
        let line = report.to_json_line();
        assert!(!line.contains('\n'));
        let back: RunReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, report);
        assert_eq!(report.verdict.exit_code(), 1);
    }

    #[test]
    fn design_outcomes_map_to_found_and_bottom() {
        let found = InstanceOutcome::Design(DesignSolution::Bottom);
        let report = RunReport::from_outcome(&found, 1);
        assert_eq!(report.verdict, ReportVerdict::Bottom);
        assert_eq!(report.verdict.exit_code(), 1);
    }
}
