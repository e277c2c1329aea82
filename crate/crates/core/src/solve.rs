//! Brute-force, fixed-parameter solvers for the controller, team,
//! environment, and co-design problems.
//!
//! Every enumeration has a fixed, documented lexicographic order so "first
//! witness" is reproducible. Candidate environments enumerate as mixed-radix
//! numbers: one digit per square in row-major order (most significant
//! first), then one digit per grid edge in the order North, South, East,
//! West; the last digit varies fastest. A square digit selects no field (0)
//! or the i-th placeable spec (i); an edge digit is a bitmask over the edge
//! specs (bit j = j-th spec present).

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::controller::{instantiate_templates, Controller, Sensing, TransitionTemplate};
use crate::env::{Environment, EnvironmentSf, EnvironmentSt, FieldSpec, SquareType, Structure};
use crate::grid::{Direction, GridCoord};
use crate::sim::{run_verify, run_verify_all_positionings, run_verify_any_positioning, Verdict};

/// Default ceiling on enumerated candidates before an explicit refusal.
pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;

const PARALLEL_BATCH: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("malformed instance: {reason}")]
    MalformedInstance { reason: String },
    #[error("search space of {candidates} candidates exceeds the cap of {cap}")]
    SearchSpaceExceeded { candidates: u128, cap: u64 },
}

fn malformed(reason: impl Into<String>) -> SolveError {
    SolveError::MalformedInstance { reason: reason.into() }
}

/// Witness returned by a design solver; `Bottom` means the exhaustive search
/// found none.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "solution")]
pub enum DesignSolution {
    FoundController { controller: Controller },
    FoundTeam { team: Vec<Controller> },
    FoundEnvironment { environment: Environment },
    FoundBoth { team: Vec<Controller>, environment: Environment },
    Bottom,
}

impl DesignSolution {
    pub fn is_found(&self) -> bool {
        !matches!(self, DesignSolution::Bottom)
    }
}

/// Verification instance: does the team, started at `p_i`, build `x` at
/// `p_x`?
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct VerifyInstance {
    pub env: Environment,
    pub team: Vec<Controller>,
    pub p_i: Vec<GridCoord>,
    pub x: Structure,
    pub p_x: GridCoord,
}

/// Controller-design instance: find one controller, instantiated from the
/// template library with at most `q_max` states and `d` out-transitions per
/// state, whose homogeneous team of `t_count` copies builds `x`.
/// Square-type instances carry the sensory radius.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ContDesInstance {
    pub env: Environment,
    pub t_count: usize,
    pub p_i: Vec<GridCoord>,
    pub x: Structure,
    pub p_x: GridCoord,
    pub library: Vec<TransitionTemplate>,
    pub q_max: usize,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
}

/// Team-design instance: select a multiset of `t_count` controllers from the
/// library that builds `x` from every positioning over `e_i`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TeamDesInstance {
    pub env: Environment,
    pub t_count: usize,
    pub library: Vec<Controller>,
    pub e_i: Vec<GridCoord>,
    pub x: Structure,
    pub p_x: GridCoord,
}

/// The space of candidate environments an environment designer may choose
/// from: a grid size plus the declared type or field set.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvSpace {
    St {
        width: u32,
        height: u32,
        type_set: Vec<SquareType>,
    },
    Sf {
        width: u32,
        height: u32,
        field_set: Vec<FieldSpec>,
    },
}

impl EnvSpace {
    pub fn width(&self) -> u32 {
        match self {
            EnvSpace::St { width, .. } | EnvSpace::Sf { width, .. } => *width,
        }
    }

    pub fn height(&self) -> u32 {
        match self {
            EnvSpace::St { height, .. } | EnvSpace::Sf { height, .. } => *height,
        }
    }

    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn is_st(&self) -> bool {
        matches!(self, EnvSpace::St { .. })
    }

    /// Declared field specs for a scalar-field space (without the two
    /// reserved specs every environment adds); `None` for square types.
    pub fn sf_field_count(&self) -> Option<usize> {
        match self {
            EnvSpace::St { .. } => None,
            EnvSpace::Sf { field_set, .. } => Some(field_set.len()),
        }
    }

    /// An empty environment of this space: uniform first placeable type, or
    /// no fields.
    fn blank(&self) -> Environment {
        match self {
            EnvSpace::St { width, height, type_set } => {
                let st = EnvironmentSt::filled(
                    *width,
                    *height,
                    type_set.first().cloned().unwrap_or_else(SquareType::structure),
                    type_set.clone(),
                );
                Environment::St(st)
            }
            EnvSpace::Sf { width, height, field_set } => {
                Environment::Sf(EnvironmentSf::empty(*width, *height, field_set.clone()))
            }
        }
    }

    /// Mixed-radix digit sizes: one per square, then one per edge.
    fn radices(&self) -> Vec<usize> {
        let blank = self.blank();
        match &blank {
            Environment::St(e) => {
                let placeable = e.placeable_types().count();
                vec![placeable; self.area() as usize]
            }
            Environment::Sf(e) => {
                let point = e.placeable_point_specs().count();
                let edge = e.edge_specs().count();
                let mut radices = vec![point + 1; self.area() as usize];
                radices.extend(std::iter::repeat_n(1usize << edge, 4));
                radices
            }
        }
    }

    /// `|placeable types|^{|E|}` for square types; `(P+1)^{|E|} * 2^{4*Edg}`
    /// for fields (P placeable point specs, Edg edge specs). Saturates at
    /// `u128::MAX`.
    pub fn candidate_count(&self) -> u128 {
        self.radices()
            .iter()
            .fold(1u128, |acc, &r| acc.saturating_mul(r as u128))
    }

    fn materialize(&self, digits: &[usize]) -> Environment {
        let mut env = self.blank();
        match &mut env {
            Environment::St(e) => {
                let types: Vec<SquareType> = e.placeable_types().cloned().collect();
                for (i, p) in crate::env::squares(self.width(), self.height()).enumerate() {
                    e.set_type(p, types[digits[i]].clone()).expect("placeable type");
                }
            }
            Environment::Sf(e) => {
                let points: Vec<FieldSpec> = e.placeable_point_specs().cloned().collect();
                let edges: Vec<FieldSpec> = e.edge_specs().cloned().collect();
                let area = self.area() as usize;
                for (i, p) in crate::env::squares(self.width(), self.height()).enumerate() {
                    if digits[i] > 0 {
                        e.add_point_field(p, points[digits[i] - 1].clone())
                            .expect("fresh square");
                    }
                }
                for (k, edge) in [Direction::North, Direction::South, Direction::East, Direction::West]
                    .into_iter()
                    .enumerate()
                {
                    let mask = digits[area + k];
                    for (j, spec) in edges.iter().enumerate() {
                        if mask & (1 << j) != 0 {
                            e.add_edge_field(edge, spec.clone()).expect("edge spec");
                        }
                    }
                }
            }
        }
        env
    }

    /// All candidate environments in the documented lexicographic order.
    pub fn enumerate(&self) -> impl Iterator<Item = Environment> + '_ {
        let radices = self.radices();
        let mut digits = vec![0usize; radices.len()];
        let mut done = radices.iter().any(|&r| r == 0);
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let env = self.materialize(&digits);
            let mut i = digits.len();
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < radices[i] {
                    break;
                }
                digits[i] = 0;
            }
            Some(env)
        })
    }
}

/// Environment-design instance: the fixed team (robot `i` starting at
/// `p_i[i]`) is given; find an environment from `space` on which the run
/// builds `x`. A homogeneous team is a repeated controller.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct EnvDesInstance {
    pub space: EnvSpace,
    pub team: Vec<Controller>,
    pub p_i: Vec<GridCoord>,
    pub x: Structure,
    pub p_x: GridCoord,
}

/// Co-design instance: find an environment and a team multiset together.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TeamEnvDesInstance {
    pub space: EnvSpace,
    pub t_count: usize,
    pub library: Vec<Controller>,
    pub e_i: Vec<GridCoord>,
    pub x: Structure,
    pub p_x: GridCoord,
}

/// Tagged union of the ten problem statements.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "problem")]
pub enum ProblemInstance {
    TeamEnvVerSt(VerifyInstance),
    TeamEnvVerSf(VerifyInstance),
    ContDesLsSt(ContDesInstance),
    ContDesLsSf(ContDesInstance),
    TeamDesLsSt(TeamDesInstance),
    TeamDesLsSf(TeamDesInstance),
    EnvDesSt(EnvDesInstance),
    EnvDesSf(EnvDesInstance),
    TeamEnvDesLsSt(TeamEnvDesInstance),
    TeamEnvDesLsSf(TeamEnvDesInstance),
}

/// What solving or verifying an instance produces.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", untagged)]
pub enum InstanceOutcome {
    Verdict(Verdict),
    Design(DesignSolution),
}

impl ProblemInstance {
    /// Square-type problems must carry square-type environments, and
    /// likewise for scalar fields; a square-type controller-design instance
    /// must state its sensory radius.
    pub fn validate(&self) -> Result<(), SolveError> {
        let check = |want_st: bool, is_st: bool, what: &str| {
            if want_st == is_st {
                Ok(())
            } else {
                Err(malformed(format!(
                    "{what} environment does not match the problem tag"
                )))
            }
        };
        match self {
            ProblemInstance::TeamEnvVerSt(i) => check(true, i.env.as_st().is_some(), "verify"),
            ProblemInstance::TeamEnvVerSf(i) => check(false, i.env.as_st().is_some(), "verify"),
            ProblemInstance::ContDesLsSt(i) => {
                check(true, i.env.as_st().is_some(), "controller-design")?;
                if i.radius.is_none() {
                    return Err(malformed("square-type controller design needs a sensory radius"));
                }
                Ok(())
            }
            ProblemInstance::ContDesLsSf(i) => {
                check(false, i.env.as_st().is_some(), "controller-design")?;
                if i.radius.is_some() {
                    return Err(malformed("scalar-field controller design takes no radius"));
                }
                Ok(())
            }
            ProblemInstance::TeamDesLsSt(i) => check(true, i.env.as_st().is_some(), "team-design"),
            ProblemInstance::TeamDesLsSf(i) => check(false, i.env.as_st().is_some(), "team-design"),
            ProblemInstance::EnvDesSt(i) => check(true, i.space.is_st(), "environment-design"),
            ProblemInstance::EnvDesSf(i) => check(false, i.space.is_st(), "environment-design"),
            ProblemInstance::TeamEnvDesLsSt(i) => check(true, i.space.is_st(), "co-design"),
            ProblemInstance::TeamEnvDesLsSf(i) => check(false, i.space.is_st(), "co-design"),
        }
    }

    /// Dispatch to the verifier or the matching design solver.
    pub fn solve(&self, cap: u64) -> Result<InstanceOutcome, SolveError> {
        self.validate()?;
        match self {
            ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i) => {
                validate_verify(i)?;
                Ok(InstanceOutcome::Verdict(run_verify(&i.env, &i.team, &i.p_i, &i.x, i.p_x)))
            }
            ProblemInstance::ContDesLsSt(i) | ProblemInstance::ContDesLsSf(i) => {
                Ok(InstanceOutcome::Design(solve_cont_des_ls(i)?))
            }
            ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => {
                Ok(InstanceOutcome::Design(solve_team_des_ls(i)?))
            }
            ProblemInstance::EnvDesSt(i) | ProblemInstance::EnvDesSf(i) => {
                Ok(InstanceOutcome::Design(solve_env_des_capped(i, cap)?))
            }
            ProblemInstance::TeamEnvDesLsSt(i) | ProblemInstance::TeamEnvDesLsSf(i) => {
                Ok(InstanceOutcome::Design(solve_team_env_des_ls_capped(i, cap)?))
            }
        }
    }
}

fn validate_positions(env_w: u32, env_h: u32, positions: &[GridCoord], what: &str) -> Result<(), SolveError> {
    for (i, p) in positions.iter().enumerate() {
        if p.col < 1 || p.col > env_w || p.row < 1 || p.row > env_h {
            return Err(malformed(format!("{what} position {p} out of the {env_w}x{env_h} grid")));
        }
        if positions[..i].contains(p) {
            return Err(malformed(format!("{what} positions repeat {p}")));
        }
    }
    Ok(())
}

fn validate_team(team: &[Controller], env_is_st: bool) -> Result<(), SolveError> {
    for (i, c) in team.iter().enumerate() {
        c.validate().map_err(|e| malformed(format!("controller {i}: {e}")))?;
        let st = matches!(c.sensing, Sensing::St { .. });
        if st != env_is_st {
            return Err(malformed(format!("controller {i} sensing does not match the environment")));
        }
    }
    Ok(())
}

fn validate_verify(i: &VerifyInstance) -> Result<(), SolveError> {
    if i.team.is_empty() {
        return Err(malformed("team is empty"));
    }
    if i.team.len() != i.p_i.len() {
        return Err(malformed(format!(
            "team of {} robots but {} start positions",
            i.team.len(),
            i.p_i.len()
        )));
    }
    validate_positions(i.env.width(), i.env.height(), &i.p_i, "start")?;
    validate_team(&i.team, i.env.as_st().is_some())
}

/// Streams the template instantiations (at most `q_max` states worth of
/// padding, at most `d` out-transitions per state) and returns the first
/// controller whose homogeneous `t_count`-copy team builds `x` from `p_i`.
pub fn solve_cont_des_ls(inst: &ContDesInstance) -> Result<DesignSolution, SolveError> {
    if inst.library.is_empty() {
        return Err(malformed("template library is empty"));
    }
    if inst.q_max < 1 || inst.d < 1 {
        return Err(malformed("state and out-degree bounds must be positive"));
    }
    if inst.t_count != inst.p_i.len() {
        return Err(malformed(format!(
            "team size {} but {} start positions",
            inst.t_count,
            inst.p_i.len()
        )));
    }
    validate_positions(inst.env.width(), inst.env.height(), &inst.p_i, "start")?;
    let sensing = match (&inst.env, inst.radius) {
        (Environment::St(_), Some(r)) => Sensing::St { radius: r },
        (Environment::Sf(_), None) => Sensing::Sf,
        (Environment::St(_), None) => {
            return Err(malformed("square-type controller design needs a sensory radius"))
        }
        (Environment::Sf(_), Some(_)) => {
            return Err(malformed("scalar-field controller design takes no radius"))
        }
    };
    for candidate in instantiate_templates(&inst.library, inst.q_max, inst.d, sensing) {
        if candidate.validate().is_err() {
            return Err(malformed("library template instantiates to an invalid controller"));
        }
        let team = vec![candidate.clone(); inst.t_count];
        if run_verify(&inst.env, &team, &inst.p_i, &inst.x, inst.p_x).is_success() {
            return Ok(DesignSolution::FoundController { controller: candidate });
        }
    }
    Ok(DesignSolution::Bottom)
}

fn validate_team_des(inst: &TeamDesInstance) -> Result<(), SolveError> {
    if inst.library.is_empty() {
        return Err(malformed("controller library is empty"));
    }
    if inst.t_count != inst.e_i.len() {
        return Err(malformed(format!(
            "team size {} but start region of {} squares",
            inst.t_count,
            inst.e_i.len()
        )));
    }
    validate_positions(inst.env.width(), inst.env.height(), &inst.e_i, "region")?;
    validate_team(&inst.library, inst.env.as_st().is_some())
}

/// Homogeneous team design: try each library controller as a `t_count`-copy
/// team; symmetry makes one positioning assignment suffice.
pub fn solve_team_des_homogeneous(inst: &TeamDesInstance) -> Result<DesignSolution, SolveError> {
    validate_team_des(inst)?;
    for c in &inst.library {
        let team = vec![c.clone(); inst.t_count];
        if run_verify_all_positionings(&inst.env, &team, &inst.e_i, &inst.x, inst.p_x).is_success() {
            return Ok(DesignSolution::FoundTeam { team });
        }
    }
    Ok(DesignSolution::Bottom)
}

/// `C(l + t - 1, t)` multisets of size `t` over `l` controllers, saturating.
pub fn team_multiset_count(l: usize, t: usize) -> u128 {
    if l == 0 {
        return if t == 0 { 1 } else { 0 };
    }
    binomial((l + t - 1) as u128, t as u128)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// General team design: enumerate controller multisets of size `t_count`
/// over the library in lexicographic index order; each candidate team must
/// succeed from every positioning over `e_i`.
pub fn solve_team_des_ls(inst: &TeamDesInstance) -> Result<DesignSolution, SolveError> {
    validate_team_des(inst)?;
    for picks in (0..inst.library.len()).combinations_with_replacement(inst.t_count) {
        let team: Vec<Controller> = picks.iter().map(|&i| inst.library[i].clone()).collect();
        if run_verify_all_positionings(&inst.env, &team, &inst.e_i, &inst.x, inst.p_x).is_success() {
            return Ok(DesignSolution::FoundTeam { team });
        }
    }
    Ok(DesignSolution::Bottom)
}

/// First `Some` produced by `eval` in candidate order, evaluating batches in
/// parallel without disturbing the order.
fn first_parallel<T, R, F>(candidates: impl Iterator<Item = T>, eval: F) -> Option<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Option<R> + Sync,
{
    let mut it = candidates.peekable();
    while it.peek().is_some() {
        let batch: Vec<T> = it.by_ref().take(PARALLEL_BATCH).collect();
        let hits: Vec<Option<R>> = batch.into_par_iter().map(&eval).collect();
        if let Some(hit) = hits.into_iter().flatten().next() {
            return Some(hit);
        }
    }
    None
}

/// Environment design under the default candidate cap.
pub fn solve_env_des(inst: &EnvDesInstance) -> Result<DesignSolution, SolveError> {
    solve_env_des_capped(inst, DEFAULT_CANDIDATE_CAP)
}

/// Enumerates every environment of the instance's space in lexicographic
/// order and returns the first on which the homogeneous team run succeeds.
/// Refuses (with the count) when the space exceeds `cap`.
pub fn solve_env_des_capped(inst: &EnvDesInstance, cap: u64) -> Result<DesignSolution, SolveError> {
    if inst.team.is_empty() {
        return Err(malformed("team is empty"));
    }
    validate_team(&inst.team, inst.space.is_st())?;
    if inst.team.len() != inst.p_i.len() {
        return Err(malformed(format!(
            "team of {} robots but {} start positions",
            inst.team.len(),
            inst.p_i.len()
        )));
    }
    validate_positions(inst.space.width(), inst.space.height(), &inst.p_i, "start")?;
    let candidates = inst.space.candidate_count();
    if candidates > cap as u128 {
        return Err(SolveError::SearchSpaceExceeded { candidates, cap });
    }
    let witness = first_parallel(inst.space.enumerate(), |env| {
        run_verify(&env, &inst.team, &inst.p_i, &inst.x, inst.p_x)
            .is_success()
            .then_some(env)
    });
    Ok(match witness {
        Some(environment) => DesignSolution::FoundEnvironment { environment },
        None => DesignSolution::Bottom,
    })
}

/// Co-design under the default candidate cap.
pub fn solve_team_env_des_ls(inst: &TeamEnvDesInstance) -> Result<DesignSolution, SolveError> {
    solve_team_env_des_ls_capped(inst, DEFAULT_CANDIDATE_CAP)
}

/// Outer loop over candidate environments, inner loop over team multisets
/// and orderings of each multiset over `e_i`: the placement is part of the
/// searched design, so the first ordering that succeeds wins. The returned
/// team lists controllers in the order of the start squares sorted row-major.
/// The cap guards the product of the environment and multiset spaces.
pub fn solve_team_env_des_ls_capped(
    inst: &TeamEnvDesInstance,
    cap: u64,
) -> Result<DesignSolution, SolveError> {
    if inst.library.is_empty() {
        return Err(malformed("controller library is empty"));
    }
    if inst.t_count != inst.e_i.len() {
        return Err(malformed(format!(
            "team size {} but start region of {} squares",
            inst.t_count,
            inst.e_i.len()
        )));
    }
    validate_positions(inst.space.width(), inst.space.height(), &inst.e_i, "region")?;
    validate_team(&inst.library, inst.space.is_st())?;
    let candidates = inst
        .space
        .candidate_count()
        .saturating_mul(team_multiset_count(inst.library.len(), inst.t_count));
    if candidates > cap as u128 {
        return Err(SolveError::SearchSpaceExceeded { candidates, cap });
    }
    let teams: Vec<Vec<Controller>> = (0..inst.library.len())
        .combinations_with_replacement(inst.t_count)
        .map(|picks| picks.iter().map(|&i| inst.library[i].clone()).collect())
        .collect();
    let witness = first_parallel(inst.space.enumerate(), |env| {
        teams.iter().find_map(|team| {
            run_verify_any_positioning(&env, team, &inst.e_i, &inst.x, inst.p_x).map(
                |(arrangement, _)| {
                    let arranged = arrangement.iter().map(|&i| team[i].clone()).collect();
                    (arranged, env.clone())
                },
            )
        })
    });
    Ok(match witness {
        Some((team, environment)) => DesignSolution::FoundBoth { team, environment },
        None => DesignSolution::Bottom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::{build_collision_guard, fval, Formula, Modification, Rel, Transition};
    use crate::grid::Move;
    use crate::rational::{rat, Rational};
    use crate::env::FQ_X;

    fn star_stay_template() -> TransitionTemplate {
        TransitionTemplate {
            trigger: Formula::Star,
            modification: Modification::None,
            mv: Move::Stay,
        }
    }

    fn st_space_1x2() -> EnvSpace {
        EnvSpace::St {
            width: 2,
            height: 1,
            type_set: vec![SquareType::new("e_B"), SquareType::structure()],
        }
    }

    fn stay_controller_st() -> Controller {
        Controller::new(
            vec!["q0".into()],
            vec![Transition::new(0, Formula::Star, Modification::None, Move::Stay, 0)],
            Sensing::St { radius: 1 },
        )
    }

    #[test]
    fn cont_des_returns_first_controller_when_structure_preexists() {
        let mut st = EnvironmentSt::filled(2, 1, SquareType::new("e_B"), vec![]);
        st.set_type(GridCoord::new(2, 1), SquareType::structure()).unwrap();
        let inst = ContDesInstance {
            env: Environment::St(st),
            t_count: 1,
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(2, 1),
            library: vec![star_stay_template()],
            q_max: 1,
            d: 1,
            radius: Some(1),
        };
        let solution = solve_cont_des_ls(&inst).unwrap();
        assert!(matches!(solution, DesignSolution::FoundController { .. }));

        let absent = ContDesInstance {
            env: Environment::St(EnvironmentSt::filled(2, 1, SquareType::new("e_B"), vec![])),
            ..inst
        };
        assert_eq!(solve_cont_des_ls(&absent).unwrap(), DesignSolution::Bottom);
    }

    #[test]
    fn cont_des_finds_the_walk_east_and_build_controller() {
        // 3-square corridor with a marker field on the far square; the
        // search must combine the move template and the build template.
        let marker = FieldSpec::point("fq_m", Rational::ONE, rat(1, 2));
        let mut sf = EnvironmentSf::empty(3, 1, vec![marker.clone()]);
        sf.add_point_field(GridCoord::new(3, 1), marker).unwrap();
        let move_east = TransitionTemplate {
            trigger: build_collision_guard(Direction::East),
            modification: Modification::None,
            mv: Move::GoEast,
        };
        let build_on_marker = TransitionTemplate {
            trigger: fval("fq_m", Rel::Eq, Rational::ONE),
            modification: Modification::FMod {
                spec: FieldSpec::s_x(),
                offset: (0, 0),
            },
            mv: Move::Stay,
        };
        let inst = ContDesInstance {
            env: Environment::Sf(sf),
            t_count: 1,
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(3, 1),
            library: vec![move_east, build_on_marker],
            q_max: 1,
            d: 2,
            radius: None,
        };
        match solve_cont_des_ls(&inst).unwrap() {
            DesignSolution::FoundController { controller } => {
                assert_eq!(controller.transitions.len(), 2, "needs both templates");
                let team = vec![controller];
                let verdict = run_verify(&inst.env, &team, &inst.p_i, &inst.x, inst.p_x);
                assert!(verdict.is_success(), "witness re-verifies");
            }
            other => panic!("unexpected solution {other:?}"),
        }
    }

    #[test]
    fn homogeneous_team_design_respects_library_order() {
        // First library robot never builds; second does. 1x2 grid, target on
        // the east square.
        let mut st = EnvironmentSt::filled(2, 1, SquareType::new("e_B"), vec![]);
        st.set_type(GridCoord::new(1, 1), SquareType::new("e_B")).unwrap();
        let env = Environment::St(st);
        let idler = stay_controller_st();
        let builder = Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                Formula::Star,
                Modification::EnMod {
                    square_type: SquareType::structure(),
                    offset: (1, 0),
                },
                Move::Stay,
                0,
            )],
            Sensing::St { radius: 1 },
        );
        let inst = TeamDesInstance {
            env,
            t_count: 1,
            library: vec![idler, builder.clone()],
            e_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(2, 1),
        };
        let solution = solve_team_des_homogeneous(&inst).unwrap();
        assert_eq!(solution, DesignSolution::FoundTeam { team: vec![builder] });
        assert_eq!(solve_team_des_ls(&inst).unwrap(), solution);
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(team_multiset_count(1, 1), 1);
        assert_eq!(team_multiset_count(2, 3), 4);
        assert_eq!(team_multiset_count(5, 3), 35);
        let lib = 3usize;
        let t = 2usize;
        let enumerated = (0..lib).combinations_with_replacement(t).count() as u128;
        assert_eq!(enumerated, team_multiset_count(lib, t));
    }

    #[test]
    fn env_des_enumerates_lexicographically() {
        let inst = EnvDesInstance {
            space: st_space_1x2(),
            team: vec![stay_controller_st()],
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(2, 1),
        };
        assert_eq!(inst.space.candidate_count(), 4);
        match solve_env_des(&inst).unwrap() {
            DesignSolution::FoundEnvironment { environment } => {
                let st = environment.as_st().unwrap();
                assert_eq!(st.type_at(GridCoord::new(1, 1)).name(), "e_B");
                assert_eq!(st.type_at(GridCoord::new(2, 1)).name(), "e_X");
            }
            other => panic!("unexpected solution {other:?}"),
        }
    }

    #[test]
    fn sf_env_design_cannot_pre_place_the_structure() {
        // The only declared spec is the structure marker itself, which is
        // not placeable; the single candidate environment is empty.
        let space = EnvSpace::Sf {
            width: 1,
            height: 1,
            field_set: vec![FieldSpec::s_x()],
        };
        assert_eq!(space.candidate_count(), 1);
        let inst = EnvDesInstance {
            space,
            team: vec![Controller::new(vec!["q0".into()], vec![], Sensing::Sf)],
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(1, 1),
        };
        assert_eq!(solve_env_des(&inst).unwrap(), DesignSolution::Bottom);
    }

    #[test]
    fn sf_candidate_count_includes_edges() {
        let space = EnvSpace::Sf {
            width: 2,
            height: 1,
            field_set: vec![
                FieldSpec::point("fq_a", Rational::ONE, Rational::ONE),
                FieldSpec::edge("fq_e", Rational::ONE, Rational::ONE),
            ],
        };
        // (1 placeable point + 1)^2 squares * 2^(4 edges * 1 edge spec).
        assert_eq!(space.candidate_count(), 4 * 16);
        assert_eq!(space.enumerate().count(), 64);
    }

    #[test]
    fn env_des_refuses_oversized_spaces() {
        let inst = EnvDesInstance {
            space: EnvSpace::St {
                width: 10,
                height: 10,
                type_set: vec![SquareType::new("e_B"), SquareType::structure()],
            },
            team: vec![stay_controller_st()],
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(1, 1),
        };
        match solve_env_des(&inst) {
            Err(SolveError::SearchSpaceExceeded { candidates, cap }) => {
                assert_eq!(candidates, 1u128 << 100);
                assert_eq!(cap, DEFAULT_CANDIDATE_CAP);
            }
            other => panic!("expected a search-space refusal, got {other:?}"),
        }
    }

    #[test]
    fn co_design_finds_environment_and_team_together() {
        let inst = TeamEnvDesInstance {
            space: st_space_1x2(),
            t_count: 1,
            library: vec![stay_controller_st()],
            e_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(2, 1),
        };
        match solve_team_env_des_ls(&inst).unwrap() {
            DesignSolution::FoundBoth { team, environment } => {
                assert_eq!(team.len(), 1);
                let st = environment.as_st().unwrap();
                assert_eq!(st.type_at(GridCoord::new(2, 1)).name(), "e_X");
                assert_eq!(st.type_at(GridCoord::new(1, 1)).name(), "e_B");
            }
            other => panic!("unexpected solution {other:?}"),
        }
    }

    #[test]
    fn co_design_searches_orderings_of_the_team() {
        // Builder marks its own square; only the ordering with the builder on
        // the target square succeeds, and that ordering is a valid witness.
        let builder = Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                Formula::Star,
                Modification::EnMod {
                    square_type: SquareType::structure(),
                    offset: (0, 0),
                },
                Move::Stay,
                0,
            )],
            Sensing::St { radius: 1 },
        );
        let inst = TeamEnvDesInstance {
            space: st_space_1x2(),
            t_count: 2,
            library: vec![stay_controller_st(), builder.clone()],
            e_i: vec![GridCoord::new(2, 1), GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(1, 1),
        };
        match solve_team_env_des_ls(&inst).unwrap() {
            DesignSolution::FoundBoth { team, environment } => {
                assert_eq!(team[0], builder, "builder assigned to the target square");
                assert_eq!(team[1], stay_controller_st());
                let positions = vec![GridCoord::new(1, 1), GridCoord::new(2, 1)];
                let verdict = run_verify(&environment, &team, &positions, &inst.x, inst.p_x);
                assert!(verdict.is_success(), "ordered witness re-verifies");
            }
            other => panic!("unexpected solution {other:?}"),
        }
    }

    #[test]
    fn instance_validation_catches_tag_mismatches() {
        let sf_env = Environment::Sf(EnvironmentSf::empty(2, 1, vec![]));
        let sf_controller = Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                fval(FQ_X, Rel::Eq, Rational::ZERO),
                Modification::None,
                Move::Stay,
                0,
            )],
            Sensing::Sf,
        );
        let inst = ProblemInstance::TeamEnvVerSt(VerifyInstance {
            env: sf_env,
            team: vec![sf_controller],
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(2, 1),
        });
        assert!(matches!(
            inst.validate(),
            Err(SolveError::MalformedInstance { .. })
        ));
    }

    #[test]
    fn solve_dispatch_runs_verification() {
        let mut st = EnvironmentSt::filled(2, 1, SquareType::new("e_B"), vec![]);
        st.set_type(GridCoord::new(2, 1), SquareType::structure()).unwrap();
        let inst = ProblemInstance::TeamEnvVerSt(VerifyInstance {
            env: Environment::St(st),
            team: vec![stay_controller_st()],
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(2, 1),
        });
        match inst.solve(DEFAULT_CANDIDATE_CAP).unwrap() {
            InstanceOutcome::Verdict(v) => assert!(v.is_success()),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn growing_the_library_never_loses_a_witness() {
        let mut st = EnvironmentSt::filled(2, 1, SquareType::new("e_B"), vec![]);
        st.set_type(GridCoord::new(2, 1), SquareType::structure()).unwrap();
        let env = Environment::St(st);
        let base = ContDesInstance {
            env,
            t_count: 1,
            p_i: vec![GridCoord::new(1, 1)],
            x: Structure::single(),
            p_x: GridCoord::new(2, 1),
            library: vec![star_stay_template()],
            q_max: 1,
            d: 1,
            radius: Some(1),
        };
        let small = solve_cont_des_ls(&base).unwrap();
        let mut grown = base.clone();
        grown.library.push(TransitionTemplate {
            trigger: Formula::Star,
            modification: Modification::None,
            mv: Move::GoEast,
        });
        grown.d = 2;
        let big = solve_cont_des_ls(&grown).unwrap();
        assert!(small.is_found());
        assert!(big.is_found());
    }
}
