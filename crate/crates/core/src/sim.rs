//! Synchronous team simulation and bounded-step verification.
//!
//! A step has three phases. First every robot senses the start-of-step
//! environment and robot placement and selects its enabled transitions;
//! disagreement among enabled effects is a nondeterminism failure. Then all
//! modifications apply at once; two robots writing the same square conflict
//! even if they write the same thing. Finally all moves commit at once; each
//! robot claims a destination (its target square if moving, its current
//! square otherwise) and any destination claimed twice is an occupy
//! conflict, which legalizes swaps and lockstep chains. Within a phase the
//! first failure in robot index order is reported.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::controller::{
    enabled_transition_indices, Controller, Modification, Predicate, Senses, StateId,
};
use crate::env::{structure_present, Environment, FieldSpec, Structure, FQ_ROBOT};
use crate::grid::{GridCoord, Move};
use crate::rational::Rational;

/// Why a run failed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FailureReason {
    /// Enabled transitions of `robot` disagree in modification, move, or
    /// next state.
    Nondeterminism { robot: usize },
    /// Two robots modified `square` in the same step.
    ModifyConflict { square: GridCoord },
    /// Two robots claimed `square` in the same step.
    OccupyConflict { square: GridCoord },
    /// `robot` moved or aimed a modification off the grid.
    OutOfBounds { robot: usize },
}

/// Result of one synchronous step.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepOutcome {
    Continue,
    Failure(FailureReason),
}

/// Result of a bounded verification run.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    /// The structure appeared after `steps` steps.
    Success { steps: u64, trace: Option<Trace> },
    Failed { reason: FailureReason, step: u64 },
    /// No success within `bound` steps (reported early when the
    /// configuration provably cycles).
    TimedOut { bound: u64 },
}

impl Verdict {
    pub fn is_success(&self) -> bool {
        matches!(self, Verdict::Success { .. })
    }
}

/// Recorded run: robot states and positions before the first step and after
/// each step, with the modifications the step applied.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: u64,
    pub robots: Vec<TraceRobot>,
    pub modifications: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceRobot {
    pub state: String,
    pub col: u32,
    pub row: u32,
}

/// One robot of a running team.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RobotStatus {
    /// Index into the team's controller list.
    pub controller: usize,
    pub state: StateId,
    pub pos: GridCoord,
}

/// A team dropped into an environment, ready to step.
pub struct TeamConfiguration<'a> {
    env: Environment,
    controllers: Vec<&'a Controller>,
    robots: Vec<RobotStatus>,
    completed_steps: u64,
    tables: FieldTables,
    last_modifications: Vec<String>,
}

impl<'a> TeamConfiguration<'a> {
    /// Robot `i` runs `team[i]` starting at `p_i[i]` in state 0. Initial
    /// positions must be distinct and in bounds.
    pub fn new(env: Environment, team: &'a [Controller], p_i: &[GridCoord]) -> TeamConfiguration<'a> {
        Self::from_refs(env, team.iter().collect(), p_i)
    }

    pub(crate) fn from_refs(
        env: Environment,
        controllers: Vec<&'a Controller>,
        p_i: &[GridCoord],
    ) -> TeamConfiguration<'a> {
        assert_eq!(controllers.len(), p_i.len(), "one start position per robot");
        assert!(!controllers.is_empty(), "team must be non-empty");
        for (i, p) in p_i.iter().enumerate() {
            assert!(env.in_bounds(*p), "robot {i} starts out of bounds at {p}");
            assert!(
                !p_i[..i].contains(p),
                "robots {i} and another both start at {p}"
            );
        }
        let robots = controllers
            .iter()
            .zip(p_i)
            .enumerate()
            .map(|(i, (_, &pos))| RobotStatus {
                controller: i,
                state: 0,
                pos,
            })
            .collect();
        let tables = FieldTables::for_team(&env, &controllers);
        TeamConfiguration {
            env,
            controllers,
            robots,
            completed_steps: 0,
            tables,
            last_modifications: Vec::new(),
        }
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn robots(&self) -> &[RobotStatus] {
        &self.robots
    }

    pub fn completed_steps(&self) -> u64 {
        self.completed_steps
    }

    /// Largest state count over the team, the `|Q|` of the step bound.
    pub fn max_states(&self) -> u64 {
        self.controllers.iter().map(|c| c.state_count() as u64).max().unwrap_or(0)
    }

    /// `10 * (|E| + |Q|)^3` with `|E|` the number of squares.
    pub fn step_bound(&self) -> u64 {
        let base = self.env.area() + self.max_states();
        10 * base * base * base
    }

    fn overlay(&self) -> Vec<GridCoord> {
        self.robots.iter().map(|r| r.pos).collect()
    }

    /// Execute one synchronous step of the whole team.
    pub fn step(&mut self) -> StepOutcome {
        self.last_modifications.clear();
        let overlay = self.overlay();

        // Phase 1: sense the start-of-step configuration.
        let mut chosen: Vec<Option<usize>> = Vec::with_capacity(self.robots.len());
        {
            let sense = CachedSense {
                env: &self.env,
                tables: &self.tables,
                overlay: &overlay,
            };
            for (i, r) in self.robots.iter().enumerate() {
                let c = self.controllers[r.controller];
                let enabled = enabled_transition_indices(c, r.state, &sense, r.pos);
                match enabled.split_first() {
                    None => chosen.push(None),
                    Some((&first, rest)) => {
                        let effect = c.transitions[first].effect();
                        if rest.iter().any(|&j| c.transitions[j].effect() != effect) {
                            return StepOutcome::Failure(FailureReason::Nondeterminism { robot: i });
                        }
                        chosen.push(Some(first));
                    }
                }
            }
        }

        // Phase 2: collect modifications, then apply them all at once.
        let mut mod_targets: HashMap<GridCoord, usize> = HashMap::new();
        let mut writes: Vec<(GridCoord, Modification)> = Vec::new();
        for (i, r) in self.robots.iter().enumerate() {
            let Some(t) = chosen[i] else { continue };
            let m = &self.controllers[r.controller].transitions[t].modification;
            let offset = match m {
                Modification::None => continue,
                Modification::EnMod { offset, .. } | Modification::FMod { offset, .. } => *offset,
            };
            let target = match r.pos.offset(offset.0, offset.1) {
                Some(p) if self.env.in_bounds(p) => p,
                _ => return StepOutcome::Failure(FailureReason::OutOfBounds { robot: i }),
            };
            if mod_targets.insert(target, i).is_some() {
                return StepOutcome::Failure(FailureReason::ModifyConflict { square: target });
            }
            writes.push((target, m.clone()));
        }
        for (target, m) in &writes {
            self.last_modifications.push(format!("{m} at {target}"));
            match m {
                Modification::None => unreachable!(),
                Modification::EnMod { square_type, .. } => {
                    self.env
                        .as_st_mut()
                        .expect("enmod in a square-type environment")
                        .set_type(*target, square_type.clone())
                        .expect("validated square type");
                    // Visual sensing reads types directly; no tables involved.
                }
                Modification::FMod { spec, .. } => {
                    let sf = self.env.as_sf_mut().expect("fmod in a scalar-field environment");
                    let displaced = sf.point_field_at(*target).map(|s| s.quantity.clone());
                    sf.overwrite_point_field(*target, spec.clone())
                        .expect("validated field spec");
                    self.tables.refresh(&self.env, &spec.quantity);
                    if let Some(old) = displaced {
                        if old != spec.quantity {
                            self.tables.refresh(&self.env, &old);
                        }
                    }
                }
            }
        }

        // Phase 3: claim destinations, then commit every move together.
        let mut claims: HashMap<GridCoord, usize> = HashMap::new();
        let mut destinations: Vec<GridCoord> = Vec::with_capacity(self.robots.len());
        for (i, r) in self.robots.iter().enumerate() {
            let mv = chosen[i]
                .map(|t| self.controllers[r.controller].transitions[t].mv)
                .unwrap_or(Move::Stay);
            let dest = match mv.direction() {
                None => r.pos,
                Some(dir) => match r.pos.step(dir) {
                    Some(p) if self.env.in_bounds(p) => p,
                    _ => return StepOutcome::Failure(FailureReason::OutOfBounds { robot: i }),
                },
            };
            if claims.insert(dest, i).is_some() {
                return StepOutcome::Failure(FailureReason::OccupyConflict { square: dest });
            }
            destinations.push(dest);
        }
        for (i, dest) in destinations.into_iter().enumerate() {
            self.robots[i].pos = dest;
            if let Some(t) = chosen[i] {
                self.robots[i].state = self.controllers[self.robots[i].controller].transitions[t].to;
            }
        }

        self.completed_steps += 1;
        StepOutcome::Continue
    }

    fn digest(&self) -> Digest {
        let robots = self
            .robots
            .iter()
            .map(|r| (r.state, r.pos.col, r.pos.row))
            .collect();
        let env = match &self.env {
            Environment::St(e) => EnvDigest::St(
                e.squares()
                    .map(|p| {
                        e.type_set()
                            .iter()
                            .position(|t| t == e.type_at(p))
                            .expect("square type from the type set") as u16
                    })
                    .collect(),
            ),
            // Edge fields never change; placed point-fields capture all
            // mutable scalar-field state.
            Environment::Sf(e) => EnvDigest::Sf(
                e.point_fields()
                    .iter()
                    .map(|(p, s)| (p.col, p.row, s.clone()))
                    .collect(),
            ),
        };
        Digest { robots, env }
    }

    fn trace_step(&self) -> TraceStep {
        TraceStep {
            step: self.completed_steps,
            robots: self
                .robots
                .iter()
                .map(|r| TraceRobot {
                    state: self.controllers[r.controller].states[r.state].clone(),
                    col: r.pos.col,
                    row: r.pos.row,
                })
                .collect(),
            modifications: self.last_modifications.clone(),
        }
    }
}

/// Exact configuration snapshot for cycle detection.
#[derive(PartialEq, Eq, Hash)]
struct Digest {
    robots: Vec<(StateId, u32, u32)>,
    env: EnvDigest,
}

#[derive(PartialEq, Eq, Hash)]
enum EnvDigest {
    St(Vec<u16>),
    Sf(Vec<(u32, u32, FieldSpec)>),
}

/// Precomputed per-quantity tables of the static field values, so sensing a
/// square is a lookup plus the contribution of nearby robots. Rebuilt per
/// quantity when a modification changes its placed instances.
struct FieldTables {
    width: u32,
    tables: BTreeMap<String, Vec<Rational>>,
}

impl FieldTables {
    fn for_team(env: &Environment, controllers: &[&Controller]) -> FieldTables {
        let mut tables = FieldTables {
            width: env.width(),
            tables: BTreeMap::new(),
        };
        if env.as_sf().is_some() {
            let mut quantities: HashSet<String> = HashSet::new();
            for c in controllers {
                for t in &c.transitions {
                    let mut preds = Vec::new();
                    collect_predicates(&t.trigger, &mut preds);
                    for p in preds {
                        match p {
                            Predicate::FVal { quantity, .. } | Predicate::FGrd { quantity, .. } => {
                                quantities.insert(quantity);
                            }
                            Predicate::EnVal { .. } => {}
                        }
                    }
                }
            }
            for q in quantities {
                tables.build(env, &q);
            }
        }
        tables
    }

    fn build(&mut self, env: &Environment, quantity: &str) {
        let Some(sf) = env.as_sf() else { return };
        let values = sf
            .squares()
            .map(|p| sf.field_value(&[], quantity, p).expect("in bounds"))
            .collect();
        self.tables.insert(quantity.to_owned(), values);
    }

    /// Rebuild after a modification; quantities no controller senses carry
    /// no table and need none.
    fn refresh(&mut self, env: &Environment, quantity: &str) {
        if self.tables.contains_key(quantity) {
            self.build(env, quantity);
        }
    }

    fn lookup(&self, quantity: &str, p: GridCoord) -> Option<Rational> {
        self.tables
            .get(quantity)
            .map(|t| t[((p.row - 1) * self.width + (p.col - 1)) as usize])
    }
}

fn collect_predicates(f: &crate::controller::Formula, out: &mut Vec<Predicate>) {
    use crate::controller::Formula;
    match f {
        Formula::Star => {}
        Formula::Atom(p) => out.push(p.clone()),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_predicates(a, out);
            collect_predicates(b, out);
        }
        Formula::Not(a) => collect_predicates(a, out),
    }
}

/// Sensing view backed by the precomputed tables; semantics identical to
/// `DirectSense`.
struct CachedSense<'b> {
    env: &'b Environment,
    tables: &'b FieldTables,
    overlay: &'b [GridCoord],
}

impl Senses for CachedSense<'_> {
    fn in_bounds(&self, p: GridCoord) -> bool {
        self.env.in_bounds(p)
    }

    fn occupied(&self, p: GridCoord) -> bool {
        self.overlay.contains(&p)
    }

    fn square_type(&self, p: GridCoord) -> Option<&crate::env::SquareType> {
        self.env.as_st().map(|e| e.type_at(p))
    }

    fn field(&self, quantity: &str, p: GridCoord) -> Rational {
        if self.env.as_sf().is_none() {
            return Rational::ZERO;
        }
        let mut total = match self.tables.lookup(quantity, p) {
            Some(v) => v,
            None => self
                .env
                .as_sf()
                .expect("checked above")
                .field_value(&[], quantity, p)
                .expect("in bounds"),
        };
        if quantity == FQ_ROBOT {
            // Source 1, decay 1/2: only robots within distance 1 contribute.
            let s_robot = FieldSpec::s_robot();
            for r in self.overlay {
                total += s_robot.value_at_distance(p.manhattan(*r));
            }
        }
        total
    }
}

/// Free-function form of [`TeamConfiguration::step`].
pub fn step(config: &mut TeamConfiguration<'_>) -> StepOutcome {
    config.step()
}

fn run_verify_impl(
    env: &Environment,
    team: Vec<&Controller>,
    p_i: &[GridCoord],
    x: &Structure,
    p_x: GridCoord,
    record_trace: bool,
) -> Verdict {
    let mut config = TeamConfiguration::from_refs(env.clone(), team, p_i);
    let bound = config.step_bound();
    let mut trace = record_trace.then(|| Trace {
        steps: vec![config.trace_step()],
    });
    let mut seen: HashSet<Digest> = HashSet::new();
    seen.insert(config.digest());
    for step in 1..=bound {
        match config.step() {
            StepOutcome::Failure(reason) => return Verdict::Failed { reason, step },
            StepOutcome::Continue => {}
        }
        if let Some(trace) = trace.as_mut() {
            trace.steps.push(config.trace_step());
        }
        if structure_present(config.env(), x, p_x) {
            return Verdict::Success { steps: step, trace };
        }
        // Deterministic dynamics: a repeated configuration loops forever,
        // so the bound can never be reached with a success.
        if !seen.insert(config.digest()) {
            return Verdict::TimedOut { bound };
        }
    }
    Verdict::TimedOut { bound }
}

/// Run the team from `p_i` (robot `i` at `p_i[i]`) until the structure is
/// present at `p_x`, a failure occurs, or `10 * (|E| + |Q|)^3` steps pass.
/// Presence is checked after each step, not before the first.
pub fn run_verify(
    env: &Environment,
    team: &[Controller],
    p_i: &[GridCoord],
    x: &Structure,
    p_x: GridCoord,
) -> Verdict {
    run_verify_impl(env, team.iter().collect(), p_i, x, p_x, false)
}

/// `run_verify` that also records per-step robot snapshots.
pub fn run_verify_traced(
    env: &Environment,
    team: &[Controller],
    p_i: &[GridCoord],
    x: &Structure,
    p_x: GridCoord,
) -> Verdict {
    run_verify_impl(env, team.iter().collect(), p_i, x, p_x, true)
}

/// Verify over every assignment of the team to the position set `e_i`
/// (sorted row-major): each distinct arrangement of the controller multiset
/// is run once. Succeeds only if every assignment succeeds, reporting the
/// largest step count; otherwise the first failing assignment's verdict is
/// returned.
pub fn run_verify_all_positionings(
    env: &Environment,
    team: &[Controller],
    e_i: &[GridCoord],
    x: &Structure,
    p_x: GridCoord,
) -> Verdict {
    assert_eq!(team.len(), e_i.len(), "one position per robot");
    let mut positions: Vec<GridCoord> = e_i.to_vec();
    positions.sort();
    // Identical controllers are interchangeable: canonicalize each robot to
    // the first structurally equal one.
    let keys: Vec<usize> = team
        .iter()
        .map(|c| team.iter().position(|d| d == c).expect("self"))
        .collect();
    let mut worst: Option<Verdict> = None;
    for arrangement in distinct_arrangements(&keys) {
        let assigned: Vec<&Controller> = arrangement.iter().map(|&i| &team[i]).collect();
        match run_verify_impl(env, assigned, &positions, x, p_x, false) {
            Verdict::Success { steps, .. } => {
                let best = worst.get_or_insert(Verdict::Success { steps: 0, trace: None });
                if let Verdict::Success { steps: max, .. } = best {
                    *max = (*max).max(steps);
                }
            }
            other => return other,
        }
    }
    worst.expect("at least one arrangement")
}

/// Verify over assignments of the team to the position set `e_i` (sorted
/// row-major) until one succeeds. Returns the winning assignment as indices
/// into `team` (parallel to the sorted positions) with its verdict, or `None`
/// when no arrangement builds the structure.
pub fn run_verify_any_positioning(
    env: &Environment,
    team: &[Controller],
    e_i: &[GridCoord],
    x: &Structure,
    p_x: GridCoord,
) -> Option<(Vec<usize>, Verdict)> {
    assert_eq!(team.len(), e_i.len(), "one position per robot");
    let mut positions: Vec<GridCoord> = e_i.to_vec();
    positions.sort();
    let keys: Vec<usize> = team
        .iter()
        .map(|c| team.iter().position(|d| d == c).expect("self"))
        .collect();
    for arrangement in distinct_arrangements(&keys) {
        let assigned: Vec<&Controller> = arrangement.iter().map(|&i| &team[i]).collect();
        let verdict = run_verify_impl(env, assigned, &positions, x, p_x, false);
        if verdict.is_success() {
            return Some((arrangement, verdict));
        }
    }
    None
}

/// Distinct permutations of robot indices under the equivalence given by
/// `keys`, in lexicographic order of their key sequences; interchangeable
/// robots are used smallest index first.
fn distinct_arrangements(keys: &[usize]) -> Vec<Vec<usize>> {
    fn extend(
        keys: &[usize],
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == keys.len() {
            out.push(current.clone());
            return;
        }
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..keys.len() {
            if !used[i] {
                next.entry(keys[i]).or_insert(i);
            }
        }
        for (_, i) in next {
            used[i] = true;
            current.push(i);
            extend(keys, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; keys.len()];
    let mut current = Vec::with_capacity(keys.len());
    extend(keys, &mut used, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::{enval, fval, Formula, Rel, Sensing, Transition};
    use crate::env::{EnvironmentSf, EnvironmentSt, SquareType};
    use crate::rational::rat;

    fn st_env(width: u32, height: u32) -> Environment {
        Environment::St(EnvironmentSt::filled(
            width,
            height,
            SquareType::new("e_B"),
            vec![],
        ))
    }

    fn walker(mv: Move) -> Controller {
        Controller::new(
            vec!["q0".into()],
            vec![Transition::new(0, Formula::Star, Modification::None, mv, 0)],
            Sensing::St { radius: 1 },
        )
    }

    fn painter_east() -> Controller {
        Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                Formula::Star,
                Modification::EnMod {
                    square_type: SquareType::structure(),
                    offset: (0, 0),
                },
                Move::GoEast,
                0,
            )],
            Sensing::St { radius: 1 },
        )
    }

    #[test]
    fn paint_and_leave_builds_a_line() {
        let env = st_env(4, 1);
        let team = [painter_east()];
        let x = Structure::east_west_line(3);
        let verdict = run_verify(&env, &team, &[GridCoord::new(1, 1)], &x, GridCoord::new(1, 1));
        assert_eq!(verdict, Verdict::Success { steps: 3, trace: None });
    }

    #[test]
    fn walking_off_the_grid_fails() {
        let env = st_env(3, 1);
        let team = [walker(Move::GoWest)];
        let verdict = run_verify(
            &env,
            &team,
            &[GridCoord::new(2, 1)],
            &Structure::single(),
            GridCoord::new(3, 1),
        );
        assert_eq!(
            verdict,
            Verdict::Failed {
                reason: FailureReason::OutOfBounds { robot: 0 },
                step: 2
            }
        );
    }

    #[test]
    fn head_on_collision_is_an_occupy_conflict() {
        let env = st_env(3, 1);
        let team = [walker(Move::GoEast), walker(Move::GoWest)];
        let verdict = run_verify(
            &env,
            &team,
            &[GridCoord::new(1, 1), GridCoord::new(3, 1)],
            &Structure::single(),
            GridCoord::new(2, 1),
        );
        assert_eq!(
            verdict,
            Verdict::Failed {
                reason: FailureReason::OccupyConflict { square: GridCoord::new(2, 1) },
                step: 1
            }
        );
    }

    #[test]
    fn swap_and_chain_are_legal() {
        let swappers = [walker(Move::GoEast), walker(Move::GoWest)];
        let mut config = TeamConfiguration::new(
            st_env(3, 1),
            &swappers,
            &[GridCoord::new(1, 1), GridCoord::new(2, 1)],
        );
        assert_eq!(config.step(), StepOutcome::Continue);
        assert_eq!(config.robots()[0].pos, GridCoord::new(2, 1));
        assert_eq!(config.robots()[1].pos, GridCoord::new(1, 1));

        let chain = [walker(Move::GoEast), walker(Move::GoEast)];
        let mut config = TeamConfiguration::new(
            st_env(3, 1),
            &chain,
            &[GridCoord::new(1, 1), GridCoord::new(2, 1)],
        );
        assert_eq!(config.step(), StepOutcome::Continue);
        assert_eq!(config.robots()[0].pos, GridCoord::new(2, 1));
        assert_eq!(config.robots()[1].pos, GridCoord::new(3, 1));
    }

    #[test]
    fn same_write_same_square_is_a_modify_conflict() {
        let env = st_env(3, 1);
        let painter_at = |offset: (i32, i32)| {
            Controller::new(
                vec!["q0".into()],
                vec![Transition::new(
                    0,
                    Formula::Star,
                    Modification::EnMod {
                        square_type: SquareType::structure(),
                        offset,
                    },
                    Move::Stay,
                    0,
                )],
                Sensing::St { radius: 1 },
            )
        };
        let team = [painter_at((1, 0)), painter_at((-1, 0))];
        let verdict = run_verify(
            &env,
            &team,
            &[GridCoord::new(1, 1), GridCoord::new(3, 1)],
            &Structure::single(),
            GridCoord::new(2, 1),
        );
        assert_eq!(
            verdict,
            Verdict::Failed {
                reason: FailureReason::ModifyConflict { square: GridCoord::new(2, 1) },
                step: 1
            }
        );
    }

    #[test]
    fn modification_aimed_off_grid_fails() {
        let env = st_env(2, 1);
        let c = Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                Formula::Star,
                Modification::EnMod {
                    square_type: SquareType::structure(),
                    offset: (0, 1),
                },
                Move::Stay,
                0,
            )],
            Sensing::St { radius: 1 },
        );
        let verdict = run_verify(
            &env,
            &[c],
            &[GridCoord::new(1, 1)],
            &Structure::single(),
            GridCoord::new(2, 1),
        );
        assert_eq!(
            verdict,
            Verdict::Failed {
                reason: FailureReason::OutOfBounds { robot: 0 },
                step: 1
            }
        );
    }

    #[test]
    fn nondeterministic_effects_fail_on_the_sensing_phase() {
        let env = st_env(3, 1);
        // A robot's own square reads e_robot, so both triggers hold at once.
        let c = Controller::new(
            vec!["q0".into()],
            vec![
                Transition::new(0, enval("e_robot", (0, 0)), Modification::None, Move::GoEast, 0),
                Transition::new(0, enval("e_B", (1, 0)), Modification::None, Move::GoWest, 0),
            ],
            Sensing::St { radius: 1 },
        );
        let verdict = run_verify(
            &env,
            &[c],
            &[GridCoord::new(2, 1)],
            &Structure::single(),
            GridCoord::new(3, 1),
        );
        assert_eq!(
            verdict,
            Verdict::Failed {
                reason: FailureReason::Nondeterminism { robot: 0 },
                step: 1
            }
        );
    }

    #[test]
    fn agreeing_enabled_transitions_are_fine() {
        let env = st_env(3, 1);
        let c = Controller::new(
            vec!["q0".into()],
            vec![
                Transition::new(0, enval("e_robot", (0, 0)), Modification::None, Move::GoEast, 0),
                Transition::new(0, enval("e_B", (1, 0)), Modification::None, Move::GoEast, 0),
            ],
            Sensing::St { radius: 1 },
        );
        let mut config = TeamConfiguration::new(env, std::slice::from_ref(&c), &[GridCoord::new(1, 1)]);
        assert_eq!(config.step(), StepOutcome::Continue);
        assert_eq!(config.robots()[0].pos, GridCoord::new(2, 1));
    }

    #[test]
    fn sensing_sees_start_of_step_state() {
        // Robot 1 paints its own square this step; robot 0, watching that
        // square, must still see the old type this step and react next step.
        let env = st_env(4, 1);
        let painter = Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                Formula::Star,
                Modification::EnMod {
                    square_type: SquareType::structure(),
                    offset: (0, 0),
                },
                Move::GoEast,
                0,
            )],
            Sensing::St { radius: 1 },
        );
        let watcher = Controller::new(
            vec!["q0".into(), "q1".into()],
            vec![Transition::new(0, enval("e_X", (1, 0)), Modification::None, Move::Stay, 1)],
            Sensing::St { radius: 1 },
        );
        let team = [watcher, painter];
        let mut config = TeamConfiguration::new(
            env,
            &team,
            &[GridCoord::new(1, 1), GridCoord::new(2, 1)],
        );
        assert_eq!(config.step(), StepOutcome::Continue);
        assert_eq!(config.robots()[0].state, 0, "old type seen during the write step");
        assert_eq!(config.step(), StepOutcome::Continue);
        assert_eq!(config.robots()[0].state, 1, "write visible one step later");
    }

    #[test]
    fn fmod_replaces_the_point_field() {
        let marker = FieldSpec::point("fq_m", Rational::ONE, rat(1, 2));
        let mut sf = EnvironmentSf::empty(2, 1, vec![marker.clone()]);
        sf.add_point_field(GridCoord::new(1, 1), marker).unwrap();
        let env = Environment::Sf(sf);
        let c = Controller::new(
            vec!["q0".into()],
            vec![Transition::new(
                0,
                fval("fq_X", Rel::Eq, Rational::ZERO),
                Modification::FMod {
                    spec: FieldSpec::s_x(),
                    offset: (0, 0),
                },
                Move::Stay,
                0,
            )],
            Sensing::Sf,
        );
        let verdict = run_verify(
            &env,
            &[c],
            &[GridCoord::new(1, 1)],
            &Structure::single(),
            GridCoord::new(1, 1),
        );
        assert_eq!(verdict, Verdict::Success { steps: 1, trace: None });
    }

    #[test]
    fn idle_robot_stays_put_in_state() {
        let env = st_env(2, 1);
        let c = Controller::new(
            vec!["q0".into(), "q1".into()],
            vec![Transition::new(0, enval("e_X", (1, 0)), Modification::None, Move::GoEast, 1)],
            Sensing::St { radius: 1 },
        );
        let mut config = TeamConfiguration::new(env, std::slice::from_ref(&c), &[GridCoord::new(1, 1)]);
        assert_eq!(config.step(), StepOutcome::Continue);
        assert_eq!(config.robots()[0].pos, GridCoord::new(1, 1));
        assert_eq!(config.robots()[0].state, 0);
    }

    #[test]
    fn stay_forever_times_out_with_the_exact_bound() {
        let env = st_env(3, 2);
        let team = [walker(Move::Stay)];
        let verdict = run_verify(
            &env,
            &team,
            &[GridCoord::new(1, 1)],
            &Structure::single(),
            GridCoord::new(3, 2),
        );
        assert_eq!(verdict, Verdict::TimedOut { bound: 10 * 7 * 7 * 7 });
    }

    #[test]
    fn cycles_are_detected_long_before_the_bound() {
        // Bound is 10 * (2500 + 1)^3 ~ 1.6e11; only cycle detection lets
        // this finish.
        let env = st_env(50, 50);
        let c = Controller::new(
            vec!["q0".into(), "q1".into()],
            vec![
                Transition::new(0, Formula::Star, Modification::None, Move::GoEast, 1),
                Transition::new(1, Formula::Star, Modification::None, Move::GoWest, 0),
            ],
            Sensing::St { radius: 1 },
        );
        let verdict = run_verify(
            &env,
            &[c],
            &[GridCoord::new(1, 1)],
            &Structure::single(),
            GridCoord::new(50, 50),
        );
        assert_eq!(verdict, Verdict::TimedOut { bound: 10 * 2502 * 2502 * 2502 });
    }

    #[test]
    fn traced_run_registers_every_step() {
        let env = st_env(4, 1);
        let team = [painter_east()];
        let x = Structure::east_west_line(3);
        let verdict = run_verify_traced(&env, &team, &[GridCoord::new(1, 1)], &x, GridCoord::new(1, 1));
        match verdict {
            Verdict::Success { steps: 3, trace: Some(trace) } => {
                assert_eq!(trace.steps.len(), 4, "initial snapshot plus one per step");
                assert_eq!(trace.steps[0].robots[0].col, 1);
                assert_eq!(trace.steps[3].robots[0].col, 4);
                assert_eq!(trace.steps[1].modifications.len(), 1);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn all_positionings_requires_every_assignment_to_succeed() {
        // Painter builds the cell; pure walker never does. Only the
        // assignment with the painter on the east square succeeds when the
        // target is the east corner reachable before falling off.
        let env = st_env(2, 1);
        let painter = painter_east();
        let idler = walker(Move::Stay);
        let team = [painter.clone(), idler.clone()];
        let positions = [GridCoord::new(1, 1), GridCoord::new(2, 1)];
        // Painter starting west paints (1,1) then walks into the idler's
        // square claim: occupy conflict. Painter starting east paints (2,1)
        // but then exits the grid east: out of bounds. Either way some
        // assignment fails.
        let verdict = run_verify_all_positionings(
            &env,
            &team,
            &positions,
            &Structure::single(),
            GridCoord::new(1, 1),
        );
        assert!(!verdict.is_success());

        // A homogeneous pair of idlers has exactly one distinct assignment.
        let team = [idler.clone(), idler];
        let verdict = run_verify_all_positionings(
            &env,
            &team,
            &positions,
            &Structure::single(),
            GridCoord::new(1, 1),
        );
        assert_eq!(verdict, Verdict::TimedOut { bound: 10 * 3 * 3 * 3 });
    }

    #[test]
    fn distinct_arrangements_respect_multiplicity() {
        assert_eq!(distinct_arrangements(&[0, 0, 0]).len(), 1);
        assert_eq!(distinct_arrangements(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_arrangements(&[0, 0, 2]).len(), 3);
        // Arrangement entries are robot indices; keys [0,0] collapse to one
        // arrangement that uses each robot once.
        let arr = distinct_arrangements(&[0, 0]);
        assert_eq!(arr, vec![vec![0, 1]]);
    }

    #[test]
    fn robot_field_only_counts_adjacent_robots() {
        let env = Environment::Sf(EnvironmentSf::empty(5, 1, vec![]));
        let c = Controller::new(
            vec!["q0".into(), "q1".into()],
            vec![Transition::new(
                0,
                fval(FQ_ROBOT, Rel::Eq, rat(3, 2)),
                Modification::None,
                Move::Stay,
                1,
            )],
            Sensing::Sf,
        );
        let still = Controller::new(
            vec!["q0".into()],
            vec![],
            Sensing::Sf,
        );
        // Own robot contributes 1; a neighbor at distance 1 adds 1/2.
        let team = [c, still.clone(), still];
        let mut config = TeamConfiguration::new(
            env,
            &team,
            &[GridCoord::new(2, 1), GridCoord::new(3, 1), GridCoord::new(5, 1)],
        );
        assert_eq!(config.step(), StepOutcome::Continue);
        assert_eq!(config.robots()[0].state, 1);
    }
}
