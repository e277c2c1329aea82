//! Dominating set as a team-design instance: a one-way patrol ring where
//! vertex robots fill a scaffolding row and a checker robot converts the
//! target marker into the structure only after inspecting a gap-free
//! scaffold. A library team of `k + 1` robots succeeds exactly when the
//! graph has a dominating set of size at most `k`.
//!
//! Layout, for a grid `|V|+8` wide and `5` tall: row 1 carries one vertex
//! marker field per column `4..=|V|+3`; row 3 carries the lap marker `M1`,
//! the scaffolding cells the robots write, then `M2`, the target `T`
//! (which is `p_X`), and `M3`; rows 2 and 4 plus the two end columns form
//! the counterclockwise ring the robots patrol (east along row 2, north at
//! column `|V|+7`, west along row 4, south at column 2); row 5 is a wall of
//! west-turn fields. Robots ride row 2, sense the rows above and below at
//! value 1/2, and write scaffolding one square north of themselves.
//!
//! The reduced-fields variant replaces the per-vertex marker fields with
//! two shared fields: a column marker and a slow-decay altitude field whose
//! strength at the track row identifies the vertex, spacing columns out so
//! the altitude fields cannot interfere.

use std::fmt;
use std::str::FromStr;

use crate::controller::{
    build_collision_guard, collapse_transitions, fval, Controller, Formula, Modification, Rel,
    Sensing, Transition,
};
use crate::env::{Environment, EnvironmentSf, FieldSpec, Structure, FQ_X};
use crate::grid::{Direction, GridCoord, Move};
use crate::rational::{rat, Rational};
use crate::solve::{ProblemInstance, TeamDesInstance};

use super::graph::Graph;
use super::{GadgetBundle, GadgetProvenance, ReductionError};

const FQ_N: &str = "fq_N";
const FQ_S: &str = "fq_S";
const FQ_E: &str = "fq_E";
const FQ_W: &str = "fq_W";
const FQ_T: &str = "fq_T";
const FQ_M1: &str = "fq_M1";
const FQ_M2: &str = "fq_M2";
const FQ_M3: &str = "fq_M3";
const FQ_M: &str = "fq_M";
const FQ_B: &str = "fq_B";
const FQ_V: &str = "fq_V";

/// Which encoding of the team-design gadget to generate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TeamDesVariant {
    /// One marker field per vertex.
    Base,
    /// Base library with each vertex robot's same-effect transitions merged.
    Collapsed,
    /// Constant-size field set; vertices identified by field strength.
    ReducedFields,
    /// Reduced-fields library with merged vertex-robot transitions.
    ReducedFieldsCollapsed,
}

impl TeamDesVariant {
    pub const ALL: [TeamDesVariant; 4] = [
        TeamDesVariant::Base,
        TeamDesVariant::Collapsed,
        TeamDesVariant::ReducedFields,
        TeamDesVariant::ReducedFieldsCollapsed,
    ];

    fn reduced(self) -> bool {
        matches!(
            self,
            TeamDesVariant::ReducedFields | TeamDesVariant::ReducedFieldsCollapsed
        )
    }

    fn collapsed(self) -> bool {
        matches!(
            self,
            TeamDesVariant::Collapsed | TeamDesVariant::ReducedFieldsCollapsed
        )
    }
}

impl fmt::Display for TeamDesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TeamDesVariant::Base => "base",
            TeamDesVariant::Collapsed => "collapsed",
            TeamDesVariant::ReducedFields => "reduced-fields",
            TeamDesVariant::ReducedFieldsCollapsed => "reduced-fields-collapsed",
        })
    }
}

impl FromStr for TeamDesVariant {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<TeamDesVariant, ReductionError> {
        match s {
            "base" => Ok(TeamDesVariant::Base),
            "collapsed" => Ok(TeamDesVariant::Collapsed),
            "reduced-fields" => Ok(TeamDesVariant::ReducedFields),
            "reduced-fields-collapsed" => Ok(TeamDesVariant::ReducedFieldsCollapsed),
            _ => Err(ReductionError::Malformed(format!(
                "unknown team-design variant {s:?}"
            ))),
        }
    }
}

/// Steps within which a correct team finishes on a positive instance: the
/// team unspools into the ring and the checker completes a verifying lap
/// within two ring lengths per robot.
pub fn teamdes_step_bound(vertex_count: usize, k: usize) -> u64 {
    2 * (2 * vertex_count as u64 + 14) * (k as u64 + 1)
}

fn half() -> Rational {
    rat(1, 2)
}

fn unit_spec(quantity: &str) -> FieldSpec {
    FieldSpec::point(quantity, Rational::ONE, half())
}

fn fq_vertex(i: usize) -> String {
    format!("fq_v{i}")
}

fn at(quantity: &str) -> Formula {
    fval(quantity, Rel::Eq, half())
}

fn absent(quantity: &str) -> Formula {
    fval(quantity, Rel::Eq, Rational::ZERO)
}

fn guard(dir: Direction) -> Formula {
    build_collision_guard(dir)
}

/// Writes scaffolding one square north of the robot.
fn write_above() -> Modification {
    Modification::FMod {
        spec: FieldSpec::s_x(),
        offset: (0, 1),
    }
}

/// East cruise over already-handled columns: some landmark or scaffolding
/// is adjacent, and no turn field demands a direction change.
fn cruise_east(state: usize) -> Transition {
    let landmark = Formula::or_all([FQ_E, FQ_M1, FQ_M2, FQ_T, FQ_M3, FQ_X].map(at));
    let no_turn = Formula::and_all([FQ_N, FQ_S, FQ_W].map(absent));
    Transition::new(
        state,
        Formula::and_all([landmark, no_turn, guard(Direction::East)]),
        Modification::None,
        Move::GoEast,
        state,
    )
}

/// The three ring turns shared by every robot: north at the east wall, west
/// under the top wall, south at the west wall.
fn ring_turns(state: usize) -> Vec<Transition> {
    [
        (FQ_N, Direction::North, Move::GoNorth),
        (FQ_W, Direction::West, Move::GoWest),
        (FQ_S, Direction::South, Move::GoSouth),
    ]
    .into_iter()
    .map(|(q, dir, mv)| {
        Transition::new(
            state,
            Formula::and_all([at(q), guard(dir)]),
            Modification::None,
            mv,
            state,
        )
    })
    .collect()
}

/// Robot for vertex `i`: patrols the ring and fills the scaffolding cell
/// above every column whose vertex lies in the closed neighborhood of `i`.
/// `recognize` yields the conjuncts identifying the column of vertex `j`
/// from the track row; `extra` appends variant-specific transitions.
fn vertex_robot(
    g: &Graph,
    i: usize,
    recognize: impl Fn(usize) -> Vec<Formula>,
    extra: Vec<Transition>,
) -> Controller {
    let q0 = 0;
    let mut transitions = vec![cruise_east(q0)];
    transitions.extend(ring_turns(q0));
    for &j in &g.closed_neighborhood(i) {
        let mut parts = recognize(j);
        parts.extend([absent(FQ_X), guard(Direction::East)]);
        transitions.push(Transition::new(
            q0,
            Formula::and_all(parts),
            write_above(),
            Move::GoEast,
            q0,
        ));
    }
    for &j in &g.closed_neighborhood(i) {
        let mut parts = recognize(j);
        parts.extend([at(FQ_X), guard(Direction::East)]);
        transitions.push(Transition::new(
            q0,
            Formula::and_all(parts),
            Modification::None,
            Move::GoEast,
            q0,
        ));
    }
    for &j in &g.closed_non_neighbors(i) {
        let mut parts = recognize(j);
        parts.push(guard(Direction::East));
        transitions.push(Transition::new(
            q0,
            Formula::and_all(parts),
            Modification::None,
            Move::GoEast,
            q0,
        ));
    }
    transitions.extend(extra);
    Controller::new(vec!["q0".into()], transitions, Sensing::Sf)
}

fn vertex_robot_base(g: &Graph, i: usize) -> Controller {
    vertex_robot(g, i, |j| vec![at(&fq_vertex(j))], Vec::new())
}

fn vertex_robot_reduced(g: &Graph, i: usize) -> Controller {
    let v = g.vertex_count();
    let altitude = |j: usize| fval(FQ_V, Rel::Eq, Rational::from_int((v + 1 - j) as i64));
    let blank_fill = Transition::new(
        0,
        Formula::and_all([at(FQ_B), absent(FQ_X), guard(Direction::East)]),
        write_above(),
        Move::GoEast,
        0,
    );
    vertex_robot(g, i, |j| vec![at(FQ_M), altitude(j)], vec![blank_fill])
}

/// Three-state checker: patrols in `q0`, inspects the scaffolding row in
/// `q1` after passing `M1`, and converts the target marker into the
/// structure when the inspection reaches `T` without a gap. A gap drops it
/// into `q2`, which skips to `M3` and resumes patrolling for another lap.
fn checker() -> Controller {
    let (q0, q1, q2) = (0, 1, 2);
    let mut transitions = vec![Transition::new(
        q0,
        Formula::and_all([at(FQ_E), guard(Direction::East)]),
        Modification::None,
        Move::GoEast,
        q0,
    )];
    transitions.extend(ring_turns(q0));
    transitions.extend([
        Transition::new(
            q0,
            Formula::and_all([
                at(FQ_M1),
                Formula::and_all([absent(FQ_S), absent(FQ_W)]),
                guard(Direction::East),
            ]),
            Modification::None,
            Move::GoEast,
            q1,
        ),
        Transition::new(
            q1,
            Formula::and_all([at(FQ_X), guard(Direction::East)]),
            Modification::None,
            Move::GoEast,
            q1,
        ),
        Transition::new(
            q1,
            Formula::and_all([at(FQ_M2), guard(Direction::East)]),
            Modification::None,
            Move::GoEast,
            q1,
        ),
        Transition::new(
            q1,
            Formula::and_all([at(FQ_T), guard(Direction::East)]),
            write_above(),
            Move::GoEast,
            q1,
        ),
        Transition::new(
            q1,
            Formula::and_all([at(FQ_M3), guard(Direction::East)]),
            Modification::None,
            Move::GoEast,
            q0,
        ),
        Transition::new(
            q1,
            Formula::and_all([
                absent(FQ_X),
                Formula::and_all([absent(FQ_M2), absent(FQ_T), absent(FQ_M3)]),
                guard(Direction::East),
            ]),
            Modification::None,
            Move::GoEast,
            q2,
        ),
        Transition::new(
            q2,
            Formula::and_all([
                Formula::or_all([at(FQ_X), absent(FQ_X), at(FQ_M2), at(FQ_T)]),
                absent(FQ_M3),
                guard(Direction::East),
            ]),
            Modification::None,
            Move::GoEast,
            q2,
        ),
        Transition::new(
            q2,
            Formula::and_all([at(FQ_M3), guard(Direction::East)]),
            Modification::None,
            Move::GoEast,
            q0,
        ),
    ]);
    Controller::new(
        vec!["q0".into(), "q1".into(), "q2".into()],
        transitions,
        Sensing::Sf,
    )
}

/// Shared furniture around the track: the east-turn seed, the turn walls,
/// the lap markers, and the target. `track` is the row the robots ride;
/// markers sit one row above it, the west wall two rows above.
fn place_furniture(
    env: &mut EnvironmentSf,
    track: u32,
) -> Result<GridCoord, ReductionError> {
    let w = env.width();
    env.add_point_field(GridCoord::new(1, track), unit_spec(FQ_E))?;
    for r in [track + 1, track + 2] {
        env.add_point_field(GridCoord::new(1, r), unit_spec(FQ_S))?;
    }
    for r in [track, track + 1] {
        env.add_point_field(GridCoord::new(w, r), unit_spec(FQ_N))?;
    }
    for c in 3..w {
        env.add_point_field(GridCoord::new(c, track + 3), unit_spec(FQ_W))?;
    }
    env.add_point_field(GridCoord::new(3, track + 1), unit_spec(FQ_M1))?;
    env.add_point_field(GridCoord::new(w - 4, track + 1), unit_spec(FQ_M2))?;
    let p_x = GridCoord::new(w - 3, track + 1);
    env.add_point_field(p_x, unit_spec(FQ_T))?;
    env.add_point_field(GridCoord::new(w - 2, track + 1), unit_spec(FQ_M3))?;
    Ok(p_x)
}

fn base_env(g: &Graph) -> Result<(EnvironmentSf, GridCoord), ReductionError> {
    let v = g.vertex_count() as u32;
    let mut specs: Vec<FieldSpec> = [FQ_N, FQ_S, FQ_E, FQ_W].map(unit_spec).into();
    specs.extend((1..=v as usize).map(|i| unit_spec(&fq_vertex(i))));
    specs.extend([FQ_T, FQ_M1, FQ_M2, FQ_M3].map(unit_spec));
    let mut env = EnvironmentSf::empty(v + 8, 5, specs);
    let p_x = place_furniture(&mut env, 2)?;
    for i in 1..=v {
        env.add_point_field(GridCoord::new(i + 3, 1), unit_spec(&fq_vertex(i as usize)))?;
    }
    Ok((env, p_x))
}

fn reduced_env(g: &Graph) -> Result<(EnvironmentSf, GridCoord), ReductionError> {
    let v = g.vertex_count() as u32;
    let w = v + 2 * v * (v - 1) + 8;
    let track = v + 2;
    let mut specs: Vec<FieldSpec> = [FQ_N, FQ_S, FQ_E, FQ_W, FQ_M, FQ_B].map(unit_spec).into();
    specs.push(FieldSpec::point(
        FQ_V,
        Rational::from_int(v as i64 + 2),
        Rational::ONE,
    ));
    specs.extend([FQ_T, FQ_M1, FQ_M2, FQ_M3].map(unit_spec));
    let mut env = EnvironmentSf::empty(w, v + 5, specs);
    let p_x = place_furniture(&mut env, track)?;
    let col = |i: u32| (i - 1) * (2 * v + 1) + 4;
    for i in 1..=v {
        env.add_point_field(GridCoord::new(col(i), v + 1), unit_spec(FQ_M))?;
        env.add_point_field(
            GridCoord::new(col(i), v + 1 - i),
            FieldSpec::point(FQ_V, Rational::from_int(v as i64 + 2), Rational::ONE),
        )?;
    }
    for i in 1..v {
        for c in col(i) + 1..col(i + 1) {
            env.add_point_field(GridCoord::new(c, v + 1), unit_spec(FQ_B))?;
        }
    }
    Ok((env, p_x))
}

/// Builds the team-design instance for "does `g` have a dominating set of
/// size at most `k`?": library of `|V|` vertex robots plus the checker,
/// team size `k + 1`, start squares on the ring's west end of the return
/// row. Requires `1 <= k <= |V|`.
pub fn gadget_domset_to_teamdes_sf(
    g: &Graph,
    k: usize,
    variant: TeamDesVariant,
) -> Result<GadgetBundle, ReductionError> {
    let v = g.vertex_count();
    if v == 0 {
        return Err(ReductionError::Malformed("graph has no vertices".into()));
    }
    if k == 0 || k > v {
        return Err(ReductionError::Malformed(format!(
            "budget k = {k} outside 1..={v}"
        )));
    }
    let (env, p_x) = if variant.reduced() {
        reduced_env(g)?
    } else {
        base_env(g)?
    };
    let build = if variant.reduced() {
        vertex_robot_reduced
    } else {
        vertex_robot_base
    };
    let mut library: Vec<Controller> = (1..=v)
        .map(|i| {
            let robot = build(g, i);
            if variant.collapsed() {
                collapse_transitions(&robot)
            } else {
                robot
            }
        })
        .collect();
    library.push(checker());
    let start_row = env.height() - 1;
    let e_i = (3..=k as u32 + 3)
        .map(|c| GridCoord::new(c, start_row))
        .collect();
    let instance = ProblemInstance::TeamDesLsSf(TeamDesInstance {
        env: Environment::Sf(env),
        t_count: k + 1,
        library,
        e_i,
        x: Structure::single(),
        p_x,
    });
    instance.validate()?;
    Ok(GadgetBundle {
        instance,
        provenance: GadgetProvenance::DominatingSet {
            graph: g.clone(),
            k,
            family: "teamdes".into(),
            variant: variant.to_string(),
        },
    })
}
