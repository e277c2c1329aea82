//! Dominating set as an environment-design instance, in two shapes.
//!
//! Column: the designer fills a `1 x (k+1)` column with at most one field
//! per cell. A stationary robot demands a start marker on its own square
//! plus, for every vertex, at least one placed vertex field from that
//! vertex's closed neighborhood; the column is tall enough for exactly `k`
//! vertex fields beside the marker, so an environment exists exactly when
//! a dominating set of size at most `k` does.
//!
//! Track: the designer fills a `3 x (|V|+2)` grid whose intended shape is
//! a rectangular track: corner guideposts, a north-edge altitude field
//! making every row legible, and `k` selection marks on the west column,
//! the mark at row `j+1` naming vertex `j`. A single robot first laps the
//! track counting that exactly `k` marks are present, then laps once per
//! vertex, each lap demanding a mark from that vertex's closed
//! neighborhood, and finally rewrites its start corner into the structure.
//! The multirobot shape splits the per-vertex laps across `|V|` robots
//! that record their verdicts as scaffolding on the middle column, with a
//! checker robot that counts marks and then repeatedly inspects the
//! scaffolding until it is complete.

use std::fmt;
use std::str::FromStr;

use crate::controller::{
    build_collision_guard, collapse_transitions, fval, Controller, Formula, Modification, Rel,
    Sensing, Transition,
};
use crate::env::{EnvironmentSf, FieldSpec, Structure, FQ_X};
use crate::grid::{Direction, GridCoord, Move};
use crate::rational::{rat, Rational};
use crate::solve::{EnvDesInstance, EnvSpace, ProblemInstance};

use super::graph::Graph;
use super::{GadgetBundle, GadgetProvenance, ReductionError};

const FQ_S: &str = "fq_S";
const FQ_P: &str = "fq_P";
const FQ_N: &str = "fq_N";
const FQ_E: &str = "fq_E";
const FQ_W: &str = "fq_W";
const FQ_L: &str = "fq_L";

/// Which encoding of the environment-design gadget to generate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EnvDesVariant {
    /// One-column space, one stationary robot, one state per vertex.
    Column,
    /// Column robot squashed to a single state and transition.
    ColumnCollapsed,
    /// Track space, one robot lapping once per vertex.
    Track,
    /// Track robot with same-effect transitions merged.
    TrackCollapsed,
    /// Track space, one lap-robot per vertex plus a scaffolding checker.
    Multirobot,
}

impl EnvDesVariant {
    pub const ALL: [EnvDesVariant; 5] = [
        EnvDesVariant::Column,
        EnvDesVariant::ColumnCollapsed,
        EnvDesVariant::Track,
        EnvDesVariant::TrackCollapsed,
        EnvDesVariant::Multirobot,
    ];
}

impl fmt::Display for EnvDesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvDesVariant::Column => "column",
            EnvDesVariant::ColumnCollapsed => "column-collapsed",
            EnvDesVariant::Track => "track",
            EnvDesVariant::TrackCollapsed => "track-collapsed",
            EnvDesVariant::Multirobot => "multirobot",
        })
    }
}

impl FromStr for EnvDesVariant {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<EnvDesVariant, ReductionError> {
        match s {
            "column" => Ok(EnvDesVariant::Column),
            "column-collapsed" => Ok(EnvDesVariant::ColumnCollapsed),
            "track" => Ok(EnvDesVariant::Track),
            "track-collapsed" => Ok(EnvDesVariant::TrackCollapsed),
            "multirobot" => Ok(EnvDesVariant::Multirobot),
            _ => Err(ReductionError::Malformed(format!(
                "unknown environment-design variant {s:?}"
            ))),
        }
    }
}

fn fq_vertex(j: usize) -> String {
    format!("fq_v{j}")
}

/// Start marker: value 1 on its own square only.
fn marker_spec(quantity: &str) -> FieldSpec {
    FieldSpec::point(quantity, Rational::ONE, Rational::ONE)
}

/// Column vertex field: reaches the whole column with value >= 1.
fn column_vertex_spec(g: &Graph, j: usize) -> FieldSpec {
    FieldSpec::point(
        fq_vertex(j),
        Rational::from_int(g.vertex_count() as i64 + 1),
        Rational::ONE,
    )
}

fn column_space(g: &Graph, k: usize) -> EnvSpace {
    let mut field_set = vec![marker_spec(FQ_S)];
    field_set.extend((1..=g.vertex_count()).map(|j| column_vertex_spec(g, j)));
    EnvSpace::Sf {
        width: 1,
        height: k as u32 + 1,
        field_set,
    }
}

/// North-edge altitude field: value equals the row number everywhere.
fn altitude_spec(g: &Graph) -> FieldSpec {
    FieldSpec::edge(
        FQ_L,
        Rational::from_int(g.vertex_count() as i64 + 2),
        Rational::ONE,
    )
}

fn track_space(g: &Graph) -> EnvSpace {
    let mut field_set: Vec<FieldSpec> = [FQ_P, FQ_S, FQ_N, FQ_E, FQ_W].map(marker_spec).into();
    field_set.push(altitude_spec(g));
    EnvSpace::Sf {
        width: 3,
        height: g.vertex_count() as u32 + 2,
        field_set,
    }
}

fn check_subset(g: &Graph, k: usize, subset: &[usize]) -> Result<(), ReductionError> {
    if subset.len() != k {
        return Err(ReductionError::Malformed(format!(
            "subset of {} vertices, expected exactly {k}",
            subset.len()
        )));
    }
    for window in subset.windows(2) {
        if window[0] >= window[1] {
            return Err(ReductionError::Malformed(
                "subset must be strictly ascending".into(),
            ));
        }
    }
    if subset.iter().any(|&j| j < 1 || j > g.vertex_count()) {
        return Err(ReductionError::Malformed(format!(
            "subset vertex outside 1..={}",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// The column environment encoding `subset`: start marker on the robot's
/// square, the subset's vertex fields on the cells above.
pub fn column_candidate_env(
    g: &Graph,
    k: usize,
    subset: &[usize],
) -> Result<EnvironmentSf, ReductionError> {
    check_subset(g, k, subset)?;
    let EnvSpace::Sf {
        width,
        height,
        field_set,
    } = column_space(g, k)
    else {
        unreachable!()
    };
    let mut env = EnvironmentSf::empty(width, height, field_set);
    env.add_point_field(GridCoord::new(1, 1), marker_spec(FQ_S))?;
    for (cell, &j) in subset.iter().enumerate() {
        env.add_point_field(GridCoord::new(1, cell as u32 + 2), column_vertex_spec(g, j))?;
    }
    Ok(env)
}

/// The track environment encoding `subset`: guideposts on the corners, the
/// altitude field on the north edge, and one selection mark per subset
/// vertex `j` at `(1, j+1)`.
pub fn track_candidate_env(
    g: &Graph,
    k: usize,
    subset: &[usize],
) -> Result<EnvironmentSf, ReductionError> {
    check_subset(g, k, subset)?;
    let v = g.vertex_count() as u32;
    let EnvSpace::Sf {
        width,
        height,
        field_set,
    } = track_space(g)
    else {
        unreachable!()
    };
    let mut env = EnvironmentSf::empty(width, height, field_set);
    env.add_point_field(GridCoord::new(1, 1), marker_spec(FQ_N))?;
    for &j in subset {
        env.add_point_field(GridCoord::new(1, j as u32 + 1), marker_spec(FQ_P))?;
    }
    for c in [1, 2] {
        env.add_point_field(GridCoord::new(c, v + 2), marker_spec(FQ_E))?;
    }
    env.add_point_field(GridCoord::new(3, v + 2), marker_spec(FQ_S))?;
    for c in [2, 3] {
        env.add_point_field(GridCoord::new(c, 1), marker_spec(FQ_W))?;
    }
    env.add_edge_field(Direction::North, altitude_spec(g))?;
    Ok(env)
}

fn on(quantity: &str) -> Formula {
    fval(quantity, Rel::Eq, Rational::ONE)
}

fn off(quantity: &str) -> Formula {
    fval(quantity, Rel::Eq, Rational::ZERO)
}

fn row_is(r: u32) -> Formula {
    fval(FQ_L, Rel::Eq, Rational::from_int(r as i64))
}

fn below_top(g: &Graph) -> Formula {
    fval(
        FQ_L,
        Rel::Lt,
        Rational::from_int(g.vertex_count() as i64 + 2),
    )
}

fn above_bottom() -> Formula {
    fval(FQ_L, Rel::Gt, Rational::ONE)
}

fn write_here() -> Modification {
    Modification::FMod {
        spec: FieldSpec::s_x(),
        offset: (0, 0),
    }
}

/// Stationary column robot: one state per vertex, advanced by sensing any
/// placed field from that vertex's closed neighborhood, bracketed by the
/// start marker.
fn column_controller(g: &Graph) -> Controller {
    let v = g.vertex_count();
    let mut states = vec!["q0".to_owned()];
    states.extend((0..=v).map(|i| format!("q_v{i}")));
    let step = |i: usize| i + 1;
    let mut transitions = vec![Transition::new(
        0,
        on(FQ_S),
        Modification::None,
        Move::Stay,
        step(0),
    )];
    for i in 1..=v {
        for j in g.closed_neighborhood(i) {
            transitions.push(Transition::new(
                step(i - 1),
                fval(&fq_vertex(j), Rel::Ge, Rational::ONE),
                Modification::None,
                Move::Stay,
                step(i),
            ));
        }
    }
    transitions.push(Transition::new(
        step(v),
        on(FQ_S),
        write_here(),
        Move::Stay,
        step(v),
    ));
    Controller::new(states, transitions, Sensing::Sf)
}

/// Column robot squashed into a single conjunction: every vertex's
/// neighborhood disjunction, plus the start marker, checked at once.
fn column_collapsed_controller(g: &Graph) -> Controller {
    let mut parts: Vec<Formula> = (1..=g.vertex_count())
        .map(|i| {
            Formula::or_all(
                g.closed_neighborhood(i)
                    .into_iter()
                    .map(|j| fval(&fq_vertex(j), Rel::Ge, Rational::ONE)),
            )
        })
        .collect();
    parts.push(on(FQ_S));
    let transitions = vec![Transition::new(
        0,
        Formula::and_all(parts),
        write_here(),
        Move::Stay,
        0,
    )];
    Controller::new(vec!["q0".into()], transitions, Sensing::Sf)
}

/// Single track robot: a counting lap bounding the marks by `k`, then one
/// lap per vertex requiring a mark from its closed neighborhood, then the
/// corner rewrite. Unexpected layouts strand it mid-lap, which times out.
fn track_controller(g: &Graph, k: usize) -> Controller {
    let v = g.vertex_count();
    let top = v as u32 + 2;
    let mut states = vec!["q_c0".to_owned()];
    states.extend((0..=k).map(|i| format!("q_c1_{i}")));
    states.extend(["q_c2".into(), "q_c3".into(), "q_c4".into()]);
    for i in 1..=v {
        states.extend((0..=4).map(|p| format!("q_v{i}_{p}")));
    }
    let c1 = |i: usize| 1 + i;
    let (c2, c3, c4) = (k + 2, k + 3, k + 4);
    let vs = |i: usize, p: usize| k + 5 + (i - 1) * 5 + p;
    let go = |from: usize, trigger: Formula, mv: Move, to: usize| {
        Transition::new(from, trigger, Modification::None, mv, to)
    };

    let mut t = vec![go(
        0,
        Formula::and_all([on(FQ_N), row_is(1)]),
        Move::GoNorth,
        c1(0),
    )];
    for i in 1..=k {
        t.push(go(c1(i - 1), on(FQ_P), Move::GoNorth, c1(i)));
        t.push(go(
            c1(i - 1),
            Formula::and_all([off(FQ_P), off(FQ_E)]),
            Move::GoNorth,
            c1(i - 1),
        ));
    }
    t.push(go(
        c1(k),
        Formula::and_all([off(FQ_P), off(FQ_E)]),
        Move::GoNorth,
        c1(k),
    ));
    t.push(go(
        c1(k),
        Formula::and_all([on(FQ_E), row_is(top)]),
        Move::GoEast,
        c2,
    ));
    t.push(go(
        c2,
        Formula::and_all([on(FQ_E), row_is(top)]),
        Move::GoEast,
        c2,
    ));
    t.push(go(
        c2,
        Formula::and_all([on(FQ_S), row_is(top)]),
        Move::GoSouth,
        c3,
    ));
    t.push(go(
        c3,
        Formula::and_all([below_top(g), above_bottom()]),
        Move::GoSouth,
        c3,
    ));
    t.push(go(
        c3,
        Formula::and_all([on(FQ_W), row_is(1)]),
        Move::GoWest,
        c4,
    ));
    t.push(go(
        c4,
        Formula::and_all([on(FQ_W), row_is(1)]),
        Move::GoWest,
        c4,
    ));
    t.push(go(
        c4,
        Formula::and_all([on(FQ_N), row_is(1)]),
        Move::GoNorth,
        vs(1, 0),
    ));
    for i in 1..=v {
        for j in g.closed_neighborhood(i) {
            t.push(go(
                vs(i, 0),
                Formula::and_all([on(FQ_P), row_is(j as u32 + 1)]),
                Move::GoNorth,
                vs(i, 1),
            ));
        }
        for m in g.closed_non_neighbors(i) {
            t.push(go(
                vs(i, 0),
                Formula::and_all([on(FQ_P), row_is(m as u32 + 1)]),
                Move::GoNorth,
                vs(i, 0),
            ));
        }
        t.push(go(vs(i, 1), off(FQ_E), Move::GoNorth, vs(i, 1)));
        t.push(go(
            vs(i, 0),
            Formula::and_all([off(FQ_P), off(FQ_E)]),
            Move::GoNorth,
            vs(i, 0),
        ));
        for p in [1, 2] {
            t.push(go(
                vs(i, p),
                Formula::and_all([on(FQ_E), row_is(top)]),
                Move::GoEast,
                vs(i, 2),
            ));
        }
        t.push(go(
            vs(i, 2),
            Formula::and_all([on(FQ_S), row_is(top)]),
            Move::GoSouth,
            vs(i, 3),
        ));
        t.push(go(
            vs(i, 3),
            Formula::and_all([below_top(g), above_bottom()]),
            Move::GoSouth,
            vs(i, 3),
        ));
        for p in [3, 4] {
            t.push(go(
                vs(i, p),
                Formula::and_all([on(FQ_W), row_is(1)]),
                Move::GoWest,
                vs(i, 4),
            ));
        }
        if i < v {
            t.push(go(
                vs(i, 4),
                Formula::and_all([on(FQ_N), row_is(1)]),
                Move::GoNorth,
                vs(i + 1, 0),
            ));
        } else {
            t.push(Transition::new(
                vs(i, 4),
                Formula::and_all([on(FQ_N), row_is(1)]),
                write_here(),
                Move::Stay,
                vs(i, 4),
            ));
        }
    }
    Controller::new(states, t, Sensing::Sf)
}

/// Lap robot for vertex `i` in the multirobot shape: laps the track, drops
/// into a "found" lane when the climb passes a mark from `i`'s closed
/// neighborhood, and records the verdict as scaffolding beside its home
/// row on the way down.
fn lap_robot(g: &Graph, i: usize) -> Controller {
    let v = g.vertex_count();
    let top = v as u32 + 2;
    let (q0, qv1, qv1f, qv2, qv2f, qv3, qv3f, qv4) = (0, 1, 2, 3, 4, 5, 6, 7);
    let states = ["q0", "q_v1", "q_v1f", "q_v2", "q_v2f", "q_v3", "q_v3f", "q_v4"]
        .map(String::from)
        .to_vec();
    let g_n = || build_collision_guard(Direction::North);
    let g_s = || build_collision_guard(Direction::South);
    let g_e = || build_collision_guard(Direction::East);
    let g_w = || build_collision_guard(Direction::West);
    let go = |from: usize, trigger: Formula, mv: Move, to: usize| {
        Transition::new(from, trigger, Modification::None, mv, to)
    };
    let rows_of = |vertices: &[usize]| {
        Formula::or_all(vertices.iter().map(|&j| row_is(j as u32 + 1)))
    };

    let mut t = vec![Transition::new(
        q0,
        Formula::Star,
        Modification::None,
        Move::Stay,
        qv3,
    )];
    let nc = g.closed_neighborhood(i);
    let complement = g.closed_non_neighbors(i);
    let mut found_parts = vec![on(FQ_P)];
    if nc.len() < v {
        found_parts.push(rows_of(&nc));
    }
    found_parts.push(g_n());
    t.push(go(qv1, Formula::and_all(found_parts), Move::GoNorth, qv1f));
    if !complement.is_empty() {
        t.push(go(
            qv1,
            Formula::and_all([on(FQ_P), rows_of(&complement), g_n()]),
            Move::GoNorth,
            qv1,
        ));
    }
    t.push(go(
        qv1f,
        Formula::and_all([below_top(g), g_n()]),
        Move::GoNorth,
        qv1f,
    ));
    t.push(go(
        qv1,
        Formula::and_all([off(FQ_P), below_top(g), g_n()]),
        Move::GoNorth,
        qv1,
    ));
    let top_exit = || Formula::and_all([on(FQ_E), row_is(top), g_e()]);
    for (from, to) in [(qv1f, qv2f), (qv2f, qv2f), (qv1, qv2), (qv2, qv2)] {
        t.push(go(from, top_exit(), Move::GoEast, to));
    }
    let descend_entry = || Formula::and_all([on(FQ_S), row_is(top), g_s()]);
    t.push(go(qv2f, descend_entry(), Move::GoSouth, qv3f));
    t.push(go(qv2, descend_entry(), Move::GoSouth, qv3));
    let home = i as u32 + 1;
    t.push(go(
        qv3f,
        Formula::and_all([below_top(g), above_bottom(), row_is(home).not(), g_s()]),
        Move::GoSouth,
        qv3f,
    ));
    t.push(Transition::new(
        qv3f,
        Formula::and_all([below_top(g), above_bottom(), row_is(home), g_s()]),
        Modification::FMod {
            spec: FieldSpec::s_x(),
            offset: (-1, 0),
        },
        Move::GoSouth,
        qv3f,
    ));
    t.push(go(
        qv3,
        Formula::and_all([below_top(g), above_bottom(), g_s()]),
        Move::GoSouth,
        qv3,
    ));
    let west_exit = || Formula::and_all([on(FQ_W), row_is(1), g_w()]);
    for (from, to) in [(qv3f, qv4), (qv3, qv4), (qv4, qv4)] {
        t.push(go(from, west_exit(), Move::GoWest, to));
    }
    t.push(go(
        qv4,
        Formula::and_all([on(FQ_N), row_is(1), g_n()]),
        Move::GoNorth,
        qv1,
    ));
    Controller::new(states, t, Sensing::Sf)
}

/// Checker for the multirobot shape: counts the marks once, then laps the
/// track inspecting the scaffolding column from beside it, converting its
/// own square when the inspection reaches the bottom fully recorded; an
/// incomplete record sends it around for another try.
fn scaffold_checker(g: &Graph, k: usize) -> Controller {
    let v = g.vertex_count();
    let top = v as u32 + 2;
    let mut states = vec!["q0".to_owned()];
    states.extend((0..=k).map(|i| format!("q_ce1_{i}")));
    states.extend([
        "q_ce2".into(),
        "q_ce3".into(),
        "q_ce4".into(),
        "q_cv1".into(),
        "q_cv2".into(),
        "q_cv3f".into(),
        "q_cv3nf".into(),
        "q_cv4".into(),
    ]);
    let ce1 = |i: usize| 1 + i;
    let (ce2, ce3, ce4) = (k + 2, k + 3, k + 4);
    let (cv1, cv2, cv3f, cv3nf, cv4) = (k + 5, k + 6, k + 7, k + 8, k + 9);
    let g_n = || build_collision_guard(Direction::North);
    let g_s = || build_collision_guard(Direction::South);
    let g_e = || build_collision_guard(Direction::East);
    let g_w = || build_collision_guard(Direction::West);
    let seen = || fval(FQ_X, Rel::Eq, rat(1, 2));
    let go = |from: usize, trigger: Formula, mv: Move, to: usize| {
        Transition::new(from, trigger, Modification::None, mv, to)
    };

    let mut t = vec![go(
        0,
        Formula::and_all([on(FQ_N), row_is(1), g_n()]),
        Move::GoNorth,
        ce1(0),
    )];
    for i in 1..=k {
        t.push(go(
            ce1(i - 1),
            Formula::and_all([on(FQ_P), off(FQ_X), g_n()]),
            Move::GoNorth,
            ce1(i),
        ));
        t.push(go(
            ce1(i - 1),
            Formula::and_all([off(FQ_P), off(FQ_E), off(FQ_X), g_n()]),
            Move::GoNorth,
            ce1(i - 1),
        ));
    }
    t.push(go(
        ce1(k),
        Formula::and_all([off(FQ_P), off(FQ_E), off(FQ_X), g_n()]),
        Move::GoNorth,
        ce1(k),
    ));
    t.push(go(
        ce1(k),
        Formula::and_all([on(FQ_E), row_is(top), g_e()]),
        Move::GoEast,
        ce2,
    ));
    t.push(go(
        ce2,
        Formula::and_all([on(FQ_E), row_is(top), g_e()]),
        Move::GoEast,
        ce2,
    ));
    t.push(go(
        ce2,
        Formula::and_all([on(FQ_S), row_is(top), g_s()]),
        Move::GoSouth,
        ce3,
    ));
    t.push(go(
        ce3,
        Formula::and_all([below_top(g), above_bottom(), off(FQ_X), g_s()]),
        Move::GoSouth,
        ce3,
    ));
    t.push(go(
        ce3,
        Formula::and_all([on(FQ_W), row_is(1), g_w()]),
        Move::GoWest,
        ce4,
    ));
    t.push(go(
        ce4,
        Formula::and_all([on(FQ_W), row_is(1), g_w()]),
        Move::GoWest,
        ce4,
    ));
    t.push(go(
        ce4,
        Formula::and_all([on(FQ_N), row_is(1), g_n()]),
        Move::GoNorth,
        cv1,
    ));
    t.push(go(
        cv1,
        Formula::and_all([on(FQ_P), below_top(g), g_n()]),
        Move::GoNorth,
        cv1,
    ));
    t.push(go(
        cv1,
        Formula::and_all([off(FQ_P), below_top(g), g_n()]),
        Move::GoNorth,
        cv1,
    ));
    t.push(go(
        cv1,
        Formula::and_all([on(FQ_E), row_is(top), g_e()]),
        Move::GoEast,
        cv2,
    ));
    t.push(go(
        cv2,
        Formula::and_all([on(FQ_E), row_is(top), g_e()]),
        Move::GoEast,
        cv2,
    ));
    t.push(go(
        cv2,
        Formula::and_all([on(FQ_S), row_is(top), g_s()]),
        Move::GoSouth,
        cv3f,
    ));
    t.push(go(
        cv3f,
        Formula::and_all([
            below_top(g),
            fval(FQ_L, Rel::Gt, Rational::from_int(2)),
            seen(),
            g_s(),
        ]),
        Move::GoSouth,
        cv3f,
    ));
    t.push(Transition::new(
        cv3f,
        Formula::and_all([row_is(2), seen(), g_s()]),
        write_here(),
        Move::GoSouth,
        cv3f,
    ));
    t.push(go(
        cv3f,
        Formula::and_all([below_top(g), above_bottom(), off(FQ_X), g_s()]),
        Move::GoSouth,
        cv3nf,
    ));
    t.push(go(
        cv3nf,
        Formula::and_all([above_bottom(), g_s()]),
        Move::GoSouth,
        cv3nf,
    ));
    t.push(go(
        cv3f,
        Formula::and_all([on(FQ_W), row_is(1), g_w()]),
        Move::GoWest,
        cv4,
    ));
    t.push(go(
        cv3nf,
        Formula::and_all([on(FQ_W), row_is(1), g_w()]),
        Move::GoWest,
        cv4,
    ));
    t.push(go(
        cv4,
        Formula::and_all([on(FQ_W), row_is(1), g_w()]),
        Move::GoWest,
        cv4,
    ));
    t.push(go(
        cv4,
        Formula::and_all([on(FQ_N), row_is(1), g_n()]),
        Move::GoNorth,
        cv1,
    ));
    Controller::new(states, t, Sensing::Sf)
}

/// Builds the environment-design instance for "does `g` have a dominating
/// set of size at most `k`?". Requires `1 <= k <= |V|`. The track-shaped
/// spaces are far larger than the enumerating solver's candidate cap;
/// decide those by running the team on the `C(|V|, k)` candidate
/// environments from [`track_candidate_env`].
pub fn gadget_domset_to_envdes_sf(
    g: &Graph,
    k: usize,
    variant: EnvDesVariant,
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
    let (space, team, p_i, p_x) = match variant {
        EnvDesVariant::Column => (
            column_space(g, k),
            vec![column_controller(g)],
            vec![GridCoord::new(1, 1)],
            GridCoord::new(1, 1),
        ),
        EnvDesVariant::ColumnCollapsed => (
            column_space(g, k),
            vec![column_collapsed_controller(g)],
            vec![GridCoord::new(1, 1)],
            GridCoord::new(1, 1),
        ),
        EnvDesVariant::Track => (
            track_space(g),
            vec![track_controller(g, k)],
            vec![GridCoord::new(1, 1)],
            GridCoord::new(1, 1),
        ),
        EnvDesVariant::TrackCollapsed => (
            track_space(g),
            vec![collapse_transitions(&track_controller(g, k))],
            vec![GridCoord::new(1, 1)],
            GridCoord::new(1, 1),
        ),
        EnvDesVariant::Multirobot => {
            let mut team = vec![scaffold_checker(g, k)];
            team.extend((1..=v).map(|i| lap_robot(g, i)));
            let mut p_i = vec![GridCoord::new(1, 1)];
            p_i.extend((2..=v as u32 + 1).map(|r| GridCoord::new(3, r)));
            (track_space(g), team, p_i, GridCoord::new(3, 2))
        }
    };
    let instance = ProblemInstance::EnvDesSf(EnvDesInstance {
        space,
        team,
        p_i,
        x: Structure::single(),
        p_x,
    });
    instance.validate()?;
    Ok(GadgetBundle {
        instance,
        provenance: GadgetProvenance::DominatingSet {
            graph: g.clone(),
            k,
            family: "envdes".into(),
            variant: variant.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Environment;
    use crate::sim::run_verify;
    use crate::solve::{solve_env_des, DesignSolution, SolveError};

    fn p3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    fn c4() -> Graph {
        Graph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap()
    }

    fn k3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    fn envdes_fields(b: &GadgetBundle) -> &EnvDesInstance {
        let ProblemInstance::EnvDesSf(i) = &b.instance else {
            panic!("expected an environment-design instance")
        };
        i
    }

    fn runs_on(b: &GadgetBundle, env: EnvironmentSf) -> bool {
        let i = envdes_fields(b);
        run_verify(&Environment::Sf(env), &i.team, &i.p_i, &i.x, i.p_x).is_success()
    }

    #[test]
    fn column_solver_finds_the_path_center() {
        let b = gadget_domset_to_envdes_sf(&p3(), 1, EnvDesVariant::Column).unwrap();
        let DesignSolution::FoundEnvironment { environment } =
            solve_env_des(envdes_fields(&b)).unwrap()
        else {
            panic!("expected an environment")
        };
        let sf = environment.as_sf().unwrap();
        assert_eq!(sf.point_field_at(GridCoord::new(1, 1)).unwrap().quantity, FQ_S);
        assert_eq!(sf.point_field_at(GridCoord::new(1, 2)).unwrap().quantity, "fq_v2");
    }

    #[test]
    fn column_reports_bottom_on_the_four_cycle() {
        for variant in [EnvDesVariant::Column, EnvDesVariant::ColumnCollapsed] {
            let b = gadget_domset_to_envdes_sf(&c4(), 1, variant).unwrap();
            assert_eq!(solve_env_des(envdes_fields(&b)).unwrap(), DesignSolution::Bottom);
        }
    }

    #[test]
    fn collapsed_column_accepts_the_same_environment()  {
        let b = gadget_domset_to_envdes_sf(&p3(), 1, EnvDesVariant::ColumnCollapsed).unwrap();
        assert!(runs_on(&b, column_candidate_env(&p3(), 1, &[2]).unwrap()));
        assert!(!runs_on(&b, column_candidate_env(&p3(), 1, &[1]).unwrap()));
    }

    #[test]
    fn track_candidates_follow_domination() {
        for variant in [EnvDesVariant::Track, EnvDesVariant::TrackCollapsed] {
            let b = gadget_domset_to_envdes_sf(&p3(), 1, variant).unwrap();
            assert!(runs_on(&b, track_candidate_env(&p3(), 1, &[2]).unwrap()));
            assert!(!runs_on(&b, track_candidate_env(&p3(), 1, &[1]).unwrap()));
            assert!(!runs_on(&b, track_candidate_env(&p3(), 1, &[3]).unwrap()));
        }
    }

    #[test]
    fn triangle_is_dominated_by_any_single_vertex() {
        let b = gadget_domset_to_envdes_sf(&k3(), 1, EnvDesVariant::Track).unwrap();
        for j in 1..=3 {
            assert!(runs_on(&b, track_candidate_env(&k3(), 1, &[j]).unwrap()));
        }
    }

    #[test]
    fn track_space_is_too_large_to_enumerate() {
        let b = gadget_domset_to_envdes_sf(&p3(), 1, EnvDesVariant::Track).unwrap();
        assert!(matches!(
            solve_env_des(envdes_fields(&b)),
            Err(SolveError::SearchSpaceExceeded { .. })
        ));
    }

    #[test]
    fn multirobot_candidates_follow_domination() {
        let b = gadget_domset_to_envdes_sf(&p3(), 1, EnvDesVariant::Multirobot).unwrap();
        assert!(runs_on(&b, track_candidate_env(&p3(), 1, &[2]).unwrap()));
        assert!(!runs_on(&b, track_candidate_env(&p3(), 1, &[1]).unwrap()));
        let b2 = gadget_domset_to_envdes_sf(&p3(), 2, EnvDesVariant::Multirobot).unwrap();
        assert!(runs_on(&b2, track_candidate_env(&p3(), 2, &[1, 3]).unwrap()));
    }

    #[test]
    fn multirobot_audits_hold_on_every_four_vertex_graph() {
        use super::super::all_labeled_graphs;
        for g in all_labeled_graphs(4) {
            for k in [1, 2] {
                let b = gadget_domset_to_envdes_sf(&g, k, EnvDesVariant::Multirobot).unwrap();
                let audit = b.audit();
                assert!(audit.max_out_degree <= 4, "degree {}", audit.max_out_degree);
                assert!(audit.max_formula_length <= 12, "length {}", audit.max_formula_length);
                assert_eq!(audit.controller_count, 5);
                assert_eq!(audit.max_state_count, k + 10);
            }
        }
    }

    #[test]
    fn track_formulas_stay_tiny() {
        let b = gadget_domset_to_envdes_sf(&c4(), 2, EnvDesVariant::Track).unwrap();
        let audit = b.audit();
        assert_eq!(audit.max_formula_length, 3);
        let collapsed = gadget_domset_to_envdes_sf(&c4(), 2, EnvDesVariant::TrackCollapsed).unwrap();
        assert!(collapsed.audit().max_out_degree <= 3);
    }

    #[test]
    fn candidate_helpers_validate_subsets() {
        assert!(column_candidate_env(&p3(), 1, &[1, 2]).is_err());
        assert!(column_candidate_env(&p3(), 2, &[2, 1]).is_err());
        assert!(track_candidate_env(&p3(), 1, &[4]).is_err());
    }

    #[test]
    fn rejects_degenerate_budgets() {
        assert!(gadget_domset_to_envdes_sf(&p3(), 0, EnvDesVariant::Column).is_err());
        assert!(gadget_domset_to_envdes_sf(&p3(), 4, EnvDesVariant::Track).is_err());
    }

    #[test]
    fn variant_names_round_trip() {
        for variant in EnvDesVariant::ALL {
            assert_eq!(variant.to_string().parse::<EnvDesVariant>().unwrap(), variant);
        }
        assert!("ring".parse::<EnvDesVariant>().is_err());
    }
}
