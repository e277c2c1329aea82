//! FSR controllers: sensing predicates, trigger formulas, modifications,
//! transitions, template instantiation, and the transition-collapse
//! transform.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::env::{Environment, FieldKind, FieldSpec, SquareType, E_ROBOT, FQ_ROBOT};
use crate::grid::{Direction, GridCoord, Move};
use crate::rational::Rational;

/// Index into a controller's state list; state 0 is the initial state `q0`.
pub type StateId = usize;

/// `(dx, dy)` offset relative to the robot's current square.
pub type Offset = (i32, i32);

/// Comparison operator in value and gradient predicates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Rel {
    pub fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            Rel::Eq => lhs == rhs,
            Rel::Lt => lhs < rhs,
            Rel::Gt => lhs > rhs,
            Rel::Le => lhs <= rhs,
            Rel::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rel::Eq => "=",
            Rel::Lt => "<",
            Rel::Gt => ">",
            Rel::Le => "<=",
            Rel::Ge => ">=",
        };
        f.write_str(s)
    }
}

/// Atomic sensing predicate.
///
/// `EnVal` belongs to square-type (visual) sensing and tests the type of a
/// square at a Manhattan offset; `FVal`/`FGrd` belong to scalar-field sensing
/// and test the field value at the robot's own square and its one-step
/// gradient.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    EnVal {
        square_type: SquareType,
        offset: Offset,
    },
    FVal {
        quantity: String,
        rel: Rel,
        value: Rational,
    },
    FGrd {
        quantity: String,
        rel: Rel,
        dir: Direction,
    },
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::EnVal { square_type, offset } => {
                write!(f, "enval({}, ({}, {}))", square_type.name(), offset.0, offset.1)
            }
            Predicate::FVal { quantity, rel, value } => {
                write!(f, "fval({quantity}, {rel}, {value})")
            }
            Predicate::FGrd { quantity, rel, dir } => {
                write!(f, "fgrd({quantity}, {rel}, {dir})")
            }
        }
    }
}

/// Propositional trigger formula over predicates. `Star` is the default
/// trigger: it enables only when no non-`Star` transition of the current
/// state is enabled, and it may only appear as an entire formula.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Star,
    Atom(Predicate),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn atom(p: Predicate) -> Formula {
        Formula::Atom(p)
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    /// Left-associated conjunction; panics on an empty iterator (the grammar
    /// has no empty connective).
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("and_all needs at least one conjunct");
        it.fold(first, Formula::and)
    }

    /// Left-associated disjunction; panics on an empty iterator.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("or_all needs at least one disjunct");
        it.fold(first, Formula::or)
    }

    pub fn is_star(&self) -> bool {
        matches!(self, Formula::Star)
    }

    fn has_star_subterm(&self) -> bool {
        match self {
            Formula::Star => true,
            Formula::Atom(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) => a.has_star_subterm() || b.has_star_subterm(),
            Formula::Not(a) => a.has_star_subterm(),
        }
    }

    fn predicates(&self, out: &mut Vec<Predicate>) {
        match self {
            Formula::Star => {}
            Formula::Atom(p) => out.push(p.clone()),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
            Formula::Not(a) => a.predicates(out),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Star => f.write_str("*"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
        }
    }
}

/// Formula symbol count: each predicate is one symbol, each connective is
/// one symbol, and the default trigger `*` has length zero.
pub fn formula_length(f: &Formula) -> u32 {
    match f {
        Formula::Star => 0,
        Formula::Atom(_) => 1,
        Formula::And(a, b) | Formula::Or(a, b) => formula_length(a) + formula_length(b) + 1,
        Formula::Not(a) => formula_length(a) + 1,
    }
}

/// Environment modification performed by an enabled transition. The offset
/// must satisfy `|dx| + |dy| <= 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modification {
    None,
    EnMod {
        square_type: SquareType,
        offset: Offset,
    },
    FMod {
        spec: FieldSpec,
        offset: Offset,
    },
}

impl fmt::Display for Modification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modification::None => f.write_str("*"),
            Modification::EnMod { square_type, offset } => {
                write!(f, "enmod({}, ({}, {}))", square_type.name(), offset.0, offset.1)
            }
            Modification::FMod { spec, offset } => {
                write!(f, "fmod({}, ({}, {}))", spec.quantity, offset.0, offset.1)
            }
        }
    }
}

/// One controller transition `(q, f, x, move, q')`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Transition {
    pub from: StateId,
    pub trigger: Formula,
    pub modification: Modification,
    #[serde(rename = "move")]
    pub mv: Move,
    pub to: StateId,
}

impl Transition {
    pub fn new(
        from: StateId,
        trigger: Formula,
        modification: Modification,
        mv: Move,
        to: StateId,
    ) -> Transition {
        Transition {
            from,
            trigger,
            modification,
            mv,
            to,
        }
    }

    /// The components that must agree for deterministic operation.
    pub fn effect(&self) -> (&Modification, Move, StateId) {
        (&self.modification, self.mv, self.to)
    }
}

/// Sensing mode of a controller; square-type sensing carries its radius.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sensing {
    St { radius: u32 },
    Sf,
}

/// Finite-state robot controller.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Controller {
    /// State names; index 0 is the initial state.
    pub states: Vec<String>,
    pub transitions: Vec<Transition>,
    pub sensing: Sensing,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ControllerError {
    #[error("controller has no states")]
    NoStates,
    #[error("transition {index} references state {state} but there are only {count} states")]
    BadStateRef {
        index: usize,
        state: StateId,
        count: usize,
    },
    #[error("transition {index}: `*` may only appear as an entire trigger formula")]
    StarSubterm { index: usize },
    #[error("transition {index}: {predicate} does not match {sensing:?} sensing")]
    SensingMismatch {
        index: usize,
        predicate: String,
        sensing: Sensing,
    },
    #[error("transition {index}: enval offset ({dx}, {dy}) exceeds sensory radius {radius}")]
    OffsetBeyondRadius {
        index: usize,
        dx: i32,
        dy: i32,
        radius: u32,
    },
    #[error("transition {index}: modification offset ({dx}, {dy}) exceeds Manhattan distance 1")]
    ModOffsetTooFar { index: usize, dx: i32, dy: i32 },
    #[error("transition {index}: fmod spec {quantity:?} must be a point-field")]
    FModEdgeSpec { index: usize, quantity: String },
}

impl Controller {
    pub fn new(states: Vec<String>, transitions: Vec<Transition>, sensing: Sensing) -> Controller {
        Controller {
            states,
            transitions,
            sensing,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn out_transitions(&self, state: StateId) -> impl Iterator<Item = (usize, &Transition)> {
        self.transitions
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.from == state)
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.state_count())
            .map(|q| self.out_transitions(q).count())
            .max()
            .unwrap_or(0)
    }

    pub fn max_formula_length(&self) -> u32 {
        self.transitions
            .iter()
            .map(|t| formula_length(&t.trigger))
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), ControllerError> {
        if self.states.is_empty() {
            return Err(ControllerError::NoStates);
        }
        let count = self.states.len();
        for (index, t) in self.transitions.iter().enumerate() {
            for state in [t.from, t.to] {
                if state >= count {
                    return Err(ControllerError::BadStateRef { index, state, count });
                }
            }
            if !t.trigger.is_star() && t.trigger.has_star_subterm() {
                return Err(ControllerError::StarSubterm { index });
            }
            let mut preds = Vec::new();
            t.trigger.predicates(&mut preds);
            for p in &preds {
                match (&self.sensing, p) {
                    (Sensing::St { radius }, Predicate::EnVal { offset: (dx, dy), .. }) => {
                        if dx.unsigned_abs() + dy.unsigned_abs() > *radius {
                            return Err(ControllerError::OffsetBeyondRadius {
                                index,
                                dx: *dx,
                                dy: *dy,
                                radius: *radius,
                            });
                        }
                    }
                    (Sensing::Sf, Predicate::FVal { .. }) | (Sensing::Sf, Predicate::FGrd { .. }) => {}
                    _ => {
                        return Err(ControllerError::SensingMismatch {
                            index,
                            predicate: p.to_string(),
                            sensing: self.sensing,
                        })
                    }
                }
            }
            let (mod_offset, is_fmod_edge) = match &t.modification {
                Modification::None => (None, false),
                Modification::EnMod { offset, .. } => (Some(*offset), false),
                Modification::FMod { spec, offset } => {
                    (Some(*offset), spec.kind != FieldKind::Point)
                }
            };
            if let Some((dx, dy)) = mod_offset {
                if dx.unsigned_abs() + dy.unsigned_abs() > 1 {
                    return Err(ControllerError::ModOffsetTooFar { index, dx, dy });
                }
                if matches!(&t.modification, Modification::EnMod { .. })
                    && !matches!(self.sensing, Sensing::St { .. })
                {
                    return Err(ControllerError::SensingMismatch {
                        index,
                        predicate: t.modification.to_string(),
                        sensing: self.sensing,
                    });
                }
                if matches!(&t.modification, Modification::FMod { .. })
                    && self.sensing != Sensing::Sf
                {
                    return Err(ControllerError::SensingMismatch {
                        index,
                        predicate: t.modification.to_string(),
                        sensing: self.sensing,
                    });
                }
            }
            if is_fmod_edge {
                if let Modification::FMod { spec, .. } = &t.modification {
                    return Err(ControllerError::FModEdgeSpec {
                        index,
                        quantity: spec.quantity.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Read-only view the predicate evaluator senses through. The direct
/// implementation below recomputes field values from scratch; the simulator
/// substitutes a cached view with identical semantics.
pub trait Senses {
    fn in_bounds(&self, p: GridCoord) -> bool;
    /// Robot on that square right now?
    fn occupied(&self, p: GridCoord) -> bool;
    /// Square-type at `p` ignoring robot masking; `None` in SF environments.
    fn square_type(&self, p: GridCoord) -> Option<&SquareType>;
    /// Field value of `quantity` at `p`, robots included; zero in ST
    /// environments.
    fn field(&self, quantity: &str, p: GridCoord) -> Rational;
}

/// Uncached sensing straight off an environment and robot overlay.
pub struct DirectSense<'a> {
    pub env: &'a Environment,
    pub overlay: &'a [GridCoord],
}

impl Senses for DirectSense<'_> {
    fn in_bounds(&self, p: GridCoord) -> bool {
        self.env.in_bounds(p)
    }

    fn occupied(&self, p: GridCoord) -> bool {
        self.overlay.contains(&p)
    }

    fn square_type(&self, p: GridCoord) -> Option<&SquareType> {
        self.env.as_st().map(|e| e.type_at(p))
    }

    fn field(&self, quantity: &str, p: GridCoord) -> Rational {
        match self.env.as_sf() {
            Some(e) => e
                .field_value(self.overlay, quantity, p)
                .expect("field query in bounds"),
            None => Rational::ZERO,
        }
    }
}

/// Evaluate one predicate at `pos` through a sensing view.
///
/// Out-of-bounds `enval` offsets and `fgrd` directions off the grid edge
/// evaluate to false. A robot-occupied square reads as `e_robot` under
/// visual sensing, masking the underlying type while the robot is present.
pub fn eval_predicate_with<S: Senses>(p: &Predicate, sense: &S, pos: GridCoord) -> bool {
    match p {
        Predicate::EnVal { square_type, offset } => {
            let target = match pos.offset(offset.0, offset.1) {
                Some(t) if sense.in_bounds(t) => t,
                _ => return false,
            };
            if sense.occupied(target) {
                return square_type.name() == E_ROBOT;
            }
            sense.square_type(target).map(|t| t == square_type).unwrap_or(false)
        }
        Predicate::FVal { quantity, rel, value } => rel.holds(sense.field(quantity, pos), *value),
        Predicate::FGrd { quantity, rel, dir } => {
            let neighbor = match pos.step(*dir) {
                Some(n) if sense.in_bounds(n) => n,
                _ => return false,
            };
            rel.holds(sense.field(quantity, pos), sense.field(quantity, neighbor))
        }
    }
}

/// Spec-level predicate evaluation against an environment and robot overlay.
pub fn eval_predicate(
    p: &Predicate,
    env: &Environment,
    overlay: &[GridCoord],
    pos: GridCoord,
) -> bool {
    eval_predicate_with(p, &DirectSense { env, overlay }, pos)
}

/// Standard propositional semantics; `Star` never reaches here (it is
/// resolved by `enabled_transitions`).
pub fn eval_formula_with<S: Senses>(f: &Formula, sense: &S, pos: GridCoord) -> bool {
    match f {
        Formula::Star => unreachable!("Star is resolved by enabled_transitions"),
        Formula::Atom(p) => eval_predicate_with(p, sense, pos),
        Formula::And(a, b) => eval_formula_with(a, sense, pos) && eval_formula_with(b, sense, pos),
        Formula::Or(a, b) => eval_formula_with(a, sense, pos) || eval_formula_with(b, sense, pos),
        Formula::Not(a) => !eval_formula_with(a, sense, pos),
    }
}

pub fn eval_formula(f: &Formula, env: &Environment, overlay: &[GridCoord], pos: GridCoord) -> bool {
    eval_formula_with(f, &DirectSense { env, overlay }, pos)
}

/// Indices of the transitions enabled for a robot in `state` at `pos`:
/// every out-transition whose non-`Star` trigger holds, or, when none does,
/// every `Star` out-transition. An empty result means the robot idles.
pub fn enabled_transition_indices<S: Senses>(
    c: &Controller,
    state: StateId,
    sense: &S,
    pos: GridCoord,
) -> Vec<usize> {
    let mut enabled = Vec::new();
    let mut stars = Vec::new();
    for (i, t) in c.out_transitions(state) {
        if t.trigger.is_star() {
            stars.push(i);
        } else if eval_formula_with(&t.trigger, sense, pos) {
            enabled.push(i);
        }
    }
    if enabled.is_empty() {
        stars
    } else {
        enabled
    }
}

pub fn enabled_transitions<'c>(
    c: &'c Controller,
    state: StateId,
    env: &Environment,
    overlay: &[GridCoord],
    pos: GridCoord,
) -> Vec<&'c Transition> {
    enabled_transition_indices(c, state, &DirectSense { env, overlay }, pos)
        .into_iter()
        .map(|i| &c.transitions[i])
        .collect()
}

/// The movement-safety guard for scalar-field robots:
/// `fval(fq_robot, <=, 3/2) and fgrd(fq_robot, >, dir)`.
///
/// The guard is sound (it never enables a move into an occupied square) but
/// conservative: two robots separated by one empty square deny a move into
/// the gap between them even though that move would be legal.
pub fn build_collision_guard(dir: Direction) -> Formula {
    Formula::atom(Predicate::FVal {
        quantity: FQ_ROBOT.to_owned(),
        rel: Rel::Le,
        value: Rational::new(3, 2),
    })
    .and(Formula::atom(Predicate::FGrd {
        quantity: FQ_ROBOT.to_owned(),
        rel: Rel::Gt,
        dir,
    }))
}

/// Transition with symbolic endpoints; a library of these is the search
/// space for controller design.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TransitionTemplate {
    pub trigger: Formula,
    pub modification: Modification,
    #[serde(rename = "move")]
    pub mv: Move,
}

impl TransitionTemplate {
    pub fn instantiate(&self, from: StateId, to: StateId) -> Transition {
        Transition::new(from, self.trigger.clone(), self.modification.clone(), self.mv, to)
    }
}

/// Streams every controller over exactly `q_count` states `q0..q{Q-1}` in
/// which each state has between 1 and `d` out-transitions, each an
/// instantiation of a library template over an ordered state pair (self-loops
/// included). A task solvable by a controller with fewer states is still
/// found: the remaining states act as unreachable padding.
///
/// The stream is duplicate-free and deterministic: per-state candidate
/// transitions are ordered by (template index, to-state), per-state choices
/// enumerate subsets of those candidates in lexicographic order, and states
/// advance odometer-style with `q0` most significant. The total count never
/// exceeds `|L|^(d*Q) * Q^(d*Q)`.
pub fn instantiate_templates(
    library: &[TransitionTemplate],
    q_count: usize,
    d: usize,
    sensing: Sensing,
) -> impl Iterator<Item = Controller> + '_ {
    assert!(q_count >= 1, "need at least one state");
    assert!(d >= 1, "need at least one transition per state");
    let states: Vec<String> = (0..q_count).map(|i| format!("q{i}")).collect();
    // Candidate (template, to) pairs are the same for every from-state.
    let n = library.len() * q_count;
    let choices = subsets_up_to(n, d);
    let mut odometer = vec![0usize; q_count];
    let mut done = choices.is_empty();
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut transitions = Vec::new();
        for (from, &choice) in odometer.iter().enumerate() {
            for &cand in &choices[choice] {
                let template = &library[cand / q_count];
                let to = cand % q_count;
                transitions.push(template.instantiate(from, to));
            }
        }
        let controller = Controller::new(states.clone(), transitions, sensing);
        // Advance with the last state fastest.
        let mut i = q_count;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            odometer[i] += 1;
            if odometer[i] < choices.len() {
                break;
            }
            odometer[i] = 0;
        }
        Some(controller)
    })
}

/// Exact length of the [`instantiate_templates`] stream, saturating at
/// `u128::MAX`: with `n = |L| * Q` candidate (template, to) pairs per state,
/// each state picks one of the `sum_{i=1..d} C(n, i)` non-empty subsets.
pub fn template_instantiation_count(library_len: usize, q_count: usize, d: usize) -> u128 {
    let n = (library_len as u128).saturating_mul(q_count as u128);
    let mut per_state: u128 = 0;
    let mut c: u128 = 1;
    let mut i: u128 = 0;
    while i < d as u128 && i < n {
        c = c.saturating_mul(n - i) / (i + 1);
        per_state = per_state.saturating_add(c);
        i += 1;
    }
    per_state.saturating_pow(q_count.try_into().unwrap_or(u32::MAX))
}

/// Non-empty subsets of `{0..n}` of size at most `d`, in lexicographic order
/// over their sorted index sequences.
fn subsets_up_to(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(n: usize, d: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in start..n {
            current.push(i);
            out.push(current.clone());
            if current.len() < d {
                extend(n, d, i + 1, current, out);
            }
            current.pop();
        }
    }
    extend(n, d, 0, &mut current, &mut out);
    out
}

/// Merges every maximal group of same-state transitions sharing
/// (modification, move, next state) into a single transition whose trigger
/// ORs the originals together, in their original order. `Star` transitions
/// are left untouched. Behavior is preserved on deterministic controllers;
/// per-state out-degree weakly decreases while formula length may grow.
pub fn collapse_transitions(c: &Controller) -> Controller {
    let mut merged: Vec<Transition> = Vec::new();
    for t in &c.transitions {
        if t.trigger.is_star() {
            merged.push(t.clone());
            continue;
        }
        match merged.iter_mut().find(|m| {
            !m.trigger.is_star() && m.from == t.from && m.effect() == t.effect()
        }) {
            Some(m) => {
                m.trigger = std::mem::replace(&mut m.trigger, Formula::Star).or(t.trigger.clone());
            }
            None => merged.push(t.clone()),
        }
    }
    Controller::new(c.states.clone(), merged, c.sensing)
}

/// `fval` atom builder used by the gadget generators.
pub fn fval(quantity: &str, rel: Rel, value: Rational) -> Formula {
    Formula::atom(Predicate::FVal {
        quantity: quantity.to_owned(),
        rel,
        value,
    })
}

/// `fgrd` atom builder.
pub fn fgrd(quantity: &str, rel: Rel, dir: Direction) -> Formula {
    Formula::atom(Predicate::FGrd {
        quantity: quantity.to_owned(),
        rel,
        dir,
    })
}

/// `enval` atom builder.
pub fn enval(square_type: &str, offset: Offset) -> Formula {
    Formula::atom(Predicate::EnVal {
        square_type: SquareType::new(square_type),
        offset,
    })
}
