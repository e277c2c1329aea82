//! Bounded-tape machine acceptance as a verification instance: a one-row
//! strip encodes the tape, a single robot replays the machine's rules as
//! east/west moves, and the structure can only be built after the accepting
//! state walks the robot to the strip's east end.

use crate::controller::{fval, Controller, Formula, Modification, Rel, Sensing, Transition};
use crate::env::{Environment, EnvironmentSf, FieldSpec, Structure, FQ_X};
use crate::grid::{GridCoord, Move};
use crate::rational::Rational;
use crate::solve::{ProblemInstance, VerifyInstance};

use super::dtm::{Dtm, TapeDir};
use super::{GadgetBundle, GadgetProvenance, ReductionError};

const FINISH_STATE: &str = "q_F1";
const FQ_FINISH: &str = "fq_F1";

fn symbol_quantity(y: char) -> String {
    format!("fq_{y}")
}

/// Encodes "does `m` accept `x` within `k` tape cells?" as a verification
/// instance whose answer equals [`super::oracle_dtm_run`].
///
/// The strip is `max(k, |x|) + 2` cells wide. Cells `1..=min(k, |x|)` carry
/// the input symbols, cells `|x|+1..=k` (when `k > |x|`) carry the blank,
/// and the last cell carries the finish marker the robot converts into the
/// structure. Every cell in between is left empty: a robot that steps onto
/// one while still replaying machine rules reads no symbol, has no enabled
/// transition, and idles forever — exactly the runs the oracle rejects for
/// leaving the allowed tape region.
pub fn gadget_cdtmc_to_verify_sf(
    m: &Dtm,
    x: &str,
    k: usize,
) -> Result<GadgetBundle, ReductionError> {
    m.validate()?;
    for y in x.chars() {
        if !m.alphabet.contains(&y) {
            return Err(ReductionError::Malformed(format!(
                "input symbol {y} not in the machine alphabet"
            )));
        }
    }
    if m.states.iter().any(|s| s == FINISH_STATE) {
        return Err(ReductionError::Unsupported(format!(
            "machine state name {FINISH_STATE} is reserved by the encoding"
        )));
    }
    if m.alphabet.contains(&'X') {
        return Err(ReductionError::Unsupported(
            "symbol X is reserved by the encoding".into(),
        ));
    }

    let input: Vec<char> = x.chars().collect();
    let width = (k.max(input.len()) + 2) as u32;

    let one = Rational::ONE;
    let spec_for = |y: char| FieldSpec::point(symbol_quantity(y), one, one);
    let finish_spec = FieldSpec::point(FQ_FINISH, one, one);

    let mut field_set: Vec<FieldSpec> = m.alphabet.iter().map(|&y| spec_for(y)).collect();
    field_set.push(finish_spec.clone());
    let mut env = EnvironmentSf::empty(width, 1, field_set);
    for (i, &y) in input.iter().take(k).enumerate() {
        env.add_point_field(GridCoord::new(i as u32 + 1, 1), spec_for(y))?;
    }
    for cell in input.len() + 1..=k {
        env.add_point_field(GridCoord::new(cell as u32, 1), spec_for(m.blank))?;
    }
    env.add_point_field(GridCoord::new(width, 1), finish_spec)?;

    let mut states = m.states.clone();
    states.push(FINISH_STATE.into());
    let finish = states.len() - 1;
    let accept = states.iter().position(|s| *s == m.accept).unwrap();
    let state_id = |name: &str| states.iter().position(|s| s == name).unwrap();

    let mut transitions: Vec<Transition> = m
        .transitions
        .iter()
        .map(|r| {
            Transition::new(
                state_id(&r.state),
                fval(&symbol_quantity(r.read), Rel::Ge, one),
                Modification::FMod { spec: spec_for(r.write), offset: (0, 0) },
                match r.dir {
                    TapeDir::R => Move::GoEast,
                    TapeDir::L => Move::GoWest,
                },
                state_id(&r.next),
            )
        })
        .collect();
    transitions.extend([
        Transition::new(accept, Formula::Star, Modification::None, Move::GoEast, finish),
        Transition::new(
            finish,
            fval(FQ_FINISH, Rel::Eq, Rational::ZERO),
            Modification::None,
            Move::GoEast,
            finish,
        ),
        Transition::new(
            finish,
            fval(FQ_FINISH, Rel::Ge, one),
            Modification::FMod { spec: FieldSpec::s_x(), offset: (0, 0) },
            Move::Stay,
            finish,
        ),
        Transition::new(
            finish,
            fval(FQ_X, Rel::Ge, one),
            Modification::None,
            Move::Stay,
            finish,
        ),
    ]);

    let controller = Controller::new(states, transitions, Sensing::Sf);
    controller
        .validate()
        .map_err(|e| ReductionError::Malformed(format!("generated controller: {e}")))?;

    let instance = ProblemInstance::TeamEnvVerSf(VerifyInstance {
        env: Environment::Sf(env),
        team: vec![controller],
        p_i: vec![GridCoord::new(1, 1)],
        x: Structure::single(),
        p_x: GridCoord::new(width, 1),
    });
    instance.validate()?;
    Ok(GadgetBundle {
        instance,
        provenance: GadgetProvenance::BoundedAcceptance {
            machine: m.clone(),
            input: x.into(),
            tape_budget: k,
        },
    })
}
