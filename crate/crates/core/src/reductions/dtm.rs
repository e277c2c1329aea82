//! Deterministic single-tape Turing machines with a bounded-tape acceptance
//! oracle. The oracle fixes the exact semantics the machine-simulation
//! gadget is cross-checked against.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ReductionError;

/// Head movement of a rule.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum TapeDir {
    L,
    R,
}

/// One entry of the partial transition function: in `state`, reading `read`,
/// write `write`, move the head one cell, and switch to `next`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DtmRule {
    pub state: String,
    pub read: char,
    pub next: String,
    pub write: char,
    #[serde(rename = "move")]
    pub dir: TapeDir,
}

/// Deterministic Turing machine over a finite tape alphabet that includes
/// the blank. Serialized as JSON with fields `name`, `states`, `initial`,
/// `accept`, `alphabet` (one-character strings), `blank`, and `transitions`.
///
/// The accepting state has no outgoing rules; a run halts the moment it is
/// entered.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Dtm {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    pub accept: String,
    pub alphabet: Vec<char>,
    pub blank: char,
    pub transitions: Vec<DtmRule>,
}

impl Dtm {
    pub fn validate(&self) -> Result<(), ReductionError> {
        let bad = |msg: String| Err(ReductionError::Malformed(msg));
        if self.states.is_empty() {
            return bad("machine has no states".into());
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return bad(format!("duplicate state {s}"));
            }
        }
        for s in [&self.initial, &self.accept] {
            if !self.states.contains(s) {
                return bad(format!("state {s} not declared"));
            }
        }
        for (i, y) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(y) {
                return bad(format!("duplicate symbol {y}"));
            }
        }
        if !self.alphabet.contains(&self.blank) {
            return bad(format!("blank {} not in the alphabet", self.blank));
        }
        let mut seen = BTreeMap::new();
        for r in &self.transitions {
            for s in [&r.state, &r.next] {
                if !self.states.contains(s) {
                    return bad(format!("rule references undeclared state {s}"));
                }
            }
            for y in [r.read, r.write] {
                if !self.alphabet.contains(&y) {
                    return bad(format!("rule references undeclared symbol {y}"));
                }
            }
            if r.state == self.accept {
                return bad(format!("rule leaves the accepting state {}", self.accept));
            }
            if seen.insert((&r.state, r.read), r).is_some() {
                return bad(format!(
                    "two rules for (state {}, symbol {})",
                    r.state, r.read
                ));
            }
        }
        Ok(())
    }

    /// Transition function keyed by (state index, symbol).
    pub fn rule_map(&self) -> BTreeMap<(usize, char), (usize, char, TapeDir)> {
        let id = |s: &str| self.states.iter().position(|t| t == s).unwrap();
        self.transitions
            .iter()
            .map(|r| ((id(&r.state), r.read), (id(&r.next), r.write, r.dir)))
            .collect()
    }
}

/// Does `m`, started on `x`, accept while staying within `k` tape cells?
///
/// Frozen semantics, mirroring a machine boxed into a width-`k` strip whose
/// west end is a hard wall and whose east side is open beyond cell `k`:
///
/// - `k = 0` never accepts (the head occupies a cell from the start);
/// - the run rejects the moment the head stands outside cells `1..=k`
///   without having accepted — input cells beyond `k` are unreachable;
/// - the accepting move itself may exit the strip to the east (acceptance
///   is checked before the bound), but a move off the west end of the tape
///   rejects even when it enters the accepting state;
/// - the run rejects after `|states| * k * |alphabet|^k` steps: more steps
///   than configurations means the machine is looping.
pub fn oracle_dtm_run(m: &Dtm, x: &str, k: usize) -> Result<bool, ReductionError> {
    m.validate()?;
    for y in x.chars() {
        if !m.alphabet.contains(&y) {
            return Err(ReductionError::Malformed(format!(
                "input symbol {y} not in the machine alphabet"
            )));
        }
    }
    if k == 0 {
        return Ok(false);
    }
    let rules = m.rule_map();
    let accept = m.states.iter().position(|s| *s == m.accept).unwrap();
    let mut tape: Vec<char> = x.chars().take(k).collect();
    tape.resize(k, m.blank);
    let mut state = m.states.iter().position(|s| *s == m.initial).unwrap();
    let mut head: isize = 0;
    let budget = (m.states.len() as u128)
        .saturating_mul(k as u128)
        .saturating_mul((m.alphabet.len() as u128).saturating_pow(k as u32));
    let mut steps: u128 = 0;
    loop {
        if state == accept {
            return Ok(head >= 0);
        }
        if head < 0 || head >= k as isize {
            return Ok(false);
        }
        let Some(&(next, write, dir)) = rules.get(&(state, tape[head as usize])) else {
            return Ok(false);
        };
        tape[head as usize] = write;
        head += match dir {
            TapeDir::L => -1,
            TapeDir::R => 1,
        };
        state = next;
        steps += 1;
        if steps > budget {
            return Ok(false);
        }
    }
}

/// Three fixed validation machines over the alphabet `{0, 1, B}`.
///
/// - `scan_right` walks east over its input and accepts at the first blank;
/// - `zeros_only` accepts inputs in `0*`, halting without accepting on a
///   `1`, and its accepting move steps west (so on the empty input with the
///   head on cell 1 it falls off the west end and rejects);
/// - `bouncer` ping-pongs between two cells forever and never accepts.
pub fn sample_machines() -> Vec<Dtm> {
    let rule = |state: &str, read: char, next: &str, write: char, dir: TapeDir| DtmRule {
        state: state.into(),
        read,
        next: next.into(),
        write,
        dir,
    };
    vec![
        Dtm {
            name: "scan_right".into(),
            states: vec!["q0".into(), "qA".into()],
            initial: "q0".into(),
            accept: "qA".into(),
            alphabet: vec!['0', '1', 'B'],
            blank: 'B',
            transitions: vec![
                rule("q0", '0', "q0", '0', TapeDir::R),
                rule("q0", '1', "q0", '1', TapeDir::R),
                rule("q0", 'B', "qA", 'B', TapeDir::R),
            ],
        },
        Dtm {
            name: "zeros_only".into(),
            states: vec!["q0".into(), "qA".into()],
            initial: "q0".into(),
            accept: "qA".into(),
            alphabet: vec!['0', '1', 'B'],
            blank: 'B',
            transitions: vec![
                rule("q0", '0', "q0", '0', TapeDir::R),
                rule("q0", 'B', "qA", 'B', TapeDir::L),
            ],
        },
        Dtm {
            name: "bouncer".into(),
            states: vec!["q0".into(), "q1".into(), "qA".into()],
            initial: "q0".into(),
            accept: "qA".into(),
            alphabet: vec!['0', '1', 'B'],
            blank: 'B',
            transitions: vec![
                rule("q0", '0', "q1", '0', TapeDir::R),
                rule("q0", '1', "q1", '1', TapeDir::R),
                rule("q0", 'B', "q1", 'B', TapeDir::R),
                rule("q1", '0', "q0", '0', TapeDir::L),
                rule("q1", '1', "q0", '1', TapeDir::L),
                rule("q1", 'B', "q0", 'B', TapeDir::L),
            ],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(name: &str) -> Dtm {
        sample_machines().into_iter().find(|m| m.name == name).unwrap()
    }

    #[test]
    fn samples_validate() {
        for m in sample_machines() {
            m.validate().unwrap();
        }
    }

    #[test]
    fn scan_right_accepts_within_wide_enough_tape() {
        let m = machine("scan_right");
        assert!(oracle_dtm_run(&m, "", 1).unwrap());
        assert!(oracle_dtm_run(&m, "", 2).unwrap());
        assert!(oracle_dtm_run(&m, "01", 3).unwrap());
    }

    #[test]
    fn scan_right_rejects_when_the_head_must_leave_the_strip() {
        let m = machine("scan_right");
        assert!(!oracle_dtm_run(&m, "01", 1).unwrap());
        assert!(!oracle_dtm_run(&m, "0", 1).unwrap());
        assert!(!oracle_dtm_run(&m, "0110", 2).unwrap());
    }

    #[test]
    fn zeros_only_semantics() {
        let m = machine("zeros_only");
        // The accepting move steps off the west end: reject.
        assert!(!oracle_dtm_run(&m, "", 1).unwrap());
        assert!(oracle_dtm_run(&m, "00", 3).unwrap());
        assert!(oracle_dtm_run(&m, "0", 2).unwrap());
        // No rule for 1: halt without accepting.
        assert!(!oracle_dtm_run(&m, "01", 3).unwrap());
        assert!(!oracle_dtm_run(&m, "0", 1).unwrap());
    }

    #[test]
    fn bouncer_is_cut_off_by_the_configuration_budget() {
        let m = machine("bouncer");
        assert!(!oracle_dtm_run(&m, "", 2).unwrap());
        assert!(!oracle_dtm_run(&m, "0", 1).unwrap());
        assert!(!oracle_dtm_run(&m, "01", 4).unwrap());
    }

    #[test]
    fn zero_budget_never_accepts() {
        for m in sample_machines() {
            assert!(!oracle_dtm_run(&m, "", 0).unwrap());
        }
    }

    #[test]
    fn bad_machines_are_rejected() {
        let mut dup = machine("scan_right");
        dup.transitions.push(dup.transitions[0].clone());
        assert!(dup.validate().is_err());

        let mut from_accept = machine("scan_right");
        from_accept.transitions.push(DtmRule {
            state: "qA".into(),
            read: 'B',
            next: "qA".into(),
            write: 'B',
            dir: TapeDir::R,
        });
        assert!(from_accept.validate().is_err());

        let mut no_blank = machine("scan_right");
        no_blank.blank = '_';
        assert!(no_blank.validate().is_err());

        let m = machine("scan_right");
        assert!(oracle_dtm_run(&m, "2", 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        for m in sample_machines() {
            let text = serde_json::to_string(&m).unwrap();
            let back: Dtm = serde_json::from_str(&text).unwrap();
            assert_eq!(back, m);
        }
    }
}
