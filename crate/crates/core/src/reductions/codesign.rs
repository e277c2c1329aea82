//! Dominating set as a joint team-and-environment design instance.
//!
//! Reuses the environment-design gadget: the controllers that were fixed
//! there become a design library, and the designer must pick both a team
//! from that library and an environment from the same space. Success
//! requires some arrangement of the chosen team to build the structure,
//! so the single-robot shapes carry over unchanged, and the multirobot
//! shape works exactly when the checker is seated on the start corner.

use crate::solve::{ProblemInstance, TeamEnvDesInstance};

use super::domset_env::{gadget_domset_to_envdes_sf, EnvDesVariant};
use super::graph::Graph;
use super::{GadgetBundle, GadgetProvenance, ReductionError};

/// Builds the codesign instance for "does `g` have a dominating set of
/// size at most `k`?". Requires `1 <= k <= |V|`. Track-shaped spaces
/// exceed the enumerating solver's candidate cap; decide those by running
/// the library team on the candidate environments.
pub fn gadget_domset_to_codesign_sf(
    g: &Graph,
    k: usize,
    variant: EnvDesVariant,
) -> Result<GadgetBundle, ReductionError> {
    let bundle = gadget_domset_to_envdes_sf(g, k, variant)?;
    let ProblemInstance::EnvDesSf(inner) = bundle.instance else {
        unreachable!("environment-design gadget always yields an EnvDesSf instance")
    };
    let instance = ProblemInstance::TeamEnvDesLsSf(TeamEnvDesInstance {
        space: inner.space,
        t_count: inner.team.len(),
        library: inner.team,
        e_i: inner.p_i,
        x: inner.x,
        p_x: inner.p_x,
    });
    instance.validate()?;
    Ok(GadgetBundle {
        instance,
        provenance: GadgetProvenance::DominatingSet {
            graph: g.clone(),
            k,
            family: "codesign".into(),
            variant: variant.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::super::domset_env::track_candidate_env;
    use super::*;
    use crate::grid::GridCoord;
    use crate::sim::run_verify;
    use crate::env::Environment;
    use crate::solve::{solve_team_env_des_ls, DesignSolution, SolveError};

    fn p3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    fn c4() -> Graph {
        Graph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap()
    }

    fn codesign_fields(b: &GadgetBundle) -> &TeamEnvDesInstance {
        let ProblemInstance::TeamEnvDesLsSf(i) = &b.instance else {
            panic!("expected a codesign instance")
        };
        i
    }

    #[test]
    fn column_codesign_finds_team_and_environment() {
        let b = gadget_domset_to_codesign_sf(&p3(), 1, EnvDesVariant::Column).unwrap();
        let DesignSolution::FoundBoth { team, environment } =
            solve_team_env_des_ls(codesign_fields(&b)).unwrap()
        else {
            panic!("expected a team and an environment")
        };
        assert_eq!(team.len(), 1);
        let sf = environment.as_sf().unwrap();
        assert_eq!(sf.point_field_at(GridCoord::new(1, 1)).unwrap().quantity, "fq_S");
        assert_eq!(sf.point_field_at(GridCoord::new(1, 2)).unwrap().quantity, "fq_v2");
    }

    #[test]
    fn column_codesign_reports_bottom_on_the_four_cycle() {
        for variant in [EnvDesVariant::Column, EnvDesVariant::ColumnCollapsed] {
            let b = gadget_domset_to_codesign_sf(&c4(), 1, variant).unwrap();
            assert_eq!(
                solve_team_env_des_ls(codesign_fields(&b)).unwrap(),
                DesignSolution::Bottom
            );
        }
    }

    #[test]
    fn track_codesign_space_exceeds_the_cap() {
        let b = gadget_domset_to_codesign_sf(&p3(), 1, EnvDesVariant::Track).unwrap();
        assert!(matches!(
            solve_team_env_des_ls(codesign_fields(&b)),
            Err(SolveError::SearchSpaceExceeded { .. })
        ));
    }

    #[test]
    fn multirobot_wrapper_keeps_the_lap_team_shape() {
        let b = gadget_domset_to_codesign_sf(&p3(), 1, EnvDesVariant::Multirobot).unwrap();
        let i = codesign_fields(&b);
        assert_eq!(i.t_count, 4);
        assert_eq!(i.library.len(), 4);
        assert_eq!(
            i.e_i,
            [(1, 1), (3, 2), (3, 3), (3, 4)].map(|(c, r)| GridCoord::new(c, r))
        );
        assert_eq!(i.p_x, GridCoord::new(3, 2));
        let GadgetProvenance::DominatingSet { family, .. } = &b.provenance else {
            panic!("expected dominating-set provenance")
        };
        assert_eq!(family, "codesign");
    }

    #[test]
    fn library_order_decides_the_candidate_environments() {
        let b = gadget_domset_to_codesign_sf(&p3(), 1, EnvDesVariant::Multirobot).unwrap();
        let i = codesign_fields(&b);
        let run = |subset: &[usize]| {
            let env = Environment::Sf(track_candidate_env(&p3(), 1, subset).unwrap());
            run_verify(&env, &i.library, &i.e_i, &i.x, i.p_x).is_success()
        };
        assert!(run(&[2]));
        assert!(!run(&[1]));
    }

    #[test]
    fn rejects_degenerate_budgets() {
        assert!(gadget_domset_to_codesign_sf(&p3(), 0, EnvDesVariant::Column).is_err());
        assert!(gadget_domset_to_codesign_sf(&p3(), 4, EnvDesVariant::Column).is_err());
    }
}
