//! `fsr`: run, search, generate, and draw robot-construction instances.
//!
//! Every command reads a versioned JSON instance document (see the
//! repository README for the schema) and writes a single-line JSON run
//! report to standard output. Exit codes: 0 when the run succeeded or a
//! design was found, 1 when the answer is conclusively negative (failed,
//! timed out, or no design exists), 2 for usage and validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fsr_core::env::{Environment, EnvironmentSt, SquareType, Structure};
use fsr_core::grid::GridCoord;
use fsr_core::io::{parse_instance, InstanceDocument, RunReport};
use fsr_core::reductions::{
    gadget_cdtmc_to_verify_sf, gadget_domset_to_codesign_sf, gadget_domset_to_envdes_sf,
    gadget_domset_to_teamdes_sf, Dtm, EnvDesVariant, GadgetBundle, Graph, TeamDesVariant,
};
use fsr_core::render::{render_ascii, RenderOverlay};
use fsr_core::sim::{run_verify, run_verify_all_positionings, run_verify_traced, Verdict};
use fsr_core::controller::template_instantiation_count;
use fsr_core::solve::{team_multiset_count, InstanceOutcome, ProblemInstance, DEFAULT_CANDIDATE_CAP};

#[derive(Parser)]
#[command(name = "fsr", version, about = "Finite-state robot teams building structures on grids")]
struct Cli {
    /// Assert that the run involves no randomness. Every command already
    /// is deterministic; the flag exists so scripted callers can state the
    /// assumption explicitly.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the team and report whether it builds the structure.
    Verify {
        instance: PathBuf,
        /// Require every distinct arrangement of the team over the start
        /// positions to succeed, not just the listed one.
        #[arg(long)]
        all_positionings: bool,
    },
    /// Search a design space; prints the witness inside the report.
    Design {
        #[command(subcommand)]
        target: DesignTarget,
    },
    /// Generate a hardness-reduction instance bundled with its source
    /// problem, printed as JSON.
    Gadget {
        #[command(subcommand)]
        source: GadgetSource,
    },
    /// Draw the instance's grid as text with a legend.
    Render { instance: PathBuf },
    /// Verify while recording states and positions after every step; the
    /// trace is written to --out when the run succeeds.
    Trace {
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum DesignTarget {
    /// Controller design: instantiate a transition-template library.
    Cont(DesignArgs),
    /// Team design: pick a team from a controller library.
    Team(DesignArgs),
    /// Environment design: pick placements from an environment space.
    Env(DesignArgs),
    /// Joint team and environment design.
    Codesign(DesignArgs),
}

#[derive(Args)]
struct DesignArgs {
    instance: PathBuf,
    /// Refuse searches larger than this many candidates
    /// (default 1000000).
    #[arg(long)]
    max_candidates: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GadgetFamily {
    /// Team design over a patrol-ring arena.
    Teamdes,
    /// Environment design over a column or track space.
    Envdes,
    /// Joint design reusing the environment-design shapes.
    Codesign,
}

#[derive(Subcommand)]
enum GadgetSource {
    /// Dominating set: graph file with `|V|` on the first line and one
    /// `u v` edge per following line (1-based).
    Domset {
        graph: PathBuf,
        /// Dominating-set size budget.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        family: GadgetFamily,
        /// teamdes: base, collapsed, reduced-fields,
        /// reduced-fields-collapsed; envdes/codesign: column,
        /// column-collapsed, track, track-collapsed, multirobot.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Bounded-tape Turing machine acceptance: machine as JSON (fields
    /// name, states, initial, accept, alphabet, blank, transitions).
    Cdtmc {
        tm: PathBuf,
        /// Input word over the machine's alphabet; may be empty.
        input: String,
        /// Tape budget in cells.
        #[arg(long)]
        k: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify {
            instance,
            all_positionings,
        } => cmd_verify(&instance, all_positionings),
        Command::Design { target } => cmd_design(target),
        Command::Gadget { source } => cmd_gadget(source),
        Command::Render { instance } => cmd_render(&instance),
        Command::Trace { instance, out } => cmd_trace(&instance, &out),
    }
}

/// Accepts any of the three JSON shapes the toolchain produces: a full
/// instance document, a gadget bundle (the embedded instance is pulled
/// out), or a bare tagged instance (wrapped in a fresh document).
fn load_document(path: &Path) -> Result<InstanceDocument> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let instance_value = if value.get("schema").is_some() {
        return parse_instance(&text).with_context(|| format!("parsing {}", path.display()));
    } else if value.get("provenance").is_some() && value.get("instance").is_some() {
        value["instance"].clone()
    } else if value.get("problem").is_some() {
        value
    } else {
        bail!(
            "{}: expected an instance document (schema/instance/bounds), a gadget \
             bundle, or a bare instance with a \"problem\" tag",
            path.display()
        );
    };
    let instance: ProblemInstance = serde_json::from_value(instance_value)
        .with_context(|| format!("parsing {}", path.display()))?;
    let doc = InstanceDocument::new(instance);
    doc.validate()
        .with_context(|| format!("validating {}", path.display()))?;
    Ok(doc)
}

fn report_and_exit_code(report: &RunReport) -> Result<u8> {
    println!("{}", report.to_json_line());
    Ok(report.verdict.exit_code() as u8)
}

fn cmd_verify(path: &Path, all_positionings: bool) -> Result<u8> {
    let doc = load_document(path)?;
    let (ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i)) = &doc.instance
    else {
        bail!("`verify` needs a team_env_ver_st or team_env_ver_sf instance");
    };
    let started = Instant::now();
    let verdict = if all_positionings {
        run_verify_all_positionings(&i.env, &i.team, &i.p_i, &i.x, i.p_x)
    } else {
        run_verify(&i.env, &i.team, &i.p_i, &i.x, i.p_x)
    };
    let report = RunReport::from_verdict(&verdict, wall_ms(started));
    report_and_exit_code(&report)
}

fn cmd_design(target: DesignTarget) -> Result<u8> {
    let (args, expected, names) = match &target {
        DesignTarget::Cont(a) => (a, "cont", "cont_des_ls_st or cont_des_ls_sf"),
        DesignTarget::Team(a) => (a, "team", "team_des_ls_st or team_des_ls_sf"),
        DesignTarget::Env(a) => (a, "env", "env_des_st or env_des_sf"),
        DesignTarget::Codesign(a) => (a, "codesign", "team_env_des_ls_st or team_env_des_ls_sf"),
    };
    let doc = load_document(&args.instance)?;
    let matches_target = match &doc.instance {
        ProblemInstance::ContDesLsSt(_) | ProblemInstance::ContDesLsSf(_) => expected == "cont",
        ProblemInstance::TeamDesLsSt(_) | ProblemInstance::TeamDesLsSf(_) => expected == "team",
        ProblemInstance::EnvDesSt(_) | ProblemInstance::EnvDesSf(_) => expected == "env",
        ProblemInstance::TeamEnvDesLsSt(_) | ProblemInstance::TeamEnvDesLsSf(_) => {
            expected == "codesign"
        }
        ProblemInstance::TeamEnvVerSt(_) | ProblemInstance::TeamEnvVerSf(_) => false,
    };
    if !matches_target {
        bail!("`design {expected}` needs a {names} instance");
    }
    let cap = args.max_candidates.unwrap_or(DEFAULT_CANDIDATE_CAP);
    // Controller and team searches are uncapped in the library (their
    // spaces are the fixed-parameter-bounded ones); an explicit cap from
    // the command line is still honored.
    if args.max_candidates.is_some() {
        let candidates = match &doc.instance {
            ProblemInstance::ContDesLsSt(i) | ProblemInstance::ContDesLsSf(i) => {
                Some(template_instantiation_count(i.library.len(), i.q_max, i.d))
            }
            ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => {
                Some(team_multiset_count(i.library.len(), i.t_count))
            }
            _ => None,
        };
        if let Some(candidates) = candidates {
            if candidates > cap as u128 {
                bail!("search space of {candidates} candidates exceeds the cap of {cap}");
            }
        }
    }
    let started = Instant::now();
    let outcome = doc.instance.solve(cap)?;
    debug_assert!(matches!(outcome, InstanceOutcome::Design(_)));
    let report = RunReport::from_outcome(&outcome, wall_ms(started));
    report_and_exit_code(&report)
}

fn cmd_gadget(source: GadgetSource) -> Result<u8> {
    let bundle = match source {
        GadgetSource::Domset {
            graph,
            k,
            family,
            variant,
        } => {
            let text = fs::read_to_string(&graph)
                .with_context(|| format!("reading {}", graph.display()))?;
            let g = Graph::parse(&text)?;
            match family {
                GadgetFamily::Teamdes => {
                    let v: TeamDesVariant = variant.as_deref().unwrap_or("base").parse()?;
                    gadget_domset_to_teamdes_sf(&g, k, v)?
                }
                GadgetFamily::Envdes => {
                    let v: EnvDesVariant = variant.as_deref().unwrap_or("column").parse()?;
                    gadget_domset_to_envdes_sf(&g, k, v)?
                }
                GadgetFamily::Codesign => {
                    let v: EnvDesVariant = variant.as_deref().unwrap_or("column").parse()?;
                    gadget_domset_to_codesign_sf(&g, k, v)?
                }
            }
        }
        GadgetSource::Cdtmc { tm, input, k } => {
            let text =
                fs::read_to_string(&tm).with_context(|| format!("reading {}", tm.display()))?;
            let machine: Dtm = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", tm.display()))?;
            gadget_cdtmc_to_verify_sf(&machine, &input, k)?
        }
    };
    println!("{}", bundle_json(&bundle));
    Ok(0)
}

/// Bundle JSON in the same canonical style as instance documents: sorted
/// keys, pretty-printed.
fn bundle_json(bundle: &GadgetBundle) -> String {
    let value = serde_json::to_value(bundle).expect("bundles always serialize");
    serde_json::to_string_pretty(&value).expect("values always print")
}

fn structure_marks(x: &Structure, p_x: GridCoord) -> Vec<GridCoord> {
    x.translated(p_x).flatten().collect()
}

/// Blank square-type canvas used to draw design spaces, which have
/// dimensions but no placements yet.
fn blank_canvas(width: u32, height: u32) -> Environment {
    Environment::St(EnvironmentSt::filled(
        width,
        height,
        SquareType::new("e_B"),
        vec![],
    ))
}

fn cmd_render(path: &Path) -> Result<u8> {
    let doc = load_document(path)?;
    let (env, robots, structure) = match &doc.instance {
        ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i) => {
            (i.env.clone(), i.p_i.clone(), structure_marks(&i.x, i.p_x))
        }
        ProblemInstance::ContDesLsSt(i) | ProblemInstance::ContDesLsSf(i) => {
            (i.env.clone(), i.p_i.clone(), structure_marks(&i.x, i.p_x))
        }
        ProblemInstance::TeamDesLsSt(i) | ProblemInstance::TeamDesLsSf(i) => {
            (i.env.clone(), i.e_i.clone(), structure_marks(&i.x, i.p_x))
        }
        ProblemInstance::EnvDesSt(i) | ProblemInstance::EnvDesSf(i) => (
            blank_canvas(i.space.width(), i.space.height()),
            i.p_i.clone(),
            structure_marks(&i.x, i.p_x),
        ),
        ProblemInstance::TeamEnvDesLsSt(i) | ProblemInstance::TeamEnvDesLsSf(i) => (
            blank_canvas(i.space.width(), i.space.height()),
            i.e_i.clone(),
            structure_marks(&i.x, i.p_x),
        ),
    };
    let overlay = RenderOverlay { robots, structure };
    print!("{}", render_ascii(&env, &overlay)?);
    Ok(0)
}

fn cmd_trace(path: &Path, out: &Path) -> Result<u8> {
    let doc = load_document(path)?;
    let (ProblemInstance::TeamEnvVerSt(i) | ProblemInstance::TeamEnvVerSf(i)) = &doc.instance
    else {
        bail!("`trace` needs a team_env_ver_st or team_env_ver_sf instance");
    };
    let started = Instant::now();
    let verdict = run_verify_traced(&i.env, &i.team, &i.p_i, &i.x, i.p_x);
    let mut report = RunReport::from_verdict(&verdict, wall_ms(started));
    if let Verdict::Success { trace: Some(trace), .. } = &verdict {
        let text = serde_json::to_string_pretty(trace).expect("traces always serialize");
        fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
        report.trace_path = Some(out.display().to_string());
    }
    report_and_exit_code(&report)
}

fn wall_ms(started: Instant) -> u64 {
    u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX)
}
