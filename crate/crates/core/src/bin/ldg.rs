use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use liquid_delegation::dynamics::{
    decide_conv, replay, run_dynamics, Convergence, DynamicsTrace, Mode, Outcome, Policy, TokenFunction,
    DEFAULT_MAX_STATES,
};
use liquid_delegation::exact::{optimize, solve_ex, solve_memb, Decision, Objective, Optimum, SolveError, DEFAULT_BUDGET};
use liquid_delegation::io::report::Report;
use liquid_delegation::io::{catalog, catalog_names, generate, parse_instance, serialize_instance, GeneratorKind, InstanceFile, ProfileParams};
use liquid_delegation::kernel::{build_acceptability_digraph, enumerate_kernels, enumerate_kernels_containing, equilibrium_from_kernel};
use liquid_delegation::reductions::{from_3sat4, from_list_coloring, CnfFormula, ListColoringInstance};
use liquid_delegation::tree_dp::{minphi, optimize_tree, solve_memb_tree, RootedTree, TreeError, ZeroPhi};
use liquid_delegation::{DelegationFunction, Instance, Voter};

const EXIT_NO: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Equilibria and delegation dynamics for liquid democracy on social networks.
///
/// INSTANCE arguments are file paths, or `catalog:<name>` for a built-in entry.
#[derive(Parser)]
#[command(name = "ldg", version)]
struct Cli {
    /// Node budget for exhaustive search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an equilibrium exists (ex) or one makes VOTER a guru (memb).
    Solve {
        problem: Problem,
        instance: String,
        #[arg(long, required_if_eq("problem", "memb"))]
        voter: Option<Voter>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Best equilibrium for an objective.
    Optimize {
        instance: String,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value_t = OptMethod::Auto)]
        method: OptMethod,
    },
    /// Simulate IRD/BRD, or decide whether every run converges.
    Dynamics {
        instance: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// `perm:4,3,1,2` or `seq:1,2,1,3`; defaults to the file's token, else 1..n.
        #[arg(long)]
        token: Option<String>,
        /// `all-vote`, or `file` for the file's deleg lines.
        #[arg(long)]
        start: Option<StartArg>,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        /// Explicit moves `voter:target,...` replayed instead of a policy.
        #[arg(long, conflicts_with = "token")]
        script: Option<String>,
        /// Search the state graph instead of simulating; starts from --start if given, else every state.
        #[arg(long, conflicts_with = "script")]
        decide: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Build a hardness gadget instance.
    Reduce {
        #[arg(long, value_enum)]
        from: Source,
        file: PathBuf,
    },
    /// Print a built-in instance, or list them.
    Catalog { name: Option<String> },
    /// Print a random instance.
    Generate {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = ProfileParams::default().maxa_cap)]
        maxa_cap: usize,
        #[arg(long, default_value_t = ProfileParams::default().abstainer_prob)]
        abstainer_prob: f64,
        #[arg(long, default_value_t = ProfileParams::default().edge_prob)]
        edge_prob: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    Ex,
    Memb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Kernel,
    Tree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptMethod {
    Auto,
    Brute,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Dis,
    Maxvp,
    Abst,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Dis => Objective::Dissatisfaction,
            ObjectiveArg::Maxvp => Objective::MaxVotingPower,
            ObjectiveArg::Abst => Objective::Abstention,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ird,
    Brd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StartArg {
    AllVote,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    #[value(name = "3sat4")]
    Sat4,
    #[value(name = "listcoloring")]
    ListColoring,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Tree,
    Path,
    Star,
    Complete,
    Gnp,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load(source: &str) -> Result<InstanceFile> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return Ok(catalog(name)?);
    }
    let text = std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
    parse_instance(&text).with_context(|| format!("parsing {source}"))
}

fn emit(summary: &str, mut report: Report, started: Instant) {
    report.push("time_ms", format!("{:.3}", started.elapsed().as_secs_f64() * 1e3));
    println!("{summary}");
    print!("{report}");
}

fn run(cli: Cli) -> Result<u8> {
    let started = Instant::now();
    match cli.command {
        Command::Solve { problem, instance, voter, method } => {
            let file = load(&instance)?;
            let inst = &file.instance;
            let method = resolve_method(inst, method)?;
            let (command, decision) = match problem {
                Problem::Ex => ("solve-ex", solve_ex_with(inst, method, cli.budget)?),
                Problem::Memb => {
                    let v = voter.expect("enforced by clap");
                    if v == 0 || v > inst.n() {
                        bail!("voter {v} is outside 1..={}", inst.n());
                    }
                    ("solve-memb", solve_memb_with(inst, v, method, cli.budget)?)
                }
            };
            let mut report = Report::new(command);
            report.push("method", method_name(method));
            if let Some(v) = voter.filter(|_| problem == Problem::Memb) {
                report.push("voter", v);
            }
            let (summary, code) = match &decision {
                Decision::Yes(d) => {
                    report.push("answer", "yes").push_delegation(inst, d);
                    (format!("equilibrium found: {d}"), 0)
                }
                Decision::No => {
                    report.push("answer", "no");
                    let s = match problem {
                        Problem::Ex => "no equilibrium".to_string(),
                        Problem::Memb => format!("no equilibrium makes voter {} a guru", voter.unwrap_or(0)),
                    };
                    (s, EXIT_NO)
                }
                Decision::Unknown => {
                    report.push("answer", "unknown");
                    ("search budget exhausted".to_string(), EXIT_UNKNOWN)
                }
            };
            emit(&summary, report, started);
            Ok(code)
        }
        Command::Optimize { instance, objective, method } => {
            let file = load(&instance)?;
            let inst = &file.instance;
            let objective = Objective::from(objective);
            let use_tree = match method {
                OptMethod::Auto => inst.network().is_forest(),
                OptMethod::Tree => true,
                OptMethod::Brute => false,
            };
            let optimum = if use_tree {
                let t = optimize_tree(inst, objective).context("tree method")?;
                Optimum::Optimal { value: t.value, witness: t.witness }
            } else {
                optimize(inst, objective, cli.budget)
            };
            let mut report = Report::new("optimize");
            report.push("method", if use_tree { "tree" } else { "brute" });
            report.push("objective", objective_name(objective));
            let (summary, code) = match &optimum {
                Optimum::Optimal { value, witness } => {
                    report.push("answer", "optimal").push("value", value).push_delegation(inst, witness);
                    (format!("optimal {}: {value}", objective_name(objective)), 0)
                }
                Optimum::Infeasible => {
                    report.push("answer", "infeasible");
                    ("no equilibrium".to_string(), EXIT_NO)
                }
                Optimum::Unknown => {
                    report.push("answer", "unknown");
                    ("search budget exhausted".to_string(), EXIT_UNKNOWN)
                }
            };
            emit(&summary, report, started);
            Ok(code)
        }
        Command::Dynamics { instance, mode, token, start, max_steps, script, decide, max_states } => {
            let file = load(&instance)?;
            let inst = &file.instance;
            let mode = match mode {
                ModeArg::Ird => Mode::Ird,
                ModeArg::Brd => Mode::Brd,
            };
            let start_state = |choice: StartArg| -> Result<DelegationFunction> {
                match choice {
                    StartArg::AllVote => Ok(DelegationFunction::all_vote(inst.n())),
                    StartArg::File => file.delegation.clone().context("the instance file has no deleg lines"),
                }
            };
            if decide {
                let d0 = start.map(start_state).transpose()?;
                let verdict = decide_conv(inst, d0.as_ref(), mode, max_states);
                let mut report = Report::new("dynamics-decide");
                report.push("mode", mode);
                let (summary, code) = match verdict {
                    Ok(Convergence::ConvergesAlways) => {
                        report.push("answer", "converges-always");
                        (format!("every {mode} run converges"), 0)
                    }
                    Ok(Convergence::Diverges(trace)) => {
                        report.push("answer", "diverges");
                        push_trace(&mut report, &trace);
                        report.push("script", script_text(&trace));
                        (format!("some {mode} run never converges"), EXIT_NO)
                    }
                    Err(e @ liquid_delegation::dynamics::DynamicsError::BudgetExceeded { .. }) => {
                        report.push("answer", "budget");
                        (e.to_string(), EXIT_UNKNOWN)
                    }
                    Err(e) => return Err(e.into()),
                };
                emit(&summary, report, started);
                return Ok(code);
            }
            let d0 = match start {
                Some(choice) => start_state(choice)?,
                None => file.delegation.clone().unwrap_or_else(|| DelegationFunction::all_vote(inst.n())),
            };
            let trace = match script {
                Some(text) => replay(inst, &d0, mode, &parse_script(&text)?)?,
                None => {
                    let token = match token {
                        Some(text) => parse_token(inst.n(), &text)?,
                        None => file.token.clone().unwrap_or_else(|| TokenFunction::identity(inst.n())),
                    };
                    run_dynamics(inst, &d0, &token, mode, &Policy::Default, max_steps)?
                }
            };
            let mut report = Report::new("dynamics");
            report.push("mode", mode);
            report.push("start", &trace.start);
            let (summary, code) = match &trace.outcome {
                Outcome::Converged { state, t_star } => {
                    report.push("answer", "converged");
                    push_trace(&mut report, &trace);
                    report.push_delegation(inst, state);
                    (format!("converged to {state} at t = {t_star}"), 0)
                }
                Outcome::CycleDetected { first, second, period } => {
                    report.push("answer", "cycle");
                    push_trace(&mut report, &trace);
                    (format!("cycle: d_{first} = d_{second}, period {period} steps"), EXIT_NO)
                }
                Outcome::BudgetExceeded => {
                    report.push("answer", "budget");
                    push_trace(&mut report, &trace);
                    (format!("no verdict after {} steps", trace.steps.len()), EXIT_UNKNOWN)
                }
            };
            emit(&summary, report, started);
            Ok(code)
        }
        Command::Reduce { from, file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let (comment, instance) = match from {
                Source::Sat4 => {
                    let f = CnfFormula::parse_dimacs(&text)?;
                    let r = from_3sat4(&f)?;
                    (format!("3-SAT-4 gadget: {} variables, {} clauses", f.vars(), f.clauses().len()), r.instance)
                }
                Source::ListColoring => {
                    let lc = ListColoringInstance::parse(&text)?;
                    let r = from_list_coloring(&lc)?;
                    let shared = r.triangles().len();
                    (format!("list-colouring gadget: {} vertices, {shared} triangles", lc.graph().n()), r.instance)
                }
            };
            println!("# {comment}");
            print!("{}", serialize_instance(&instance.into()));
            Ok(0)
        }
        Command::Catalog { name: None } => {
            for name in catalog_names() {
                println!("{name}");
            }
            Ok(0)
        }
        Command::Catalog { name: Some(name) } => {
            print!("{}", serialize_instance(&catalog(&name)?));
            Ok(0)
        }
        Command::Generate { kind, n, seed, maxa_cap, abstainer_prob, edge_prob } => {
            let kind = match kind {
                KindArg::Tree => GeneratorKind::Tree,
                KindArg::Path => GeneratorKind::Path,
                KindArg::Star => GeneratorKind::Star,
                KindArg::Complete => GeneratorKind::Complete,
                KindArg::Gnp => GeneratorKind::Gnp,
            };
            let params = ProfileParams { maxa_cap, abstainer_prob, edge_prob };
            let instance = generate(kind, n, seed, &params)?;
            println!("# generated {kind} n={n} seed={seed} maxa_cap={maxa_cap} abstainer_prob={abstainer_prob} edge_prob={edge_prob}");
            print!("{}", serialize_instance(&instance.into()));
            Ok(0)
        }
    }
}

fn resolve_method(inst: &Instance, method: Method) -> Result<Method> {
    let network = inst.network();
    Ok(match method {
        Method::Auto if network.is_forest() => Method::Tree,
        Method::Auto if network.is_complete() => Method::Kernel,
        Method::Auto => Method::Brute,
        Method::Kernel if !network.is_complete() => bail!("the kernel method needs a complete network"),
        Method::Tree if !network.is_forest() => bail!("the tree method needs a forest"),
        m => m,
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Brute => "brute",
        Method::Kernel => "kernel",
        Method::Tree => "tree",
    }
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Dissatisfaction => "dis",
        Objective::MaxVotingPower => "maxvp",
        Objective::Abstention => "abst",
    }
}

fn solve_ex_with(inst: &Instance, method: Method, budget: u64) -> Result<Decision> {
    Ok(match method {
        Method::Tree => {
            let tree = RootedTree::new(inst.network(), 1)?;
            Decision::Yes(minphi(inst, &tree, &ZeroPhi)?.witness)
        }
        Method::Kernel => match enumerate_kernels(&build_acceptability_digraph(inst), Some(1)).first() {
            Some(k) => Decision::Yes(equilibrium_from_kernel(inst, k)?),
            None => Decision::No,
        },
        _ => solve_ex(inst, budget),
    })
}

fn solve_memb_with(inst: &Instance, voter: Voter, method: Method, budget: u64) -> Result<Decision> {
    // abstainers never vote in an equilibrium
    Ok(match method {
        Method::Tree => match solve_memb_tree(inst, voter) {
            Err(TreeError::AbstainerQuery(_)) => Decision::No,
            other => other?,
        },
        Method::Kernel if inst.profile().is_abstainer(voter) => Decision::No,
        Method::Kernel => match enumerate_kernels_containing(&build_acceptability_digraph(inst), voter, Some(1)).first() {
            Some(k) => Decision::Yes(equilibrium_from_kernel(inst, k)?),
            None => Decision::No,
        },
        _ => match solve_memb(inst, voter, budget) {
            Err(SolveError::AbstainerQuery(_)) => Decision::No,
            other => other?,
        },
    })
}

fn parse_list(text: &str) -> Result<Vec<Voter>> {
    text.split(',')
        .map(|x| x.trim().parse::<Voter>().with_context(|| format!("bad voter {x:?}")))
        .collect()
}

fn parse_token(n: usize, text: &str) -> Result<TokenFunction> {
    if let Some(rest) = text.strip_prefix("perm:") {
        Ok(TokenFunction::permutation(n, parse_list(rest)?)?)
    } else if let Some(rest) = text.strip_prefix("seq:") {
        Ok(TokenFunction::sequence(n, parse_list(rest)?)?)
    } else {
        bail!("token must look like perm:4,3,1,2 or seq:1,2,1,3")
    }
}

fn parse_script(text: &str) -> Result<Vec<(Voter, Voter)>> {
    text.split(',')
        .map(|m| {
            let (v, j) = m.split_once(':').with_context(|| format!("bad move {m:?}, expected voter:target"))?;
            Ok((v.trim().parse()?, j.trim().parse()?))
        })
        .collect()
}

fn script_text(trace: &DynamicsTrace) -> String {
    trace.moves().iter().map(|(v, j)| format!("{v}:{j}")).collect::<Vec<_>>().join(",")
}

fn push_trace(report: &mut Report, trace: &DynamicsTrace) {
    report.push("steps", trace.steps.len());
    match &trace.outcome {
        Outcome::Converged { t_star, .. } => {
            report.push("t_star", t_star);
        }
        Outcome::CycleDetected { first, second, period } => {
            report.push("cycle_first", first).push("cycle_second", second).push("period", period);
        }
        Outcome::BudgetExceeded => {}
    }
    report.push("final", trace.final_state());
}
