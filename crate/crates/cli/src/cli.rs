use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use solvword_core::probability::{profile_counts, quotient_monotonicity, satisfaction_profile};
use solvword_core::structure::{
    automorphism_group, is_just_nonsolvable, is_simple, maximal_subgroup_count,
    minimal_normal_subgroups,
};
use solvword_core::synthesis::{
    quotient_obstruction_check, synth_probability_word, synth_solvable_word_from_classes, Caps,
};
use solvword_core::{
    PermutationGroup, DEFAULT_EXACT_CAP, DEFAULT_ORACLE_CAP, DEFAULT_STRUCTURE_CAP,
    DEFAULT_TUPLE_CAP, DEFAULT_WORD_CAP,
};

use crate::error::{exit, CliError, CliResult};
use crate::format::{
    load_group, load_word, ProbabilityJson, ProfileCountsJson, ProfileRowJson, RatioJson,
    SynthesisJson, VerifyJson,
};
use crate::parallel;

#[derive(Parser, Debug)]
#[command(
    name = "solvword",
    version,
    about = "Word maps on finite permutation groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub limits: Limits,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Limits {
    /// Worker threads (0 = one per core); results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Largest |G|^n enumerated tuple by tuple.
    #[arg(long, global = true, default_value_t = DEFAULT_TUPLE_CAP)]
    pub tuple_cap: u64,
    /// Largest group enumerated element by element.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
    /// Largest group for automorphism and subgroup-lattice searches.
    #[arg(long, global = true, default_value_t = DEFAULT_STRUCTURE_CAP)]
    pub structure_cap: usize,
    /// Largest |G|^L for exact probability evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_EXACT_CAP)]
    pub exact_cap: u64,
    /// Longest flat word expanded from a program.
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_CAP)]
    pub word_cap: usize,
}

impl Limits {
    pub fn caps(&self) -> Caps {
        Caps {
            tuple: self.tuple_cap,
            oracle: self.oracle_cap,
            structure: self.structure_cap,
            exact: self.exact_cap,
            word: self.word_cap,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group properties.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Word synthesis.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Evaluate P(G, w) exactly or by sampling.
    Eval(EvalArgs),
    /// Exhaustive verification of a word.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Structural checks; exit code 1 when the checked property fails.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Order, solvability and related invariants.
    Info {
        group: PathBuf,
        /// Also count automorphisms and maximal subgroups (brute force).
        #[arg(long)]
        structure: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum SynthCommand {
    /// A word satisfied exactly by the tuples generating a solvable subgroup.
    Solvable {
        #[arg(long)]
        group: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// A word satisfied by exactly k selected Aut-orbits of generating tuples.
    Prob {
        #[arg(long)]
        group: PathBuf,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: usize,
        /// Number of orbits to use (default: all).
        #[arg(long)]
        orbits: Option<usize>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["exact", "mc"])))]
pub struct EvalArgs {
    #[arg(long)]
    pub group: PathBuf,
    /// Inline word, word text file, SLP JSON file or synthesis report.
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub exact: bool,
    /// Number of Monte Carlo samples.
    #[arg(long)]
    pub mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// With --exact, also tabulate satisfaction by tuple class of this length.
    #[arg(long)]
    pub profile: Option<usize>,
    #[arg(short)]
    pub o: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Check that w(t) = 1 exactly when ⟨t⟩ is solvable, over all n-tuples.
    Solvable {
        #[arg(long)]
        group: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        word: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Succeeds when no generating n-tuple satisfies w.
    QuotientObstruction {
        #[arg(long)]
        group: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        word: String,
    },
    /// Compares P(G, w) with P(G/K, w) for a normal subgroup K.
    Monotonicity {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        word: String,
    },
}

/// A JSON document to emit and whether the command's check passed.
struct Outcome {
    document: serde_json::Value,
    passed: bool,
}

fn outcome<T: Serialize>(doc: &T, passed: bool) -> Outcome {
    Outcome {
        document: serde_json::to_value(doc).expect("serializable"),
        passed,
    }
}

fn emit(doc: &serde_json::Value, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(doc).expect("serializable") + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn group_info(path: &Path, structure: bool, caps: &Caps) -> CliResult<Outcome> {
    let (name, g) = load_group(path)?;
    let small = g.order() <= caps.structure.into();
    let series: Vec<String> = g
        .derived_series()
        .iter()
        .map(|h| h.order().to_string())
        .collect();
    let mut doc = json!({
        "name": name,
        "degree": g.degree(),
        "order": g.order().to_string(),
        "generators": g.generators().iter().map(|p| p.to_cycle_string()).collect::<Vec<_>>(),
        "abelian": g.is_abelian(),
        "solvable": g.is_solvable(),
        "derived_series_orders": series,
        "perfect_core_order": g.perfect_core().order().to_string(),
        "simple": if small { Some(is_simple(&g, caps.structure)?) } else { None },
        "just_nonsolvable": if small { Some(is_just_nonsolvable(&g, caps.structure)?) } else { None },
    });
    if structure {
        let mins = if g.is_trivial() {
            Vec::new()
        } else {
            minimal_normal_subgroups(&g, caps.structure)?
        };
        doc["minimal_normal_subgroup_orders"] = json!(mins
            .iter()
            .map(|m| m.order().to_string())
            .collect::<Vec<_>>());
        doc["automorphisms"] = json!(automorphism_group(&g, caps.structure)?.len());
        doc["maximal_subgroups"] = json!(maximal_subgroup_count(&g, caps.structure)?.count());
    }
    Ok(Outcome {
        document: doc,
        passed: true,
    })
}

fn execute(cli: &Cli) -> CliResult<(Outcome, Option<PathBuf>)> {
    let caps = cli.limits.caps();
    Ok(match &cli.command {
        Command::Group(GroupCommand::Info { group, structure }) => {
            (group_info(group, *structure, &caps)?, None)
        }
        Command::Synth(SynthCommand::Solvable { group, n, o }) => {
            let (name, g) = load_group(group)?;
            let classes = parallel::classify(&g, *n, &caps)?;
            let r = synth_solvable_word_from_classes(&g, *n, &classes, &caps)?;
            (
                outcome(&SynthesisJson::new(&name, &r), r.verified),
                o.clone(),
            )
        }
        Command::Synth(SynthCommand::Prob {
            group,
            d,
            k,
            orbits,
            o,
        }) => {
            let (name, g) = load_group(group)?;
            let r = synth_probability_word(&g, *d, *k, *orbits, &caps)?;
            (
                outcome(&SynthesisJson::new(&name, &r), r.verified),
                o.clone(),
            )
        }
        Command::Eval(args) => (eval(args, &caps)?, args.o.clone()),
        Command::Verify(VerifyCommand::Solvable { group, n, word, o }) => {
            let (name, g) = load_group(group)?;
            let w = load_word(word)?;
            let r = parallel::verify_solvable(&g, *n, &w, &caps)?;
            (
                outcome(&VerifyJson::new(&name, *n, &r), r.passed),
                o.clone(),
            )
        }
        Command::Check(CheckCommand::QuotientObstruction { group, n, word }) => {
            let (name, g) = load_group(group)?;
            let w = load_word(word)?;
            let obstructed = quotient_obstruction_check(&g, *n, &w, &caps)?;
            let doc = json!({ "group": name, "n": n, "obstructed": obstructed });
            (
                Outcome {
                    document: doc,
                    passed: obstructed,
                },
                None,
            )
        }
        Command::Check(CheckCommand::Monotonicity {
            group,
            kernel,
            word,
        }) => {
            let (name, g) = load_group(group)?;
            let (_, k) = load_group(kernel)?;
            let w = load_word(word)?;
            let r = quotient_monotonicity(&g, &k, &w, caps.exact, caps.word)?;
            let doc = json!({
                "group": name,
                "kernel_order": k.order().to_string(),
                "p_group": RatioJson::from(&r.p_group),
                "p_quotient": RatioJson::from(&r.p_quotient),
                "lifted": RatioJson::from(&r.lifted),
                "inequality_holds": r.inequality_holds,
                "identity_holds": r.identity_holds,
            });
            (
                Outcome {
                    document: doc,
                    passed: r.inequality_holds && r.identity_holds,
                },
                None,
            )
        }
    })
}

fn eval(args: &EvalArgs, caps: &Caps) -> CliResult<Outcome> {
    let (_, g) = load_group(&args.group)?;
    let w = load_word(&args.word)?;
    let result = match args.mc {
        Some(0) => return Err(CliError::Input("--mc needs at least one sample".into())),
        Some(samples) => parallel::monte_carlo(&g, &w, samples, args.seed, caps),
        None => parallel::exact(&g, &w, caps)?,
    };
    let mut doc = ProbabilityJson::from(&result);
    if let Some(n) = args.profile {
        let rows = satisfaction_profile(&g, &w, n, caps.tuple, caps.oracle)?;
        let c = profile_counts(&rows);
        doc.profile_counts = Some(ProfileCountsJson {
            solvable_satisfying: c.solvable_satisfying,
            nonsolvable_satisfying: c.nonsolvable_satisfying,
            total: c.total,
        });
        doc.profile = Some(
            rows.iter()
                .map(|r| ProfileRowJson {
                    representative: r
                        .representative
                        .iter()
                        .map(|p| p.to_cycle_string())
                        .collect(),
                    members: r.members,
                    subgroup_order: r.subgroup_order.to_string(),
                    solvable: r.solvable,
                    satisfied: r.satisfied,
                })
                .collect(),
        );
    }
    Ok(outcome(&doc, true))
}

fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Input(format!("cannot start worker threads: {e}")))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return exit::OK;
        }
        Err(e) => {
            let err = CliError::Input(
                e.to_string()
                    .lines()
                    .next()
                    .unwrap_or("bad arguments")
                    .to_string(),
            );
            eprintln!("{}", err.to_json_line());
            return exit::INPUT;
        }
    };
    let result = pool(cli.limits.jobs).and_then(|p| p.install(|| execute(&cli)));
    match result.and_then(|(o, path)| emit(&o.document, path.as_deref()).map(|_| o.passed)) {
        Ok(true) => exit::OK,
        Ok(false) => exit::FAILED,
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            e.exit_code()
        }
    }
}

/// Parses a group file's contents, for callers holding the JSON in memory.
pub fn group_from_json(text: &str) -> CliResult<PermutationGroup> {
    let file: crate::format::GroupFile =
        serde_json::from_str(text).map_err(|source| CliError::Json {
            path: PathBuf::from("<inline>"),
            source,
        })?;
    file.to_group()
}
